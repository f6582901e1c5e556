use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polysig::cryptanalysis::{
    linearization_attack, matrix_estimate, scrap_estimate, span_forge, ForgeOutcome,
    LinearizationOutcome, DEFAULT_UNKNOWN_LIMIT,
};
use polysig::io::{bench, deserialize, serialize, Artifact, BenchScheme, ParamSet, Preset};
use polysig::matrix_sig::{self, keygen, verify, verify_numeric, Verdict};
use polysig::pke::{decrypt, encrypt, pke_keygen};
use polysig::scrap::{scrap_keygen, scrap_sign, scrap_verify};
use polysig::RngStream;

/// Signatures and encryption over sparse multivariate polynomials
#[derive(Parser)]
#[command(name = "polysig", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Matrix,
    Scrap,
    Pke,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair, written to <out>.pub and <out>.key
    Keygen {
        #[arg(long, value_enum)]
        scheme: Scheme,
        /// Preset name (paper-matrix, impl-matrix, paper-scrap) or a JSON file
        #[arg(long, default_value = "impl-matrix")]
        params: String,
        /// Hex seed; fresh entropy when omitted
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sign a message
    Sign {
        /// Private key
        #[arg(long)]
        key: PathBuf,
        /// Public key; required for scrap keys
        #[arg(long)]
        public: Option<PathBuf>,
        /// Message file, or - for stdin
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a signature; exits 0 on accept, 1 on reject, 2 on error
    Verify {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        message: String,
        #[arg(long)]
        signature: PathBuf,
        /// Check at random points instead of symbolically (matrix keys)
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 32)]
        reps: usize,
        /// Hex seed for the random points
        #[arg(long)]
        seed: Option<String>,
    },
    /// Encrypt with a public encryption key
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt with a private encryption key
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
        /// Output file, or - for stdout
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Run an attack against a matrix key
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Print exact search-space counts next to the published figures
    Estimate {
        #[arg(long, default_value = "paper-matrix")]
        params: String,
        #[arg(long)]
        json: bool,
    },
    /// Time key generation, signing and verification
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum AttackCommand {
    /// Forge by combining oracle signatures whose hashes span the target's
    Forge {
        /// Public key under attack
        #[arg(long)]
        key: PathBuf,
        /// Private key, used only to answer signing queries
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Message to forge a signature for
        #[arg(long, default_value = "forged message")]
        target: String,
        /// Write the forged signature here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve X * M = I with entries of X up to a given degree
    Linearize {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = DEFAULT_UNKNOWN_LIMIT)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value = "00")]
    seed: String,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(spec: &str) -> Result<Vec<u8>> {
    if spec == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(spec).with_context(|| format!("reading {spec}"))
    }
}

fn load(path: &Path) -> Result<Artifact> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    deserialize(&text).with_context(|| format!("parsing {}", path.display()))
}

fn save(path: &Path, a: &Artifact) -> Result<()> {
    fs::write(path, serialize(a)).with_context(|| format!("writing {}", path.display()))
}

fn params_arg(spec: &str) -> Result<ParamSet> {
    if spec.parse::<Preset>().is_ok() {
        return Ok(ParamSet::parse(spec)?);
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading parameters {spec}"))?;
    Ok(ParamSet::parse(&text)?)
}

fn seed_stream(seed: Option<&str>, label: &str) -> Result<RngStream> {
    Ok(match seed {
        Some(hex_seed) => RngStream::new(&hex::decode(hex_seed).context("seed must be hex")?, label),
        None => RngStream::from_entropy(label),
    })
}

fn with_suffix(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn verdict_code(v: &Verdict) -> ExitCode {
    match v {
        Verdict::Accept => {
            println!("accept");
            ExitCode::SUCCESS
        }
        Verdict::Reject(reason) => {
            println!("reject: {reason:?}");
            ExitCode::from(1)
        }
    }
}

const PKE_WARNING: &str =
    "warning: this encryption is deterministic and has no security analysis; do not protect real data with it";

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Keygen { scheme, params, seed, out } => {
            let params = params_arg(&params)?;
            let rng = seed_stream(seed.as_deref(), "keygen")?;
            let (public, private) = match scheme {
                Scheme::Matrix => {
                    let (pk, sk) = keygen(&rng, &params.matrix()?)?;
                    (Artifact::MatrixPublic(pk), Artifact::MatrixPrivate(sk))
                }
                Scheme::Scrap => {
                    let (pk, sk) = scrap_keygen(&rng, &params.scrap()?)?;
                    (Artifact::ScrapPublic(pk), Artifact::ScrapPrivate(sk))
                }
                Scheme::Pke => {
                    eprintln!("{PKE_WARNING}");
                    let pair = pke_keygen(&rng, &params.matrix()?)?;
                    (Artifact::PkePublic(pair.public), Artifact::PkePrivate(pair.private))
                }
            };
            let (pub_path, key_path) = (with_suffix(&out, ".pub"), with_suffix(&out, ".key"));
            save(&pub_path, &public)?;
            save(&key_path, &private)?;
            println!("wrote {} and {}", pub_path.display(), key_path.display());
        }
        Command::Sign { key, public, message, out } => {
            let m = read_input(&message)?;
            let sig = match load(&key)? {
                Artifact::MatrixPrivate(sk) => Artifact::MatrixSignature(matrix_sig::sign(&sk, &m)?),
                Artifact::ScrapPrivate(sk) => {
                    let path = public.context("scrap signing needs --public")?;
                    let Artifact::ScrapPublic(pk) = load(&path)? else {
                        bail!("{} is not a scrap public key", path.display());
                    };
                    Artifact::ScrapSignature(scrap_sign(&sk, &pk, &m)?)
                }
                other => bail!("{}/{} document cannot sign", other.scheme(), other.role()),
            };
            save(&out, &sig)?;
        }
        Command::Verify { key, message, signature, numeric, reps, seed } => {
            let m = read_input(&message)?;
            let verdict = match (load(&key)?, load(&signature)?) {
                (Artifact::MatrixPublic(pk), Artifact::MatrixSignature(sig)) => {
                    if numeric {
                        let mut rng = seed_stream(seed.as_deref(), "numeric-verify")?;
                        let out = verify_numeric(&pk, &m, &sig, &mut rng, reps)?;
                        eprintln!("{} of {} rounds rejected", out.rejecting_rounds, out.rounds);
                        out.verdict
                    } else {
                        verify(&pk, &m, &sig)?
                    }
                }
                (Artifact::ScrapPublic(pk), Artifact::ScrapSignature(sig)) => {
                    if numeric {
                        bail!("numeric verification applies to matrix keys only");
                    }
                    scrap_verify(&pk, &m, &sig)?
                }
                (k, s) => bail!(
                    "cannot verify a {}/{} document with a {}/{} key",
                    s.scheme(),
                    s.role(),
                    k.scheme(),
                    k.role()
                ),
            };
            return Ok(verdict_code(&verdict));
        }
        Command::Encrypt { key, message, out } => {
            eprintln!("{PKE_WARNING}");
            let Artifact::PkePublic(pk) = load(&key)? else {
                bail!("{} is not a public encryption key", key.display());
            };
            let c = encrypt(&pk, &read_input(&message)?)?;
            save(&out, &Artifact::Ciphertext(c))?;
        }
        Command::Decrypt { key, ciphertext, out } => {
            eprintln!("{PKE_WARNING}");
            let Artifact::PkePrivate(sk) = load(&key)? else {
                bail!("{} is not a private encryption key", key.display());
            };
            let Artifact::Ciphertext(c) = load(&ciphertext)? else {
                bail!("{} is not a ciphertext", ciphertext.display());
            };
            let m = decrypt(&sk, &c)?;
            if out == "-" {
                std::io::stdout().write_all(&m)?;
            } else {
                fs::write(&out, m).with_context(|| format!("writing {out}"))?;
            }
        }
        Command::Attack(AttackCommand::Forge { key, oracle, budget, target, out }) => {
            let Artifact::MatrixPublic(pk) = load(&key)? else {
                bail!("{} is not a matrix public key", key.display());
            };
            let Artifact::MatrixPrivate(sk) = load(&oracle)? else {
                bail!("{} is not a matrix private key", oracle.display());
            };
            match span_forge(&pk, |m| matrix_sig::sign(&sk, m), target.as_bytes(), budget)? {
                ForgeOutcome::Forged { signature, queries, rank2, rank3, .. } => {
                    let v = verify(&pk, target.as_bytes(), &signature)?;
                    println!(
                        "forged after {queries} queries (rank {rank2} mod 2, {rank3} mod 3); verify: {v:?}"
                    );
                    if let Some(out) = out {
                        save(&out, &Artifact::MatrixSignature(signature))?;
                    }
                    return Ok(if v.is_accept() { ExitCode::SUCCESS } else { ExitCode::from(1) });
                }
                ForgeOutcome::Exhausted { queries, rank2, rank3 } => {
                    println!("no forgery within {queries} queries (rank {rank2} mod 2, {rank3} mod 3)");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Attack(AttackCommand::Linearize { key, degree, limit, out }) => {
            let Artifact::MatrixPublic(pk) = load(&key)? else {
                bail!("{} is not a matrix public key", key.display());
            };
            match linearization_attack(&pk, degree, limit)? {
                LinearizationOutcome::Recovered { inverse, unknowns, equations } => {
                    println!("recovered a left inverse: {unknowns} unknowns, {equations} equations");
                    if let Some(out) = out {
                        let sk = matrix_sig::MatrixPrivateKey {
                            l: inverse,
                            params: pk.params,
                            layout: pk.layout,
                            removed: Vec::new(),
                            factors: None,
                        };
                        save(&out, &Artifact::MatrixPrivate(sk))?;
                    }
                }
                LinearizationOutcome::NoSolution { degree, unknowns, equations } => {
                    println!("no left inverse of degree <= {degree} ({unknowns} unknowns, {equations} equations)");
                    return Ok(ExitCode::from(1));
                }
                LinearizationOutcome::Refused { unknowns, limit } => {
                    println!("refused: {unknowns} unknowns exceeds the limit of {limit}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Estimate { params, json } => {
            let report = match params_arg(&params)? {
                ParamSet::Matrix(p) => matrix_estimate(&p),
                ParamSet::Scrap(p) => scrap_estimate(&p),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Bench(args) => {
            let (scheme, default) = match args.scheme {
                Scheme::Matrix => (BenchScheme::Matrix, "impl-matrix"),
                Scheme::Scrap => (BenchScheme::Scrap, "paper-scrap"),
                Scheme::Pke => (BenchScheme::Pke, "impl-matrix"),
            };
            let params = params_arg(args.params.as_deref().unwrap_or(default))?;
            let seed = hex::decode(&args.seed).context("seed must be hex")?;
            let report = bench(scheme, params, args.trials, &seed)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
