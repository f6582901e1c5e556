//! Timing and size statistics over fresh random instances.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix_sig::{keygen, sign, verify};
use crate::pke::{decrypt, encrypt, pke_keygen};
use crate::sampling::RngStream;
use crate::scrap::{scrap_keygen, scrap_sign, scrap_verify};

use super::document::{serialize, Artifact};
use super::presets::ParamSet;
use super::size::{size_metric, SizeReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchScheme {
    Matrix,
    Scrap,
    Pke,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub samples: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn from_samples(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let mut sorted = xs.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Some(Stats {
            samples: n,
            mean: sorted.iter().sum::<f64>() / n as f64,
            median,
            min: sorted[0],
            max: sorted[n - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeStats {
    /// Bytes under the size metric.
    pub metric_bytes: Stats,
    pub serialized_bytes: Stats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub scheme: BenchScheme,
    pub params: ParamSet,
    pub trials: usize,
    /// Wall time in seconds per operation.
    pub seconds: BTreeMap<String, Stats>,
    pub sizes: BTreeMap<String, SizeStats>,
    /// Published reference figures, for side-by-side display.
    pub reference: BTreeMap<String, String>,
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{:?} benchmark, {} trials\n", self.scheme, self.trials);
        for (op, s) in &self.seconds {
            out.push_str(&format!(
                "  {op:<10} mean {:.4}s  median {:.4}s  min {:.4}s  max {:.4}s\n",
                s.mean, s.median, s.min, s.max
            ));
        }
        for (what, s) in &self.sizes {
            out.push_str(&format!(
                "  {what:<10} metric mean {:.0} B (median {:.0})  serialized mean {:.0} B\n",
                s.metric_bytes.mean, s.metric_bytes.median, s.serialized_bytes.mean
            ));
        }
        for (k, v) in &self.reference {
            out.push_str(&format!("  published {k}: {v}\n"));
        }
        out
    }
}

#[derive(Default)]
struct Collector {
    seconds: BTreeMap<String, Vec<f64>>,
    metric: BTreeMap<String, Vec<f64>>,
    serialized: BTreeMap<String, Vec<f64>>,
}

impl Collector {
    fn time<T>(&mut self, op: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f()?;
        self.seconds
            .entry(op.into())
            .or_default()
            .push(start.elapsed().as_secs_f64());
        Ok(out)
    }

    fn size(&mut self, what: &str, r: SizeReport, a: Artifact) {
        self.metric.entry(what.into()).or_default().push(r.bytes as f64);
        self.serialized
            .entry(what.into())
            .or_default()
            .push(serialize(&a).len() as f64);
    }
}

fn stats_map(m: BTreeMap<String, Vec<f64>>) -> BTreeMap<String, Stats> {
    m.into_iter()
        .map(|(k, v)| (k, Stats::from_samples(&v).expect("at least one trial")))
        .collect()
}

/// Runs `trials` independent key generations, each followed by one
/// sign/verify (or encrypt/decrypt) of a fresh message.
pub fn bench(scheme: BenchScheme, params: ParamSet, trials: usize, seed: &[u8]) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let mut c = Collector::default();
    let mut reference = BTreeMap::new();
    for i in 0..trials {
        let rng = RngStream::new(seed, &format!("bench-{i}"));
        let msg = format!("bench message {i}").into_bytes();
        match scheme {
            BenchScheme::Matrix => {
                let p = params.matrix()?;
                let (pk, sk) = c.time("keygen", || keygen(&rng, &p))?;
                let sig = c.time("sign", || sign(&sk, &msg))?;
                let v = c.time("verify", || verify(&pk, &msg, &sig))?;
                if !v.is_accept() {
                    return Err(Error::domain(format!("trial {i}: signature rejected")));
                }
                c.size("public", size_metric(&pk), Artifact::MatrixPublic(pk));
                c.size("private", size_metric(&sk), Artifact::MatrixPrivate(sk));
                c.size("signature", size_metric(&sig), Artifact::MatrixSignature(sig));
            }
            BenchScheme::Scrap => {
                let p = params.scrap()?;
                let (pk, sk) = c.time("keygen", || scrap_keygen(&rng, &p))?;
                let sig = c.time("sign", || scrap_sign(&sk, &pk, &msg))?;
                let v = c.time("verify", || scrap_verify(&pk, &msg, &sig))?;
                if !v.is_accept() {
                    return Err(Error::domain(format!("trial {i}: signature rejected")));
                }
                c.size("public", size_metric(&pk), Artifact::ScrapPublic(pk));
                c.size("private", size_metric(&sk), Artifact::ScrapPrivate(sk));
                c.size("signature", size_metric(&sig), Artifact::ScrapSignature(sig));
            }
            BenchScheme::Pke => {
                let p = params.matrix()?;
                let pair = c.time("keygen", || pke_keygen(&rng, &p))?;
                let ct = c.time("encrypt", || encrypt(&pair.public, &msg))?;
                let back = c.time("decrypt", || decrypt(&pair.private, &ct))?;
                if back != msg {
                    return Err(Error::domain(format!("trial {i}: decryption mismatch")));
                }
                c.size("public", size_metric(&pair.public), Artifact::PkePublic(pair.public));
                c.size("private", size_metric(&pair.private), Artifact::PkePrivate(pair.private));
                c.size("ciphertext", size_metric(&ct), Artifact::Ciphertext(ct));
            }
        }
    }
    if scheme == BenchScheme::Matrix {
        reference.insert("verify".into(), "about 0.2 s on average".into());
        reference.insert("public".into(), "about 2,000 bytes".into());
        reference.insert("private".into(), "about 2,000 bytes".into());
        reference.insert("signature".into(), "about 4,200 bytes on average".into());
    }
    let sizes = c
        .metric
        .keys()
        .map(|k| {
            (
                k.clone(),
                SizeStats {
                    metric_bytes: Stats::from_samples(&c.metric[k]).expect("nonempty"),
                    serialized_bytes: Stats::from_samples(&c.serialized[k]).expect("nonempty"),
                },
            )
        })
        .collect();
    Ok(BenchReport {
        scheme,
        params,
        trials,
        seconds: stats_map(c.seconds),
        sizes,
        reference,
    })
}
