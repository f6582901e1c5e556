//! Exact counts of monomials, keys and attack sizes, with the published
//! approximations next to them.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::matrix_sig::MatrixSigParams;
use crate::sampling::DegreeMode;
use crate::scrap::ScrapParams;

/// Linear-algebra exponent used for the cost of solving the linearized
/// system.
pub const SOLVE_EXPONENT: f64 = 2.3;

/// Degree assumed for the entries of an unknown left inverse.
pub const ATTACK_DEGREE: u64 = 15;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeRange {
    Exact(u64),
    UpTo { max: u64, include_constant: bool },
}

/// Monomials in `n` variables with the given degrees.
pub fn count_monomials(n: u64, range: DegreeRange) -> BigUint {
    match range {
        DegreeRange::Exact(d) => {
            if n == 0 {
                return if d == 0 { BigUint::one() } else { BigUint::zero() };
            }
            binomial(n + d - 1, d)
        }
        DegreeRange::UpTo { max, include_constant } => {
            let all = binomial(n + max, max);
            if include_constant {
                all
            } else {
                all - 1u32
            }
        }
    }
}

/// `log2(x)`, accurate to about 1e-12 relative for any size.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("fits").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("fits");
    top.log2() + shift as f64
}

/// `count^exponent` in log2 form.
pub fn estimate_attack_cost(unknowns: &BigUint, exponent: f64) -> f64 {
    log2_big(unknowns) * exponent
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyspaceEstimate {
    /// Monomials of degree `<= b`, constant included.
    pub monomials: BigUint,
    /// `C(monomials, t) * (q-1)^t`.
    pub tsparse: BigUint,
    /// `tsparse * n`: a target variable and its added polynomial.
    pub elementary: BigUint,
    /// `tsparse^rounds`.
    pub words: BigUint,
}

pub fn estimate_keyspace(params: &ScrapParams) -> KeyspaceEstimate {
    let n = params.ring.n as u64;
    let b = match params.degree_mode {
        DegreeMode::UpTo(b) => b as u64,
        DegreeMode::UpToTwiceN => 2 * n,
    };
    let monomials = count_monomials(n, DegreeRange::UpTo { max: b, include_constant: true });
    let t = params.t as u64;
    let tsparse = binomial(monomials.to_u64().unwrap_or(u64::MAX), t)
        * BigUint::from(params.ring.q - 1).pow(t as u32);
    let elementary = &tsparse * n;
    let words = tsparse.pow(params.rounds as u32);
    KeyspaceEstimate {
        monomials,
        tsparse,
        elementary,
        words,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportLine {
    pub quantity: String,
    /// Exact decimal value, when the quantity is an integer.
    pub exact: Option<String>,
    pub log2: f64,
    pub published: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub title: String,
    pub lines: Vec<ReportLine>,
    pub notes: Vec<String>,
}

impl EstimateReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for l in &self.lines {
            let exact = l.exact.as_deref().map(|e| format!(" = {e}")).unwrap_or_default();
            let mark = if l.holds { "ok" } else { "DIFFERS" };
            out.push_str(&format!(
                "  {}{exact} (2^{:.2})\n    published: {} [{mark}]\n",
                l.quantity, l.log2, l.published
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }

    pub fn line(&self, quantity_prefix: &str) -> Option<&ReportLine> {
        self.lines.iter().find(|l| l.quantity.starts_with(quantity_prefix))
    }
}

fn exact_line(quantity: &str, v: &BigUint, published: &str, holds: bool) -> ReportLine {
    ReportLine {
        quantity: quantity.into(),
        exact: Some(v.to_string()),
        log2: log2_big(v),
        published: published.into(),
        holds,
    }
}

/// Attack sizes against the matrix scheme, for a left inverse of degree
/// [`ATTACK_DEGREE`] over `n` variables.
pub fn matrix_estimate(params: &MatrixSigParams) -> EstimateReport {
    let n = params.ring.n as u64;
    let per_entry = count_monomials(n, DegreeRange::Exact(ATTACK_DEGREE));
    let unknowns = &per_entry * ATTACK_DEGREE;
    let l_unknowns = log2_big(&unknowns);
    let paper_cost = 55.0 * SOLVE_EXPONENT;
    let exact_cost = estimate_attack_cost(&unknowns, SOLVE_EXPONENT);
    let signatures = per_entry.clone();
    let seconds = &signatures / 1000u32;
    let years = seconds / (365u64 * 24 * 3600);
    let years_f = years.to_f64().unwrap_or(f64::INFINITY);

    EstimateReport {
        title: format!(
            "matrix scheme, n={n}, k={}, l={}, inverse entries of degree {ATTACK_DEGREE}",
            params.k, params.l
        ),
        lines: vec![
            exact_line(
                "monomials of degree 15",
                &per_entry,
                "C(78,15), about 2^52",
                (log2_big(&per_entry) - 52.0).abs() <= 1.0,
            ),
            exact_line(
                "linearization unknowns (monomials x 15)",
                &unknowns,
                "more than 2^55",
                l_unknowns > 55.0,
            ),
            ReportLine {
                quantity: "solve cost (2^55)^2.3".into(),
                exact: None,
                log2: paper_cost,
                published: "about 2^126".into(),
                holds: (paper_cost - 126.0).abs() <= 1.0,
            },
            ReportLine {
                quantity: "solve cost from exact unknowns, ^2.3".into(),
                exact: None,
                log2: exact_cost,
                published: "at least 2^126".into(),
                holds: exact_cost >= 126.0,
            },
            exact_line(
                "signatures needed for a span forgery",
                &signatures,
                "at least 2^52",
                (log2_big(&signatures) - 52.0).abs() <= 1.0,
            ),
            ReportLine {
                quantity: "years to collect them at 1000 signatures/s".into(),
                exact: Some(years.to_string()),
                log2: years_f.log2(),
                published: "more than 50000 years".into(),
                holds: years_f > 50_000.0,
            },
        ],
        notes: vec![
            "a span forgery only needs the collected hash vectors to span the target's; \
             the count above is the dimension of the coordinate space"
                .into(),
        ],
    }
}

/// Key-space sizes for the scrap scheme.
pub fn scrap_estimate(params: &ScrapParams) -> EstimateReport {
    let n = params.ring.n as u64;
    let ks = estimate_keyspace(params);
    let nonconstant = &ks.monomials - 1u32;
    let published_terms = binomial(n + 2, 3) + binomial(n + 1, 2) + binomial(n - 1, 1);
    let paper_tsparse = binomial(6543, params.t as u64)
        * BigUint::from(params.ring.q - 1).pow(params.t as u32);
    let words_paper = BigUint::one() << (42 * params.rounds);
    let rounds = params.rounds as f64;

    EstimateReport {
        title: format!(
            "scrap scheme, q={}, n={n}, t={}, {} rounds",
            params.ring.q, params.t, params.rounds
        ),
        lines: vec![
            exact_line(
                "nonconstant monomials of degree <= 3",
                &nonconstant,
                "C(34,3)+C(33,2)+C(31,1) = 6543",
                nonconstant == BigUint::from(6543u32),
            ),
            exact_line(
                "published sum C(n+2,3)+C(n+1,2)+C(n-1,1)",
                &published_terms,
                "6543",
                published_terms == BigUint::from(6543u32),
            ),
            exact_line(
                "t-sparse polynomials (constant allowed)",
                &ks.tsparse,
                "more than 2^42",
                log2_big(&ks.tsparse) > 42.0,
            ),
            exact_line(
                "t-sparse polynomials over 6543 monomials",
                &paper_tsparse,
                "more than 2^42",
                log2_big(&paper_tsparse) > 42.0,
            ),
            exact_line(
                "elementary automorphisms (x n targets)",
                &ks.elementary,
                "about 2^47",
                (log2_big(&ks.elementary) - 47.0).abs() <= 1.0,
            ),
            exact_line(
                "words (2^42)^rounds",
                &words_paper,
                "2^672",
                (log2_big(&words_paper) - 672.0).abs() < 1e-9,
            ),
            exact_line(
                "words, exact t-sparse count ^rounds",
                &ks.words,
                "2^672",
                log2_big(&ks.words) >= 672.0,
            ),
            ReportLine {
                quantity: "words, elementary count ^rounds".into(),
                exact: None,
                log2: log2_big(&ks.elementary) * rounds,
                published: "2^672".into(),
                holds: log2_big(&ks.elementary) * rounds >= 672.0,
            },
        ],
        notes: vec![
            "the count of nonconstant monomials of degree <= 3 in 32 variables is \
             C(35,3)-1 = 6544; the published sum uses C(31,1) where C(32,1) belongs"
                .into(),
            "S = alpha^-1(Q(y)) equals Q with y_j renamed to x_(i_j), so signatures \
             can be computed from the public key alone"
                .into(),
        ],
    }
}
