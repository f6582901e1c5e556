//! Signatures from a left-invertible `k x l` polynomial matrix.
//!
//! The public key is `M` (`k x l`); the private key is a left inverse `L`
//! (`l x k`, `L * M = I_l`). A message hashes to a row vector `U` of `l`
//! polynomials; the signature is `V = U * L`, and verification checks
//! `V * M == U`. Both matrices come from puncturing an invertible `k x k`
//! matrix generated in factored form.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash_encode::{digest_to_vector, hash_message, HashVectorParams};
use crate::linalg::{puncture, ElementaryFactor, FactoredInvertible, PolyMatrix, PolyVector};
use crate::poly::RingParams;
use crate::sampling::{
    sample_index_set, sample_permutation, sample_tsparse, DegreeMode, RngStream, SamplingPolicy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSigParams {
    pub ring: RingParams,
    pub k: usize,
    pub l: usize,
    pub t: usize,
    pub degree_mode: DegreeMode,
    pub numeric_reps: usize,
}

impl MatrixSigParams {
    /// `q = 6, n = 64, k = 10, l = 5, t = 3`, entry monomials of degree `<= 3`.
    pub fn paper() -> Self {
        MatrixSigParams {
            ring: RingParams { q: 6, n: 64 },
            k: 10,
            l: 5,
            t: 3,
            degree_mode: DegreeMode::UpTo(3),
            numeric_reps: 32,
        }
    }

    /// The reduced `5 x 3` dimensions; the runtime default.
    pub fn implemented() -> Self {
        MatrixSigParams {
            k: 5,
            l: 3,
            ..Self::paper()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_dims()?;
        if self.k <= self.l {
            return Err(Error::domain(format!(
                "signature scheme needs k > l, got k={} l={}",
                self.k, self.l
            )));
        }
        Ok(())
    }

    /// Dimension checks shared with the encryption variant, which also
    /// admits `k == l`.
    pub(crate) fn validate_dims(&self) -> Result<()> {
        self.ring.validate()?;
        if self.l == 0 || self.k < self.l {
            return Err(Error::domain(format!(
                "need 1 <= l <= k, got k={} l={}",
                self.k, self.l
            )));
        }
        if self.t == 0 {
            return Err(Error::domain("sparsity t must be at least 1"));
        }
        if self.numeric_reps == 0 {
            return Err(Error::domain("numeric_reps must be at least 1"));
        }
        Ok(())
    }

    pub fn policy(&self) -> Result<SamplingPolicy> {
        SamplingPolicy::new(self.ring, self.t, self.degree_mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPublicKey {
    pub m: PolyMatrix,
    pub params: MatrixSigParams,
    pub layout: HashVectorParams,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPrivateKey {
    pub l: PolyMatrix,
    pub params: MatrixSigParams,
    pub layout: HashVectorParams,
    /// 1-based columns deleted from `S` (and rows deleted from `S^-1`).
    pub removed: Vec<usize>,
    pub factors: Option<FactoredInvertible>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSignature {
    pub v: PolyVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// The signature has the wrong number of components.
    WrongLength { expected: usize, got: usize },
    /// Signature is well-formed but does not reproduce the message hash.
    Mismatch,
    /// A scrap signature mentions a variable that is not published.
    UnpublishedVariable(u16),
    /// Signature lives in a different polynomial ring than the key.
    WrongRing,
}

/// Samples the factored invertible matrix: one `t`-sparse entry for every
/// position above the diagonal and every position below it, plus two random
/// permutations. Each triangle's factors are multiplied in a random order;
/// a fixed row-major order makes one of `U`, `U^-1` carry every path
/// product and is infeasible at `k = 10`.
pub fn sample_factors(rng: &RngStream, params: &MatrixSigParams) -> Result<FactoredInvertible> {
    let policy = params.policy()?;
    let k = params.k;
    let mut upper_rng = rng.fork("upper");
    let mut upper = Vec::with_capacity(k * (k - 1) / 2);
    for i in 1..=k {
        for j in i + 1..=k {
            let entry = sample_tsparse(&mut upper_rng, &policy)?;
            upper.push(ElementaryFactor { row: i, col: j, entry });
        }
    }
    let mut lower_rng = rng.fork("lower");
    let mut lower = Vec::with_capacity(k * (k - 1) / 2);
    for i in 1..=k {
        for j in 1..i {
            let entry = sample_tsparse(&mut lower_rng, &policy)?;
            lower.push(ElementaryFactor { row: i, col: j, entry });
        }
    }
    let mut order_rng = rng.fork("order");
    upper.shuffle(&mut order_rng);
    lower.shuffle(&mut order_rng);
    let mut perm_rng = rng.fork("permutations");
    let p1 = sample_permutation(&mut perm_rng, k);
    let p2 = sample_permutation(&mut perm_rng, k);
    FactoredInvertible::new(params.ring, k, upper, p1, lower, p2)
}

/// Assembles `S` and `S^-1` and punctures them at `removed`.
pub fn keys_from_factors(
    factors: FactoredInvertible,
    removed: Vec<usize>,
    params: &MatrixSigParams,
) -> Result<(MatrixPublicKey, MatrixPrivateKey)> {
    params.validate_dims()?;
    if factors.dim() != params.k || factors.ring() != params.ring {
        return Err(Error::dim("factors do not match parameters"));
    }
    if removed.len() != params.k - params.l {
        return Err(Error::domain(format!(
            "expected {} removed columns, got {}",
            params.k - params.l,
            removed.len()
        )));
    }
    let layout = HashVectorParams::standard(params.l, params.ring.n)?;
    let s = factors.assemble();
    let s_inv = factors.assemble_inverse();
    let (m, l) = puncture(&s, &s_inv, &removed)?;
    Ok((
        MatrixPublicKey {
            m,
            params: *params,
            layout,
        },
        MatrixPrivateKey {
            l,
            params: *params,
            layout,
            removed,
            factors: Some(factors),
        },
    ))
}

pub(crate) fn generate_pair(
    rng: &RngStream,
    params: &MatrixSigParams,
) -> Result<(MatrixPublicKey, MatrixPrivateKey)> {
    let factors = sample_factors(rng, params)?;
    let removed = sample_index_set(&mut rng.fork("puncture"), params.k, params.k - params.l)?;
    keys_from_factors(factors, removed, params)
}

pub fn keygen(
    rng: &RngStream,
    params: &MatrixSigParams,
) -> Result<(MatrixPublicKey, MatrixPrivateKey)> {
    params.validate()?;
    generate_pair(rng, params)
}

/// As [`keygen`] but with a non-standard hash layout, for reduced-scale
/// experiments.
pub fn keygen_with_layout(
    rng: &RngStream,
    params: &MatrixSigParams,
    layout: HashVectorParams,
) -> Result<(MatrixPublicKey, MatrixPrivateKey)> {
    params.validate()?;
    layout.validate()?;
    if layout.l != params.l || layout.n != params.ring.n {
        return Err(Error::domain(format!(
            "layout is for l={} n={}, parameters have l={} n={}",
            layout.l, layout.n, params.l, params.ring.n
        )));
    }
    let (mut pk, mut sk) = generate_pair(rng, params)?;
    pk.layout = layout;
    sk.layout = layout;
    Ok((pk, sk))
}

/// The hash vector `U` of a message under a key's layout.
pub fn message_vector(m: &[u8], layout: &HashVectorParams, ring: RingParams) -> Result<PolyVector> {
    digest_to_vector(&hash_message(m), layout, ring)
}

pub fn sign(key: &MatrixPrivateKey, m: &[u8]) -> Result<MatrixSignature> {
    let u = message_vector(m, &key.layout, key.params.ring)?;
    sign_vector(key, &u)
}

/// `V = U * L` for an arbitrary `U`.
pub fn sign_vector(key: &MatrixPrivateKey, u: &PolyVector) -> Result<MatrixSignature> {
    Ok(MatrixSignature {
        v: u.mul_matrix(&key.l)?,
    })
}

pub fn verify(key: &MatrixPublicKey, m: &[u8], sig: &MatrixSignature) -> Result<Verdict> {
    if let Some(reason) = shape_check(key, sig) {
        return Ok(Verdict::Reject(reason));
    }
    let u = message_vector(m, &key.layout, key.params.ring)?;
    let w = sig.v.mul_matrix(&key.m)?;
    Ok(if w == u {
        Verdict::Accept
    } else {
        Verdict::Reject(RejectReason::Mismatch)
    })
}

fn shape_check(key: &MatrixPublicKey, sig: &MatrixSignature) -> Option<RejectReason> {
    if sig.v.len() != key.m.rows() {
        return Some(RejectReason::WrongLength {
            expected: key.m.rows(),
            got: sig.v.len(),
        });
    }
    if sig.v.ring() != key.m.ring() {
        return Some(RejectReason::WrongRing);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericOutcome {
    pub verdict: Verdict,
    pub rounds: usize,
    /// Rounds whose random point exposed a mismatch.
    pub rejecting_rounds: usize,
}

/// Checks `V(v) * M(v) == U(v)` in `Z_q` at `reps` uniform points. Runs
/// every round so the per-round detection rate can be measured.
pub fn verify_numeric<R: Rng>(
    key: &MatrixPublicKey,
    m: &[u8],
    sig: &MatrixSignature,
    rng: &mut R,
    reps: usize,
) -> Result<NumericOutcome> {
    if reps == 0 {
        return Err(Error::domain("numeric verification needs at least one round"));
    }
    if let Some(reason) = shape_check(key, sig) {
        return Ok(NumericOutcome {
            verdict: Verdict::Reject(reason),
            rounds: 0,
            rejecting_rounds: 0,
        });
    }
    let ring = key.params.ring;
    let u = message_vector(m, &key.layout, ring)?;
    let mut rejecting = 0;
    for _ in 0..reps {
        let point: Vec<u64> = (0..ring.n).map(|_| rng.gen_range(0..ring.q)).collect();
        let v_at = sig.v.evaluate(&point)?;
        let m_at = key.m.evaluate(&point)?;
        if m_at.vec_mul(&v_at)? != u.evaluate(&point)? {
            rejecting += 1;
        }
    }
    Ok(NumericOutcome {
        verdict: if rejecting == 0 {
            Verdict::Accept
        } else {
            Verdict::Reject(RejectReason::Mismatch)
        },
        rounds: reps,
        rejecting_rounds: rejecting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Permutation;
    use crate::poly::SparsePoly;

    fn toy_params() -> MatrixSigParams {
        MatrixSigParams {
            ring: RingParams { q: 6, n: 8 },
            k: 3,
            l: 2,
            t: 2,
            degree_mode: DegreeMode::UpTo(2),
            numeric_reps: 8,
        }
    }

    #[test]
    fn zero_factors_give_identity_columns() {
        let params = MatrixSigParams {
            k: 2,
            l: 1,
            ..toy_params()
        };
        let f = FactoredInvertible::new(
            params.ring,
            2,
            vec![ElementaryFactor { row: 1, col: 2, entry: SparsePoly::zero(params.ring) }],
            Permutation::identity(2),
            vec![ElementaryFactor { row: 2, col: 1, entry: SparsePoly::zero(params.ring) }],
            Permutation::identity(2),
        )
        .unwrap();
        let (pk, sk) = keys_from_factors(f, vec![2], &params).unwrap();
        assert!(pk.m.get(0, 0).is_one() && pk.m.get(1, 0).is_zero());
        assert!(sk.l.get(0, 0).is_one() && sk.l.get(0, 1).is_zero());

        let u = message_vector(b"msg", &sk.layout, params.ring).unwrap();
        let sig = sign(&sk, b"msg").unwrap();
        assert_eq!(sig.v.get(0), u.get(0));
        assert!(sig.v.get(1).is_zero());
    }

    #[test]
    fn keygen_deterministic_and_inverse() {
        let p = toy_params();
        let (pk, sk) = keygen(&RngStream::new(b"k", "matrix"), &p).unwrap();
        let (pk2, sk2) = keygen(&RngStream::new(b"k", "matrix"), &p).unwrap();
        assert_eq!(pk, pk2);
        assert_eq!(sk, sk2);
        assert!(sk.l.mul(&pk.m).unwrap().is_identity());
    }

    #[test]
    fn sign_verify_and_reject() {
        let p = toy_params();
        let (pk, sk) = keygen(&RngStream::new(b"k2", "matrix"), &p).unwrap();
        let sig = sign(&sk, b"hello").unwrap();
        assert_eq!(sig, sign(&sk, b"hello").unwrap());
        assert!(verify(&pk, b"hello", &sig).unwrap().is_accept());
        assert_eq!(
            verify(&pk, b"other", &sig).unwrap(),
            Verdict::Reject(RejectReason::Mismatch)
        );
        let zero = MatrixSignature { v: PolyVector::zeros(p.ring, p.k) };
        assert!(!verify(&pk, b"hello", &zero).unwrap().is_accept());
        let short = MatrixSignature { v: PolyVector::zeros(p.ring, p.k - 1) };
        assert_eq!(
            verify(&pk, b"hello", &short).unwrap(),
            Verdict::Reject(RejectReason::WrongLength { expected: 3, got: 2 })
        );
    }

    #[test]
    fn numeric_verification() {
        let p = toy_params();
        let (pk, sk) = keygen(&RngStream::new(b"k3", "matrix"), &p).unwrap();
        let sig = sign(&sk, b"hello").unwrap();
        let mut rng = RngStream::new(b"n", "numeric");
        let out = verify_numeric(&pk, b"hello", &sig, &mut rng, 16).unwrap();
        assert!(out.verdict.is_accept());
        assert_eq!(out.rejecting_rounds, 0);
        assert!(verify_numeric(&pk, b"hello", &sig, &mut rng, 0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(MatrixSigParams::paper().validate().is_ok());
        assert!(MatrixSigParams::implemented().validate().is_ok());
        let square = MatrixSigParams { k: 3, l: 3, ..toy_params() };
        assert!(square.validate().is_err());
        assert!(square.validate_dims().is_ok());
    }
}
