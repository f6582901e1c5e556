//! Signatures from a "scrap" of a polynomial automorphism.
//!
//! A secret automorphism `alpha` of `Z_q[x1..xn]` is built as a word of
//! elementary automorphisms. Only `k < n` generator images
//! `y_i = alpha(x_i)` are published. A message hashes to a polynomial `Q`
//! in the published `y`s; the signature is `S = alpha^-1(Q)`, and the
//! verifier accepts iff `alpha(S) == Q(y)`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash_encode::{digest_to_scrap_poly, hash_message};
use crate::matrix_sig::{RejectReason, Verdict};
use crate::poly::{RingParams, SparsePoly, Var};
use crate::sampling::{
    sample_index_set, sample_permutation, sample_tsparse_excluding, DegreeMode, RngStream,
    SamplingPolicy,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryAuto {
    /// `x_target -> x_target + h`, all other variables fixed. `h` never
    /// involves `x_target`.
    TriangularSub { target: Var, h: SparsePoly },
    /// `x_i -> x_{perm[i-1]}`.
    VarPermutation { perm: Vec<Var> },
}

impl ElementaryAuto {
    pub fn triangular(target: Var, h: SparsePoly) -> Result<Self> {
        h.ring().check_var(target)?;
        if h.contains_var(target) {
            return Err(Error::domain(format!("h must not involve x{target}")));
        }
        Ok(ElementaryAuto::TriangularSub { target, h })
    }

    pub fn permutation(perm: Vec<Var>, ring: RingParams) -> Result<Self> {
        check_permutation(&perm, ring.n)?;
        Ok(ElementaryAuto::VarPermutation { perm })
    }

    pub fn inverse(&self) -> ElementaryAuto {
        match self {
            ElementaryAuto::TriangularSub { target, h } => ElementaryAuto::TriangularSub {
                target: *target,
                h: h.neg(),
            },
            ElementaryAuto::VarPermutation { perm } => {
                let mut inv = vec![0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p as usize - 1] = (i + 1) as Var;
                }
                ElementaryAuto::VarPermutation { perm: inv }
            }
        }
    }

    pub fn apply(&self, p: &SparsePoly) -> Result<SparsePoly> {
        match self {
            ElementaryAuto::TriangularSub { target, h } => {
                let image = SparsePoly::var(p.ring(), *target)?.add(h)?;
                p.substitute(&BTreeMap::from([(*target, image)]))
            }
            ElementaryAuto::VarPermutation { perm } => p.rename_vars(perm),
        }
    }

    fn check_ring(&self, ring: RingParams) -> Result<()> {
        match self {
            ElementaryAuto::TriangularSub { target, h } => {
                ring.check_same(&h.ring())?;
                ring.check_var(*target)
            }
            ElementaryAuto::VarPermutation { perm } => check_permutation(perm, ring.n),
        }
    }
}

fn check_permutation(perm: &[Var], n: u16) -> Result<()> {
    if perm.len() != n as usize {
        return Err(Error::domain(format!(
            "permutation of length {} in a ring with {n} variables",
            perm.len()
        )));
    }
    let mut seen = vec![false; n as usize];
    for &p in perm {
        if p == 0 || p > n || std::mem::replace(&mut seen[p as usize - 1], true) {
            return Err(Error::domain(format!("not a permutation of 1..{n}")));
        }
    }
    Ok(())
}

/// An automorphism as a word of elementary automorphisms, first applied
/// first: `apply(p) = e_r(...e_1(p))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoWord {
    ring: RingParams,
    elements: Vec<ElementaryAuto>,
}

impl AutoWord {
    pub fn new(ring: RingParams, elements: Vec<ElementaryAuto>) -> Result<Self> {
        for e in &elements {
            e.check_ring(ring)?;
        }
        Ok(AutoWord { ring, elements })
    }

    pub fn identity(ring: RingParams) -> Self {
        AutoWord {
            ring,
            elements: Vec::new(),
        }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn elements(&self) -> &[ElementaryAuto] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn apply(&self, p: &SparsePoly) -> Result<SparsePoly> {
        self.ring.check_same(&p.ring())?;
        let mut out = p.clone();
        for e in &self.elements {
            out = e.apply(&out)?;
        }
        Ok(out)
    }

    /// Reversed word of inverted elements.
    pub fn inverse(&self) -> AutoWord {
        AutoWord {
            ring: self.ring,
            elements: self.elements.iter().rev().map(|e| e.inverse()).collect(),
        }
    }

    /// `apply(x_i)` for every generator.
    pub fn images(&self) -> Result<Vec<SparsePoly>> {
        self.ring
            .generators()
            .iter()
            .map(|x| self.apply(x))
            .collect()
    }
}

pub fn invert_word(w: &AutoWord) -> AutoWord {
    w.inverse()
}

pub fn apply_word(w: &AutoWord, p: &SparsePoly) -> Result<SparsePoly> {
    w.apply(p)
}

pub fn images(w: &AutoWord) -> Result<Vec<SparsePoly>> {
    w.images()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrapParams {
    pub ring: RingParams,
    /// Number of published images.
    pub k: usize,
    /// Sparsity of each `h`, and the number of monomials in the message
    /// polynomial.
    pub t: usize,
    pub degree_mode: DegreeMode,
    /// Rounds of (triangular substitution, permutation).
    pub rounds: usize,
}

impl ScrapParams {
    /// `q = 6, n = 32, k = 16, t = 3, b = 3, s = 16`.
    pub fn paper() -> Self {
        ScrapParams {
            ring: RingParams { q: 6, n: 32 },
            k: 16,
            t: 3,
            degree_mode: DegreeMode::UpTo(3),
            rounds: 16,
        }
    }

    /// As [`ScrapParams::paper`] but with `n` rounds.
    pub fn full_rounds() -> Self {
        let p = Self::paper();
        ScrapParams {
            rounds: p.ring.n as usize,
            ..p
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ring.validate()?;
        if self.k == 0 || self.k >= self.ring.n as usize {
            return Err(Error::domain(format!(
                "need 1 <= k < n, got k={} n={}",
                self.k, self.ring.n
            )));
        }
        if self.t == 0 || self.t > 4 {
            return Err(Error::domain(format!(
                "t must be in 1..=4 (message hashing yields at most 4 monomials), got {}",
                self.t
            )));
        }
        Ok(())
    }

    pub fn policy(&self) -> Result<SamplingPolicy> {
        SamplingPolicy::new(self.ring, self.t, self.degree_mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrapPublicKey {
    /// Published indices, increasing.
    pub indices: Vec<Var>,
    /// `alpha(x_i)` for each published `i`.
    pub images: Vec<SparsePoly>,
    pub params: ScrapParams,
}

impl ScrapPublicKey {
    fn image_map(&self) -> BTreeMap<Var, SparsePoly> {
        self.indices
            .iter()
            .copied()
            .zip(self.images.iter().cloned())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrapPrivateKey {
    /// The word for `alpha^-1`.
    pub inverse: AutoWord,
    /// The word for `alpha`, kept for audit.
    pub forward: Option<AutoWord>,
    pub params: ScrapParams,
}

impl ScrapPrivateKey {
    /// The explicit polynomials `z_i = alpha^-1(x_i)`.
    pub fn inverse_images(&self) -> Result<Vec<SparsePoly>> {
        self.inverse.images()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrapSignature {
    pub s: SparsePoly,
}

/// `rounds` times: a triangular substitution at a uniform target with a
/// `t`-sparse `h` free of the target, then a uniform permutation.
pub fn sample_automorphism(rng: &RngStream, params: &ScrapParams) -> Result<AutoWord> {
    let policy = params.policy()?;
    let n = params.ring.n;
    let mut rng = rng.fork("word");
    let mut elements = Vec::with_capacity(2 * params.rounds);
    for _ in 0..params.rounds {
        let target: Var = rng.gen_range(1..=n);
        let h = sample_tsparse_excluding(&mut rng, &policy, Some(target))?;
        elements.push(ElementaryAuto::TriangularSub { target, h });
        let perm = sample_permutation(&mut rng, n as usize);
        elements.push(ElementaryAuto::VarPermutation {
            perm: perm.images().iter().map(|&i| i as Var).collect(),
        });
    }
    AutoWord::new(params.ring, elements)
}

pub fn scrap_keygen(
    rng: &RngStream,
    params: &ScrapParams,
) -> Result<(ScrapPublicKey, ScrapPrivateKey)> {
    params.validate()?;
    let word = sample_automorphism(rng, params)?;
    let indices: Vec<Var> =
        sample_index_set(&mut rng.fork("publish"), params.ring.n as usize, params.k)?
            .into_iter()
            .map(|i| i as Var)
            .collect();
    let images = indices
        .iter()
        .map(|&i| word.apply(&SparsePoly::var(params.ring, i)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        ScrapPublicKey {
            indices,
            images,
            params: *params,
        },
        ScrapPrivateKey {
            inverse: word.inverse(),
            forward: Some(word),
            params: *params,
        },
    ))
}

/// The message polynomial `Q`, written in the published `x` variables
/// (the variable `x_i` stands for `y_i`).
pub fn message_poly(m: &[u8], key: &ScrapPublicKey) -> Result<SparsePoly> {
    digest_to_scrap_poly(&hash_message(m), key.params.ring, &key.indices, key.params.t)
}

/// Both ways of computing `S`: applying the inverse word to `Q(y)`, and
/// renaming `y_i` to `x_i` in `Q`.
pub fn sign_routes(
    key: &ScrapPrivateKey,
    public: &ScrapPublicKey,
    m: &[u8],
) -> Result<(SparsePoly, SparsePoly)> {
    let q = message_poly(m, public)?;
    let q_over_y = q.substitute(&public.image_map())?;
    Ok((key.inverse.apply(&q_over_y)?, q))
}

pub fn scrap_sign(
    key: &ScrapPrivateKey,
    public: &ScrapPublicKey,
    m: &[u8],
) -> Result<ScrapSignature> {
    let (via_inverse, renamed) = sign_routes(key, public, m)?;
    if via_inverse != renamed {
        return Err(Error::domain(
            "inverse word does not invert the published images",
        ));
    }
    Ok(ScrapSignature { s: via_inverse })
}

pub fn scrap_verify(key: &ScrapPublicKey, m: &[u8], sig: &ScrapSignature) -> Result<Verdict> {
    if sig.s.ring() != key.params.ring {
        return Ok(Verdict::Reject(RejectReason::WrongRing));
    }
    if let Some(v) = sig
        .s
        .variables()
        .into_iter()
        .find(|v| key.indices.binary_search(v).is_err())
    {
        return Ok(Verdict::Reject(RejectReason::UnpublishedVariable(v)));
    }
    let images = key.image_map();
    let alpha_s = sig.s.substitute(&images)?;
    let q_over_y = message_poly(m, key)?.substitute(&images)?;
    Ok(if alpha_s == q_over_y {
        Verdict::Accept
    } else {
        Verdict::Reject(RejectReason::Mismatch)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn ring(n: u16) -> RingParams {
        RingParams::new(6, n).unwrap()
    }

    fn x(r: RingParams, i: Var) -> SparsePoly {
        SparsePoly::var(r, i).unwrap()
    }

    #[test]
    fn triangular_rejects_own_variable() {
        let r = ring(3);
        assert!(ElementaryAuto::triangular(1, x(r, 1)).is_err());
        assert!(ElementaryAuto::triangular(1, x(r, 2)).is_ok());
        assert!(ElementaryAuto::permutation(vec![1, 1, 2], r).is_err());
        assert!(ElementaryAuto::permutation(vec![3, 1, 2], r).is_ok());
    }

    #[test]
    fn single_substitution() {
        let r = ring(3);
        let w = AutoWord::new(r, vec![ElementaryAuto::triangular(1, x(r, 2)).unwrap()]).unwrap();
        assert_eq!(w.apply(&x(r, 1)).unwrap(), x(r, 1).add(&x(r, 2)).unwrap());
        let sq = SparsePoly::term(r, Monomial::pow(2, 2), 1).unwrap();
        let w = AutoWord::new(r, vec![ElementaryAuto::triangular(1, sq.clone()).unwrap()]).unwrap();
        let inv = w.inverse();
        assert_eq!(
            inv.elements()[0],
            ElementaryAuto::TriangularSub { target: 1, h: sq.neg() }
        );
        assert_eq!(inv.apply(&w.apply(&x(r, 1)).unwrap()).unwrap(), x(r, 1));
    }

    #[test]
    fn permutation_images() {
        let r = ring(3);
        let w = AutoWord::new(r, vec![ElementaryAuto::permutation(vec![2, 3, 1], r).unwrap()])
            .unwrap();
        assert_eq!(w.images().unwrap(), vec![x(r, 2), x(r, 3), x(r, 1)]);
        assert_eq!(AutoWord::identity(r).images().unwrap(), r.generators());
        assert!(AutoWord::identity(r).inverse().is_empty());
    }

    #[test]
    fn sampled_words_round_trip() {
        let params = ScrapParams {
            ring: ring(6),
            k: 3,
            t: 2,
            degree_mode: DegreeMode::UpTo(2),
            rounds: 4,
        };
        let w = sample_automorphism(&RngStream::new(b"w", "scrap"), &params).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(w, sample_automorphism(&RngStream::new(b"w", "scrap"), &params).unwrap());
        let inv = invert_word(&w);
        for g in params.ring.generators() {
            assert_eq!(inv.apply(&w.apply(&g).unwrap()).unwrap(), g);
        }
        let zero_rounds = ScrapParams { rounds: 0, ..params };
        assert!(sample_automorphism(&RngStream::new(b"w", "scrap"), &zero_rounds)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sign_and_verify() {
        let params = ScrapParams {
            ring: ring(8),
            k: 7,
            t: 3,
            degree_mode: DegreeMode::UpTo(2),
            rounds: 4,
        };
        let (pk, sk) = scrap_keygen(&RngStream::new(b"s", "scrap"), &params).unwrap();
        assert_eq!(pk.indices.len(), 7);
        let sig = scrap_sign(&sk, &pk, b"msg").unwrap();
        assert_eq!(sig.s, message_poly(b"msg", &pk).unwrap());
        assert!(scrap_verify(&pk, b"msg", &sig).unwrap().is_accept());
        let zero = ScrapSignature { s: SparsePoly::zero(params.ring) };
        assert!(!scrap_verify(&pk, b"msg", &zero).unwrap().is_accept());
        let hidden = (1..=8).find(|i| !pk.indices.contains(i)).unwrap();
        let bad = ScrapSignature { s: x(params.ring, hidden) };
        assert_eq!(
            scrap_verify(&pk, b"msg", &bad).unwrap(),
            Verdict::Reject(RejectReason::UnpublishedVariable(hidden))
        );
    }

    #[test]
    fn params_bounds() {
        assert!(ScrapParams::paper().validate().is_ok());
        assert_eq!(ScrapParams::full_rounds().rounds, 32);
        let p = ScrapParams { k: 32, ..ScrapParams::paper() };
        assert!(p.validate().is_err());
        let p = ScrapParams { k: 31, ..ScrapParams::paper() };
        assert!(p.validate().is_ok());
    }
}
