//! Reproducible randomness and the random objects the schemes are built from.
//!
//! [`RngStream`] is a counter-mode generator: block `i` of the stream labelled
//! `label` under seed `seed` is
//!
//! ```text
//! SHA-512( "polysig-rng-v1" || be64(len seed) || seed || be64(len label) || label || be64(i) )
//! ```
//!
//! and bytes are consumed from consecutive blocks in order. Identical
//! `(seed, label)` pairs give identical streams; different labels give
//! unrelated ones.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_core::{impls, RngCore};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha512};

use crate::error::{Error, Result};
use crate::linalg::Permutation;
use crate::poly::{Monomial, RingParams, SparsePoly, Var};

const DOMAIN: &[u8] = b"polysig-rng-v1";

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: Vec<u8>,
    label: String,
    counter: u64,
    block: [u8; 64],
    pos: usize,
}

impl RngStream {
    pub fn new(seed: &[u8], label: &str) -> Self {
        RngStream {
            seed: seed.to_vec(),
            label: label.to_string(),
            counter: 0,
            block: [0; 64],
            pos: 64,
        }
    }

    /// Seed drawn from the operating system.
    pub fn from_entropy(label: &str) -> Self {
        let mut seed = [0u8; 32];
        rand::rngs::OsRng.fill_bytes(&mut seed);
        Self::new(&seed, label)
    }

    /// A new stream under the same seed with the label `self.label/sub`.
    pub fn fork(&self, sub: &str) -> RngStream {
        RngStream::new(&self.seed, &format!("{}/{}", self.label, sub))
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of blocks produced so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    fn refill(&mut self) {
        let mut h = Sha512::new();
        h.update(DOMAIN);
        h.update((self.seed.len() as u64).to_be_bytes());
        h.update(&self.seed);
        h.update((self.label.len() as u64).to_be_bytes());
        h.update(self.label.as_bytes());
        h.update(self.counter.to_be_bytes());
        self.block.copy_from_slice(&h.finalize());
        self.counter += 1;
        self.pos = 0;
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        impls::next_u32_via_fill(self)
    }

    fn next_u64(&mut self) -> u64 {
        impls::next_u64_via_fill(self)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        let mut filled = 0;
        while filled < dest.len() {
            if self.pos == 64 {
                self.refill();
            }
            let n = (64 - self.pos).min(dest.len() - filled);
            dest[filled..filled + n].copy_from_slice(&self.block[self.pos..self.pos + n]);
            self.pos += n;
            filled += n;
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// How the degree of each sampled monomial is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "bound", rename_all = "kebab-case")]
pub enum DegreeMode {
    /// Uniform on `0..=2n`.
    UpToTwiceN,
    /// Uniform on `0..=b`.
    UpTo(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingPolicy {
    pub t: usize,
    pub degree_mode: DegreeMode,
    pub ring: RingParams,
}

impl SamplingPolicy {
    pub fn new(ring: RingParams, t: usize, degree_mode: DegreeMode) -> Result<Self> {
        if t == 0 {
            return Err(Error::domain("sparsity t must be at least 1"));
        }
        Ok(SamplingPolicy {
            t,
            degree_mode,
            ring,
        })
    }

    pub fn max_degree(&self) -> u32 {
        match self.degree_mode {
            DegreeMode::UpToTwiceN => 2 * self.ring.n as u32,
            DegreeMode::UpTo(b) => b,
        }
    }
}

fn draw_monomial<R: Rng>(rng: &mut R, max_degree: u32, pool: &[Var]) -> Monomial {
    let d = if pool.is_empty() {
        0
    } else {
        rng.gen_range(0..=max_degree)
    };
    Monomial::from_pairs((0..d).map(|_| (pool[rng.gen_range(0..pool.len())], 1)))
}

/// Draws a degree per the policy, then that many variables uniformly with
/// replacement, and multiplies them.
pub fn sample_monomial<R: Rng>(rng: &mut R, policy: &SamplingPolicy) -> Monomial {
    let pool: Vec<Var> = (1..=policy.ring.n).collect();
    draw_monomial(rng, policy.max_degree(), &pool)
}

/// Number of monomials of degree `<= d` in `v` variables, saturating.
fn monomial_space(v: usize, d: u32) -> u128 {
    // C(v + d, d)
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = match acc.checked_mul(v as u128 + i) {
            Some(x) => x / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// A polynomial with exactly `t` distinct monomials and uniform nonzero
/// coefficients. Colliding monomials are redrawn.
pub fn sample_tsparse<R: Rng>(rng: &mut R, policy: &SamplingPolicy) -> Result<SparsePoly> {
    sample_tsparse_excluding(rng, policy, None)
}

/// As [`sample_tsparse`] but the variable `exclude`, if given, never appears.
pub fn sample_tsparse_excluding<R: Rng>(
    rng: &mut R,
    policy: &SamplingPolicy,
    exclude: Option<Var>,
) -> Result<SparsePoly> {
    if policy.t == 0 {
        return Err(Error::domain("sparsity t must be at least 1"));
    }
    let pool: Vec<Var> = (1..=policy.ring.n).filter(|&v| Some(v) != exclude).collect();
    let max_degree = if pool.is_empty() { 0 } else { policy.max_degree() };
    let space = monomial_space(pool.len(), max_degree);
    if space < policy.t as u128 {
        return Err(Error::domain(format!(
            "only {space} monomials available, cannot draw {} distinct ones",
            policy.t
        )));
    }
    let q = policy.ring.q;
    let mut chosen: Vec<Monomial> = Vec::with_capacity(policy.t);
    while chosen.len() < policy.t {
        let m = draw_monomial(rng, max_degree, &pool);
        if !chosen.contains(&m) {
            chosen.push(m);
        }
    }
    let terms: Vec<(Monomial, i64)> = chosen
        .into_iter()
        .map(|m| (m, rng.gen_range(1..q) as i64))
        .collect();
    SparsePoly::canonicalize(terms, policy.ring)
}

/// Uniform permutation of `1..=k`.
pub fn sample_permutation<R: Rng>(rng: &mut R, k: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=k).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffled identity is a permutation")
}

/// Uniform `count`-subset of `1..=k`, sorted.
pub fn sample_index_set<R: Rng>(rng: &mut R, k: usize, count: usize) -> Result<Vec<usize>> {
    if count > k {
        return Err(Error::domain(format!("cannot choose {count} of {k} indices")));
    }
    let mut set: Vec<usize> = rand::seq::index::sample(rng, k, count)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    set.sort_unstable();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u16) -> RingParams {
        RingParams::new(6, n).unwrap()
    }

    #[test]
    fn streams_are_reproducible_and_separated() {
        let mut a = RngStream::new(b"seed", "keygen");
        let mut b = RngStream::new(b"seed", "keygen");
        let mut c = RngStream::new(b"seed", "other");
        let (mut x, mut y, mut z) = ([0u8; 200], [0u8; 200], [0u8; 200]);
        a.fill_bytes(&mut x);
        b.fill_bytes(&mut y);
        c.fill_bytes(&mut z);
        assert_eq!(x, y);
        assert_ne!(x[..8], z[..8]);
        assert_eq!(a.counter(), 4);
    }

    #[test]
    fn label_length_prefix_prevents_ambiguity() {
        let mut a = RngStream::new(b"ab", "c");
        let mut b = RngStream::new(b"a", "bc");
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn zero_degree_gives_constant() {
        let p = SamplingPolicy::new(ring(4), 1, DegreeMode::UpTo(0)).unwrap();
        let mut rng = RngStream::new(b"s", "t");
        let poly = sample_tsparse(&mut rng, &p).unwrap();
        assert_eq!(poly.sparsity(), 1);
        assert!(poly.terms()[0].0.is_one());
    }

    #[test]
    fn single_variable_monomial() {
        let p = SamplingPolicy::new(ring(1), 1, DegreeMode::UpTo(5)).unwrap();
        let mut rng = RngStream::new(b"s", "t");
        for _ in 0..50 {
            let m = sample_monomial(&mut rng, &p);
            assert!(m.vars().all(|v| v == 1));
            assert_eq!(m.exponent(1), m.degree());
        }
    }

    #[test]
    fn space_too_small() {
        let p = SamplingPolicy::new(ring(4), 2, DegreeMode::UpTo(0)).unwrap();
        let mut rng = RngStream::new(b"s", "t");
        assert!(sample_tsparse(&mut rng, &p).is_err());
        assert!(SamplingPolicy::new(ring(4), 0, DegreeMode::UpTo(3)).is_err());
        // x1 excluded in a one-variable ring leaves only constants
        let p = SamplingPolicy::new(ring(1), 1, DegreeMode::UpTo(3)).unwrap();
        let h = sample_tsparse_excluding(&mut rng, &p, Some(1)).unwrap();
        assert!(h.terms()[0].0.is_one());
    }

    #[test]
    fn permutation_and_index_set_edges() {
        let mut rng = RngStream::new(b"s", "perm");
        assert_eq!(sample_permutation(&mut rng, 1), Permutation::identity(1));
        assert!(sample_index_set(&mut rng, 4, 0).unwrap().is_empty());
        assert_eq!(sample_index_set(&mut rng, 4, 4).unwrap(), vec![1, 2, 3, 4]);
        assert!(sample_index_set(&mut rng, 4, 5).is_err());
        let a = sample_index_set(&mut RngStream::new(b"x", "y"), 10, 3).unwrap();
        let b = sample_index_set(&mut RngStream::new(b"x", "y"), 10, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn monomial_space_counts() {
        assert_eq!(monomial_space(2, 2), 6);
        assert_eq!(monomial_space(0, 5), 1);
        assert_eq!(monomial_space(64, 3), 47905);
    }
}
