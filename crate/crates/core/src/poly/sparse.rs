use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;

use super::accumulate::Accumulator;
use super::monomial::{Monomial, Var};
use super::RingParams;
use crate::error::{Error, Result};

/// A polynomial over `Z_q` in canonical form: terms sorted in graded order,
/// no repeated monomials, every coefficient in `1..q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    ring: RingParams,
    terms: Vec<(Monomial, u64)>,
}

impl SparsePoly {
    /// Terms must already be sorted, distinct and reduced.
    pub(crate) fn from_sorted_unchecked(ring: RingParams, terms: Vec<(Monomial, u64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        SparsePoly { ring, terms }
    }

    pub fn zero(ring: RingParams) -> Self {
        SparsePoly {
            ring,
            terms: Vec::new(),
        }
    }

    pub fn one(ring: RingParams) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: RingParams, c: i64) -> Self {
        let c = ring.reduce(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        };
        SparsePoly { ring, terms }
    }

    pub fn var(ring: RingParams, index: Var) -> Result<Self> {
        ring.check_var(index)?;
        Ok(SparsePoly {
            ring,
            terms: vec![(Monomial::var(index), 1)],
        })
    }

    pub fn term(ring: RingParams, m: Monomial, c: i64) -> Result<Self> {
        Self::canonicalize([(m, c)], ring)
    }

    /// Merges duplicate monomials, reduces coefficients mod `q`, drops zeros
    /// and sorts into graded order.
    pub fn canonicalize<I>(raw_terms: I, ring: RingParams) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut acc = Accumulator::new(ring);
        for (m, c) in raw_terms {
            if let Some(v) = m.max_var() {
                ring.check_var(v)?;
            }
            if m.vars().any(|v| v == 0) {
                return Err(Error::domain("variable index 0 is not valid"));
            }
            acc.add_term(m, ring.reduce(c));
        }
        Ok(acc.finish())
    }

    /// Builds a polynomial from terms that are already canonical, checking
    /// every invariant instead of repairing it.
    pub fn from_canonical_terms(ring: RingParams, terms: Vec<(Monomial, u64)>) -> Result<Self> {
        for (i, (m, c)) in terms.iter().enumerate() {
            if *c == 0 || *c >= ring.q {
                return Err(Error::domain(format!(
                    "term {i}: coefficient {c} not in 1..{}",
                    ring.q
                )));
            }
            if let Some(v) = m.max_var() {
                ring.check_var(v)?;
            }
            if m.vars().any(|v| v == 0) {
                return Err(Error::domain(format!("term {i}: variable index 0")));
            }
        }
        for (i, w) in terms.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain(format!(
                    "terms {i} and {} out of graded order or repeated",
                    i + 1
                )));
            }
        }
        Ok(SparsePoly { ring, terms })
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn constant_term(&self) -> u64 {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms
            .binary_search_by(|(tm, _)| tm.cmp(m))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn contains_var(&self, index: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.contains(index))
    }

    pub(crate) fn check_same_ring(&self, other: &SparsePoly) -> Result<()> {
        self.ring.check_same(&other.ring)
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        Ok(self.merge_linear(other, 1))
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        Ok(self.merge_linear(other, self.ring.q - 1))
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(self.ring.q as i64 - 1)
    }

    pub fn scale(&self, c: i64) -> SparsePoly {
        let q = self.ring.q;
        let c = self.ring.reduce(c);
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, a)| {
                let v = a * c % q;
                (v != 0).then(|| (m.clone(), v))
            })
            .collect();
        SparsePoly {
            ring: self.ring,
            terms,
        }
    }

    /// `self + coef * other`, by a sorted merge.
    fn merge_linear(&self, other: &SparsePoly, coef: u64) -> SparsePoly {
        let q = self.ring.q;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = b[j].1 * coef % q;
                    if c != 0 {
                        out.push((b[j].0.clone(), c));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = (a[i].1 + b[j].1 * coef) % q;
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SparsePoly {
            ring: self.ring,
            terms: out,
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &SparsePoly) -> SparsePoly {
        if self.is_zero() || other.is_zero() {
            return SparsePoly::zero(self.ring);
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut acc = Accumulator::new(self.ring);
        acc.add_product(self, other, 1);
        acc.finish()
    }

    pub fn pow(&self, exp: u32) -> SparsePoly {
        let mut result = SparsePoly::one(self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Exact evaluation in `Z_q` at a point of length `n`.
    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.ring.n as usize {
            return Err(Error::domain(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.n
            )));
        }
        let q = self.ring.q;
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut v = *c;
            for &(x, e) in m.factors() {
                v = v * pow_mod(point[x as usize - 1] % q, e as u64, q) % q;
                if v == 0 {
                    break;
                }
            }
            total = (total + v) % q;
        }
        Ok(total)
    }

    /// Replaces each mapped variable by its image and expands. Variables
    /// without an image are left in place.
    pub fn substitute(&self, images: &BTreeMap<Var, SparsePoly>) -> Result<SparsePoly> {
        for (&v, img) in images {
            self.ring.check_var(v)?;
            self.check_same_ring(img)?;
        }
        if images.is_empty() || self.is_zero() {
            return Ok(self.clone());
        }

        // Group terms by their mapped part so each image product is expanded once.
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, u64)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (mapped, rest) = m.split_by(|v| images.contains_key(&v));
            groups.entry(mapped).or_default().push((rest, *c));
        }

        let mut powers: FxHashMap<(Var, u32), SparsePoly> = FxHashMap::default();
        let mut acc = Accumulator::new(self.ring);
        for (mapped, rest) in groups {
            if mapped.is_one() {
                for (m, c) in rest {
                    acc.add_term(m, c);
                }
                continue;
            }
            let mut product: Option<SparsePoly> = None;
            for &(v, e) in mapped.factors() {
                let pw = power_cached(&mut powers, &images[&v], v, e);
                product = Some(match product {
                    None => pw.clone(),
                    Some(p) => p.mul_unchecked(pw),
                });
            }
            let product = product.expect("mapped part is not the unit monomial");
            let mut rest = rest;
            rest.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            acc.add_product(&product, &SparsePoly::from_sorted_unchecked(self.ring, rest), 1);
        }
        Ok(acc.finish())
    }

    /// Applies a variable renaming given as a 1-based permutation table:
    /// `x_i -> x_{perm[i-1]}`.
    pub fn rename_vars(&self, perm: &[Var]) -> Result<SparsePoly> {
        if perm.len() != self.ring.n as usize {
            return Err(Error::domain(format!(
                "permutation has length {}, ring has {} variables",
                perm.len(),
                self.ring.n
            )));
        }
        let mut terms: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.rename(|v| perm[v as usize - 1]), *c))
            .collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(SparsePoly {
            ring: self.ring,
            terms,
        })
    }
}

fn power_cached<'a>(
    cache: &'a mut FxHashMap<(Var, u32), SparsePoly>,
    image: &SparsePoly,
    v: Var,
    e: u32,
) -> &'a SparsePoly {
    if !cache.contains_key(&(v, e)) {
        let mut have = (1..e).rev().find(|&k| cache.contains_key(&(v, k)));
        if have.is_none() {
            cache.insert((v, 1), image.clone());
            have = Some(1);
        }
        let mut k = have.unwrap();
        while k < e {
            let next = cache[&(v, k)].mul_unchecked(image);
            k += 1;
            cache.insert((v, k), next);
        }
    }
    &cache[&(v, e)]
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (m.is_one(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, c) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.ring.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6(n: u16) -> RingParams {
        RingParams::new(6, n).unwrap()
    }

    fn x(ring: RingParams, i: Var) -> SparsePoly {
        SparsePoly::var(ring, i).unwrap()
    }

    fn c(ring: RingParams, v: i64) -> SparsePoly {
        SparsePoly::constant(ring, v)
    }

    #[test]
    fn canonicalize_merges_to_zero() {
        let r = z6(2);
        let p = SparsePoly::canonicalize([(Monomial::var(1), 3), (Monomial::var(1), 3)], r).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn canonicalize_orders_by_degree() {
        let r = z6(2);
        let x1x2 = Monomial::from_pairs([(1, 1), (2, 1)]);
        let p = SparsePoly::canonicalize([(Monomial::one(), 5), (x1x2.clone(), 2)], r).unwrap();
        assert_eq!(p.terms()[0].0, x1x2);
        assert!(p.terms()[1].0.is_one());
    }

    #[test]
    fn canonicalize_reduces_and_rejects_bad_index() {
        let r = z6(2);
        let p = SparsePoly::canonicalize([(Monomial::var(1), 7)], r).unwrap();
        assert_eq!(p.terms(), &[(Monomial::var(1), 1)]);
        let neg = SparsePoly::canonicalize([(Monomial::var(1), -1)], r).unwrap();
        assert_eq!(neg.terms()[0].1, 5);
        assert!(SparsePoly::canonicalize([(Monomial::var(3), 1)], r).is_err());
        assert!(SparsePoly::canonicalize([(Monomial::var(0), 1)], r).is_err());
    }

    #[test]
    fn add_cancels_mod_six() {
        let r = z6(2);
        let p = x(r, 1).scale(2).add(&x(r, 2).scale(3)).unwrap();
        let s = p.add(&x(r, 1).scale(4)).unwrap();
        assert_eq!(s, x(r, 2).scale(3));
        assert_eq!(p.add(&SparsePoly::zero(r)).unwrap(), p);
        assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn mul_with_zero_divisors() {
        let r = z6(1);
        let a = x(r, 1).add(&c(r, 1)).unwrap();
        let b = x(r, 1).add(&c(r, 5)).unwrap();
        let expected = x(r, 1).pow(2).add(&c(r, 5)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expected);
        assert_eq!(a.mul(&SparsePoly::one(r)).unwrap(), a);
    }

    #[test]
    fn ring_mismatch() {
        let a = x(z6(2), 1);
        let b = x(z6(3), 1);
        assert!(matches!(a.add(&b), Err(Error::RingMismatch { .. })));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let r = z6(2);
        let p = x(r, 1).mul(&x(r, 2)).unwrap().scale(3).add(&c(r, 2)).unwrap();
        assert_eq!(p.evaluate(&[1, 1]).unwrap(), 5);
        assert_eq!(p.evaluate(&[0, 0]).unwrap(), p.constant_term());
        assert!(p.evaluate(&[1]).is_err());
    }

    #[test]
    fn substitute_binomial() {
        let r = z6(2);
        let p = x(r, 1).pow(2);
        let img = BTreeMap::from([(1, x(r, 1).add(&x(r, 2)).unwrap())]);
        let expected = SparsePoly::canonicalize(
            [
                (Monomial::pow(1, 2), 1),
                (Monomial::from_pairs([(1, 1), (2, 1)]), 2),
                (Monomial::pow(2, 2), 1),
            ],
            r,
        )
        .unwrap();
        assert_eq!(p.substitute(&img).unwrap(), expected);
        let ident = BTreeMap::from([(1, x(r, 1)), (2, x(r, 2))]);
        assert_eq!(expected.substitute(&ident).unwrap(), expected);
    }

    #[test]
    fn rename_vars_permutes() {
        let r = z6(3);
        let p = x(r, 1).mul(&x(r, 2).pow(2)).unwrap();
        let q = p.rename_vars(&[3, 1, 2]).unwrap();
        assert_eq!(q, x(r, 3).mul(&x(r, 1).pow(2)).unwrap());
    }

    #[test]
    fn display_matches_canonical_order() {
        let r = z6(2);
        let p = SparsePoly::canonicalize(
            [
                (Monomial::one(), 5),
                (Monomial::from_pairs([(1, 1), (2, 2)]), 3),
            ],
            r,
        )
        .unwrap();
        assert_eq!(p.to_string(), "3*x1*x2^2 + 5");
        assert_eq!(SparsePoly::zero(r).to_string(), "0");
    }
}
