//! Linear algebra over `Z_6`, done componentwise over `Z_2` and `Z_3`.
//!
//! `Z_6` is not a field, so rank and consistency are only meaningful per
//! prime component. A system is solvable mod 6 iff it is solvable mod 2 and
//! mod 3, and the two solutions recombine as `x = 3*x2 + 4*x3 (mod 6)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::PolyVector;
use crate::poly::{Monomial, RingParams, SparsePoly};

pub(crate) const PRIMES: [u8; 2] = [2, 3];

fn inv_mod(a: u8, p: u8) -> u8 {
    (1..p).find(|x| a * x % p == 1).expect("nonzero element of a prime field")
}

pub(crate) fn crt6(x2: u8, x3: u8) -> u64 {
    (3 * x2 as u64 + 4 * x3 as u64) % 6
}

/// One solution of `A x = b` over `GF(p)` with free variables set to zero.
fn solve_prime(a: &[Vec<u64>], b: &[u64], cols: usize, p: u8) -> Option<Vec<u8>> {
    let pp = p as u64;
    let mut rows: Vec<Vec<u8>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<u8> = row.iter().map(|&v| (v % pp) as u8).collect();
            r.push((rhs % pp) as u8);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(found) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, found);
        let inv = inv_mod(rows[next][col], p);
        for v in rows[next].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row[col] != 0 {
                let f = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + p * p - f * pv % p) % p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    if rows[next..].iter().any(|r| r[cols] != 0) {
        return None;
    }
    let mut x = vec![0u8; cols];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = rows[r][cols];
    }
    Some(x)
}

/// Solves `A x = b` over `Z_6`, where `A` has `cols` columns. Returns one
/// solution, or `None` when either prime component is inconsistent.
pub fn solve_mod6(a: &[Vec<u64>], b: &[u64], cols: usize) -> Result<Option<Vec<u64>>> {
    if a.len() != b.len() {
        return Err(Error::dim(format!("{} rows but {} right-hand sides", a.len(), b.len())));
    }
    if let Some(r) = a.iter().position(|row| row.len() != cols) {
        return Err(Error::dim(format!("row {r} does not have {cols} entries")));
    }
    let Some(x2) = solve_prime(a, b, cols, 2) else {
        return Ok(None);
    };
    let Some(x3) = solve_prime(a, b, cols, 3) else {
        return Ok(None);
    };
    Ok(Some(x2.into_iter().zip(x3).map(|(u, v)| crt6(u, v)).collect()))
}

/// A coordinate: polynomial index within the vector, and monomial.
pub type CoordKey = (usize, Monomial);

/// Sparse coordinates of a polynomial vector, sorted by polynomial index
/// and then canonical monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoordVector {
    pub entries: Vec<(CoordKey, u64)>,
}

impl CoordVector {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inverse of [`coordinatize`].
    pub fn reconstruct(&self, ring: RingParams, len: usize) -> Result<PolyVector> {
        let mut terms: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); len];
        for ((slot, m), c) in &self.entries {
            let bucket = terms
                .get_mut(*slot)
                .ok_or_else(|| Error::dim(format!("coordinate slot {slot} beyond length {len}")))?;
            bucket.push((m.clone(), *c));
        }
        let polys = terms
            .into_iter()
            .map(|t| SparsePoly::from_canonical_terms(ring, t))
            .collect::<Result<Vec<_>>>()?;
        PolyVector::new(ring, polys)
    }
}

pub fn coordinatize(u: &PolyVector) -> CoordVector {
    CoordVector {
        entries: u
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| ((i, m.clone()), *c)))
            .collect(),
    }
}

/// A reduced row-echelon basis over `GF(p)`. Each row also records which
/// combination of the inserted vectors produced it.
#[derive(Clone, Debug)]
struct Echelon {
    p: u8,
    rows: Vec<EchelonRow>,
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    vec: Vec<u8>,
    comb: Vec<u8>,
}

fn axpy(dst: &mut Vec<u8>, f: u8, src: &[u8], p: u8) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = (*d + (p - f) * s) % p;
    }
}

impl Echelon {
    fn new(p: u8) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Reduces `(vec, comb)` against every row.
    fn reduce(&self, vec: &mut Vec<u8>, comb: &mut Vec<u8>) {
        for row in &self.rows {
            let f = vec.get(row.pivot).copied().unwrap_or(0);
            if f != 0 {
                axpy(vec, f, &row.vec, self.p);
                axpy(comb, f, &row.comb, self.p);
            }
        }
    }

    /// Inserts the vector with index `id` among all inserted vectors.
    fn insert(&mut self, mut vec: Vec<u8>, id: usize) {
        let p = self.p;
        let mut comb = vec![0u8; id + 1];
        comb[id] = 1;
        self.reduce(&mut vec, &mut comb);
        let Some(pivot) = vec.iter().position(|&v| v != 0) else {
            return;
        };
        let inv = inv_mod(vec[pivot], p);
        vec.iter_mut().for_each(|v| *v = *v * inv % p);
        comb.iter_mut().for_each(|v| *v = *v * inv % p);
        for row in &mut self.rows {
            let f = row.vec.get(pivot).copied().unwrap_or(0);
            if f != 0 {
                axpy(&mut row.vec, f, &vec, p);
                axpy(&mut row.comb, f, &comb, p);
            }
        }
        self.rows.push(EchelonRow { pivot, vec, comb });
    }

    /// Coefficients `c` with `target = sum c_i * inserted_i`, if any.
    fn express(&self, mut target: Vec<u8>, count: usize) -> Option<Vec<u8>> {
        let mut comb = vec![0u8; count];
        self.reduce(&mut target, &mut comb);
        if target.iter().any(|&v| v != 0) {
            return None;
        }
        // reduce left target - sum(...) = 0; negate to get the coefficients
        let p = self.p;
        comb.resize(count, 0);
        Some(comb.into_iter().map(|c| (p - c) % p).collect())
    }
}

/// Collected `(U, V)` pairs with echelon bases of the `U` coordinates over
/// `Z_2` and `Z_3`.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    ring: RingParams,
    columns: HashMap<CoordKey, usize>,
    pairs: Vec<(PolyVector, PolyVector)>,
    components: [Echelon; 2],
}

impl SpanBasis {
    pub fn new(ring: RingParams) -> Result<Self> {
        if ring.q != 6 {
            return Err(Error::domain(format!(
                "span basis works over Z_6, ring has q={}",
                ring.q
            )));
        }
        Ok(SpanBasis {
            ring,
            columns: HashMap::new(),
            pairs: Vec::new(),
            components: PRIMES.map(Echelon::new),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Ranks of the collected `U`s over `Z_2` and `Z_3`.
    pub fn ranks(&self) -> (usize, usize) {
        (self.components[0].rows.len(), self.components[1].rows.len())
    }

    /// Number of distinct coordinates seen so far.
    pub fn dimension_seen(&self) -> usize {
        self.columns.len()
    }

    fn dense(&self, c: &CoordVector, p: u8) -> Option<Vec<u8>> {
        let mut out = vec![0u8; self.columns.len()];
        for (key, v) in &c.entries {
            let r = (v % p as u64) as u8;
            match self.columns.get(key) {
                Some(&col) => out[col] = r,
                None if r != 0 => return None,
                None => {}
            }
        }
        Some(out)
    }

    pub fn add(&mut self, u: PolyVector, v: PolyVector) -> Result<()> {
        self.ring.check_same(&u.ring())?;
        self.ring.check_same(&v.ring())?;
        if let Some((u0, v0)) = self.pairs.first() {
            if u0.len() != u.len() || v0.len() != v.len() {
                return Err(Error::dim("pair lengths differ from earlier pairs"));
            }
        }
        let coords = coordinatize(&u);
        for (key, _) in &coords.entries {
            let next = self.columns.len();
            self.columns.entry(key.clone()).or_insert(next);
        }
        let id = self.pairs.len();
        for i in 0..self.components.len() {
            let dense = self.dense_for(&coords, self.components[i].p);
            self.components[i].insert(dense, id);
        }
        self.pairs.push((u, v));
        Ok(())
    }

    fn dense_for(&self, c: &CoordVector, p: u8) -> Vec<u8> {
        self.dense(c, p).expect("all coordinates registered")
    }

    /// Coefficients over `Z_6` expressing `target` in the collected `U`s.
    pub fn express(&self, target: &PolyVector) -> Option<Vec<u64>> {
        let coords = coordinatize(target);
        let n = self.pairs.len();
        let c2 = self.components[0].express(self.dense(&coords, 2)?, n)?;
        let c3 = self.components[1].express(self.dense(&coords, 3)?, n)?;
        Some(c2.into_iter().zip(c3).map(|(a, b)| crt6(a, b)).collect())
    }

    /// `sum c_i * V_i`.
    pub fn combine(&self, coeffs: &[u64]) -> Result<PolyVector> {
        if coeffs.len() != self.pairs.len() {
            return Err(Error::dim("one coefficient per collected pair required"));
        }
        let len = self.pairs.first().map(|(_, v)| v.len()).unwrap_or(0);
        let mut acc = PolyVector::zeros(self.ring, len);
        for (c, (_, v)) in coeffs.iter().zip(&self.pairs) {
            if *c != 0 {
                acc = acc.add(&v.scale(*c as i64))?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[Vec<u64>], b: &[u64], cols: usize) -> bool {
        let total = 6usize.pow(cols as u32);
        (0..total).any(|mut idx| {
            let x: Vec<u64> = (0..cols)
                .map(|_| {
                    let d = (idx % 6) as u64;
                    idx /= 6;
                    d
                })
                .collect();
            a.iter()
                .zip(b)
                .all(|(row, &rhs)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<u64>() % 6 == rhs)
        })
    }

    #[test]
    fn single_equations() {
        assert_eq!(solve_mod6(&[vec![5]], &[1], 1).unwrap(), Some(vec![5]));
        let x = solve_mod6(&[vec![2]], &[4], 1).unwrap().unwrap();
        assert!(x == vec![2] || x == vec![5]);
        assert_eq!(solve_mod6(&[vec![2]], &[1], 1).unwrap(), None);
        assert!(solve_mod6(&[vec![1, 2]], &[1], 1).is_err());
        assert!(solve_mod6(&[vec![1]], &[1, 2], 1).is_err());
    }

    #[test]
    fn all_two_by_two_systems() {
        for code in 0..6u64.pow(6) {
            let mut c = code;
            let mut d = || {
                let v = c % 6;
                c /= 6;
                v
            };
            let a = vec![vec![d(), d()], vec![d(), d()]];
            let b = vec![d(), d()];
            let got = solve_mod6(&a, &b, 2).unwrap();
            assert_eq!(got.is_some(), brute(&a, &b, 2), "{a:?} {b:?}");
            if let Some(x) = got {
                for (row, rhs) in a.iter().zip(&b) {
                    assert_eq!((row[0] * x[0] + row[1] * x[1]) % 6, *rhs);
                }
            }
        }
    }

    #[test]
    fn span_with_constructed_dependency() {
        let ring = RingParams::new(6, 3).unwrap();
        let x = |i| SparsePoly::var(ring, i).unwrap();
        let u1 = PolyVector::new(ring, vec![x(1), SparsePoly::constant(ring, 2)]).unwrap();
        let u2 = PolyVector::new(ring, vec![x(2), x(3)]).unwrap();
        let u3 = u1.add(&u2).unwrap();
        let v1 = PolyVector::new(ring, vec![x(3)]).unwrap();
        let v2 = PolyVector::new(ring, vec![SparsePoly::constant(ring, 5)]).unwrap();
        let mut basis = SpanBasis::new(ring).unwrap();
        assert!(basis.express(&u1).is_none());
        basis.add(u1.clone(), v1.clone()).unwrap();
        basis.add(u2, v2.clone()).unwrap();
        assert_eq!(basis.ranks(), (2, 2));
        let c = basis.express(&u3).unwrap();
        assert_eq!(c, vec![1, 1]);
        assert_eq!(basis.combine(&c).unwrap(), v1.add(&v2).unwrap());
        assert_eq!(basis.express(&u1).unwrap(), vec![1, 0]);
        assert!(basis.express(&PolyVector::new(ring, vec![x(2), x(2)]).unwrap()).is_none());
    }

    #[test]
    fn coordinates_round_trip() {
        let ring = RingParams::new(6, 3).unwrap();
        let p = SparsePoly::var(ring, 1).unwrap().pow(2).add(&SparsePoly::constant(ring, 4)).unwrap();
        let u = PolyVector::new(ring, vec![SparsePoly::zero(ring), p]).unwrap();
        let c = coordinatize(&u);
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.reconstruct(ring, 2).unwrap(), u);
        assert!(coordinatize(&PolyVector::zeros(ring, 3)).is_zero());
    }
}
