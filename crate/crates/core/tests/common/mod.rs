//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use polysig::{Monomial, RingParams, SparsePoly, Var};
use rand::Rng;

/// Largest exponent a dense polynomial can hold in each variable.
pub const MAX_EXP: usize = 8;
const BASE: usize = MAX_EXP + 1;

/// A polynomial over `Z_q` in `n <= 3` variables stored as a full
/// coefficient array indexed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub n: usize,
    pub q: u64,
    pub coeffs: Vec<u64>,
}

impl Dense {
    pub fn zero(n: usize, q: u64) -> Self {
        Dense { n, q, coeffs: vec![0; BASE.pow(n as u32)] }
    }

    fn index(&self, exps: &[usize]) -> usize {
        exps.iter().rev().fold(0, |acc, &e| acc * BASE + e)
    }

    fn exps(&self, mut idx: usize) -> Vec<usize> {
        (0..self.n)
            .map(|_| {
                let e = idx % BASE;
                idx /= BASE;
                e
            })
            .collect()
    }

    /// Adds `c * prod x_i^{exps[i]}`; raw, unreduced terms are fine.
    pub fn add_term(&mut self, exps: &[usize], c: u64) {
        let i = self.index(exps);
        self.coeffs[i] = (self.coeffs[i] + c) % self.q;
    }

    pub fn add(&self, o: &Dense) -> Dense {
        let mut r = self.clone();
        for (a, b) in r.coeffs.iter_mut().zip(&o.coeffs) {
            *a = (*a + b) % self.q;
        }
        r
    }

    pub fn neg(&self) -> Dense {
        let mut r = self.clone();
        r.coeffs.iter_mut().for_each(|a| *a = (self.q - *a) % self.q);
        r
    }

    pub fn scale(&self, c: u64) -> Dense {
        let mut r = self.clone();
        r.coeffs.iter_mut().for_each(|a| *a = *a * c % self.q);
        r
    }

    /// Schoolbook convolution; panics if an exponent would exceed `MAX_EXP`.
    pub fn mul(&self, o: &Dense) -> Dense {
        let mut r = Dense::zero(self.n, self.q);
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            let ea = self.exps(i);
            for (j, &b) in o.coeffs.iter().enumerate().filter(|(_, b)| **b != 0) {
                let e: Vec<usize> = ea.iter().zip(o.exps(j)).map(|(x, y)| x + y).collect();
                assert!(e.iter().all(|&x| x <= MAX_EXP), "dense oracle exponent overflow");
                r.add_term(&e, a * b);
            }
        }
        r
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let mut t = c;
            for (x, e) in point.iter().zip(self.exps(i)) {
                for _ in 0..e {
                    t = t * x % self.q;
                }
            }
            acc = (acc + t) % self.q;
        }
        acc
    }

    pub fn from_sparse(p: &SparsePoly, n: usize) -> Dense {
        let mut d = Dense::zero(n, p.ring().q);
        for (m, c) in p.terms() {
            let mut e = vec![0; n];
            for &(v, x) in m.factors() {
                e[v as usize - 1] = x as usize;
            }
            d.add_term(&e, *c);
        }
        d
    }
}

/// Raw terms (possibly repeated monomials, possibly zero coefficients) with
/// total degree at most `max_deg`.
pub fn random_raw_terms<R: Rng>(rng: &mut R, n: usize, max_deg: usize, max_terms: usize) -> Vec<(Vec<usize>, u64)> {
    let count = rng.gen_range(0..=max_terms);
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(0..=max_deg);
            let mut e = vec![0; n];
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            (e, rng.gen_range(0..6))
        })
        .collect()
}

pub fn to_sparse(ring: RingParams, raw: &[(Vec<usize>, u64)]) -> SparsePoly {
    let terms: Vec<(Monomial, i64)> = raw
        .iter()
        .map(|(e, c)| {
            let m = Monomial::from_pairs(e.iter().enumerate().map(|(i, &x)| ((i + 1) as Var, x as u32)));
            (m, *c as i64)
        })
        .collect();
    SparsePoly::canonicalize(terms, ring).unwrap()
}

pub fn to_dense(n: usize, q: u64, raw: &[(Vec<usize>, u64)]) -> Dense {
    let mut d = Dense::zero(n, q);
    for (e, c) in raw {
        d.add_term(e, *c);
    }
    d
}

/// Checks every ring operation on one random pair against the dense
/// oracle. Returns a description of the first disagreement.
pub fn oracle_case<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.gen_range(1..=3usize);
    let ring = RingParams::new(6, n as u16).unwrap();
    let ra = random_raw_terms(rng, n, 4, 6);
    let rb = random_raw_terms(rng, n, 4, 6);
    let (a, b) = (to_sparse(ring, &ra), to_sparse(ring, &rb));
    let (da, db) = (to_dense(n, 6, &ra), to_dense(n, 6, &rb));
    let check = |what: &str, s: &SparsePoly, d: &Dense| -> Result<(), String> {
        if Dense::from_sparse(s, n) != *d {
            return Err(format!("{what} differs for a={a} b={b}: got {s}"));
        }
        Ok(())
    };
    check("a", &a, &da)?;
    check("add", &a.add(&b).unwrap(), &da.add(&db))?;
    check("sub", &a.sub(&b).unwrap(), &da.add(&db.neg()))?;
    check("neg", &a.neg(), &da.neg())?;
    let c = rng.gen_range(0..6u64);
    check("scale", &a.scale(c as i64), &da.scale(c))?;
    check("mul", &a.mul(&b).unwrap(), &da.mul(&db))?;
    let point: Vec<u64> = (0..n).map(|_| rng.gen_range(0..6)).collect();
    let got = a.evaluate(&point).unwrap();
    if got != da.eval(&point) {
        return Err(format!("evaluate differs for a={a} at {point:?}"));
    }
    Ok(())
}

/// Whether `A x = b` has a solution over `Z_6`, by trying every `x`.
pub fn brute_solvable(a: &[Vec<u64>], b: &[u64], cols: usize) -> bool {
    let total = 6usize.pow(cols as u32);
    let mut x = vec![0u64; cols];
    for mut idx in 0..total {
        for xi in x.iter_mut() {
            *xi = (idx % 6) as u64;
            idx /= 6;
        }
        if a
            .iter()
            .zip(b)
            .all(|(row, &r)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<u64>() % 6 == r)
        {
            return true;
        }
    }
    false
}

/// Compares `solve_mod6` with enumeration on one system; an `Err` names the
/// mismatch.
pub fn check_system(a: &[Vec<u64>], b: &[u64], cols: usize) -> Result<(), String> {
    let got = polysig::cryptanalysis::solve_mod6(a, b, cols).map_err(|e| e.to_string())?;
    let expect = brute_solvable(a, b, cols);
    match got {
        Some(x) => {
            for (row, &r) in a.iter().zip(b) {
                if row.iter().zip(&x).map(|(p, q)| p * q).sum::<u64>() % 6 != r {
                    return Err(format!("returned non-solution {x:?} for {a:?} {b:?}"));
                }
            }
            if !expect {
                return Err(format!("solution claimed for unsolvable {a:?} {b:?}"));
            }
        }
        None if expect => return Err(format!("missed a solution of {a:?} {b:?}")),
        None => {}
    }
    Ok(())
}

/// Runs [`check_system`] on every system with `rows` equations in `cols`
/// unknowns. Returns the number of systems checked.
pub fn exhaustive_systems(rows: usize, cols: usize) -> Result<u64, String> {
    let entries = rows * (cols + 1);
    let total = 6u64.pow(entries as u32);
    let mut vals = vec![0u64; entries];
    for mut code in 0..total {
        for v in vals.iter_mut() {
            *v = code % 6;
            code /= 6;
        }
        let a: Vec<Vec<u64>> = (0..rows).map(|r| vals[r * (cols + 1)..r * (cols + 1) + cols].to_vec()).collect();
        let b: Vec<u64> = (0..rows).map(|r| vals[r * (cols + 1) + cols]).collect();
        check_system(&a, &b, cols)?;
    }
    Ok(total)
}

/// Shapes `(rows, cols)` small enough to enumerate completely.
pub const EXHAUSTIVE_SHAPES: [(usize, usize); 8] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (4, 1)];
