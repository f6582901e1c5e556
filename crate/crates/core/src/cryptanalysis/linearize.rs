//! Recovers a left inverse of a public matrix by linearization: every entry
//! of the unknown `X` (`l x k`) is a generic polynomial of degree `<= D`, and
//! `X * M = I` becomes a linear system in the coefficients.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::PolyMatrix;
use crate::matrix_sig::MatrixPublicKey;
use crate::poly::{Monomial, RingParams, SparsePoly, Var};

use super::counting::{count_monomials, DegreeRange};
use super::linear::solve_mod6;

/// Largest system the attack will build by default.
pub const DEFAULT_UNKNOWN_LIMIT: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearizationOutcome {
    Recovered {
        inverse: PolyMatrix,
        unknowns: usize,
        equations: usize,
    },
    /// No left inverse with entries of degree `<= degree` exists.
    NoSolution {
        degree: u32,
        unknowns: usize,
        equations: usize,
    },
    /// The system exceeds the unknown limit and was not built.
    Refused { unknowns: BigUint, limit: u64 },
}

/// `l * k * #{monomials of degree <= D in n variables}`.
pub fn linearization_unknowns(n: u16, k: usize, l: usize, degree: u32) -> BigUint {
    count_monomials(
        n as u64,
        DegreeRange::UpTo {
            max: degree as u64,
            include_constant: true,
        },
    ) * (k * l)
}

fn monomials_up_to(n: u16, degree: u32) -> Vec<Monomial> {
    fn rec(var: Var, n: u16, left: u32, cur: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
        if var > n {
            out.push(Monomial::from_canonical(cur).expect("built in order"));
            return;
        }
        for e in 0..=left {
            if e > 0 {
                cur.push((var, e));
            }
            rec(var + 1, n, left - e, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(1, n, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn linearization_attack(
    pk: &MatrixPublicKey,
    degree: u32,
    limit: u64,
) -> Result<LinearizationOutcome> {
    let ring = pk.m.ring();
    if ring.q != 6 {
        return Err(Error::domain("linearization works over Z_6"));
    }
    let (k, l) = (pk.m.rows(), pk.m.cols());
    let total = linearization_unknowns(ring.n, k, l, degree);
    if total > BigUint::from(limit) {
        return Ok(LinearizationOutcome::Refused {
            unknowns: total,
            limit,
        });
    }
    let total = total.to_usize().expect("below limit");
    let basis = monomials_up_to(ring.n, degree);
    let per_row = k * basis.len();

    // The unknowns of one row of X are x_{i,j}, the coefficient of basis[j]
    // in X[r][i]; equation (c, mono) collects the coefficient of mono in
    // column c of (X * M)[r]. The matrix is the same for every row r.
    let mut eq_index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, u64)>> = Vec::new();
    for i in 0..k {
        for (j, b) in basis.iter().enumerate() {
            let unknown = i * basis.len() + j;
            for c in 0..l {
                for (m, coef) in pk.m.get(i, c).terms() {
                    let key = (c, b.mul(m));
                    let next = eq_index.len();
                    let e = *eq_index.entry(key).or_insert_with(|| {
                        entries.push(Vec::new());
                        next
                    });
                    entries[e].push((unknown, *coef));
                }
            }
        }
    }
    for c in 0..l {
        let next = eq_index.len();
        eq_index.entry((c, Monomial::one())).or_insert_with(|| {
            entries.push(Vec::new());
            next
        });
    }
    let equations = entries.len();
    let a: Vec<Vec<u64>> = entries
        .iter()
        .map(|row| {
            let mut dense = vec![0u64; per_row];
            for &(u, v) in row {
                dense[u] = (dense[u] + v) % 6;
            }
            dense
        })
        .collect();

    let mut rows = Vec::with_capacity(l);
    for r in 0..l {
        let mut b = vec![0u64; equations];
        b[eq_index[&(r, Monomial::one())]] = 1;
        let Some(x) = solve_mod6(&a, &b, per_row)? else {
            return Ok(LinearizationOutcome::NoSolution {
                degree,
                unknowns: total,
                equations: equations * l,
            });
        };
        rows.push(row_polys(ring, &basis, &x, k)?);
    }
    let inverse = PolyMatrix::from_rows(ring, rows)?;
    if !inverse.mul(&pk.m)?.is_identity() {
        return Err(Error::domain("recovered matrix is not a left inverse"));
    }
    Ok(LinearizationOutcome::Recovered {
        inverse,
        unknowns: total,
        equations: equations * l,
    })
}

fn row_polys(ring: RingParams, basis: &[Monomial], x: &[u64], k: usize) -> Result<Vec<SparsePoly>> {
    (0..k)
        .map(|i| {
            let terms: Vec<(Monomial, u64)> = basis
                .iter()
                .zip(&x[i * basis.len()..(i + 1) * basis.len()])
                .filter(|(_, &c)| c != 0)
                .map(|(m, &c)| (m.clone(), c))
                .collect();
            SparsePoly::from_canonical_terms(ring, terms)
        })
        .collect()
}
