use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Variable index, 1-based as in `x1..xn`.
pub type Var = u16;

pub(crate) type Factors = SmallVec<[(Var, u32); 6]>;

/// A power product `x_{i1}^{e1} * ... * x_{im}^{em}` with strictly increasing
/// indices and positive exponents. The empty product is the monomial `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Factors,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(index: Var) -> Self {
        Self::pow(index, 1)
    }

    pub fn pow(index: Var, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let mut factors = Factors::new();
        factors.push((index, exp));
        Monomial { degree: exp, factors }
    }

    /// Builds a monomial from `(index, exponent)` pairs in any order. Repeated
    /// indices are multiplied together and zero exponents are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut factors: Factors = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable_by_key(|&(v, _)| v);
        let mut merged = Factors::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged.iter().map(|&(_, e)| e).sum();
        Monomial {
            degree,
            factors: merged,
        }
    }

    /// Builds a monomial from a factor list that must already be canonical.
    pub fn from_canonical(factors: &[(Var, u32)]) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain(format!(
                    "variable indices not strictly increasing: x{} then x{}",
                    w[0].0, w[1].0
                )));
            }
        }
        if factors.iter().any(|&(_, e)| e == 0) {
            return Err(Error::domain("zero exponent in monomial"));
        }
        Ok(Monomial {
            degree: factors.iter().map(|&(_, e)| e).sum(),
            factors: factors.iter().copied().collect(),
        })
    }

    pub(crate) fn from_factors_unchecked(factors: Factors, degree: u32) -> Self {
        Monomial { degree, factors }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_exponent(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<Var> {
        self.factors.last().map(|&(v, _)| v)
    }

    pub fn exponent(&self, index: Var) -> u32 {
        self.factors
            .binary_search_by_key(&index, |&(v, _)| v)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn contains(&self, index: Var) -> bool {
        self.exponent(index) > 0
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    /// Product of two monomials (merge of sorted factor lists).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Factors::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }

    /// Splits off the factors whose index satisfies `pred`; returns
    /// `(selected, rest)`.
    pub(crate) fn split_by<F: Fn(Var) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let mut sel = Factors::new();
        let mut rest = Factors::new();
        for &(v, e) in &self.factors {
            if pred(v) {
                sel.push((v, e));
            } else {
                rest.push((v, e));
            }
        }
        let deg = |f: &Factors| f.iter().map(|&(_, e)| e).sum();
        (
            Monomial {
                degree: deg(&sel),
                factors: sel,
            },
            Monomial {
                degree: deg(&rest),
                factors: rest,
            },
        )
    }

    /// Renames every variable through `map` (which must be injective on the
    /// variables present).
    pub(crate) fn rename<F: Fn(Var) -> Var>(&self, map: F) -> Monomial {
        let mut factors: Factors = self.factors.iter().map(|&(v, e)| (map(v), e)).collect();
        factors.sort_unstable_by_key(|&(v, _)| v);
        Monomial {
            degree: self.degree,
            factors,
        }
    }
}

/// Graded order: higher total degree first, ties broken by comparing the
/// factor lists lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree
            .cmp(&self.degree)
            .then_with(|| self.factors.as_slice().cmp(other.factors.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, &(v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
