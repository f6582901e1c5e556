//! Sparse multivariate polynomials over `Z_q`.
//!
//! `q` may be composite (the schemes use `q = 6`), so nothing here assumes
//! the coefficients form a field. Every value is kept in canonical form,
//! which makes structural equality the same as polynomial equality.

mod accumulate;
mod monomial;
mod sparse;

pub use monomial::{Monomial, Var};
pub use sparse::SparsePoly;

pub(crate) use accumulate::{sum_of_products, Accumulator};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring `Z_q` and number of variables `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    pub q: u64,
    pub n: u16,
}

impl RingParams {
    /// Largest supported modulus; keeps coefficient products inside `u64`.
    pub const MAX_Q: u64 = 1 << 31;

    pub fn new(q: u64, n: u16) -> Result<Self> {
        let r = RingParams { q, n };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || self.q > Self::MAX_Q {
            return Err(Error::domain(format!("modulus q={} out of range", self.q)));
        }
        if self.n == 0 {
            return Err(Error::domain("ring needs at least one variable"));
        }
        Ok(())
    }

    pub fn reduce(&self, c: i64) -> u64 {
        c.rem_euclid(self.q as i64) as u64
    }

    pub fn check_var(&self, index: Var) -> Result<()> {
        if index == 0 || index > self.n {
            return Err(Error::domain(format!(
                "variable x{index} outside x1..x{}",
                self.n
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &RingParams) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch {
                left_q: self.q,
                left_n: self.n,
                right_q: other.q,
                right_n: other.n,
            });
        }
        Ok(())
    }

    pub fn generators(&self) -> Vec<SparsePoly> {
        (1..=self.n)
            .map(|i| SparsePoly::var(*self, i).expect("index in range"))
            .collect()
    }
}
