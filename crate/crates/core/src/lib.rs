//! Digital signatures over sparse multivariate polynomials in `Z_q[x1..xn]`.
//!
//! Two schemes are provided: one whose public key is a left-invertible
//! non-square polynomial matrix ([`matrix_sig`]), and one whose public key is
//! a partial list of generator images of a polynomial automorphism
//! ([`scrap`]). The matrix scheme also yields a public-key encryption variant
//! ([`pke`]). [`cryptanalysis`] contains runnable versions of the known
//! linear-algebra attacks and exact counts of the relevant search spaces.

pub mod cryptanalysis;
pub mod error;
pub mod hash_encode;
pub mod io;
pub mod linalg;
pub mod matrix_sig;
pub mod pke;
pub mod poly;
pub mod sampling;
pub mod scrap;

pub use error::{Error, Result};
pub use linalg::{FactoredInvertible, PolyMatrix, PolyVector};
pub use poly::{Monomial, RingParams, SparsePoly, Var};
pub use sampling::RngStream;
