//! Forgeries that need no private key.
//!
//! Matrix scheme: signing is linear, `V = U * L`. Once the collected hash
//! vectors `U_1..U_r` span a target hash `U`, the matching combination of
//! their signatures is a valid signature of the target.
//!
//! Scrap scheme: the signature `S = alpha^-1(Q(y))` expressed in the
//! `y`-variables is just `Q` with `y_j` renamed to `x_{i_j}`, which anyone
//! can compute from the public key.

use crate::error::{Error, Result};
use crate::hash_encode::HashVectorParams;
use crate::matrix_sig::{message_vector, MatrixPublicKey, MatrixSigParams, MatrixSignature};
use crate::poly::RingParams;
use crate::sampling::DegreeMode;
use crate::scrap::{message_poly, ScrapPublicKey, ScrapSignature};

use super::linear::SpanBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForgeOutcome {
    Forged {
        signature: MatrixSignature,
        /// Coefficients over `Z_6` of each collected signature.
        coefficients: Vec<u64>,
        queries: usize,
        rank2: usize,
        rank3: usize,
    },
    Exhausted {
        queries: usize,
        rank2: usize,
        rank3: usize,
    },
}

impl ForgeOutcome {
    pub fn queries(&self) -> usize {
        match self {
            ForgeOutcome::Forged { queries, .. } | ForgeOutcome::Exhausted { queries, .. } => *queries,
        }
    }
}

/// The `i`-th message sent to the signing oracle.
pub fn query_message(i: usize) -> Vec<u8> {
    format!("span-query-{i}").into_bytes()
}

/// Queries `oracle` on [`query_message`]`(0), (1), ...` until the target's
/// hash vector lies in the span of the collected ones, or `budget` queries
/// have been made. Works over `Z_6` only.
pub fn span_forge<F>(
    pk: &MatrixPublicKey,
    mut oracle: F,
    target: &[u8],
    budget: usize,
) -> Result<ForgeOutcome>
where
    F: FnMut(&[u8]) -> Result<MatrixSignature>,
{
    let ring = pk.params.ring;
    let mut basis = SpanBasis::new(ring)?;
    let goal = message_vector(target, &pk.layout, ring)?;
    let forged = |basis: &SpanBasis, queries: usize| -> Result<Option<ForgeOutcome>> {
        let Some(coefficients) = basis.express(&goal) else {
            return Ok(None);
        };
        let (rank2, rank3) = basis.ranks();
        Ok(Some(ForgeOutcome::Forged {
            signature: MatrixSignature {
                v: basis.combine(&coefficients)?,
            },
            coefficients,
            queries,
            rank2,
            rank3,
        }))
    };
    if goal.is_zero() {
        if let Some(out) = forged(&basis, 0)? {
            return Ok(out);
        }
    }
    for i in 0..budget {
        let m = query_message(i);
        let sig = oracle(&m)?;
        if sig.v.len() != pk.m.rows() {
            return Err(Error::dim("oracle returned a signature of the wrong length"));
        }
        basis.add(message_vector(&m, &pk.layout, ring)?, sig.v)?;
        if let Some(out) = forged(&basis, i + 1)? {
            return Ok(out);
        }
    }
    let (rank2, rank3) = basis.ranks();
    Ok(ForgeOutcome::Exhausted {
        queries: budget,
        rank2,
        rank3,
    })
}

/// A small hash layout whose vectors live in 15 coordinates: three
/// polynomials over `x1..x4`, each a combination of `1, x1, .., x4`. Every
/// 1-bit sub-block either keeps the constant or picks one mapped variable,
/// so all coordinates are hit often and collected vectors span quickly.
/// Monomials of degree 2 would make the squares rare and slow the span
/// down.
pub fn toy_forgery_layout() -> HashVectorParams {
    HashVectorParams {
        l: 3,
        n: 4,
        discard: 12,
        map_src: 244,
        map_bits: 2,
        block_bits: 4,
        sub_block: 1,
        monomials_per_poly: 4,
    }
}

/// Number of coordinates the toy layout can reach.
pub const TOY_REACHABLE_DIMENSION: usize = 15;

/// Parameters matching [`toy_forgery_layout`].
pub fn toy_forgery_params() -> MatrixSigParams {
    MatrixSigParams {
        ring: RingParams { q: 6, n: 4 },
        k: 5,
        l: 3,
        t: 2,
        degree_mode: DegreeMode::UpTo(2),
        numeric_reps: 8,
    }
}

/// A scrap signature computed from public data only.
pub fn public_scrap_forgery(pk: &ScrapPublicKey, m: &[u8]) -> Result<ScrapSignature> {
    Ok(ScrapSignature {
        s: message_poly(m, pk)?,
    })
}
