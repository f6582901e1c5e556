//! The size accounting used for published key and signature sizes: 7 bits
//! for every variable occurrence (an exponent `e` counts `e` times) plus 2
//! bits for every monomial's coefficient.
//!
//! Two bits cannot name every element of `Z_6`; the figure is an accounting
//! convention, not an encoding. Serialized sizes are reported separately.

use serde::Serialize;

use crate::linalg::{PolyMatrix, PolyVector};
use crate::matrix_sig::{MatrixPrivateKey, MatrixPublicKey, MatrixSignature};
use crate::pke::{Ciphertext, PkePrivateKey, PkePublicKey};
use crate::poly::SparsePoly;
use crate::scrap::{AutoWord, ElementaryAuto, ScrapPrivateKey, ScrapPublicKey, ScrapSignature};

pub const BITS_PER_VARIABLE: u64 = 7;
pub const BITS_PER_COEFFICIENT: u64 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub occurrences: u64,
    pub monomials: u64,
    pub bits: u64,
    pub bytes: u64,
}

impl SizeReport {
    pub fn from_counts(occurrences: u64, monomials: u64) -> Self {
        let bits = BITS_PER_VARIABLE * occurrences + BITS_PER_COEFFICIENT * monomials;
        SizeReport {
            occurrences,
            monomials,
            bits,
            bytes: bits.div_ceil(8),
        }
    }

    pub fn of_polys<'a, I: IntoIterator<Item = &'a SparsePoly>>(polys: I) -> Self {
        let (mut occ, mut mons) = (0, 0);
        for p in polys {
            for (m, _) in p.terms() {
                occ += m.degree() as u64;
                mons += 1;
            }
        }
        Self::from_counts(occ, mons)
    }
}

pub trait SizeMetric {
    fn size_report(&self) -> SizeReport;
}

pub fn size_metric<T: SizeMetric + ?Sized>(value: &T) -> SizeReport {
    value.size_report()
}

impl SizeMetric for SparsePoly {
    fn size_report(&self) -> SizeReport {
        SizeReport::of_polys([self])
    }
}

impl SizeMetric for PolyVector {
    fn size_report(&self) -> SizeReport {
        SizeReport::of_polys(self.entries())
    }
}

impl SizeMetric for PolyMatrix {
    fn size_report(&self) -> SizeReport {
        SizeReport::of_polys(self.entries())
    }
}

impl SizeMetric for MatrixPublicKey {
    fn size_report(&self) -> SizeReport {
        self.m.size_report()
    }
}

impl SizeMetric for MatrixPrivateKey {
    fn size_report(&self) -> SizeReport {
        self.l.size_report()
    }
}

impl SizeMetric for MatrixSignature {
    fn size_report(&self) -> SizeReport {
        self.v.size_report()
    }
}

impl SizeMetric for ScrapPublicKey {
    fn size_report(&self) -> SizeReport {
        SizeReport::of_polys(&self.images)
    }
}

impl SizeMetric for AutoWord {
    /// Only the polynomials of the triangular steps are counted.
    fn size_report(&self) -> SizeReport {
        SizeReport::of_polys(self.elements().iter().filter_map(|e| match e {
            ElementaryAuto::TriangularSub { h, .. } => Some(h),
            ElementaryAuto::VarPermutation { .. } => None,
        }))
    }
}

impl SizeMetric for ScrapPrivateKey {
    fn size_report(&self) -> SizeReport {
        self.inverse.size_report()
    }
}

impl SizeMetric for ScrapSignature {
    fn size_report(&self) -> SizeReport {
        self.s.size_report()
    }
}

impl SizeMetric for PkePublicKey {
    fn size_report(&self) -> SizeReport {
        self.l.size_report()
    }
}

impl SizeMetric for PkePrivateKey {
    fn size_report(&self) -> SizeReport {
        self.m.size_report()
    }
}

impl SizeMetric for Ciphertext {
    fn size_report(&self) -> SizeReport {
        self.v.size_report()
    }
}
