//! Named parameter sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_sig::MatrixSigParams;
use crate::scrap::ScrapParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `q=6, n=64, k=10, l=5, t=3, b=3`.
    PaperMatrix,
    /// As above with `k=5, l=3`.
    ImplMatrix,
    /// `q=6, n=32, k=16, t=3, b=3, s=16`.
    PaperScrap,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::PaperMatrix, Preset::ImplMatrix, Preset::PaperScrap];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::PaperMatrix => "paper-matrix",
            Preset::ImplMatrix => "impl-matrix",
            Preset::PaperScrap => "paper-scrap",
        }
    }

    pub fn params(&self) -> ParamSet {
        match self {
            Preset::PaperMatrix => ParamSet::Matrix(MatrixSigParams::paper()),
            Preset::ImplMatrix => ParamSet::Matrix(MatrixSigParams::implemented()),
            Preset::PaperScrap => ParamSet::Scrap(ScrapParams::paper()),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown preset {s:?}")))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters for either family; the matrix form also serves encryption.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ParamSet {
    Matrix(MatrixSigParams),
    Scrap(ScrapParams),
}

impl ParamSet {
    pub fn matrix(&self) -> Result<MatrixSigParams> {
        match self {
            ParamSet::Matrix(p) => Ok(*p),
            ParamSet::Scrap(_) => Err(Error::domain("expected matrix parameters, got scrap")),
        }
    }

    pub fn scrap(&self) -> Result<ScrapParams> {
        match self {
            ParamSet::Scrap(p) => Ok(*p),
            ParamSet::Matrix(_) => Err(Error::domain("expected scrap parameters, got matrix")),
        }
    }

    /// Parses a preset name or a JSON parameter document.
    pub fn parse(text: &str) -> Result<Self> {
        if let Ok(p) = text.trim().parse::<Preset>() {
            return Ok(p.params());
        }
        serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })
    }
}
