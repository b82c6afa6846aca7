//! Spectral numbers and spectral pairs for unit upper triangular matrices.
//!
//! Exact arithmetic (big rationals, cyclotomic angles) is used wherever the
//! input allows it; everything else falls back to `f64` with explicit
//! tolerances.

pub mod chain;
pub mod cyclo;
pub mod error;
pub mod hor;
pub mod json;
pub mod linalg;
pub mod lowdim;
pub mod numeric;
pub mod orbit;
pub mod polycore;
pub mod real;
pub mod seifert;
pub mod selftest;
pub mod spectra;

pub use error::{Error, Result};
pub use linalg::{Matrix, Poly};
pub use real::{Rational, Real};

/// Arithmetic backend requested by a caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}
