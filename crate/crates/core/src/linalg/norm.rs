use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::eigen::{HermitianEigen, HERMITIAN_TOL};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Schatten index `p` in `[1, ∞]`.
///
/// `Infinity` is a distinct variant so the operator norm is never
/// approximated by a large finite exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub const ONE: PNorm = PNorm::Finite(1.0);
    pub const TWO: PNorm = PNorm::Finite(2.0);

    /// Validates `p >= 1`; `f64::INFINITY` maps to [`PNorm::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(PNorm::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(PNorm::Finite(p))
        } else {
            Err(Error::InvalidNorm(format!("p = {p} is not in [1, inf]")))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PNorm::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            PNorm::Finite(p) => Some(p),
            PNorm::Infinity => None,
        }
    }

    /// `p` as an `f64`, with `f64::INFINITY` for the operator norm.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// `1/p`, zero at infinity.
    pub fn reciprocal(self) -> f64 {
        self.finite().map_or(0.0, |p| 1.0 / p)
    }

    /// The index `c * p` for `c >= 1`.
    pub fn scaled(self, c: f64) -> PNorm {
        match self {
            PNorm::Finite(p) => PNorm::Finite(c * p),
            PNorm::Infinity => PNorm::Infinity,
        }
    }

    /// Re-checks the invariant on a possibly hand-built value.
    pub fn validate(self) -> Result<Self> {
        match self {
            PNorm::Finite(p) => PNorm::new(p),
            PNorm::Infinity => Ok(self),
        }
    }

    /// `(Σ σ_i^p)^{1/p}` of nonnegative values, or their maximum at infinity.
    pub fn norm_of(self, singular_values: &[f64]) -> f64 {
        let max = singular_values.iter().copied().fold(0.0, f64::max);
        match self {
            PNorm::Infinity => max,
            PNorm::Finite(_) if max == 0.0 => 0.0,
            PNorm::Finite(1.0) => singular_values.iter().sum(),
            PNorm::Finite(p) => {
                let s: f64 = singular_values.iter().map(|&x| (x / max).powf(p)).sum();
                max * s.powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidNorm(format!("cannot parse `{s}`")))?;
                PNorm::new(p)
            }
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PNorm::Finite(p) => serializer.serialize_f64(*p),
            PNorm::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PNorm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let parsed = match Raw::deserialize(deserializer)? {
            Raw::Num(p) => PNorm::new(p),
            Raw::Str(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Singular values of a square matrix.
///
/// Hermitian input (within `1e-10`) goes through the Hermitian eigensolver
/// and takes `|λ_i|`; anything else uses a general SVD.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "Schatten norm of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if m.hermitian_deviation() <= HERMITIAN_TOL {
        let eig = HermitianEigen::new(m)?;
        return Ok(eig.values.iter().map(|l| l.abs()).collect());
    }
    let n = m.rows();
    let dm = DMatrix::<Complex64>::from_row_slice(n, n, m.as_slice());
    Ok(dm.singular_values().iter().copied().collect())
}

/// Schatten norm `‖M‖_p = (Σ σ_i^p)^{1/p}`; the largest singular value at `p = ∞`.
pub fn schatten_norm(m: &ComplexMatrix, p: PNorm) -> Result<f64> {
    let p = p.validate()?;
    Ok(p.norm_of(&singular_values(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_norms() {
        let m = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert!((schatten_norm(&m, PNorm::ONE).unwrap() - 7.0).abs() < 1e-14);
        assert!((schatten_norm(&m, PNorm::Infinity).unwrap() - 4.0).abs() < 1e-14);
        assert!((schatten_norm(&m, PNorm::TWO).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_uses_svd() {
        // singular values of [[0, 2], [0, 0]] are {2, 0}
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!((schatten_norm(&m, PNorm::Finite(1.5)).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_square_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(schatten_norm(&m, PNorm::ONE), Err(Error::Dimension(_))));
    }

    #[test]
    fn invalid_index_rejected() {
        assert!(PNorm::new(0.5).is_err());
        assert!(PNorm::new(f64::NAN).is_err());
        assert!(schatten_norm(&ComplexMatrix::identity(2), PNorm::Finite(0.2)).is_err());
        assert!("0.9".parse::<PNorm>().is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("inf".parse::<PNorm>().unwrap(), PNorm::Infinity);
        assert_eq!("1.5".parse::<PNorm>().unwrap(), PNorm::Finite(1.5));
        assert_eq!(PNorm::Infinity.to_string(), "inf");
        let json = serde_json::to_string(&[PNorm::Finite(2.0), PNorm::Infinity]).unwrap();
        assert_eq!(json, r#"[2.0,"inf"]"#);
        let back: Vec<PNorm> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![PNorm::Finite(2.0), PNorm::Infinity]);
    }
}
