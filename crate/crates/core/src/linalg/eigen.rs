use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Max-entry tolerance for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_TOL, 0)` are rounding noise and clip to zero.
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalues at or below this count as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Spectral decomposition `M = U diag(values) U^dagger` of a Hermitian matrix.
///
/// Eigenvalues are sorted in ascending order; column `k` of `vectors` is the
/// eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Decomposes the Hermitian part of `m`. No Hermiticity check is made.
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "eigendecomposition of a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let h = m.hermitian_part();
        let dm = DMatrix::<Complex64>::from_row_slice(n, n, h.as_slice());
        let eig = dm.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(Self { values, vectors })
    }

    /// Checks Hermiticity within [`HERMITIAN_TOL`] before decomposing.
    pub fn checked(m: &ComplexMatrix) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Self::new(m)
    }

    /// Like [`HermitianEigen::checked`], and additionally requires every
    /// eigenvalue to be at least `-PSD_TOL`; small negatives are clipped to 0.
    pub fn psd(m: &ComplexMatrix) -> Result<Self> {
        let mut eig = Self::checked(m)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        for v in &mut eig.values {
            *v = v.max(0.0);
        }
        Ok(eig)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `U diag(f(lambda)) U^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let u = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in fv.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = u[(i, k)] * w;
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Eigenvector for `values[k]`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column_vec(k)
    }
}

/// Fractional power `M^s` of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clipped to zero. For `s = 0` the result
/// is the orthogonal projection onto the support (eigenvalues above `1e-12`);
/// negative `s` acts on the support only.
pub fn frac_power(m: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!("power {s}")));
    }
    let eig = HermitianEigen::psd(m)?;
    Ok(power_of(&eig, s))
}

fn power_of(eig: &HermitianEigen, s: f64) -> ComplexMatrix {
    if s == 0.0 {
        eig.map(|l| if l > SUPPORT_CUTOFF { 1.0 } else { 0.0 })
    } else if s < 0.0 {
        eig.map(|l| if l > SUPPORT_CUTOFF { l.powf(s) } else { 0.0 })
    } else if s == 1.0 {
        eig.map(|l| l)
    } else {
        eig.map(|l| if l > 0.0 { l.powf(s) } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_diag() {
        let r = frac_power(&ComplexMatrix::from_real_diag(&[4.0, 9.0]), 0.5).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn identity_powers() {
        for s in [0.0, 0.3, 1.0, 2.5] {
            let r = frac_power(&ComplexMatrix::identity(3), s).unwrap();
            assert!(r.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14, "s = {s}");
        }
    }

    #[test]
    fn zero_power_is_support_projection() {
        let r = frac_power(&ComplexMatrix::from_real_diag(&[2.0, 0.0]), 0.0).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn roundoff_negatives_are_clipped() {
        let r = frac_power(&ComplexMatrix::from_real_diag(&[1.0, -5e-11]), 0.5).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn negative_matrix_rejected() {
        let err = frac_power(&ComplexMatrix::from_real_diag(&[1.0, -1e-3]), 0.5);
        assert!(matches!(err, Err(Error::NotPsd(_))));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(frac_power(&m, 0.5), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigenvalues_sorted_and_reconstruct() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let eig = HermitianEigen::checked(&m).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
        assert!(eig.map(|l| l).max_abs_diff(&m) < 1e-14);
    }
}
