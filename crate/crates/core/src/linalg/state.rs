use num_complex::Complex64;

use super::eigen::{HermitianEigen, SUPPORT_CUTOFF};
use super::matrix::{ComplexMatrix, Subsystem};
use crate::error::{Error, Result};

/// Normalization tolerance on `Σ |amplitude|^2`.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Unit vector in `C^dim_1 ⊗ C^dim_2`, amplitude index `a * dim_2 + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dim_1: usize,
    dim_2: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dim_1: usize, dim_2: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dim_1 == 0 || dim_2 == 0 || amplitudes.len() != dim_1 * dim_2 {
            return Err(Error::Dimension(format!(
                "{} amplitudes for C^{dim_1} ⊗ C^{dim_2}",
                amplitudes.len()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self {
            dim_1,
            dim_2,
            amplitudes,
        })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(dim_1: usize, dim_2: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(dim_1, dim_2, amplitudes)
    }

    /// `(1/√d) Σ_i e_i ⊗ e_i`.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        let amplitudes = (0..d * d)
            .map(|k| if k / d == k % d { amp } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self {
            dim_1: d,
            dim_2: d,
            amplitudes,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_1, self.dim_2)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|ψ><ψ|`.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Reduced state after tracing out `traced`.
    pub fn reduced(&self, traced: Subsystem) -> ComplexMatrix {
        // Ψ Ψ^dagger or Ψ^T conj(Ψ) with Ψ the dim_1 x dim_2 coefficient matrix.
        let psi = ComplexMatrix::from_row_major(self.dim_1, self.dim_2, self.amplitudes.clone())
            .expect("shape checked at construction");
        match traced {
            Subsystem::Second => &psi * &psi.adjoint(),
            Subsystem::First => &psi.transpose() * &psi.conj(),
        }
    }
}

/// Purification of a density matrix `X` on `C^n`.
///
/// Returns `Σ_i √λ_i v_i ⊗ e_i` in `C^n ⊗ C^n`, eigenvalues in descending
/// order, so that tracing out the second factor gives back `X`.
pub fn purify(x: &ComplexMatrix) -> Result<PureState> {
    let eig = HermitianEigen::psd(x)?;
    let tr: f64 = eig.values.iter().sum();
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::Trace(format!("purification needs trace 1, got {tr}")));
    }
    let n = eig.dim();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n * n];
    for (slot, k) in (0..n).rev().enumerate() {
        // roundoff eigenvalues would otherwise leave O(1e-8) amplitudes behind
        if eig.values[k] <= SUPPORT_CUTOFF {
            continue;
        }
        let w = eig.values[k].sqrt();
        for a in 0..n {
            amplitudes[a * n + slot] = eig.vectors[(a, k)] * w;
        }
    }
    PureState::normalized(n, n, amplitudes)
}
