use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of i.i.d. standard complex Gaussian entries (Ginibre ensemble).
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unit vector in `C^n`.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Density matrix `G G† / Tr(G G†)` from a square Ginibre matrix.
pub fn random_density(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    let a = &g * &g.adjoint();
    let tr = a.trace().re;
    a.hermitian_part().scale(1.0 / tr)
}

/// Haar-random isometry `C^cols → C^rows` (`rows >= cols`).
///
/// Gram–Schmidt (two passes) on a Ginibre matrix. The implied `R` factor has
/// a positive real diagonal, which fixes the column phases and makes the
/// result exactly Haar distributed and backend independent.
pub fn haar_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if cols == 0 || rows < cols {
        return Err(Error::Dimension(format!("no isometry C^{cols} → C^{rows}")));
    }
    let g = gaussian_matrix(rows, cols, rng);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.column_vec(j);
        for _ in 0..2 {
            for q in &basis {
                let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= overlap * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidParameter("degenerate Gaussian draw".into()));
        }
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i]))
}

/// Random channel from a Haar isometry `W : C^{d_in} → C^{d_out} ⊗ C^κ`,
/// `F_k[r, i] = W[r * κ + k, i]`.
pub fn random_channel(d_in: usize, d_out: usize, kappa: usize, rng: &mut impl Rng) -> Result<QuantumChannel> {
    if d_in == 0 || d_out == 0 || kappa == 0 {
        return Err(Error::Dimension("dimensions must be positive".into()));
    }
    if d_out * kappa < d_in {
        return Err(Error::Dimension(format!(
            "no dilation C^{d_in} → C^{d_out} ⊗ C^{kappa}: need d_out * kappa >= d_in"
        )));
    }
    let w = haar_isometry(d_out * kappa, d_in, rng)?;
    let kraus = (0..kappa)
        .map(|k| ComplexMatrix::from_fn(d_out, d_in, |r, i| w[(r * kappa + k, i)]))
        .collect();
    QuantumChannel::new(d_in, d_out, kraus)
}

/// [`random_channel`] driven by a ChaCha stream seeded with `seed`.
pub fn random_channel_seeded(d_in: usize, d_out: usize, kappa: usize, seed: u64) -> Result<QuantumChannel> {
    let mut rng = crate::rng::rng_from_seed(seed);
    Ok(random_channel(d_in, d_out, kappa, &mut rng)?
        .with_name("random")
        .with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_kraus_gives_unitary() {
        let ch = random_channel_seeded(2, 2, 1, 5).unwrap();
        let u = &ch.kraus()[0];
        assert!((&(u * &u.adjoint()) - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_channel() {
        let a = random_channel_seeded(3, 2, 4, 42).unwrap();
        let b = random_channel_seeded(3, 2, 4, 42).unwrap();
        assert_eq!(a.kraus(), b.kraus());
        let c = random_channel_seeded(3, 2, 4, 43).unwrap();
        assert_ne!(a.kraus(), c.kraus());
    }

    #[test]
    fn trace_preserving_to_1e12() {
        let ch = random_channel_seeded(3, 2, 4, 7).unwrap();
        let mut s = ComplexMatrix::zeros(3, 3);
        for f in ch.kraus() {
            s = &s + &(&f.adjoint() * f);
        }
        assert!(s.max_abs_diff(&ComplexMatrix::identity(3)) <= 1e-12);
    }

    #[test]
    fn infeasible_dimensions() {
        assert!(random_channel_seeded(5, 2, 2, 0).is_err());
        assert!(random_channel_seeded(2, 2, 0, 0).is_err());
    }

    #[test]
    fn density_is_a_state() {
        let rho = random_density(4, &mut crate::rng::rng_from_seed(2));
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(rho.hermitian_deviation() == 0.0);
    }
}
