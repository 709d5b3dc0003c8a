//! `g_p(ρ, Φ) = Tr[(ρ^{1/2p} ⊗ I) X_Φ (ρ^{1/2p} ⊗ I)]^p` and its concavity probe.

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{frac_power, ComplexMatrix, HermitianEigen, PNorm};

fn check_rho(rho: &ComplexMatrix, ch: &QuantumChannel) -> Result<()> {
    let d = ch.d_in();
    if rho.shape() != (d, d) {
        return Err(Error::Dimension(format!("state must be {d}x{d}, got {}x{}", rho.rows(), rho.cols())));
    }
    let eig = HermitianEigen::psd(rho)?;
    let tr: f64 = eig.values.iter().sum();
    if tr > 1.0 + 1e-10 {
        return Err(Error::Trace(format!("g_p needs Tr rho <= 1, got {tr}")));
    }
    Ok(())
}

fn finite_p(p: PNorm) -> Result<f64> {
    p.validate()?;
    p.finite().ok_or_else(|| Error::InvalidNorm("g_p needs a finite p".into()))
}

/// `Tr M^p` for PSD `M` (roundoff negatives clipped).
fn trace_power(m: &ComplexMatrix, p: f64) -> Result<f64> {
    let eig = HermitianEigen::new(m)?;
    Ok(eig.values.iter().map(|l| l.max(0.0).powf(p)).sum())
}

/// `g_p(ρ, Φ)` for PSD `ρ` with `Tr ρ ≤ 1` and finite `p ≥ 1`.
pub fn g_p(rho: &ComplexMatrix, ch: &QuantumChannel, p: PNorm) -> Result<f64> {
    let p = finite_p(p)?;
    check_rho(rho, ch)?;
    let s = frac_power(&rho.hermitian_part(), 1.0 / (2.0 * p))?.kron(&ComplexMatrix::identity(ch.d_out()));
    let x = ch.choi().into_matrix();
    trace_power(&(&(&s * &x) * &s), p)
}

/// `Tr[X_Φ^{1/2} (ρ^{1/p} ⊗ I) X_Φ^{1/2}]^p`, which equals [`g_p`].
pub fn g_p_alt(rho: &ComplexMatrix, ch: &QuantumChannel, p: PNorm) -> Result<f64> {
    let p = finite_p(p)?;
    check_rho(rho, ch)?;
    let r = frac_power(&rho.hermitian_part(), 1.0 / p)?.kron(&ComplexMatrix::identity(ch.d_out()));
    let half = frac_power(&ch.choi().into_matrix(), 0.5)?;
    trace_power(&(&(&half * &r) * &half), p)
}

/// `g_p(λρ₁ + (1−λ)ρ₂) − λ g_p(ρ₁) − (1−λ) g_p(ρ₂)` for each `λ`.
/// Concavity of `g_p` in `ρ` makes every entry nonnegative.
pub fn concavity_probe(
    ch: &QuantumChannel,
    p: PNorm,
    rho1: &ComplexMatrix,
    rho2: &ComplexMatrix,
    lambdas: &[f64],
) -> Result<Vec<f64>> {
    if let Some(bad) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::InvalidParameter(format!("mixing weight {bad} outside [0, 1]")));
    }
    let g1 = g_p(rho1, ch, p)?;
    let g2 = g_p(rho2, ch, p)?;
    lambdas
        .iter()
        .map(|&l| {
            let mix = &rho1.scale(l) + &rho2.scale(1.0 - l);
            Ok(g_p(&mix, ch, p)? - l * g1 - (1.0 - l) * g2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_channel_seeded;

    #[test]
    fn identity_qubit_at_maximally_mixed() {
        let ch = QuantumChannel::identity(2);
        let rho = ComplexMatrix::identity(2).scale(0.5);
        let g = g_p(&rho, &ch, PNorm::TWO).unwrap();
        assert!((g - 2.0).abs() < 1e-12, "{g}");
    }

    #[test]
    fn two_forms_agree() {
        let ch = random_channel_seeded(2, 3, 3, 5).unwrap();
        let rho = crate::channel::random_density(2, &mut crate::rng::rng_from_seed(6));
        for p in [1.0, 1.5, 2.0, 3.0] {
            let p = PNorm::new(p).unwrap();
            let a = g_p(&rho, &ch, p).unwrap();
            let b = g_p_alt(&rho, &ch, p).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_infinite_p_and_large_trace() {
        let ch = QuantumChannel::identity(2);
        let rho = ComplexMatrix::identity(2).scale(0.5);
        assert!(matches!(g_p(&rho, &ch, PNorm::Infinity), Err(Error::InvalidNorm(_))));
        assert!(matches!(g_p(&ComplexMatrix::identity(2), &ch, PNorm::TWO), Err(Error::Trace(_))));
    }

    #[test]
    fn endpoints_have_zero_deficit() {
        let ch = random_channel_seeded(2, 2, 2, 8).unwrap();
        let mut rng = crate::rng::rng_from_seed(9);
        let r1 = crate::channel::random_density(2, &mut rng);
        let r2 = crate::channel::random_density(2, &mut rng);
        let d = concavity_probe(&ch, PNorm::TWO, &r1, &r2, &[0.0, 1.0]).unwrap();
        assert!(d.iter().all(|v| v.abs() < 1e-12), "{d:?}");
    }
}
