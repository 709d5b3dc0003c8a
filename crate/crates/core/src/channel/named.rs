use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ChoiMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// The built-in channel families.
#[derive(Clone, Debug, PartialEq)]
pub enum NamedChannel {
    /// `ρ ↦ ρ` on `M_d`.
    Identity { d: usize },
    /// `ρ ↦ Tr ρ`, `M_d → M_1`.
    Trace { d: usize },
    /// `ρ ↦ λρ + (1 − λ) Tr(ρ) I/d`, CP for `λ ∈ [−1/(d²−1), 1]`.
    Depolarize { d: usize, lambda: f64 },
    /// Qubit dephasing with Kraus operators `{√(1−t) I, √t Z}`, `t ∈ [0, 1]`.
    Dephase { t: f64 },
    /// `ρ ↦ λρ^T + (1 − λ) Tr(ρ) I/d`, CP for `λ ∈ [−1/(d−1), 1/(d+1)]`.
    TransposeDepolarize { d: usize, lambda: f64 },
    /// `ρ ↦ Σ_k p_k U_k ρ U_k†` over the `d²` Weyl unitaries.
    WeylCovariant { d: usize, probs: Vec<f64> },
}

impl NamedChannel {
    pub const NAMES: [&'static str; 6] = [
        "identity",
        "trace",
        "depolarize",
        "dephase",
        "transpose-depolarize",
        "weyl-covariant",
    ];

    /// Builds a family member from its name and the parameters it needs.
    pub fn from_params(
        name: &str,
        d: Option<usize>,
        lambda: Option<f64>,
        t: Option<f64>,
        probs: Option<Vec<f64>>,
    ) -> Result<Self> {
        let need_d = || d.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs d")));
        let need_lambda = || lambda.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs lambda")));
        Ok(match name {
            "identity" => NamedChannel::Identity { d: need_d()? },
            "trace" => NamedChannel::Trace { d: need_d()? },
            "depolarize" => NamedChannel::Depolarize {
                d: need_d()?,
                lambda: need_lambda()?,
            },
            "dephase" => NamedChannel::Dephase {
                t: t.ok_or_else(|| Error::InvalidParameter("`dephase` needs t".into()))?,
            },
            "transpose-depolarize" => NamedChannel::TransposeDepolarize {
                d: need_d()?,
                lambda: need_lambda()?,
            },
            "weyl-covariant" => {
                let d = need_d()?;
                let probs = probs.unwrap_or_else(|| vec![1.0 / (d * d) as f64; d * d]);
                NamedChannel::WeylCovariant { d, probs }
            }
            other => return Err(Error::UnknownChannel(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedChannel::Identity { .. } => "identity",
            NamedChannel::Trace { .. } => "trace",
            NamedChannel::Depolarize { .. } => "depolarize",
            NamedChannel::Dephase { .. } => "dephase",
            NamedChannel::TransposeDepolarize { .. } => "transpose-depolarize",
            NamedChannel::WeylCovariant { .. } => "weyl-covariant",
        }
    }

    /// Short descriptor such as `depolarize(d=2, λ=0)`.
    pub fn descriptor(&self) -> String {
        match self {
            NamedChannel::Identity { d } | NamedChannel::Trace { d } => format!("{}(d={d})", self.name()),
            NamedChannel::Depolarize { d, lambda } | NamedChannel::TransposeDepolarize { d, lambda } => {
                format!("{}(d={d}, λ={lambda})", self.name())
            }
            NamedChannel::Dephase { t } => format!("dephase(t={t})"),
            NamedChannel::WeylCovariant { d, probs } => {
                let p: Vec<String> = probs.iter().map(|x| format!("{x:.4}")).collect();
                format!("weyl-covariant(d={d}, p=[{}])", p.join(","))
            }
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    Ok(())
}

/// The `n²` Weyl unitaries `X^a Z^b`, ordered by `k = a * n + b`.
///
/// `X e_i = e_{i+1 mod n}` and `Z e_i = ω^i e_i` with `ω = e^{2πi/n}`; they
/// satisfy `Σ_k U_k A U_k† = n Tr(A) I_n`.
pub fn weyl_unitaries(n: usize) -> Vec<ComplexMatrix> {
    let omega = |m: usize| Complex64::from_polar(1.0, 2.0 * PI * (m % n) as f64 / n as f64);
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut u = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                u[((i + a) % n, i)] = omega(b * i);
            }
            out.push(u);
        }
    }
    out
}

fn weyl_channel(d: usize, probs: &[f64]) -> Result<QuantumChannel> {
    if probs.len() != d * d {
        return Err(Error::InvalidParameter(format!(
            "weyl-covariant on M_{d} needs {} probabilities, got {}",
            d * d,
            probs.len()
        )));
    }
    if probs.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidParameter("negative Weyl probability".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("Weyl probabilities sum to {total}")));
    }
    let kraus = weyl_unitaries(d)
        .into_iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(u, &p)| u.scale(p.sqrt()))
        .collect();
    QuantumChannel::new(d, d, kraus)
}

/// Builds a named channel, rejecting parameters outside the CP range.
pub fn named_channel(spec: &NamedChannel) -> Result<QuantumChannel> {
    let ch = match spec {
        NamedChannel::Identity { d } => {
            check_dim(*d)?;
            QuantumChannel::identity(*d)
        }
        NamedChannel::Trace { d } => {
            check_dim(*d)?;
            QuantumChannel::trace(*d)
        }
        NamedChannel::Depolarize { d, lambda } => {
            check_dim(*d)?;
            let d = *d;
            let lo = if d > 1 { -1.0 / ((d * d - 1) as f64) } else { f64::NEG_INFINITY };
            if !(*lambda >= lo && *lambda <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "depolarizing λ = {lambda} outside the CP interval [{lo}, 1]"
                )));
            }
            // λρ + (1−λ) I/d Tr ρ as a Weyl mixture: full twirl weight (1−λ)/d² each.
            let n2 = (d * d) as f64;
            let mut probs = vec![(1.0 - lambda) / n2; d * d];
            probs[0] += lambda;
            weyl_channel(d, &probs)?
        }
        NamedChannel::Dephase { t } => {
            if !(0.0..=1.0).contains(t) {
                return Err(Error::InvalidParameter(format!("dephasing t = {t} outside [0, 1]")));
            }
            let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
            QuantumChannel::new(
                2,
                2,
                vec![ComplexMatrix::identity(2).scale((1.0 - t).sqrt()), z.scale(t.sqrt())],
            )?
        }
        NamedChannel::TransposeDepolarize { d, lambda } => {
            check_dim(*d)?;
            let d = *d;
            let lo = if d > 1 { -1.0 / ((d - 1) as f64) } else { f64::NEG_INFINITY };
            let hi = 1.0 / ((d + 1) as f64);
            if !(*lambda >= lo && *lambda <= hi) {
                return Err(Error::InvalidParameter(format!(
                    "transpose-depolarizing λ = {lambda} outside the CP interval [{lo}, {hi}]"
                )));
            }
            // Choi matrix λ·SWAP + (1−λ)/d·I.
            let n = d * d;
            let x = ComplexMatrix::from_fn(n, n, |row, col| {
                let (i, r) = (row / d, row % d);
                let (j, s) = (col / d, col % d);
                let swap = if i == s && r == j { *lambda } else { 0.0 };
                let id = if row == col { (1.0 - lambda) / d as f64 } else { 0.0 };
                Complex64::new(swap + id, 0.0)
            });
            ChoiMatrix::new(d, d, x)?.to_channel()?
        }
        NamedChannel::WeylCovariant { d, probs } => {
            check_dim(*d)?;
            weyl_channel(*d, probs)?
        }
    };
    Ok(ch.with_name(spec.descriptor()))
}
