//! Quantum channels (CPT maps `M_d → M_d'`) stored as Kraus lists, with
//! Choi, Stinespring and Lindblad–Stinespring views, conjugate channels,
//! tensor products and the standard test instances.

mod json;
mod named;
mod random;
mod repr;

use crate::error::{Error, Result};
use crate::linalg::{schatten_norm, ComplexMatrix, PNorm};

pub use json::{matrix_from_json, matrix_to_json, ChannelJson, JsonMatrix};
pub use named::{named_channel, weyl_unitaries, NamedChannel};
pub use random::{gaussian_matrix, haar_isometry, random_channel, random_channel_seeded, random_density, random_unit_vector};
pub use repr::{lemma1_pair, ChoiMatrix, LindbladForm, StinespringIsometry, KRAUS_DROP_TOL};

/// Trace-preservation tolerance `‖Σ F_k† F_k − I‖_∞`.
pub const TP_TOL: f64 = 1e-10;

/// A CPT map `M_{d_in} → M_{d_out}` given by Kraus operators `F_k` (each
/// `d_out x d_in`) with `Σ F_k† F_k = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
    name: Option<String>,
    seed: Option<u64>,
}

impl QuantumChannel {
    pub fn new(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::Dimension("channel dimensions must be positive".into()));
        }
        if kraus.is_empty() {
            return Err(Error::Dimension("empty Kraus list".into()));
        }
        if let Some(bad) = kraus.iter().find(|f| f.shape() != (d_out, d_in)) {
            return Err(Error::Dimension(format!(
                "Kraus operator of shape {:?}, expected ({d_out}, {d_in})",
                bad.shape()
            )));
        }
        let ch = Self {
            d_in,
            d_out,
            kraus,
            name: None,
            seed: None,
        };
        let dev = ch.tp_deviation();
        if !(dev <= TP_TOL) {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    /// Identity channel on `M_d`.
    pub fn identity(d: usize) -> Self {
        Self::new(d, d, vec![ComplexMatrix::identity(d)])
            .expect("identity is trace preserving")
            .with_name("identity")
    }

    /// Trace `M_d → M_1`, written with the `d` Kraus operators `<e_k|`.
    pub fn trace(d: usize) -> Self {
        let kraus = (0..d)
            .map(|k| {
                let mut row = ComplexMatrix::zeros(1, d);
                row[(0, k)] = 1.0.into();
                row
            })
            .collect();
        Self::new(d, 1, kraus).expect("trace is trace preserving").with_name("trace")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Number of Kraus operators.
    pub fn kappa(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `‖Σ_k F_k† F_k − I‖_∞`.
    pub fn tp_deviation(&self) -> f64 {
        let mut s = ComplexMatrix::identity(self.d_in).scale(-1.0);
        for f in &self.kraus {
            s = &s + &(&f.adjoint() * f);
        }
        schatten_norm(&s, PNorm::Infinity).unwrap_or(f64::INFINITY)
    }

    /// `Φ(ρ) = Σ_k F_k ρ F_k†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::Dimension(format!(
                "input of shape {:?} for a channel on M_{}",
                rho.shape(),
                self.d_in
            )));
        }
        Ok(self.apply_unchecked(rho))
    }

    pub(crate) fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for f in &self.kraus {
            out = &out + &(&(f * rho) * &f.adjoint());
        }
        out
    }

    /// Dual (Heisenberg-picture) map `Y ↦ Σ_k F_k† Y F_k`.
    pub fn apply_dual(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.shape() != (self.d_out, self.d_out) {
            return Err(Error::Dimension(format!(
                "dual input of shape {:?} for output M_{}",
                y.shape(),
                self.d_out
            )));
        }
        Ok(self.apply_dual_unchecked(y))
    }

    pub(crate) fn apply_dual_unchecked(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d_in, self.d_in);
        for f in &self.kraus {
            out = &out + &(&(&f.adjoint() * y) * f);
        }
        out
    }

    /// `Φ ⊗ Ψ` with Kraus set `{F_i ⊗ G_j}` (index `i * κ_2 + j`).
    pub fn tensor(&self, other: &QuantumChannel) -> QuantumChannel {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|f| other.kraus.iter().map(move |g| f.kron(g)))
            .collect();
        let ch = QuantumChannel {
            d_in: self.d_in * other.d_in,
            d_out: self.d_out * other.d_out,
            kraus,
            name: None,
            seed: None,
        };
        match (&self.name, &other.name) {
            (Some(a), Some(b)) => ch.with_name(format!("{a}⊗{b}")),
            _ => ch,
        }
    }

    /// Choi matrix `X_Φ = Σ_ij |e_i><e_j| ⊗ Φ(|e_i><e_j|)`.
    pub fn choi(&self) -> ChoiMatrix {
        ChoiMatrix::from_channel(self)
    }

    /// Minimal Kraus form obtained from the Choi eigendecomposition.
    pub fn canonicalize(&self) -> Result<QuantumChannel> {
        let mut ch = self.choi().to_channel()?;
        ch.name = self.name.clone();
        ch.seed = self.seed;
        Ok(ch)
    }

    /// `V = Σ_k F_k† ⊗ |e_k>`.
    pub fn stinespring(&self) -> StinespringIsometry {
        StinespringIsometry::from_channel(self)
    }

    pub fn lindblad(&self) -> LindbladForm {
        LindbladForm::from_channel(self)
    }

    /// Conjugate channel `Φ^C : M_d → M_κ`,
    /// `Φ^C(ρ) = Σ_jk Tr(F_j ρ F_k†) |e_j><e_k|`.
    ///
    /// Its Kraus operators are the slices `(G_r)_{k,i} = (F_k)_{r,i}` of the
    /// same dilation, one per output index `r` of `Φ`.
    pub fn conjugate(&self) -> QuantumChannel {
        let kappa = self.kappa();
        let kraus = (0..self.d_out)
            .map(|r| ComplexMatrix::from_fn(kappa, self.d_in, |k, i| self.kraus[k][(r, i)]))
            .collect();
        let ch = QuantumChannel::new(self.d_in, kappa, kraus)
            .expect("conjugate of a trace-preserving channel is trace preserving");
        match &self.name {
            Some(n) => ch.with_name(format!("conj({n})")),
            None => ch,
        }
    }

    /// `Φ^C(ρ)` evaluated entrywise from `Tr(F_j ρ F_k†)`.
    pub fn conjugate_action(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::Dimension("conjugate_action input shape".into()));
        }
        let kappa = self.kappa();
        Ok(ComplexMatrix::from_fn(kappa, kappa, |j, k| {
            (&(&self.kraus[j] * rho) * &self.kraus[k].adjoint()).trace()
        }))
    }
}

/// `Φ_1 ⊗ Φ_2`.
pub fn tensor_channels(ch1: &QuantumChannel, ch2: &QuantumChannel) -> QuantumChannel {
    ch1.tensor(ch2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{tensor, HermitianEigen};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dephasing(t: f64) -> QuantumChannel {
        named_channel(&NamedChannel::Dephase { t }).unwrap()
    }

    fn sample_rho() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(0.7, 0.0), c(0.2, -0.1)], vec![c(0.2, 0.1), c(0.3, 0.0)]]).unwrap()
    }

    #[test]
    fn identity_channel_is_noop() {
        let rho = sample_rho();
        assert_eq!(QuantumChannel::identity(2).apply(&rho).unwrap(), rho);
    }

    #[test]
    fn half_dephasing_kills_coherences() {
        let rho = sample_rho();
        let out = dephasing(0.5).apply(&rho).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[0.7, 0.3]);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_shape() {
        assert!(matches!(
            QuantumChannel::identity(2).apply(&ComplexMatrix::identity(3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn non_tp_rejected() {
        let f = ComplexMatrix::identity(2).scale(0.9);
        assert!(matches!(QuantumChannel::new(2, 2, vec![f]), Err(Error::NotTracePreserving(_))));
    }

    #[test]
    fn apply_preserves_trace_and_positivity() {
        let ch = random_channel_seeded(3, 2, 4, 11).unwrap();
        let rho = random_density(3, &mut crate::rng::rng_from_seed(5));
        let out = ch.apply(&rho).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-12);
        assert!(HermitianEigen::new(&out).unwrap().min() > -1e-12);
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let ch = QuantumChannel::identity(2).tensor(&QuantumChannel::identity(3));
        assert_eq!((ch.d_in(), ch.d_out(), ch.kappa()), (6, 6, 1));
        assert!(ch.kraus()[0].max_abs_diff(&ComplexMatrix::identity(6)) < 1e-15);
    }

    #[test]
    fn tensor_with_trace_on_products() {
        let phi = random_channel_seeded(2, 2, 3, 1).unwrap();
        let tr = QuantumChannel::trace(3);
        let prod = tensor_channels(&phi, &tr);
        assert_eq!(prod.kappa(), 3 * 3);
        let r1 = sample_rho();
        let r2 = random_density(3, &mut crate::rng::rng_from_seed(3));
        let out = prod.apply(&tensor(&r1, &r2)).unwrap();
        let expected = phi.apply(&r1).unwrap().scale_complex(r2.trace());
        assert!(out.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn conjugate_of_identity_is_trace() {
        let conj = QuantumChannel::identity(3).conjugate();
        assert_eq!((conj.d_in(), conj.d_out()), (3, 1));
        let rho = random_density(3, &mut crate::rng::rng_from_seed(8));
        let out = conj.apply(&rho).unwrap();
        assert!((out[(0, 0)] - rho.trace()).norm() < 1e-14);
    }

    #[test]
    fn conjugate_of_trace_is_identity() {
        let conj = QuantumChannel::trace(3).conjugate();
        assert_eq!((conj.d_in(), conj.d_out()), (3, 3));
        let rho = random_density(3, &mut crate::rng::rng_from_seed(9));
        let out = conj.apply(&rho).unwrap();
        // Tr(<e_j| ρ |e_k>) = ρ_jk, so the environment receives ρ itself.
        assert!(out.max_abs_diff(&rho) < 1e-14);
    }

    #[test]
    fn conjugate_of_half_dephasing() {
        let rho = sample_rho();
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let tr = rho.trace();
        let zr = (&z * &rho).trace();
        let rz = (&rho * &z).trace();
        let expected = ComplexMatrix::from_rows(&[vec![tr, zr], vec![rz, tr]]).unwrap().scale(0.5);
        let ch = dephasing(0.5);
        assert!(ch.conjugate().apply(&rho).unwrap().max_abs_diff(&expected) < 1e-15);
        assert!(ch.conjugate_action(&rho).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn conjugate_matches_explicit_formula_on_matrix_units() {
        let ch = random_channel_seeded(3, 2, 5, 21).unwrap();
        let conj = ch.conjugate();
        assert!(conj.tp_deviation() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let e = ComplexMatrix::unit(3, i, j);
                let d = conj.apply(&e).unwrap().max_abs_diff(&ch.conjugate_action(&e).unwrap());
                assert!(d <= 1e-12);
            }
        }
    }
}
