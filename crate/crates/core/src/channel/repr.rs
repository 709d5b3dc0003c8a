use num_complex::Complex64;

use super::{QuantumChannel, TP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, HermitianEigen, PNorm, Subsystem, schatten_norm, HERMITIAN_TOL};

/// Choi eigenvalues at or below this are dropped when extracting Kraus operators.
pub const KRAUS_DROP_TOL: f64 = 1e-11;

/// Choi–Jamiolkowski matrix on `C^{d_in} ⊗ C^{d_out}`; block `(i, j)` is `Φ(|e_i><e_j|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    d_in: usize,
    d_out: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates PSD (within `1e-10`) and `Tr_2 X = I` (within `1e-10`).
    pub fn new(d_in: usize, d_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = d_in * d_out;
        if n == 0 || matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "Choi matrix of shape {:?} for d_in={d_in}, d_out={d_out}",
                matrix.shape()
            )));
        }
        HermitianEigen::psd(&matrix)?;
        let reduced = matrix.partial_trace((d_in, d_out), Subsystem::Second)?;
        let dev = reduced.max_abs_diff(&ComplexMatrix::identity(d_in));
        if dev > TP_TOL {
            return Err(Error::Trace(format!("Tr_2 X deviates from identity by {dev:.3e}")));
        }
        Ok(Self { d_in, d_out, matrix })
    }

    pub fn from_channel(ch: &QuantumChannel) -> Self {
        let (d_in, d_out) = (ch.d_in(), ch.d_out());
        let n = d_in * d_out;
        let mut x = ComplexMatrix::zeros(n, n);
        for f in ch.kraus() {
            for i in 0..d_in {
                for r in 0..d_out {
                    let a = f[(r, i)];
                    if a.re == 0.0 && a.im == 0.0 {
                        continue;
                    }
                    for j in 0..d_in {
                        for s in 0..d_out {
                            x[(i * d_out + r, j * d_out + s)] += a * f[(s, j)].conj();
                        }
                    }
                }
            }
        }
        Self { d_in, d_out, matrix: x }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Kraus operators `F_a[r, i] = √λ_a v_a[i * d_out + r]` from the
    /// eigendecomposition, largest eigenvalue first, dropping `λ ≤ 1e-11`.
    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let eig = HermitianEigen::psd(&self.matrix)?;
        let (d_in, d_out) = (self.d_in, self.d_out);
        let kraus: Vec<ComplexMatrix> = (0..eig.dim())
            .rev()
            .filter(|&k| eig.values[k] > KRAUS_DROP_TOL)
            .map(|k| {
                let w = eig.values[k].sqrt();
                ComplexMatrix::from_fn(d_out, d_in, |r, i| eig.vectors[(i * d_out + r, k)] * w)
            })
            .collect();
        QuantumChannel::new(d_in, d_out, kraus)
    }
}

/// Stinespring isometry `V : C^{d_out} → C^{d_in} ⊗ C^κ` with
/// `Φ(ρ) = V† (ρ ⊗ I_κ) V`.
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringIsometry {
    d_in: usize,
    d_out: usize,
    kappa: usize,
    v: ComplexMatrix,
}

impl StinespringIsometry {
    /// Validates `Tr_2 V V† = I_{d_in}` within `1e-10`.
    pub fn new(d_in: usize, d_out: usize, kappa: usize, v: ComplexMatrix) -> Result<Self> {
        if v.shape() != (d_in * kappa, d_out) {
            return Err(Error::Dimension(format!(
                "V of shape {:?}, expected ({}, {d_out})",
                v.shape(),
                d_in * kappa
            )));
        }
        let s = Self { d_in, d_out, kappa, v };
        let dev = s.isometry_deviation();
        if dev > TP_TOL {
            return Err(Error::Trace(format!("Tr_2 V V† deviates from identity by {dev:.3e}")));
        }
        Ok(s)
    }

    /// `V = Σ_k F_k† ⊗ |e_k>`, i.e. `V[(i, k), r] = conj(F_k[r, i])`.
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        let (d_in, d_out, kappa) = (ch.d_in(), ch.d_out(), ch.kappa());
        let kraus = ch.kraus();
        let v = ComplexMatrix::from_fn(d_in * kappa, d_out, |row, r| {
            let (i, k) = (row / kappa, row % kappa);
            kraus[k][(r, i)].conj()
        });
        Self { d_in, d_out, kappa, v }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    /// `V V†` on `C^{d_in} ⊗ C^κ`.
    pub fn vv_dagger(&self) -> ComplexMatrix {
        &self.v * &self.v.adjoint()
    }

    /// `max |Tr_2 V V† − I|`.
    pub fn isometry_deviation(&self) -> f64 {
        self.vv_dagger()
            .partial_trace((self.d_in, self.kappa), Subsystem::Second)
            .map(|m| m.max_abs_diff(&ComplexMatrix::identity(self.d_in)))
            .unwrap_or(f64::INFINITY)
    }

    /// `V† (ρ ⊗ I_κ) V`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::Dimension("Stinespring input shape".into()));
        }
        let lifted = tensor(rho, &ComplexMatrix::identity(self.kappa));
        Ok(&(&self.v.adjoint() * &lifted) * &self.v)
    }

    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let kraus = (0..self.kappa)
            .map(|k| {
                ComplexMatrix::from_fn(self.d_out, self.d_in, |r, i| self.v[(i * self.kappa + k, r)].conj())
            })
            .collect();
        QuantumChannel::new(self.d_in, self.d_out, kraus)
    }
}

/// Lindblad–Stinespring form `Φ(ρ) = Tr_2 U (ρ ⊗ |φ><φ|) U†` with a partial
/// isometry `U : C^{d_in} ⊗ C^κ → C^{d_out} ⊗ C^κ` and `φ = e_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladForm {
    d_in: usize,
    d_out: usize,
    kappa: usize,
    u: ComplexMatrix,
    phi: Vec<Complex64>,
}

impl LindbladForm {
    /// `U (x ⊗ e_1) = Σ_k F_k x ⊗ e_k`; `U` vanishes on the complement of
    /// `C^{d_in} ⊗ e_1`.
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        let (d_in, d_out, kappa) = (ch.d_in(), ch.d_out(), ch.kappa());
        let mut u = ComplexMatrix::zeros(d_out * kappa, d_in * kappa);
        for (k, f) in ch.kraus().iter().enumerate() {
            for r in 0..d_out {
                for i in 0..d_in {
                    u[(r * kappa + k, i * kappa)] = f[(r, i)];
                }
            }
        }
        let mut phi = vec![Complex64::new(0.0, 0.0); kappa];
        phi[0] = Complex64::new(1.0, 0.0);
        Self { d_in, d_out, kappa, u, phi }
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    fn embed(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::Dimension("Lindblad input shape".into()));
        }
        let joint = tensor(rho, &ComplexMatrix::outer(&self.phi));
        Ok(&(&self.u * &joint) * &self.u.adjoint())
    }

    /// `Tr_2 U (ρ ⊗ |φ><φ|) U†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.embed(rho)?.partial_trace((self.d_out, self.kappa), Subsystem::Second)
    }

    /// `Tr_1 U (ρ ⊗ |φ><φ|) U†`, the conjugate channel.
    pub fn apply_conjugate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.embed(rho)?.partial_trace((self.d_out, self.kappa), Subsystem::First)
    }

    /// `‖(I ⊗ <φ|) U† U (I ⊗ |φ>) − I‖_∞`.
    pub fn partial_isometry_deviation(&self) -> f64 {
        let embed = tensor(&ComplexMatrix::identity(self.d_in), &ComplexMatrix::column(&self.phi));
        let g = &(&embed.adjoint() * &(&self.u.adjoint() * &self.u)) * &embed;
        let diff = &g - &ComplexMatrix::identity(self.d_in);
        debug_assert!(diff.hermitian_deviation() < HERMITIAN_TOL);
        schatten_norm(&diff, PNorm::Infinity).unwrap_or(f64::INFINITY)
    }

    /// `F_k = (I ⊗ <e_k|) U (I ⊗ |φ>)`.
    pub fn kraus(&self) -> Vec<ComplexMatrix> {
        (0..self.kappa)
            .map(|k| {
                ComplexMatrix::from_fn(self.d_out, self.d_in, |r, i| {
                    (0..self.kappa)
                        .map(|m| self.u[(r * self.kappa + k, i * self.kappa + m)] * self.phi[m])
                        .sum()
                })
            })
            .collect()
    }
}

/// Both sides of `X_{Φ^C} = (V V†)^T`, computed independently: the left via
/// the conjugate channel's Choi matrix, the right by transposing `V V†`.
pub fn lemma1_pair(ch: &QuantumChannel) -> (ComplexMatrix, ComplexMatrix) {
    let left = ch.conjugate().choi().into_matrix();
    let right = ch.stinespring().vv_dagger().transpose();
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{named_channel, random_channel_seeded, NamedChannel};

    #[test]
    fn choi_of_identity_is_rank_one() {
        let d = 3;
        let x = QuantumChannel::identity(d).choi().into_matrix();
        let v: Vec<Complex64> = (0..d * d)
            .map(|k| if k / d == k % d { 1.0.into() } else { 0.0.into() })
            .collect();
        assert!(x.max_abs_diff(&ComplexMatrix::outer(&v)) < 1e-15);
        assert!((x.trace().re - d as f64).abs() < 1e-14);
    }

    #[test]
    fn choi_of_trace_is_identity() {
        let x = QuantumChannel::trace(4).choi().into_matrix();
        assert!(x.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn kraus_from_trace_choi() {
        let ch = ChoiMatrix::new(3, 1, ComplexMatrix::identity(3)).unwrap().to_channel().unwrap();
        assert_eq!(ch.kappa(), 3);
        let rho = crate::channel::random_density(3, &mut crate::rng::rng_from_seed(1));
        assert!((ch.apply(&rho).unwrap()[(0, 0)] - rho.trace()).norm() < 1e-13);
    }

    #[test]
    fn kraus_from_identity_choi_is_identity_up_to_phase() {
        let ch = QuantumChannel::identity(2).choi().to_channel().unwrap();
        assert_eq!(ch.kappa(), 1);
        let f = &ch.kraus()[0];
        let phase = f[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        let scaled = f.scale_complex(phase.conj());
        assert!(scaled.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn invalid_choi_rejected() {
        let bad_trace = ComplexMatrix::identity(4).scale(2.0);
        assert!(matches!(ChoiMatrix::new(2, 2, bad_trace), Err(Error::Trace(_))));
        let not_psd = ComplexMatrix::from_real_diag(&[2.0, -1.0, 1.0, 0.0]);
        assert!(matches!(ChoiMatrix::new(2, 2, not_psd), Err(Error::NotPsd(_))));
        assert!(ChoiMatrix::new(2, 2, ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn stinespring_of_identity() {
        let st = QuantumChannel::identity(2).stinespring();
        let e1 = ComplexMatrix::column(&[1.0.into()]);
        let expected = tensor(&ComplexMatrix::identity(2), &e1);
        assert_eq!(st.matrix(), &expected);
        assert_eq!(st.vv_dagger(), ComplexMatrix::identity(2));
    }

    #[test]
    fn stinespring_of_dephasing_blocks() {
        let t = 0.3;
        let st = named_channel(&NamedChannel::Dephase { t }).unwrap().stinespring();
        // V V† = Σ_ij F_i† F_j ⊗ |e_i><e_j| with F_1 = √(1-t) I, F_2 = √t Z
        let vv = st.vv_dagger();
        let z = [1.0, -1.0];
        let mix = (t * (1.0 - t)).sqrt();
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let expected = if a != b {
                            0.0
                        } else {
                            match (i, j) {
                                (0, 0) => 1.0 - t,
                                (1, 1) => t,
                                _ => mix * z[a],
                            }
                        };
                        assert!((vv[(a * 2 + i, b * 2 + j)] - Complex64::new(expected, 0.0)).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn stinespring_reproduces_channel() {
        let ch = random_channel_seeded(3, 2, 4, 3).unwrap();
        let st = ch.stinespring();
        assert!(st.isometry_deviation() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let e = ComplexMatrix::unit(3, i, j);
                assert!(st.apply(&e).unwrap().max_abs_diff(&ch.apply(&e).unwrap()) < 1e-12);
            }
        }
        assert!(StinespringIsometry::new(3, 2, 4, st.matrix().clone()).is_ok());
        let back = st.to_channel().unwrap();
        assert_eq!(back.kraus(), ch.kraus());
    }

    #[test]
    fn lindblad_reproduces_channel_and_conjugate() {
        let ch = random_channel_seeded(2, 3, 3, 4).unwrap();
        let lf = ch.lindblad();
        assert!(lf.partial_isometry_deviation() < 1e-12);
        let conj = ch.conjugate();
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::unit(2, i, j);
                assert!(lf.apply(&e).unwrap().max_abs_diff(&ch.apply(&e).unwrap()) < 1e-12);
                assert!(lf.apply_conjugate(&e).unwrap().max_abs_diff(&conj.apply(&e).unwrap()) < 1e-12);
            }
        }
        for (a, b) in lf.kraus().iter().zip(ch.kraus()) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
    }

    #[test]
    fn conjugate_choi_of_identity() {
        let (l, r) = lemma1_pair(&QuantumChannel::identity(3));
        assert_eq!(l.shape(), (3, 3));
        assert!(l.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        assert!(r.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn conjugate_choi_of_random_channel() {
        let ch = random_channel_seeded(3, 3, 4, 99).unwrap();
        let (l, r) = lemma1_pair(&ch);
        assert!(l.max_abs_diff(&r) <= 1e-10);
    }
}
