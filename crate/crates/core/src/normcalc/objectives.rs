//! Log-ratio objectives and their analytic gradients.
//!
//! Each objective is a ratio of Schatten norms that is invariant under
//! rescaling of its variable. With `L = log(ratio)` and a Hermitian `H`
//! such that `dL = Tr(H dA)` for `A = B†B`, the gradient with respect to
//! `(Re B, Im B)` is `2 B H`.

use num_complex::Complex64;

use super::lbfgs::Objective;
use crate::channel::QuantumChannel;
use crate::linalg::{ComplexMatrix, HermitianEigen, PNorm, Subsystem};

pub(crate) fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

pub(crate) fn to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub(crate) fn square_from_params(x: &[f64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_row_major(n, n, to_complex(x)).expect("parameter length matches n^2")
}

/// `A = B†B` for the parameter matrix `B`.
pub(crate) fn gram(b: &ComplexMatrix) -> ComplexMatrix {
    (&b.adjoint() * b).hermitian_part()
}

/// `log ‖Y‖_p` of a PSD matrix and `G` with `d log‖Y‖_p = Tr(G dY)`.
///
/// Finite `p`: `G = Y^{p−1} / Tr Y^p`. At `p = ∞`, `G = v v† / λ_max` for a
/// top eigenvector (a supergradient when the top eigenvalue is degenerate).
/// Returns `-∞` for `Y = 0`.
pub(crate) fn log_norm_grad(y: &ComplexMatrix, p: PNorm) -> (f64, ComplexMatrix) {
    let eig = HermitianEigen::new(y).expect("square");
    let vals: Vec<f64> = eig.values.iter().map(|l| l.max(0.0)).collect();
    let max = vals.iter().copied().fold(0.0, f64::max);
    let n = y.rows();
    if max <= 0.0 {
        return (f64::NEG_INFINITY, ComplexMatrix::zeros(n, n));
    }
    match p {
        PNorm::Infinity => {
            let v = eig.vector(n - 1);
            (max.ln(), ComplexMatrix::outer(&v).scale(1.0 / max))
        }
        PNorm::Finite(p) => {
            let s: f64 = vals.iter().map(|&l| (l / max).powf(p)).sum();
            let log_norm = max.ln() + s.ln() / p;
            // λ^{p−1} / Σ λ^p, computed relative to λ_max
            let scale = 1.0 / (max * s);
            let g = if p == 1.0 {
                ComplexMatrix::identity(n).scale(scale)
            } else {
                let w: Vec<f64> = vals.iter().map(|&l| (l / max).powf(p - 1.0) * scale).collect();
                let mut eig = eig;
                eig.values = w;
                eig.map(|l| l)
            };
            (log_norm, g)
        }
    }
}

/// Largest ratio `‖A‖_p` of a PSD matrix without the gradient.
pub(crate) fn psd_norm(y: &ComplexMatrix, p: PNorm) -> f64 {
    let eig = HermitianEigen::new(y).expect("square");
    let vals: Vec<f64> = eig.values.iter().map(|l| l.max(0.0)).collect();
    p.norm_of(&vals)
}

/// `2 B H` flattened to `(re, im)` pairs.
fn param_gradient(b: &ComplexMatrix, h: &ComplexMatrix) -> Vec<f64> {
    to_real((b * h).as_slice()).into_iter().map(|v| 2.0 * v).collect()
}

/// `L(B) = log ‖Φ(A)‖_p − log ‖A‖_q`, `A = B†B`.
pub(crate) struct QToP<'a> {
    pub ch: &'a QuantumChannel,
    pub q: PNorm,
    pub p: PNorm,
}

impl QToP<'_> {
    pub fn ratio(&self, a: &ComplexMatrix) -> f64 {
        psd_norm(&self.ch.apply_unchecked(a).hermitian_part(), self.p) / psd_norm(a, self.q)
    }
}

impl Objective for QToP<'_> {
    fn dim(&self) -> usize {
        2 * self.ch.d_in() * self.ch.d_in()
    }

    fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let b = square_from_params(x, self.ch.d_in());
        let a = gram(&b);
        let out = self.ch.apply_unchecked(&a).hermitian_part();
        let (ln_out, g_out) = log_norm_grad(&out, self.p);
        let (ln_in, g_in) = log_norm_grad(&a, self.q);
        let h = &self.ch.apply_dual_unchecked(&g_out).hermitian_part() - &g_in;
        (ln_out - ln_in, param_gradient(&b, &h))
    }
}

/// `L(B) = log ‖(A ⊗ I) X (A ⊗ I)‖_p − 2 log ‖A‖_r`, `A = B†B`, for a Choi
/// matrix `X` on `C^{d_in} ⊗ C^{d_out}`; `r = 2p` gives `ω_p`.
pub(crate) struct ChoiForm<'a> {
    pub choi: &'a ComplexMatrix,
    pub d_in: usize,
    pub d_out: usize,
    pub p: PNorm,
    pub constraint: PNorm,
}

impl ChoiForm<'_> {
    pub fn sandwich(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let lifted = a.kron(&ComplexMatrix::identity(self.d_out));
        (&(&lifted * self.choi) * &lifted).hermitian_part()
    }

    pub fn ratio(&self, a: &ComplexMatrix) -> f64 {
        let c = psd_norm(a, self.constraint);
        psd_norm(&self.sandwich(a), self.p) / (c * c)
    }
}

impl Objective for ChoiForm<'_> {
    fn dim(&self) -> usize {
        2 * self.d_in * self.d_in
    }

    fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let b = square_from_params(x, self.d_in);
        let a = gram(&b);
        let lifted = a.kron(&ComplexMatrix::identity(self.d_out));
        let xa = self.choi * &lifted;
        let y = (&lifted * &xa).hermitian_part();
        let (ln_y, g_y) = log_norm_grad(&y, self.p);
        let (ln_a, g_a) = log_norm_grad(&a, self.constraint);
        // K = Tr_2[X (A ⊗ I) G]
        let k = (&xa * &g_y)
            .partial_trace((self.d_in, self.d_out), Subsystem::Second)
            .expect("dimensions match");
        let h = &(&k + &k.adjoint()) - &g_a.scale(2.0);
        (ln_y - 2.0 * ln_a, param_gradient(&b, &h))
    }
}

/// `(I ⊗ F_k) ψ` for `ψ ∈ C^{d_anc} ⊗ C^{d_in}`.
fn lift_kraus(f: &ComplexMatrix, psi: &[Complex64], d_anc: usize) -> Vec<Complex64> {
    let (d_out, d_in) = f.shape();
    let mut out = vec![Complex64::new(0.0, 0.0); d_anc * d_out];
    for a in 0..d_anc {
        let block = &psi[a * d_in..(a + 1) * d_in];
        for r in 0..d_out {
            out[a * d_out + r] = f.row(r).iter().zip(block).map(|(x, y)| x * y).sum();
        }
    }
    out
}

/// `(I ⊗ F_k)† z`.
fn lift_kraus_adjoint(f: &ComplexMatrix, z: &[Complex64], d_anc: usize) -> Vec<Complex64> {
    let (d_out, d_in) = f.shape();
    let mut out = vec![Complex64::new(0.0, 0.0); d_anc * d_in];
    for a in 0..d_anc {
        for r in 0..d_out {
            let zr = z[a * d_out + r];
            for i in 0..d_in {
                out[a * d_in + i] += f[(r, i)].conj() * zr;
            }
        }
    }
    out
}

/// Output `(I ⊗ Φ)(|ψ><ψ|)` and input reduction `Tr_2 |ψ><ψ|` for an
/// unnormalized `ψ ∈ C^d ⊗ C^d`, plus the lifted Kraus images `(I ⊗ F_k) ψ`.
pub(crate) fn pure_parts(ch: &QuantumChannel, psi: &[Complex64]) -> (ComplexMatrix, ComplexMatrix, Vec<Vec<Complex64>>) {
    let d = ch.d_in();
    let images: Vec<Vec<Complex64>> = ch.kraus().iter().map(|f| lift_kraus(f, psi, d)).collect();
    let m = d * ch.d_out();
    let mut out = ComplexMatrix::zeros(m, m);
    for w in &images {
        for i in 0..m {
            if w[i].re == 0.0 && w[i].im == 0.0 {
                continue;
            }
            for j in 0..m {
                out[(i, j)] += w[i] * w[j].conj();
            }
        }
    }
    let coeff = ComplexMatrix::from_row_major(d, d, psi.to_vec()).expect("d x d");
    let reduced = (&coeff * &coeff.adjoint()).hermitian_part();
    (out, reduced, images)
}

/// `L(ψ) = log ‖(I ⊗ Φ)(ψψ*)‖_p − log ‖Tr_2 ψψ*‖_p` over `ψ ∈ C^d ⊗ C^d`.
pub(crate) struct PureRatio<'a> {
    pub ch: &'a QuantumChannel,
    pub p: PNorm,
}

impl PureRatio<'_> {
    pub fn ratio(&self, psi: &[Complex64]) -> f64 {
        let (out, reduced, _) = pure_parts(self.ch, psi);
        psd_norm(&out, self.p) / psd_norm(&reduced, self.p)
    }
}

impl Objective for PureRatio<'_> {
    fn dim(&self) -> usize {
        2 * self.ch.d_in() * self.ch.d_in()
    }

    fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let d = self.ch.d_in();
        let psi = to_complex(x);
        let (out, reduced, images) = pure_parts(self.ch, &psi);
        let (ln_out, g_out) = log_norm_grad(&out, self.p);
        let (ln_red, g_red) = log_norm_grad(&reduced, self.p);
        // gradient 2 [Σ_k (I⊗F_k)† G_out (I⊗F_k) − G_red ⊗ I] ψ
        let mut grad = vec![Complex64::new(0.0, 0.0); d * d];
        for (f, w) in self.ch.kraus().iter().zip(&images) {
            let gw = g_out.apply_vec(w);
            for (acc, v) in grad.iter_mut().zip(lift_kraus_adjoint(f, &gw, d)) {
                *acc += v;
            }
        }
        for a in 0..d {
            for i in 0..d {
                let s: Complex64 = (0..d).map(|b| g_red[(a, b)] * psi[b * d + i]).sum();
                grad[a * d + i] -= s;
            }
        }
        let g = to_real(&grad).into_iter().map(|v| 2.0 * v).collect();
        (ln_out - ln_red, g)
    }
}

/// `−(S[(I ⊗ Φ)(ψψ*)] − S[Tr_2 ψψ*])` on normalized states, natural log.
pub(crate) struct NegConditionalEntropy<'a> {
    pub ch: &'a QuantumChannel,
}

/// Eigenvalues below this are treated as zero inside logarithms.
const LOG_FLOOR: f64 = 1e-300;

/// Von Neumann entropy of `m / Tr m` and `Γ` with `dS = Tr(Γ dm)`.
fn entropy_grad(m: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let mut eig = HermitianEigen::new(m).expect("square");
    let t: f64 = eig.values.iter().map(|l| l.max(0.0)).sum();
    let probs: Vec<f64> = eig.values.iter().map(|l| l.max(0.0) / t).collect();
    let s: f64 = probs.iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()).sum();
    // dS = −Tr[(log ρ + S) dm] / Tr m
    eig.values = probs.iter().map(|&q| -(q.max(LOG_FLOOR).ln() + s) / t).collect();
    (s, eig.map(|l| l))
}

pub(crate) fn conditional_entropy(ch: &QuantumChannel, psi: &[Complex64]) -> f64 {
    let (out, reduced, _) = pure_parts(ch, psi);
    entropy_grad(&out).0 - entropy_grad(&reduced).0
}

impl Objective for NegConditionalEntropy<'_> {
    fn dim(&self) -> usize {
        2 * self.ch.d_in() * self.ch.d_in()
    }

    fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let d = self.ch.d_in();
        let psi = to_complex(x);
        let (out, reduced, images) = pure_parts(self.ch, &psi);
        let (s_out, g_out) = entropy_grad(&out);
        let (s_red, g_red) = entropy_grad(&reduced);
        let mut grad = vec![Complex64::new(0.0, 0.0); d * d];
        for (f, w) in self.ch.kraus().iter().zip(&images) {
            let gw = g_out.apply_vec(w);
            for (acc, v) in grad.iter_mut().zip(lift_kraus_adjoint(f, &gw, d)) {
                *acc += v;
            }
        }
        for a in 0..d {
            for i in 0..d {
                let s: Complex64 = (0..d).map(|b| g_red[(a, b)] * psi[b * d + i]).sum();
                grad[a * d + i] -= s;
            }
        }
        let g = to_real(&grad).into_iter().map(|v| -2.0 * v).collect();
        (-(s_out - s_red), g)
    }
}
