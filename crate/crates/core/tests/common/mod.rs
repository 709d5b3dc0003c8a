//! Reference computations for the integration tests. They go through
//! nalgebra directly and build `𝕀 ⊗ Φ` from explicit Kronecker products, so
//! they share no numerical code with the library's norm and channel paths.
#![allow(dead_code)]

use chnorm_core::channel::random_unit_vector;
use chnorm_core::{ComplexMatrix, QuantumChannel};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn to_na(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Schatten norm from nalgebra's SVD; `p = f64::INFINITY` is the operator norm.
pub fn schatten(m: &DMatrix<Complex64>, p: f64) -> f64 {
    let s = m.clone().singular_values();
    if p.is_infinite() {
        s.max()
    } else {
        s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `(𝕀_d ⊗ Φ)(ρ)` with `I ⊗ F_k` formed explicitly.
pub fn id_tensor_apply(ch: &QuantumChannel, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = ch.d_in();
    let id = DMatrix::<Complex64>::identity(d, d);
    let m = d * ch.d_out();
    let mut out = DMatrix::<Complex64>::zeros(m, m);
    for f in ch.kraus() {
        let k = id.kronecker(&to_na(f));
        out += &k * rho * k.adjoint();
    }
    out
}

/// `Tr_2` of an operator on `C^d1 ⊗ C^d2`, by explicit summation.
pub fn trace_out_second(rho: &DMatrix<Complex64>, d1: usize, d2: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| rho[(i * d2 + k, j * d2 + k)]).sum())
}

/// The pure-state ratio `‖(𝕀⊗Φ)(ψψ*)‖_p / ‖Tr_2 ψψ*‖_p` for `ψ` given as an
/// `n x 1` column (the brute-force sampling layout).
pub fn omega_ratio(ch: &QuantumChannel, p: f64, psi: &ComplexMatrix) -> f64 {
    let v = to_na(psi);
    let rho = &v * v.adjoint();
    let d = ch.d_in();
    schatten(&id_tensor_apply(ch, &rho), p) / schatten(&trace_out_second(&rho, d, d), p)
}

/// `‖Φ(A)‖_p / ‖A‖_q` via the Kraus sum.
pub fn q_to_p_ratio(ch: &QuantumChannel, q: f64, p: f64, a: &ComplexMatrix) -> f64 {
    let a = to_na(a);
    let mut out = DMatrix::<Complex64>::zeros(ch.d_out(), ch.d_out());
    for f in ch.kraus() {
        let f = to_na(f);
        out += &f * &a * f.adjoint();
    }
    schatten(&out, p) / schatten(&a, q)
}

/// Von Neumann entropy (natural log) of `ρ / Tr ρ`.
pub fn entropy(rho: &DMatrix<Complex64>) -> f64 {
    let t = rho.trace().re;
    rho.clone()
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l / t)
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum()
}

/// `S[(𝕀⊗Φ)(ψψ*)] − S[Tr_2 ψψ*]`.
pub fn conditional_entropy(ch: &QuantumChannel, psi: &ComplexMatrix) -> f64 {
    let v = to_na(psi);
    let rho = &v * v.adjoint();
    let d = ch.d_in();
    entropy(&id_tensor_apply(ch, &rho)) - entropy(&trace_out_second(&rho, d, d))
}

/// Largest entry of `Φ(ρ) − Ψ(ρ)` over random rank-one (non-Hermitian) `ρ`.
pub fn action_distance(a: &QuantumChannel, b: &QuantumChannel, probes: usize, seed: u64) -> f64 {
    let mut rng = chnorm_core::rng::rng_from_seed(seed);
    let d = a.d_in();
    (0..probes)
        .map(|_| {
            let x = ComplexMatrix::column(&random_unit_vector(d, &mut rng));
            let y = ComplexMatrix::column(&random_unit_vector(d, &mut rng));
            let rho = &x * &y.adjoint();
            a.apply(&rho).unwrap().max_abs_diff(&b.apply(&rho).unwrap())
        })
        .fold(0.0, f64::max)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
