//! Random-sampling oracle for small-dimensional suprema.
//!
//! Points are drawn from Gaussian parameters: a unit vector is a normalized
//! complex Gaussian (Haar), and PSD points are `G G†` for a complex Ginibre
//! `G`, rescaled onto the required ball or trace. The best sample is then
//! refined by a derivative-free pattern search in the same parameters.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::objectives::{psd_norm, to_complex};
use crate::linalg::{ComplexMatrix, PNorm};
use crate::rng;

const TAG_BRUTE: u64 = 0x6272_7574;
const POLISH_START: f64 = 0.1;
const POLISH_END: f64 = 1e-10;
const POLISH_SWEEPS: usize = 200;

/// Where [`brute_force_sup`] samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleDomain {
    /// Unit vectors in `C^n`, passed to the objective as an `n x 1` column.
    UnitVector { n: usize },
    /// PSD `n x n` matrices with `‖A‖_norm = 1`.
    PsdBall { n: usize, norm: PNorm },
    /// Density matrices on `C^n`.
    Density { n: usize },
}

impl SampleDomain {
    fn param_len(&self) -> usize {
        match *self {
            SampleDomain::UnitVector { n } => 2 * n,
            SampleDomain::PsdBall { n, .. } | SampleDomain::Density { n } => 2 * n * n,
        }
    }

    /// Maps real parameters to a point; `None` for the degenerate zero point.
    fn point(&self, x: &[f64]) -> Option<ComplexMatrix> {
        match *self {
            SampleDomain::UnitVector { n } => {
                let v = to_complex(x);
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                (norm > 0.0).then(|| ComplexMatrix::from_row_major(n, 1, v).expect("n x 1").scale(1.0 / norm))
            }
            SampleDomain::PsdBall { n, norm } => {
                let a = gram_of(x, n);
                let s = psd_norm(&a, norm);
                (s > 0.0).then(|| a.scale(1.0 / s))
            }
            SampleDomain::Density { n } => {
                let a = gram_of(x, n);
                let t = a.trace().re;
                (t > 0.0).then(|| a.scale(1.0 / t))
            }
        }
    }
}

fn gram_of(x: &[f64], n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_row_major(n, n, to_complex(x)).expect("n x n");
    (&g * &g.adjoint()).hermitian_part()
}

/// Outcome of [`brute_force_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    /// Best value among the raw samples; a running maximum over the sample
    /// stream, so it never decreases as `samples` grows.
    pub sampled: f64,
    /// Value after polishing the best sample (at least `sampled`).
    pub polished: f64,
    pub argmax: ComplexMatrix,
}

fn eval(objective: &(dyn Fn(&ComplexMatrix) -> f64 + Sync), domain: &SampleDomain, x: &[f64]) -> f64 {
    match domain.point(x) {
        Some(m) => {
            let v = objective(&m);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        }
        None => f64::NEG_INFINITY,
    }
}

/// Samples `samples` points, keeps the best (first index on ties) and polishes it.
/// Sample `i` depends only on `(seed, i)`.
pub fn brute_force_search(
    objective: &(dyn Fn(&ComplexMatrix) -> f64 + Sync),
    domain: &SampleDomain,
    samples: usize,
    seed: u64,
) -> BruteForce {
    let len = domain.param_len();
    let draw = |i: usize| -> Vec<f64> {
        let mut r = rng::stream(seed, TAG_BRUTE, i as u64);
        (0..len).map(|_| StandardNormal.sample(&mut r)).collect()
    };
    let values: Vec<f64> = (0..samples.max(1))
        .into_par_iter()
        .map(|i| eval(objective, domain, &draw(i)))
        .collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let sampled = values[best];
    let mut x = draw(best);
    let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    x.iter_mut().for_each(|v| *v /= scale);
    let (x, polished) = polish(objective, domain, x, sampled);
    let argmax = domain.point(&x).unwrap_or_else(|| ComplexMatrix::zeros(1, 1));
    BruteForce {
        sampled,
        polished,
        argmax,
    }
}

/// Best value of [`brute_force_search`] after polishing.
pub fn brute_force_sup(
    objective: &(dyn Fn(&ComplexMatrix) -> f64 + Sync),
    domain: &SampleDomain,
    samples: usize,
    seed: u64,
) -> f64 {
    brute_force_search(objective, domain, samples, seed).polished
}

/// Coordinate pattern search with a halving step; accepts strict
/// improvements only.
fn polish(
    objective: &(dyn Fn(&ComplexMatrix) -> f64 + Sync),
    domain: &SampleDomain,
    mut x: Vec<f64>,
    mut f: f64,
) -> (Vec<f64>, f64) {
    let mut h = POLISH_START;
    while h >= POLISH_END {
        for _ in 0..POLISH_SWEEPS {
            let mut improved = false;
            for i in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + sign * h;
                    let ft = eval(objective, domain, &x);
                    if ft > f {
                        f = ft;
                        improved = true;
                        break;
                    }
                    x[i] = old;
                }
            }
            if !improved {
                break;
            }
        }
        h *= 0.5;
    }
    (x, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::schatten_norm;

    #[test]
    fn trace_norm_of_densities_is_one() {
        let f = |m: &ComplexMatrix| schatten_norm(m, PNorm::ONE).unwrap();
        for samples in [1, 10, 100] {
            let v = brute_force_sup(&f, &SampleDomain::Density { n: 3 }, samples, 4);
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polish_reaches_rayleigh_maximum() {
        let w = ComplexMatrix::from_real_diag(&[1.0, 3.0, 2.0]);
        let f = |v: &ComplexMatrix| (&(&v.adjoint() * &w) * v)[(0, 0)].re;
        let res = brute_force_search(&f, &SampleDomain::UnitVector { n: 3 }, 50, 1);
        assert!(res.polished >= res.sampled);
        assert!((res.polished - 3.0).abs() < 1e-9, "{}", res.polished);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = |m: &ComplexMatrix| m[(0, 0)].re;
        let a = brute_force_search(&f, &SampleDomain::PsdBall { n: 2, norm: PNorm::TWO }, 200, 9);
        let b = brute_force_search(&f, &SampleDomain::PsdBall { n: 2, norm: PNorm::TWO }, 200, 9);
        assert_eq!(a, b);
    }
}
