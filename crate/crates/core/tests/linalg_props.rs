mod common;

use chnorm_core::channel::{gaussian_matrix, haar_isometry, random_density};
use chnorm_core::linalg::{frac_power, purify, schatten_norm, singular_values, HermitianEigen, PNorm, Subsystem};
use chnorm_core::rng::rng_from_seed;
use chnorm_core::ComplexMatrix;
use common::{schatten, to_na};
use proptest::prelude::*;

fn p_value() -> impl Strategy<Value = PNorm> {
    prop_oneof![
        (1.0f64..6.0).prop_map(|p| PNorm::new(p).unwrap()),
        Just(PNorm::Infinity),
    ]
}

fn psd(n: usize, seed: u64) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, &mut rng_from_seed(seed));
    (&g * &g.adjoint()).hermitian_part()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schatten_matches_reference_svd(n in 1usize..5, m in 1usize..5, seed: u64, p in p_value()) {
        let a = gaussian_matrix(n, n, &mut rng_from_seed(seed));
        let ours = schatten_norm(&a, p).unwrap();
        let reference = schatten(&to_na(&a), p.value());
        prop_assert!((ours - reference).abs() <= 1e-10 * reference.max(1.0));
        // rectangular input is rejected rather than silently padded
        if n != m {
            let r = gaussian_matrix(n, m, &mut rng_from_seed(seed));
            prop_assert!(schatten_norm(&r, p).is_err());
        }
    }

    #[test]
    fn schatten_is_nonincreasing_in_p(n in 1usize..5, seed: u64, p in 1.0f64..5.0, dp in 0.0f64..3.0) {
        let a = gaussian_matrix(n, n, &mut rng_from_seed(seed));
        let lo = schatten_norm(&a, PNorm::new(p).unwrap()).unwrap();
        let hi = schatten_norm(&a, PNorm::new(p + dp).unwrap()).unwrap();
        let inf = schatten_norm(&a, PNorm::Infinity).unwrap();
        prop_assert!(hi <= lo * (1.0 + 1e-12));
        prop_assert!(inf <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn schatten_unitarily_invariant(n in 1usize..5, seed: u64, p in p_value()) {
        let mut rng = rng_from_seed(seed);
        let a = gaussian_matrix(n, n, &mut rng);
        let u = haar_isometry(n, n, &mut rng).unwrap();
        let v = haar_isometry(n, n, &mut rng).unwrap();
        let base = schatten_norm(&a, p).unwrap();
        for other in [a.transpose(), a.adjoint(), &(&u * &a) * &v] {
            prop_assert!((schatten_norm(&other, p).unwrap() - base).abs() <= 1e-10 * base.max(1.0));
        }
    }

    #[test]
    fn holder_inequality(n in 1usize..5, seed: u64, p in 1.0f64..8.0) {
        let mut rng = rng_from_seed(seed);
        let a = gaussian_matrix(n, n, &mut rng);
        let b = gaussian_matrix(n, n, &mut rng);
        let conj = if p == 1.0 { PNorm::Infinity } else { PNorm::new(p / (p - 1.0)).unwrap() };
        let lhs = (&a * &b).trace().norm();
        let rhs = schatten_norm(&a, PNorm::new(p).unwrap()).unwrap() * schatten_norm(&b, conj).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-10));
    }

    #[test]
    fn singular_values_match_frobenius_norm(n in 1usize..5, seed: u64) {
        let a = gaussian_matrix(n, n, &mut rng_from_seed(seed));
        let s = singular_values(&a).unwrap();
        prop_assert_eq!(s.len(), n);
        prop_assert!(s.iter().all(|&x| x >= 0.0));
        let frob: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((frob - a.frobenius_norm()).abs() < 1e-10 * frob.max(1.0));
    }

    #[test]
    fn fractional_powers_compose(n in 1usize..5, seed: u64, s in 0.05f64..2.0, t in 0.05f64..2.0) {
        let a = psd(n, seed);
        let lhs = &frac_power(&a, s).unwrap() * &frac_power(&a, t).unwrap();
        let rhs = frac_power(&a, s + t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn square_root_squares_back(n in 1usize..5, seed: u64) {
        let a = psd(n, seed);
        let r = frac_power(&a, 0.5).unwrap();
        prop_assert!((&r * &r).max_abs_diff(&a) <= 1e-10 * a.max_abs().max(1.0));
        prop_assert!(HermitianEigen::psd(&r).is_ok());
    }

    #[test]
    fn partial_trace_of_product(d1 in 1usize..4, d2 in 1usize..4, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let a = gaussian_matrix(d1, d1, &mut rng);
        let b = gaussian_matrix(d2, d2, &mut rng);
        let ab = a.kron(&b);
        let second = ab.partial_trace((d1, d2), Subsystem::Second).unwrap();
        let first = ab.partial_trace((d1, d2), Subsystem::First).unwrap();
        prop_assert!(second.max_abs_diff(&a.scale_complex(b.trace())) < 1e-12 * (1.0 + ab.max_abs() * d2 as f64));
        prop_assert!(first.max_abs_diff(&b.scale_complex(a.trace())) < 1e-12 * (1.0 + ab.max_abs() * d1 as f64));
        prop_assert!((ab.trace() - a.trace() * b.trace()).norm() < 1e-11 * (1.0 + ab.max_abs() * (d1 * d2) as f64));
    }

    #[test]
    fn kronecker_mixed_product(d1 in 1usize..4, d2 in 1usize..4, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let (a, c) = (gaussian_matrix(d1, d1, &mut rng), gaussian_matrix(d1, d1, &mut rng));
        let (b, d) = (gaussian_matrix(d2, d2, &mut rng), gaussian_matrix(d2, d2, &mut rng));
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11 * rhs.max_abs().max(1.0));
        let reference = to_na(&a).kronecker(&to_na(&b));
        prop_assert!(a.kron(&b).max_abs_diff(&common::from_na(&reference)) == 0.0);
    }

    #[test]
    fn purification_reduces_to_state(n in 1usize..5, seed: u64) {
        let rho = random_density(n, &mut rng_from_seed(seed));
        let psi = purify(&rho).unwrap();
        let back = psi.reduced(Subsystem::Second);
        prop_assert!(back.max_abs_diff(&rho) <= 1e-10);
        let norm: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn operator_and_trace_norm_of_known_matrix() {
    // singular values 3 and 4
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 3.0], &[4.0, 0.0]]).unwrap();
    assert!((schatten_norm(&a, PNorm::ONE).unwrap() - 7.0).abs() < 1e-12);
    assert!((schatten_norm(&a, PNorm::TWO).unwrap() - 5.0).abs() < 1e-12);
    assert!((schatten_norm(&a, PNorm::Infinity).unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn frac_power_zero_is_support_projection() {
    let v = [common::c(0.6, 0.0), common::c(0.0, 0.8)];
    let p = ComplexMatrix::outer(&v);
    let proj = frac_power(&p.scale(0.3), 0.0).unwrap();
    assert!(proj.max_abs_diff(&p) < 1e-12);
}
