//! Channel suites for the verification runners.
//!
//! Random channel `i` of a suite is drawn from the stream
//! `(seed, tag, i)`, dimensions included, so suites of different sizes share
//! their prefixes.

use rand::Rng as _;

use crate::channel::{named_channel, random_channel, random_density, NamedChannel, QuantumChannel};
use crate::linalg::ComplexMatrix;
use crate::rng;

pub(crate) const TAG_LEMMA1: u64 = 0x6c65_6d31;
pub(crate) const TAG_THEOREM2: u64 = 0x7468_6d32;
pub(crate) const TAG_MULT: u64 = 0x6d75_6c74;
pub(crate) const TAG_TRACE: u64 = 0x7472_7465;
pub(crate) const TAG_KING: u64 = 0x6b69_6e67;
pub(crate) const TAG_PROBE: u64 = 0x7072_6f62;

/// `count` random channels with `d_in, d_out ∈ [min_d, max_d]` and
/// `κ ∈ [max(min_kappa, ⌈d_in/d_out⌉), max_kappa]`.
pub fn random_suite(
    count: usize,
    (min_d, max_d): (usize, usize),
    (min_kappa, max_kappa): (usize, usize),
    seed: u64,
    tag: u64,
) -> Vec<QuantumChannel> {
    (0..count)
        .map(|i| {
            let s = rng::derive_seed(seed, tag, i as u64);
            let mut r = rng::rng_from_seed(s);
            let d_in = r.random_range(min_d..=max_d);
            let d_out = r.random_range(min_d..=max_d);
            let lo = min_kappa.max(d_in.div_ceil(d_out)).min(max_kappa);
            let kappa = r.random_range(lo..=max_kappa);
            random_channel(d_in, d_out, kappa, &mut r)
                .expect("suite dimensions admit a dilation")
                .with_name("random")
                .with_seed(s)
        })
        .collect()
}

/// Random qubit channels with `κ ∈ [2, 4]`.
pub fn random_qubit_suite(count: usize, seed: u64, tag: u64) -> Vec<QuantumChannel> {
    random_suite(count, (2, 2), (2, 4), seed, tag)
}

pub(crate) fn named(spec: NamedChannel) -> QuantumChannel {
    named_channel(&spec).expect("built-in parameters are valid")
}

/// Weyl-covariant channel on `C^n` with random mixing probabilities.
pub fn random_weyl_covariant(n: usize, seed: u64) -> QuantumChannel {
    let mut r = rng::rng_from_seed(seed);
    let w: Vec<f64> = (0..n * n).map(|_| r.random::<f64>()).collect();
    let total: f64 = w.iter().sum();
    let probs = w.iter().map(|x| x / total).collect();
    named(NamedChannel::WeylCovariant { d: n, probs })
}

/// A concavity probe: channel, segment endpoints.
pub struct Probe {
    pub channel: QuantumChannel,
    pub rho1: ComplexMatrix,
    pub rho2: ComplexMatrix,
}

/// Random qubit channels with random density-matrix segments. Every third
/// segment starts at a pure state to exercise the boundary of the simplex.
pub fn concavity_probes(count: usize, seed: u64) -> Vec<Probe> {
    (0..count)
        .map(|i| {
            let s = rng::derive_seed(seed, TAG_PROBE, i as u64);
            let mut r = rng::rng_from_seed(s);
            let kappa = r.random_range(1..=4);
            let channel = random_channel(2, 2, kappa, &mut r)
                .expect("qubit dilation")
                .with_name("random")
                .with_seed(s);
            let rho1 = if i % 3 == 0 {
                ComplexMatrix::outer(&crate::channel::random_unit_vector(2, &mut r))
            } else {
                random_density(2, &mut r)
            };
            let rho2 = random_density(2, &mut r);
            Probe { channel, rho1, rho2 }
        })
        .collect()
}

/// Short label for reports: the name, plus dimensions and seed for random
/// channels.
pub fn describe(ch: &QuantumChannel) -> String {
    match (ch.name(), ch.seed()) {
        (Some(name), Some(seed)) => format!("{name}({}→{}, κ={}, seed={seed})", ch.d_in(), ch.d_out(), ch.kappa()),
        (Some(name), None) => name.to_string(),
        (None, _) => format!("channel({}→{}, κ={})", ch.d_in(), ch.d_out(), ch.kappa()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_prefixes_are_stable() {
        let a = random_suite(5, (1, 4), (1, 8), 3, TAG_LEMMA1);
        let b = random_suite(9, (1, 4), (1, 8), 3, TAG_LEMMA1);
        assert_eq!(a[..], b[..5]);
        for ch in &b {
            assert!(ch.d_in() <= 4 && ch.d_out() <= 4 && ch.kappa() <= 8);
        }
    }

    #[test]
    fn descriptor_includes_seed() {
        let ch = &random_qubit_suite(1, 0, TAG_MULT)[0];
        assert!(describe(ch).starts_with("random(2→2"));
        assert_eq!(describe(&QuantumChannel::identity(2)), "identity");
    }
}
