//! Scenario runners that check the identities relating `‖·‖_{p→p}`, `ω_p`,
//! conjugate channels and Choi matrices over suites of channels.
//!
//! Instances run concurrently and are collected in suite order; every
//! random choice is derived from the configured seed, so a report depends
//! only on its [`VerifyConfig`].

mod report;
mod suite;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{lemma1_pair, NamedChannel, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{schatten_norm, PNorm};
use crate::normcalc::{concavity_probe, norm_q_to_p, omega_p_choi, NormEstimate, OptimizerConfig};
use crate::rng::derive_seed;

pub use report::{Comparison, Instance, Smaller, Summary, VerificationReport};
pub use suite::{concavity_probes, describe, random_qubit_suite, random_suite, random_weyl_covariant, Probe};
use suite::{named, TAG_KING, TAG_LEMMA1, TAG_MULT, TAG_THEOREM2, TAG_TRACE};

pub const LEMMA1_TOL: f64 = 1e-10;
pub const THEOREM2_TOL: f64 = 1e-4;
pub const MULTIPLICATIVITY_TOL: f64 = 2e-3;
pub const TRACE_TENSOR_TOL: f64 = 1e-3;
pub const KING_PRODUCT_TOL: f64 = 2e-3;
pub const KING_CLOSED_FORM_TOL: f64 = 1e-8;
pub const CONCAVITY_TOL: f64 = 1e-9;

const CONCAVITY_LAMBDAS: [f64; 3] = [0.25, 0.5, 0.75];

/// The identities the runners know.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityName {
    Lemma1,
    Theorem2,
    Multiplicativity,
    TraceTensor,
    King,
}

impl IdentityName {
    pub const ALL: [IdentityName; 5] = [
        IdentityName::Lemma1,
        IdentityName::Theorem2,
        IdentityName::Multiplicativity,
        IdentityName::TraceTensor,
        IdentityName::King,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::Lemma1 => "lemma1",
            IdentityName::Theorem2 => "theorem2",
            IdentityName::Multiplicativity => "multiplicativity",
            IdentityName::TraceTensor => "trace-tensor",
            IdentityName::King => "king",
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown identity `{s}`")))
    }
}

/// Everything a report depends on.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Small suites and fewer restarts.
    pub quick: bool,
    /// Overrides each identity's default `p` values when nonempty.
    pub ps: Vec<PNorm>,
    /// Restart count and tolerances; the optimizer seed is derived per
    /// instance from `seed`.
    pub optimizer: OptimizerConfig,
}

impl VerifyConfig {
    pub fn quick(seed: u64) -> Self {
        Self {
            seed,
            quick: true,
            ps: Vec::new(),
            optimizer: OptimizerConfig::default().with_restarts(16),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn ps_or(&self, default: &[f64]) -> Vec<PNorm> {
        if self.ps.is_empty() {
            default.iter().map(|&p| PNorm::new(p).expect("default p values are valid")).collect()
        } else {
            self.ps.clone()
        }
    }

    /// Optimizer settings for instance `index` of the stream `tag`.
    fn optimizer_for(&self, tag: u64, index: usize) -> OptimizerConfig {
        self.optimizer.clone().with_seed(derive_seed(self.seed, tag, index as u64))
    }

    fn size(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

/// Diagnostic note for estimates that did not meet the convergence rule.
fn convergence_note(parts: &[(&str, &NormEstimate)]) -> Option<String> {
    let flagged: Vec<String> = parts
        .iter()
        .filter(|(_, e)| !e.converged)
        .map(|(label, e)| format!("{label} not converged ({}/{} restarts agree)", e.restarts_agreeing, e.restarts))
        .collect();
    (!flagged.is_empty()).then(|| flagged.join("; "))
}

fn attach(instance: Instance, note: Option<String>) -> Instance {
    match note {
        Some(n) => instance.with_note(n),
        None => instance,
    }
}

fn finish(name: IdentityName, cfg: &VerifyConfig, start: Instant, instances: Vec<Vec<Instance>>) -> VerificationReport {
    let instances = instances.into_iter().flatten().collect();
    VerificationReport::new(name.as_str(), cfg, instances, start.elapsed().as_secs_f64())
}

/// Max-entry difference between `X_{Φ^C}` and `(V V†)^T` for each channel.
pub fn verify_lemma1(channels: &[QuantumChannel], cfg: &VerifyConfig) -> VerificationReport {
    let start = Instant::now();
    let instances = channels
        .par_iter()
        .map(|ch| {
            let (left, right) = lemma1_pair(ch);
            let diff = left.max_abs_diff(&right);
            vec![Instance::new(describe(ch), "max |X_{Φ^C} − (VV†)^T|", diff, 0.0, LEMMA1_TOL, Comparison::Absolute)]
        })
        .collect();
    finish(IdentityName::Lemma1, cfg, start, instances)
}

/// `‖Φ‖_{p→p}` against `ω_p(Φ^C)`.
pub fn verify_theorem2(channels: &[QuantumChannel], ps: &[PNorm], cfg: &VerifyConfig) -> VerificationReport {
    let start = Instant::now();
    let tasks: Vec<(usize, &QuantumChannel, PNorm)> = channels
        .iter()
        .flat_map(|ch| ps.iter().map(move |&p| (ch, p)))
        .enumerate()
        .map(|(i, (ch, p))| (i, ch, p))
        .collect();
    let instances = tasks
        .par_iter()
        .map(|&(i, ch, p)| {
            let opt = cfg.optimizer_for(TAG_THEOREM2, i);
            let lhs = norm_q_to_p(ch, p, p, &opt).expect("validated inputs");
            let rhs = omega_p_choi(&ch.conjugate(), p, &opt).expect("validated inputs");
            let inst = Instance::new(describe(ch), "‖Φ‖_{p→p} vs ω_p(Φ^C)", lhs.value, rhs.value, THEOREM2_TOL, Comparison::Relative)
                .with_p(p);
            vec![attach(inst, convergence_note(&[("lhs", &lhs), ("rhs", &rhs)]))]
        })
        .collect();
    finish(IdentityName::Theorem2, cfg, start, instances)
}

/// Multiplicativity of `‖·‖_{p→p}` and `ω_p` over channel pairs: two
/// equalities and the two one-sided bounds `value(Φ₁⊗Φ₂) ≥ product`.
pub fn verify_multiplicativity(
    pairs: &[(QuantumChannel, QuantumChannel)],
    ps: &[PNorm],
    cfg: &VerifyConfig,
) -> VerificationReport {
    let start = Instant::now();
    let tasks: Vec<(usize, &(QuantumChannel, QuantumChannel), PNorm)> = pairs
        .iter()
        .flat_map(|pair| ps.iter().map(move |&p| (pair, p)))
        .enumerate()
        .map(|(i, (pair, p))| (i, pair, p))
        .collect();
    let instances = tasks
        .par_iter()
        .map(|&(i, (a, b), p)| {
            let opt = cfg.optimizer_for(TAG_MULT, i);
            let label = format!("{} ⊗ {}", describe(a), describe(b));
            let prod = a.tensor(b);
            let na = norm_q_to_p(a, p, p, &opt).expect("validated inputs");
            let nb = norm_q_to_p(b, p, p, &opt).expect("validated inputs");
            let nab = norm_q_to_p(&prod, p, p, &opt).expect("validated inputs");
            let wa = omega_p_choi(a, p, &opt).expect("validated inputs");
            let wb = omega_p_choi(b, p, &opt).expect("validated inputs");
            let wab = omega_p_choi(&prod, p, &opt).expect("validated inputs");
            let norm_note = convergence_note(&[("Φ₁", &na), ("Φ₂", &nb), ("Φ₁⊗Φ₂", &nab)]);
            let omega_note = convergence_note(&[("Φ₁", &wa), ("Φ₂", &wb), ("Φ₁⊗Φ₂", &wab)]);
            let (np, wp) = (na.value * nb.value, wa.value * wb.value);
            vec![
                attach(
                    Instance::new(&label, "‖Φ₁⊗Φ₂‖_{p→p} = product", nab.value, np, MULTIPLICATIVITY_TOL, Comparison::Relative),
                    norm_note.clone(),
                )
                .with_p(p),
                attach(
                    Instance::new(&label, "‖Φ₁⊗Φ₂‖_{p→p} ≥ product", nab.value, np, MULTIPLICATIVITY_TOL, Comparison::AtLeast),
                    norm_note,
                )
                .with_p(p),
                attach(
                    Instance::new(&label, "ω_p(Φ₁⊗Φ₂) = product", wab.value, wp, MULTIPLICATIVITY_TOL, Comparison::Relative),
                    omega_note.clone(),
                )
                .with_p(p),
                attach(
                    Instance::new(&label, "ω_p(Φ₁⊗Φ₂) ≥ product", wab.value, wp, MULTIPLICATIVITY_TOL, Comparison::AtLeast),
                    omega_note,
                )
                .with_p(p),
            ]
        })
        .collect();
    finish(IdentityName::Multiplicativity, cfg, start, instances)
}

/// `ω_p(Φ ⊗ Tr) = ω_p(Tr ⊗ Φ) = ω_p(Φ)`, with the trace channel on `M_k`.
pub fn verify_trace_tensor(channels: &[(QuantumChannel, usize)], ps: &[PNorm], cfg: &VerifyConfig) -> VerificationReport {
    let start = Instant::now();
    let tasks: Vec<(usize, &(QuantumChannel, usize), PNorm)> = channels
        .iter()
        .flat_map(|c| ps.iter().map(move |&p| (c, p)))
        .enumerate()
        .map(|(i, (c, p))| (i, c, p))
        .collect();
    let instances = tasks
        .par_iter()
        .map(|&(i, (ch, k), p)| {
            let opt = cfg.optimizer_for(TAG_TRACE, i);
            let tr = QuantumChannel::trace(*k);
            let label = format!("{} with Tr on M_{k}", describe(ch));
            let w = omega_p_choi(ch, p, &opt).expect("validated inputs");
            let right = omega_p_choi(&ch.tensor(&tr), p, &opt).expect("validated inputs");
            let left = omega_p_choi(&tr.tensor(ch), p, &opt).expect("validated inputs");
            vec![
                attach(
                    Instance::new(&label, "ω_p(Φ⊗Tr) vs ω_p(Φ)", right.value, w.value, TRACE_TENSOR_TOL, Comparison::Relative),
                    convergence_note(&[("Φ⊗Tr", &right), ("Φ", &w)]),
                )
                .with_p(p),
                attach(
                    Instance::new(&label, "ω_p(Tr⊗Φ) vs ω_p(Φ)", left.value, w.value, TRACE_TENSOR_TOL, Comparison::Relative),
                    convergence_note(&[("Tr⊗Φ", &left), ("Φ", &w)]),
                )
                .with_p(p),
            ]
        })
        .collect();
    finish(IdentityName::TraceTensor, cfg, start, instances)
}

/// `n^{−1/p} ‖X_Ω‖_p`, the value of `ω_p` at a covariant channel on `C^n`.
pub fn covariant_closed_form(omega: &QuantumChannel, p: PNorm) -> f64 {
    let n = omega.d_in() as f64;
    let x = omega.choi().into_matrix();
    n.powf(-p.reciprocal()) * schatten_norm(&x, p).expect("Choi matrices are square")
}

/// For covariant channels `Ω`: the closed form of `ω_p(Ω)`, the product rule
/// `ω_p(Ω⊗Φ) = ω_p(Ω) ω_p(Φ)` against each partner, and the minimum
/// concavity deficit of `g_p` over `probes` for each `p`.
pub fn verify_king_lemma(
    covariant: &[QuantumChannel],
    partners: &[QuantumChannel],
    probes: &[Probe],
    ps: &[PNorm],
    cfg: &VerifyConfig,
) -> VerificationReport {
    let start = Instant::now();
    enum Task<'a> {
        ClosedForm(&'a QuantumChannel, PNorm),
        Product(&'a QuantumChannel, &'a QuantumChannel, PNorm),
        Concavity(PNorm),
    }
    let mut tasks = Vec::new();
    for &p in ps {
        for om in covariant {
            tasks.push(Task::ClosedForm(om, p));
            for ph in partners {
                tasks.push(Task::Product(om, ph, p));
            }
        }
        if !probes.is_empty() && p.finite().is_some() {
            tasks.push(Task::Concavity(p));
        }
    }
    let instances = tasks
        .par_iter()
        .enumerate()
        .map(|(i, task)| {
            let opt = cfg.optimizer_for(TAG_KING, i);
            match *task {
                Task::ClosedForm(om, p) => {
                    let est = omega_p_choi(om, p, &opt).expect("validated inputs");
                    let closed = covariant_closed_form(om, p);
                    let inst = Instance::new(describe(om), "ω_p(Ω) vs n^{−1/p}‖X_Ω‖_p", est.value, closed, KING_CLOSED_FORM_TOL, Comparison::Relative)
                        .with_p(p);
                    vec![attach(inst, convergence_note(&[("Ω", &est)]))]
                }
                Task::Product(om, ph, p) => {
                    let wo = omega_p_choi(om, p, &opt).expect("validated inputs");
                    let wp = omega_p_choi(ph, p, &opt).expect("validated inputs");
                    let wop = omega_p_choi(&om.tensor(ph), p, &opt).expect("validated inputs");
                    let label = format!("{} ⊗ {}", describe(om), describe(ph));
                    let inst = Instance::new(label, "ω_p(Ω⊗Φ) vs ω_p(Ω)ω_p(Φ)", wop.value, wo.value * wp.value, KING_PRODUCT_TOL, Comparison::Relative)
                        .with_p(p);
                    vec![attach(inst, convergence_note(&[("Ω", &wo), ("Φ", &wp), ("Ω⊗Φ", &wop)]))]
                }
                Task::Concavity(p) => {
                    let min = probes
                        .iter()
                        .flat_map(|pr| {
                            concavity_probe(&pr.channel, p, &pr.rho1, &pr.rho2, &CONCAVITY_LAMBDAS).expect("probe states are valid")
                        })
                        .fold(f64::INFINITY, f64::min);
                    let inst = Instance::new(
                        format!("{} random qubit probes", probes.len()),
                        "min g_p concavity deficit",
                        min,
                        0.0,
                        CONCAVITY_TOL,
                        Comparison::AtLeast,
                    )
                    .with_p(p)
                    .with_note(format!("λ ∈ {CONCAVITY_LAMBDAS:?}"));
                    vec![inst]
                }
            }
        })
        .collect();
    finish(IdentityName::King, cfg, start, instances)
}

/// Default (or quick) suite for `name`, run under `cfg`.
pub fn run(name: IdentityName, cfg: &VerifyConfig) -> VerificationReport {
    let seed = cfg.seed;
    match name {
        IdentityName::Lemma1 => {
            let mut suite = random_suite(cfg.size(100, 10), (1, 4), (1, 8), seed, TAG_LEMMA1);
            suite.extend((2..=4).map(QuantumChannel::identity));
            suite.extend([0.0, 0.3, 0.5, 1.0].map(|t| named(NamedChannel::Dephase { t })));
            verify_lemma1(&suite, cfg)
        }
        IdentityName::Theorem2 => {
            let mut suite = vec![
                QuantumChannel::identity(2),
                named(NamedChannel::Depolarize { d: 2, lambda: 0.0 }),
            ];
            suite.extend(random_suite(cfg.size(20, 3), (2, 3), (1, 3), seed, TAG_THEOREM2));
            verify_theorem2(&suite, &cfg.ps_or(&[1.0, 1.5, 2.0, 3.0, f64::INFINITY]), cfg)
        }
        IdentityName::Multiplicativity => {
            let random = random_qubit_suite(2 * cfg.size(10, 2), seed, TAG_MULT);
            let mut pairs = vec![
                (QuantumChannel::identity(2), QuantumChannel::identity(2)),
                (QuantumChannel::identity(2), random[0].clone()),
            ];
            pairs.extend(random.chunks_exact(2).map(|c| (c[0].clone(), c[1].clone())));
            let default_ps: &[f64] = if cfg.quick { &[2.0] } else { &[1.5, 2.0, 3.0] };
            verify_multiplicativity(&pairs, &cfg.ps_or(default_ps), cfg)
        }
        IdentityName::TraceTensor => {
            let mut suite = vec![(QuantumChannel::identity(2), 2)];
            suite.extend(
                random_qubit_suite(cfg.size(5, 2), seed, TAG_TRACE)
                    .into_iter()
                    .enumerate()
                    .map(|(i, ch)| (ch, 2 + i % 2)),
            );
            let default_ps: &[f64] = if cfg.quick { &[2.0] } else { &[1.0, 2.0, 3.0] };
            verify_trace_tensor(&suite, &cfg.ps_or(default_ps), cfg)
        }
        IdentityName::King => {
            let mut covariant = vec![
                named(NamedChannel::Depolarize { d: 2, lambda: 0.0 }),
                named(NamedChannel::WeylCovariant { d: 2, probs: vec![0.25; 4] }),
                random_weyl_covariant(2, derive_seed(seed, TAG_KING, 1000)),
            ];
            if !cfg.quick {
                covariant.push(random_weyl_covariant(3, derive_seed(seed, TAG_KING, 1001)));
                covariant.push(named(NamedChannel::Depolarize { d: 3, lambda: 0.5 }));
            }
            let mut partners = vec![QuantumChannel::identity(2)];
            partners.extend(random_qubit_suite(cfg.size(2, 1), seed, TAG_KING));
            let probes = concavity_probes(cfg.size(200, 20), seed);
            let default_ps: &[f64] = if cfg.quick { &[2.0] } else { &[1.5, 2.0, 3.0] };
            verify_king_lemma(&covariant, &partners, &probes, &cfg.ps_or(default_ps), cfg)
        }
    }
}

/// Runs `name` on caller-supplied channels in place of the built-in suite.
/// Multiplicativity uses every pair `(Φ_i, Φ_j)`, `i ≤ j`; the covariance
/// check uses the channels as partners of the default covariant set.
pub fn run_on(name: IdentityName, channels: &[QuantumChannel], cfg: &VerifyConfig) -> VerificationReport {
    match name {
        IdentityName::Lemma1 => verify_lemma1(channels, cfg),
        IdentityName::Theorem2 => verify_theorem2(channels, &cfg.ps_or(&[1.0, 1.5, 2.0, 3.0, f64::INFINITY]), cfg),
        IdentityName::Multiplicativity => {
            let pairs: Vec<_> = (0..channels.len())
                .flat_map(|i| (i..channels.len()).map(move |j| (i, j)))
                .map(|(i, j)| (channels[i].clone(), channels[j].clone()))
                .collect();
            verify_multiplicativity(&pairs, &cfg.ps_or(&[1.5, 2.0, 3.0]), cfg)
        }
        IdentityName::TraceTensor => {
            let suite: Vec<_> = channels.iter().map(|c| (c.clone(), 2)).collect();
            verify_trace_tensor(&suite, &cfg.ps_or(&[1.0, 2.0, 3.0]), cfg)
        }
        IdentityName::King => {
            let covariant = vec![
                named(NamedChannel::Depolarize { d: 2, lambda: 0.0 }),
                named(NamedChannel::WeylCovariant { d: 2, probs: vec![0.25; 4] }),
            ];
            verify_king_lemma(&covariant, channels, &[], &cfg.ps_or(&[1.5, 2.0, 3.0]), cfg)
        }
    }
}

/// Every identity in [`IdentityName::ALL`] order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<VerificationReport> {
    IdentityName::ALL.iter().map(|&n| run(n, cfg)).collect()
}
