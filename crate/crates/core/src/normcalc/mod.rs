//! Estimators for `‖Φ‖_{q→p}`, `ω_p(Φ)`, `g_p` and `S_CB,min`.
//!
//! Suprema over positive matrices are computed by multi-restart L-BFGS
//! ascent on the unconstrained parameterization `A = B†B`, with analytic
//! gradients of the log of each (scale invariant) ratio. Every estimate is
//! the objective evaluated at a returned certificate, so it is a genuine
//! lower bound on the supremum. Where the constraint norm is `‖·‖_∞` the
//! supremum is attained at `A = I` by operator monotonicity, and that value
//! is returned directly with `exact = true`.

mod brute;
mod gp;
mod lbfgs;
mod objectives;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianEigen, PNorm, PureState};
use crate::rng;
use lbfgs::Objective;
use objectives::{gram, psd_norm, square_from_params, to_complex, ChoiForm, NegConditionalEntropy, PureRatio, QToP};

pub use brute::{brute_force_search, brute_force_sup, BruteForce, SampleDomain};
pub use gp::{concavity_probe, g_p, g_p_alt};

const TAG_Q_TO_P: u64 = 0x7174_6f70;
const TAG_OMEGA_PURE: u64 = 0x6f6d_7075;
const TAG_OMEGA_CHOI: u64 = 0x6f6d_6368;
const TAG_CONJ_CHOI: u64 = 0x636a_6368;
const TAG_ENTROPY: u64 = 0x7363_626d;

/// Multi-restart optimizer settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Relative improvement of the log-objective below which an iteration
    /// counts as stalled.
    pub step_tolerance: f64,
    /// Restarts whose value is within `value_tolerance · max(1, best)` of
    /// the best count as agreeing.
    pub value_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            step_tolerance: 1e-10,
            value_tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("restarts and max_iters must be positive".into()));
        }
        if !(self.step_tolerance > 0.0 && self.value_tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Result of a supremum estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    /// The maximizing `A`, or `|ψ><ψ|` for pure-state estimates.
    pub certificate: ComplexMatrix,
    pub restarts_agreeing: usize,
    pub converged: bool,
    /// Value attained in closed form rather than by ascent.
    pub exact: bool,
    pub restarts: usize,
}

impl NormEstimate {
    fn closed_form(value: f64, certificate: ComplexMatrix) -> Self {
        Self {
            value,
            certificate,
            restarts_agreeing: 0,
            converged: true,
            exact: true,
            restarts: 0,
        }
    }
}

/// Result of the conditional-entropy minimization. `value` may be negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    /// The minimizing `|ψ><ψ|`.
    pub certificate: ComplexMatrix,
    pub restarts_agreeing: usize,
    pub converged: bool,
}

struct Best {
    score: f64,
    certificate: ComplexMatrix,
    agreeing: usize,
    converged: bool,
}

/// Runs `cfg.restarts` ascents from Gaussian starting points and keeps the
/// first restart with the largest score. `finish` maps a final iterate to
/// its score and certificate.
fn run_restarts<F>(obj: &dyn Objective, cfg: &OptimizerConfig, tag: u64, finish: F) -> Best
where
    F: Fn(&[f64]) -> (f64, ComplexMatrix) + Sync,
{
    let results: Vec<(f64, ComplexMatrix, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(cfg.seed, tag, r as u64);
            let x0: Vec<f64> = (0..obj.dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let ascent = lbfgs::maximize(obj, x0, cfg.max_iters, cfg.step_tolerance);
            let (score, cert) = finish(&ascent.x);
            let score = if score.is_finite() { score } else { f64::NEG_INFINITY };
            (score, cert, ascent.stationary)
        })
        .collect();
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = i;
        }
    }
    let top = results[best].0;
    let tol = cfg.value_tolerance * top.abs().max(1.0);
    let agreeing = results.iter().filter(|r| (r.0 - top).abs() <= tol).count();
    let needed = cfg.restarts.div_ceil(4);
    let (score, certificate, stationary) = results.into_iter().nth(best).expect("at least one restart");
    Best {
        score,
        certificate,
        agreeing,
        converged: stationary && agreeing >= needed,
    }
}

fn estimate(best: Best, cfg: &OptimizerConfig) -> NormEstimate {
    NormEstimate {
        value: best.score,
        certificate: best.certificate,
        restarts_agreeing: best.agreeing,
        converged: best.converged,
        exact: false,
        restarts: cfg.restarts,
    }
}

/// `A / ‖A‖_r`.
fn normalize_psd(a: &ComplexMatrix, r: PNorm) -> ComplexMatrix {
    let n = psd_norm(a, r);
    if n > 0.0 {
        a.scale(1.0 / n)
    } else {
        a.clone()
    }
}

fn check_psd_input(a: &ComplexMatrix, d: usize) -> Result<()> {
    if a.shape() != (d, d) {
        return Err(Error::Dimension(format!("expected a {d}x{d} matrix, got {}x{}", a.rows(), a.cols())));
    }
    HermitianEigen::psd(a).map(|_| ())
}

/// `‖Φ(A)‖_p / ‖A‖_q` for a nonzero PSD `A`.
pub fn q_to_p_ratio(ch: &QuantumChannel, q: PNorm, p: PNorm, a: &ComplexMatrix) -> Result<f64> {
    q.validate()?;
    p.validate()?;
    check_psd_input(a, ch.d_in())?;
    Ok(QToP { ch, q, p }.ratio(&a.hermitian_part()))
}

/// `‖(A ⊗ I) X (A ⊗ I)‖_p / ‖A‖_r²` for the Choi matrix `X` of `ch`.
pub fn choi_form_ratio(ch: &QuantumChannel, p: PNorm, r: PNorm, a: &ComplexMatrix) -> Result<f64> {
    p.validate()?;
    r.validate()?;
    check_psd_input(a, ch.d_in())?;
    let x = ch.choi().into_matrix();
    let form = ChoiForm {
        choi: &x,
        d_in: ch.d_in(),
        d_out: ch.d_out(),
        p,
        constraint: r,
    };
    Ok(form.ratio(&a.hermitian_part()))
}

/// `‖(𝕀 ⊗ Φ)(ρ)‖_p / ‖Tr_2 ρ‖_p` for a state `ρ` on `C^d ⊗ C^d`, `d = d_in`.
/// On pure states this is the ratio maximized by [`omega_p_pure`].
pub fn omega_state_ratio(ch: &QuantumChannel, p: PNorm, rho: &ComplexMatrix) -> Result<f64> {
    p.validate()?;
    let d = ch.d_in();
    check_psd_input(rho, d * d)?;
    let out = QuantumChannel::identity(d).tensor(ch).apply(rho)?;
    let reduced = rho.partial_trace((d, d), crate::linalg::Subsystem::Second)?;
    Ok(psd_norm(&out.hermitian_part(), p) / psd_norm(&reduced.hermitian_part(), p))
}

/// `S[(𝕀 ⊗ Φ)(ρ)] − S[Tr_2 ρ]` (natural log) for a state `ρ` on `C^d ⊗ C^d`.
pub fn conditional_entropy_of_state(ch: &QuantumChannel, rho: &ComplexMatrix) -> Result<f64> {
    let d = ch.d_in();
    check_psd_input(rho, d * d)?;
    let out = QuantumChannel::identity(d).tensor(ch).apply(rho)?;
    let reduced = rho.partial_trace((d, d), crate::linalg::Subsystem::Second)?;
    Ok(von_neumann_entropy(&out)? - von_neumann_entropy(&reduced)?)
}

/// `S(ρ/Tr ρ) = −Σ λ log λ`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eig = HermitianEigen::psd(rho)?;
    let t: f64 = eig.values.iter().sum();
    if t <= 0.0 {
        return Err(Error::Trace("entropy of the zero matrix".into()));
    }
    Ok(eig
        .values
        .iter()
        .map(|l| l / t)
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum())
}

/// Estimates `‖Φ‖_{q→p} = sup_{A ≥ 0} ‖Φ(A)‖_p / ‖A‖_q`.
///
/// The certificate is the maximizing `A` normalized to `‖A‖_q = 1`. For
/// `q = ∞` the value is `‖Φ(I)‖_p`, attained at `A = I`.
pub fn norm_q_to_p(ch: &QuantumChannel, q: PNorm, p: PNorm, cfg: &OptimizerConfig) -> Result<NormEstimate> {
    q.validate()?;
    p.validate()?;
    cfg.validate()?;
    let obj = QToP { ch, q, p };
    let d = ch.d_in();
    if q.is_infinite() {
        let id = ComplexMatrix::identity(d);
        return Ok(NormEstimate::closed_form(obj.ratio(&id), id));
    }
    let best = run_restarts(&obj, cfg, TAG_Q_TO_P, |x| {
        let a = normalize_psd(&gram(&square_from_params(x, d)), q);
        (obj.ratio(&a), a)
    });
    Ok(estimate(best, cfg))
}

/// Single ascent for `‖Φ‖_{q→p}` from `A = B†B`. The objective is scale
/// invariant, so rescaling `b0` leaves the result unchanged.
pub fn norm_q_to_p_from(
    ch: &QuantumChannel,
    q: PNorm,
    p: PNorm,
    b0: &ComplexMatrix,
    cfg: &OptimizerConfig,
) -> Result<NormEstimate> {
    q.validate()?;
    p.validate()?;
    cfg.validate()?;
    let d = ch.d_in();
    if b0.shape() != (d, d) {
        return Err(Error::Dimension(format!("starting point must be {d}x{d}")));
    }
    let obj = QToP { ch, q, p };
    let x0 = objectives::to_real(b0.as_slice());
    let ascent = lbfgs::maximize(&obj, x0, cfg.max_iters, cfg.step_tolerance);
    let a = normalize_psd(&gram(&square_from_params(&ascent.x, d)), q);
    Ok(NormEstimate {
        value: obj.ratio(&a),
        certificate: a,
        restarts_agreeing: 1,
        converged: ascent.stationary,
        exact: false,
        restarts: 1,
    })
}

/// Estimates `ω_p(Φ)` as a supremum over pure states `ψ ∈ C^d ⊗ C^d`.
/// The certificate is `|ψ><ψ|`.
pub fn omega_p_pure(ch: &QuantumChannel, p: PNorm, cfg: &OptimizerConfig) -> Result<NormEstimate> {
    p.validate()?;
    cfg.validate()?;
    let d = ch.d_in();
    let obj = PureRatio { ch, p };
    if p.is_infinite() {
        let psi = PureState::maximally_entangled(d);
        return Ok(NormEstimate::closed_form(obj.ratio(psi.amplitudes()), psi.density()));
    }
    let best = run_restarts(&obj, cfg, TAG_OMEGA_PURE, |x| {
        let value = obj.ratio(&to_complex(x));
        let cert = PureState::normalized(d, d, to_complex(x))
            .map(|s| s.density())
            .unwrap_or_else(|_| ComplexMatrix::zeros(d * d, d * d));
        (value, cert)
    });
    Ok(estimate(best, cfg))
}

fn choi_form_sup(
    choi: &ComplexMatrix,
    d_in: usize,
    d_out: usize,
    p: PNorm,
    constraint: PNorm,
    cfg: &OptimizerConfig,
    tag: u64,
) -> NormEstimate {
    let form = ChoiForm {
        choi,
        d_in,
        d_out,
        p,
        constraint,
    };
    if constraint.is_infinite() {
        let id = ComplexMatrix::identity(d_in);
        return NormEstimate::closed_form(form.ratio(&id), id);
    }
    let best = run_restarts(&form, cfg, tag, |x| {
        let a = normalize_psd(&gram(&square_from_params(x, d_in)), constraint);
        (form.ratio(&a), a)
    });
    estimate(best, cfg)
}

/// Estimates `ω_p(Φ) = sup_{A ≥ 0, ‖A‖_{2p} ≤ 1} ‖(A ⊗ I) X_Φ (A ⊗ I)‖_p`.
/// The certificate is the maximizing `A` with `‖A‖_{2p} = 1`.
pub fn omega_p_choi(ch: &QuantumChannel, p: PNorm, cfg: &OptimizerConfig) -> Result<NormEstimate> {
    p.validate()?;
    cfg.validate()?;
    let x = ch.choi().into_matrix();
    Ok(choi_form_sup(&x, ch.d_in(), ch.d_out(), p, p.scaled(2.0), cfg, TAG_OMEGA_CHOI))
}

/// `‖Φ‖_{q→p}` for `q ≥ p` through the conjugate channel:
/// `sup_{A ≥ 0, ‖A‖_{2q} ≤ 1} ‖(A ⊗ I) X_{Φ^C} (A ⊗ I)‖_p`.
pub fn norm_q_to_p_via_conjugate_choi(
    ch: &QuantumChannel,
    q: PNorm,
    p: PNorm,
    cfg: &OptimizerConfig,
) -> Result<NormEstimate> {
    q.validate()?;
    p.validate()?;
    cfg.validate()?;
    if q.value() < p.value() {
        return Err(Error::InvalidNorm(format!("conjugate Choi formula needs q >= p, got q = {q}, p = {p}")));
    }
    let conj = ch.conjugate();
    let x = conj.choi().into_matrix();
    Ok(choi_form_sup(&x, conj.d_in(), conj.d_out(), p, q.scaled(2.0), cfg, TAG_CONJ_CHOI))
}

/// `S_CB,min(Φ) = inf_ψ S[(𝕀 ⊗ Φ)(ψψ*)] − S[Tr_2 ψψ*]`, natural log.
pub fn s_cb_min(ch: &QuantumChannel, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(s_cb_min_estimate(ch, cfg)?.value)
}

/// [`s_cb_min`] with the minimizing state and diagnostics.
pub fn s_cb_min_estimate(ch: &QuantumChannel, cfg: &OptimizerConfig) -> Result<EntropyEstimate> {
    cfg.validate()?;
    let d = ch.d_in();
    let obj = NegConditionalEntropy { ch };
    let best = run_restarts(&obj, cfg, TAG_ENTROPY, |x| {
        let psi = to_complex(x);
        let score = -objectives::conditional_entropy(ch, &psi);
        let cert = PureState::normalized(d, d, psi)
            .map(|s| s.density())
            .unwrap_or_else(|_| ComplexMatrix::zeros(d * d, d * d));
        (score, cert)
    });
    Ok(EntropyEstimate {
        value: -best.score,
        certificate: best.certificate,
        restarts_agreeing: best.agreeing,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{random_channel_seeded, NamedChannel};

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default().with_restarts(16)
    }

    fn p(v: f64) -> PNorm {
        PNorm::new(v).unwrap()
    }

    #[test]
    fn identity_omega_is_d_power() {
        for d in [2usize, 3] {
            let ch = QuantumChannel::identity(d);
            for pv in [1.5, 2.0, 3.0] {
                let want = (d as f64).powf(1.0 - 1.0 / pv);
                let choi = omega_p_choi(&ch, p(pv), &cfg()).unwrap();
                let pure = omega_p_pure(&ch, p(pv), &cfg()).unwrap();
                assert!((choi.value - want).abs() < 1e-8, "d={d} p={pv}: {}", choi.value);
                assert!((pure.value - want).abs() < 1e-8, "d={d} p={pv}: {}", pure.value);
                assert!(choi.converged && pure.converged);
            }
            let inf = omega_p_choi(&ch, PNorm::Infinity, &cfg()).unwrap();
            assert!((inf.value - d as f64).abs() < 1e-12 && inf.exact);
        }
    }

    #[test]
    fn trace_channel_values() {
        let tr = QuantumChannel::trace(2);
        let est = norm_q_to_p(&tr, PNorm::TWO, PNorm::TWO, &cfg()).unwrap();
        assert!((est.value - 2f64.sqrt()).abs() < 1e-9, "{}", est.value);
        for pv in [1.5, 2.0, 3.0] {
            let est = omega_p_choi(&tr, p(pv), &cfg()).unwrap();
            assert!((est.value - 1.0).abs() < 1e-8, "{}", est.value);
        }
    }

    #[test]
    fn certificate_reproduces_value() {
        let ch = random_channel_seeded(2, 3, 2, 11).unwrap();
        let est = norm_q_to_p(&ch, p(3.0), p(2.0), &cfg()).unwrap();
        let again = q_to_p_ratio(&ch, p(3.0), p(2.0), &est.certificate).unwrap();
        assert!((again - est.value).abs() < 1e-8);
        let est = omega_p_choi(&ch, p(2.0), &cfg()).unwrap();
        let again = choi_form_ratio(&ch, p(2.0), p(4.0), &est.certificate).unwrap();
        assert!((again - est.value).abs() < 1e-8);
        let est = omega_p_pure(&ch, p(2.0), &cfg()).unwrap();
        let again = omega_state_ratio(&ch, p(2.0), &est.certificate).unwrap();
        assert!((again - est.value).abs() < 1e-8);
    }

    #[test]
    fn via_conjugate_rejects_q_below_p() {
        let ch = QuantumChannel::identity(2);
        assert!(matches!(
            norm_q_to_p_via_conjugate_choi(&ch, p(1.5), p(2.0), &cfg()),
            Err(Error::InvalidNorm(_))
        ));
    }

    #[test]
    fn entropy_anchors() {
        let id = QuantumChannel::identity(2);
        let v = s_cb_min(&id, &cfg()).unwrap();
        assert!((v + 2f64.ln()).abs() < 1e-4, "{v}");
        let dep = crate::channel::named_channel(&NamedChannel::Depolarize { d: 2, lambda: 0.0 }).unwrap();
        let v = s_cb_min(&dep, &cfg()).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = OptimizerConfig {
            restarts: 0,
            ..OptimizerConfig::default()
        };
        assert!(norm_q_to_p(&QuantumChannel::identity(2), PNorm::TWO, PNorm::TWO, &bad).is_err());
    }
}
