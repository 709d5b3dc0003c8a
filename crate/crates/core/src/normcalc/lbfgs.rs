//! Limited-memory BFGS ascent with Armijo backtracking.
//!
//! Every objective in this crate is invariant under `x ↦ c x`, so the iterate
//! is renormalized whenever its norm drifts and the memory pairs are rescaled
//! to match.

use std::collections::VecDeque;

/// Smooth objective over real parameters. `eval` returns the value and its
/// gradient; non-finite values are treated as infeasible points.
pub(crate) trait Objective: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> (f64, Vec<f64>);
}

#[derive(Clone, Debug)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct Ascent {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Stopped on a tolerance rather than the iteration cap.
    pub stationary: bool,
}

const MEMORY: usize = 12;
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const GRAD_TOL: f64 = 1e-11;
/// Consecutive small-improvement iterations required to stop.
const QUIET_ITERS: usize = 4;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two-loop recursion: ascent direction `H g` from the stored pairs.
fn direction(grad: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q
}

/// Maximizes `obj` from `x0`.
///
/// Stops when the gradient vanishes, when the value improves by less than
/// `value_step_tol * (1 + |f|)` for several consecutive iterations, or when
/// no step along the ascent direction gives an Armijo improvement.
pub(crate) fn maximize(obj: &dyn Objective, x0: Vec<f64>, max_iters: usize, value_step_tol: f64) -> Ascent {
    let mut x = x0;
    let n0 = norm(&x);
    if n0 > 0.0 {
        x.iter_mut().for_each(|v| *v /= n0);
    }
    let (mut f, mut g) = obj.eval(&x);
    if !f.is_finite() {
        return Ascent {
            x,
            value: f,
            iterations: 0,
            stationary: false,
        };
    }
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut quiet = 0;
    let mut stationary = false;
    let mut iterations = 0;

    while iterations < max_iters {
        if norm(&g) <= GRAD_TOL {
            stationary = true;
            break;
        }
        let mut d = direction(&g, &memory);
        let mut slope = dot(&d, &g);
        if !(slope > 0.0) {
            memory.clear();
            d = g.clone();
            slope = dot(&g, &g);
        }
        // Unit steps are natural once curvature is known; the first step is
        // limited to a fraction of |x| = 1.
        let mut alpha = if memory.is_empty() { 0.1 / norm(&d) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            let (ft, gt) = obj.eval(&trial);
            if ft.is_finite() && ft >= f + ARMIJO * alpha * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            alpha *= 0.5;
        }
        iterations += 1;
        let Some((x_new, f_new, g_new)) = accepted else {
            if memory.is_empty() {
                stationary = true;
                break;
            }
            memory.clear();
            continue;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        // ascent on f is descent on -f: y = ∇(-f)_new − ∇(-f)_old
        let y: Vec<f64> = g.iter().zip(&g_new).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * norm(&s) * norm(&y) && sy > 0.0 {
            if memory.len() == MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }

        let improvement = f_new - f;
        x = x_new;
        f = f_new;
        g = g_new;

        let nx = norm(&x);
        if !(0.5..=2.0).contains(&nx) {
            x.iter_mut().for_each(|v| *v /= nx);
            g.iter_mut().for_each(|v| *v *= nx);
            for (s, y, _) in memory.iter_mut() {
                s.iter_mut().for_each(|v| *v /= nx);
                y.iter_mut().for_each(|v| *v *= nx);
            }
        }

        if improvement <= value_step_tol * (1.0 + f.abs()) {
            quiet += 1;
            if quiet >= QUIET_ITERS {
                stationary = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }

    Ascent {
        x,
        value: f,
        iterations,
        stationary,
    }
}
