use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::VerifyConfig;
use crate::linalg::PNorm;

/// How an instance's two sides are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Passes when `abs_diff ≤ tolerance`; used for exact-zero targets.
    Absolute,
    /// Passes when `rel_diff ≤ tolerance`.
    Relative,
    /// One-sided: passes when `lhs ≥ rhs − tolerance · max(1, |rhs|)`.
    AtLeast,
}

/// Which side of an equality came out smaller. Both sides of the optimized
/// identities are lower-bound estimates, so a real violation shows up as
/// one certificate exceeding the other side's bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smaller {
    Lhs,
    Rhs,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub channel: String,
    /// What `lhs` and `rhs` measure, e.g. `‖Φ‖_{p→p} vs ω_p(Φ^C)`.
    pub quantity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<PNorm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<PNorm>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub smaller: Smaller,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Instance {
    pub fn new(channel: impl Into<String>, quantity: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, comparison: Comparison) -> Self {
        let abs_diff = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_diff = if abs_diff == 0.0 { 0.0 } else { abs_diff / scale };
        let passed = match comparison {
            Comparison::Absolute => abs_diff <= tolerance,
            Comparison::Relative => rel_diff <= tolerance,
            Comparison::AtLeast => lhs >= rhs - tolerance * rhs.abs().max(1.0),
        };
        let smaller = if lhs < rhs {
            Smaller::Lhs
        } else if rhs < lhs {
            Smaller::Rhs
        } else {
            Smaller::Equal
        };
        Self {
            channel: channel.into(),
            quantity: quantity.into(),
            p: None,
            q: None,
            lhs,
            rhs,
            abs_diff,
            rel_diff,
            tolerance,
            comparison,
            smaller,
            passed: passed && lhs.is_finite() && rhs.is_finite(),
            note: None,
        }
    }

    pub fn with_p(mut self, p: PNorm) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_q(mut self, q: PNorm) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub max_rel_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_name: String,
    pub seed: u64,
    pub config: VerifyConfig,
    pub instances: Vec<Instance>,
    pub summary: Summary,
    /// Seconds. Omitted from JSON when cleared, so reports can be compared
    /// byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    pub fn new(identity_name: &str, config: &VerifyConfig, instances: Vec<Instance>, wall_time: f64) -> Self {
        let summary = Summary {
            total: instances.len(),
            passed: instances.iter().filter(|i| i.passed).count(),
            max_rel_diff: instances
                .iter()
                .filter(|i| i.comparison != Comparison::AtLeast)
                .map(|i| i.rel_diff)
                .fold(0.0, f64::max),
        };
        Self {
            identity_name: identity_name.to_string(),
            seed: config.seed,
            config: config.clone(),
            instances,
            summary,
            wall_time: Some(wall_time),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.passed)
    }

    /// Copy with the wall time removed.
    pub fn without_timing(mut self) -> Self {
        self.wall_time = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table, one row per instance, followed by the summary.
    pub fn to_table(&self) -> String {
        let header = ["channel", "quantity", "p", "q", "lhs", "rhs", "rel_diff", "tol", "result"];
        let rows: Vec<[String; 9]> = self
            .instances
            .iter()
            .map(|i| {
                [
                    i.channel.clone(),
                    i.quantity.clone(),
                    i.p.map_or("-".into(), |p| p.to_string()),
                    i.q.map_or("-".into(), |q| q.to_string()),
                    format!("{:.10}", i.lhs),
                    format!("{:.10}", i.rhs),
                    format!("{:.3e}", i.rel_diff),
                    format!("{:.0e}", i.tolerance),
                    if i.passed { "pass".into() } else { "FAIL".into() },
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        let _ = writeln!(out, "{} (seed {})", self.identity_name, self.seed);
        line(&header.map(String::from), &mut out);
        for r in &rows {
            line(r, &mut out);
        }
        let _ = write!(
            out,
            "{}/{} passed, max rel diff {:.3e}",
            self.summary.passed, self.summary.total, self.summary.max_rel_diff
        );
        if let Some(t) = self.wall_time {
            let _ = write!(out, ", {t:.2}s");
        }
        out.push('\n');
        out
    }
}
