//! `chnorm`: generate and convert quantum channels, estimate their norms and
//! run the verification suites.
//!
//! Exit status: 0 on success, 1 when a verification instance fails, 2 on bad
//! flags or invalid input.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use chnorm_core::channel::{matrix_to_json, named_channel, random_channel_seeded, JsonMatrix, NamedChannel};
use chnorm_core::linalg::PNorm;
use chnorm_core::normcalc::{
    norm_q_to_p, norm_q_to_p_via_conjugate_choi, omega_p_choi, omega_p_pure, s_cb_min_estimate, OptimizerConfig,
};
use chnorm_core::verify::{self, IdentityName, VerificationReport, VerifyConfig};
use chnorm_core::QuantumChannel;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "chnorm", version, about = "Quantum channel norms and the identities between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named or random channel as JSON.
    Gen(GenArgs),
    /// Estimate a norm of the channel in FILE (`-` reads stdin).
    Norm(NormArgs),
    /// Emit the conjugate (complementary) channel of FILE.
    Conjugate { file: String },
    /// Emit another representation of the channel in FILE.
    Convert {
        file: String,
        #[arg(long, value_enum)]
        to: View,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    /// identity, trace, depolarize, dephase, transpose-depolarize,
    /// weyl-covariant or random.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated Weyl mixing probabilities.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    #[arg(long)]
    din: Option<usize>,
    #[arg(long)]
    dout: Option<usize>,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long, env = "CHNORM_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    step_tolerance: f64,
    #[arg(long, default_value_t = 1e-9)]
    value_tolerance: f64,
    #[arg(long, env = "CHNORM_SEED", default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            step_tolerance: self.step_tolerance,
            value_tolerance: self.value_tolerance,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct NormArgs {
    file: String,
    /// Output index p: a number >= 1 or `inf`.
    #[arg(long)]
    p: Option<PNorm>,
    /// Input index q for the q→p norm (defaults to p).
    #[arg(long)]
    q: Option<PNorm>,
    /// ω_p through the Choi-matrix formula.
    #[arg(long, conflicts_with_all = ["omega_pure", "via_conjugate", "s_cb_min", "q"])]
    omega: bool,
    /// ω_p as a supremum over bipartite pure states.
    #[arg(long, conflicts_with_all = ["via_conjugate", "s_cb_min", "q"])]
    omega_pure: bool,
    /// ‖Φ‖_{q→p} (q ≥ p) through the Choi matrix of the conjugate channel.
    #[arg(long, conflicts_with = "s_cb_min")]
    via_conjugate: bool,
    /// CB minimal conditional entropy (natural log).
    #[arg(long)]
    s_cb_min: bool,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemma1, theorem2, multiplicativity, trace-tensor, king or all.
    identity: String,
    /// Small suites and 16 restarts.
    #[arg(long)]
    quick: bool,
    #[arg(long, env = "CHNORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Comma-separated p values replacing the suite defaults.
    #[arg(long, value_delimiter = ',')]
    p: Vec<PNorm>,
    /// Restarts per estimate (default 64, or 16 with --quick).
    #[arg(long)]
    restarts: Option<usize>,
    /// Channel files replacing the built-in suite.
    #[arg(long = "channel")]
    channels: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include wall-clock time in JSON reports (tables always show it).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum View {
    Kraus,
    Choi,
    Stinespring,
    Lindblad,
}

/// Failure that maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read_channel(path: &str) -> Result<QuantumChannel, InputError> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?
    };
    QuantumChannel::from_json(&text).map_err(|e| InputError(format!("{path}: {e}")))
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn cmd_gen(a: &GenArgs) -> Result<String, InputError> {
    let ch = match a.name.as_deref() {
        None | Some("random") => {
            let (Some(din), Some(dout), Some(kappa)) = (a.din, a.dout, a.kappa) else {
                return Err(InputError("random channels need --din, --dout and --kappa (or pass --name)".into()));
            };
            random_channel_seeded(din, dout, kappa, a.seed)?
        }
        Some(name) => named_channel(&NamedChannel::from_params(name, a.d, a.lambda, a.t, a.probs.clone())?)?,
    };
    Ok(ch.to_json())
}

#[derive(Serialize)]
struct NormOutput<'a, E: Serialize> {
    quantity: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<PNorm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<PNorm>,
    config: OptimizerConfig,
    #[serde(flatten)]
    estimate: E,
}

fn table_lines(quantity: &str, value: f64, converged: bool, agreeing: usize, restarts: usize, exact: bool) -> String {
    let mut out = format!("{quantity} = {value:.12}\nconverged: {converged}\n");
    if exact {
        out.push_str("closed form\n");
    } else {
        out.push_str(&format!("restarts agreeing: {agreeing}/{restarts}\n"));
    }
    out
}

fn cmd_norm(a: &NormArgs) -> Result<String, InputError> {
    let ch = read_channel(&a.file)?;
    let cfg = a.optimizer.config();
    cfg.validate()?;
    if a.s_cb_min {
        let est = s_cb_min_estimate(&ch, &cfg)?;
        return Ok(match a.format {
            Format::Json => to_json(&NormOutput {
                quantity: "s_cb_min",
                q: None,
                p: None,
                config: cfg,
                estimate: &est,
            }),
            Format::Table => table_lines("S_CB,min", est.value, est.converged, est.restarts_agreeing, cfg.restarts, false),
        });
    }
    let p = a.p.ok_or_else(|| InputError("--p is required".into()))?;
    let (quantity, q, est) = if a.omega {
        ("omega_p", None, omega_p_choi(&ch, p, &cfg)?)
    } else if a.omega_pure {
        ("omega_p_pure", None, omega_p_pure(&ch, p, &cfg)?)
    } else {
        let q = a.q.unwrap_or(p);
        if a.via_conjugate {
            ("q_to_p_via_conjugate", Some(q), norm_q_to_p_via_conjugate_choi(&ch, q, p, &cfg)?)
        } else {
            ("q_to_p", Some(q), norm_q_to_p(&ch, q, p, &cfg)?)
        }
    };
    Ok(match a.format {
        Format::Json => to_json(&NormOutput {
            quantity,
            q,
            p: Some(p),
            config: cfg,
            estimate: &est,
        }),
        Format::Table => {
            let label = match q {
                Some(q) => format!("{quantity} (q={q}, p={p})"),
                None => format!("{quantity} (p={p})"),
            };
            table_lines(&label, est.value, est.converged, est.restarts_agreeing, est.restarts, est.exact)
        }
    })
}

#[derive(Serialize)]
struct ChoiView {
    d_in: usize,
    d_out: usize,
    choi: JsonMatrix,
}

#[derive(Serialize)]
struct StinespringView {
    d_in: usize,
    d_out: usize,
    kappa: usize,
    v: JsonMatrix,
}

#[derive(Serialize)]
struct LindbladView {
    d_in: usize,
    d_out: usize,
    kappa: usize,
    u: JsonMatrix,
    phi: Vec<[f64; 2]>,
}

fn cmd_convert(file: &str, to: View) -> Result<String, InputError> {
    let ch = read_channel(file)?;
    Ok(match to {
        View::Kraus => ch.canonicalize()?.to_json(),
        View::Choi => to_json(&ChoiView {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
            choi: matrix_to_json(ch.choi().matrix()),
        }),
        View::Stinespring => {
            let s = ch.stinespring();
            to_json(&StinespringView {
                d_in: ch.d_in(),
                d_out: ch.d_out(),
                kappa: s.kappa(),
                v: matrix_to_json(s.matrix()),
            })
        }
        View::Lindblad => {
            let l = ch.lindblad();
            to_json(&LindbladView {
                d_in: ch.d_in(),
                d_out: ch.d_out(),
                kappa: ch.kappa(),
                u: matrix_to_json(l.unitary()),
                phi: l.phi().iter().map(|z| [z.re, z.im]).collect(),
            })
        }
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<(String, bool), InputError> {
    let names: Vec<IdentityName> = if a.identity == "all" {
        IdentityName::ALL.to_vec()
    } else {
        vec![a.identity.parse()?]
    };
    let mut cfg = if a.quick { VerifyConfig::quick(a.seed) } else { VerifyConfig::default().with_seed(a.seed) };
    cfg.ps = a.p.clone();
    if let Some(r) = a.restarts {
        cfg.optimizer.restarts = r;
    }
    cfg.optimizer.validate()?;
    let channels = a.channels.iter().map(|f| read_channel(f)).collect::<Result<Vec<_>, _>>()?;
    let mut reports: Vec<VerificationReport> = names
        .iter()
        .map(|&n| if channels.is_empty() { verify::run(n, &cfg) } else { verify::run_on(n, &channels, &cfg) })
        .collect();
    if !a.timing && matches!(a.format, Format::Json) {
        reports = reports.into_iter().map(|r| r.without_timing()).collect();
    }
    let ok = reports.iter().all(VerificationReport::all_passed);
    let text = match a.format {
        Format::Json if reports.len() == 1 => reports[0].to_json(),
        Format::Json => to_json(&reports),
        Format::Table => reports.iter().map(|r| r.to_table()).collect::<Vec<_>>().join("\n"),
    };
    Ok((text, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|s| (s, true)),
        Command::Norm(a) => cmd_norm(a).map(|s| (s, true)),
        Command::Conjugate { file } => read_channel(file).map(|ch| (ch.conjugate().to_json(), true)),
        Command::Convert { file, to } => cmd_convert(file, *to).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok((text, ok)) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(io::stdout(), "{}", text.trim_end());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
