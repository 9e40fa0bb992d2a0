use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kneading::affine::{Coding, CodingStatus, OrbitOptions};
use kneading::beta::{orbit_codings, star_strings, AlphaBetaParams};
use kneading::config::{parse_param, Config, OutputFormat};
use kneading::entropy::compute_bar;
use kneading::graph::{build_graph, graph_entropy, GraphMode};
use kneading::inverse::{decide, Verdict};
use kneading::strings::{check_conditions, EpString, Word};
use kneading::{Algebraic, DoubleDouble, EntropyReportDD, Error, Scalar};

const EXIT_ERROR: u8 = 1;
const EXIT_CONDITION: u8 = 2;
const EXIT_NOT_REPRESENTABLE: u8 = 3;
const EXIT_UNDETERMINED: u8 = 4;

#[derive(Parser)]
#[command(name = "kneading", version, about = "Entropy and kneading data of lexicographic shift spaces")]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,
    /// Solver tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Maximum number of solver cycles.
    #[arg(long = "max-iter", global = true, default_value_t = 200)]
    max_iter: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kneading sequences u^{α,β}, v^{α,β} of βx + α mod 1.
    Code {
        /// α: decimal, p/q, golden, plastic, or an arithmetic expression of these.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Number of symbols to print.
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
    /// Entropy of Σ(u, v) and the matching parameters (ᾱ, β̄).
    Entropy {
        /// Lower string, written PRE(PER), e.g. 0(01)
        #[arg(long)]
        u: String,
        /// Upper string, e.g. (110)
        #[arg(long)]
        v: String,
    },
    /// Follower-set graph of Σ(u, v).
    Graph {
        /// Lower string, written PRE(PER), e.g. 0(01)
        #[arg(long)]
        u: String,
        /// Upper string, e.g. (110)
        #[arg(long)]
        v: String,
        /// Merge vertices with equal tail pairs, or cut off at level K
        #[arg(long, value_enum, default_value_t = ModeArg::Collapse)]
        mode: ModeArg,
        /// Level bound for truncate mode.
        #[arg(long = "K", default_value_t = 8)]
        k_max: usize,
        /// Graphviz DOT or JSON
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether (u, v) is the kneading pair of some βx + α mod 1.
    Invert {
        /// Lower string, written PRE(PER), e.g. 0(01)
        #[arg(long)]
        u: String,
        /// Upper string, e.g. (110)
        #[arg(long)]
        v: String,
    },
    /// Report which admissibility inequalities hold.
    Check {
        /// Lower string, written PRE(PER), e.g. 0(01)
        #[arg(long)]
        u: String,
        /// Upper string, e.g. (110)
        #[arg(long)]
        v: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Collapse,
    Truncate,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConditionViolation(_) => EXIT_CONDITION,
            _ => EXIT_ERROR,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config {
        precision_bits: cli.precision,
        tol: cli.tol,
        max_iter: cli.max_iter,
        output: if cli.json { OutputFormat::Json } else { OutputFormat::Text },
        ..Config::default()
    };
    let result = cfg.validate().map_err(Failure::from).and_then(|_| run(&cli.cmd, &cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if cfg.output == OutputFormat::Json {
                println!("{}", json!({ "error": f.msg, "exit_code": f.code }));
            }
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn pair(u: &str, v: &str) -> Result<(EpString, EpString), Failure> {
    let u: EpString = u.parse()?;
    let v: EpString = v.parse()?;
    Ok((u, v))
}

fn emit(cfg: &Config, value: Value, text: String) {
    match cfg.output {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        OutputFormat::Text => print!("{text}"),
    }
}

fn run(cmd: &Cmd, cfg: &Config) -> Result<u8, Failure> {
    match cmd {
        Cmd::Code { alpha, beta, len } => cmd_code(cfg, alpha, beta, *len),
        Cmd::Entropy { u, v } => cmd_entropy(cfg, u, v),
        Cmd::Graph { u, v, mode, k_max, format, out } => cmd_graph(cfg, u, v, *mode, *k_max, *format, out.as_ref()),
        Cmd::Invert { u, v } => cmd_invert(cfg, u, v),
        Cmd::Check { u, v } => cmd_check(cfg, u, v),
    }
}

fn status_name(s: CodingStatus) -> &'static str {
    match s {
        CodingStatus::Exact => "exact",
        CodingStatus::ProbablyPeriodic => "probably_periodic",
        CodingStatus::Prefix => "prefix",
        CodingStatus::PrecisionExhausted => "precision_exhausted",
    }
}

fn shown_prefix(c: &Coding, len: usize) -> Vec<u32> {
    match &c.string {
        Some(s) => s.prefix(len),
        None => c.prefix.iter().take(len).copied().collect(),
    }
}

fn coding_json(c: &Coding, len: usize) -> Value {
    let prefix = shown_prefix(c, len);
    json!({
        "prefix": Word(prefix).to_string(),
        "string": c.string.as_ref().map(|s| s.to_string()),
        "status": status_name(c.status),
    })
}

fn coding_line(name: &str, c: &Coding, len: usize) -> String {
    let prefix = shown_prefix(c, len);
    let whole = c.string.as_ref().map(|s| format!("  {s}")).unwrap_or_default();
    format!("{name} = {}{whole}  [{}]\n", Word(prefix), status_name(c.status))
}

fn cmd_code(cfg: &Config, alpha: &str, beta: &str, len: usize) -> Result<u8, Failure> {
    let a = parse_param(alpha)?;
    let b = parse_param(beta)?;
    let params = AlphaBetaParams::<Algebraic>::new(a, b)?;
    let opts = OrbitOptions { horizon: len.max(64), ..OrbitOptions::default() };
    let mut kp = orbit_codings(&params, &opts)?;
    // Orbits that never close up exactly are retried in floating point, where
    // points within the hit tolerance of a breakpoint snap onto it.
    if !kp.u.is_certified() || !kp.v.is_certified() {
        let approx = AlphaBetaParams::<DoubleDouble>::new(
            DoubleDouble::from_f64_lossy(params.alpha.to_f64_lossy()),
            DoubleDouble::from_f64_lossy(params.beta.to_f64_lossy()),
        )?;
        let fk = orbit_codings(&approx, &opts)?;
        if fk.k == kp.k {
            if !kp.u.is_certified() && fk.u.is_periodic() {
                kp.u = fk.u;
            }
            if !kp.v.is_certified() && fk.v.is_periodic() {
                kp.v = fk.v;
            }
        }
    }
    let value = json!({
        "alpha": params.alpha.to_f64_lossy(),
        "beta": params.beta.to_f64_lossy(),
        "k": kp.k,
        "u": coding_json(&kp.u, len),
        "v": coding_json(&kp.v, len),
    });
    let text = format!(
        "alpha = {}\nbeta = {}\nk = {}\n{}{}",
        params.alpha,
        params.beta,
        kp.k,
        coding_line("u", &kp.u, len),
        coding_line("v", &kp.v, len)
    );
    emit(cfg, value, text);
    Ok(0)
}

fn flag_list(r: &EntropyReportDD) -> Vec<String> {
    let f = &r.flags;
    let mut out = Vec::new();
    if let Some(s) = f.special_case {
        out.push(serde_json::to_value(s).unwrap().as_str().unwrap_or_default().to_string());
    }
    for (on, name) in [
        (f.beta_bar_is_one, "beta_bar_is_one"),
        (f.k2_reversed, "k2_reversed"),
        (f.max_iter_exceeded, "max_iter_exceeded"),
        (f.upper_descent, "upper_descent"),
    ] {
        if on {
            out.push(name.to_string());
        }
    }
    out
}

fn cmd_entropy(cfg: &Config, u: &str, v: &str) -> Result<u8, Failure> {
    let (u, v) = pair(u, v)?;
    let r: EntropyReportDD = compute_bar(&u, &v, &cfg.solver_options())?;
    let flags = flag_list(&r);
    let text = format!(
        "k = {}\nalpha_bar = {:.16}\nbeta_bar = {:.16}\ngamma_bar = {:.16}\nentropy_log2 = {:.12}\niterations = {}\nresidual = {:.3e}\nflags = {}\n",
        r.k,
        r.alpha_bar.to_f64_lossy(),
        r.beta_bar.to_f64_lossy(),
        r.gamma_bar.to_f64_lossy(),
        r.entropy_log2,
        r.iterations.len(),
        r.residual,
        if flags.is_empty() { "none".to_string() } else { flags.join(", ") }
    );
    emit(cfg, r.to_json(), text);
    Ok(0)
}

fn cmd_graph(
    cfg: &Config,
    u: &str,
    v: &str,
    mode: ModeArg,
    k_max: usize,
    format: GraphFormat,
    out: Option<&PathBuf>,
) -> Result<u8, Failure> {
    let (u, v) = pair(u, v)?;
    let mode = match mode {
        ModeArg::Collapse => GraphMode::Collapse,
        ModeArg::Truncate => GraphMode::Truncate(k_max),
    };
    let g = build_graph(&u, &v, mode)?;
    let body = match format {
        GraphFormat::Dot => g.to_dot(),
        GraphFormat::Json => {
            let mut j = g.to_json();
            j["entropy_log2"] = json!(graph_entropy(&g, cfg.tol.max(1e-14)));
            serde_json::to_string_pretty(&j).unwrap() + "\n"
        }
    };
    match out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure { code: EXIT_ERROR, msg: format!("{}: {e}", path.display()) })?
        }
        None => print!("{body}"),
    }
    Ok(0)
}

fn cmd_invert(cfg: &Config, u: &str, v: &str) -> Result<u8, Failure> {
    let (u, v) = pair(u, v)?;
    let d = decide::<DoubleDouble>(&u, &v, &cfg.inverse_options())?;
    let verdict = serde_json::to_value(d.verdict).unwrap();
    let case = serde_json::to_value(d.case).unwrap();
    let mut text = format!(
        "verdict = {}\ncase = {}\nalpha_bar = {:.16}\nbeta_bar = {:.16}\nbeta_hat = {:.16}\n",
        verdict.as_str().unwrap_or_default(),
        case.as_str().unwrap_or_default(),
        d.alpha_bar,
        d.beta_bar,
        d.beta_hat
    );
    for note in &d.evidence.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    emit(cfg, d.to_json(), text);
    Ok(match d.verdict {
        Verdict::Matched => 0,
        Verdict::NotRepresentable => EXIT_NOT_REPRESENTABLE,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    })
}

fn cmd_check(cfg: &Config, u: &str, v: &str) -> Result<u8, Failure> {
    let (u, v) = pair(u, v)?;
    let r = check_conditions(&u, &v);
    let stars = star_strings(&u, &v);
    let summary = if r.admissible_strict() {
        "strict inequalities hold"
    } else if r.admissible() {
        "inequalities hold weakly"
    } else {
        "inequalities fail"
    };
    let mut text = format!(
        "k = {}\n{summary}\nu0 = 0: {}\nv0 = k-1: {}\nweak: {}\nstrict: {}\n",
        r.k, r.u0_is_zero, r.v0_is_top, r.weak, r.strict
    );
    if let Some(o) = r.sigma_order {
        text.push_str(&format!("sigma u <= sigma v: {o}\n"));
    }
    text.push_str(&format!("u* = {}\nv* = {}\n", stars.u_star, stars.v_star));
    for line in &r.violations {
        text.push_str(&format!("violated: {line}\n"));
    }
    let value = json!({
        "report": r,
        "admissible": r.admissible(),
        "admissible_strict": r.admissible_strict(),
        "stars": stars,
    });
    emit(cfg, value, text);
    Ok(if r.admissible() { 0 } else { EXIT_CONDITION })
}
