//! Entropy of `Σ(u, v)` through the alternating fixed-point algorithm.
//!
//! Starting from `(α₀, β₀) = (0, k)` the solver alternates two scalar root
//! problems along lines of constant `α` resp. constant `γ = α + β − k + 1`:
//!
//! * γ-step: `φ̄_∞^{α, β(γ)}(σv) = γ` with `β(γ) = γ − α + k − 1`;
//! * α-step: `φ̄_∞^{α, β(α)}(σu) = α` with `β(α) = γ − α + k − 1`.
//!
//! Both left-hand sides are non-increasing in the free variable, so each step
//! is a bisection. The α sequence is non-decreasing and the β sequence
//! non-increasing, and `h(Σ(u, v)) = log₂ β̄` for the limit.
//!
//! The cycle map can be tangent to the diagonal from below (star strings do
//! this), which makes the monotone sequence converge sublinearly. When the
//! steps stop shrinking geometrically the solver probes ahead of the
//! extrapolated limit; a probe the cycle map moves down is above `ᾱ`, and
//! cycles started there descend quickly onto `ᾱ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::affine::Enclosure;
use crate::beta::{phi_ab_closed, phi_ab_infty, PhiEval};
use crate::error::{Error, Result};
use crate::scalar::{abs, half, max, min, Scalar};
use crate::strings::{check_conditions, common_alphabet, lex, EpString};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Bisection width and outer stopping threshold on `|Δβ|`.
    pub tol: f64,
    /// Maximum number of (γ-step, α-step) cycles.
    pub max_iter: usize,
    /// Longest prefix used when a closed form is unavailable.
    pub horizon_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-12, max_iter: 200, horizon_cap: 1_000_000 }
    }
}

/// Enclosure of `φ̄_∞^{α,β}(x)`.
///
/// For `β > 1` the eventually periodic structure gives the value exactly up
/// to rounding: the period map is a contraction with factor `β^{−p}` and its
/// fixed point is closed form. For `β ≤ 1` a prefix of `horizon_cap` symbols
/// is used and the result is flagged non-contractive.
pub fn eval_sigma<S: Scalar>(x: &EpString, alpha: &S, beta: &S, opts: &SolverOptions) -> PhiEval<S> {
    if *beta > S::one() {
        if let Some(y) = phi_ab_closed(alpha, beta, x) {
            let n = x.pre_len() + x.period_len();
            let enclosure = if S::EXACT {
                Enclosure { lo: y.clone(), hi: y }
            } else {
                let d = (beta.clone() - S::one()).to_f64_lossy();
                let gap = -(-(x.period_len() as f64) * d.ln_1p()).exp_m1();
                let amp = n as f64 + 1.0 / gap;
                let slack = S::from_f64_lossy((8.0 * S::unit_roundoff() * amp).min(1.0));
                Enclosure { lo: max(&(y.clone() - slack.clone()), &S::zero()), hi: min(&(y + slack), &S::one()) }
            };
            return PhiEval { enclosure, horizon: n, contractive: true };
        }
    }
    phi_ab_infty(alpha, beta, x, opts.tol, opts.horizon_cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
    Zero,
}

/// Sign of `value − target`, zero when the enclosure cannot decide.
fn sign_of<S: Scalar>(e: &Enclosure<S>, target: &S) -> Sign {
    if e.lo > *target {
        Sign::Pos
    } else if e.hi < *target {
        Sign::Neg
    } else {
        Sign::Zero
    }
}

/// Root of a non-increasing function on `[lo, hi]`, given through its sign.
fn bisect<S: Scalar>(mut lo: S, mut hi: S, tol: f64, mut f: impl FnMut(&S) -> Sign) -> S {
    let width = S::from_f64_lossy(tol);
    for _ in 0..2000 {
        if hi.clone() - lo.clone() <= width {
            break;
        }
        let m = (lo.clone() + hi.clone()) * half::<S>();
        if m <= lo || m >= hi {
            break;
        }
        match f(&m) {
            Sign::Pos => lo = m,
            Sign::Neg => hi = m,
            Sign::Zero => return m,
        }
    }
    (lo + hi) * half::<S>()
}

fn beta_of<S: Scalar>(gamma: &S, alpha: &S, k: u32) -> S {
    gamma.clone() - alpha.clone() + S::from_int(k as i64 - 1)
}

/// γ-step: the root of `G_α(γ) = φ̄_∞^{α, β(γ)}(σv) − γ` below `upper`.
///
/// The search interval is `[α, upper]` for `k = 2` and `[0, upper]` otherwise.
pub fn solve_gamma_step<S: Scalar>(alpha: &S, v: &EpString, k: u32, upper: &S, opts: &SolverOptions) -> S {
    let sv = v.shift(1);
    if sv.is_constant(k - 1) {
        return S::one();
    }
    let lo = if k == 2 { alpha.clone() } else { S::zero() };
    if *upper <= lo {
        return lo;
    }
    bisect(lo, upper.clone(), opts.tol / 4.0, |g| {
        let b = beta_of(g, alpha, k);
        if b <= S::one() {
            return Sign::Pos;
        }
        sign_of(&eval_sigma(&sv, alpha, &b, opts).enclosure, g)
    })
}

/// α-step: the root of `H_γ(α) = φ̄_∞^{α, β(α)}(σu) − α` above `lower`.
///
/// The search interval is `[lower, γ)` for `k = 2` and `[lower, 1)` otherwise.
pub fn solve_alpha_step<S: Scalar>(gamma: &S, u: &EpString, k: u32, lower: &S, opts: &SolverOptions) -> S {
    let su = u.shift(1);
    if su.is_constant(0) {
        return S::zero();
    }
    let hi = if k == 2 { gamma.clone() } else { S::one() };
    if hi <= *lower {
        return lower.clone();
    }
    bisect(lower.clone(), hi, opts.tol / 4.0, |a| {
        let b = beta_of(gamma, a, k);
        if b <= S::one() {
            return Sign::Neg;
        }
        sign_of(&eval_sigma(&su, a, &b, opts).enclosure, a)
    })
}

/// `max(|φ̄_∞(σu) − α|, |φ̄_∞(σv) − γ|)` with `γ = α + β − k + 1`.
pub fn kneading_residual<S: Scalar>(
    u: &EpString,
    v: &EpString,
    k: u32,
    alpha: &S,
    beta: &S,
    opts: &SolverOptions,
) -> f64 {
    let gamma = alpha.clone() + beta.clone() - S::from_int(k as i64 - 1);
    let ru = eval_sigma(&u.shift(1), alpha, beta, opts).enclosure.mid() - alpha.clone();
    let rv = eval_sigma(&v.shift(1), alpha, beta, opts).enclosure.mid() - gamma;
    abs(&ru).to_f64_lossy().max(abs(&rv).to_f64_lossy())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// `σv = 0^∞`: `(ᾱ, β̄) = (0, k − 1)`.
    SigmaVZero,
    /// `σu = (k−1)^∞`: `(ᾱ, β̄) = (1, k − 1)`.
    SigmaUTop,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportFlags {
    pub special_case: Option<SpecialCase>,
    pub beta_bar_is_one: bool,
    pub k2_reversed: bool,
    pub max_iter_exceeded: bool,
    /// The final value comes from cycles started above `ᾱ`.
    pub upper_descent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep<S> {
    pub n: usize,
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    /// Residual of the equation solved at this step.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport<S> {
    pub k: u32,
    pub alpha_bar: S,
    pub beta_bar: S,
    pub gamma_bar: S,
    pub entropy_log2: f64,
    pub iterations: Vec<TraceStep<S>>,
    /// Residual of both fixed-point equations at `(ᾱ, β̄)`.
    pub residual: f64,
    pub flags: ReportFlags,
}

impl<S: Scalar> EntropyReport<S> {
    fn fixed(k: u32, alpha: S, beta: S, flags: ReportFlags) -> Self {
        let gamma = alpha.clone() + beta.clone() - S::from_int(k as i64 - 1);
        let entropy_log2 = if flags.k2_reversed { 0.0 } else { beta.to_f64_lossy().log2().max(0.0) };
        let flags = ReportFlags { beta_bar_is_one: beta == S::one(), ..flags };
        EntropyReport {
            k,
            alpha_bar: alpha,
            beta_bar: beta,
            gamma_bar: gamma,
            entropy_log2,
            iterations: Vec::new(),
            residual: 0.0,
            flags,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.k,
            "alpha_bar": self.alpha_bar.to_f64_lossy(),
            "beta_bar": self.beta_bar.to_f64_lossy(),
            "gamma_bar": self.gamma_bar.to_f64_lossy(),
            "entropy_log2": self.entropy_log2,
            "residual": self.residual,
            "flags": self.flags,
            "trace": self.iterations.iter().map(|s| json!({
                "n": s.n,
                "alpha": s.alpha.to_f64_lossy(),
                "beta": s.beta.to_f64_lossy(),
                "gamma": s.gamma.to_f64_lossy(),
                "residual": s.residual,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `(ᾱ, β̄)` and `h(Σ(u, v)) = log₂ β̄`.
///
/// Requires `u₀ = 0`, `v₀ = k − 1` and the weak shift inequalities. For
/// `k = 2` with `σv ≺ σu` the entropy is zero and no iteration is run.
pub fn compute_bar<S: Scalar>(u: &EpString, v: &EpString, opts: &SolverOptions) -> Result<EntropyReport<S>> {
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.max_iter == 0 {
        return Err(Error::Config("tol must be positive and max_iter at least 1".into()));
    }
    let report = check_conditions(u, v);
    if !report.admissible() {
        return Err(Error::ConditionViolation(report.violations.join("; ")));
    }
    let (u, v, k) = common_alphabet(u, v);
    let (su, sv) = (u.shift(1), v.shift(1));
    if k == 2 && lex(&sv, &su).is_lt() {
        let flags = ReportFlags { k2_reversed: true, ..Default::default() };
        return Ok(EntropyReport::fixed(k, S::zero(), S::one(), flags));
    }
    if sv.is_constant(0) {
        let flags = ReportFlags { special_case: Some(SpecialCase::SigmaVZero), ..Default::default() };
        return Ok(EntropyReport::fixed(k, S::zero(), S::from_int(k as i64 - 1), flags));
    }
    if su.is_constant(k - 1) {
        let flags = ReportFlags { special_case: Some(SpecialCase::SigmaUTop), ..Default::default() };
        return Ok(EntropyReport::fixed(k, S::one(), S::from_int(k as i64 - 1), flags));
    }

    let mut alpha = S::zero();
    let mut gamma = S::one();
    let mut beta = S::from_int(k as i64);
    let mut trace =
        vec![TraceStep { n: 0, alpha: alpha.clone(), beta: beta.clone(), gamma: gamma.clone(), residual: f64::NAN }];
    let step_residual = |x: &EpString, a: &S, b: &S, target: &S| -> f64 {
        if *b <= S::one() {
            return f64::NAN;
        }
        abs(&(eval_sigma(x, a, b, opts).enclosure.mid() - target.clone())).to_f64_lossy()
    };
    // One (γ-step, α-step) cycle started at `a`.
    let cycle_from = |a: &S, gamma_upper: &S, alpha_lower: &S| -> (S, S) {
        let g = solve_gamma_step(a, &v, k, gamma_upper, opts);
        let next = solve_alpha_step(&g, &u, k, alpha_lower, opts);
        (g, next)
    };
    let tol = S::from_f64_lossy(opts.tol);
    let mut flags = ReportFlags::default();
    let mut converged = false;
    let mut last_step: Option<f64> = None;
    let mut above: Option<(S, S)> = None;
    let mut cycle = 0;
    while cycle < opts.max_iter && above.is_none() {
        let beta_start = beta.clone();
        let alpha_start = alpha.clone();

        gamma = solve_gamma_step(&alpha, &v, k, &gamma, opts);
        beta = beta_of(&gamma, &alpha, k);
        let r = step_residual(&sv, &alpha, &beta, &gamma);
        trace.push(TraceStep {
            n: trace.len(),
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            residual: r,
        });

        alpha = solve_alpha_step(&gamma, &u, k, &alpha, opts);
        beta = beta_of(&gamma, &alpha, k);
        let r = step_residual(&su, &alpha, &beta, &alpha);
        trace.push(TraceStep {
            n: trace.len(),
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            residual: r,
        });
        cycle += 1;

        if abs(&(beta_start - beta.clone())) < tol {
            converged = true;
            break;
        }

        // A slowly contracting α sequence is probed ahead of its extrapolated
        // limit. A probe that the cycle map moves down lies above ᾱ.
        let step = (alpha.clone() - alpha_start).to_f64_lossy();
        let ratio = last_step.map(|prev| if prev > 0.0 { step / prev } else { 0.0 });
        last_step = Some(step);
        let Some(ratio) = ratio.filter(|r| *r > 0.5) else { continue };
        if cycle >= opts.max_iter {
            break;
        }
        let bound = if k == 2 { gamma.clone() } else { S::one() };
        let reach = S::from_f64_lossy(4.0 * step * ratio.min(0.999) / (1.0 - ratio.min(0.999)));
        let probe = min(&(alpha.clone() + reach), &((alpha.clone() + bound) * half::<S>()));
        let (g, next) = cycle_from(&probe, &gamma, &alpha);
        cycle += 1;
        if next.clone() - probe.clone() > tol {
            gamma = g;
            alpha = next;
            beta = beta_of(&gamma, &alpha, k);
            let r = step_residual(&su, &alpha, &beta, &alpha);
            trace.push(TraceStep {
                n: trace.len(),
                alpha: alpha.clone(),
                beta: beta.clone(),
                gamma: gamma.clone(),
                residual: r,
            });
            last_step = None;
        } else if probe.clone() - next.clone() > tol {
            above = Some((g, next));
        } else {
            gamma = g;
            alpha = next;
            beta = beta_of(&gamma, &alpha, k);
            converged = true;
            break;
        }
    }
    // Descent from above: the cycle map is non-decreasing with ᾱ as its only
    // fixed point, so its iterates from a point above ᾱ stay above and converge.
    if let Some((mut g_hi, mut a_hi)) = above {
        let mut b_hi = beta_of(&g_hi, &a_hi, k);
        while cycle < opts.max_iter {
            let (g, next) = cycle_from(&a_hi, &gamma, &alpha);
            cycle += 1;
            let b = beta_of(&g, &next, k);
            let done = abs(&(b.clone() - b_hi.clone())) < tol;
            (g_hi, a_hi, b_hi) = (g, next, b);
            if done {
                converged = true;
                break;
            }
        }
        flags.upper_descent = true;
        gamma = g_hi;
        alpha = a_hi;
        beta = b_hi;
        let r = step_residual(&su, &alpha, &beta, &alpha);
        trace.push(TraceStep {
            n: trace.len(),
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            residual: r,
        });
    }
    flags.max_iter_exceeded = !converged;

    // Below this distance from 1 even the longest allowed prefix cannot
    // resolve φ̄_∞ to the requested tolerance.
    let near_one = (1.0 / opts.tol).ln() / opts.horizon_cap as f64;
    flags.beta_bar_is_one = (beta.clone() - S::one()).to_f64_lossy() <= near_one;
    let entropy_log2 = if flags.beta_bar_is_one { 0.0 } else { beta.to_f64_lossy().log2() };
    let residual = if flags.beta_bar_is_one { f64::NAN } else { kneading_residual(&u, &v, k, &alpha, &beta, opts) };
    Ok(EntropyReport {
        k,
        alpha_bar: alpha,
        beta_bar: beta,
        gamma_bar: gamma,
        entropy_log2,
        iterations: trace,
        residual,
        flags,
    })
}

/// Falsification probe for uniqueness of the solution on the line `γ = γ̄`.
///
/// The report's own residual must be small, and every random probe
/// `(α, γ̄ − α + k − 1)` away from `ᾱ` must leave a residual of at least half
/// its distance to `ᾱ`. Along that line `α ↦ φ̄_∞(σu) − α` has slope at most
/// −1, so the bound holds at a true solution.
pub fn verify_uniqueness<S: Scalar>(
    u: &EpString,
    v: &EpString,
    report: &EntropyReport<S>,
    probes: usize,
    seed: u64,
    opts: &SolverOptions,
) -> bool {
    let (u, v, k) = common_alphabet(u, v);
    if report.beta_bar <= S::one() {
        return false;
    }
    let own = kneading_residual(&u, &v, k, &report.alpha_bar, &report.beta_bar, opts);
    if own.is_nan() || own > (100.0 * opts.tol).max(1e-8) {
        return false;
    }
    let a_bar = report.alpha_bar.to_f64_lossy();
    let g_bar = (report.alpha_bar.clone() + report.beta_bar.clone() - S::from_int(k as i64 - 1)).to_f64_lossy();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    for _ in 0..probes.saturating_mul(20) {
        if done == probes {
            break;
        }
        let a: f64 = rng.gen_range(0.0..=1.0);
        let b = g_bar - a + (k - 1) as f64;
        if b < 1.0 + 1e-3 || (a - a_bar).abs() <= 1e-3 {
            continue;
        }
        done += 1;
        let r = kneading_residual(&u, &v, k, &S::from_f64_lossy(a), &S::from_f64_lossy(b), opts);
        if r < 0.5 * (a - a_bar).abs() {
            return false;
        }
    }
    true
}
