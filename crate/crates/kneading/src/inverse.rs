//! Inverse problem: is an admissible pair `(u, v)` the kneading data
//! `(u^{α,β}, v^{α,β})` of some `βx + α mod 1` with `β > 1`?
//!
//! The answer is decided by comparing `β̂`, with `log₂ β̂ = h(Σ(u, û))` and
//! `û = sup σⁿu`, against the `β̄` of the pair itself:
//!
//! * `β̂ < β̄`: representable by `(ᾱ, β̄)`;
//! * `β̂ = β̄ > 1`: representable unless both `u^{ᾱ,β̄}` and `v^{ᾱ,β̄}` are
//!   periodic.
//!
//! Equality of `β̂` and `β̄` is never taken from floating point alone. The
//! kneading equations are solved exactly in a real number field near the
//! numerical solution, and every claim in that branch is re-checked with exact
//! arithmetic. When that fails the decision falls back on the `u⋆` comparison
//! against `v`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::affine::{Coding, CodingStatus, OrbitOptions};
use crate::algebraic::{Algebraic, NumberField, Poly};
use crate::beta::{orbit_codings, phi_ab_closed, star_strings, AlphaBetaParams};
use crate::entropy::{compute_bar, eval_sigma, EntropyReport, ReportFlags, SolverOptions};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::strings::{check_conditions, common_alphabet, lex, sup_shift, EpString, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseOptions {
    pub solver: SolverOptions,
    /// Below this distance `β̂` and `β̄` count as numerically equal.
    pub compare_tol: f64,
    /// Longest orbit followed when looking for periodic codings.
    pub orbit_horizon: usize,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions { solver: SolverOptions::default(), compare_tol: 1e-9, orbit_horizon: 256 }
    }
}

/// `β̂` together with the data it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaHat<S> {
    pub u_hat: EpString,
    /// Alphabet size `û₀ + 1` of the pair `(u, û)`.
    pub k_hat: u32,
    pub beta_hat: S,
    /// Entropy report of `(u, û)`; absent when `û = 0^∞`.
    pub report: Option<EntropyReport<S>>,
}

/// `β̂ = 2^{h(Σ(u, û))}`.
///
/// Needs `u₀ = 0` and `u ⪯ σⁿu`. The pair `(u, û)` is read over the alphabet
/// `{0, …, û₀}`. When `û = 0^∞`, or when `k̂ = 2` and `σû ≺ σu`, the entropy
/// is zero and `β̂ = 1`.
pub fn beta_hat<S: Scalar>(u: &EpString, opts: &SolverOptions) -> Result<BetaHat<S>> {
    if u.first() != 0 {
        return Err(Error::ConditionViolation(format!("u₀ = 0 fails: u₀ = {}", u.first())));
    }
    if let Some(s) = u.shifts().iter().find(|s| lex(u, s).is_gt()) {
        return Err(Error::ConditionViolation(format!("u ⪯ σⁿu fails: {s} ≺ {u}")));
    }
    let u_hat = sup_shift(u);
    if u_hat.is_constant(0) {
        return Ok(BetaHat { u_hat, k_hat: 1, beta_hat: S::one(), report: None });
    }
    let k_hat = u_hat.first() + 1;
    let uk = EpString::new(u.preperiod().to_vec(), u.period().to_vec(), k_hat)?;
    let hk = EpString::new(u_hat.preperiod().to_vec(), u_hat.period().to_vec(), k_hat)?;
    let report: EntropyReport<S> = compute_bar(&uk, &hk, opts)?;
    let beta_hat =
        if report.flags.k2_reversed || report.flags.beta_bar_is_one { S::one() } else { report.beta_bar.clone() };
    Ok(BetaHat { u_hat: hk, k_hat, beta_hat, report: Some(report) })
}

/// Values of `φ̄_∞^{α,β}` on every distinct shift of `u` and `v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRecord {
    /// Enclosures `[lo, hi]` of `φ̄_∞(σⁿu)`.
    pub u_values: Vec<(f64, f64)>,
    /// Enclosures `[lo, hi]` of `φ̄_∞(σⁿv)`.
    pub v_values: Vec<(f64, f64)>,
    /// `1 − max_n φ̄_∞(σⁿu)`.
    pub u_gap_to_one: f64,
    /// `min_n φ̄_∞(σⁿv)`.
    pub v_gap_to_zero: f64,
    pub u_reaches_one: bool,
    pub v_reaches_zero: bool,
}

/// The certificates of `u^{α,β} = u ⟺ ∀n: φ̄_∞(σⁿu) < 1 ⟺ ∀n: φ̄_∞(σⁿv) > 0 ⟺
/// v^{α,β} = v`, evaluated over the finitely many shifts.
pub fn kneading_residuals<S: Scalar>(
    u: &EpString,
    v: &EpString,
    alpha: &S,
    beta: &S,
    tol: f64,
    opts: &SolverOptions,
) -> ResidualRecord {
    let enc = |x: &EpString| {
        x.shifts()
            .iter()
            .map(|s| {
                let e = eval_sigma(s, alpha, beta, opts).enclosure;
                (e.lo.to_f64_lossy(), e.hi.to_f64_lossy())
            })
            .collect::<Vec<_>>()
    };
    let u_values = enc(u);
    let v_values = enc(v);
    let u_max = u_values.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let v_min = v_values.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
    ResidualRecord {
        u_gap_to_one: 1.0 - u_max,
        v_gap_to_zero: v_min,
        u_reaches_one: u_max >= 1.0 - tol,
        v_reaches_zero: v_min <= tol,
        u_values,
        v_values,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Matched,
    NotRepresentable,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionCase {
    /// `β̂ < β̄`.
    T41Case1,
    /// `β̂ = β̄ > 1`, codings at `(ᾱ, β̄)` not both periodic.
    T41Case2,
    /// `β̂ = β̄ > 1`, both codings periodic.
    T41Case3,
    /// `u⋆ ≺ v`.
    T42Less,
    /// `u⋆ ≻ v`.
    T42Greater,
    /// Neither route applies or neither could be carried out.
    T42Inapplicable,
    /// `h(Σ(u, v)) = 0`, while any `βx + α` with `β > 1` has entropy `log₂ β > 0`.
    ZeroEntropy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

/// Exact parameters solving the kneading equations of `(u, v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedParams {
    /// Coefficients (constant first) of the squarefree polynomial with root `β`.
    pub beta_poly: Vec<String>,
    /// Rational isolating interval of that root.
    pub beta_interval: (String, String),
    pub alpha: f64,
    pub beta: f64,
    /// Codings at the exact parameters.
    pub u_coding: Coding,
    pub v_coding: Coding,
    /// `(u, û)` has the same exact solution, hence `β̂ = β̄`.
    pub beta_hat_equal: bool,
    /// Exact `∀n: φ̄_∞(σⁿu) < 1`.
    pub u_below_one: bool,
    /// Exact `∀n: φ̄_∞(σⁿv) > 0`.
    pub v_above_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm42Evidence {
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    /// The statement asks for `h(Σ(u, û)) > 1`; the branch runs whenever
    /// `β̃ > 1`. Records whether the stated threshold also holds.
    pub stated_threshold_met: bool,
    pub v_tilde: Coding,
    /// Prefix of `u⋆` used for the comparison.
    pub u_star_prefix: Vec<Symbol>,
    pub u_star: Option<EpString>,
    /// Order of `u⋆` against `v`; `None` when the prefix cannot decide.
    pub order: Option<Comparison>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Evidence {
    pub k: u32,
    pub u_hat: Option<EpString>,
    pub k_hat: u32,
    /// Whether the strict inequalities also hold (only the weak ones are
    /// required).
    pub strict_conditions: bool,
    pub bar_flags: Option<ReportFlags>,
    pub hat_flags: Option<ReportFlags>,
    pub comparison: Option<Comparison>,
    /// Codings at the numerical `(ᾱ, β̄)`.
    pub u_coding: Option<Coding>,
    pub v_coding: Option<Coding>,
    pub residuals: Option<ResidualRecord>,
    pub certified: Option<CertifiedParams>,
    pub thm42: Option<Thm42Evidence>,
    /// Prefix agreement of the codings at `(ᾱ, β̄)` with `(u, v)`.
    pub verified_prefix: Option<bool>,
    pub verification_horizon: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseDecision {
    pub verdict: Verdict,
    pub case: DecisionCase,
    pub alpha_bar: f64,
    pub beta_bar: f64,
    pub beta_hat: f64,
    pub evidence: Evidence,
}

impl InverseDecision {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("decision serialises")
    }
}

/// Decide whether `(u, v) = (u^{ᾱ,β̄}, v^{ᾱ,β̄})`.
///
/// Requires `u₀ = 0`, `v₀ = k − 1`, the weak shift inequalities and, for
/// `k = 2`, `σu ⪯ σv`. `S` is the scalar used by the entropy solver and the
/// floating orbit codings.
pub fn decide<S: Scalar>(u: &EpString, v: &EpString, opts: &InverseOptions) -> Result<InverseDecision> {
    let report = check_conditions(u, v);
    if !report.admissible() || report.sigma_order == Some(false) {
        let mut violations = report.violations.clone();
        if report.sigma_order == Some(false) {
            violations.push("σu ⪯ σv fails".into());
        }
        return Err(Error::ConditionViolation(violations.join("; ")));
    }
    let (u, v, k) = common_alphabet(u, v);
    let horizon = 64.max(4 * (u.shift_count().max(v.shift_count())));
    let mut ev = Evidence { k, strict_conditions: report.strict, verification_horizon: horizon, ..Default::default() };

    let bar: EntropyReport<S> = compute_bar(&u, &v, &opts.solver)?;
    let hat: BetaHat<S> = beta_hat(&u, &opts.solver)?;
    ev.bar_flags = Some(bar.flags);
    ev.hat_flags = hat.report.as_ref().map(|r| r.flags);
    ev.u_hat = Some(hat.u_hat.clone());
    ev.k_hat = hat.k_hat;
    let (a_bar, b_bar, b_hat) =
        (bar.alpha_bar.to_f64_lossy(), bar.beta_bar.to_f64_lossy(), hat.beta_hat.to_f64_lossy());
    let decision = |verdict, case, ev| InverseDecision {
        verdict,
        case,
        alpha_bar: a_bar,
        beta_bar: b_bar,
        beta_hat: b_hat,
        evidence: ev,
    };

    if bar.flags.beta_bar_is_one || bar.entropy_log2 == 0.0 {
        ev.notes.push("h(Σ(u, v)) = 0".into());
        return Ok(decision(Verdict::NotRepresentable, DecisionCase::ZeroEntropy, ev));
    }

    let orbit_opts = OrbitOptions { horizon: horizon.max(opts.orbit_horizon), ..OrbitOptions::default() };
    let codings =
        AlphaBetaParams::new(bar.alpha_bar.clone(), bar.beta_bar.clone()).and_then(|p| orbit_codings(&p, &orbit_opts));
    match &codings {
        Ok(kp) => {
            ev.u_coding = Some(kp.u.clone());
            ev.v_coding = Some(kp.v.clone());
        }
        Err(e) => ev.notes.push(format!("no orbit codings at (ᾱ, β̄): {e}")),
    }
    ev.residuals = Some(kneading_residuals(&u, &v, &bar.alpha_bar, &bar.beta_bar, opts.compare_tol, &opts.solver));

    let diff = b_hat - b_bar;
    let cmp = if diff < -opts.compare_tol {
        Comparison::Less
    } else if diff > opts.compare_tol {
        Comparison::Greater
    } else {
        Comparison::Equal
    };
    ev.comparison = Some(cmp);

    let verify = |ev: &mut Evidence| -> bool {
        let ok = match &codings {
            Ok(kp) => agrees(&kp.u, &u, horizon) && agrees(&kp.v, &v, horizon),
            Err(_) => false,
        };
        ev.verified_prefix = Some(ok);
        if !ok {
            ev.notes.push("orbit codings at (ᾱ, β̄) disagree with (u, v) within the verification horizon".into());
        }
        ok
    };

    match cmp {
        Comparison::Less => {
            if verify(&mut ev) {
                return Ok(decision(Verdict::Matched, DecisionCase::T41Case1, ev));
            }
            return Ok(decision(Verdict::Undetermined, DecisionCase::T41Case1, ev));
        }
        Comparison::Greater => {
            ev.notes.push("β̂ > β̄ contradicts monotonicity; numerical trouble".into());
        }
        Comparison::Equal => match certify(&u, &v, k, &hat, a_bar, b_bar, opts.orbit_horizon) {
            Ok(c) => {
                let both_periodic =
                    c.u_coding.status == CodingStatus::Exact && c.v_coding.status == CodingStatus::Exact;
                let beta_hat_equal = c.beta_hat_equal;
                let representable = c.u_below_one && c.v_above_zero;
                ev.certified = Some(c);
                if beta_hat_equal && both_periodic {
                    if representable {
                        ev.notes.push("exact check contradicts case 3".into());
                    } else {
                        return Ok(decision(Verdict::NotRepresentable, DecisionCase::T41Case3, ev));
                    }
                } else if beta_hat_equal && representable {
                    if verify(&mut ev) {
                        return Ok(decision(Verdict::Matched, DecisionCase::T41Case2, ev));
                    }
                } else if !beta_hat_equal {
                    ev.notes.push("(u, û) is not solved by the exact parameters; β̂ < β̄ is likely".into());
                }
            }
            Err(e) => ev.notes.push(format!("exact certification failed: {e}")),
        },
    }

    // u⋆ route
    if let Some(r) = &hat.report {
        if hat.beta_hat > S::one() {
            match thm42(&v, r, horizon, &orbit_opts) {
                Ok(t) => {
                    let order = t.order;
                    ev.thm42 = Some(t);
                    match order {
                        Some(Comparison::Less) => {
                            if verify(&mut ev) {
                                return Ok(decision(Verdict::Matched, DecisionCase::T42Less, ev));
                            }
                            return Ok(decision(Verdict::Undetermined, DecisionCase::T42Less, ev));
                        }
                        Some(Comparison::Greater) => {
                            return Ok(decision(Verdict::NotRepresentable, DecisionCase::T42Greater, ev));
                        }
                        _ => ev.notes.push("u⋆ and v could not be ordered".into()),
                    }
                }
                Err(e) => ev.notes.push(format!("u⋆ route failed: {e}")),
            }
        }
    }
    Ok(decision(Verdict::Undetermined, DecisionCase::T42Inapplicable, ev))
}

/// The coding agrees with `x` on the first `n` symbols (or on all it has).
fn agrees(c: &Coding, x: &EpString, n: usize) -> bool {
    if c.prefix.len() < n.min(16) {
        return false;
    }
    c.agrees_with(x)
}

fn thm42<S: Scalar>(v: &EpString, r: &EntropyReport<S>, horizon: usize, opts: &OrbitOptions) -> Result<Thm42Evidence> {
    let p = AlphaBetaParams::new(r.alpha_bar.clone(), r.beta_bar.clone())?;
    let kp = orbit_codings(&p, opts)?;
    let (u_star_prefix, u_star) = match (&kp.u.string, &kp.v.string) {
        (Some(ut), Some(vt)) => {
            let s = star_strings(ut, vt).v_star;
            (s.prefix(horizon), Some(s))
        }
        (None, Some(vt)) => {
            let mut b = vt.period().to_vec();
            *b.last_mut().unwrap() += 1;
            if vt.period_len() == 1 {
                (vt.prefix(horizon), Some(vt.clone()))
            } else {
                let mut w = b;
                w.extend(kp.u.prefix.iter().copied());
                (w, None)
            }
        }
        (_, None) => (kp.v.prefix.clone(), None),
    };
    let order = match &u_star {
        Some(s) => Some(match lex(s, v) {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }),
        None => u_star_prefix.iter().enumerate().find(|(i, &c)| v.symbol(*i) != c).map(|(i, &c)| {
            if c < v.symbol(i) {
                Comparison::Less
            } else {
                Comparison::Greater
            }
        }),
    };
    Ok(Thm42Evidence {
        alpha_tilde: r.alpha_bar.to_f64_lossy(),
        beta_tilde: r.beta_bar.to_f64_lossy(),
        stated_threshold_met: r.entropy_log2 > 1.0,
        v_tilde: kp.v,
        u_star_prefix,
        u_star,
        order,
    })
}

// Exact solution of the kneading equations.
//
// Along a fixed pattern of active clamps, φ̄_∞^{α,β}(x) is an expression
// (n₀(β) + α n₁(β)) / d(β) with polynomial coefficients. The pattern is read
// off the numerical solution; the α-equation then gives α as a rational
// function of β, and the γ-equation a polynomial in β. Its root next to β̄ is
// isolated exactly and every claim is re-checked in that number field, so a
// wrongly guessed pattern can only make certification fail.

#[derive(Clone, Debug)]
struct Lin {
    n0: Poly,
    n1: Poly,
    d: Poly,
}

impl Lin {
    fn constant(c: i64) -> Lin {
        Lin { n0: Poly::from_ints(&[c]), n1: Poly::from_ints(&[]), d: Poly::from_ints(&[1]) }
    }

    /// `(j + t − α) / β`.
    fn step(&self, j: Symbol) -> Lin {
        let jd = self.d.scale(&BigRational::from_integer(BigInt::from(j)));
        Lin { n0: jd.add(&self.n0), n1: self.n1.sub(&self.d), d: self.d.mul(&Poly::x()) }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Clamp {
    Low,
    High,
    Free,
}

fn clamp_state(arg: f64) -> Clamp {
    const EPS: f64 = 1e-9;
    if arg < -EPS {
        Clamp::Low
    } else if arg > 1.0 + EPS {
        Clamp::High
    } else {
        Clamp::Free
    }
}

fn apply(c: Clamp, e: Lin) -> Lin {
    match c {
        Clamp::Low => Lin::constant(0),
        Clamp::High => Lin::constant(1),
        Clamp::Free => e,
    }
}

/// Symbolic `φ̄_∞(x)` following the clamp pattern seen at `(a, b)`.
fn symbolic_phi(x: &EpString, a: f64, b: f64) -> Option<Lin> {
    let pre = x.pre_len();
    let len = pre + x.period_len();
    let y: Vec<f64> = (0..len).map(|m| phi_ab_closed(&a, &b, &x.shift(m))).collect::<Option<_>>()?;
    let next = |m: usize| if m + 1 < len { m + 1 } else { pre };
    let state: Vec<Clamp> = (0..len).map(|m| clamp_state((x.symbol(m) as f64 + y[next(m)] - a) / b)).collect();
    let mut sym: Vec<Option<Lin>> = vec![None; len];
    let prev = |m: usize| if m > pre { m - 1 } else { len - 1 };
    let start = match (pre..len).find(|&m| state[m] != Clamp::Free) {
        Some(c) => {
            sym[c] = Some(apply(state[c], Lin::constant(0)));
            c
        }
        None => {
            // fixed point of the free period map
            let w = x.period();
            let p = w.len();
            let mut n0 = Poly::from_ints(&[]);
            let mut n1 = Poly::from_ints(&[]);
            for (i, &wi) in w.iter().enumerate() {
                let mut mono = vec![0i64; p - i];
                mono[p - 1 - i] = 1;
                let m = Poly::from_ints(&mono);
                n0 = n0.add(&m.scale(&BigRational::from_integer(BigInt::from(wi))));
                n1 = n1.sub(&m);
            }
            let mut dp = vec![0i64; p + 1];
            dp[0] = -1;
            dp[p] = 1;
            sym[pre] = Some(Lin { n0, n1, d: Poly::from_ints(&dp) });
            pre
        }
    };
    let mut m = prev(start);
    while m != start {
        let e = sym[next(m)].as_ref().unwrap().step(x.symbol(m));
        sym[m] = Some(apply(state[m], e));
        m = prev(m);
    }
    for m in (0..pre).rev() {
        let e = sym[m + 1].as_ref().unwrap().step(x.symbol(m));
        sym[m] = Some(apply(state[m], e));
    }
    sym[0].clone()
}

fn alg_of(p: &Poly, f: &std::sync::Arc<NumberField>) -> Algebraic {
    Algebraic::from_poly(p.clone(), f)
}

/// Exact `(α, β)` in a number field with `φ̄_∞(σu) = α` and
/// `φ̄_∞(σv) = α + β − k + 1`, or `None`.
fn exact_solution(
    u: &EpString,
    v: &EpString,
    k: u32,
    a: f64,
    b: f64,
) -> Result<(Algebraic, Algebraic, Poly, std::sync::Arc<NumberField>)> {
    let fail = |m: &str| Error::Algebraic(m.to_string());
    let lu = symbolic_phi(&u.shift(1), a, b).ok_or_else(|| fail("no closed form for φ̄_∞(σu)"))?;
    let lv = symbolic_phi(&v.shift(1), a, b).ok_or_else(|| fail("no closed form for φ̄_∞(σv)"))?;
    // α (d_u − n1_u) = n0_u
    let num = lu.n0.clone();
    let den = lu.d.sub(&lu.n1);
    if den.is_zero() {
        return Err(fail("α-equation is degenerate"));
    }
    // n0_v + α n1_v = d_v (α + β − k + 1), times den
    let shift = Poly::new(vec![
        BigRational::from_integer(BigInt::from(1 - k as i64)),
        BigRational::from_integer(BigInt::from(1)),
    ]);
    let p = den.mul(&lv.n0).add(&num.mul(&lv.n1)).sub(&lv.d.mul(&num.add(&den.mul(&shift))));
    if p.is_zero() {
        return Err(fail("β-equation vanishes identically"));
    }
    let field = NumberField::near(p.clone(), b)?;
    let beta = Algebraic::generator(&field);
    let d = alg_of(&den, &field);
    if d.is_zero_value() {
        return Err(fail("α denominator vanishes at β"));
    }
    let alpha = alg_of(&num, &field) / d;
    Ok((alpha, beta, field.poly().clone(), field))
}

fn solves(u: &EpString, v: &EpString, k: u32, alpha: &Algebraic, beta: &Algebraic) -> bool {
    let gamma = alpha.clone() + beta.clone() - Algebraic::from_int(k as i64 - 1);
    phi_ab_closed(alpha, beta, &u.shift(1)).is_some_and(|y| y == *alpha)
        && phi_ab_closed(alpha, beta, &v.shift(1)).is_some_and(|y| y == gamma)
}

fn certify<S: Scalar>(
    u: &EpString,
    v: &EpString,
    k: u32,
    hat: &BetaHat<S>,
    a: f64,
    b: f64,
    horizon: usize,
) -> Result<CertifiedParams> {
    let (alpha, beta, poly, field) = exact_solution(u, v, k, a, b)?;
    let zero = Algebraic::zero();
    let one = Algebraic::from_int(1);
    if alpha < zero || alpha >= one || beta <= one {
        return Err(Error::Algebraic("exact solution outside α ∈ [0, 1), β > 1".into()));
    }
    if !solves(u, v, k, &alpha, &beta) {
        return Err(Error::Algebraic("exact parameters do not solve the kneading equations".into()));
    }
    let beta_hat_equal = solves(u, &hat.u_hat, hat.k_hat, &alpha, &beta);
    let u_below_one = u.shifts().iter().all(|s| phi_ab_closed(&alpha, &beta, s).is_some_and(|y| y < one));
    let v_above_zero = v.shifts().iter().all(|s| phi_ab_closed(&alpha, &beta, s).is_some_and(|y| y > zero));
    let p = AlphaBetaParams::new(alpha.clone(), beta.clone())?;
    let kp = orbit_codings(&p, &OrbitOptions { horizon, ..OrbitOptions::default() })?;
    let (lo, hi) = field.interval();
    Ok(CertifiedParams {
        beta_poly: poly.coeffs().iter().map(|c| c.to_string()).collect(),
        beta_interval: (lo.to_string(), hi.to_string()),
        alpha: alpha.to_f64_lossy(),
        beta: beta.to_f64_lossy(),
        u_coding: kp.u,
        v_coding: kp.v,
        beta_hat_equal,
        u_below_one,
        v_above_zero,
    })
}
