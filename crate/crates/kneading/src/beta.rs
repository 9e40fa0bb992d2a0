//! The family `T(x) = βx + α mod 1`.
//!
//! With `k = ⌈α+β⌉` the branches are `f_j(x) = βx + α − j` on
//! `((j−α)/β, (j+1−α)/β) ∩ (0, 1)`, and the clamped inverse has the closed form
//! `φ̄^{α,β}(t) = clamp((t − α)/β, 0, 1)` on `[0, k]`, independent of `k`.

use serde::Serialize;

use crate::affine::{Branch, ClampAffine, Coding, CodingStatus, Enclosure, OrbitOptions, PiecewiseAffineSystem, Side};
use crate::error::{Error, Result};
use crate::scalar::{ceil_int, clamp, max, min, Scalar};
use crate::strings::{common_alphabet, EpString, Symbol};

use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaBetaParams<S> {
    pub alpha: S,
    pub beta: S,
    pub k: u32,
    pub gamma: S,
}

impl<S: Scalar> AlphaBetaParams<S> {
    pub fn new(alpha: S, beta: S) -> Result<Self> {
        if alpha < S::zero() || alpha > S::one() {
            return Err(Error::BadParams(format!("alpha = {alpha} outside [0, 1]")));
        }
        if beta < S::one() {
            return Err(Error::BadParams(format!("beta = {beta} below 1")));
        }
        let s = alpha.clone() + beta.clone();
        if s <= S::one() {
            return Err(Error::BadParams("alpha + beta must exceed 1".into()));
        }
        let k = ceil_int(&s);
        let gamma = s - S::from_int(k) + S::one();
        Ok(AlphaBetaParams { alpha, beta, k: k as u32, gamma })
    }

    /// `a_j = (j − α)/β` for `j = 0..=k`, with the ends pinned to 0 and 1.
    pub fn breakpoints(&self) -> Vec<S> {
        let mut v = vec![S::zero()];
        for j in 1..self.k {
            v.push((S::from_int(j as i64) - self.alpha.clone()) / self.beta.clone());
        }
        v.push(S::one());
        v
    }

    pub fn make_system(&self) -> Result<PiecewiseAffineSystem<S>> {
        let bps = self.breakpoints();
        if bps.len() > 2 && (bps[1] <= S::zero() || bps[bps.len() - 2] >= S::one()) {
            return Err(Error::BadParams("breakpoints must lie inside (0, 1)".into()));
        }
        let branches =
            (0..self.k).map(|j| Branch::new(self.beta.clone(), self.alpha.clone() - S::from_int(j as i64))).collect();
        PiecewiseAffineSystem::new(bps, branches)
    }

    pub fn phi_bar(&self, t: &S) -> S {
        phi_bar_ab(&self.alpha, &self.beta, t)
    }

    /// Codings `u^{α,β}` of `0⁺` and `v^{α,β}` of `1⁻`.
    pub fn orbit_codings(&self, opts: &OrbitOptions) -> Result<KneadingPair> {
        orbit_codings(self, opts)
    }
}

/// `clamp((t − α)/β, 0, 1)`.
pub fn phi_bar_ab<S: Scalar>(alpha: &S, beta: &S, t: &S) -> S {
    clamp(&((t.clone() - alpha.clone()) / beta.clone()), &S::zero(), &S::one())
}

/// `φ̄^{α,β}(j + ·)` as a clamped affine map.
pub fn symbol_map<S: Scalar>(alpha: &S, beta: &S, j: Symbol) -> ClampAffine<S> {
    ClampAffine {
        a: S::one() / beta.clone(),
        b: (S::from_int(j as i64) - alpha.clone()) / beta.clone(),
        lo: S::zero(),
        hi: S::one(),
    }
}

/// `φ̄ₙ^{α,β}(w + t)`.
pub fn phi_ab_n<S: Scalar>(alpha: &S, beta: &S, w: &[Symbol], t: &S) -> S {
    w.iter().rev().fold(t.clone(), |acc, &j| phi_bar_ab(alpha, beta, &(S::from_int(j as i64) + acc)))
}

/// Exact `φ̄_∞^{α,β}(x)` from the fixed point of the period map (`β > 1`).
pub fn phi_ab_closed<S: Scalar>(alpha: &S, beta: &S, x: &EpString) -> Option<S> {
    let per = x.period().iter().fold(ClampAffine::identity(), |acc, &j| acc.after(&symbol_map(alpha, beta, j)));
    let tail = per.fixed_point()?;
    Some(phi_ab_n(alpha, beta, x.preperiod(), &tail))
}

/// Enclosure of `φ̄_∞^{α,β}(x)` together with the prefix length used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiEval<S> {
    pub enclosure: Enclosure<S>,
    pub horizon: usize,
    /// False when the horizon cap stopped the evaluation before the
    /// requested width was certified.
    pub contractive: bool,
}

/// Evaluate `φ̄_∞^{α,β}(x)` on a prefix long enough for width `tol`, seeds
/// `t = 0` and `t = 1`.
pub fn phi_ab_infty<S: Scalar>(alpha: &S, beta: &S, x: &EpString, tol: f64, horizon_cap: usize) -> PhiEval<S> {
    let b = beta.to_f64_lossy();
    let cap = horizon_cap.max(1);
    let need = if b > 1.0 { ((1.0 / tol).ln() / b.ln()).ceil() + 1.0 } else { f64::INFINITY };
    let contractive = need <= cap as f64;
    let n = if contractive { (need as usize).max(1) } else { cap };
    let w = x.prefix(n);
    let lo = phi_ab_n(alpha, beta, &w, &S::zero());
    let hi = phi_ab_n(alpha, beta, &w, &S::one());
    let enclosure = if S::EXACT {
        Enclosure { lo, hi }
    } else {
        let amp = if b > 1.0 { (n as f64).min(b / (b - 1.0) + 1.0) } else { n as f64 };
        let slack = S::from_f64_lossy(8.0 * S::unit_roundoff() * amp);
        Enclosure { lo: max(&(lo - slack.clone()), &S::zero()), hi: min(&(hi + slack), &S::one()) }
    };
    PhiEval { enclosure, horizon: n, contractive }
}

/// Orbit codings of `0⁺` and `1⁻`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KneadingPair {
    pub k: u32,
    pub u: Coding,
    pub v: Coding,
}

/// `u^{α,β}` (orbit of `0⁺`) and `v^{α,β}` (orbit of `1⁻`).
///
/// Floating parameters are first replayed in exact rational arithmetic, since
/// every float is a rational; a coding that closes up there is certified for
/// those exact parameter values. Otherwise the floating run with breakpoint
/// snapping is reported.
pub fn orbit_codings<S: Scalar>(p: &AlphaBetaParams<S>, opts: &OrbitOptions) -> Result<KneadingPair> {
    if p.alpha >= S::one() {
        return Err(Error::BadParams("orbit codings need alpha in [0, 1)".into()));
    }
    let sys = p.make_system()?;
    let k = p.k;
    let mut u = sys.virtual_itinerary(0, Side::Lower, opts);
    let mut v = sys.virtual_itinerary(k - 1, Side::Upper, opts);
    if !S::EXACT {
        if let (Some(a), Some(b)) = (p.alpha.to_rational(), p.beta.to_rational()) {
            let exact = AlphaBetaParams::<BigRational>::new(a, b)?;
            let esys = exact.make_system()?;
            let eopts = OrbitOptions { horizon: opts.horizon.min(256), ..opts.clone() };
            let eu = esys.virtual_itinerary(0, Side::Lower, &eopts);
            if eu.status == CodingStatus::Exact {
                u = Coding { prefix: eu.string.as_ref().unwrap().prefix(opts.horizon), ..eu };
            }
            let ev = esys.virtual_itinerary(k - 1, Side::Upper, &eopts);
            if ev.status == CodingStatus::Exact {
                v = Coding { prefix: ev.string.as_ref().unwrap().prefix(opts.horizon), ..ev };
            }
        }
    }
    Ok(KneadingPair { k, u, v })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StarStatus {
    Modified,
    /// Minimal period 1; the string is kept.
    PeriodOne,
    NotPeriodic,
    /// The last period symbol of `u` is already 0.
    SymbolUnderflow,
    /// The last period symbol of `v` is already `k − 1`.
    SymbolOverflow,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarStrings {
    pub u_star: EpString,
    pub v_star: EpString,
    pub u_status: StarStatus,
    pub v_status: StarStatus,
}

/// `u⋆ = a′·v` and `v⋆ = b′·u` where `a′`, `b′` decrement resp. increment the
/// last symbol of the period words `a` of `u` and `b` of `v`.
pub fn star_strings(u: &EpString, v: &EpString) -> StarStrings {
    let (u, v, k) = common_alphabet(u, v);
    let (u_star, u_status) = if !u.is_purely_periodic() {
        (u.clone(), StarStatus::NotPeriodic)
    } else if u.period_len() == 1 {
        (u.clone(), StarStatus::PeriodOne)
    } else if *u.period().last().unwrap() == 0 {
        (u.clone(), StarStatus::SymbolUnderflow)
    } else {
        let mut a = u.period().to_vec();
        *a.last_mut().unwrap() -= 1;
        (v.prepend(&a).unwrap(), StarStatus::Modified)
    };
    let (v_star, v_status) = if !v.is_purely_periodic() {
        (v.clone(), StarStatus::NotPeriodic)
    } else if v.period_len() == 1 {
        (v.clone(), StarStatus::PeriodOne)
    } else if *v.period().last().unwrap() >= k - 1 {
        (v.clone(), StarStatus::SymbolOverflow)
    } else {
        let mut b = v.period().to_vec();
        *b.last_mut().unwrap() += 1;
        (u.prepend(&b).unwrap(), StarStatus::Modified)
    };
    StarStrings { u_star, v_star, u_status, v_status }
}
