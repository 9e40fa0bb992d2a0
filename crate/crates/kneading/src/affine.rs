//! Piecewise affine interval maps `T(x) = s_j x + c_j` on `I_j = (a_j, a_{j+1})`
//! and their clamped inverse branches `φ̄ʲ`.
//!
//! `φ̄ʲ(t) = clamp(f_j⁻¹(t), a_j, a_{j+1})` for both increasing and decreasing
//! branches. Compositions of such maps stay of the form
//! `t ↦ clamp(A t + B, L, H)`, see [`ClampAffine`], which gives closed forms for
//! periodic tails and cheap forward evaluation of every `φ̄ₙ`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{abs, clamp, max, min, Scalar};
use crate::strings::{compare, EpString, SignVector, Symbol, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct Branch<S> {
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> Branch<S> {
    pub fn new(slope: S, intercept: S) -> Self {
        Branch { slope, intercept }
    }

    pub fn apply(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }

    pub fn inverse(&self, t: &S) -> S {
        (t.clone() - self.intercept.clone()) / self.slope.clone()
    }
}

/// The map `t ↦ clamp(a·t + b, lo, hi)` with `lo ≤ hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClampAffine<S> {
    pub a: S,
    pub b: S,
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> ClampAffine<S> {
    pub fn identity() -> Self {
        // unbounded clamps are not representable; [0, 1] is the only domain used
        ClampAffine { a: S::one(), b: S::zero(), lo: S::zero(), hi: S::one() }
    }

    pub fn eval(&self, t: &S) -> S {
        clamp(&(self.a.clone() * t.clone() + self.b.clone()), &self.lo, &self.hi)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &ClampAffine<S>) -> ClampAffine<S> {
        let p = self.a.clone() * inner.lo.clone() + self.b.clone();
        let q = self.a.clone() * inner.hi.clone() + self.b.clone();
        let (l, h) = if p <= q { (p, q) } else { (q, p) };
        ClampAffine {
            a: self.a.clone() * inner.a.clone(),
            b: self.a.clone() * inner.b.clone() + self.b.clone(),
            lo: clamp(&l, &self.lo, &self.hi),
            hi: clamp(&h, &self.lo, &self.hi),
        }
    }

    /// Unique fixed point when `|a| < 1`.
    pub fn fixed_point(&self) -> Option<S> {
        if abs(&self.a) >= S::one() {
            return None;
        }
        let y = self.b.clone() / (S::one() - self.a.clone());
        Some(clamp(&y, &self.lo, &self.hi))
    }
}

/// Certified bracket around `lim φ̄ₙ(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enclosure<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Enclosure<S> {
    pub fn width(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn mid(&self) -> S {
        (self.lo.clone() + self.hi.clone()) / S::from_int(2)
    }

    pub fn contains(&self, y: &S) -> bool {
        self.lo <= *y && *y <= self.hi
    }

    pub fn shifted(&self, d: &S) -> Enclosure<S> {
        Enclosure { lo: self.lo.clone() + d.clone(), hi: self.hi.clone() + d.clone() }
    }
}

/// The two possible cluster points `y↑ ≤ y↓` of a non-convergent `φ̄ₙ(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterPair<S> {
    pub y_up: S,
    pub y_down: S,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PhiLimit<S> {
    Enclosure { enclosure: Enclosure<S>, horizon: usize },
    NonContractive { cluster: ClusterPair<S>, horizon: usize },
}

impl<S: Scalar> PhiLimit<S> {
    /// Enclosure of every value the limit can take.
    pub fn bounds(&self) -> Enclosure<S> {
        match self {
            PhiLimit::Enclosure { enclosure, .. } => enclosure.clone(),
            PhiLimit::NonContractive { cluster, .. } => {
                Enclosure { lo: cluster.y_up.clone(), hi: cluster.y_down.clone() }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Validity {
    ValidBySlope,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// Approached from the right.
    Lower,
    /// Approached from the left.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CodingStatus {
    /// Periodicity certified by exact arithmetic.
    Exact,
    /// The orbit closed up after tolerance-based breakpoint snapping.
    ProbablyPeriodic,
    /// No repetition found within the horizon.
    Prefix,
    /// Rounding error reached the distance to a breakpoint.
    PrecisionExhausted,
}

/// One-sided orbit coding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coding {
    /// Known symbols, up to the requested horizon.
    pub prefix: Vec<Symbol>,
    /// Full string when the orbit closed up.
    pub string: Option<EpString>,
    pub status: CodingStatus,
}

impl Coding {
    pub fn is_periodic(&self) -> bool {
        self.string.is_some()
    }

    pub fn is_certified(&self) -> bool {
        self.status == CodingStatus::Exact
    }

    /// Agreement with `x` on every known symbol.
    pub fn agrees_with(&self, x: &EpString) -> bool {
        match &self.string {
            Some(s) => s.preperiod() == x.preperiod() && s.period() == x.period(),
            None => self.prefix.iter().enumerate().all(|(i, &c)| x.symbol(i) == c),
        }
    }
}

impl fmt::Display for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.string {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "{}…", Word(self.prefix.clone())),
        }
    }
}

/// Tolerances for orbit tracking.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitOptions {
    pub horizon: usize,
    /// Floating point distance below which a point counts as a breakpoint hit.
    pub hit_tol: f64,
    /// Initial absolute uncertainty of tracked points; defaults to a few ulps.
    pub start_err: Option<f64>,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { horizon: 64, hit_tol: 1e-9, start_err: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// Interval map with affine branches on the unit interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseAffineSystem<S> {
    breakpoints: Vec<S>,
    branches: Vec<Branch<S>>,
    signs: SignVector,
}

enum Located {
    Interior(usize),
    Breakpoint(usize),
    Ambiguous,
}

impl<S: Scalar> PiecewiseAffineSystem<S> {
    pub fn new(breakpoints: Vec<S>, branches: Vec<Branch<S>>) -> Result<Self> {
        let k = branches.len();
        if k < 2 {
            return Err(Error::InvalidSystem("need at least two branches".into()));
        }
        if breakpoints.len() != k + 1 {
            return Err(Error::InvalidSystem(format!(
                "{} branches need {} breakpoints, got {}",
                k,
                k + 1,
                breakpoints.len()
            )));
        }
        if !breakpoints[0].is_zero() || !breakpoints[k].is_one() {
            return Err(Error::InvalidSystem("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSystem("breakpoints must increase strictly".into()));
        }
        if branches.iter().any(|b| b.slope.is_zero()) {
            return Err(Error::InvalidSystem("slopes must be nonzero".into()));
        }
        let slack = S::from_f64_lossy(64.0 * S::unit_roundoff());
        let mut images = Vec::with_capacity(k);
        for (j, b) in branches.iter().enumerate() {
            let p = b.apply(&breakpoints[j]);
            let q = b.apply(&breakpoints[j + 1]);
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            if lo < -slack.clone() || hi > S::one() + slack.clone() {
                return Err(Error::InvalidSystem(format!("branch {j} leaves the unit interval")));
            }
            images.push((lo, hi));
        }
        // covering: the closed images must cover [0, 1]
        images.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let mut reach = S::zero();
        for (lo, hi) in &images {
            if *lo > reach.clone() + slack.clone() {
                return Err(Error::InvalidSystem("branch images do not cover the interval".into()));
            }
            reach = max(&reach, hi);
        }
        if reach < S::one() - slack {
            return Err(Error::InvalidSystem("branch images do not cover the interval".into()));
        }
        let signs = SignVector::new(branches.iter().map(|b| if b.slope > S::zero() { 1 } else { -1 }).collect())?;
        Ok(PiecewiseAffineSystem { breakpoints, branches, signs })
    }

    pub fn k(&self) -> usize {
        self.branches.len()
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn branches(&self) -> &[Branch<S>] {
        &self.branches
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    pub fn min_abs_slope(&self) -> S {
        self.branches.iter().map(|b| abs(&b.slope)).reduce(|a, b| min(&a, &b)).unwrap()
    }

    pub fn validity_check(&self) -> Validity {
        if self.min_abs_slope() > S::one() {
            Validity::ValidBySlope
        } else {
            Validity::Unknown
        }
    }

    fn near_breakpoint(&self, x: &S, tol: f64) -> Option<usize> {
        let tol = S::from_f64_lossy(tol);
        self.breakpoints.iter().position(|a| abs(&(x.clone() - a.clone())) <= tol)
    }

    fn interior_branch(&self, x: &S) -> usize {
        (0..self.k()).find(|&j| *x < self.breakpoints[j + 1]).unwrap_or(self.k() - 1)
    }

    /// `T(x)` for `x` in the open interval and away from the breakpoints.
    pub fn apply_t(&self, x: &S, singular_tol: f64) -> Result<S> {
        let xf = x.to_f64_lossy();
        if *x <= S::zero() || *x >= S::one() {
            return Err(Error::OutOfDomain(xf));
        }
        if self.near_breakpoint(x, singular_tol).is_some() {
            return Err(Error::SingularPoint(xf));
        }
        Ok(self.branches[self.interior_branch(x)].apply(x))
    }

    /// First `n` symbols of the itinerary of `x`.
    pub fn itinerary(&self, x: &S, n: usize, singular_tol: f64) -> Result<Word> {
        if *x <= S::zero() || *x >= S::one() {
            return Err(Error::OutOfDomain(x.to_f64_lossy()));
        }
        let mut y = x.clone();
        let mut out = Vec::with_capacity(n);
        for m in 0..n {
            if self.near_breakpoint(&y, singular_tol).is_some() {
                return Err(Error::SingularOrbit(m));
            }
            let j = self.interior_branch(&y);
            out.push(j as Symbol);
            y = self.branches[j].apply(&y);
        }
        Ok(Word(out))
    }

    /// `φ̄ʲ` as a clamped affine map of the seed `t ∈ [0, 1]`.
    pub fn branch_map(&self, j: Symbol) -> ClampAffine<S> {
        let j = j as usize;
        let b = &self.branches[j];
        ClampAffine {
            a: S::one() / b.slope.clone(),
            b: -b.intercept.clone() / b.slope.clone(),
            lo: self.breakpoints[j].clone(),
            hi: self.breakpoints[j + 1].clone(),
        }
    }

    /// `φ̄(j + t)`.
    pub fn phi_bar_branch(&self, j: Symbol, t: &S) -> S {
        let j = j as usize;
        clamp(&self.branches[j].inverse(t), &self.breakpoints[j], &self.breakpoints[j + 1])
    }

    /// `φ̄ₙ(w₀, …, w_{n−1} + t)`, evaluated from the innermost symbol.
    pub fn phi_bar_n(&self, w: &[Symbol], t: &S) -> S {
        w.iter().rev().fold(t.clone(), |acc, &j| self.phi_bar_branch(j, &acc))
    }

    /// Composition `φ̄^{w₀} ∘ ⋯ ∘ φ̄^{w_{n−1}}`.
    pub fn compose(&self, w: &[Symbol]) -> ClampAffine<S> {
        w.iter().fold(ClampAffine::identity(), |acc, &j| acc.after(&self.branch_map(j)))
    }

    /// Exact value of `φ̄_∞(x)` from the fixed point of the period map, when
    /// the period map contracts.
    pub fn phi_bar_infty_closed(&self, x: &EpString) -> Option<S> {
        let tail = self.compose(x.period()).fixed_point()?;
        Some(self.phi_bar_n(x.preperiod(), &tail))
    }

    /// `lim φ̄ₙ(x)`: an enclosure from the seeds `t = 0` and `t = 1` when every
    /// branch expands, otherwise the cluster points `(y↑, y↓)` at the horizon
    /// cap.
    pub fn phi_bar_infty(&self, x: &EpString, tol: f64, horizon_cap: usize) -> PhiLimit<S> {
        let m = self.min_abs_slope().to_f64_lossy();
        if m > 1.0 {
            let n = ((1.0 / tol).ln() / m.ln()).ceil().max(1.0) as usize + 1;
            let n = n.min(horizon_cap.max(1));
            let w = x.prefix(n);
            let a = self.phi_bar_n(&w, &S::zero());
            let b = self.phi_bar_n(&w, &S::one());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let slack = if S::EXACT {
                S::zero()
            } else {
                let amp = (n as f64).min(1.0 / (1.0 - 1.0 / m) + 1.0);
                S::from_f64_lossy(8.0 * S::unit_roundoff() * amp)
            };
            let enclosure = Enclosure { lo: max(&(lo - slack.clone()), &S::zero()), hi: min(&(hi + slack), &S::one()) };
            return PhiLimit::Enclosure { enclosure, horizon: n };
        }
        let n = horizon_cap.max(1);
        let x0 = x.first() as usize;
        let mut y_up = self.breakpoints[x0].clone();
        let mut y_down = self.breakpoints[x0 + 1].clone();
        let mut f = ClampAffine::identity();
        let mut sign = 1i8;
        for i in 0..n {
            let s = x.symbol(i);
            f = f.after(&self.branch_map(s));
            sign *= self.signs.get(s);
            let val = f.eval(&S::zero());
            if sign > 0 {
                y_up = val;
            } else {
                y_down = val;
            }
        }
        PhiLimit::NonContractive { cluster: ClusterPair { y_up, y_down }, horizon: n }
    }

    fn locate(&self, x: &S, hit_tol: f64, err: f64) -> Located {
        if S::EXACT {
            if let Some(m) = self.breakpoints.iter().position(|a| a == x) {
                return Located::Breakpoint(m);
            }
            return Located::Interior(self.interior_branch(x));
        }
        let mut best = (usize::MAX, f64::INFINITY);
        for (m, a) in self.breakpoints.iter().enumerate() {
            let d = abs(&(x.clone() - a.clone())).to_f64_lossy();
            if d < best.1 {
                best = (m, d);
            }
        }
        if best.1 <= hit_tol {
            Located::Breakpoint(best.0)
        } else if best.1 <= err {
            Located::Ambiguous
        } else {
            Located::Interior(self.interior_branch(x))
        }
    }

    /// Coding of the one-sided orbit of `start` approached from `side`.
    ///
    /// At a breakpoint `a_m` approached from the right the symbol is `m` and
    /// the orbit continues from `f_m(a_m)`; from the left it is `m − 1` and the
    /// orbit continues from `f_{m−1}(a_m)`. Decreasing branches swap the side.
    pub fn one_sided_coding(&self, start: &S, side: Side, opts: &OrbitOptions) -> Coding {
        let k = self.k();
        let u = S::unit_roundoff();
        let err0 = opts.start_err.unwrap_or(16.0 * u);
        let mut err = err0;
        let mut x = start.clone();
        let mut side = side;
        let mut states: Vec<(S, Side, f64)> = Vec::new();
        let mut out: Vec<Symbol> = Vec::new();
        let max_slope = self.branches.iter().map(|b| abs(&b.slope).to_f64_lossy()).fold(0.0, f64::max);
        while out.len() < opts.horizon {
            if !S::EXACT {
                x = clamp(&x, &S::zero(), &S::one());
            }
            let (point, is_bp) = match self.locate(&x, opts.hit_tol, err) {
                Located::Ambiguous => {
                    return Coding { prefix: out, string: None, status: CodingStatus::PrecisionExhausted };
                }
                Located::Breakpoint(m) => {
                    x = self.breakpoints[m].clone();
                    err = err0;
                    (m, true)
                }
                Located::Interior(j) => (j, false),
            };
            let approx = x.to_f64_lossy();
            let seen =
                states.iter().position(|(y, s, a)| *s == side && (!S::EXACT || (a - approx).abs() < 1e-9) && *y == x);
            if let Some(i) = seen {
                let s = EpString::new(out[..i].to_vec(), out[i..].to_vec(), k as u32).unwrap();
                let status = if S::EXACT { CodingStatus::Exact } else { CodingStatus::ProbablyPeriodic };
                let prefix = s.prefix(opts.horizon);
                return Coding { prefix, string: Some(s), status };
            }
            states.push((x.clone(), side, approx));
            let (sym, branch) = if is_bp {
                let m = point;
                let from_right = match side {
                    Side::Lower => m < k,
                    Side::Upper => m == 0,
                };
                if from_right {
                    (m, m)
                } else {
                    (m - 1, m - 1)
                }
            } else {
                (point, point)
            };
            out.push(sym as Symbol);
            let b = &self.branches[branch];
            x = b.apply(&x);
            if b.slope < S::zero() {
                side = match side {
                    Side::Lower => Side::Upper,
                    Side::Upper => Side::Lower,
                };
            }
            if !S::EXACT {
                err = max_slope * err + 4.0 * u;
            }
        }
        Coding { prefix: out, string: None, status: CodingStatus::Prefix }
    }

    /// Virtual itinerary `uʲ = lim_{x↓a_j} i(x)` (lower) or
    /// `vʲ = lim_{x↑a_{j+1}} i(x)` (upper).
    pub fn virtual_itinerary(&self, j: Symbol, side: Side, opts: &OrbitOptions) -> Coding {
        match side {
            Side::Lower => self.one_sided_coding(&self.breakpoints[j as usize], Side::Lower, opts),
            Side::Upper => self.one_sided_coding(&self.breakpoints[j as usize + 1], Side::Upper, opts),
        }
    }

    /// Checks `u^{xₙ} ≺ σⁿx ≺ v^{xₙ}` over every distinct shift of `x`.
    pub fn membership(&self, x: &EpString, opts: &OrbitOptions) -> Membership {
        let mut boundary = false;
        for s in x.shifts() {
            let j = s.first();
            let lower = self.virtual_itinerary(j, Side::Lower, opts);
            let upper = self.virtual_itinerary(j, Side::Upper, opts);
            match self.cmp_coding(&s, &lower) {
                Ordering::Less => return Membership::Outside,
                Ordering::Equal => boundary = true,
                Ordering::Greater => {}
            }
            match self.cmp_coding(&s, &upper) {
                Ordering::Greater => return Membership::Outside,
                Ordering::Equal => boundary = true,
                Ordering::Less => {}
            }
        }
        if boundary {
            Membership::Boundary
        } else {
            Membership::Inside
        }
    }

    fn cmp_coding(&self, x: &EpString, c: &Coding) -> Ordering {
        if let Some(s) = &c.string {
            return compare(x, s, &self.signs);
        }
        let mut sign = 1i8;
        for (i, &b) in c.prefix.iter().enumerate() {
            let a = x.symbol(i);
            if a != b {
                let o = a.cmp(&b);
                return if sign > 0 { o } else { o.reverse() };
            }
            sign *= self.signs.get(a);
        }
        Ordering::Equal
    }

    /// Text record: `k`, breakpoints, then one `slope intercept` line per branch.
    pub fn to_record(&self) -> String {
        let mut s = format!("k {}\nbreakpoints", self.k());
        for a in &self.breakpoints {
            s.push_str(&format!(" {a}"));
        }
        s.push('\n');
        for b in &self.branches {
            s.push_str(&format!("branch {} {}\n", b.slope, b.intercept));
        }
        s
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut k = None;
        let mut bps = Vec::new();
        let mut branches = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("k") => {
                    k = Some(
                        toks.next()
                            .and_then(|t| t.parse::<usize>().ok())
                            .ok_or_else(|| Error::Parse("bad k line".into()))?,
                    )
                }
                Some("breakpoints") => {
                    bps = toks.map(parse_number::<S>).collect::<Result<Vec<_>>>()?;
                }
                Some("branch") => {
                    let v = toks.map(parse_number::<S>).collect::<Result<Vec<_>>>()?;
                    if v.len() != 2 {
                        return Err(Error::Parse("branch needs slope and intercept".into()));
                    }
                    let mut v = v.into_iter();
                    branches.push(Branch::new(v.next().unwrap(), v.next().unwrap()));
                }
                Some(other) => return Err(Error::Parse(format!("unknown record key {other:?}"))),
                None => {}
            }
        }
        if k != Some(branches.len()) {
            return Err(Error::Parse("k does not match the number of branches".into()));
        }
        PiecewiseAffineSystem::new(bps, branches)
    }
}

/// Decimal literal or rational `p/q`.
pub fn parse_number<S: Scalar>(tok: &str) -> Result<S> {
    let bad = || Error::Parse(format!("bad number {tok:?}"));
    if let Some((p, q)) = tok.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(S::from_int(p) / S::from_int(q));
    }
    if let Ok(n) = tok.parse::<i64>() {
        return Ok(S::from_int(n));
    }
    let x: f64 = tok.parse().map_err(|_| bad())?;
    if !x.is_finite() {
        return Err(bad());
    }
    Ok(S::from_f64_lossy(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling() -> PiecewiseAffineSystem<f64> {
        PiecewiseAffineSystem::new(vec![0.0, 0.5, 1.0], vec![Branch::new(2.0, 0.0), Branch::new(2.0, -1.0)]).unwrap()
    }

    fn folded() -> PiecewiseAffineSystem<f64> {
        PiecewiseAffineSystem::new(vec![0.0, 0.5, 1.0], vec![Branch::new(-2.0, 1.0), Branch::new(2.0, -1.0)]).unwrap()
    }

    fn golden_mean() -> PiecewiseAffineSystem<f64> {
        let b = (1.0 + 5f64.sqrt()) / 2.0;
        PiecewiseAffineSystem::new(vec![0.0, 1.0 / b, 1.0], vec![Branch::new(b, 0.0), Branch::new(b, -1.0)]).unwrap()
    }

    #[test]
    fn apply_t_examples() {
        assert!((doubling().apply_t(&0.3, 1e-12).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(doubling().apply_t(&0.5, 1e-12), Err(Error::SingularPoint(0.5)));
        assert!((folded().apply_t(&0.2, 1e-12).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn branch_inverse_examples() {
        let d = doubling();
        assert_eq!(d.phi_bar_branch(1, &0.0), 0.5);
        assert_eq!(d.phi_bar_branch(0, &1.0), 0.5);
        assert!((folded().phi_bar_branch(0, &0.3) - 0.35).abs() < 1e-15);
        assert_eq!(d.phi_bar_n(&[1], &0.0), 0.5);
        assert_eq!(d.phi_bar_n(&[1, 0], &0.0), 0.5);
        assert_eq!(d.phi_bar_n(&[0, 1], &1.0), 0.5);
    }

    #[test]
    fn composition_matches_direct_evaluation() {
        let f = folded();
        let w = [0, 1, 1, 0, 0, 1];
        let c = f.compose(&w);
        for t in [0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((c.eval(&t) - f.phi_bar_n(&w, &t)).abs() < 1e-15);
        }
    }

    #[test]
    fn limits_on_doubling() {
        let d = doubling();
        for (s, want) in [("(10)", 2.0 / 3.0), ("(1)", 1.0), ("(0)", 0.0)] {
            let x: EpString = s.parse().unwrap();
            let e = d.phi_bar_infty(&x, 1e-12, 1_000_000).bounds();
            assert!(e.lo <= want && want <= e.hi && e.hi - e.lo <= 1e-12, "{s}: {e:?}");
            assert!((d.phi_bar_infty_closed(&x).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn itinerary_examples() {
        let d = doubling();
        assert_eq!(d.itinerary(&0.3, 3, 1e-12).unwrap(), Word::from("010"));
        assert_eq!(d.itinerary(&0.5, 3, 1e-12), Err(Error::SingularOrbit(0)));
        assert_eq!(d.itinerary(&0.25, 3, 1e-12), Err(Error::SingularOrbit(1)));
    }

    #[test]
    fn validity_examples() {
        assert_eq!(doubling().validity_check(), Validity::ValidBySlope);
        let slope_one =
            PiecewiseAffineSystem::new(vec![0.0, 0.5, 1.0], vec![Branch::new(1.0, 0.5), Branch::new(2.0, -1.0)])
                .unwrap();
        assert_eq!(slope_one.validity_check(), Validity::Unknown);
    }

    #[test]
    fn virtual_itinerary_examples() {
        let opts = OrbitOptions { horizon: 4, ..Default::default() };
        let d = doubling();
        assert_eq!(d.virtual_itinerary(0, Side::Lower, &opts).prefix, vec![0, 0, 0, 0]);
        assert_eq!(d.virtual_itinerary(1, Side::Upper, &opts).prefix, vec![1, 1, 1, 1]);
        let g = golden_mean();
        let v = g.virtual_itinerary(1, Side::Upper, &opts);
        assert_eq!(v.prefix, vec![1, 0, 1, 0]);
        assert_eq!(v.string, Some("(10)".parse().unwrap()));
        assert_eq!(v.status, CodingStatus::ProbablyPeriodic);
    }

    #[test]
    fn membership_examples() {
        let opts = OrbitOptions::default();
        assert_eq!(doubling().membership(&"(01)".parse().unwrap(), &opts), Membership::Inside);
        assert_eq!(doubling().membership(&"(0)".parse().unwrap(), &opts), Membership::Boundary);
        assert_eq!(golden_mean().membership(&"(11)".parse().unwrap(), &opts), Membership::Outside);
    }

    #[test]
    fn non_contractive_cluster_points() {
        let s = PiecewiseAffineSystem::new(vec![0.0, 0.5, 1.0], vec![Branch::new(1.0, 0.5), Branch::new(2.0, -1.0)])
            .unwrap();
        let x: EpString = "(0)".parse().unwrap();
        match s.phi_bar_infty(&x, 1e-12, 1000) {
            PhiLimit::NonContractive { cluster, .. } => {
                assert!(cluster.y_up <= cluster.y_down);
                assert!(cluster.y_up >= 0.0 && cluster.y_down <= 0.5);
            }
            other => panic!("expected cluster pair, got {other:?}"),
        }
    }

    #[test]
    fn record_round_trip() {
        let d = doubling();
        let r = d.to_record();
        let back = PiecewiseAffineSystem::<f64>::from_record(&r).unwrap();
        assert_eq!(back, d);
        let q =
            PiecewiseAffineSystem::<f64>::from_record("k 2\nbreakpoints 0 1/2 1\nbranch 2 0\nbranch 2 -1\n").unwrap();
        assert_eq!(q, d);
    }

    #[test]
    fn invalid_systems_are_rejected() {
        assert!(PiecewiseAffineSystem::new(vec![0.0, 0.5, 1.0], vec![Branch::new(3.0, 0.0), Branch::new(2.0, -1.0)])
            .is_err());
        assert!(PiecewiseAffineSystem::new(vec![0.0, 0.5, 1.0], vec![Branch::new(1.0, 0.0), Branch::new(1.0, -0.5)])
            .is_err());
    }
}
