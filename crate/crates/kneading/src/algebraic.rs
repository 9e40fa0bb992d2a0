//! Exact real algebraic numbers of the form `r(θ)` where `θ` is a fixed real
//! root of a squarefree rational polynomial `P` and `r` has rational
//! coefficients.
//!
//! The root is carried as an isolating interval that is bisected on demand.
//! Zero tests are exact: `r(θ) = 0` iff `θ` is a root of `gcd(r, P)`, which is
//! decided by a sign change of the gcd on the isolating interval. Every other
//! sign is then obtained by interval evaluation and refinement, which
//! terminates because the value is known to be nonzero. `P` need not be
//! irreducible; inverses are taken modulo the cofactor that still vanishes at
//! `θ`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense polynomial with rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::default(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let inv_lead = d.lead().recip();
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv_lead;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[i + j] -= &c * b;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::default();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Interval Horner evaluation over `[lo, hi]`.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for c in self.0.iter().rev() {
            let p = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mut mn = p[0].clone();
            let mut mx = p[0].clone();
            for v in &p[1..] {
                if *v < mn {
                    mn = v.clone();
                }
                if *v > mx {
                    mx = v.clone();
                }
            }
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    /// `s` with `s * self = 1 mod m`, provided `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Poly::default(), Poly::constant(rat(1)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(s0.scale(&r0.0[0].recip()).rem(m))
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&rat(-1)));
        }
        seq
    }

    fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for p in seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }
}

#[derive(Debug)]
struct Isolation {
    lo: BigRational,
    hi: BigRational,
    /// The root turned out to be the rational `lo == hi`.
    exact: bool,
    lo_positive: bool,
}

/// A squarefree polynomial together with one of its real roots.
#[derive(Debug)]
pub struct NumberField {
    poly: Poly,
    iso: Mutex<Isolation>,
}

impl NumberField {
    /// Field generated by the unique root of `poly` in `(lo, hi]`.
    pub fn new(poly: Poly, lo: BigRational, hi: BigRational) -> Result<Arc<NumberField>> {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(Error::Algebraic("defining polynomial is constant".into()));
        }
        if lo >= hi {
            return Err(Error::Algebraic("empty isolating interval".into()));
        }
        let poly = poly.squarefree();
        let count = poly.count_roots(&lo, &hi);
        if count != 1 {
            return Err(Error::Algebraic(format!("interval holds {count} roots instead of one")));
        }
        let plo = poly.eval(&lo);
        if plo.is_zero() {
            return Err(Error::Algebraic("interval endpoint is a root".into()));
        }
        let iso = if poly.eval(&hi).is_zero() {
            Isolation { lo: hi.clone(), hi, exact: true, lo_positive: false }
        } else {
            Isolation { lo, hi, exact: false, lo_positive: plo.is_positive() }
        };
        Ok(Arc::new(NumberField { poly, iso: Mutex::new(iso) }))
    }

    /// Isolate the root of `poly` closest to `approx`, searching radii from
    /// `1e-12` up to `1e-3` relative to `max(1, |approx|)`.
    pub fn near(poly: Poly, approx: f64) -> Result<Arc<NumberField>> {
        let poly = poly.squarefree();
        let centre =
            BigRational::from_float(approx).ok_or_else(|| Error::Algebraic("non-finite approximation".into()))?;
        let scale = approx.abs().max(1.0);
        for e in [12, 11, 10, 9, 8, 7, 6, 5, 4, 3] {
            let r = BigRational::from_float(scale * 10f64.powi(-e)).unwrap();
            let (lo, hi) = (&centre - &r, &centre + &r);
            match poly.count_roots(&lo, &hi) {
                0 => continue,
                1 => {
                    if poly.eval(&lo).is_zero() {
                        continue;
                    }
                    return NumberField::new(poly, lo, hi);
                }
                _ => break,
            }
        }
        Err(Error::Algebraic(format!("no isolated root near {approx}")))
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Current isolating interval.
    pub fn interval(&self) -> (BigRational, BigRational) {
        let iso = self.iso.lock().unwrap();
        (iso.lo.clone(), iso.hi.clone())
    }

    fn refine(&self) {
        let mut iso = self.iso.lock().unwrap();
        if iso.exact {
            return;
        }
        let mid = (&iso.lo + &iso.hi) / rat(2);
        let pm = self.poly.eval(&mid);
        if pm.is_zero() {
            iso.lo = mid.clone();
            iso.hi = mid;
            iso.exact = true;
        } else if pm.is_positive() == iso.lo_positive {
            iso.lo = mid;
        } else {
            iso.hi = mid;
        }
    }

    /// Whether the root is a root of `g`, where `g` divides the defining
    /// polynomial.
    fn is_root_of_divisor(&self, g: &Poly) -> bool {
        let iso = self.iso.lock().unwrap();
        if iso.exact {
            return g.eval(&iso.lo).is_zero();
        }
        let a = g.eval(&iso.lo);
        let b = g.eval(&iso.hi);
        a.is_positive() != b.is_positive()
    }
}

fn golden_field() -> &'static Arc<NumberField> {
    static F: OnceLock<Arc<NumberField>> = OnceLock::new();
    F.get_or_init(|| NumberField::new(Poly::from_ints(&[-1, -1, 1]), rat(1), rat(2)).unwrap())
}

fn plastic_field() -> &'static Arc<NumberField> {
    static F: OnceLock<Arc<NumberField>> = OnceLock::new();
    F.get_or_init(|| NumberField::new(Poly::from_ints(&[-1, -1, 0, 1]), rat(1), rat(2)).unwrap())
}

/// Exact element `r(θ)` of a real number field, or a plain rational.
#[derive(Clone)]
pub struct Algebraic {
    c: Poly,
    field: Option<Arc<NumberField>>,
}

impl Algebraic {
    pub fn from_rational(q: BigRational) -> Self {
        Algebraic { c: Poly::constant(q), field: None }
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        Algebraic::from_poly(Poly::x(), field)
    }

    pub fn from_poly(p: Poly, field: &Arc<NumberField>) -> Self {
        let c = p.rem(&field.poly);
        Algebraic { c, field: Some(field.clone()) }
    }

    /// The golden ratio, root of `x² − x − 1` in `(1, 2)`.
    pub fn golden() -> Self {
        Algebraic::generator(golden_field())
    }

    /// The plastic number, real root of `x³ − x − 1`.
    pub fn plastic() -> Self {
        Algebraic::generator(plastic_field())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn repr(&self) -> &Poly {
        &self.c
    }

    fn common(a: &Algebraic, b: &Algebraic) -> Option<Arc<NumberField>> {
        match (&a.field, &b.field) {
            (None, f) | (f, None) => f.clone(),
            (Some(f), Some(g)) => {
                assert!(Arc::ptr_eq(f, g), "operands belong to different number fields");
                Some(f.clone())
            }
        }
    }

    fn build(c: Poly, field: Option<Arc<NumberField>>) -> Self {
        match field {
            Some(f) => {
                let c = c.rem(&f.poly);
                Algebraic { c, field: Some(f) }
            }
            None => Algebraic { c, field: None },
        }
    }

    pub fn is_zero_value(&self) -> bool {
        if self.c.is_zero() {
            return true;
        }
        let Some(f) = &self.field else { return false };
        if self.c.degree() == Some(0) {
            return false;
        }
        let g = self.c.gcd(&f.poly);
        if g.degree() == Some(0) {
            return false;
        }
        f.is_root_of_divisor(&g)
    }

    pub fn signum_exact(&self) -> Ordering {
        if self.is_zero_value() {
            return Ordering::Equal;
        }
        let Some(f) = &self.field else {
            return self.c.0[0].cmp(&BigRational::zero());
        };
        loop {
            let (lo, hi) = f.interval();
            let (a, b) = self.c.eval_interval(&lo, &hi);
            if a.is_positive() {
                return Ordering::Greater;
            }
            if b.is_negative() {
                return Ordering::Less;
            }
            f.refine();
        }
    }

    fn approx(&self) -> f64 {
        let Some(f) = &self.field else {
            return self.c.0.first().map_or(0.0, |c| c.to_f64().unwrap_or(f64::NAN));
        };
        if self.is_zero_value() {
            return 0.0;
        }
        for _ in 0..4000 {
            let (lo, hi) = f.interval();
            let (a, b) = self.c.eval_interval(&lo, &hi);
            let w = &b - &a;
            if w.is_zero() || (a.is_positive() == b.is_positive() && w < a.abs().min(b.abs()) * rat(1) / rat(1 << 60)) {
                return ((a + b) / rat(2)).to_f64().unwrap_or(f64::NAN);
            }
            f.refine();
        }
        let (lo, hi) = f.interval();
        let (a, b) = self.c.eval_interval(&lo, &hi);
        ((a + b) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn recip(&self) -> Algebraic {
        assert!(!self.is_zero_value(), "division by zero");
        match &self.field {
            None => Algebraic::from_rational(self.c.0[0].recip()),
            Some(f) => {
                let g = self.c.gcd(&f.poly);
                let m = if g.degree().unwrap_or(0) > 0 { f.poly.div_rem(&g).0 } else { f.poly.clone() };
                let inv = self.c.inverse_mod(&m).expect("coprime after removing common factor");
                Algebraic::build(inv, Some(f.clone()))
            }
        }
    }

    fn trunc_int(&self) -> Algebraic {
        let mut n = self.approx().trunc() as i64;
        let x = self.clone();
        let zero = Algebraic::zero();
        if x >= zero {
            while Algebraic::from_i64(n).unwrap() > x {
                n -= 1;
            }
            while Algebraic::from_i64(n + 1).unwrap() <= x {
                n += 1;
            }
        } else {
            while Algebraic::from_i64(n).unwrap() < x {
                n += 1;
            }
            while Algebraic::from_i64(n - 1).unwrap() >= x {
                n -= 1;
            }
        }
        Algebraic::from_i64(n).unwrap()
    }
}

impl fmt::Debug for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.0.iter().map(|c| c.to_string()).collect();
        match &self.field {
            None => write!(f, "Algebraic({})", c.first().map_or("0", |s| s.as_str())),
            Some(field) => {
                let p: Vec<String> = field.poly.0.iter().map(|c| c.to_string()).collect();
                write!(f, "Algebraic([{}] mod [{}] ≈ {})", c.join(", "), p.join(", "), self.approx())
            }
        }
    }
}

impl fmt::Display for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.approx(), f)
    }
}

impl PartialEq for Algebraic {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero_value()
    }
}

impl PartialOrd for Algebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum_exact())
    }
}

impl Add for Algebraic {
    type Output = Algebraic;
    fn add(self, o: Algebraic) -> Algebraic {
        let f = Algebraic::common(&self, &o);
        Algebraic::build(self.c.add(&o.c), f)
    }
}

impl Sub for Algebraic {
    type Output = Algebraic;
    fn sub(self, o: Algebraic) -> Algebraic {
        let f = Algebraic::common(&self, &o);
        Algebraic::build(self.c.sub(&o.c), f)
    }
}

impl Mul for Algebraic {
    type Output = Algebraic;
    fn mul(self, o: Algebraic) -> Algebraic {
        let f = Algebraic::common(&self, &o);
        Algebraic::build(self.c.mul(&o.c), f)
    }
}

impl Div for Algebraic {
    type Output = Algebraic;
    fn div(self, o: Algebraic) -> Algebraic {
        let f = Algebraic::common(&self, &o);
        let inv = o.recip();
        Algebraic::build(self.c.mul(&inv.c), f)
    }
}

impl Rem for Algebraic {
    type Output = Algebraic;
    fn rem(self, o: Algebraic) -> Algebraic {
        let q = (self.clone() / o.clone()).trunc_int();
        self - o * q
    }
}

impl Neg for Algebraic {
    type Output = Algebraic;
    fn neg(self) -> Algebraic {
        Algebraic { c: self.c.scale(&rat(-1)), field: self.field }
    }
}

impl Zero for Algebraic {
    fn zero() -> Self {
        Algebraic::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
}

impl One for Algebraic {
    fn one() -> Self {
        Algebraic::from_rational(BigRational::one())
    }
}

impl Num for Algebraic {
    type FromStrRadixErr = num_rational::ParseRatioError;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(Algebraic::from_rational)
    }
}

impl FromPrimitive for Algebraic {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Algebraic::from_rational(rat(n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Algebraic::from_rational(BigRational::from_integer(BigInt::from(n))))
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Algebraic::from_rational)
    }
}

impl ToPrimitive for Algebraic {
    fn to_i64(&self) -> Option<i64> {
        self.trunc_int().c.0.first().map_or(Some(0), |c| c.to_integer().to_i64())
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|n| u64::try_from(n).ok())
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.approx())
    }
}

impl Scalar for Algebraic {
    const EXACT: bool = true;
    fn unit_roundoff() -> f64 {
        0.0
    }
    fn to_rational(&self) -> Option<BigRational> {
        match self.c.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.c.0[0].clone()),
            _ => None,
        }
    }
}
