//! Scalar abstraction shared by every numeric routine.
//!
//! Floating types (`f32`, `f64`, [`DoubleDouble`]) give fast approximate answers;
//! [`BigRational`] and [`Algebraic`](crate::algebraic::Algebraic) are exact and
//! let orbit codings certify breakpoint hits.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

pub trait Scalar:
    Clone + PartialOrd + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// True when arithmetic and comparisons are exact.
    const EXACT: bool;

    /// Relative rounding error of one operation; zero for exact types.
    fn unit_roundoff() -> f64;

    /// Lossless conversion to a rational, when the value is rational.
    fn to_rational(&self) -> Option<BigRational>;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite value")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits")
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn unit_roundoff() -> f64 {
        f32::EPSILON as f64 / 2.0
    }
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn unit_roundoff() -> f64 {
        0.0
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Double-double number (about 106 significand bits) on top of [`TwoFloat`].
///
/// `TwoFloat` division forms its residual `1 − b·(1/b)` without a fused
/// multiply-add, which leaves quotients accurate to double precision only.
/// Division here adds one correction step `q + (a − q·b)/b`, using the
/// accurate double-double product and difference.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(pub TwoFloat);

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        DoubleDouble(TwoFloat::from(x))
    }

    pub fn hi(&self) -> f64 {
        self.0.hi()
    }

    pub fn lo(&self) -> f64 {
        self.0.lo()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

macro_rules! dd_op {
    ($tr:ident, $m:ident) => {
        impl $tr for DoubleDouble {
            type Output = DoubleDouble;
            fn $m(self, o: DoubleDouble) -> DoubleDouble {
                DoubleDouble($tr::$m(self.0, o.0))
            }
        }
    };
}

dd_op!(Add, add);
dd_op!(Sub, sub);
dd_op!(Mul, mul);

impl Div for DoubleDouble {
    type Output = DoubleDouble;
    fn div(self, o: DoubleDouble) -> DoubleDouble {
        let q = self.0 / o.0;
        if !q.is_valid() || q.hi() == 0.0 {
            return DoubleDouble(q);
        }
        let r = self.0 - q * o.0;
        DoubleDouble(q + r / o.0)
    }
}

impl Rem for DoubleDouble {
    type Output = DoubleDouble;
    fn rem(self, o: DoubleDouble) -> DoubleDouble {
        let t = (self / o).0.trunc();
        DoubleDouble(self.0 - t * o.0)
    }
}

impl Neg for DoubleDouble {
    type Output = DoubleDouble;
    fn neg(self) -> DoubleDouble {
        DoubleDouble(-self.0)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble(TwoFloat::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0 && self.0.lo() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble(TwoFloat::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(DoubleDouble::new)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        Some(DoubleDouble(TwoFloat::from(n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(DoubleDouble(TwoFloat::from(n)))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(DoubleDouble::new(x))
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.hi() + self.0.lo())
    }
}

impl Scalar for DoubleDouble {
    const EXACT: bool = false;
    fn unit_roundoff() -> f64 {
        // 106 significand bits
        2f64.powi(-105)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(BigRational::from_float(self.hi())? + BigRational::from_float(self.lo())?)
    }
}

pub fn abs<S: Scalar>(x: &S) -> S {
    if *x < S::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn min<S: Scalar>(a: &S, b: &S) -> S {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

pub fn max<S: Scalar>(a: &S, b: &S) -> S {
    if b > a {
        b.clone()
    } else {
        a.clone()
    }
}

pub fn clamp<S: Scalar>(x: &S, lo: &S, hi: &S) -> S {
    if x < lo {
        lo.clone()
    } else if x > hi {
        hi.clone()
    } else {
        x.clone()
    }
}

pub fn half<S: Scalar>() -> S {
    S::one() / S::from_int(2)
}

/// Smallest integer `n` with `x <= n`, decided with exact comparisons.
pub fn ceil_int<S: Scalar>(x: &S) -> i64 {
    let guess = x.to_f64_lossy();
    let mut n = if guess.is_finite() { guess.ceil() as i64 } else { 0 };
    while S::from_int(n) < *x {
        n += 1;
    }
    while S::from_int(n - 1) >= *x {
        n -= 1;
    }
    n
}

pub fn is_zero<S: Scalar>(x: &S) -> bool {
    x.is_zero()
}
