//! Numeric backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends
//! ship: [`Exact`], an arbitrary-precision rational with a machine-word fast
//! path, and [`Float`], a finite `f64` with a total order. Distances that may
//! be unreachable are carried as [`Dist`], which adds a single `Infinity`
//! value above every finite one.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends where arithmetic is closed and exact.
    const EXACT: bool;

    fn zero() -> Self;

    fn from_i64(v: i64) -> Self;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Square root, when the backend can represent it.
    fn sqrt(&self) -> Option<Self>;

    /// `floor(self / rhs)` as an integer-valued scalar. `rhs` must be positive.
    fn floor_div(&self, rhs: &Self) -> Self;

    /// Rounds a positive threshold so that `floor_div` by it is stable.
    fn stable_threshold(self) -> Self {
        self
    }

    fn to_f64(&self) -> f64;

    fn parse_str(s: &str) -> Result<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// Exact rational number. Integral values that fit in an `i128` stay on the
/// machine-word path; anything else is a normalized [`BigRational`].
#[derive(Clone)]
pub enum Exact {
    Int(i128),
    Frac(BigRational),
}

impl Exact {
    pub fn from_bigint(v: BigInt) -> Self {
        match v.to_i128() {
            Some(x) => Exact::Int(x),
            None => Exact::Frac(BigRational::from_integer(v)),
        }
    }

    pub fn from_ratio(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(x) = r.numer().to_i128() {
                return Exact::Int(x);
            }
        }
        Exact::Frac(r)
    }

    pub fn new_ratio(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::from_ratio(BigRational::new(numer, denom)))
    }

    pub fn to_ratio(&self) -> BigRational {
        match self {
            Exact::Int(x) => BigRational::from_integer(BigInt::from(*x)),
            Exact::Frac(r) => r.clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Exact::Int(_) => true,
            Exact::Frac(r) => r.is_integer(),
        }
    }

    /// Integer value, if this number is integral.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Exact::Int(x) => Some(BigInt::from(*x)),
            Exact::Frac(r) if r.is_integer() => Some(r.numer().clone()),
            Exact::Frac(_) => None,
        }
    }
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Exact {}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exact::Int(a), Exact::Int(b)) => a.cmp(b),
            _ => self.to_ratio().cmp(&other.to_ratio()),
        }
    }
}

impl Hash for Exact {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Normalization makes the representation canonical.
        match self {
            Exact::Int(x) => x.hash(state),
            Exact::Frac(r) => r.hash(state),
        }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Int(x) => write!(f, "{x}"),
            Exact::Frac(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exact::Frac(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        if let (Exact::Int(a), Exact::Int(b)) = (&self, &rhs) {
            if let Some(c) = a.checked_add(*b) {
                return Exact::Int(c);
            }
        }
        Exact::from_ratio(self.to_ratio() + rhs.to_ratio())
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        if let (Exact::Int(a), Exact::Int(b)) = (&self, &rhs) {
            if let Some(c) = a.checked_sub(*b) {
                return Exact::Int(c);
            }
        }
        Exact::from_ratio(self.to_ratio() - rhs.to_ratio())
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        if let (Exact::Int(a), Exact::Int(b)) = (&self, &rhs) {
            if let Some(c) = a.checked_mul(*b) {
                return Exact::Int(c);
            }
        }
        Exact::from_ratio(self.to_ratio() * rhs.to_ratio())
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        match self {
            Exact::Int(a) => match a.checked_neg() {
                Some(c) => Exact::Int(c),
                None => Exact::from_ratio(-BigRational::from_integer(BigInt::from(a))),
            },
            Exact::Frac(r) => Exact::from_ratio(-r),
        }
    }
}

impl FromStr for Exact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int =
            |t: &str| BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("not an integer: {t:?}")));
        match s.split_once('/') {
            Some((n, d)) => Exact::new_ratio(parse_int(n)?, parse_int(d)?),
            None => Ok(Exact::from_bigint(parse_int(s)?)),
        }
    }
}

impl From<i64> for Exact {
    fn from(v: i64) -> Self {
        Exact::Int(v as i128)
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Exact::Int(0)
    }

    fn from_i64(v: i64) -> Self {
        Exact::Int(v as i128)
    }

    fn abs(&self) -> Self {
        match self {
            Exact::Int(a) if *a != i128::MIN => Exact::Int(a.abs()),
            _ => Exact::from_ratio(self.to_ratio().abs()),
        }
    }

    fn sqrt(&self) -> Option<Self> {
        None
    }

    fn floor_div(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Exact::Int(a), Exact::Int(b)) => Exact::Int(a.div_floor(b)),
            _ => Exact::from_ratio((self.to_ratio() / rhs.to_ratio()).floor()),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Exact::Int(a) => *a as f64,
            Exact::Frac(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    fn parse_str(s: &str) -> Result<Self> {
        s.parse()
    }
}

/// Finite 64-bit float with a total order.
#[derive(Clone, Copy, Default)]
pub struct Float(f64);

impl Float {
    pub fn new(v: f64) -> Option<Self> {
        v.is_finite().then_some(Float(v))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<Float> for f64 {
    fn from(v: Float) -> f64 {
        v.0
    }
}

// Values are finite, so the IEEE comparisons are already total; -0.0 and
// 0.0 compare equal.
impl PartialEq for Float {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Float {}

impl PartialOrd for Float {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }

    #[inline]
    fn lt(&self, other: &Self) -> bool {
        self.0 < other.0
    }

    #[inline]
    fn le(&self, other: &Self) -> bool {
        self.0 <= other.0
    }

    #[inline]
    fn gt(&self, other: &Self) -> bool {
        self.0 > other.0
    }

    #[inline]
    fn ge(&self, other: &Self) -> bool {
        self.0 >= other.0
    }
}

impl Ord for Float {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or_else(|| self.0.total_cmp(&other.0))
    }

    #[inline]
    fn min(self, other: Self) -> Self {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }

    #[inline]
    fn max(self, other: Self) -> Self {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! float_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Float {
            type Output = Float;
            #[inline]
            fn $method(self, rhs: Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
    };
}

float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    #[inline]
    fn zero() -> Self {
        Float(0.0)
    }

    #[inline]
    fn from_i64(v: i64) -> Self {
        Float(v as f64)
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        Float(v as f64)
    }

    #[inline]
    fn abs(&self) -> Self {
        Float(self.0.abs())
    }

    fn sqrt(&self) -> Option<Self> {
        Some(Float(self.0.sqrt()))
    }

    #[inline]
    fn floor_div(&self, rhs: &Self) -> Self {
        Float((self.0 / rhs.0).floor())
    }

    /// Powers of two divide exactly, so the threshold test in the min-plus
    /// rescale never flips on a rounding error.
    fn stable_threshold(self) -> Self {
        let mut w = 1.0f64;
        while w < self.0 {
            w *= 2.0;
        }
        Float(w)
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn parse_str(s: &str) -> Result<Self> {
        let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
        Float::new(v).ok_or_else(|| Error::Parse(format!("non-finite value: {s:?}")))
    }
}

/// A scalar or the distinguished infinity. `Finite` sorts below `Infinity`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dist<S> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> Dist<S> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            Dist::Finite(v) => Some(v),
            Dist::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<S> {
        match self {
            Dist::Finite(v) => Some(v),
            Dist::Infinity => None,
        }
    }

    /// `self + w`, with infinity absorbing.
    pub fn plus(&self, w: &S) -> Dist<S> {
        match self {
            Dist::Finite(v) => Dist::Finite(v.clone() + w.clone()),
            Dist::Infinity => Dist::Infinity,
        }
    }

    pub fn plus_dist(&self, other: &Dist<S>) -> Dist<S> {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a.clone() + b.clone()),
            _ => Dist::Infinity,
        }
    }
}

impl<S: Scalar> From<Option<S>> for Dist<S> {
    fn from(v: Option<S>) -> Self {
        match v {
            Some(v) => Dist::Finite(v),
            None => Dist::Infinity,
        }
    }
}

impl<S: fmt::Display> fmt::Display for Dist<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(v) => write!(f, "{v}"),
            Dist::Infinity => f.write_str("inf"),
        }
    }
}

/// Convenience for tests and examples: an exact integer.
pub fn exact(v: i64) -> Exact {
    Exact::from_i64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_promotes_on_overflow() {
        let big = Exact::Int(i128::MAX);
        let sum = big.clone() + exact(1);
        assert!(matches!(sum, Exact::Frac(_)));
        assert_eq!(sum - exact(1), big);
    }

    #[test]
    fn exact_parse_and_display() {
        let q: Exact = "6/8".parse().unwrap();
        assert_eq!(q.to_string(), "3/4");
        let i: Exact = "-12".parse().unwrap();
        assert!(matches!(i, Exact::Int(-12)));
        let n: Exact = "8/4".parse().unwrap();
        assert!(matches!(n, Exact::Int(2)));
        assert!("1/0".parse::<Exact>().is_err());
        assert!("x".parse::<Exact>().is_err());
    }

    #[test]
    fn exact_floor_div() {
        assert_eq!(exact(7).floor_div(&exact(2)), exact(3));
        assert_eq!(exact(-7).floor_div(&exact(2)), exact(-4));
        let q: Exact = "7/2".parse().unwrap();
        assert_eq!(q.floor_div(&exact(1)), exact(3));
    }

    #[test]
    fn float_threshold_is_power_of_two() {
        assert_eq!(Float(5.0).stable_threshold().get(), 8.0);
        assert_eq!(Float(8.0).stable_threshold().get(), 8.0);
        assert_eq!(Float(0.3).stable_threshold().get(), 1.0);
    }

    #[test]
    fn dist_ordering() {
        assert!(Dist::Finite(exact(1_000_000)) < Dist::Infinity);
        assert!(Dist::Finite(exact(1)) < Dist::Finite(exact(2)));
        assert_eq!(Dist::<Exact>::Infinity.plus(&exact(1)), Dist::Infinity);
    }
}
