//! Exact ordered arithmetic in `Q(sqrt p)` and the extended value type.
//!
//! A [`QuadExt`] is `rat + irr * sqrt(radicand)` with both components taken
//! from a rational-like scalar `R`. The exact instantiation used throughout
//! the crate is [`Quad`](crate::Quad) (`R = BigRational`); `R = f64` gives a
//! cheap approximate twin that is handy for cross-checking comparisons.
//!
//! Values with different radicands never mix: the fallible `try_*` methods
//! return [`ScalarError::RadicandMismatch`], and the operator impls panic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("radicand mismatch: {0} vs {1}")]
    RadicandMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar literal {0:?}: {1}")]
    Parse(String, String),
}

/// Component type of a [`QuadExt`].
pub trait Scalar:
    Clone + Num + Signed + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display
{
}

impl<T> Scalar for T where
    T: Clone + Num + Signed + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display
{
}

/// `rat + irr * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt<R> {
    rat: R,
    irr: R,
    radicand: u32,
}

impl<R: Scalar> QuadExt<R> {
    pub fn new(rat: R, irr: R, radicand: u32) -> Self {
        QuadExt { rat, irr, radicand }
    }

    pub fn rational(rat: R, radicand: u32) -> Self {
        Self::new(rat, R::zero(), radicand)
    }

    pub fn from_int(n: i64, radicand: u32) -> Self {
        Self::rational(R::from_i64(n).expect("integer fits scalar"), radicand)
    }

    pub fn zero(radicand: u32) -> Self {
        Self::new(R::zero(), R::zero(), radicand)
    }

    pub fn one(radicand: u32) -> Self {
        Self::new(R::one(), R::zero(), radicand)
    }

    /// `sqrt(radicand)` itself.
    pub fn sqrt_p(radicand: u32) -> Self {
        Self::new(R::zero(), R::one(), radicand)
    }

    pub fn rat(&self) -> &R {
        &self.rat
    }

    pub fn irr(&self) -> &R {
        &self.irr
    }

    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    fn p(&self) -> R {
        R::from_u32(self.radicand).expect("radicand fits scalar")
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.radicand == other.radicand {
            Ok(())
        } else {
            Err(ScalarError::RadicandMismatch(self.radicand, other.radicand))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(Self::new(
            self.rat.clone() + other.rat.clone(),
            self.irr.clone() + other.irr.clone(),
            self.radicand,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(Self::new(
            self.rat.clone() - other.rat.clone(),
            self.irr.clone() - other.irr.clone(),
            self.radicand,
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let (a, b, c, d) = (&self.rat, &self.irr, &other.rat, &other.irr);
        let rat = a.clone() * c.clone() + self.p() * b.clone() * d.clone();
        let irr = a.clone() * d.clone() + b.clone() * c.clone();
        Ok(Self::new(rat, irr, self.radicand))
    }

    /// Division by rationalizing with the conjugate of the divisor.
    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let norm = other.norm();
        if norm.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let num = self.try_mul(&other.conj())?;
        Ok(Self::new(
            num.rat / norm.clone(),
            num.irr / norm,
            self.radicand,
        ))
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        Self::one(self.radicand).try_div(self)
    }

    /// `rat - irr * sqrt(p)`.
    pub fn conj(&self) -> Self {
        Self::new(self.rat.clone(), -self.irr.clone(), self.radicand)
    }

    /// Field norm `rat^2 - p * irr^2`; zero only for zero.
    pub fn norm(&self) -> R {
        self.rat.clone() * self.rat.clone() - self.p() * self.irr.clone() * self.irr.clone()
    }

    /// Multiplication by `sqrt(p)`: `(rat, irr) -> (p * irr, rat)`.
    pub fn scale_sqrtp(&self) -> Self {
        Self::new(self.p() * self.irr.clone(), self.rat.clone(), self.radicand)
    }

    /// Division by `sqrt(p)`.
    pub fn unscale_sqrtp(&self) -> Self {
        Self::new(self.irr.clone(), self.rat.clone() / self.p(), self.radicand)
    }

    pub fn scale(&self, k: &R) -> Self {
        Self::new(
            self.rat.clone() * k.clone(),
            self.irr.clone() * k.clone(),
            self.radicand,
        )
    }

    /// Exact sign: `-1`, `0` or `1`.
    pub fn signum_i8(&self) -> i8 {
        let sx = sign_of(&self.rat);
        let sy = sign_of(&self.irr);
        if sy == 0 {
            return sx;
        }
        if sx == 0 {
            return sy;
        }
        if sx == sy {
            return sx;
        }
        // Opposite signs: the larger of |x| and |y| sqrt p wins.
        let x2 = self.rat.clone() * self.rat.clone();
        let py2 = self.p() * self.irr.clone() * self.irr.clone();
        match x2.partial_cmp(&py2) {
            Some(Ordering::Greater) => sx,
            Some(Ordering::Less) => sy,
            _ => 0,
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ScalarError> {
        let d = self.try_sub(other)?;
        Ok(d.signum_i8().cmp(&0))
    }

    pub fn is_positive(&self) -> bool {
        self.signum_i8() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum_i8() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if *self <= *other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let x = self.rat.to_f64().unwrap_or(f64::NAN);
        let y = self.irr.to_f64().unwrap_or(f64::NAN);
        x + y * f64::from(self.radicand).sqrt()
    }
}

fn sign_of<R: Scalar>(x: &R) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl<R: Scalar> PartialOrd for QuadExt<R> {
    /// `None` when the radicands differ.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<R: Scalar> $trait for QuadExt<R> {
            type Output = QuadExt<R>;
            fn $method(self, rhs: Self) -> Self::Output {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a, R: Scalar> $trait<&'a QuadExt<R>> for &'a QuadExt<R> {
            type Output = QuadExt<R>;
            fn $method(self, rhs: &'a QuadExt<R>) -> Self::Output {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<R: Scalar> Neg for QuadExt<R> {
    type Output = QuadExt<R>;
    fn neg(self) -> Self::Output {
        QuadExt::new(-self.rat, -self.irr, self.radicand)
    }
}

impl<R: Scalar> fmt::Display for QuadExt<R> {
    /// Textual form `a/b + c/d rP`; the `+` becomes `-` for a negative
    /// irrational part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_negative() {
            write!(f, "{} - {} r{}", self.rat, self.irr.abs(), self.radicand)
        } else {
            write!(f, "{} + {} r{}", self.rat, self.irr, self.radicand)
        }
    }
}

/// Parses `"a/b + c/d r2"`, `"a/b - c/d r3"`, `"c/d r2"` or a bare rational.
/// A bare rational needs the radicand from context, so it takes `default_radicand`.
pub fn parse_quad(text: &str, default_radicand: u32) -> Result<crate::Quad, ScalarError> {
    let err = |msg: &str| ScalarError::Parse(text.to_string(), msg.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty literal"));
    }
    let Some(rpos) = s.rfind('r') else {
        let rat = parse_rational(&s).ok_or_else(|| err("bad rational"))?;
        return Ok(crate::Quad::rational(rat, default_radicand));
    };
    let radicand: u32 = s[rpos + 1..].parse().map_err(|_| err("bad radicand"))?;
    if radicand != 2 && radicand != 3 {
        return Err(err("radicand must be 2 or 3"));
    }
    let head = &s[..rpos];
    // Split at the last sign that is not in leading position and not part of "+-".
    let bytes = head.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'+' && bytes[i - 1] != b'-' {
            split = Some(i);
            break;
        }
    }
    let (rat, irr) = match split {
        None => (
            BigRational::zero(),
            parse_rational(head).ok_or_else(|| err("bad coefficient"))?,
        ),
        Some(i) => {
            let rat = parse_rational(&head[..i]).ok_or_else(|| err("bad rational part"))?;
            let sign = if bytes[i] == b'-' {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            let irr = parse_rational(&head[i + 1..]).ok_or_else(|| err("bad irrational part"))?;
            (rat, sign * irr)
        }
    };
    Ok(crate::Quad::new(rat, irr, radicand))
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n).ok()?;
        let d = BigInt::from_str(d).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(BigInt::from_str(s).ok()?))
    }
}

impl FromStr for crate::Quad {
    type Err = ScalarError;
    /// Requires the explicit `rP` suffix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.contains('r') {
            return Err(ScalarError::Parse(
                s.to_string(),
                "missing radicand suffix".into(),
            ));
        }
        parse_quad(s, 0)
    }
}

/// A value in `Q(sqrt p)` extended by `+infinity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtVal<R> {
    Finite(QuadExt<R>),
    Infinity,
}

impl<R: Scalar> ExtVal<R> {
    pub fn finite(&self) -> Option<&QuadExt<R>> {
        match self {
            ExtVal::Finite(x) => Some(x),
            ExtVal::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtVal::Infinity)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        match (self, other) {
            (ExtVal::Finite(a), ExtVal::Finite(b)) => Ok(ExtVal::Finite(a.try_add(b)?)),
            _ => Ok(ExtVal::Infinity),
        }
    }

    /// `self - other` for finite `other`.
    pub fn try_sub_finite(&self, other: &QuadExt<R>) -> Result<Self, ScalarError> {
        match self {
            ExtVal::Finite(a) => Ok(ExtVal::Finite(a.try_sub(other)?)),
            ExtVal::Infinity => Ok(ExtVal::Infinity),
        }
    }

    /// Multiplication by a strictly positive finite coefficient.
    pub fn scale_pos(&self, k: &QuadExt<R>) -> Result<Self, ScalarError> {
        match self {
            ExtVal::Finite(a) => Ok(ExtVal::Finite(a.try_mul(k)?)),
            ExtVal::Infinity => Ok(ExtVal::Infinity),
        }
    }

    pub fn scale_sqrtp(&self) -> Self {
        match self {
            ExtVal::Finite(a) => ExtVal::Finite(a.scale_sqrtp()),
            ExtVal::Infinity => ExtVal::Infinity,
        }
    }

    pub fn unscale_sqrtp(&self) -> Self {
        match self {
            ExtVal::Finite(a) => ExtVal::Finite(a.unscale_sqrtp()),
            ExtVal::Infinity => ExtVal::Infinity,
        }
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ScalarError> {
        match (self, other) {
            (ExtVal::Infinity, ExtVal::Infinity) => Ok(Ordering::Equal),
            (ExtVal::Infinity, _) => Ok(Ordering::Greater),
            (_, ExtVal::Infinity) => Ok(Ordering::Less),
            (ExtVal::Finite(a), ExtVal::Finite(b)) => a.try_cmp(b),
        }
    }
}

impl<R: Scalar> PartialOrd for ExtVal<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl<R: Scalar> From<QuadExt<R>> for ExtVal<R> {
    fn from(x: QuadExt<R>) -> Self {
        ExtVal::Finite(x)
    }
}

impl<R: Scalar> fmt::Display for ExtVal<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtVal::Finite(x) => write!(f, "{x}"),
            ExtVal::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Quad;

    fn q(a: i64, b: i64, p: u32) -> Quad {
        Quad::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            p,
        )
    }

    fn qr(an: i64, ad: i64, bn: i64, bd: i64, p: u32) -> Quad {
        Quad::new(
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
            p,
        )
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(q(1, 1, 2) * q(1, -1, 2), q(-1, 0, 2));
    }

    #[test]
    fn sqrt_three_squared() {
        assert_eq!(q(0, 1, 3) * q(0, 1, 3), q(3, 0, 3));
    }

    #[test]
    fn reciprocal_by_conjugate() {
        let inv = q(1, 0, 2).try_div(&q(1, 1, 2)).unwrap();
        assert_eq!(inv, q(-1, 1, 2));
        assert_eq!(inv * q(1, 1, 2), Quad::one(2));
    }

    #[test]
    fn errors() {
        assert_eq!(
            q(1, 0, 2).try_div(&Quad::zero(2)),
            Err(ScalarError::DivisionByZero)
        );
        assert_eq!(
            q(1, 0, 2).try_add(&q(1, 0, 3)),
            Err(ScalarError::RadicandMismatch(2, 3))
        );
        assert!(q(1, 0, 2).partial_cmp(&q(1, 0, 3)).is_none());
    }

    #[test]
    fn comparisons() {
        assert_eq!(
            Quad::sqrt_p(2).try_cmp(&qr(3, 2, 0, 1, 2)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            q(3, -2, 2).try_cmp(&Quad::zero(2)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(q(1, 1, 3).try_cmp(&q(1, 1, 3)).unwrap(), Ordering::Equal);
        assert!(q(-2, 1, 3).is_negative());
        assert!(q(2, -1, 3).is_positive());
    }

    #[test]
    fn sqrtp_scaling() {
        assert_eq!(Quad::one(2).scale_sqrtp(), Quad::sqrt_p(2));
        assert_eq!(Quad::sqrt_p(2).scale_sqrtp(), Quad::from_int(2, 2));
        assert_eq!(q(3, 2, 3).scale_sqrtp(), q(6, 3, 3));
        assert_eq!(q(6, 3, 3).unscale_sqrtp(), q(3, 2, 3));
    }

    #[test]
    fn textual_form() {
        let x = qr(1, 2, -3, 4, 2);
        let text = x.to_string();
        assert_eq!(text, "1/2 - 3/4 r2");
        assert_eq!(text.parse::<Quad>().unwrap(), x);
        assert_eq!("2 + 1 r3".parse::<Quad>().unwrap(), q(2, 1, 3));
        assert_eq!("1/2+1/2r2".parse::<Quad>().unwrap(), qr(1, 2, 1, 2, 2));
        assert_eq!("-1 r2".parse::<Quad>().unwrap(), q(0, -1, 2));
        assert_eq!(parse_quad("40", 3).unwrap(), q(40, 0, 3));
        assert!("1 + 1 r5".parse::<Quad>().is_err());
        assert!("1/0 + 1 r2".parse::<Quad>().is_err());
    }

    #[test]
    fn extended_values() {
        let inf = ExtVal::<BigRational>::Infinity;
        let one = ExtVal::Finite(Quad::one(2));
        assert!(inf > one);
        assert_eq!(inf.try_add(&one).unwrap(), ExtVal::Infinity);
        assert_eq!(inf.min_of(&one), one);
        assert_eq!(one.min_of(&inf), one);
    }

    #[test]
    fn float_twin_agrees() {
        let x = QuadExt::<f64>::new(3.0, -2.0, 2);
        assert!(x.signum_i8() > 0);
        assert!((x.to_f64() - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }
}
