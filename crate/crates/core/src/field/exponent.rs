//! Exponents `(a + b sqrt p) / D` of truncated Hahn series.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::Quad;

/// Numerators of `(a + b sqrt p) / D`; the denominator lives in the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub a: i64,
    pub b: i64,
    pub p: u8,
}

impl Exponent {
    pub const fn new(a: i64, b: i64, p: u8) -> Self {
        Exponent { a, b, p }
    }

    pub const fn zero(p: u8) -> Self {
        Exponent { a: 0, b: 0, p }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Sign of `a + b sqrt p`.
    pub fn signum(&self) -> i8 {
        let sa = self.a.signum() as i8;
        let sb = self.b.signum() as i8;
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        let a2 = (self.a as i128) * (self.a as i128);
        let pb2 = (self.p as i128) * (self.b as i128) * (self.b as i128);
        match a2.cmp(&pb2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Multiplication by `sqrt p`.
    pub fn scale_sqrtp(self) -> Self {
        Exponent::new(self.p as i64 * self.b, self.a, self.p)
    }

    /// Multiplication by `m + n sqrt p`.
    pub fn scale(self, m: i64, n: i64) -> Self {
        let p = self.p as i64;
        Exponent::new(m * self.a + n * p * self.b, m * self.b + n * self.a, self.p)
    }

    pub fn to_quad(self, denom: u32) -> Quad {
        let d = BigInt::from(denom);
        Quad::new(
            BigRational::new(self.a.into(), d.clone()),
            BigRational::new(self.b.into(), d),
            self.p as u32,
        )
    }

    /// Inverse of [`Exponent::to_quad`]; `None` if `q` is outside `(1/D) Z[sqrt p]`.
    pub fn from_quad(q: &Quad, denom: u32) -> Option<Self> {
        let d = BigRational::from_integer(denom.into());
        let a = q.rat() * &d;
        let b = q.irr() * &d;
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        let conv = |x: &BigRational| -> Option<i64> { i64::try_from(x.to_integer()).ok() };
        if q.irr().is_zero() {
            return Some(Exponent::new(conv(&a)?, 0, q.radicand() as u8));
        }
        Some(Exponent::new(conv(&a)?, conv(&b)?, q.radicand() as u8))
    }

    pub fn to_f64(self, denom: u32) -> f64 {
        (self.a as f64 + self.b as f64 * (self.p as f64).sqrt()) / denom as f64
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent::new(self.a + o.a, self.b + o.b, self.p)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent::new(self.a - o.a, self.b - o.b, self.p)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent::new(-self.a, -self.b, self.p)
    }
}

/// Formats as the rational literal accepted by the element grammar, given `D`.
pub struct ExpDisplay(pub Exponent, pub u32);

impl fmt::Display for ExpDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.0.to_quad(self.1);
        if q.irr().is_zero() {
            write!(f, "{}", q.rat())
        } else if q.irr() < &BigRational::zero() {
            write!(f, "{}-{}r{}", q.rat(), -q.irr(), self.0.p)
        } else {
            write!(f, "{}+{}r{}", q.rat(), q.irr(), self.0.p)
        }
    }
}
