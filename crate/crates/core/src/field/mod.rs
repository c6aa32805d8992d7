//! Fields of characteristic 2 or 3 with a Tits endomorphism `theta`
//! (`theta^2` is the Frobenius map) and a valuation.
//!
//! Two models implement [`TitsField`]: the finite fields `GF(p^m)` with odd
//! `m`, carrying the trivial valuation, and truncated Hahn series over them,
//! whose valuation satisfies `val(theta(x)) = sqrt(p) * val(x)`.

pub mod exponent;
pub mod gf;
pub mod hahn;
mod parse;
pub mod valuation;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::scalar::ScalarError;
use crate::{Quad, Value};

pub use exponent::Exponent;
pub use gf::{FiniteField, Gf};
pub use hahn::{HahnField, HahnSeries};
pub use valuation::{FieldValuation, Valuation, WeightedValuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent {0} is not in the value group")]
    ExponentNotInGroup(String),
    #[error("invalid field configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Arithmetic shared by both field models.
///
/// Equality of elements is [`TitsField::congruent`]: exact for finite
/// fields, agreement below the joint precision for Hahn series.
pub trait TitsField: Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn characteristic(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn theta(&self, a: &Self::Elem) -> Self::Elem;
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
    fn val(&self, a: &Self::Elem) -> Result<Value, FieldError>;
    /// Certified zero test.
    fn is_zero(&self, a: &Self::Elem) -> Result<bool, FieldError>;
    /// True when no nonzero term is known (exact zero or lost to truncation).
    fn is_negligible(&self, a: &Self::Elem) -> bool;
    fn congruent(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, text: &str) -> Result<Self::Elem, FieldError>;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn radicand(&self) -> u32 {
        self.characteristic()
    }

    /// Exponent below which every term of `a` is known; infinite for exact elements.
    fn known_to(&self, _a: &Self::Elem) -> Value {
        Value::Infinity
    }

    /// The element with the same known terms and nothing beyond them unknown.
    fn exact_part(&self, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let a = self.sample(rng);
            if !self.is_negligible(&a) {
                return a;
            }
        }
    }

    /// `a^e` by repeated squaring; negative `e` inverts first.
    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem, FieldError> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    /// `a^m * theta(a)^n`, the meaning of the formal exponent `m + n theta`.
    fn twisted_pow(&self, a: &Self::Elem, m: i64, n: i64) -> Result<Self::Elem, FieldError> {
        let x = self.pow(a, m)?;
        if n == 0 {
            return Ok(x);
        }
        let y = self.pow(&self.theta(a), n)?;
        Ok(self.mul(&x, &y))
    }
}

impl TitsField for FiniteField {
    type Elem = Gf;

    fn characteristic(&self) -> u32 {
        FiniteField::characteristic(self)
    }
    fn zero(&self) -> Gf {
        Gf::ZERO
    }
    fn one(&self) -> Gf {
        Gf::ONE
    }
    fn from_int(&self, n: i64) -> Gf {
        FiniteField::from_int(self, n)
    }
    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        FiniteField::add(self, *a, *b)
    }
    fn neg(&self, a: &Gf) -> Gf {
        FiniteField::neg(self, *a)
    }
    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        FiniteField::mul(self, *a, *b)
    }
    fn inv(&self, a: &Gf) -> Result<Gf, FieldError> {
        FiniteField::inv(self, *a)
    }
    fn theta(&self, a: &Gf) -> Gf {
        FiniteField::theta(self, *a)
    }
    fn frobenius(&self, a: &Gf) -> Gf {
        FiniteField::frobenius(self, *a)
    }
    fn val(&self, a: &Gf) -> Result<Value, FieldError> {
        Ok(if a.is_zero() {
            Value::Infinity
        } else {
            Value::Finite(Quad::zero(self.radicand()))
        })
    }
    fn is_zero(&self, a: &Gf) -> Result<bool, FieldError> {
        Ok(a.is_zero())
    }
    fn is_negligible(&self, a: &Gf) -> bool {
        a.is_zero()
    }
    fn congruent(&self, a: &Gf, b: &Gf) -> bool {
        a == b
    }
    fn format_elem(&self, a: &Gf) -> String {
        self.format(*a)
    }
    fn parse_elem(&self, text: &str) -> Result<Gf, FieldError> {
        self.parse(text, 0)
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.gen_range(0..self.order()) as u16)
    }
    fn pow(&self, a: &Gf, e: i64) -> Result<Gf, FieldError> {
        FiniteField::pow(self, *a, e)
    }
}

impl TitsField for HahnField {
    type Elem = HahnSeries;

    fn characteristic(&self) -> u32 {
        self.p() as u32
    }
    fn zero(&self) -> HahnSeries {
        self.exact(Vec::new())
    }
    fn one(&self) -> HahnSeries {
        self.from_int(1)
    }
    fn from_int(&self, n: i64) -> HahnSeries {
        let c = self.coefficients().from_int(n);
        self.exact(vec![(Exponent::zero(self.p()), c)])
    }
    fn add(&self, a: &HahnSeries, b: &HahnSeries) -> HahnSeries {
        HahnField::add(self, a, b)
    }
    fn neg(&self, a: &HahnSeries) -> HahnSeries {
        HahnField::neg(self, a)
    }
    fn mul(&self, a: &HahnSeries, b: &HahnSeries) -> HahnSeries {
        HahnField::mul(self, a, b)
    }
    fn inv(&self, a: &HahnSeries) -> Result<HahnSeries, FieldError> {
        HahnField::inv(self, a)
    }
    fn theta(&self, a: &HahnSeries) -> HahnSeries {
        HahnField::theta(self, a)
    }
    fn frobenius(&self, a: &HahnSeries) -> HahnSeries {
        HahnField::frobenius(self, a)
    }
    fn val(&self, a: &HahnSeries) -> Result<Value, FieldError> {
        HahnField::val(self, a)
    }
    fn is_zero(&self, a: &HahnSeries) -> Result<bool, FieldError> {
        Ok(self.val(a)?.is_infinite())
    }
    fn is_negligible(&self, a: &HahnSeries) -> bool {
        a.terms().is_empty()
    }
    fn exact_part(&self, a: &HahnSeries) -> HahnSeries {
        self.exact(a.terms().to_vec())
    }
    fn known_to(&self, a: &HahnSeries) -> Value {
        a.precision()
            .map_or(Value::Infinity, |p| Value::Finite(p.to_quad(self.denom())))
    }
    fn congruent(&self, a: &HahnSeries, b: &HahnSeries) -> bool {
        HahnField::congruent(self, a, b)
    }
    fn format_elem(&self, a: &HahnSeries) -> String {
        self.format(a)
    }
    fn parse_elem(&self, text: &str) -> Result<HahnSeries, FieldError> {
        parse::parse_series(self, text)
    }
    /// One or two terms with exponents `(a + b sqrt p)/D`, `a` in `[0, 2D)`, `b` in `{0, 1}`;
    /// zero one time in eight.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HahnSeries {
        if rng.gen_ratio(1, 8) {
            return self.zero();
        }
        let d = self.denom() as i64;
        let k = rng.gen_range(1..=2);
        let terms = (0..k)
            .map(|_| {
                let b = rng.gen_range(0..=1i64);
                let a = rng.gen_range(0..2 * d);
                let coef = Gf(rng.gen_range(1..self.coefficients().order()) as u16);
                (self.exponent(a, b), coef)
            })
            .collect();
        // Cancelling terms would leave an inexact zero.
        let a = self.truncated(terms);
        if self.is_negligible(&a) {
            self.zero()
        } else {
            a
        }
    }
}

/// Which model to build, and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldMode {
    Finite,
    Hahn { denom: u32, precision: Quad },
}

/// Field configuration: characteristic, coefficient degree `m` (odd), and mode.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCfg {
    pub char: u32,
    pub m: u32,
    pub mode: FieldMode,
}

impl FieldCfg {
    pub fn finite(char: u32, m: u32) -> Self {
        FieldCfg {
            char,
            m,
            mode: FieldMode::Finite,
        }
    }

    /// Hahn series with denominator 2 and precision 40.
    pub fn hahn_default(char: u32, m: u32) -> Self {
        FieldCfg {
            char,
            m,
            mode: FieldMode::Hahn {
                denom: 2,
                precision: Quad::from_int(40, char),
            },
        }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if self.char != 2 && self.char != 3 {
            return Err(FieldError::Config(format!(
                "characteristic {} is not 2 or 3",
                self.char
            )));
        }
        if self.m.is_multiple_of(2) {
            return Err(FieldError::Config(format!("degree {} must be odd", self.m)));
        }
        if let FieldMode::Hahn { denom, precision } = &self.mode {
            if *denom == 0 {
                return Err(FieldError::Config("denominator D must be positive".into()));
            }
            if !precision.is_positive() {
                return Err(FieldError::Config("precision must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<AnyField, FieldError> {
        self.validate()?;
        let gf = FiniteField::new(self.char, self.m)?;
        Ok(match &self.mode {
            FieldMode::Finite => AnyField::Finite(gf),
            FieldMode::Hahn { denom, precision } => {
                AnyField::Hahn(HahnField::new(gf, *denom, precision)?)
            }
        })
    }
}

/// A built field of either model.
#[derive(Clone, Debug)]
pub enum AnyField {
    Finite(FiniteField),
    Hahn(HahnField),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn hahn(p: u32, m: u32) -> HahnField {
        match FieldCfg::hahn_default(p, m).build().unwrap() {
            AnyField::Hahn(h) => h,
            _ => unreachable!(),
        }
    }

    #[test]
    fn twisted_pow_exponent_bookkeeping() {
        let h = hahn(2, 1);
        let t = h.parse_elem("1*t^(1)").unwrap();
        let x = h.twisted_pow(&t, 2, 1).unwrap();
        assert_eq!(
            h.val(&x).unwrap(),
            Value::Finite("2 + 1 r2".parse().unwrap())
        );
        assert!(h.congruent(&h.twisted_pow(&t, 0, 0).unwrap(), &h.one()));
        let mut rng = stream(7, "twisted", 0);
        for _ in 0..50 {
            let a = h.sample_nonzero(&mut rng);
            let g = h.val(&a).unwrap();
            for (m, n) in [(2, 1), (-1, 0), (0, -1), (1, 1), (-2, 1)] {
                let v = h.val(&h.twisted_pow(&a, m, n).unwrap()).unwrap();
                let k = Quad::from_int(m, 2)
                    + Quad::sqrt_p(2).scale(&num_rational::BigRational::from_integer(n.into()));
                assert_eq!(v.finite().unwrap(), &(g.finite().unwrap() * &k));
            }
        }
    }

    #[test]
    fn theta_squared_is_frobenius() {
        let mut rng = stream(1, "theta2", 0);
        let f = FiniteField::new(2, 5).unwrap();
        let h = hahn(3, 3);
        for _ in 0..200 {
            let a = TitsField::sample(&f, &mut rng);
            assert_eq!(f.theta(f.theta(a)), f.pow(a, 2).unwrap());
            let b = h.sample(&mut rng);
            assert!(h.congruent(&h.theta(&h.theta(&b)), &h.pow(&b, 3).unwrap()));
        }
    }

    #[test]
    fn config_validation() {
        assert!(FieldCfg::finite(5, 1).build().is_err());
        assert!(FieldCfg::finite(2, 4).build().is_err());
        let bad = FieldCfg {
            char: 2,
            m: 1,
            mode: FieldMode::Hahn {
                denom: 2,
                precision: Quad::zero(2),
            },
        };
        assert!(bad.build().is_err());
        let off_lattice = FieldCfg {
            char: 2,
            m: 1,
            mode: FieldMode::Hahn {
                denom: 2,
                precision: "1/3 + 0 r2".parse().unwrap(),
            },
        };
        assert!(matches!(
            off_lattice.build(),
            Err(FieldError::ExponentNotInGroup(_))
        ));
    }
}
