//! Valuation handles: maps from field elements to `Q(sqrt p) + {inf}`.

use num_rational::BigRational;
use num_traits::Zero;

use super::hahn::{HahnField, HahnSeries};
use super::{FieldError, TitsField};
use crate::{Quad, Value};

pub trait Valuation<F: TitsField>: Send + Sync {
    fn nu(&self, field: &F, a: &F::Elem) -> Result<Value, FieldError>;
}

/// The field's own valuation (trivial on finite fields, least exponent on Hahn series).
#[derive(Clone, Copy, Debug, Default)]
pub struct FieldValuation;

impl<F: TitsField> Valuation<F> for FieldValuation {
    fn nu(&self, field: &F, a: &F::Elem) -> Result<Value, FieldError> {
        field.val(a)
    }
}

/// Monomial valuation `(a + b sqrt p)/D -> (a + w b)/D`, minimized over the support.
///
/// It is a valuation on exactly known elements, but `nu(theta x)` is rational
/// while `sqrt(p) nu(x)` is not, so it is never theta-invariant.
#[derive(Clone, Debug)]
pub struct WeightedValuation {
    weight: BigRational,
}

impl WeightedValuation {
    pub fn new(weight: BigRational) -> Self {
        WeightedValuation { weight }
    }
}

impl Valuation<HahnField> for WeightedValuation {
    fn nu(&self, field: &HahnField, a: &HahnSeries) -> Result<Value, FieldError> {
        if !a.is_exact() {
            return Err(FieldError::InsufficientPrecision(
                "weighted valuation needs an exactly known element".into(),
            ));
        }
        let d = BigRational::from_integer(field.denom().into());
        let best = a
            .terms()
            .iter()
            .map(|(e, _)| {
                (BigRational::from_integer(e.a.into())
                    + &self.weight * BigRational::from_integer(e.b.into()))
                    / &d
            })
            .min();
        Ok(match best {
            None => Value::Infinity,
            Some(v) => Value::Finite(Quad::new(v, BigRational::zero(), field.p() as u32)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnyField, FieldCfg};
    use num_traits::One;

    #[test]
    fn weighted_valuation_is_multiplicative_but_not_theta_invariant() {
        let h = match FieldCfg::hahn_default(2, 1).build().unwrap() {
            AnyField::Hahn(h) => h,
            _ => unreachable!(),
        };
        let w = WeightedValuation::new(BigRational::one());
        let one = h.coefficients().from_int(1);
        let a = h.exact(vec![(h.exponent(2, 0), one), (h.exponent(0, 1), one)]);
        let b = h.exact(vec![(h.exponent(1, 1), one)]);
        let nab = w.nu(&h, &h.mul(&a, &b)).unwrap();
        let sum = w
            .nu(&h, &a)
            .unwrap()
            .try_add(&w.nu(&h, &b).unwrap())
            .unwrap();
        assert_eq!(nab, sum);
        let t = h.exact(vec![(h.exponent(2, 0), one)]);
        let lhs = w.nu(&h, &h.theta(&t)).unwrap();
        let rhs = w.nu(&h, &t).unwrap().scale_sqrtp();
        assert_ne!(lhs, rhs);
        assert_eq!(
            FieldValuation.nu(&h, &h.theta(&t)).unwrap(),
            FieldValuation.nu(&h, &t).unwrap().scale_sqrtp()
        );
    }
}
