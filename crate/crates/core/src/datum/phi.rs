//! Valuations `phi` of root data built from a field valuation `nu`.

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use super::{Case, DatumError, RootDatum, RootGroupElem};
use crate::field::{FieldError, TitsField, Valuation};
use crate::groups::{norm_n, norm_r, SElem, TElem};
use crate::roots::dot;
use crate::{Quad, Value};

/// How `phi_alpha(x_alpha(t))` is read off `nu` for one length class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `nu(t)`.
    Direct,
    /// `nu(t^theta) / sqrt p`.
    Twisted,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Direct => "direct",
            Rule::Twisted => "twisted",
        })
    }
}

/// `phi_alpha(x_alpha(t))` from a class rule, plus an optional basepoint shift `alpha . x`.
pub struct PhiAssignment<'v, F: TitsField> {
    pub case: Case,
    pub rules: [Rule; 2],
    pub shift: Option<Vec<Quad>>,
    nu: &'v dyn Valuation<F>,
}

impl<'v, F: TitsField> Clone for PhiAssignment<'v, F> {
    fn clone(&self) -> Self {
        PhiAssignment {
            case: self.case,
            rules: self.rules,
            shift: self.shift.clone(),
            nu: self.nu,
        }
    }
}

impl<'v, F: TitsField> PhiAssignment<'v, F> {
    pub fn build(case: Case, nu: &'v dyn Valuation<F>, rules: [Rule; 2]) -> Self {
        PhiAssignment {
            case,
            rules,
            shift: None,
            nu,
        }
    }

    /// Both ways of giving the two classes the two rules.
    pub fn candidates(case: Case, nu: &'v dyn Valuation<F>) -> [Self; 2] {
        [
            Self::build(case, nu, [Rule::Direct, Rule::Twisted]),
            Self::build(case, nu, [Rule::Twisted, Rule::Direct]),
        ]
    }

    pub fn label(&self) -> String {
        format!("class0={},class1={}", self.rules[0], self.rules[1])
    }

    pub fn nu(&self) -> &'v dyn Valuation<F> {
        self.nu
    }

    fn shift_of(&self, d: &RootDatum<'_, F>, root: usize) -> Result<Option<Quad>, DatumError> {
        match &self.shift {
            None => Ok(None),
            Some(x) => Ok(Some(dot(&d.sys.root(root)?.coords, x))),
        }
    }

    fn add_shift(v: Value, shift: Option<Quad>) -> Result<Value, DatumError> {
        match shift {
            None => Ok(v),
            Some(s) => Ok(v.try_add(&Value::Finite(s)).map_err(FieldError::from)?),
        }
    }

    /// `phi_root(x_root(t))`; `inf` at `t = 0`.
    pub fn eval(
        &self,
        d: &RootDatum<'_, F>,
        root: usize,
        t: &F::Elem,
    ) -> Result<Value, DatumError> {
        let f = d.field;
        let class = d.sys.length_class(root)? as usize;
        let v = match self.rules[class] {
            Rule::Direct => self.nu.nu(f, t)?,
            Rule::Twisted => self.nu.nu(f, &f.theta(t))?.unscale_sqrtp(),
        };
        Self::add_shift(v, self.shift_of(d, root)?)
    }

    /// Certified lower bound: the value itself, or the precision when no term of `t` is known.
    pub fn lower_bound(
        &self,
        d: &RootDatum<'_, F>,
        root: usize,
        t: &F::Elem,
    ) -> Result<Value, DatumError> {
        let f = d.field;
        if f.is_negligible(t) {
            return Self::add_shift(f.known_to(t), self.shift_of(d, root)?);
        }
        self.eval(d, root, t)
    }

    pub fn eval_elem(
        &self,
        d: &RootDatum<'_, F>,
        x: &RootGroupElem<F::Elem>,
    ) -> Result<Value, DatumError> {
        self.eval(d, x.root, &x.param)
    }

    /// The equipollent valuation `phi_alpha + alpha . x`.
    pub fn shifted(&self, x: &[Quad]) -> Self {
        let shift = match &self.shift {
            None => x.to_vec(),
            Some(old) => old.iter().zip(x).map(|(a, b)| a + b).collect(),
        };
        PhiAssignment {
            shift: Some(shift),
            ..self.clone()
        }
    }

    /// The half-space label `(alpha, phi_alpha(u))` of the points fixed by `u = x_alpha(t)`.
    pub fn fixed_halfspace(
        &self,
        d: &RootDatum<'_, F>,
        elem: &RootGroupElem<F::Elem>,
    ) -> Result<(usize, Value), DatumError> {
        Ok((elem.root, self.eval_elem(d, elem)?))
    }
}

/// `phi` on the root groups of the Moufang set: `nu(R(s, t))` in characteristic 2
/// and `nu(N(r, s, t))` in characteristic 3.
pub struct MoufangPhi<'v, F: TitsField> {
    pub case: Case,
    nu: &'v dyn Valuation<F>,
}

impl<'v, F: TitsField> MoufangPhi<'v, F> {
    pub fn new(case: Case, nu: &'v dyn Valuation<F>) -> Self {
        MoufangPhi { case, nu }
    }

    pub fn eval_s(&self, f: &F, a: &SElem<F::Elem>) -> Result<Value, FieldError> {
        self.nu.nu(f, &norm_r(f, a))
    }

    pub fn eval_t(&self, f: &F, a: &TElem<F::Elem>) -> Result<Value, FieldError> {
        self.nu.nu(f, &norm_n(f, a))
    }

    /// `nu` recovered from `phi`.
    pub fn nu_from_phi(&self) -> NuFromPhi<'_, 'v, F> {
        NuFromPhi { phi: self }
    }
}

/// `nu(t) = phi(x(0, 0, t))/2` in case G and `phi(x(0, t^theta))/2` otherwise.
pub struct NuFromPhi<'a, 'v, F: TitsField> {
    phi: &'a MoufangPhi<'v, F>,
}

impl<'a, 'v, F: TitsField> Valuation<F> for NuFromPhi<'a, 'v, F> {
    fn nu(&self, f: &F, t: &F::Elem) -> Result<Value, FieldError> {
        let v = match self.phi.case {
            Case::G => self
                .phi
                .eval_t(f, &TElem::new(f.zero(), f.zero(), t.clone()))?,
            Case::B | Case::F => self.phi.eval_s(f, &SElem::new(f.zero(), f.theta(t)))?,
        };
        let half = Quad::rational(BigRational::new(1.into(), 2.into()), f.radicand());
        Ok(v.scale_pos(&half)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnyField, FieldCfg, FieldValuation, HahnField, WeightedValuation};
    use num_traits::One;

    fn hahn(p: u32) -> HahnField {
        match FieldCfg::hahn_default(p, 1).build().unwrap() {
            AnyField::Hahn(h) => h,
            _ => unreachable!(),
        }
    }

    fn value(a: i64, b: i64, d: i64, p: u32) -> Value {
        Value::Finite(Quad::new(
            BigRational::new(a.into(), d.into()),
            BigRational::new(b.into(), d.into()),
            p,
        ))
    }

    #[test]
    fn rules_on_monomials() {
        let h = hahn(3);
        let d = RootDatum::new(Case::G, &h).unwrap();
        let one = h.coefficients().from_int(1);
        let t = h.monomial(one, h.exponent(2, 0));
        let [phi, _] = PhiAssignment::candidates(Case::G, &FieldValuation);
        assert_eq!(phi.eval(&d, 0, &t).unwrap(), value(1, 0, 1, 3));
        assert_eq!(phi.eval(&d, 1, &t).unwrap(), value(1, 0, 1, 3));
        assert_eq!(phi.eval(&d, 1, &h.zero()).unwrap(), Value::Infinity);
        let w = WeightedValuation::new(BigRational::one());
        let [a, b] = PhiAssignment::candidates(Case::G, &w);
        assert_ne!(a.eval(&d, 1, &t).unwrap(), b.eval(&d, 1, &t).unwrap());
    }

    #[test]
    fn shifts_compose_and_oppose() {
        let h = hahn(2);
        let d = RootDatum::new(Case::B, &h).unwrap();
        let one = h.coefficients().from_int(1);
        let t = h.monomial(one, h.exponent(1, 1));
        let phi = PhiAssignment::build(Case::B, &FieldValuation, [Rule::Direct, Rule::Twisted]);
        let x = vec![Quad::from_int(1, 2), Quad::sqrt_p(2)];
        let minus: Vec<Quad> = x.iter().map(|c| -c.clone()).collect();
        let zero = vec![Quad::zero(2), Quad::zero(2)];
        let back = phi.shifted(&x).shifted(&minus);
        for root in 0..d.sys.len() {
            let base = phi.eval(&d, root, &t).unwrap();
            assert_eq!(phi.shifted(&zero).eval(&d, root, &t).unwrap(), base);
            assert_eq!(back.eval(&d, root, &t).unwrap(), base);
            let neg = d.sys.negate(root).unwrap();
            let up = phi
                .shifted(&x)
                .eval(&d, root, &t)
                .unwrap()
                .try_sub_finite(base.finite().unwrap())
                .unwrap();
            let down = phi
                .shifted(&x)
                .eval(&d, neg, &t)
                .unwrap()
                .try_sub_finite(base.finite().unwrap())
                .unwrap();
            assert_eq!(up.try_add(&down).unwrap(), Value::Finite(Quad::zero(2)));
        }
        let (root, k) = phi
            .fixed_halfspace(&d, &RootGroupElem::new(2, t.clone()))
            .unwrap();
        assert_eq!((root, k), (2, phi.eval(&d, 2, &t).unwrap()));
    }

    #[test]
    fn moufang_phi_of_a_pure_t_element_is_twice_nu() {
        let h = hahn(3);
        let phi = MoufangPhi::new(Case::G, &FieldValuation);
        let one = h.coefficients().from_int(1);
        let t = h.monomial(one, h.exponent(1, 1));
        let v = phi
            .eval_t(&h, &TElem::new(h.zero(), h.zero(), t.clone()))
            .unwrap();
        assert_eq!(
            v,
            FieldValuation
                .nu(&h, &t)
                .unwrap()
                .scale_pos(&Quad::from_int(2, 3))
                .unwrap()
        );
        assert_eq!(
            phi.eval_t(&h, &TElem::new(h.zero(), h.zero(), h.zero()))
                .unwrap(),
            Value::Infinity
        );
        assert_eq!(
            phi.nu_from_phi().nu(&h, &t).unwrap(),
            FieldValuation.nu(&h, &t).unwrap()
        );
    }
}
