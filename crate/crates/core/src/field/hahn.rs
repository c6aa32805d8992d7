//! Truncated Hahn series over `GF(p^m)` with exponents in `(1/D) Z[sqrt p]`.
//!
//! Every element carries an absolute precision: terms at or beyond it are
//! unknown. Exactly known elements (finite sums) carry no bound. Results are
//! never allowed to claim more than the configured precision, which keeps
//! intermediate series finite.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::{FxHashMap, FxHashSet};

use super::exponent::{ExpDisplay, Exponent};
use super::gf::{FiniteField, Gf};
use super::FieldError;
use crate::{Quad, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HahnSeries {
    /// Strictly increasing exponents, nonzero coefficients, all below `prec`.
    terms: Vec<(Exponent, Gf)>,
    /// `None` for an exactly known element.
    prec: Option<Exponent>,
}

impl HahnSeries {
    pub fn terms(&self) -> &[(Exponent, Gf)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<Exponent> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn leading(&self) -> Option<(Exponent, Gf)> {
        self.terms.first().copied()
    }
}

#[derive(Clone, Debug)]
pub struct HahnField {
    gf: FiniteField,
    p: u8,
    denom: u32,
    precision: Exponent,
}

/// Dense accumulators are used up to this many cells regardless of the pair count.
const DENSE_CELLS: usize = 1 << 16;
/// Hard cap on the dense accumulator.
const MAX_DENSE_CELLS: usize = 1 << 23;
/// Inverses of series with more terms than this use Newton steps.
const NEWTON_TERMS: usize = 24;

/// The rectangle of exponent numerators `(a, b)` covering all pairwise sums.
struct LatticeBox {
    a0: i64,
    b0: i64,
    wb: usize,
    cells: usize,
    a_lo: (i64, i64),
}

impl LatticeBox {
    fn around(x: &[(Exponent, Gf)], y: &[(Exponent, Gf)]) -> Option<Self> {
        let range = |t: &[(Exponent, Gf)], f: fn(&Exponent) -> i64| {
            t.iter()
                .map(|e| f(&e.0))
                .fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        if x.is_empty() || y.is_empty() {
            return None;
        }
        let (xa, xb) = (range(x, |e| e.a), range(x, |e| e.b));
        let (ya, yb) = (range(y, |e| e.a), range(y, |e| e.b));
        let wa = usize::try_from(xa.1 - xa.0 + ya.1 - ya.0 + 1).ok()?;
        let wb = usize::try_from(xb.1 - xb.0 + yb.1 - yb.0 + 1).ok()?;
        let cells = wa.checked_mul(wb)?;
        Some(LatticeBox {
            a0: xa.0 + ya.0,
            b0: xb.0 + yb.0,
            wb,
            cells,
            a_lo: (xa.0, xb.0),
        })
    }

    fn cells(&self) -> usize {
        self.cells
    }

    /// Offset contributed by a term of the first factor.
    fn offset_a(&self, e: Exponent) -> usize {
        (e.a - self.a_lo.0) as usize * self.wb + (e.b - self.a_lo.1) as usize
    }

    /// Offset contributed by a term of the second factor.
    fn offset_b(&self, e: Exponent) -> usize {
        let (ya, yb) = (self.a0 - self.a_lo.0, self.b0 - self.a_lo.1);
        (e.a - ya) as usize * self.wb + (e.b - yb) as usize
    }

    fn collect(&self, acc: Vec<Gf>, p: u8) -> Vec<(Exponent, Gf)> {
        acc.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let (i, j) = (k / self.wb, k % self.wb);
                (Exponent::new(self.a0 + i as i64, self.b0 + j as i64, p), c)
            })
            .collect()
    }
}

impl HahnField {
    pub fn new(gf: FiniteField, denom: u32, precision: &Quad) -> Result<Self, FieldError> {
        let p = gf.characteristic() as u8;
        if denom == 0 {
            return Err(FieldError::Config("denominator D must be positive".into()));
        }
        if precision.radicand() != p as u32 {
            return Err(FieldError::Config(format!(
                "precision {precision} must use radicand {p}"
            )));
        }
        let prec = Exponent::from_quad(precision, denom)
            .ok_or_else(|| FieldError::ExponentNotInGroup(precision.to_string()))?;
        if prec.signum() <= 0 {
            return Err(FieldError::Config("precision must be positive".into()));
        }
        Ok(HahnField {
            gf,
            p,
            denom,
            precision: prec,
        })
    }

    pub fn coefficients(&self) -> &FiniteField {
        &self.gf
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn max_precision(&self) -> Exponent {
        self.precision
    }

    pub fn exponent(&self, a: i64, b: i64) -> Exponent {
        Exponent::new(a, b, self.p)
    }

    pub fn exact(&self, mut terms: Vec<(Exponent, Gf)>) -> HahnSeries {
        terms.retain(|t| !t.1.is_zero());
        terms.sort_by_key(|x| x.0);
        let mut merged: Vec<(Exponent, Gf)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 = self.gf.add(last.1, c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        HahnSeries {
            terms: merged,
            prec: None,
        }
    }

    /// Same terms, truncated to the configured precision.
    pub fn truncated(&self, terms: Vec<(Exponent, Gf)>) -> HahnSeries {
        let mut s = self.exact(terms);
        s.prec = Some(self.precision);
        self.normalize(s)
    }

    /// Terms known below `prec` (clamped to the configured precision).
    pub fn with_precision(&self, terms: Vec<(Exponent, Gf)>, prec: Exponent) -> HahnSeries {
        let mut s = self.exact(terms);
        s.prec = Some(prec);
        self.normalize(s)
    }

    pub fn monomial(&self, coef: Gf, e: Exponent) -> HahnSeries {
        self.exact(vec![(e, coef)])
    }

    /// Clamp the precision to the configured bound and drop unknown terms.
    fn normalize(&self, mut s: HahnSeries) -> HahnSeries {
        if let Some(p) = s.prec {
            let p = p.min(self.precision);
            s.terms.retain(|t| t.0 < p);
            s.prec = Some(p);
        }
        s
    }

    fn min_prec(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, a: &HahnSeries, b: &HahnSeries) -> HahnSeries {
        let prec = Self::min_prec(a.prec, b.prec);
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let pick = match (a.terms.get(i), b.terms.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match pick {
                std::cmp::Ordering::Less => {
                    out.push(a.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.terms[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = self.gf.add(a.terms[i].1, b.terms[j].1);
                    if !c.is_zero() {
                        out.push((a.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        self.normalize(HahnSeries { terms: out, prec })
    }

    pub fn neg(&self, a: &HahnSeries) -> HahnSeries {
        HahnSeries {
            terms: a.terms.iter().map(|&(e, c)| (e, self.gf.neg(c))).collect(),
            prec: a.prec,
        }
    }

    /// Product; an unknown tail of one factor is shifted by the valuation of the other.
    pub fn mul(&self, a: &HahnSeries, b: &HahnSeries) -> HahnSeries {
        let exact_zero = |s: &HahnSeries| s.terms.is_empty() && s.prec.is_none();
        if exact_zero(a) || exact_zero(b) {
            return HahnSeries {
                terms: Vec::new(),
                prec: None,
            };
        }
        let mut bound: Option<Exponent> = None;
        let mut tighten = |x: Exponent| bound = Some(bound.map_or(x, |y: Exponent| y.min(x)));
        if let Some(pa) = a.prec {
            if let Some((eb, _)) = b.leading() {
                tighten(pa + eb);
            }
            if let Some(pb) = b.prec {
                tighten(pa + pb);
            }
        }
        if let Some(pb) = b.prec {
            if let Some((ea, _)) = a.leading() {
                tighten(pb + ea);
            }
        }
        let bound = bound.map(|p| p.min(self.precision));
        let terms = self.mul_terms(&a.terms, &b.terms, bound);
        self.normalize(HahnSeries { terms, prec: bound })
    }

    /// Sorted product of two sorted term lists, keeping exponents below `bound`.
    fn mul_terms(
        &self,
        a: &[(Exponent, Gf)],
        b: &[(Exponent, Gf)],
        bound: Option<Exponent>,
    ) -> Vec<(Exponent, Gf)> {
        // For each term of `a`, the prefix of `b` whose sums stay below the bound.
        let mut end = b.len();
        let cut: Vec<usize> = a
            .iter()
            .map(|&(ea, _)| {
                if let Some(p) = bound {
                    while end > 0 && ea + b[end - 1].0 >= p {
                        end -= 1;
                    }
                }
                end
            })
            .collect();
        let pairs: usize = cut.iter().sum();
        let terms = match LatticeBox::around(a, b) {
            Some(grid) if grid.cells() <= DENSE_CELLS.max(4 * pairs).min(MAX_DENSE_CELLS) => {
                let offs_b: Vec<usize> = b.iter().map(|t| grid.offset_b(t.0)).collect();
                if self.gf.degree() == 1 {
                    // Prime field: codes are residues, so sum integer products and reduce once.
                    let mut acc = vec![0u32; grid.cells()];
                    let cb: Vec<u32> = b.iter().map(|t| t.1 .0 as u32).collect();
                    for (i, &(ea, ca)) in a.iter().enumerate() {
                        let base = grid.offset_a(ea);
                        let ca = ca.0 as u32;
                        for (off, c) in offs_b[..cut[i]].iter().zip(&cb) {
                            acc[base + off] += ca * c;
                        }
                    }
                    let p = self.p as u32;
                    grid.collect(
                        acc.into_iter().map(|x| Gf((x % p) as u16)).collect(),
                        self.p,
                    )
                } else {
                    let mut acc = vec![Gf::ZERO; grid.cells()];
                    for (i, &(ea, ca)) in a.iter().enumerate() {
                        let base = grid.offset_a(ea);
                        for (j, &(_, cb)) in b[..cut[i]].iter().enumerate() {
                            let slot = &mut acc[base + offs_b[j]];
                            *slot = self.gf.add(*slot, self.gf.mul(ca, cb));
                        }
                    }
                    grid.collect(acc, self.p)
                }
            }
            _ => {
                let mut acc: FxHashMap<Exponent, Gf> = FxHashMap::default();
                for (i, &(ea, ca)) in a.iter().enumerate() {
                    for &(eb, cb) in &b[..cut[i]] {
                        let slot = acc.entry(ea + eb).or_insert(Gf::ZERO);
                        *slot = self.gf.add(*slot, self.gf.mul(ca, cb));
                    }
                }
                acc.into_iter().filter(|t| !t.1.is_zero()).collect()
            }
        };
        let mut terms = terms;
        terms.sort_unstable_by_key(|x| x.0);
        terms
    }

    /// Inverse by term-by-term division along the exponent monoid of the tail.
    pub fn inv(&self, a: &HahnSeries) -> Result<HahnSeries, FieldError> {
        let Some((e0, c0)) = a.leading() else {
            return Err(match a.prec {
                None => FieldError::DivisionByZero,
                Some(p) => FieldError::InsufficientPrecision(format!(
                    "no term certified below t^({})",
                    ExpDisplay(p, self.denom)
                )),
            });
        };
        let target = match a.prec {
            None => self.precision,
            Some(p) => (p - e0 - e0).min(self.precision),
        };
        let c0_inv = self.gf.inv(c0)?;
        // u = a / (c0 t^e0) = 1 + eps, eps supported on positive exponents.
        let eps: Vec<(Exponent, Gf)> = a.terms[1..]
            .iter()
            .map(|&(e, c)| (e - e0, self.gf.mul(c, c0_inv)))
            .collect();
        // Relative bound for 1/u so that the shifted result stays below `target`.
        let rel = target + e0;
        let inverse = if eps.len() > NEWTON_TERMS {
            self.inv_newton(&eps, rel)
        } else {
            self.inv_direct(&eps, rel)
        };
        let out = inverse
            .into_iter()
            .map(|(e, c)| (e - e0, self.gf.mul(c, c0_inv)))
            .collect();
        let prec = if eps.is_empty() && a.prec.is_none() {
            None
        } else {
            Some(target)
        };
        Ok(self.normalize(HahnSeries { terms: out, prec }))
    }

    /// `1/(1 + eps)` below `rel`, coefficient by coefficient in exponent order.
    fn inv_direct(&self, eps: &[(Exponent, Gf)], rel: Exponent) -> Vec<(Exponent, Gf)> {
        let mut coeffs: FxHashMap<Exponent, Gf> = FxHashMap::default();
        let mut heap = BinaryHeap::new();
        let mut seen = FxHashSet::default();
        let zero = Exponent::zero(self.p);
        if zero < rel {
            heap.push(Reverse(zero));
            seen.insert(zero);
        }
        let mut out = Vec::new();
        while let Some(Reverse(e)) = heap.pop() {
            let c = if e.is_zero() {
                Gf::ONE
            } else {
                let mut s = Gf::ZERO;
                for &(d, cd) in eps {
                    if d > e {
                        break;
                    }
                    if let Some(&prev) = coeffs.get(&(e - d)) {
                        s = self.gf.add(s, self.gf.mul(cd, prev));
                    }
                }
                self.gf.neg(s)
            };
            if !c.is_zero() {
                coeffs.insert(e, c);
                out.push((e, c));
            }
            for &(d, _) in eps {
                let next = e + d;
                if next < rel && seen.insert(next) {
                    heap.push(Reverse(next));
                }
            }
        }
        out
    }

    /// `1/(1 + eps)` below `rel` by Newton steps `y += y (1 - u y)`, each doubling
    /// the valuation of the error.
    fn inv_newton(&self, eps: &[(Exponent, Gf)], rel: Exponent) -> Vec<(Exponent, Gf)> {
        let zero = Exponent::zero(self.p);
        if zero >= rel {
            return Vec::new();
        }
        let one = vec![(zero, Gf::ONE)];
        let mut u = one.clone();
        u.extend(eps.iter().copied().filter(|t| t.0 < rel));
        let mut y = one.clone();
        loop {
            let uy = self.mul_terms(&u, &y, Some(rel));
            let err = self.sub_terms(&one, &uy);
            if err.is_empty() {
                return y;
            }
            let step = self.mul_terms(&y, &err, Some(rel));
            y = self.add_terms(&y, &step);
        }
    }

    fn add_terms(&self, a: &[(Exponent, Gf)], b: &[(Exponent, Gf)]) -> Vec<(Exponent, Gf)> {
        self.add(
            &HahnSeries {
                terms: a.to_vec(),
                prec: None,
            },
            &HahnSeries {
                terms: b.to_vec(),
                prec: None,
            },
        )
        .terms
    }

    fn sub_terms(&self, a: &[(Exponent, Gf)], b: &[(Exponent, Gf)]) -> Vec<(Exponent, Gf)> {
        let nb: Vec<_> = b.iter().map(|&(e, c)| (e, self.gf.neg(c))).collect();
        self.add_terms(a, &nb)
    }

    /// Coefficients by the finite-field Tits map, exponents scaled by `sqrt p`.
    pub fn theta(&self, a: &HahnSeries) -> HahnSeries {
        let terms = a
            .terms
            .iter()
            .map(|&(e, c)| (e.scale_sqrtp(), self.gf.theta(c)))
            .collect();
        self.normalize(HahnSeries {
            terms,
            prec: a.prec.map(Exponent::scale_sqrtp),
        })
    }

    pub fn frobenius(&self, a: &HahnSeries) -> HahnSeries {
        let p = self.p as i64;
        let terms = a
            .terms
            .iter()
            .map(|&(e, c)| (e.scale(p, 0), self.gf.frobenius(c)))
            .collect();
        self.normalize(HahnSeries {
            terms,
            prec: a.prec.map(|e| e.scale(p, 0)),
        })
    }

    pub fn val(&self, a: &HahnSeries) -> Result<Value, FieldError> {
        match (a.leading(), a.prec) {
            (Some((e, _)), _) => Ok(Value::Finite(e.to_quad(self.denom))),
            (None, None) => Ok(Value::Infinity),
            (None, Some(p)) => Err(FieldError::InsufficientPrecision(format!(
                "valuation is at least {} but undetermined",
                ExpDisplay(p, self.denom)
            ))),
        }
    }

    /// Agreement on every term below the joint precision.
    pub fn congruent(&self, a: &HahnSeries, b: &HahnSeries) -> bool {
        let bound = Self::min_prec(a.prec, b.prec);
        let cut = |s: &HahnSeries| -> Vec<(Exponent, Gf)> {
            s.terms
                .iter()
                .copied()
                .filter(|t| bound.is_none_or(|p| t.0 < p))
                .collect()
        };
        cut(a) == cut(b)
    }

    pub fn format(&self, a: &HahnSeries) -> String {
        let mut parts: Vec<String> = a
            .terms
            .iter()
            .map(|&(e, c)| {
                let coef = self.gf.format(c);
                let coef = if coef.contains('+') {
                    format!("({coef})")
                } else {
                    coef
                };
                format!("{coef}*t^({})", ExpDisplay(e, self.denom))
            })
            .collect();
        if parts.is_empty() && a.prec.is_none() {
            return "0".into();
        }
        if let Some(p) = a.prec {
            parts.push(format!("O(t^({}))", ExpDisplay(p, self.denom)));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, m: u32) -> HahnField {
        HahnField::new(FiniteField::new(p, m).unwrap(), 2, &Quad::from_int(40, p)).unwrap()
    }

    #[test]
    fn monomial_product() {
        let h = field(2, 1);
        let a = h.monomial(Gf::ONE, h.exponent(2, 0));
        let b = h.monomial(Gf::ONE, h.exponent(0, 2));
        assert_eq!(h.mul(&a, &b), h.monomial(Gf::ONE, h.exponent(2, 2)));
    }

    #[test]
    fn geometric_series_inverse() {
        let h = field(2, 1);
        let one = h.monomial(Gf::ONE, h.exponent(0, 0));
        let t = h.monomial(Gf::ONE, h.exponent(2, 0));
        let a = h.add(&one, &t);
        let inv = h.inv(&a).unwrap();
        assert_eq!(inv.terms().len(), 40);
        assert!(inv
            .terms()
            .iter()
            .enumerate()
            .all(|(k, &(e, c))| e == h.exponent(2 * k as i64, 0) && c == Gf::ONE));
        let prod = h.mul(&a, &inv);
        assert!(h.congruent(&prod, &one));
        assert_eq!(prod.precision(), Some(h.exponent(80, 0)));
    }

    #[test]
    fn newton_and_direct_inverses_agree() {
        use rand::{Rng, SeedableRng};
        let h = field(3, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let k = rng.gen_range(1..40);
            let eps: Vec<(Exponent, Gf)> = h
                .exact(
                    (0..k)
                        .map(|_| {
                            (
                                h.exponent(rng.gen_range(1..12), rng.gen_range(0..3)),
                                Gf(rng.gen_range(1..3)),
                            )
                        })
                        .collect(),
                )
                .terms;
            let rel = h.exponent(rng.gen_range(10..60), 0);
            assert_eq!(h.inv_newton(&eps, rel), h.inv_direct(&eps, rel));
        }
    }

    #[test]
    fn theta_scales_exponents() {
        let h = field(2, 1);
        let t32 = h.monomial(Gf::ONE, h.exponent(3, 0));
        let expected = "3/2 r2".parse::<Quad>().unwrap();
        assert_eq!(h.val(&h.theta(&t32)).unwrap(), Value::Finite(expected));
    }

    #[test]
    fn uncertified_zero() {
        let h = field(3, 1);
        let a = h.truncated(vec![(h.exponent(0, 0), Gf::ONE)]);
        let z = h.add(&a, &h.neg(&a));
        assert!(matches!(
            h.val(&z),
            Err(FieldError::InsufficientPrecision(_))
        ));
        assert!(matches!(
            h.inv(&z),
            Err(FieldError::InsufficientPrecision(_))
        ));
        assert_eq!(h.inv(&h.exact(vec![])), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn format_shows_precision() {
        let h = field(3, 3);
        let g = h.coefficients().generator();
        let c = h.coefficients().add(g, Gf::ONE);
        let a = h.truncated(vec![(h.exponent(1, 1), c)]);
        assert_eq!(h.format(&a), "(g+1)*t^(1/2+1/2r3) + O(t^(40))");
        assert_eq!(h.format(&h.exact(vec![])), "0");
    }
}
