//! Sampled checks of the valuation axioms and of the relation tables.
//!
//! Every check draws sample `i` from `stream(seed, label, i)`; a sample whose
//! evaluation errors counts as a failure carrying the error.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::embed::{apply_rho, ree_embedding, suzuki_embedding};
use super::phi::PhiAssignment;
use super::{DatumError, RootDatum, RootGroupElem, TorusTable};
use crate::field::{FieldError, TitsField};
use crate::groups::{format_s, format_t, s_mul, t_mul, SElem, TElem};
use crate::report::{Check, Failure};
use crate::rng::par_samples;
use crate::Value;

/// Draws field elements for a check.
pub type Sampler<'a, E> = dyn Fn(&mut ChaCha8Rng) -> E + Sync + 'a;

/// The field's own nonzero samples.
pub fn nonzero<F: TitsField>(f: &F) -> impl Fn(&mut ChaCha8Rng) -> F::Elem + Sync + '_ {
    move |rng| f.sample_nonzero(rng)
}

fn settle(inputs: &str, r: Result<Option<Failure>, DatumError>) -> Option<Failure> {
    r.unwrap_or_else(|e| Some(Failure::error(inputs, e)))
}

fn scalar<T>(r: Result<T, crate::scalar::ScalarError>) -> Result<T, DatumError> {
    r.map_err(|e| DatumError::Field(FieldError::from(e)))
}

fn diff(a: &Value, b: &Value) -> Result<Value, DatumError> {
    let b = b
        .finite()
        .ok_or_else(|| DatumError::Field(FieldError::Config("infinite reference value".into())))?;
    scalar(a.try_sub_finite(b))
}

fn elem<F: TitsField>(d: &RootDatum<'_, F>, root: usize, t: &F::Elem) -> String {
    format!("x{}({})", root + 1, d.field.format_elem(t))
}

/// Ambient root groups are one-parameter, so (V1) is `phi(x(a) x(b)) >= min` and `phi(x(-a)) >= phi(x(a))`.
pub fn check_v1<F: TitsField>(
    d: &RootDatum<'_, F>,
    phi: &PhiAssignment<'_, F>,
    samples: usize,
    seed: u64,
    sample: &Sampler<'_, F::Elem>,
) -> Check {
    let f = d.field;
    let results = par_samples(samples, seed, "v1", |rng, _| {
        let root = rng.gen_range(0..d.sys.len());
        let (a, b) = (sample(rng), sample(rng));
        let inputs = format!("{}, {}", elem(d, root, &a), elem(d, root, &b));
        let r = (|| {
            let (va, vb) = (phi.eval(d, root, &a)?, phi.eval(d, root, &b)?);
            let k = va.min_of(&vb);
            let got = phi.lower_bound(d, root, &f.add(&a, &b))?;
            if got < k {
                return Ok(Some(Failure::new(
                    inputs.clone(),
                    format!("phi(product) >= {k}"),
                    got.to_string(),
                )));
            }
            let inv = phi.lower_bound(d, root, &f.neg(&a))?;
            if inv < va {
                return Ok(Some(Failure::new(
                    inputs.clone(),
                    format!("phi(inverse) >= {va}"),
                    inv.to_string(),
                )));
            }
            Ok(None)
        })();
        settle(&inputs, r)
    });
    Check::from_results("V1", None, results)
}

/// For each pair, every factor `x_gamma(c)` of `[x_alpha(s), x_beta(t)]` has
/// `phi_gamma(c) >= p phi_alpha(s) + q phi_beta(t)` with `(p, q)` from the interval.
pub fn check_v2_containment<F: TitsField>(
    d: &RootDatum<'_, F>,
    phi: &PhiAssignment<'_, F>,
    pairs: &[(usize, usize)],
    samples: usize,
    seed: u64,
    sample: &Sampler<'_, F::Elem>,
) -> Vec<Check> {
    pairs
        .iter()
        .map(|&(a, b)| {
            let label = format!("({}, {})", a + 1, b + 1);
            let interval = match d.sys.interval(a, b) {
                Ok(iv) => iv,
                Err(e) => return Check::single("V2", Some(Failure::error(&label, e))),
            };
            let results = par_samples(samples, seed, &format!("v2/{a}/{b}"), |rng, _| {
                let (s, t) = (sample(rng), sample(rng));
                let inputs = format!("{}, {}", elem(d, a, &s), elem(d, b, &t));
                let r = (|| {
                    let (vs, vt) = (phi.eval(d, a, &s)?, phi.eval(d, b, &t)?);
                    for x in d.commutator(a, &s, b, &t)? {
                        let g = interval
                            .iter()
                            .find(|g| g.root == x.root)
                            .ok_or(DatumError::IntervalShape(a, b))?;
                        let bound = scalar(
                            scalar(vs.scale_pos(&g.p))?.try_add(&scalar(vt.scale_pos(&g.q))?),
                        )?;
                        let got = phi.lower_bound(d, x.root, &x.param)?;
                        if got < bound {
                            return Ok(Some(Failure::new(
                                inputs.clone(),
                                format!("phi({}) >= {bound}", elem(d, x.root, &x.param)),
                                got.to_string(),
                            )));
                        }
                    }
                    Ok(None)
                })();
                settle(&inputs, r)
            });
            Check::from_results("V2", Some(label), results)
        })
        .collect()
}

/// `phi_{s_alpha(beta)}(g^{m(u)}) - phi_beta(g)` is one constant over `g_samples`
/// values of `g`, and equals `-2 phi_alpha(u)` when `alpha = beta`.
pub fn check_v3<F: TitsField>(
    d: &RootDatum<'_, F>,
    phi: &PhiAssignment<'_, F>,
    samples: usize,
    g_samples: usize,
    seed: u64,
    sample: &Sampler<'_, F::Elem>,
) -> Check {
    let results = par_samples(samples, seed, "v3", |rng, _| {
        let alpha = rng.gen_range(0..d.sys.len());
        let beta = rng.gen_range(0..d.sys.len());
        let u = sample(rng);
        let gs: Vec<F::Elem> = (0..g_samples).map(|_| sample(rng)).collect();
        let inputs = format!(
            "alpha={}, beta={}, u={}",
            alpha + 1,
            beta + 1,
            d.field.format_elem(&u)
        );
        let r = (|| {
            let mut first: Option<Value> = None;
            for g in &gs {
                let img = d.m_sigma(alpha, &u, &RootGroupElem::new(beta, g.clone()))?;
                let c = diff(&phi.eval_elem(d, &img)?, &phi.eval(d, beta, g)?)?;
                match &first {
                    None => first = Some(c),
                    Some(c0) if *c0 != c => {
                        return Ok(Some(Failure::new(
                            format!("{inputs}, g={}", d.field.format_elem(g)),
                            format!("constant {c0}"),
                            c.to_string(),
                        )))
                    }
                    _ => {}
                }
            }
            if alpha == beta {
                if let Some(c) = first {
                    let vu = phi.eval(d, alpha, &u)?;
                    let expected = match vu.finite() {
                        Some(q) => Value::Finite(-(q + q)),
                        None => Value::Infinity,
                    };
                    if c != expected {
                        return Ok(Some(Failure::new(
                            inputs.clone(),
                            expected.to_string(),
                            c.to_string(),
                        )));
                    }
                }
            }
            Ok(None)
        })();
        settle(&inputs, r)
    });
    Check::from_results("V3", None, results)
}

/// `phi_alpha(g^{m0 m(u)}) - phi_alpha(g) = 2 (phi_alpha(u) - phi_alpha(w))` with
/// `m0 = m(w)`, `w = x_alpha(1)`.
pub fn prop_2phi_check<F: TitsField>(
    d: &RootDatum<'_, F>,
    phi: &PhiAssignment<'_, F>,
    samples: usize,
    seed: u64,
    sample: &Sampler<'_, F::Elem>,
) -> Check {
    let f = d.field;
    let results = par_samples(samples, seed, "2phi", |rng, _| {
        let alpha = rng.gen_range(0..d.sys.len());
        let (t, u) = (sample(rng), sample(rng));
        let inputs = format!("g={}, u={}", elem(d, alpha, &t), elem(d, alpha, &u));
        let r = (|| {
            let g = RootGroupElem::new(alpha, t.clone());
            let img = d.m_sigma(alpha, &u, &d.m_conj(alpha, &g)?)?;
            if img.root != alpha {
                return Ok(Some(Failure::new(
                    inputs.clone(),
                    format!("root {}", alpha + 1),
                    format!("root {}", img.root + 1),
                )));
            }
            let got = diff(&phi.eval_elem(d, &img)?, &phi.eval(d, alpha, &t)?)?;
            let vu = phi.eval(d, alpha, &u)?;
            let vw = phi.eval(d, alpha, &f.one())?;
            let half = diff(&vu, &vw)?;
            let expected = scalar(half.try_add(&half))?;
            Ok((got != expected)
                .then(|| Failure::new(inputs.clone(), expected.to_string(), got.to_string())))
        })();
        settle(&inputs, r)
    });
    Check::from_results("prop_2phi", None, results)
}

/// `phi_alpha(x_alpha(t)) = phi_{tau(alpha)}(x_{tau(alpha)}(t))`.
pub fn rho_invariance_check<F: TitsField>(
    d: &RootDatum<'_, F>,
    phi: &PhiAssignment<'_, F>,
    samples: usize,
    seed: u64,
    sample: &Sampler<'_, F::Elem>,
) -> Check {
    let results = par_samples(samples, seed, "rho", |rng, _| {
        let alpha = rng.gen_range(0..d.sys.len());
        let t = sample(rng);
        let image = d.tau[alpha];
        let inputs = elem(d, alpha, &t);
        let r = (|| {
            let (a, b) = (phi.eval(d, alpha, &t)?, phi.eval(d, image, &t)?);
            Ok((a != b).then(|| {
                Failure::new(
                    inputs.clone(),
                    a.to_string(),
                    format!("{} at root {}", b, image + 1),
                )
            }))
        })();
        settle(&inputs, r)
    });
    Check::from_results("rho_invariance", None, results)
}

/// Conjugating `[x_alpha(s), x_beta(t)]` by `h(u)` based at a random root gives the
/// relation at the conjugated parameters.
pub fn torus_consistency_check<F: TitsField>(
    d: &RootDatum<'_, F>,
    table: &TorusTable,
    samples: usize,
    seed: u64,
) -> Check {
    let f = d.field;
    let mut relations = Vec::new();
    for a in 0..d.sys.len() {
        for b in 0..d.sys.len() {
            if matches!(d.sys.angle(a, b), Ok(x) if x > 90 && x < 180) {
                relations.push((a, b));
            }
        }
    }
    let results = par_samples(samples, seed, "torus", |rng, i| {
        let (a, b) = relations[i % relations.len()];
        let delta = rng.gen_range(0..d.sys.len());
        let (s, t, u) = (
            f.sample_nonzero(rng),
            f.sample_nonzero(rng),
            f.sample_nonzero(rng),
        );
        let inputs = format!(
            "{}, {}, h at root {} with u={}",
            elem(d, a, &s),
            elem(d, b, &t),
            delta + 1,
            f.format_elem(&u)
        );
        let r = (|| {
            let conj = |x: RootGroupElem<F::Elem>| d.torus_conj_in(table, delta, &u, &x);
            let hs = conj(RootGroupElem::new(a, s.clone()))?;
            let ht = conj(RootGroupElem::new(b, t.clone()))?;
            let lhs = d.commutator(a, &hs.param, b, &ht.param)?;
            let rhs = d
                .commutator(a, &s, b, &t)?
                .into_iter()
                .map(conj)
                .collect::<Result<Vec<_>, _>>()?;
            Ok((!d.words_congruent(&lhs, &rhs))
                .then(|| Failure::new(inputs.clone(), d.format_word(&rhs), d.format_word(&lhs))))
        })();
        settle(&inputs, r)
    });
    Check::from_results("torus_consistency", None, results)
}

/// Random rewriting orders reach the same normal form as the default order.
pub fn collect_confluence_check<F: TitsField>(
    d: &RootDatum<'_, F>,
    samples: usize,
    seed: u64,
) -> Check {
    let f = d.field;
    let n = d.sys.rank2_n().unwrap_or(0);
    let results = par_samples(samples, seed, "confluence", |rng, _| {
        if n == 0 {
            return Some(Failure::new(
                "",
                "a rank-2 system",
                format!("{:?}", d.sys.kind()),
            ));
        }
        let len = rng.gen_range(2..=8);
        let word: Vec<_> = (0..len)
            .map(|_| RootGroupElem::new(rng.gen_range(0..n), f.sample_nonzero(rng)))
            .collect();
        let inputs = d.format_word(&word);
        let r = (|| {
            let a = d.collect(&word)?;
            let b = d.collect_with(&word, |k| rng.gen_range(0..k))?;
            Ok((!d.words_congruent(&a, &b))
                .then(|| Failure::new(inputs.clone(), d.format_word(&a), d.format_word(&b))))
        })();
        settle(&inputs, r)
    });
    Check::from_results("collect_confluence", None, results)
}

/// `ree(a) ree(b)` collects to `ree(a b)`.
pub fn ree_product_failure<F: TitsField>(
    d: &RootDatum<'_, F>,
    a: &TElem<F::Elem>,
    b: &TElem<F::Elem>,
) -> Option<Failure> {
    let f = d.field;
    let inputs = format!("a={}, b={}", format_t(f, a), format_t(f, b));
    let mut w = ree_embedding(f, a);
    w.extend(ree_embedding(f, b));
    let expected = ree_embedding(f, &t_mul(f, a, b));
    let r = d.collect(&w).map(|got| {
        (!d.words_congruent(&got, &expected)).then(|| {
            Failure::new(
                inputs.clone(),
                d.format_word(&expected),
                d.format_word(&got),
            )
        })
    });
    settle(&inputs, r)
}

/// The polarity image of `ree(a)` collects back to `ree(a)`.
pub fn ree_rho_failure<F: TitsField>(d: &RootDatum<'_, F>, a: &TElem<F::Elem>) -> Option<Failure> {
    let f = d.field;
    let inputs = format_t(f, a);
    let w = ree_embedding(f, a);
    let r = d.collect(&apply_rho(d, &w)).map(|got| {
        (!d.words_congruent(&got, &w))
            .then(|| Failure::new(inputs.clone(), d.format_word(&w), d.format_word(&got)))
    });
    settle(&inputs, r)
}

/// `suzuki(a) suzuki(b)` collects to `suzuki(a b)` and `suzuki(a)` is polarity-invariant.
pub fn suzuki_failure<F: TitsField>(
    d: &RootDatum<'_, F>,
    a: &SElem<F::Elem>,
    b: &SElem<F::Elem>,
) -> Option<Failure> {
    let f = d.field;
    let inputs = format!("a={}, b={}", format_s(f, a), format_s(f, b));
    let r = (|| {
        let wa = suzuki_embedding(f, a)?;
        let mut w = wa.clone();
        w.extend(suzuki_embedding(f, b)?);
        let expected = suzuki_embedding(f, &s_mul(f, a, b))?;
        let got = d.collect(&w)?;
        if !d.words_congruent(&got, &expected) {
            return Ok(Some(Failure::new(
                inputs.clone(),
                d.format_word(&expected),
                d.format_word(&got),
            )));
        }
        let image = d.collect(&apply_rho(d, &wa))?;
        Ok((!d.words_congruent(&image, &wa))
            .then(|| Failure::new(inputs.clone(), d.format_word(&wa), d.format_word(&image))))
    })();
    settle(&inputs, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::phi::Rule;
    use crate::datum::Case;
    use crate::field::{AnyField, FieldCfg, FieldValuation, HahnField};

    fn hahn(p: u32) -> HahnField {
        match FieldCfg::hahn_default(p, 1).build().unwrap() {
            AnyField::Hahn(h) => h,
            _ => unreachable!(),
        }
    }

    #[test]
    fn axioms_hold_for_the_field_valuation_in_case_g() {
        let h = hahn(3);
        let d = RootDatum::new(Case::G, &h).unwrap();
        let phi = PhiAssignment::build(Case::G, &FieldValuation, [Rule::Direct, Rule::Twisted]);
        let s = nonzero(&h);
        assert!(check_v1(&d, &phi, 40, 1, &s).passed());
        let pairs = d.pairs_with_interval().unwrap();
        for c in check_v2_containment(&d, &phi, &pairs, 10, 1, &s) {
            assert!(c.passed(), "{c:?}");
        }
        assert!(check_v3(&d, &phi, 20, 20, 1, &s).passed());
        assert!(prop_2phi_check(&d, &phi, 40, 1, &s).passed());
        assert!(rho_invariance_check(&d, &phi, 40, 1, &s).passed());
    }

    #[test]
    fn torus_table_is_consistent_and_the_swapped_one_is_not() {
        let h = hahn(3);
        let d = RootDatum::new(Case::G, &h).unwrap();
        assert!(torus_consistency_check(&d, &d.torus, 60, 2).passed());
        let swapped = TorusTable::from_entries(d.torus.entries().map(|(a, w)| match a {
            30 => (30, (0, 1)),
            150 => (150, (0, -1)),
            x => (x, w),
        }));
        assert!(!torus_consistency_check(&d, &swapped, 60, 2).passed());
        let f2 = hahn(2);
        let b = RootDatum::new(Case::B, &f2).unwrap();
        assert!(torus_consistency_check(&b, &b.torus, 60, 2).passed());
    }

    #[test]
    fn collection_is_confluent() {
        let f = crate::field::FiniteField::new(3, 3).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        assert!(collect_confluence_check(&d, 100, 4).passed());
    }

    #[test]
    fn corrupted_signs_break_v3() {
        let h = hahn(3);
        let mut d = RootDatum::new(Case::G, &h).unwrap();
        d.signs = d.signs.without_placeholders();
        let phi = PhiAssignment::build(Case::G, &FieldValuation, [Rule::Direct, Rule::Twisted]);
        assert!(!check_v3(&d, &phi, 20, 20, 1, &nonzero(&h)).passed());
    }
}
