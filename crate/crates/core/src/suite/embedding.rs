//! The Moufang-set root groups inside `U+`: homomorphism, injectivity and
//! polarity invariance of the Ree and Suzuki words.

use std::collections::HashSet;

use super::{exhaustive, expect, Ctx, SuiteField, SuiteOutput};
use crate::datum::checks::{ree_product_failure, ree_rho_failure, suzuki_failure};
use crate::datum::embed::{ree_embedding, suzuki_coefficients};
use crate::datum::{Case, RootDatum, RootGroupElem};
use crate::field::{FiniteField, TitsField};
use crate::groups::{enumerate_s, enumerate_t, sample_s, sample_t, TElem};
use crate::report::Failure;

fn ree_exhaustive(out: &mut SuiteOutput) {
    let f = match FiniteField::new(3, 1) {
        Ok(f) => f,
        Err(e) => return out.single("ree_embedding on T(3)", Some(Failure::error("GF(3)", e))),
    };
    let d = match RootDatum::new(Case::G, &f) {
        Ok(d) => d,
        Err(e) => return out.single("ree_embedding on T(3)", Some(Failure::error("GF(3)", e))),
    };
    let all = enumerate_t(&f);
    let pairs: Vec<_> = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    out.push(exhaustive(
        "ree_embedding homomorphism on T(3)",
        &pairs,
        |(a, b)| ree_product_failure(&d, a, b),
    ));
    out.push(exhaustive(
        "ree_embedding rho-invariant on T(3)",
        &all,
        |a| ree_rho_failure(&d, a),
    ));
    let words: HashSet<String> = all
        .iter()
        .map(|a| d.format_word(&ree_embedding(&f, a)))
        .collect();
    out.single(
        "ree_embedding injective on T(3)",
        expect(
            words.len() == all.len(),
            || "T(3)".into(),
            format!("{} distinct words", all.len()),
            words.len(),
        ),
    );
    let t = f.one();
    let got = ree_embedding(&f, &TElem::new(f.zero(), f.zero(), t));
    let expected = vec![RootGroupElem::new(2, t), RootGroupElem::new(3, t)];
    out.single(
        "ree_embedding(0,0,t) = x3(t) x4(t)",
        expect(
            got == expected,
            || "t = 1".into(),
            d.format_word(&expected),
            d.format_word(&got),
        ),
    );
}

fn suzuki_exhaustive(out: &mut SuiteOutput) {
    let f = match FiniteField::new(2, 1) {
        Ok(f) => f,
        Err(e) => return out.single("suzuki_embedding on S(2)", Some(Failure::error("GF(2)", e))),
    };
    let d = match RootDatum::new(Case::B, &f) {
        Ok(d) => d,
        Err(e) => return out.single("suzuki_embedding on S(2)", Some(Failure::error("GF(2)", e))),
    };
    let all = enumerate_s(&f);
    let pairs: Vec<_> = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    out.push(exhaustive("suzuki_embedding on S(2)", &pairs, |(a, b)| {
        suzuki_failure(&d, a, b)
    }));
}

pub fn run<F: SuiteField>(ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let f = ctx.field;
    match ctx.case {
        Case::G => {
            ree_exhaustive(&mut out);
            let d = match RootDatum::new(Case::G, f) {
                Ok(d) => d,
                Err(e) => {
                    out.single("ree_embedding", Some(Failure::error(f.describe(), e)));
                    return out;
                }
            };
            out.push(ctx.sampled("ree_embedding homomorphism", 200, |rng| {
                let (a, b) = (sample_t(f, rng), sample_t(f, rng));
                ree_product_failure(&d, &a, &b)
            }));
            out.push(ctx.sampled("ree_embedding rho-invariant", 200, |rng| {
                ree_rho_failure(&d, &sample_t(f, rng))
            }));
        }
        Case::B | Case::F => {
            match suzuki_coefficients() {
                Ok(c) => out.suzuki_coefficients = Some(c.format()),
                Err(e) => {
                    out.single("suzuki coefficients", Some(Failure::error("ansatz", e)));
                    return out;
                }
            }
            suzuki_exhaustive(&mut out);
            // The S words live in the B2 data; case F folds onto it.
            let d = match RootDatum::new(Case::B, f) {
                Ok(d) => d,
                Err(e) => {
                    out.single("suzuki_embedding", Some(Failure::error(f.describe(), e)));
                    return out;
                }
            };
            out.push(ctx.sampled(
                "suzuki_embedding homomorphism and rho-invariance",
                200,
                |rng| {
                    let (a, b) = (sample_s(f, rng), sample_s(f, rng));
                    suzuki_failure(&d, &a, &b)
                },
            ));
        }
    }
    out
}
