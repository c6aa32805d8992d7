//! The field: valuation, Tits endomorphism, Frobenius, inverses and literals.

use super::{exhaustive, expect, Ctx, SuiteField, SuiteOutput};
use crate::field::{FieldError, FiniteField, Gf, TitsField};
use crate::report::{Check, Failure};
use crate::Value;

/// `nu(x)`, or the certified lower bound when no term of `x` is known.
fn lower<F: TitsField>(f: &F, x: &F::Elem) -> Result<Value, FieldError> {
    if f.is_negligible(x) {
        Ok(f.known_to(x))
    } else {
        f.val(x)
    }
}

fn endomorphism_checks<F: Sync, G: TitsField>(ctx: &Ctx<'_, F>, f: &G, label: &str) -> Vec<Check> {
    let fmt = |x: &G::Elem| f.format_elem(x);
    vec![
        ctx.sampled(&format!("theta additive/{label}"), 1000, |rng| {
            let (a, b) = (f.sample(rng), f.sample(rng));
            let lhs = f.theta(&f.add(&a, &b));
            let rhs = f.add(&f.theta(&a), &f.theta(&b));
            expect(
                f.congruent(&lhs, &rhs),
                || format!("a={}, b={}", fmt(&a), fmt(&b)),
                fmt(&rhs),
                fmt(&lhs),
            )
        }),
        ctx.sampled(&format!("theta multiplicative/{label}"), 1000, |rng| {
            let (a, b) = (f.sample(rng), f.sample(rng));
            let lhs = f.theta(&f.mul(&a, &b));
            let rhs = f.mul(&f.theta(&a), &f.theta(&b));
            expect(
                f.congruent(&lhs, &rhs),
                || format!("a={}, b={}", fmt(&a), fmt(&b)),
                fmt(&rhs),
                fmt(&lhs),
            )
        }),
        ctx.sampled(&format!("theta^2 = frobenius/{label}"), 1000, |rng| {
            let a = f.sample(rng);
            let lhs = f.theta(&f.theta(&a));
            let rhs = f.frobenius(&a);
            let pth = (1..f.characteristic()).fold(a.clone(), |acc, _| f.mul(&acc, &a));
            expect(
                f.congruent(&lhs, &rhs) && f.congruent(&rhs, &pth),
                || fmt(&a),
                format!("{} = a^p = {}", fmt(&rhs), fmt(&pth)),
                fmt(&lhs),
            )
        }),
        ctx.sampled(&format!("inverse/{label}"), 1000, |rng| {
            let a = f.sample_nonzero(rng);
            match f.inv(&a) {
                Ok(b) => {
                    let prod = f.mul(&a, &b);
                    expect(f.congruent(&prod, &f.one()), || fmt(&a), "1", fmt(&prod))
                }
                Err(e) => Some(Failure::error(fmt(&a), e)),
            }
        }),
        ctx.sampled(&format!("literal round trip/{label}"), 1000, |rng| {
            let a = f.sample(rng);
            let text = fmt(&a);
            match f.parse_elem(&text) {
                Ok(b) => expect(f.congruent(&a, &b), || text.clone(), &text, fmt(&b)),
                Err(e) => Some(Failure::error(&text, e)),
            }
        }),
    ]
}

/// Schoolbook product of digit vectors modulo the field's defining polynomial.
fn oracle_mul(f: &FiniteField, a: u16, b: u16) -> u16 {
    let (p, m) = (f.characteristic(), f.degree() as usize);
    let digits = |c: u16| -> Vec<u32> {
        (0..m)
            .scan(c as u32, |c, _| {
                let d = *c % p;
                *c /= p;
                Some(d)
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * m];
    for i in 0..m {
        for j in 0..m {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    let modulus = f.modulus();
    for k in (m..2 * m).rev() {
        let c = prod[k];
        prod[k] = 0;
        for i in 0..m {
            prod[k - m + i] = (prod[k - m + i] + p * p - c * modulus[i]) % p;
        }
    }
    prod[..m].iter().rev().fold(0u32, |acc, &x| acc * p + x) as u16
}

/// The multiplicative group of `GF(p^m)` is cyclic of order `p^m - 1`, and the
/// table multiplication agrees with schoolbook multiplication.
fn multiplicative_group(p: u32, m: u32) -> Check {
    let label = format!("GF({p}^{m})");
    let f = match FiniteField::new(p, m) {
        Ok(f) => f,
        Err(e) => return Check::single("multiplicative group", Some(Failure::error(label, e))),
    };
    let q = f.order();
    let nonzero: Vec<u16> = (1..q as u16).collect();
    let mut check = exhaustive("multiplicative group", &nonzero, |&a| {
        let mismatch = (0..q as u16).find(|&b| f.mul(Gf(a), Gf(b)) != Gf(oracle_mul(&f, a, b)));
        if let Some(b) = mismatch {
            return Some(Failure::new(
                format!("{label}: {a} * {b}"),
                oracle_mul(&f, a, b).to_string(),
                f.mul(Gf(a), Gf(b)).0.to_string(),
            ));
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 && k < q {
            x = oracle_mul(&f, x, a);
            k += 1;
        }
        expect(
            (q - 1) % k == 0 && x == 1,
            || format!("{label}: {}", f.format(Gf(a))),
            format!("order dividing {}", q - 1),
            k,
        )
    });
    let orders = nonzero.iter().map(|&a| {
        let mut x = a;
        let mut k = 1;
        while x != 1 && k < q {
            x = oracle_mul(&f, x, a);
            k += 1;
        }
        k
    });
    let max = orders.max().unwrap_or(0);
    check.samples += 1;
    if max != q - 1 {
        check.failed += 1;
        check.failures.push(Failure::new(
            label,
            format!("an element of order {}", q - 1),
            format!("max order {max}"),
        ));
    }
    check
}

pub fn run<F: SuiteField>(ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let f = ctx.field;
    let fmt = |x: &F::Elem| f.format_elem(x);

    out.push(ctx.sampled("nu multiplicative", 1000, |rng| {
        let (a, b) = (f.sample_nonzero(rng), f.sample_nonzero(rng));
        let inputs = || format!("a={}, b={}", fmt(&a), fmt(&b));
        match (f.val(&a), f.val(&b), f.val(&f.mul(&a, &b))) {
            (Ok(va), Ok(vb), Ok(vab)) => {
                let sum = va.try_add(&vb).ok();
                expect(sum.as_ref() == Some(&vab), inputs, format!("{sum:?}"), &vab)
            }
            (a, b, c) => Some(Failure::error(inputs(), format!("{a:?} {b:?} {c:?}"))),
        }
    }));
    out.push(ctx.sampled("nu ultrametric", 1000, |rng| {
        let (a, b) = (f.sample_nonzero(rng), f.sample_nonzero(rng));
        let inputs = || format!("a={}, b={}", fmt(&a), fmt(&b));
        match (f.val(&a), f.val(&b), lower(f, &f.add(&a, &b))) {
            (Ok(va), Ok(vb), Ok(vs)) => {
                let m = va.min_of(&vb);
                expect(vs >= m, inputs, format!(">= {m}"), &vs)
            }
            (a, b, c) => Some(Failure::error(inputs(), format!("{a:?} {b:?} {c:?}"))),
        }
    }));
    out.push(ctx.sampled("nu theta-invariant", 1000, |rng| {
        let a = f.sample_nonzero(rng);
        match (f.val(&a), f.val(&f.theta(&a))) {
            (Ok(v), Ok(vt)) => expect(vt == v.scale_sqrtp(), || fmt(&a), v.scale_sqrtp(), &vt),
            (x, y) => Some(Failure::error(fmt(&a), format!("{x:?} {y:?}"))),
        }
    }));

    for c in endomorphism_checks(ctx, f, "config") {
        out.push(c);
    }
    match FiniteField::new(f.characteristic(), 3) {
        Ok(gf) => {
            for c in endomorphism_checks(ctx, &gf, "finite") {
                out.push(c);
            }
        }
        Err(e) => out.single("finite field", Some(Failure::error("m = 3", e))),
    }

    let groups: Vec<Check> = (1..=5)
        .step_by(2)
        .map(|m| multiplicative_group(2, m))
        .chain((1..=3).step_by(2).map(|m| multiplicative_group(3, m)))
        .collect();
    out.push(Check::merge("multiplicative group order p^m - 1", groups));
    out
}
