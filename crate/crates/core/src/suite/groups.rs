//! The groups S and T: products, centres, norms, omega and the torus action.

use super::{exhaustive, expect, Ctx, SuiteField, SuiteOutput};
use crate::datum::Case;
use crate::field::{FiniteField, TitsField};
use crate::groups::{
    enumerate_s, enumerate_t, format_s, format_t, h_action_s, h_action_t, norm_n, norm_r, omega,
    omega_squared_is_identity, s_congruent, s_inv, s_is_identity, s_mul, sample_s, sample_t,
    t_congruent, t_inv, t_is_identity, t_mul, SElem, TElem,
};
use crate::report::{Check, Failure};
use crate::{Quad, Value};

/// `val(x) + k val(n)`, the predicted valuation after scaling by a unit of weight `k`.
fn shifted<F: TitsField>(f: &F, x: &F::Elem, n: &F::Elem, k: &Quad) -> Option<Value> {
    let vx = f.val(x).ok()?;
    let vn = f.val(n).ok()?.finite()?.clone();
    vx.try_add(&Value::Finite(vn.try_mul(k).ok()?)).ok()
}

fn anisotropy_t(f: &FiniteField) -> Check {
    let all = enumerate_t(f);
    exhaustive("anisotropy", &all[1..], |a| {
        let n = norm_n(f, a);
        expect(
            !n.is_zero(),
            || format!("GF({}) {}", f.order(), format_t(f, a)),
            "N != 0",
            "N = 0",
        )
    })
}

fn anisotropy_s(f: &FiniteField) -> Check {
    let all = enumerate_s(f);
    exhaustive("anisotropy", &all[1..], |a| {
        let r = norm_r(f, a);
        expect(
            !r.is_zero(),
            || format!("GF({}) {}", f.order(), format_s(f, a)),
            "R != 0",
            "R = 0",
        )
    })
}

fn omega_squared<F: TitsField>(f: &F, a: &TElem<F::Elem>) -> Option<Failure> {
    let inputs = || format_t(f, a);
    match omega(f, a).and_then(|b| omega(f, &b)) {
        Ok(back) => expect(
            t_congruent(f, &back, a),
            inputs,
            inputs(),
            format_t(f, &back),
        ),
        Err(e) => Some(Failure::error(inputs(), e)),
    }
}

/// `omega^2 = 1` on every nonidentity element of `T(GF(3^m))`.
pub fn omega_squared_exhaustive(m: u32) -> Check {
    match FiniteField::new(3, m) {
        Ok(f) => {
            let all = enumerate_t(&f);
            exhaustive("omega^2 = 1", &all[1..], |a| omega_squared(&f, a))
        }
        Err(e) => Check::single("omega^2 = 1", Some(Failure::error(format!("GF(3^{m})"), e))),
    }
}

fn run_t<F: SuiteField>(ctx: &Ctx<'_, F>, out: &mut SuiteOutput) {
    let f = ctx.field;
    let fmt = |a: &TElem<F::Elem>| format_t(f, a);
    let nonidentity = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let a = sample_t(f, rng);
        if !t_is_identity(f, &a) {
            return a;
        }
    };
    out.push(ctx.sampled("T associativity", 500, |rng| {
        let (a, b, c) = (sample_t(f, rng), sample_t(f, rng), sample_t(f, rng));
        let lhs = t_mul(f, &t_mul(f, &a, &b), &c);
        let rhs = t_mul(f, &a, &t_mul(f, &b, &c));
        expect(
            t_congruent(f, &lhs, &rhs),
            || format!("{} {} {}", fmt(&a), fmt(&b), fmt(&c)),
            fmt(&rhs),
            fmt(&lhs),
        )
    }));
    out.push(ctx.sampled("T centre", 200, |rng| {
        let z = TElem::new(f.zero(), f.zero(), f.sample(rng));
        let a = sample_t(f, rng);
        let (za, az) = (t_mul(f, &z, &a), t_mul(f, &a, &z));
        expect(
            t_congruent(f, &za, &az),
            || format!("z={}, a={}", fmt(&z), fmt(&a)),
            fmt(&az),
            fmt(&za),
        )
    }));
    out.push(ctx.sampled("N anisotropic", 1000, |rng| {
        let a = nonidentity(rng);
        let n = norm_n(f, &a);
        expect(
            !f.is_negligible(&n),
            || fmt(&a),
            "N != 0",
            f.format_elem(&n),
        )
    }));
    out.push(ctx.sampled("N(omega(a)) = N(a)^-1", 200, |rng| {
        let a = nonidentity(rng);
        let r = (|| {
            let lhs = f.mul(&norm_n(f, &omega(f, &a)?), &norm_n(f, &a));
            Ok::<_, crate::groups::GroupError>(
                f.congruent(&lhs, &f.one())
                    .then_some(())
                    .ok_or(f.format_elem(&lhs)),
            )
        })();
        match r {
            Ok(Ok(())) => None,
            Ok(Err(got)) => Some(Failure::new(fmt(&a), "N(omega(a)) N(a) = 1", got)),
            Err(e) => Some(Failure::error(fmt(&a), e)),
        }
    }));
    out.push(ctx.sampled("N(a^-1) = N(a)", 200, |rng| {
        let a = sample_t(f, rng);
        let (x, y) = (norm_n(f, &t_inv(f, &a)), norm_n(f, &a));
        expect(
            f.congruent(&x, &y),
            || fmt(&a),
            f.format_elem(&y),
            f.format_elem(&x),
        )
    }));
    out.push(ctx.sampled("omega^2 = 1", 1000, |rng| {
        let a = nonidentity(rng);
        let exact = TElem::new(f.exact_part(&a.r), f.exact_part(&a.s), f.exact_part(&a.t));
        match omega_squared_is_identity(f, &exact) {
            Ok(ok) => expect(ok, || fmt(&exact), "omega(omega(a)) = a", "differs"),
            Err(e) => Some(Failure::error(fmt(&exact), e)),
        }
    }));
    out.push(
        ctx.sampled("omega^2 = 1 through truncated inverses", 50, |rng| {
            omega_squared(f, &nonidentity(rng))
        }),
    );
    out.push(ctx.sampled("h_action_t automorphism", 200, |rng| {
        let (a, x, y) = (nonidentity(rng), sample_t(f, rng), sample_t(f, rng));
        let inputs = || format!("a={}, x={}, y={}", fmt(&a), fmt(&x), fmt(&y));
        let r = (|| {
            let lhs = h_action_t(f, &a, &t_mul(f, &x, &y))?;
            let rhs = t_mul(f, &h_action_t(f, &a, &x)?, &h_action_t(f, &a, &y)?);
            Ok::<_, crate::groups::GroupError>(expect(
                t_congruent(f, &lhs, &rhs),
                inputs,
                fmt(&rhs),
                fmt(&lhs),
            ))
        })();
        r.unwrap_or_else(|e| Some(Failure::error(inputs(), e)))
    }));
    let p = f.radicand();
    let weights = [
        Quad::from_int(2, p) - Quad::sqrt_p(p),
        Quad::sqrt_p(p) - Quad::one(p),
        Quad::one(p),
    ];
    out.push(ctx.sampled("h_action_t valuation shift", 100, |rng| {
        let (a, x) = (nonidentity(rng), sample_t(f, rng));
        let inputs = || format!("a={}, x={}", fmt(&a), fmt(&x));
        let n = norm_n(f, &a);
        match h_action_t(f, &a, &x) {
            Ok(y) => {
                let predicted: Vec<_> = [&x.r, &x.s, &x.t]
                    .iter()
                    .zip(&weights)
                    .map(|(c, k)| shifted(f, c, &n, k))
                    .collect();
                let got: Vec<_> = [&y.r, &y.s, &y.t].iter().map(|c| f.val(c).ok()).collect();
                expect(
                    predicted == got,
                    inputs,
                    format!("{predicted:?}"),
                    format!("{got:?}"),
                )
            }
            Err(e) => Some(Failure::error(inputs(), e)),
        }
    }));
}

fn run_s<F: SuiteField>(ctx: &Ctx<'_, F>, out: &mut SuiteOutput) {
    let f = ctx.field;
    let fmt = |a: &SElem<F::Elem>| format_s(f, a);
    let nonidentity = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let a = sample_s(f, rng);
        if !s_is_identity(f, &a) {
            return a;
        }
    };
    out.push(ctx.sampled("S associativity", 500, |rng| {
        let (a, b, c) = (sample_s(f, rng), sample_s(f, rng), sample_s(f, rng));
        let lhs = s_mul(f, &s_mul(f, &a, &b), &c);
        let rhs = s_mul(f, &a, &s_mul(f, &b, &c));
        expect(
            s_congruent(f, &lhs, &rhs),
            || format!("{} {} {}", fmt(&a), fmt(&b), fmt(&c)),
            fmt(&rhs),
            fmt(&lhs),
        )
    }));
    out.push(ctx.sampled("S centre", 200, |rng| {
        let z = SElem::new(f.zero(), f.sample(rng));
        let a = sample_s(f, rng);
        let (za, az) = (s_mul(f, &z, &a), s_mul(f, &a, &z));
        expect(
            s_congruent(f, &za, &az),
            || format!("z={}, a={}", fmt(&z), fmt(&a)),
            fmt(&az),
            fmt(&za),
        )
    }));
    out.push(ctx.sampled("S inverse", 200, |rng| {
        let a = sample_s(f, rng);
        let e = s_mul(f, &a, &s_inv(f, &a));
        expect(s_is_identity(f, &e), || fmt(&a), "identity", fmt(&e))
    }));
    out.push(ctx.sampled("R anisotropic", 1000, |rng| {
        let a = nonidentity(rng);
        let r = norm_r(f, &a);
        expect(
            !f.is_negligible(&r),
            || fmt(&a),
            "R != 0",
            f.format_elem(&r),
        )
    }));
    out.push(ctx.sampled("h_action_s automorphism", 200, |rng| {
        let (a, x, y) = (nonidentity(rng), sample_s(f, rng), sample_s(f, rng));
        let inputs = || format!("a={}, x={}, y={}", fmt(&a), fmt(&x), fmt(&y));
        let r = (|| {
            let lhs = h_action_s(f, &a, &s_mul(f, &x, &y))?;
            let rhs = s_mul(f, &h_action_s(f, &a, &x)?, &h_action_s(f, &a, &y)?);
            Ok::<_, crate::groups::GroupError>(expect(
                s_congruent(f, &lhs, &rhs),
                inputs,
                fmt(&rhs),
                fmt(&lhs),
            ))
        })();
        r.unwrap_or_else(|e| Some(Failure::error(inputs(), e)))
    }));
    let p = f.radicand();
    let weights = [Quad::from_int(2, p) - Quad::sqrt_p(p), Quad::sqrt_p(p)];
    out.push(ctx.sampled("h_action_s valuation shift", 100, |rng| {
        let (a, x) = (nonidentity(rng), sample_s(f, rng));
        let inputs = || format!("a={}, x={}", fmt(&a), fmt(&x));
        let r = norm_r(f, &a);
        match h_action_s(f, &a, &x) {
            Ok(y) => {
                let predicted: Vec<_> = [&x.s, &x.t]
                    .iter()
                    .zip(&weights)
                    .map(|(c, k)| shifted(f, c, &r, k))
                    .collect();
                let got: Vec<_> = [&y.s, &y.t].iter().map(|c| f.val(c).ok()).collect();
                expect(
                    predicted == got,
                    inputs,
                    format!("{predicted:?}"),
                    format!("{got:?}"),
                )
            }
            Err(e) => Some(Failure::error(inputs(), e)),
        }
    }));
}

pub fn run<F: SuiteField>(ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let mut aniso = Vec::new();
    for (p, m) in [(2, 1), (2, 3), (3, 1), (3, 3)] {
        match FiniteField::new(p, m) {
            Ok(f) if p == 2 => aniso.push(anisotropy_s(&f)),
            Ok(f) => aniso.push(anisotropy_t(&f)),
            Err(e) => aniso.push(Check::single(
                "anisotropy",
                Some(Failure::error(format!("GF({p}^{m})"), e)),
            )),
        }
    }
    out.push(Check::merge(
        "norms anisotropic on S(2), S(8), T(3), T(27)",
        aniso,
    ));
    out.push(Check::merge(
        "omega^2 = 1 on T(3), T(27)",
        [omega_squared_exhaustive(1), omega_squared_exhaustive(3)],
    ));
    match ctx.case {
        Case::G => run_t(ctx, &mut out),
        Case::B | Case::F => run_s(ctx, &mut out),
    }
    out
}
