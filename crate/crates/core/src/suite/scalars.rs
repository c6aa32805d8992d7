//! Exact arithmetic in `Q(sqrt 2)` and `Q(sqrt 3)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{expect, Ctx, SuiteOutput};
use crate::scalar::parse_quad;
use crate::Quad;

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-40i64..=40)),
        BigInt::from(rng.gen_range(1i64..=12)),
    )
}

fn rand_quad(rng: &mut ChaCha8Rng, p: u32) -> Quad {
    Quad::new(rand_rational(rng), rand_rational(rng), p)
}

fn radicand(rng: &mut ChaCha8Rng) -> u32 {
    if rng.gen_bool(0.5) {
        2
    } else {
        3
    }
}

#[allow(clippy::eq_op)]
pub fn run<F: Sync>(ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();

    out.push(ctx.sampled("field_axioms", 1000, |rng| {
        let p = radicand(rng);
        let (a, b, c) = (rand_quad(rng, p), rand_quad(rng, p), rand_quad(rng, p));
        let inputs = || format!("a={a}, b={b}, c={c}");
        let checks = [
            ("(a+b)+c = a+(b+c)", &(&a + &b) + &c == &a + &(&b + &c)),
            ("(ab)c = a(bc)", &(&a * &b) * &c == &a * &(&b * &c)),
            ("a(b+c) = ab+ac", &a * &(&b + &c) == &(&a * &b) + &(&a * &c)),
            ("ab = ba", &a * &b == &b * &a),
            ("a - a = 0", (&a - &a).is_zero()),
            (
                "a a^-1 = 1",
                a.is_zero() || a.recip().map(|r| &a * &r == Quad::one(p)).unwrap_or(false),
            ),
        ];
        checks
            .iter()
            .find(|(_, ok)| !ok)
            .and_then(|(law, _)| expect(false, inputs, *law, "violated"))
    }));

    out.push(ctx.sampled("order_vs_float", 10_000, |rng| {
        let p = radicand(rng);
        let (a, b) = (rand_quad(rng, p), rand_quad(rng, p));
        let (fa, fb) = (a.to_f64(), b.to_f64());
        if (fa - fb).abs() <= 1e-9 {
            return None;
        }
        let exact = a.try_cmp(&b).ok();
        let float = fa.partial_cmp(&fb);
        expect(
            exact == float,
            || format!("a={a}, b={b}"),
            format!("{float:?}"),
            format!("{exact:?}"),
        )
    }));

    out.push(ctx.sampled("order_compatibility", 1000, |rng| {
        let p = radicand(rng);
        let (a, b, c) = (rand_quad(rng, p), rand_quad(rng, p), rand_quad(rng, p));
        let ord = a.try_cmp(&b).ok();
        let shifted = (&a + &c).try_cmp(&(&b + &c)).ok();
        let total = ord.is_some() && (ord == Some(Ordering::Equal)) == (a == b);
        let scaled = if c.is_positive() {
            (&a * &c).try_cmp(&(&b * &c)).ok()
        } else {
            ord
        };
        expect(
            total && ord == shifted && ord == scaled,
            || format!("a={a}, b={b}, c={c}"),
            format!("{ord:?} preserved"),
            format!("shift {shifted:?}, scale {scaled:?}"),
        )
    }));

    out.push(ctx.sampled("scale_sqrtp_twice", 1000, |rng| {
        let p = radicand(rng);
        let a = rand_quad(rng, p);
        let twice = a.scale_sqrtp().scale_sqrtp();
        let expected = &a * &Quad::from_int(p as i64, p);
        let back = a.scale_sqrtp().unscale_sqrtp();
        expect(
            twice == expected && back == a,
            || a.to_string(),
            &expected,
            &twice,
        )
    }));

    out.push(ctx.sampled("parse_display_round_trip", 1000, |rng| {
        let p = radicand(rng);
        let a = rand_quad(rng, p);
        let text = a.to_string();
        let back = parse_quad(&text, p);
        expect(
            back.as_ref() == Ok(&a),
            || text.clone(),
            &a,
            format!("{back:?}"),
        )
    }));

    let r3 = Quad::sqrt_p(3);
    let examples = [
        ("sqrt3 * sqrt3 = 3", &r3 * &r3 == Quad::from_int(3, 3)),
        (
            "1 + sqrt3 > 2",
            (Quad::one(3) + r3.clone()) > Quad::from_int(2, 3),
        ),
        (
            "sqrt2 < 3/2",
            Quad::sqrt_p(2) < Quad::rational(BigRational::new(3.into(), 2.into()), 2),
        ),
        (
            "mixed radicands do not compare",
            Quad::sqrt_p(2).try_cmp(&Quad::sqrt_p(3)).is_err(),
        ),
        (
            "(1 + sqrt2)^-1 = sqrt2 - 1",
            (Quad::one(2) + Quad::sqrt_p(2)).recip() == Ok(Quad::sqrt_p(2) - Quad::one(2)),
        ),
    ];
    for (name, ok) in examples {
        out.single(
            &format!("example: {name}"),
            expect(ok, || name.to_string(), "true", "false"),
        );
    }
    out
}
