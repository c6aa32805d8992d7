//! The Ree Moufang set: the permutation group over `GF(3)`, the scalings
//! `rho_a`, and for cases B and F the translations and torus of `S`.

use std::collections::HashSet;

use super::{exhaustive, expect, Ctx, SuiteField, SuiteOutput};
use crate::datum::Case;
use crate::field::{FiniteField, TitsField};
use crate::groups::{
    enumerate_s, format_s, format_t, h_action_s, norm_n, s_is_identity, s_mul, sample_t,
    t_identity, t_is_identity, TElem,
};
use crate::moufang::{
    closure, format_point, generators, omega_conjugates_fix_zero, omega_point, rho,
    rho_scalar_failure, stats, translate, translations_sharply_transitive,
    two_point_stabilizer_is_torus, MPoint, PointSet, MAX_ORDER,
};
use crate::report::Failure;

fn ree3(out: &mut SuiteOutput) {
    let f = match FiniteField::new(3, 1) {
        Ok(f) => f,
        Err(e) => return out.single("Ree(3) group", Some(Failure::error("GF(3)", e))),
    };
    let pts = PointSet::new(&f);
    let n = pts.len();
    let group = match generators(&f, &pts)
        .map_err(Into::into)
        .and_then(|g| closure(&g, n, MAX_ORDER))
    {
        Ok(g) => g,
        Err(e) => return out.single("Ree(3) group", Some(Failure::error("GF(3)", e))),
    };
    let zero = pts.index_of(&MPoint::Point(t_identity(&f)));
    let st = stats(&group, n, pts.infinity(), zero);
    let q = f.order() as u64;
    let cross = (n as u64) * (n as u64 - 1) * st.two_point_stabilizer_order;
    out.single(
        "Ree(3) order = |D| (|D| - 1) |two-point stabilizer|",
        expect(
            st.order == cross && st.points == 28,
            || "q = 3".into(),
            cross,
            st.order,
        ),
    );
    out.single(
        "Ree(3) 2-transitive",
        expect(
            st.transitivity_degree >= 2,
            || "q = 3".into(),
            ">= 2",
            st.transitivity_degree,
        ),
    );
    out.single(
        "Ree(3) two-point stabilizer order q - 1",
        expect(
            st.two_point_stabilizer_order == q - 1,
            || "q = 3".into(),
            q - 1,
            st.two_point_stabilizer_order,
        ),
    );
    let inv = |name: &str, r: Result<bool, crate::groups::GroupError>| match r {
        Ok(ok) => expect(ok, || "q = 3".into(), name, "violated"),
        Err(e) => Some(Failure::error("q = 3", e)),
    };
    out.single(
        "translations sharply transitive on T(3)",
        inv(
            "sharply transitive",
            translations_sharply_transitive(&f, &pts),
        ),
    );
    let translations: HashSet<_> = pts
        .elems
        .iter()
        .filter_map(|a| pts.permutation(|x| Ok(translate(&f, a, x))).ok())
        .collect();
    out.single(
        "translations form a group of order q^3",
        expect(
            translations.len() == pts.elems.len(),
            || "q = 3".into(),
            pts.elems.len(),
            translations.len(),
        ),
    );
    out.single(
        "omega conjugates of translations fix 0",
        inv("fix 0", omega_conjugates_fix_zero(&f, &pts)),
    );
    out.single(
        "two-point stabilizer is the h-torus",
        inv(
            "equal to the torus",
            two_point_stabilizer_is_torus(&f, &pts, &group),
        ),
    );
    out.group_stats = Some(st);

    let inf = MPoint::Infinity;
    let origin = MPoint::Point(t_identity(&f));
    let to = |r, s, t| MPoint::Point(TElem::new(f.from_int(r), f.from_int(s), f.from_int(t)));
    let checks = [
        (
            "omega_point(inf) = 0",
            omega_point(&f, &inf),
            origin.clone(),
        ),
        (
            "omega_point((1,0,-1)) = (0,0,1)",
            omega_point(&f, &to(1, 0, -1)),
            to(0, 0, 1),
        ),
    ];
    for (name, got, expected) in checks {
        out.single(
            name,
            match got {
                Ok(g) => expect(
                    g == expected,
                    || name.into(),
                    format_point(&f, &expected),
                    format_point(&f, &g),
                ),
                Err(e) => Some(Failure::error(name, e)),
            },
        );
    }
    let unit = TElem::new(f.zero(), f.zero(), f.one());
    let fixed: Vec<_> = (0..n).map(|i| pts.point(i)).collect();
    out.push(exhaustive(
        "rho_(0,0,1) = identity",
        &fixed,
        |x| match rho(&f, &unit, x) {
            Ok(y) => expect(
                &y == x,
                || format_point(&f, x),
                format_point(&f, x),
                format_point(&f, &y),
            ),
            Err(e) => Some(Failure::error(format_point(&f, x), e)),
        },
    ));
}

fn rho_samples<F: SuiteField, G: TitsField>(
    ctx: &Ctx<'_, F>,
    g: &G,
    label: &str,
    out: &mut SuiteOutput,
) {
    let nonidentity = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let a = sample_t(g, rng);
        if !t_is_identity(g, &a) {
            return a;
        }
    };
    out.push(ctx.sampled(&format!("rho_a scaling/{label}"), 100, |rng| {
        let (a, b) = (nonidentity(rng), sample_t(g, rng));
        rho_scalar_failure(g, &a, &b)
    }));
    out.push(
        ctx.sampled(&format!("z^(theta+2) = N(a)/{label}"), 100, |rng| {
            let a = nonidentity(rng);
            let n = norm_n(g, &a);
            match g
                .twisted_pow(&n, 2, -1)
                .and_then(|z| g.twisted_pow(&z, 2, 1))
            {
                Ok(zz) => expect(
                    g.congruent(&zz, &n),
                    || format_t(g, &a),
                    g.format_elem(&n),
                    g.format_elem(&zz),
                ),
                Err(e) => Some(Failure::error(format_t(g, &a), e)),
            }
        }),
    );
}

/// Left translations of `S(8)` act sharply transitively, and each `h_action_s(a)`
/// is a permutation of `S(8)` fixing the identity.
fn suzuki_surface(out: &mut SuiteOutput) {
    let f = match FiniteField::new(2, 3) {
        Ok(f) => f,
        Err(e) => return out.single("S(8) translations", Some(Failure::error("GF(8)", e))),
    };
    let all = enumerate_s(&f);
    let key = |a: &crate::groups::SElem<crate::field::Gf>| (a.s.0, a.t.0);
    out.push(exhaustive(
        "S(8) translations sharply transitive",
        &all,
        |a| {
            let images: HashSet<_> = all.iter().map(|b| key(&s_mul(&f, a, b))).collect();
            let fixes =
                !s_is_identity(&f, a) && all.iter().any(|b| key(&s_mul(&f, a, b)) == key(b));
            expect(
                images.len() == all.len() && !fixes,
                || format_s(&f, a),
                "a regular permutation",
                "not regular",
            )
        },
    ));
    out.push(exhaustive(
        "S(8) torus permutes S fixing 1",
        &all[1..],
        |a| {
            let images: Result<HashSet<_>, _> = all
                .iter()
                .map(|b| h_action_s(&f, a, b).map(|y| key(&y)))
                .collect();
            match (images, h_action_s(&f, a, &all[0])) {
                (Ok(im), Ok(e)) => expect(
                    im.len() == all.len() && s_is_identity(&f, &e),
                    || format_s(&f, a),
                    "bijection fixing 1",
                    "not",
                ),
                (Err(e), _) | (_, Err(e)) => Some(Failure::error(format_s(&f, a), e)),
            }
        },
    ));
}

pub fn run<F: SuiteField>(ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    ree3(&mut out);
    match FiniteField::new(3, 3) {
        Ok(g) => rho_samples(ctx, &g, "GF(27)", &mut out),
        Err(e) => out.single("GF(27)", Some(Failure::error("GF(27)", e))),
    }
    match ctx.case {
        Case::G => rho_samples(ctx, ctx.field, "config", &mut out),
        Case::B | Case::F => suzuki_surface(&mut out),
    }
    out
}
