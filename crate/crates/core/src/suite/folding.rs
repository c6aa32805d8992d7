//! Folding `a -> a + tau(a)`: B2 and G2 to A1, F4 to a regular 16-direction fan.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::{expect, Ctx, SuiteOutput};
use crate::report::Failure;
use crate::roots::{cos2_pi_over_8, RootSystem, SystemKind};
use crate::Quad;

fn half(k: i64, p: u32) -> Quad {
    Quad::rational(BigRational::new(k.into(), 4.into()), p)
}

/// `cos^2(k pi/8)` for `k = 0..=8`, exactly.
fn cos2_table() -> Vec<Quad> {
    let c1 = cos2_pi_over_8(2);
    let c3 = Quad::one(2) - c1.clone();
    let c2 = half(2, 2);
    let zero = Quad::zero(2);
    let one = Quad::one(2);
    vec![
        one.clone(),
        c1.clone(),
        c2.clone(),
        c3.clone(),
        zero,
        c3,
        c2,
        c1,
        one,
    ]
}

pub fn run<F>(_ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    for (kind, dirs) in [
        (SystemKind::B2, 2),
        (SystemKind::G2, 2),
        (SystemKind::F4, 16),
    ] {
        let name = format!("{kind:?}");
        let folded = match RootSystem::new(kind).and_then(|s| s.fold()) {
            Ok(f) => f,
            Err(e) => {
                out.single(&format!("fold {name}"), Some(Failure::error(&name, e)));
                continue;
            }
        };
        let n = folded.system.len();
        out.single(
            &format!("fold {name} directions"),
            expect(n == dirs, || name.clone(), dirs, n),
        );
        let mut covered = folded.projection.clone();
        covered.sort();
        covered.dedup();
        out.single(
            &format!("fold {name} projection onto"),
            expect(
                covered.len() == n,
                || name.clone(),
                format!("{n} directions hit"),
                covered.len(),
            ),
        );
        if dirs != 16 {
            continue;
        }
        let target = cos2_pi_over_8(2);
        let consecutive = folded.consecutive_cos2();
        let ok = matches!(&consecutive, Ok(v) if v.iter().all(|c| *c == target));
        out.single(
            "fold F4 consecutive cos^2 = (2 + sqrt2)/4",
            expect(ok, || name.clone(), &target, format!("{consecutive:?}")),
        );
        let table = cos2_table();
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut unmatched = None;
        for i in 0..n {
            for j in i + 1..n {
                match folded.system.cos2(i, j) {
                    Ok((c, sign)) => {
                        let k =
                            (0..=8).find(|&k| table[k] == c && (k == 4 || (sign > 0) == (k < 4)));
                        match k {
                            Some(k) => *counts.entry(k).or_default() += 1,
                            None => unmatched = unmatched.or(Some(format!("({i}, {j}): {c}"))),
                        }
                    }
                    Err(e) => unmatched = unmatched.or(Some(e.to_string())),
                }
            }
        }
        out.single(
            "fold F4 pairwise cos^2 in {cos^2(k pi/8)}",
            expect(
                unmatched.is_none(),
                || name.clone(),
                "all pairs matched",
                unmatched.unwrap_or_default(),
            ),
        );
        let expected: BTreeMap<usize, usize> = [
            (1, 16),
            (2, 16),
            (3, 16),
            (4, 16),
            (5, 16),
            (6, 16),
            (7, 16),
            (8, 8),
        ]
        .into_iter()
        .collect();
        out.single(
            "fold F4 fan multiplicities",
            expect(
                counts == expected,
                || name.clone(),
                format!("{expected:?}"),
                format!("{counts:?}"),
            ),
        );
        let alternating = (0..n).all(|k| {
            let (a, b) = (
                folded.system.length_class(k),
                folded.system.length_class((k + 1) % n),
            );
            matches!((a, b), (Ok(x), Ok(y)) if x != y)
        });
        out.single(
            "fold F4 length classes alternate",
            expect(
                alternating,
                || name.clone(),
                "alternating classes",
                "not alternating",
            ),
        );
    }
    out
}
