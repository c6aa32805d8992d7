//! Root systems B2, G2, F4: reflections, intervals and the polarity.

use rand::Rng;

use super::{exhaustive, expect, Ctx, SuiteOutput};
use crate::report::{Check, Failure};
use crate::roots::{dot, IntervalRoot, RootSystem, SystemKind};
use crate::Quad;

const KINDS: [SystemKind; 3] = [SystemKind::B2, SystemKind::G2, SystemKind::F4];

fn all_pairs(sys: &RootSystem) -> Vec<(usize, usize)> {
    (0..sys.len())
        .flat_map(|a| (0..sys.len()).map(move |b| (a, b)))
        .collect()
}

fn non_parallel(sys: &RootSystem, a: usize, b: usize) -> bool {
    a != b && sys.negate(a).ok() != Some(b)
}

/// Every interval root satisfies `p alpha + q beta = gamma` exactly.
fn interval_failure(sys: &RootSystem, a: usize, b: usize) -> Option<Failure> {
    let inputs = || format!("{:?} ({}, {})", sys.kind(), a + 1, b + 1);
    let iv = match sys.interval(a, b) {
        Ok(iv) => iv,
        Err(e) => return Some(Failure::error(inputs(), e)),
    };
    let (ua, ub) = (&sys.roots()[a].coords, &sys.roots()[b].coords);
    for g in &iv {
        let lhs: Vec<Quad> = ua
            .iter()
            .zip(ub)
            .map(|(x, y)| &(&g.p * x) + &(&g.q * y))
            .collect();
        if lhs != sys.roots()[g.root].coords {
            return expect(
                false,
                inputs,
                format!("root {}", g.root + 1),
                format!("p={}, q={}", g.p, g.q),
            );
        }
    }
    None
}

fn reversal_failure(sys: &RootSystem, a: usize, b: usize) -> Option<Failure> {
    let inputs = || format!("{:?} ({}, {})", sys.kind(), a + 1, b + 1);
    match (sys.interval(a, b), sys.interval(b, a)) {
        (Ok(x), Ok(y)) => {
            let flipped: Vec<IntervalRoot> = x
                .into_iter()
                .rev()
                .map(|g| IntervalRoot {
                    root: g.root,
                    p: g.q,
                    q: g.p,
                })
                .collect();
            expect(
                flipped == y,
                inputs,
                format!("{flipped:?}"),
                format!("{y:?}"),
            )
        }
        (Err(e), _) | (_, Err(e)) => Some(Failure::error(inputs(), e)),
    }
}

pub fn run<F: Sync>(ctx: &Ctx<'_, F>) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let systems: Vec<RootSystem> = match KINDS.iter().map(|&k| RootSystem::new(k)).collect() {
        Ok(s) => s,
        Err(e) => {
            out.single("build", Some(Failure::error("B2, G2, F4", e)));
            return out;
        }
    };
    let expected_sizes = [8, 12, 48];
    for (sys, n) in systems.iter().zip(expected_sizes) {
        out.single(
            &format!("{:?} size", sys.kind()),
            expect(sys.len() == n, || format!("{:?}", sys.kind()), n, sys.len()),
        );
    }

    let closure = systems.iter().map(|sys| {
        exhaustive("closure", &all_pairs(sys), |&(a, b)| {
            match sys.reflect(a, b) {
                Ok(_) => None,
                Err(e) => Some(Failure::error(
                    format!("{:?} s_{}({})", sys.kind(), a + 1, b + 1),
                    e,
                )),
            }
        })
    });
    out.push(Check::merge(
        "reflection_closure",
        closure.collect::<Vec<_>>(),
    ));

    let mut interval_checks = Vec::new();
    let mut reversal_checks = Vec::new();
    for sys in &systems[..2] {
        let pairs: Vec<_> = all_pairs(sys)
            .into_iter()
            .filter(|&(a, b)| non_parallel(sys, a, b))
            .collect();
        interval_checks.push(exhaustive("interval", &pairs, |&(a, b)| {
            interval_failure(sys, a, b)
        }));
        reversal_checks.push(exhaustive("reversal", &pairs, |&(a, b)| {
            reversal_failure(sys, a, b)
        }));
    }
    let f4 = &systems[2];
    let pick = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let (a, b) = (rng.gen_range(0..f4.len()), rng.gen_range(0..f4.len()));
        if non_parallel(f4, a, b) {
            return (a, b);
        }
    };
    interval_checks.push(ctx.sampled("interval/F4", 100, |rng| {
        let (a, b) = pick(rng);
        interval_failure(f4, a, b)
    }));
    reversal_checks.push(ctx.sampled("reversal/F4", 100, |rng| {
        let (a, b) = pick(rng);
        reversal_failure(f4, a, b)
    }));
    out.push(Check::merge("interval_linear_system", interval_checks));
    out.push(Check::merge("interval_reversal", reversal_checks));

    let mut tau_checks = Vec::new();
    for sys in &systems {
        let name = format!("{:?}", sys.kind());
        let tau = match sys.chamber_involution() {
            Ok(t) => t,
            Err(e) => {
                tau_checks.push(Check::single("tau", Some(Failure::error(&name, e))));
                continue;
            }
        };
        tau_checks.push(exhaustive("tau", &all_pairs(sys), |&(a, b)| {
            let inputs = || format!("{name} ({}, {})", a + 1, b + 1);
            let ip = dot(&sys.roots()[a].coords, &sys.roots()[b].coords);
            let ip_tau = dot(&sys.roots()[tau[a]].coords, &sys.roots()[tau[b]].coords);
            let neg_commutes = sys.negate(a).map(|na| tau[na]).ok() == sys.negate(tau[a]).ok();
            let involution = tau[tau[a]] == a;
            let swaps = sys.length_class(a).ok() != sys.length_class(tau[a]).ok();
            expect(
                ip == ip_tau && neg_commutes && involution && swaps,
                inputs,
                "inner products kept, commutes with -1, order 2, swaps lengths",
                format!("ip {ip} vs {ip_tau}, neg {neg_commutes}, inv {involution}, swap {swaps}"),
            )
        }));
        if let Some(n) = sys.rank2_n() {
            let reversed = (0..n).all(|k| tau[k] == n - 1 - k);
            tau_checks.push(Check::single(
                "tau",
                expect(
                    reversed,
                    || name.clone(),
                    "k -> n-1-k on positive roots",
                    format!("{:?}", &tau[..n]),
                ),
            ));
        }
    }
    out.push(Check::merge("polarity", tau_checks));

    let g2 = &systems[1];
    let examples = [
        ("G2 angle(1, 2) = 30", g2.angle(0, 1).ok() == Some(30)),
        (
            "G2 interval(1, 6) has 4 roots",
            g2.interval(0, 5).map(|v| v.len()).ok() == Some(4),
        ),
        (
            "B2 interval(1, 4) has 2 roots",
            systems[0].interval(0, 3).map(|v| v.len()).ok() == Some(2),
        ),
        ("G2 s_1(6) = 2", g2.reflect(0, 5).ok() == Some(1)),
    ];
    for (name, ok) in examples {
        out.single(
            &format!("example: {name}"),
            expect(ok, || name.to_string(), "true", "false"),
        );
    }
    out
}
