//! The root groups of the Moufang sets inside `U+` of the ambient rank-2 data.

use std::sync::OnceLock;

use super::{Case, DatumError, RootDatum, RootGroupElem, Word};
use crate::field::{FiniteField, TitsField};
use crate::groups::{s_mul, SElem, TElem};
use crate::rng::stream;

/// `x1(r) x2(r^(theta+1) - s) x3(t + r s) x4(r^(theta+2) - r s + t) x5(-s) x6(r)`, zero factors omitted.
pub fn ree_embedding<F: TitsField>(f: &F, a: &TElem<F::Elem>) -> Word<F::Elem> {
    let (r, s, t) = (&a.r, &a.s, &a.t);
    let r_th = f.theta(r);
    let rs = f.mul(r, s);
    let params = [
        r.clone(),
        f.sub(&f.mul(&r_th, r), s),
        f.add(t, &rs),
        f.add(&f.sub(&f.mul(&f.mul(&r_th, r), r), &rs), t),
        f.neg(s),
        r.clone(),
    ];
    word_from(f, params.into_iter().enumerate())
}

fn word_from<F: TitsField>(
    f: &F,
    factors: impl Iterator<Item = (usize, F::Elem)>,
) -> Word<F::Elem> {
    factors
        .filter(|(_, c)| !f.is_negligible(c))
        .map(|(root, c)| RootGroupElem::new(root, c))
        .collect()
}

/// `x_i -> x_{tau(i)}` factorwise, which is how the polarity acts on root groups.
pub fn apply_rho<F: TitsField>(
    d: &RootDatum<'_, F>,
    w: &[RootGroupElem<F::Elem>],
) -> Word<F::Elem> {
    w.iter()
        .map(|x| RootGroupElem::new(d.tau[x.root], x.param.clone()))
        .collect()
}

/// A monomial `s^a theta(s)^b t^c theta(t)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub s: (i64, i64),
    pub t: (i64, i64),
}

impl Monomial {
    const fn new(s: (i64, i64), t: (i64, i64)) -> Self {
        Monomial { s, t }
    }

    fn eval<F: TitsField>(&self, f: &F, a: &SElem<F::Elem>) -> F::Elem {
        let part = |x: &F::Elem, (m, n): (i64, i64)| {
            f.twisted_pow(x, m, n)
                .expect("ansatz monomials have non-negative exponents")
        };
        f.mul(&part(&a.s, self.s), &part(&a.t, self.t))
    }

    /// Torus weight `x + y theta` under `s -> l s`, `t -> l^(theta+1) t`, using `theta^2 = 2`.
    pub fn weight(&self) -> (i64, i64) {
        let (a, b) = self.s;
        let (c, d) = self.t;
        (a + c + 2 * d, b + c + d)
    }

    pub fn format(&self) -> String {
        let var = |name: &str, (m, n): (i64, i64)| -> Option<String> {
            match (m, n) {
                (0, 0) => None,
                (1, 0) => Some(name.to_string()),
                (m, 0) => Some(format!("{name}^{m}")),
                (0, 1) => Some(format!("{name}^theta")),
                (0, n) => Some(format!("{name}^({n} theta)")),
                (m, 1) => Some(format!("{name}^(theta+{m})")),
                (m, n) => Some(format!("{name}^({n} theta+{m})")),
            }
        };
        let parts: Vec<String> = [var("s", self.s), var("t", self.t)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Candidate monomials for the middle coefficients, all of the weight of `t` or below.
const ANSATZ: [Monomial; 6] = [
    Monomial::new((0, 0), (1, 0)),
    Monomial::new((1, 1), (0, 0)),
    Monomial::new((2, 0), (0, 0)),
    Monomial::new((0, 1), (0, 0)),
    Monomial::new((1, 0), (0, 0)),
    Monomial::new((0, 0), (0, 1)),
];

/// Solved middle coefficients of `x1(s) x2(c2) x3(c3) x4(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuzukiCoefficients {
    pub c2: Vec<Monomial>,
    pub c3: Vec<Monomial>,
}

impl SuzukiCoefficients {
    pub fn format(&self) -> String {
        let sum = |ms: &[Monomial]| {
            if ms.is_empty() {
                "0".to_string()
            } else {
                ms.iter()
                    .map(Monomial::format)
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        format!("c2 = {}, c3 = {}", sum(&self.c2), sum(&self.c3))
    }
}

fn eval_sum<F: TitsField>(f: &F, ms: &[Monomial], a: &SElem<F::Elem>) -> F::Elem {
    ms.iter()
        .fold(f.zero(), |acc, m| f.add(&acc, &m.eval(f, a)))
}

fn suzuki_word<F: TitsField>(f: &F, c: &SuzukiCoefficients, a: &SElem<F::Elem>) -> Word<F::Elem> {
    let params = [
        a.s.clone(),
        eval_sum(f, &c.c2, a),
        eval_sum(f, &c.c3, a),
        a.s.clone(),
    ];
    word_from(f, params.into_iter().enumerate())
}

/// The embedding is a homomorphism into `U+` whose image words are fixed by the polarity.
fn embedding_holds<F: TitsField>(
    d: &RootDatum<'_, F>,
    c: &SuzukiCoefficients,
    a: &SElem<F::Elem>,
    b: &SElem<F::Elem>,
) -> Result<bool, DatumError> {
    let f = d.field;
    let (wa, wb) = (suzuki_word(f, c, a), suzuki_word(f, c, b));
    let mut prod = wa.clone();
    prod.extend(wb);
    let lhs = d.collect(&prod)?;
    let rhs = suzuki_word(f, c, &s_mul(f, a, b));
    if !d.words_congruent(&lhs, &rhs) {
        return Ok(false);
    }
    let image = d.collect(&apply_rho(d, &wa))?;
    Ok(d.words_congruent(&image, &wa))
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<Monomial>> {
    (0u32..1 << n).map(move |mask| {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ANSATZ[i])
            .collect()
    })
}

/// Searches the ansatz over GF(32) for coefficients passing `probe` random pairs,
/// then accepts the unique survivor only if it passes `confirm` further pairs.
pub fn solve_suzuki(probe: usize, confirm: usize) -> Result<SuzukiCoefficients, DatumError> {
    let f = FiniteField::new(2, 5)?;
    let d = RootDatum::new(Case::B, &f)?;
    let sample_pairs = |label: &str, n: usize| -> Vec<(SElem<_>, SElem<_>)> {
        (0..n)
            .map(|i| {
                let mut rng = stream(0x5a7c, label, i as u64);
                let mut one = || SElem::new(f.sample(&mut rng), f.sample(&mut rng));
                (one(), one())
            })
            .collect()
    };
    let probes = sample_pairs("suzuki-probe", probe);
    let mut found = Vec::new();
    for c2 in subsets(ANSATZ.len()) {
        for c3 in subsets(ANSATZ.len()) {
            let c = SuzukiCoefficients { c2: c2.clone(), c3 };
            let mut ok = true;
            for (a, b) in &probes {
                if !embedding_holds(&d, &c, a, b)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                found.push(c);
            }
        }
    }
    // Adding an additive g(s) to both coefficients composes with the automorphism
    // (s, t) -> (s, t + g(s)) of S; the torus-homogeneous solution is the canonical one.
    let t_weight = ANSATZ[0].weight();
    found.retain(|c| c.c2.iter().chain(&c.c3).all(|m| m.weight() == t_weight));
    let c = match found.len() {
        1 => found.pop().unwrap(),
        n => {
            let all: Vec<String> = found.iter().map(SuzukiCoefficients::format).collect();
            return Err(DatumError::Embedding(format!(
                "{n} ansatz solutions: {}",
                all.join("; ")
            )));
        }
    };
    for (a, b) in sample_pairs("suzuki-confirm", confirm) {
        if !embedding_holds(&d, &c, &a, &b)? {
            return Err(DatumError::Embedding(format!(
                "{} fails confirmation",
                c.format()
            )));
        }
    }
    Ok(c)
}

static SUZUKI: OnceLock<Result<SuzukiCoefficients, DatumError>> = OnceLock::new();

/// The solved coefficients, computed once per process.
pub fn suzuki_coefficients() -> Result<&'static SuzukiCoefficients, DatumError> {
    SUZUKI
        .get_or_init(|| solve_suzuki(24, 200))
        .as_ref()
        .map_err(Clone::clone)
}

/// `x1(s) x2(c2) x3(c3) x4(s)` in the ambient B2 datum.
pub fn suzuki_embedding<F: TitsField>(
    f: &F,
    a: &SElem<F::Elem>,
) -> Result<Word<F::Elem>, DatumError> {
    if f.characteristic() != 2 {
        return Err(DatumError::Embedding(
            "the Suzuki embedding needs characteristic 2".into(),
        ));
    }
    Ok(suzuki_word(f, suzuki_coefficients()?, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::groups::{enumerate_t, t_mul};

    #[test]
    fn ree_embedding_of_a_pure_t_element() {
        let f = FiniteField::new(3, 1).unwrap();
        let a = TElem::new(Gf::ZERO, Gf::ZERO, Gf::ONE);
        assert_eq!(
            ree_embedding(&f, &a),
            vec![
                RootGroupElem::new(2, Gf::ONE),
                RootGroupElem::new(3, Gf::ONE)
            ]
        );
        assert!(ree_embedding(&f, &TElem::new(Gf::ZERO, Gf::ZERO, Gf::ZERO)).is_empty());
    }

    #[test]
    fn ree_embedding_is_a_rho_invariant_homomorphism_on_t3() {
        let f = FiniteField::new(3, 1).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        let all = enumerate_t(&f);
        for a in &all {
            let wa = ree_embedding(&f, a);
            assert_eq!(d.collect(&apply_rho(&d, &wa)).unwrap(), wa);
            for b in &all {
                let mut w = wa.clone();
                w.extend(ree_embedding(&f, b));
                assert_eq!(d.collect(&w).unwrap(), ree_embedding(&f, &t_mul(&f, a, b)));
            }
        }
    }

    #[test]
    fn suzuki_coefficients_are_found() {
        let c = suzuki_coefficients().unwrap();
        assert_eq!(c.c2, vec![ANSATZ[0], ANSATZ[1]]);
        assert_eq!(c.c3, vec![ANSATZ[0]]);
        assert_eq!(c.format(), "c2 = t + s^(theta+1), c3 = t");
    }
}
