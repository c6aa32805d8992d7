//! Root data of the ambient buildings: commutator relations, normal-form
//! collection in `U+`, the torus and reflection tables, and valuations.
//!
//! Roots are indices into a [`RootSystem`]: B2 for case B, G2 for case G and
//! F4 for case F. For B2 and G2 the positive roots `alpha_1 .. alpha_n` are
//! the indices `0 .. n`.
//!
//! Commutators use `[a, b] = a^-1 b^-1 a b`.

pub mod checks;
pub mod embed;
pub mod phi;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, TitsField};
use crate::roots::{RootError, RootSystem, SystemKind};
use crate::Quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    B,
    F,
    G,
}

impl Case {
    pub fn characteristic(self) -> u32 {
        match self {
            Case::B | Case::F => 2,
            Case::G => 3,
        }
    }

    pub fn system_kind(self) -> SystemKind {
        match self {
            Case::B => SystemKind::B2,
            Case::F => SystemKind::F4,
            Case::G => SystemKind::G2,
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        match s.trim() {
            "B" | "b" => Some(Case::B),
            "F" | "f" => Some(Case::F),
            "G" | "g" => Some(Case::G),
            _ => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("case {case} has no commutator relation at {angle} degrees")]
    UnsupportedAngle { case: Case, angle: u32 },
    #[error("no torus weight at {0} degrees")]
    NoTorusWeight(u32),
    #[error("sign table has no entry for ({0}, {1})")]
    MissingSign(usize, usize),
    #[error("torus parameter must be nonzero")]
    ZeroTorusParam,
    #[error("root {0} is not a positive root of a rank-2 system")]
    NotPositive(usize),
    #[error("interval coefficients of ({0}, {1}) do not match the relation")]
    IntervalShape(usize, usize),
    #[error("embedding search: {0}")]
    Embedding(String),
}

/// `x_root(param)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootGroupElem<E> {
    pub root: usize,
    pub param: E,
}

impl<E> RootGroupElem<E> {
    pub fn new(root: usize, param: E) -> Self {
        RootGroupElem { root, param }
    }
}

pub type Word<E> = Vec<RootGroupElem<E>>;

/// A sign together with whether the defining relations force it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignEntry {
    pub sign: i8,
    pub forced: bool,
}

impl SignEntry {
    pub const FORCED_PLUS: SignEntry = SignEntry {
        sign: 1,
        forced: true,
    };
    pub const PLACEHOLDER: SignEntry = SignEntry {
        sign: 1,
        forced: false,
    };
}

/// Signs of `x_beta(t)^{m(x_alpha(1))} = x_{s_alpha(beta)}(+-t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignTable {
    entries: BTreeMap<(usize, usize), SignEntry>,
}

impl SignTable {
    /// Characteristic 2: every sign is `+`.
    pub fn trivial(sys: &RootSystem) -> Self {
        let n = sys.len();
        let entries = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a, b), SignEntry::FORCED_PLUS)))
            .collect();
        SignTable { entries }
    }

    /// Case G: the roots `alpha_7 .. alpha_12` are parametrized by conjugating
    /// `x_1` or `x_6` along the shortest word in `m_1 = m(x_1(1))` and
    /// `m_6 = m(x_6(1))`, which forces `+` on every step of those words. The
    /// remaining entries are placeholders.
    pub fn g2(sys: &RootSystem) -> Result<Self, DatumError> {
        let mut table = SignTable::trivial(sys);
        for e in table.entries.values_mut() {
            *e = SignEntry::PLACEHOLDER;
        }
        let n = sys.len() / 2;
        let gens = [0usize, n - 1];
        for target in n..2 * n {
            // Odd-numbered targets start from alpha_1, even ones from alpha_6 (1-based).
            let start = if (target + 1) % 2 == 1 { 0 } else { n - 1 };
            let path = shortest_reflection_path(sys, &gens, start, target)?;
            for (alpha, beta) in path {
                table.entries.insert((alpha, beta), SignEntry::FORCED_PLUS);
            }
        }
        Ok(table)
    }

    pub fn get(&self, alpha: usize, beta: usize) -> Result<SignEntry, DatumError> {
        self.entries
            .get(&(alpha, beta))
            .copied()
            .ok_or(DatumError::MissingSign(alpha, beta))
    }

    /// Drops every placeholder entry; used for fault injection.
    pub fn without_placeholders(&self) -> Self {
        SignTable {
            entries: self
                .entries
                .iter()
                .filter(|(_, e)| e.forced)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    pub fn forced(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|(_, e)| e.forced)
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn unforced(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.forced)
            .map(|(k, _)| *k)
            .collect()
    }
}

/// Steps `(alpha, beta)` of the unique shortest path from `start` to `target`
/// under the reflections in `gens`, as (reflecting root, root reflected).
fn shortest_reflection_path(
    sys: &RootSystem,
    gens: &[usize],
    start: usize,
    target: usize,
) -> Result<Vec<(usize, usize)>, DatumError> {
    let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            break;
        }
        for &g in gens {
            let y = sys.reflect(g, x)?;
            if seen.insert(y) {
                prev.insert(y, (g, x));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = target;
    while cur != start {
        let &(g, x) = prev
            .get(&cur)
            .ok_or_else(|| DatumError::Embedding("unreachable root".into()))?;
        path.push((g, x));
        cur = x;
    }
    path.reverse();
    Ok(path)
}

/// Signs `epsilon` of the 120 and 150 degree relations in case G, keyed by ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsTable {
    entries: BTreeMap<(usize, usize), (Vec<i8>, bool)>,
}

impl EpsTable {
    pub fn trivial() -> Self {
        EpsTable {
            entries: BTreeMap::new(),
        }
    }

    /// Fixed by the three relations among positive roots and their inverses;
    /// every other pair gets placeholder `+` signs.
    pub fn g2(sys: &RootSystem) -> Result<Self, DatumError> {
        let mut entries = BTreeMap::new();
        for a in 0..sys.len() {
            for b in 0..sys.len() {
                match sys.angle(a, b)? {
                    120 => entries.insert((a, b), (vec![1], false)),
                    150 => entries.insert((a, b), (vec![1, 1, 1, 1], false)),
                    _ => None,
                };
            }
        }
        let forced: [((usize, usize), Vec<i8>); 6] = [
            ((0, 5), vec![-1, -1, 1, 1]),
            ((5, 0), vec![-1, -1, 1, 1]),
            ((0, 4), vec![-1]),
            ((4, 0), vec![1]),
            ((1, 5), vec![1]),
            ((5, 1), vec![-1]),
        ];
        for (k, v) in forced {
            entries.insert(k, (v, true));
        }
        Ok(EpsTable { entries })
    }

    fn get(&self, alpha: usize, beta: usize, len: usize) -> Vec<i8> {
        self.entries
            .get(&(alpha, beta))
            .map(|e| e.0.clone())
            .unwrap_or_else(|| vec![1; len])
    }

    pub fn unforced(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.1)
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn is_forced(&self, alpha: usize, beta: usize) -> bool {
        self.entries.get(&(alpha, beta)).is_none_or(|e| e.1)
    }
}

/// Weights `u^m theta(u)^n` of `x_beta(t)^{h(u)} = x_beta(u^m theta(u)^n t)`,
/// keyed by the angle from `alpha` to `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusTable {
    weights: BTreeMap<u32, (i64, i64)>,
}

impl TorusTable {
    pub fn new(case: Case) -> Self {
        let mut w: BTreeMap<u32, (i64, i64)> = [
            (0, (-2, 0)),
            (60, (-1, 0)),
            (90, (0, 0)),
            (120, (1, 0)),
            (180, (2, 0)),
        ]
        .into_iter()
        .collect();
        match case {
            Case::B | Case::F => {
                w.insert(45, (0, -1));
                w.insert(135, (0, 1));
            }
            Case::G => {
                w.insert(30, (0, -1));
                w.insert(150, (0, 1));
            }
        }
        TorusTable { weights: w }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u32, (i64, i64))>) -> Self {
        TorusTable {
            weights: entries.into_iter().collect(),
        }
    }

    pub fn weight(&self, angle: u32) -> Result<(i64, i64), DatumError> {
        self.weights
            .get(&angle)
            .copied()
            .ok_or(DatumError::NoTorusWeight(angle))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, (i64, i64))> + '_ {
        self.weights.iter().map(|(a, w)| (*a, *w))
    }
}

/// The ambient root datum of one case over a field.
pub struct RootDatum<'f, F: TitsField> {
    pub case: Case,
    pub field: &'f F,
    pub sys: RootSystem,
    pub tau: Vec<usize>,
    pub eps: EpsTable,
    pub signs: SignTable,
    pub torus: TorusTable,
}

impl<'f, F: TitsField> RootDatum<'f, F> {
    pub fn new(case: Case, field: &'f F) -> Result<Self, DatumError> {
        if field.characteristic() != case.characteristic() {
            return Err(DatumError::Field(FieldError::Config(format!(
                "case {case} needs characteristic {}",
                case.characteristic()
            ))));
        }
        let sys = RootSystem::new(case.system_kind())?;
        let tau = sys.chamber_involution()?;
        let (eps, signs) = match case {
            Case::G => (EpsTable::g2(&sys)?, SignTable::g2(&sys)?),
            _ => (EpsTable::trivial(), SignTable::trivial(&sys)),
        };
        Ok(RootDatum {
            case,
            field,
            sys,
            tau,
            eps,
            signs,
            torus: TorusTable::new(case),
        })
    }

    fn f(&self) -> &F {
        self.field
    }

    /// Factors of `[x_alpha(s), x_beta(t)]`, in order of angle from `alpha`.
    pub fn commutator(
        &self,
        alpha: usize,
        s: &F::Elem,
        beta: usize,
        t: &F::Elem,
    ) -> Result<Word<F::Elem>, DatumError> {
        let f = self.f();
        let angle = self.sys.angle(alpha, beta)?;
        if angle == 180 || angle == 0 {
            return Err(RootError::Parallel(alpha, beta).into());
        }
        if angle <= 90 {
            return Ok(Vec::new());
        }
        let iv = self.sys.interval(alpha, beta)?;
        let p = self.sys.radicand();
        let r = Quad::sqrt_p(p);
        let find = |pc: &Quad, qc: &Quad| -> Result<usize, DatumError> {
            iv.iter()
                .find(|g| &g.p == pc && &g.q == qc)
                .map(|g| g.root)
                .ok_or(DatumError::IntervalShape(alpha, beta))
        };
        let one = Quad::one(p);
        let two = Quad::from_int(2, p);
        let (th_s, th_t) = (f.theta(s), f.theta(t));
        let signed = |sign: i8, x: F::Elem| if sign < 0 { f.neg(&x) } else { x };
        let mut out = Vec::new();
        match (angle, self.case) {
            (120, _) => {
                let eps = self.eps.get(alpha, beta, 1);
                out.push(RootGroupElem::new(
                    find(&one, &one)?,
                    signed(eps[0], f.mul(s, t)),
                ));
            }
            (135, Case::B | Case::F) => {
                out.push(RootGroupElem::new(find(&r, &one)?, f.mul(&th_s, t)));
                out.push(RootGroupElem::new(find(&one, &r)?, f.mul(s, &th_t)));
            }
            (150, Case::G) => {
                let eps = self.eps.get(alpha, beta, 4);
                let params = [
                    (find(&r, &one)?, f.mul(&th_s, t)),
                    (find(&two, &r)?, f.mul(&f.mul(s, s), &th_t)),
                    (find(&r, &two)?, f.mul(&th_s, &f.mul(t, t))),
                    (find(&one, &r)?, f.mul(s, &th_t)),
                ];
                for (k, (root, c)) in params.into_iter().enumerate() {
                    out.push(RootGroupElem::new(root, signed(eps[k], c)));
                }
            }
            _ => {
                return Err(DatumError::UnsupportedAngle {
                    case: self.case,
                    angle,
                })
            }
        }
        out.retain(|x| !f.is_negligible(&x.param));
        Ok(out)
    }

    fn positive_n(&self) -> Result<usize, DatumError> {
        self.sys
            .rank2_n()
            .ok_or(DatumError::Root(RootError::Unsupported(self.sys.kind())))
    }

    /// Normal form of a word over the positive roots, ordered `alpha_1 .. alpha_n`.
    ///
    /// Rewrites `x_i(s) x_j(t)` with `j < i` as `x_j(t) x_i(s) [x_j(t), x_i(s)]^-1`
    /// and merges equal neighbours; every new factor lies strictly between `j` and `i`.
    pub fn collect(&self, word: &[RootGroupElem<F::Elem>]) -> Result<Word<F::Elem>, DatumError> {
        self.collect_with(word, |_| 0)
    }

    /// [`collect`](Self::collect) where `choose(k)` picks which of the `k` reducible
    /// adjacent positions is rewritten next.
    pub fn collect_with(
        &self,
        word: &[RootGroupElem<F::Elem>],
        mut choose: impl FnMut(usize) -> usize,
    ) -> Result<Word<F::Elem>, DatumError> {
        let f = self.f();
        let n = self.positive_n()?;
        if let Some(x) = word.iter().find(|x| x.root >= n) {
            return Err(DatumError::NotPositive(x.root));
        }
        let mut w: Word<F::Elem> = word
            .iter()
            .filter(|x| !f.is_negligible(&x.param))
            .cloned()
            .collect();
        loop {
            let open: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&k| w[k].root >= w[k + 1].root)
                .collect();
            if open.is_empty() {
                return Ok(w);
            }
            let k = open[choose(open.len()).min(open.len() - 1)];
            let (i, j) = (w[k].root, w[k + 1].root);
            if i == j {
                let c = f.add(&w[k].param, &w[k + 1].param);
                let merged: Word<F::Elem> = if f.is_negligible(&c) {
                    vec![]
                } else {
                    vec![RootGroupElem::new(i, c)]
                };
                w.splice(k..k + 2, merged);
            } else {
                let (xi, xj) = (w[k].clone(), w[k + 1].clone());
                let comm = self.commutator(j, &xj.param, i, &xi.param)?;
                let mut repl = vec![xj, xi];
                repl.extend(
                    comm.into_iter()
                        .rev()
                        .map(|x| RootGroupElem::new(x.root, f.neg(&x.param))),
                );
                w.splice(k..k + 2, repl);
            }
        }
    }

    /// Parameter of `x_beta(t)^{h(u)}` for `h(u)` based at `alpha`.
    pub fn torus_conj(
        &self,
        alpha: usize,
        u: &F::Elem,
        elem: &RootGroupElem<F::Elem>,
    ) -> Result<RootGroupElem<F::Elem>, DatumError> {
        self.torus_conj_in(&self.torus, alpha, u, elem)
    }

    /// [`torus_conj`](Self::torus_conj) with another weight table.
    pub fn torus_conj_in(
        &self,
        table: &TorusTable,
        alpha: usize,
        u: &F::Elem,
        elem: &RootGroupElem<F::Elem>,
    ) -> Result<RootGroupElem<F::Elem>, DatumError> {
        let f = self.f();
        if f.is_negligible(u) {
            return Err(DatumError::ZeroTorusParam);
        }
        let (m, n) = table.weight(self.sys.angle(alpha, elem.root)?)?;
        let w = f.twisted_pow(u, m, n)?;
        Ok(RootGroupElem::new(elem.root, f.mul(&w, &elem.param)))
    }

    /// `x_beta(t)^{m(x_alpha(1))} = x_{s_alpha(beta)}(+-t)`.
    pub fn m_conj(
        &self,
        alpha: usize,
        elem: &RootGroupElem<F::Elem>,
    ) -> Result<RootGroupElem<F::Elem>, DatumError> {
        let e = self.signs.get(alpha, elem.root)?;
        let root = self.sys.reflect(alpha, elem.root)?;
        let param = if e.sign < 0 {
            self.f().neg(&elem.param)
        } else {
            elem.param.clone()
        };
        Ok(RootGroupElem::new(root, param))
    }

    /// `x_beta(t)^{m(x_alpha(u))}`: the torus element `h(u)` acts first, then `m(x_alpha(1))`.
    pub fn m_sigma(
        &self,
        alpha: usize,
        u: &F::Elem,
        elem: &RootGroupElem<F::Elem>,
    ) -> Result<RootGroupElem<F::Elem>, DatumError> {
        let h = self.torus_conj(alpha, u, elem)?;
        self.m_conj(alpha, &h)
    }

    /// Word equality up to field congruence.
    pub fn words_congruent(
        &self,
        a: &[RootGroupElem<F::Elem>],
        b: &[RootGroupElem<F::Elem>],
    ) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| x.root == y.root && self.f().congruent(&x.param, &y.param))
    }

    pub fn format_word(&self, w: &[RootGroupElem<F::Elem>]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|x| format!("x{}({})", x.root + 1, self.f().format_elem(&x.param)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Ordered pairs `(alpha, beta)`, not parallel, whose interval is nonempty.
    pub fn pairs_with_interval(&self) -> Result<Vec<(usize, usize)>, DatumError> {
        let mut out = Vec::new();
        for a in 0..self.sys.len() {
            for b in 0..self.sys.len() {
                let angle = self.sys.angle(a, b)?;
                if angle == 0 || angle == 180 {
                    continue;
                }
                if !self.sys.interval(a, b)?.is_empty() {
                    out.push((a, b));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Gf};
    use crate::rng::stream;

    fn x(root: usize, param: Gf) -> RootGroupElem<Gf> {
        RootGroupElem::new(root, param)
    }

    #[test]
    fn g2_fundamental_commutator_at_one() {
        let f = FiniteField::new(3, 1).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        let m1 = f.from_int(-1);
        let w = d.commutator(0, &Gf::ONE, 5, &Gf::ONE).unwrap();
        assert_eq!(w, vec![x(1, m1), x(2, m1), x(3, Gf::ONE), x(4, Gf::ONE)]);
        assert!(d.commutator(0, &Gf::ONE, 3, &Gf::ONE).unwrap().is_empty());
    }

    #[test]
    fn b2_commutator_at_135() {
        let f = FiniteField::new(2, 3).unwrap();
        let d = RootDatum::new(Case::B, &f).unwrap();
        let g = f.generator();
        let w = d.commutator(0, &g, 3, &Gf::ONE).unwrap();
        assert_eq!(w, vec![x(1, f.theta(g)), x(2, g)]);
        let g2 = RootDatum::new(Case::G, &FiniteField::new(3, 1).unwrap()).map(|_| ());
        assert!(g2.is_ok());
    }

    #[test]
    fn collect_moves_x6_past_x1() {
        let f = FiniteField::new(3, 3).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        let mut rng = stream(5, "collect", 0);
        for _ in 0..50 {
            let s = crate::field::TitsField::sample(&f, &mut rng);
            let t = crate::field::TitsField::sample(&f, &mut rng);
            let got = d.collect(&[x(5, t), x(0, s)]).unwrap();
            let th = |a| f.theta(a);
            let expected: Vec<_> = vec![
                x(0, s),
                x(1, f.mul(th(s), t)),
                x(2, f.mul(f.mul(s, s), th(t))),
                x(3, f.mul(th(s), f.mul(t, t))),
                x(4, f.neg(f.mul(s, th(t)))),
                x(5, t),
            ]
            .into_iter()
            .filter(|e| !e.param.is_zero())
            .collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn collect_merges_and_is_idempotent() {
        let f = FiniteField::new(3, 3).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        let (a, b) = (f.generator(), f.from_int(1));
        assert_eq!(
            d.collect(&[x(0, a), x(0, b)]).unwrap(),
            vec![x(0, f.add(a, b))]
        );
        let normal = vec![x(0, a), x(2, b), x(5, a)];
        assert_eq!(d.collect(&normal).unwrap(), normal);
        assert_eq!(d.collect(&[x(7, a)]), Err(DatumError::NotPositive(7)));
    }

    #[test]
    fn forced_m_signs_follow_the_parametrization_words() {
        let f = FiniteField::new(3, 1).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        let forced = d.signs.forced();
        assert_eq!(
            forced,
            vec![(0, 0), (0, 10), (0, 11), (5, 5), (5, 6), (5, 7)]
        );
    }

    #[test]
    fn torus_and_reflection() {
        let f = FiniteField::new(3, 3).unwrap();
        let d = RootDatum::new(Case::G, &f).unwrap();
        let u = f.generator();
        let t = f.from_int(1);
        let same = d.torus_conj(0, &u, &x(0, t)).unwrap();
        assert_eq!(same.param, f.pow(u, -2).unwrap());
        assert_eq!(d.torus_conj(0, &u, &x(3, t)).unwrap().param, t);
        assert_eq!(
            d.torus_conj(0, &u, &x(1, t)).unwrap().param,
            f.inv(f.theta(u)).unwrap()
        );
        assert_eq!(
            d.torus_conj(0, &Gf::ZERO, &x(1, t)),
            Err(DatumError::ZeroTorusParam)
        );
        assert_eq!(d.m_conj(0, &x(0, t)).unwrap(), x(6, t));
        let twice = d.m_conj(2, &d.m_conj(2, &x(4, t)).unwrap()).unwrap();
        assert_eq!(twice.root, 4);
        let corrupted = d.signs.without_placeholders();
        assert!(corrupted.get(2, 4).is_err());
        assert!(corrupted.get(0, 0).is_ok());
    }
}
