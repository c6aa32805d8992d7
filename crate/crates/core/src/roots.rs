//! Root systems with unit-length roots and a binary length-class label.
//!
//! Rank-2 systems B2 (n = 4) and G2 (n = 6) have `2n` roots, root `k` at
//! angle `k pi / n`, class `k mod 2`; their positive roots are `0..n`, and the
//! simple roots are `0` and `n - 1`. F4 has 48 roots in `Q(sqrt 2)^4`, the
//! classical short roots in class 0. Folding produces A1 (from B2, G2) and
//! I2(8) (from F4) with unnormalized directions `a + tau(a)`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::ScalarError;
use crate::Quad;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root {0} is not in the system")]
    NotInSystem(usize),
    #[error("roots {0} and {1} are parallel")]
    Parallel(usize, usize),
    #[error("{0:?} has no polarity")]
    NoPolarity(SystemKind),
    #[error("operation unsupported for {0:?}")]
    Unsupported(SystemKind),
    #[error("angle between roots {0} and {1} is not in the angle table")]
    UnknownAngle(usize, usize),
    #[error("search failed: {0}")]
    Search(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    A1,
    B2,
    G2,
    F4,
    I2_8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub index: usize,
    pub coords: Vec<Quad>,
    pub class: u8,
}

/// An interval root `gamma` with `gamma = p alpha + q beta` (unit vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRoot {
    pub root: usize,
    pub p: Quad,
    pub q: Quad,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: SystemKind,
    roots: Vec<Root>,
    p: u32,
    lookup: HashMap<Vec<Quad>, usize>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact `(cos, sin)` of an angle in degrees that is a multiple of 30 or 45.
fn cos_sin(deg: i64, p: u32) -> (Quad, Quad) {
    let d = deg.rem_euclid(360);
    let first = |a: i64| -> (Quad, Quad) {
        let half = Quad::new(rat(1, 2), BigRational::zero(), p);
        let root_half = Quad::new(BigRational::zero(), rat(1, 2), p);
        match a {
            0 => (Quad::one(p), Quad::zero(p)),
            30 => (root_half, half),
            45 => (root_half.clone(), root_half),
            60 => (half, root_half),
            90 => (Quad::zero(p), Quad::one(p)),
            _ => unreachable!("angle {a} not tabulated"),
        }
    };
    let (c, s) = match d {
        0..=90 => first(d),
        91..=180 => {
            let (c, s) = first(180 - d);
            (-c, s)
        }
        181..=270 => {
            let (c, s) = first(d - 180);
            (-c, -s)
        }
        _ => {
            let (c, s) = first(360 - d);
            (c, -s)
        }
    };
    (c, s)
}

pub fn dot(a: &[Quad], b: &[Quad]) -> Quad {
    let p = a[0].radicand();
    a.iter()
        .zip(b)
        .fold(Quad::zero(p), |acc, (x, y)| acc + x * y)
}

fn scale(v: &[Quad], k: &Quad) -> Vec<Quad> {
    v.iter().map(|x| x * k).collect()
}

fn add(a: &[Quad], b: &[Quad]) -> Vec<Quad> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Solves `m x = rhs` by Gaussian elimination; `None` if singular.
fn solve(mut m: Vec<Vec<Quad>>, mut rhs: Vec<Quad>) -> Option<Vec<Quad>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip().ok()?;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
                let t = &f * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
    }
    Some(
        (0..n)
            .map(|i| &rhs[i] * &m[i][i].recip().unwrap())
            .collect(),
    )
}

impl RootSystem {
    fn from_roots(kind: SystemKind, p: u32, roots: Vec<Root>) -> Self {
        let lookup = roots.iter().map(|r| (r.coords.clone(), r.index)).collect();
        RootSystem {
            kind,
            roots,
            p,
            lookup,
        }
    }

    /// B2, G2, F4 or A1 (the latter as `{1, -1}` on a line).
    pub fn new(kind: SystemKind) -> Result<Self, RootError> {
        match kind {
            SystemKind::B2 => Ok(Self::rank2(4, 2, kind)),
            SystemKind::G2 => Ok(Self::rank2(6, 3, kind)),
            SystemKind::F4 => Ok(Self::f4()),
            SystemKind::A1 => {
                let roots = [1, -1]
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| Root {
                        index: i,
                        coords: vec![Quad::from_int(s, 2)],
                        class: 0,
                    })
                    .collect();
                Ok(Self::from_roots(kind, 2, roots))
            }
            SystemKind::I2_8 => Err(RootError::Unsupported(kind)),
        }
    }

    fn rank2(n: usize, p: u32, kind: SystemKind) -> Self {
        let step = 180 / n as i64;
        let roots = (0..2 * n)
            .map(|k| {
                let (c, s) = cos_sin(step * k as i64, p);
                Root {
                    index: k,
                    coords: vec![c, s],
                    class: (k % 2) as u8,
                }
            })
            .collect();
        Self::from_roots(kind, p, roots)
    }

    fn f4() -> Self {
        let p = 2;
        let inv_sqrt2 = Quad::new(BigRational::zero(), rat(1, 2), p);
        let half = Quad::new(rat(1, 2), BigRational::zero(), p);
        let mut raw: Vec<(Vec<Quad>, u8)> = Vec::new();
        for i in 0..4 {
            for s in [1, -1] {
                let mut v = vec![Quad::zero(p); 4];
                v[i] = Quad::from_int(s, p);
                raw.push((v, 0));
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![Quad::zero(p); 4];
                    v[i] = inv_sqrt2.scale(&BigRational::from_integer(s.into()));
                    v[j] = inv_sqrt2.scale(&BigRational::from_integer(t.into()));
                    raw.push((v, 1));
                }
            }
        }
        for mask in 0..16u32 {
            let v = (0..4)
                .map(|i| {
                    if mask >> (3 - i) & 1 == 1 {
                        -half.clone()
                    } else {
                        half.clone()
                    }
                })
                .collect();
            raw.push((v, 0));
        }
        let roots = raw
            .into_iter()
            .enumerate()
            .map(|(index, (coords, class))| Root {
                index,
                coords,
                class,
            })
            .collect();
        Self::from_roots(SystemKind::F4, p, roots)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn radicand(&self) -> u32 {
        self.p
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> Result<&Root, RootError> {
        self.roots.get(i).ok_or(RootError::NotInSystem(i))
    }

    /// Half the number of roots for B2 and G2.
    pub fn rank2_n(&self) -> Option<usize> {
        match self.kind {
            SystemKind::B2 | SystemKind::G2 => Some(self.roots.len() / 2),
            _ => None,
        }
    }

    pub fn find(&self, coords: &[Quad]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    pub fn length_class(&self, i: usize) -> Result<u8, RootError> {
        Ok(self.root(i)?.class)
    }

    pub fn dot(&self, i: usize, j: usize) -> Result<Quad, RootError> {
        Ok(dot(&self.root(i)?.coords, &self.root(j)?.coords))
    }

    pub fn negate(&self, i: usize) -> Result<usize, RootError> {
        let v: Vec<Quad> = self.root(i)?.coords.iter().map(|x| -x.clone()).collect();
        self.find(&v).ok_or(RootError::NotInSystem(i))
    }

    /// `s_alpha(v) = v - 2 (v . alpha)/(alpha . alpha) alpha`.
    pub fn reflect(&self, alpha: usize, v: usize) -> Result<usize, RootError> {
        let a = &self.root(alpha)?.coords;
        let x = &self.root(v)?.coords;
        let k = (dot(x, a).scale(&BigRational::from_integer(2.into()))).try_div(&dot(a, a))?;
        let img: Vec<Quad> = x.iter().zip(a).map(|(xi, ai)| xi - &(&k * ai)).collect();
        self.find(&img).ok_or(RootError::NotInSystem(v))
    }

    /// Squared cosine and sign of the dot product.
    pub fn cos2(&self, i: usize, j: usize) -> Result<(Quad, i8), RootError> {
        let a = &self.root(i)?.coords;
        let b = &self.root(j)?.coords;
        let d = dot(a, b);
        let c2 = (&d * &d).try_div(&(dot(a, a) * dot(b, b)))?;
        Ok((c2, d.signum_i8()))
    }

    /// Angle in degrees, for angles that are multiples of 30 or 45.
    pub fn angle(&self, i: usize, j: usize) -> Result<u32, RootError> {
        let (c2, sign) = self.cos2(i, j)?;
        let table: [(BigRational, u32); 5] = [
            (rat(1, 1), 0),
            (rat(3, 4), 30),
            (rat(1, 2), 45),
            (rat(1, 4), 60),
            (rat(0, 1), 90),
        ];
        if !c2.irr().is_zero() {
            return Err(RootError::UnknownAngle(i, j));
        }
        let acute = table
            .iter()
            .find(|(c, _)| c == c2.rat())
            .map(|&(_, d)| d)
            .ok_or(RootError::UnknownAngle(i, j))?;
        Ok(if sign < 0 { 180 - acute } else { acute })
    }

    /// Roots strictly inside the cone spanned by `alpha` and `beta`, ordered
    /// by angle from `alpha`, with their unit-vector coefficients.
    pub fn interval(&self, alpha: usize, beta: usize) -> Result<Vec<IntervalRoot>, RootError> {
        if !matches!(
            self.kind,
            SystemKind::B2 | SystemKind::G2 | SystemKind::F4 | SystemKind::A1
        ) {
            return Err(RootError::Unsupported(self.kind));
        }
        let a = &self.root(alpha)?.coords;
        let b = &self.root(beta)?.coords;
        let ab = dot(a, b);
        if (&ab * &ab) == dot(a, a) * dot(b, b) {
            return Err(RootError::Parallel(alpha, beta));
        }
        let gram = vec![vec![dot(a, a), ab.clone()], vec![ab, dot(b, b)]];
        let mut out = Vec::new();
        for g in &self.roots {
            if g.index == alpha || g.index == beta {
                continue;
            }
            let rhs = vec![dot(&g.coords, a), dot(&g.coords, b)];
            let Some(pq) = solve(gram.clone(), rhs) else {
                continue;
            };
            if !pq[0].is_positive() || !pq[1].is_positive() {
                continue;
            }
            if add(&scale(a, &pq[0]), &scale(b, &pq[1])) != g.coords {
                continue;
            }
            out.push(IntervalRoot {
                root: g.index,
                p: pq[0].clone(),
                q: pq[1].clone(),
            });
        }
        out.sort_by(|x, y| {
            let cx = dot(&self.roots[x.root].coords, a);
            let cy = dot(&self.roots[y.root].coords, a);
            cy.partial_cmp(&cx).expect("same radicand")
        });
        Ok(out)
    }

    /// Simple roots fixing the fundamental sector.
    pub fn simple_roots(&self) -> Result<Vec<usize>, RootError> {
        match self.kind {
            SystemKind::B2 | SystemKind::G2 => Ok(vec![0, self.roots.len() / 2 - 1]),
            SystemKind::F4 => {
                let p = self.p;
                let r2 = Quad::new(BigRational::zero(), rat(1, 2), p);
                let h = Quad::new(rat(1, 2), BigRational::zero(), p);
                let z = Quad::zero(p);
                let vecs = [
                    vec![z.clone(), r2.clone(), -r2.clone(), z.clone()],
                    vec![z.clone(), z.clone(), r2.clone(), -r2.clone()],
                    vec![z.clone(), z.clone(), z.clone(), Quad::one(p)],
                    vec![h.clone(), -h.clone(), -h.clone(), -h],
                ];
                vecs.iter()
                    .map(|v| {
                        self.find(v)
                            .ok_or_else(|| RootError::Search("simple root".into()))
                    })
                    .collect()
            }
            k => Err(RootError::NoPolarity(k)),
        }
    }

    /// The non-trivial isometry preserving the simple roots, as a permutation.
    ///
    /// Every Gram-preserving permutation of the simple roots is tried; the
    /// induced linear map must permute all roots.
    pub fn chamber_involution(&self) -> Result<Vec<usize>, RootError> {
        let simple = self.simple_roots()?;
        let r = simple.len();
        let gram: Vec<Vec<Quad>> = simple
            .iter()
            .map(|&i| simple.iter().map(|&j| self.dot(i, j).unwrap()).collect())
            .collect();
        let mut found = Vec::new();
        for perm in permutations(r) {
            if perm.iter().enumerate().all(|(i, &j)| i == j) {
                continue;
            }
            let ok = (0..r).all(|i| (0..r).all(|j| gram[perm[i]][perm[j]] == gram[i][j]));
            if !ok {
                continue;
            }
            if let Some(map) = self.induced_permutation(&simple, &perm) {
                found.push(map);
            }
        }
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            n => Err(RootError::Search(format!("{n} candidate polarities"))),
        }
    }

    /// Image of every root under the linear map sending `simple[i]` to `simple[perm[i]]`.
    fn induced_permutation(&self, simple: &[usize], perm: &[usize]) -> Option<Vec<usize>> {
        let dim = self.roots[0].coords.len();
        // Express each root in the simple basis through the Gram system, then map.
        let basis: Vec<&Vec<Quad>> = simple.iter().map(|&i| &self.roots[i].coords).collect();
        let gram: Vec<Vec<Quad>> = basis
            .iter()
            .map(|u| basis.iter().map(|v| dot(u, v)).collect())
            .collect();
        let mut out = Vec::with_capacity(self.roots.len());
        for root in &self.roots {
            let rhs = basis.iter().map(|u| dot(&root.coords, u)).collect();
            let c = solve(gram.clone(), rhs)?;
            let mut img = vec![Quad::zero(self.p); dim];
            for (i, ci) in c.iter().enumerate() {
                img = add(&img, &scale(basis[perm[i]], ci));
            }
            out.push(self.find(&img)?);
        }
        Some(out)
    }

    /// `a -> a + tau(a)`, deduplicated by direction.
    pub fn fold(&self) -> Result<Folded, RootError> {
        let tau = self.chamber_involution()?;
        let mut dirs: Vec<Vec<Quad>> = Vec::new();
        let mut orthogonal_preimage: Vec<bool> = Vec::new();
        let mut projection = Vec::with_capacity(self.roots.len());
        for root in &self.roots {
            let img = &self.roots[tau[root.index]].coords;
            let v = add(&root.coords, img);
            let pos = dirs.iter().position(|d| same_direction(d, &v));
            let idx = match pos {
                Some(i) => i,
                None => {
                    dirs.push(v);
                    orthogonal_preimage.push(dot(&root.coords, img).is_zero());
                    dirs.len() - 1
                }
            };
            projection.push(idx);
        }
        let (kind, order): (SystemKind, Vec<usize>) = match dirs.len() {
            2 => (SystemKind::A1, vec![0, 1]),
            16 => {
                let start = projection[self.simple_roots()?[0]];
                (SystemKind::I2_8, fan_order(&dirs, start)?)
            }
            n => return Err(RootError::Search(format!("{n} folded directions"))),
        };
        let mut rank = vec![0; dirs.len()];
        for (k, &d) in order.iter().enumerate() {
            rank[d] = k;
        }
        let roots = order
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let class = match kind {
                    SystemKind::I2_8 => u8::from(!orthogonal_preimage[d]),
                    _ => 0,
                };
                Root {
                    index: k,
                    coords: dirs[d].clone(),
                    class,
                }
            })
            .collect();
        let projection = projection.into_iter().map(|d| rank[d]).collect();
        Ok(Folded {
            system: Self::from_roots(kind, self.p, roots),
            projection,
        })
    }
}

/// Walks a fan of directions by nearest neighbours at angle `pi/8`.
fn fan_order(dirs: &[Vec<Quad>], start: usize) -> Result<Vec<usize>, RootError> {
    let target = cos2_pi_over_8(dirs[0][0].radicand());
    let neighbours = |i: usize| -> Vec<usize> {
        (0..dirs.len())
            .filter(|&j| {
                let d = dot(&dirs[i], &dirs[j]);
                j != i
                    && d.is_positive()
                    && (&d * &d)
                        .try_div(&(dot(&dirs[i], &dirs[i]) * dot(&dirs[j], &dirs[j])))
                        .ok()
                        == Some(target.clone())
            })
            .collect()
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let nb = neighbours(cur);
        if nb.len() != 2 {
            return Err(RootError::Search(
                "direction without two pi/8 neighbours".into(),
            ));
        }
        let next = if prev == usize::MAX {
            nb[0].min(nb[1])
        } else if nb[0] == prev {
            nb[1]
        } else {
            nb[0]
        };
        if next == start {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
        if order.len() > dirs.len() {
            return Err(RootError::Search("fan walk does not close".into()));
        }
    }
    if order.len() != dirs.len() {
        return Err(RootError::Search("fan walk misses directions".into()));
    }
    Ok(order)
}

/// `cos^2(pi/8) = (2 + sqrt 2)/4`.
pub fn cos2_pi_over_8(p: u32) -> Quad {
    Quad::new(rat(1, 2), rat(1, 4), p)
}

fn same_direction(a: &[Quad], b: &[Quad]) -> bool {
    let d = dot(a, b);
    d.is_positive() && &d * &d == dot(a, a) * dot(b, b)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// A folded system with the projection from the ambient roots.
#[derive(Debug, Clone)]
pub struct Folded {
    pub system: RootSystem,
    pub projection: Vec<usize>,
}

impl Folded {
    /// Squared cosines between consecutive directions of the fan.
    pub fn consecutive_cos2(&self) -> Result<Vec<Quad>, RootError> {
        let n = self.system.len();
        (0..n)
            .map(|k| Ok(self.system.cos2(k, (k + 1) % n)?.0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(k: SystemKind) -> RootSystem {
        RootSystem::new(k).unwrap()
    }

    #[test]
    fn counts_and_classes() {
        assert_eq!(sys(SystemKind::B2).len(), 8);
        assert_eq!(sys(SystemKind::G2).len(), 12);
        assert_eq!(sys(SystemKind::A1).len(), 2);
        let f4 = sys(SystemKind::F4);
        assert_eq!(f4.len(), 48);
        assert_eq!(f4.roots().iter().filter(|r| r.class == 0).count(), 24);
        for r in f4.roots() {
            assert_eq!(dot(&r.coords, &r.coords), Quad::one(2));
        }
        assert_eq!(f4.length_class(0).unwrap(), 0);
        let b2 = sys(SystemKind::B2);
        assert_eq!(
            (b2.length_class(0).unwrap(), b2.length_class(1).unwrap()),
            (0, 1)
        );
    }

    #[test]
    fn reflections() {
        let b2 = sys(SystemKind::B2);
        assert_eq!(b2.reflect(0, 0).unwrap(), 4);
        assert_eq!(b2.reflect(0, 1).unwrap(), 3);
        assert_eq!(sys(SystemKind::G2).reflect(2, 5).unwrap(), 5);
        for s in [b2, sys(SystemKind::G2)] {
            let n = s.len() / 2;
            for j in 0..2 * n {
                for k in 0..2 * n {
                    assert_eq!(s.reflect(j, k).unwrap(), (n + 2 * j + 2 * n - k) % (2 * n));
                }
            }
        }
    }

    #[test]
    fn intervals() {
        let b2 = sys(SystemKind::B2);
        let r2 = Quad::sqrt_p(2);
        assert_eq!(
            b2.interval(0, 3).unwrap(),
            vec![
                IntervalRoot {
                    root: 1,
                    p: r2.clone(),
                    q: Quad::one(2)
                },
                IntervalRoot {
                    root: 2,
                    p: Quad::one(2),
                    q: r2
                },
            ]
        );
        assert!(b2.interval(0, 1).unwrap().is_empty());
        assert_eq!(b2.interval(0, 4), Err(RootError::Parallel(0, 4)));
        let g2 = sys(SystemKind::G2);
        let r3 = Quad::sqrt_p(3);
        let got: Vec<(usize, Quad, Quad)> = g2
            .interval(0, 5)
            .unwrap()
            .into_iter()
            .map(|i| (i.root, i.p, i.q))
            .collect();
        assert_eq!(
            got,
            vec![
                (1, r3.clone(), Quad::one(3)),
                (2, Quad::from_int(2, 3), r3.clone()),
                (3, r3.clone(), Quad::from_int(2, 3)),
                (4, Quad::one(3), r3),
            ]
        );
    }

    #[test]
    fn polarity() {
        let g2 = sys(SystemKind::G2);
        let tau = g2.chamber_involution().unwrap();
        for i in 0..6 {
            assert_eq!(tau[i], 5 - i);
        }
        let b2 = sys(SystemKind::B2);
        let tau = b2.chamber_involution().unwrap();
        assert!((0..8).all(|i| tau[tau[i]] == i));
        let f4 = sys(SystemKind::F4);
        let tau = f4.chamber_involution().unwrap();
        for r in f4.roots() {
            assert_ne!(f4.length_class(tau[r.index]).unwrap(), r.class);
        }
        assert_eq!(
            sys(SystemKind::A1).chamber_involution(),
            Err(RootError::NoPolarity(SystemKind::A1))
        );
    }

    #[test]
    fn folding() {
        assert_eq!(sys(SystemKind::B2).fold().unwrap().system.len(), 2);
        assert_eq!(
            sys(SystemKind::G2).fold().unwrap().system.kind(),
            SystemKind::A1
        );
        let f = sys(SystemKind::F4).fold().unwrap();
        assert_eq!(f.system.len(), 16);
        assert!(f
            .consecutive_cos2()
            .unwrap()
            .iter()
            .all(|c| *c == cos2_pi_over_8(2)));
        for k in 0..16 {
            assert_eq!(f.system.length_class(k).unwrap(), (k % 2) as u8);
        }
    }
}
