//! The Ree Moufang set on `T + {inf}`: translations, `omega`, the scalings
//! `rho_a`, and the permutation group they generate over a finite field.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, FiniteField, Gf, TitsField};
use crate::groups::{
    enumerate_t, format_t, h_action_t, norm_n, omega, t_identity, t_inv, t_is_identity, t_mul,
    GroupError, TElem,
};
use crate::report::Failure;

#[derive(Clone, Debug, PartialEq)]
pub enum MPoint<E> {
    Infinity,
    Point(TElem<E>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoufangError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0}")]
    Resource(String),
}

/// `inf -> inf`, `b -> a b`.
pub fn translate<F: TitsField>(f: &F, a: &TElem<F::Elem>, x: &MPoint<F::Elem>) -> MPoint<F::Elem> {
    match x {
        MPoint::Infinity => MPoint::Infinity,
        MPoint::Point(b) => MPoint::Point(t_mul(f, a, b)),
    }
}

/// `inf <-> 0`, otherwise `omega`.
pub fn omega_point<F: TitsField>(
    f: &F,
    x: &MPoint<F::Elem>,
) -> Result<MPoint<F::Elem>, GroupError> {
    match x {
        MPoint::Infinity => Ok(MPoint::Point(t_identity(f))),
        MPoint::Point(b) if t_is_identity(f, b) => Ok(MPoint::Infinity),
        MPoint::Point(b) => Ok(MPoint::Point(omega(f, b)?)),
    }
}

pub fn format_point<F: TitsField>(f: &F, x: &MPoint<F::Elem>) -> String {
    match x {
        MPoint::Infinity => "inf".into(),
        MPoint::Point(b) => format_t(f, b),
    }
}

/// `rho_a = x(-a') omega x(-omega(a)) omega x(a) omega` with `a' = omega(-omega(a))`,
/// applied to `x`.
pub fn rho<F: TitsField>(
    f: &F,
    a: &TElem<F::Elem>,
    x: &MPoint<F::Elem>,
) -> Result<MPoint<F::Elem>, GroupError> {
    let wa = omega(f, a)?;
    let a_prime = omega(f, &t_inv(f, &wa))?;
    let y = omega_point(f, x)?;
    let y = translate(f, a, &y);
    let y = omega_point(f, &y)?;
    let y = translate(f, &t_inv(f, &wa), &y);
    let y = omega_point(f, &y)?;
    Ok(translate(f, &t_inv(f, &a_prime), &y))
}

/// `(w, u, v) -> (z w, z^(theta+1) u, z^(theta+2) v)` with `z = N(a)^(2 - theta)`.
pub fn rho_scaling<F: TitsField>(
    f: &F,
    a: &TElem<F::Elem>,
    x: &TElem<F::Elem>,
) -> Result<TElem<F::Elem>, GroupError> {
    let z = f.twisted_pow(&norm_n(f, a), 2, -1)?;
    Ok(TElem::new(
        f.mul(&z, &x.r),
        f.mul(&f.twisted_pow(&z, 1, 1)?, &x.s),
        f.mul(&f.twisted_pow(&z, 2, 1)?, &x.t),
    ))
}

/// Compares `rho_a(b)` with the scaling, and `z^(theta+2)` with `N(a)`.
pub fn rho_scalar_failure<F: TitsField>(
    f: &F,
    a: &TElem<F::Elem>,
    b: &TElem<F::Elem>,
) -> Option<Failure> {
    let inputs = format!("a={}, b={}", format_t(f, a), format_t(f, b));
    let r = (|| -> Result<Option<Failure>, GroupError> {
        let n = norm_n(f, a);
        let z = f.twisted_pow(&n, 2, -1)?;
        let zz = f.twisted_pow(&z, 2, 1)?;
        if !f.congruent(&zz, &n) {
            return Ok(Some(Failure::new(
                inputs.clone(),
                f.format_elem(&n),
                f.format_elem(&zz),
            )));
        }
        let expected = MPoint::Point(rho_scaling(f, a, b)?);
        let got = rho(f, a, &MPoint::Point(b.clone()))?;
        let same = match (&got, &expected) {
            (MPoint::Point(x), MPoint::Point(y)) => crate::groups::t_congruent(f, x, y),
            _ => false,
        };
        Ok((!same).then(|| {
            Failure::new(
                inputs.clone(),
                format_point(f, &expected),
                format_point(f, &got),
            )
        }))
    })();
    r.unwrap_or_else(|e| Some(Failure::error(&inputs, e)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermGroupStats {
    pub points: usize,
    pub order: u64,
    pub transitivity_degree: usize,
    pub point_stabilizer_order: u64,
    pub two_point_stabilizer_order: u64,
}

/// `T(GF(q))` in lexicographic order followed by `inf`, with the index of each point.
pub struct PointSet {
    pub elems: Vec<TElem<Gf>>,
    index: HashMap<(u16, u16, u16), usize>,
}

impl PointSet {
    pub fn new(f: &FiniteField) -> Self {
        let elems = enumerate_t(f);
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, a)| ((a.r.0, a.s.0, a.t.0), i))
            .collect();
        PointSet { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn infinity(&self) -> usize {
        self.elems.len()
    }

    pub fn point(&self, i: usize) -> MPoint<Gf> {
        self.elems
            .get(i)
            .map_or(MPoint::Infinity, |a| MPoint::Point(a.clone()))
    }

    pub fn index_of(&self, x: &MPoint<Gf>) -> usize {
        match x {
            MPoint::Infinity => self.infinity(),
            MPoint::Point(a) => self.index[&(a.r.0, a.s.0, a.t.0)],
        }
    }

    /// The permutation induced by a point map, as an index array.
    pub fn permutation(
        &self,
        mut g: impl FnMut(&MPoint<Gf>) -> Result<MPoint<Gf>, GroupError>,
    ) -> Result<Vec<u32>, GroupError> {
        (0..self.len())
            .map(|i| Ok(self.index_of(&g(&self.point(i))?) as u32))
            .collect()
    }
}

pub type Perm = Vec<u32>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // x -> b(a(x))
    a.iter().map(|&i| b[i as usize]).collect()
}

/// Largest degree accepted by [`enumerate_group`].
pub const MAX_POINTS: usize = 100_000;
/// Largest group order [`enumerate_group`] will store.
pub const MAX_ORDER: usize = 2_000_000;

/// Generators: every translation and `omega`.
pub fn generators(f: &FiniteField, pts: &PointSet) -> Result<Vec<Perm>, GroupError> {
    let mut gens = Vec::new();
    for a in pts.elems.iter().filter(|a| !t_is_identity(f, a)) {
        gens.push(pts.permutation(|x| Ok(translate(f, a, x)))?);
    }
    gens.push(pts.permutation(|x| omega_point(f, x))?);
    Ok(gens)
}

/// Closure of `gens` under composition, in breadth-first order from the identity.
pub fn closure(gens: &[Perm], n: usize, cap: usize) -> Result<Vec<Perm>, MoufangError> {
    let id: Perm = (0..n as u32).collect();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut elems = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = compose(&g, s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(MoufangError::Resource(format!("group order exceeds {cap}")));
                }
                elems.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(elems)
}

/// Order and transitivity data of the group generated by translations and `omega`.
pub fn enumerate_group(f: &FiniteField) -> Result<PermGroupStats, MoufangError> {
    let q = f.order() as usize;
    let n = q * q * q + 1;
    if n > MAX_POINTS {
        return Err(MoufangError::Resource(format!(
            "{n} points exceeds {MAX_POINTS}"
        )));
    }
    if f.characteristic() != 3 {
        return Err(MoufangError::Field(FieldError::Config(
            "the Ree Moufang set needs characteristic 3".into(),
        )));
    }
    let pts = PointSet::new(f);
    let gens = generators(f, &pts)?;
    let group = closure(&gens, n, MAX_ORDER)?;
    Ok(stats(&group, n, pts.infinity(), 0))
}

/// Stabilizer chain along `inf`, `zero`, then the remaining points in index order.
pub fn stats(group: &[Perm], n: usize, inf: usize, zero: usize) -> PermGroupStats {
    let mut fixed = vec![inf, zero];
    fixed.extend((0..n).filter(|&i| i != inf && i != zero));
    let stab = |k: usize| -> Vec<&Perm> {
        group
            .iter()
            .filter(|g| fixed[..k].iter().all(|&x| g[x] as usize == x))
            .collect()
    };
    let mut degree = 0;
    for k in 0..n {
        let h = stab(k);
        let orbit: HashSet<u32> = h.iter().map(|g| g[fixed[k]]).collect();
        if orbit.len() != n - k {
            break;
        }
        degree = k + 1;
    }
    PermGroupStats {
        points: n,
        order: group.len() as u64,
        transitivity_degree: degree,
        point_stabilizer_order: stab(1).len() as u64,
        two_point_stabilizer_order: stab(2).len() as u64,
    }
}

/// Translations fix `inf` and act sharply transitively on `T`.
pub fn translations_sharply_transitive(
    f: &FiniteField,
    pts: &PointSet,
) -> Result<bool, GroupError> {
    let n = pts.len();
    let zero = pts.index_of(&MPoint::Point(t_identity(f)));
    let mut images = HashSet::new();
    for a in &pts.elems {
        let g = pts.permutation(|x| Ok(translate(f, a, x)))?;
        if g[pts.infinity()] as usize != pts.infinity() {
            return Ok(false);
        }
        let fixes_some = (0..n).any(|i| i != pts.infinity() && g[i] as usize == i);
        if !t_is_identity(f, a) && fixes_some {
            return Ok(false);
        }
        images.insert(g[zero]);
    }
    Ok(images.len() == pts.elems.len())
}

/// `omega x_a omega` fixes `0` for every translation `x_a`.
pub fn omega_conjugates_fix_zero(f: &FiniteField, pts: &PointSet) -> Result<bool, GroupError> {
    let zero = MPoint::Point(t_identity(f));
    for a in &pts.elems {
        let y = omega_point(f, &translate(f, a, &omega_point(f, &zero)?))?;
        if y != zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The stabilizer of `inf` and `0` is exactly the set of torus actions `h_action(a)`, `a != 0`.
pub fn two_point_stabilizer_is_torus(
    f: &FiniteField,
    pts: &PointSet,
    group: &[Perm],
) -> Result<bool, GroupError> {
    let zero = pts.index_of(&MPoint::Point(t_identity(f)));
    let inf = pts.infinity();
    let stab: HashSet<&Perm> = group
        .iter()
        .filter(|g| g[inf] as usize == inf && g[zero] as usize == zero)
        .collect();
    let mut torus: HashSet<Perm> = HashSet::new();
    for a in pts.elems.iter().filter(|a| !t_is_identity(f, a)) {
        torus.insert(pts.permutation(|x| match x {
            MPoint::Infinity => Ok(MPoint::Infinity),
            MPoint::Point(b) => Ok(MPoint::Point(h_action_t(f, a, b)?)),
        })?);
    }
    Ok(stab.len() == torus.len() && torus.iter().all(|g| stab.contains(g)))
}
