//! Bounded polyhedra: vertex enumeration, boundary triangulation, volume and centroid.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::linalg::{affine_dim, det, nullspace, rank, solve};
use super::rational::{rat, RVector, Rational};
use crate::error::{Error, Result};

/// `{x : <normal, x> + offset >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: RVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: RVector, offset: Rational) -> Self {
        assert!(!normal.is_zero(), "halfspace normal must be nonzero");
        Halfspace { normal, offset }
    }

    pub fn eval(&self, x: &RVector) -> Rational {
        self.normal.dot(x) + &self.offset
    }

    pub fn contains(&self, x: &RVector) -> bool {
        !self.eval(x).is_negative()
    }
}

/// Bounded polytope carrying both descriptions; vertices are sorted lexicographically.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub hrep: Vec<Halfspace>,
    pub vrep: Vec<RVector>,
}

/// Exact volume together with a flag set for lower-dimensional input.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport {
    pub volume: Rational,
    pub degenerate: bool,
}

impl Polytope {
    pub fn from_hrep(hrep: Vec<Halfspace>, dim: usize) -> Result<Self> {
        let vrep = vertex_enumerate(&hrep, dim)?;
        Ok(Polytope { dim, hrep, vrep })
    }

    /// Trusts the caller that `vrep` is exactly the vertex set of `hrep`.
    pub(crate) fn from_parts(dim: usize, hrep: Vec<Halfspace>, mut vrep: Vec<RVector>) -> Self {
        vrep.sort();
        vrep.dedup();
        Polytope { dim, hrep, vrep }
    }

    pub fn is_full_dimensional(&self) -> bool {
        let pts: Vec<&RVector> = self.vrep.iter().collect();
        affine_dim(&pts) == self.dim as isize
    }

    pub fn contains(&self, x: &RVector) -> bool {
        self.hrep.iter().all(|h| h.contains(x))
    }

    /// Scales by a positive rational.
    pub fn scaled(&self, s: &Rational) -> Polytope {
        assert!(s.is_positive());
        let hrep = self.hrep.iter().map(|h| Halfspace::new(h.normal.clone(), &h.offset * s)).collect();
        let vrep = self.vrep.iter().map(|v| v.scale(s)).collect();
        Polytope::from_parts(self.dim, hrep, vrep)
    }

    /// Simplices (as vertex lists) triangulating the polytope, each containing
    /// the lexicographically smallest vertex.
    pub fn triangulate(&self) -> Vec<Vec<RVector>> {
        let idx: Vec<usize> = (0..self.vrep.len()).collect();
        triangulate_face(&self.vrep, &self.hrep, &idx, self.dim)
            .into_iter()
            .map(|s| s.into_iter().map(|i| self.vrep[i].clone()).collect())
            .collect()
    }
}

/// All vertices of `{x : h(x) >= 0 for h in hrep}`, sorted, by solving every
/// `dim`-subset of the constraints and keeping feasible solutions.
pub fn vertex_enumerate(hrep: &[Halfspace], dim: usize) -> Result<Vec<RVector>> {
    let normals: Vec<RVector> = hrep.iter().map(|h| h.normal.clone()).collect();
    if rank(&normals) < dim {
        // a lineality direction exists
        return Err(Error::UnboundedRegion);
    }
    let mut verts = BTreeSet::new();
    for subset in Combinations::new(hrep.len(), dim) {
        let rows: Vec<RVector> = subset.iter().map(|&i| hrep[i].normal.clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| -hrep[i].offset.clone()).collect();
        if let Some(x) = solve(&rows, &rhs) {
            if hrep.iter().all(|h| h.contains(&x)) {
                verts.insert(x);
            }
        }
    }
    if verts.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if has_recession_ray(&normals, dim) {
        return Err(Error::UnboundedRegion);
    }
    Ok(verts.into_iter().collect())
}

/// Extreme rays of the pointed cone `{r : <n_i, r> >= 0}` are cut out by
/// `dim - 1` independent tight constraints, so checking those candidates suffices.
fn has_recession_ray(normals: &[RVector], dim: usize) -> bool {
    if dim == 0 {
        return false;
    }
    for subset in Combinations::new(normals.len(), dim - 1) {
        let rows: Vec<RVector> = subset.iter().map(|&i| normals[i].clone()).collect();
        let ns = nullspace(&rows, dim);
        if ns.len() != 1 {
            continue;
        }
        for r in [ns[0].clone(), -&ns[0]] {
            if normals.iter().all(|n| !n.dot(&r).is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Pulling triangulation of the face spanned by `face` (indices into `verts`,
/// sorted) of dimension `k`, coning every facet that avoids the face's first vertex.
pub(crate) fn triangulate_face(verts: &[RVector], hrep: &[Halfspace], face: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in hrep {
        let tight: Vec<usize> = face.iter().copied().filter(|&v| h.eval(&verts[v]).is_zero()).collect();
        if tight.len() == face.len() || tight.contains(&apex) {
            continue;
        }
        let pts: Vec<&RVector> = tight.iter().map(|&v| &verts[v]).collect();
        if affine_dim(&pts) == k as isize - 1 {
            facets.insert(tight);
        }
    }
    let mut out = Vec::new();
    for facet in facets {
        for mut simplex in triangulate_face(verts, hrep, &facet, k - 1) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    out
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(rat(1), |acc, k| acc * rat(k))
}

/// `|det(v_1 - v_0, ..., v_d - v_0)| / d!`.
pub fn simplex_volume(simplex: &[RVector]) -> Rational {
    let d = simplex.len() - 1;
    let rows: Vec<RVector> = simplex[1..].iter().map(|v| v - &simplex[0]).collect();
    det(&rows).abs() / factorial(d)
}

/// Exact Euclidean volume. Lower-dimensional polytopes report zero and set `degenerate`.
pub fn polytope_volume(p: &Polytope) -> VolumeReport {
    if !p.is_full_dimensional() {
        return VolumeReport { volume: Rational::zero(), degenerate: true };
    }
    let volume = p.triangulate().iter().map(|s| simplex_volume(s)).fold(Rational::zero(), |a, b| a + b);
    VolumeReport { volume, degenerate: false }
}

/// Center of mass with respect to Lebesgue measure.
pub fn centroid(p: &Polytope) -> Result<RVector> {
    if !p.is_full_dimensional() {
        return Err(Error::DegeneratePolytope);
    }
    let mut total = Rational::zero();
    let mut moment = RVector::zeros(p.dim);
    for s in p.triangulate() {
        let vol = simplex_volume(&s);
        let sum = s.iter().fold(RVector::zeros(p.dim), |acc, v| &acc + v);
        moment = &moment + &sum.scale(&(&vol / rat(s.len() as i64)));
        total += vol;
    }
    Ok(moment.scale(&(rat(1) / total)))
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
