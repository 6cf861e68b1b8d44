//! Pointed polyhedral cones, their duals, and cuts by a linear functional.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::linalg::{nullspace, rank};
use super::polytope::{triangulate_face, Combinations, Halfspace, Polytope};
use super::rational::{rat, RVector, Rational};
use crate::error::{Error, Result};

/// A pointed, full-dimensional cone `{x : <f, x> >= 0 for f in facets}` = cone(rays).
///
/// Rays and facet normals are stored as primitive integer vectors, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    pub dim: usize,
    pub rays: Vec<RVector>,
    pub facets: Vec<RVector>,
}

impl PolyCone {
    /// Builds the cone generated by `rays`, dropping redundant generators.
    pub fn from_rays(rays: &[RVector]) -> Result<Self> {
        let dim = rays.first().map(RVector::dim).ok_or(Error::NotFullDimensional)?;
        if rays.iter().any(|r| r.dim() != dim || r.is_zero()) || rank(rays) < dim {
            return Err(Error::NotFullDimensional);
        }
        let facets = supporting_normals(rays, dim);
        if rank(&facets) < dim {
            // the cone contains a line
            return Err(Error::NotFullDimensional);
        }
        let extreme = extreme_generators(rays, &facets, dim);
        Ok(PolyCone { dim, rays: extreme, facets })
    }

    /// Builds the cone `{x : <f, x> >= 0}` from inward facet normals.
    pub fn from_facets(facets: &[RVector]) -> Result<Self> {
        Ok(dual_cone(&PolyCone::from_rays(facets)?))
    }

    pub fn orthant(dim: usize) -> Self {
        let mut units: Vec<RVector> = (0..dim).map(|i| RVector::unit(dim, i)).collect();
        units.sort();
        PolyCone { dim, rays: units.clone(), facets: units }
    }

    pub fn contains(&self, x: &RVector) -> bool {
        self.facets.iter().all(|f| !f.dot(x).is_negative())
    }

    pub fn contains_interior(&self, x: &RVector) -> bool {
        self.facets.iter().all(|f| f.dot(x).is_positive())
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.facets.iter().map(|f| Halfspace::new(f.clone(), Rational::zero())).collect()
    }
}

/// Primitive normals of the hyperplanes through `dim - 1` independent generators
/// that support the whole generator set.
fn supporting_normals(gens: &[RVector], dim: usize) -> Vec<RVector> {
    let mut out = BTreeSet::new();
    for subset in Combinations::new(gens.len(), dim - 1) {
        let rows: Vec<RVector> = subset.iter().map(|&i| gens[i].clone()).collect();
        let ns = nullspace(&rows, dim);
        if ns.len() != 1 {
            continue;
        }
        let n = &ns[0];
        let signs: Vec<Rational> = gens.iter().map(|g| g.dot(n)).collect();
        if signs.iter().all(|s| !s.is_negative()) {
            out.insert(n.primitive());
        } else if signs.iter().all(|s| !s.is_positive()) {
            out.insert((-n).primitive());
        }
    }
    out.into_iter().collect()
}

fn extreme_generators(gens: &[RVector], facets: &[RVector], dim: usize) -> Vec<RVector> {
    let mut out = BTreeSet::new();
    for g in gens {
        let tight: Vec<RVector> = facets.iter().filter(|f| f.dot(g).is_zero()).cloned().collect();
        if rank(&tight) == dim - 1 {
            out.insert(g.primitive());
        }
    }
    out.into_iter().collect()
}

/// `{y : <y, u> >= 0 for every ray u}`; an involution on pointed full-dimensional cones.
pub fn dual_cone(c: &PolyCone) -> PolyCone {
    PolyCone { dim: c.dim, rays: c.facets.clone(), facets: c.rays.clone() }
}

/// `{y in c : <y, xi> <= 1}`, which is bounded exactly when `xi` is strictly
/// positive on every ray of `c`.
pub fn cut_cone(c: &PolyCone, xi: &RVector) -> Result<Polytope> {
    if xi.dim() != c.dim {
        return Err(Error::DomainError(format!("xi has dimension {}, cone has {}", xi.dim(), c.dim)));
    }
    let mut vrep = vec![RVector::zeros(c.dim)];
    for u in &c.rays {
        let pairing = u.dot(xi);
        if !pairing.is_positive() {
            return Err(Error::NotInReebCone(format!("<{u}, {xi}> = {pairing} <= 0")));
        }
        vrep.push(u.scale(&(rat(1) / pairing)));
    }
    let mut hrep = c.halfspaces();
    hrep.push(Halfspace::new(-xi, rat(1)));
    Ok(Polytope::from_parts(c.dim, hrep, vrep))
}

/// Simplicial cones (`dim` primitive rays each) subdividing `c`, read off a pulling
/// triangulation of the cross-section `{<y, xi0> = 1}` with `xi0` the sum of the facet normals.
pub fn simplicial_subdivision(c: &PolyCone) -> Vec<Vec<RVector>> {
    let xi0 = c.facets.iter().fold(RVector::zeros(c.dim), |acc, f| &acc + f);
    let cut = cut_cone(c, &xi0).expect("sum of facet normals is interior to the dual");
    let face: Vec<usize> = (0..cut.vrep.len()).filter(|&i| cut.vrep[i].dot(&xi0) == rat(1)).collect();
    triangulate_face(&cut.vrep, &cut.hrep, &face, c.dim - 1)
        .into_iter()
        .map(|s| s.into_iter().map(|i| cut.vrep[i].primitive()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::polytope::{polytope_volume, vertex_enumerate};
    use crate::exactgeom::rational::frac;

    fn v(xs: &[i64]) -> RVector {
        RVector::from_ints(xs)
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = PolyCone::from_rays(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(c, PolyCone::orthant(3));
        assert_eq!(dual_cone(&c), c);
    }

    #[test]
    fn planar_dual() {
        let c = PolyCone::from_rays(&[v(&[1, 0]), v(&[1, 2])]).unwrap();
        let d = dual_cone(&c);
        assert_eq!(d.rays, vec![v(&[0, 1]), v(&[2, -1])]);
        assert_eq!(d.facets, vec![v(&[1, 0]), v(&[1, 2])]);
        for r in &d.rays {
            assert!(c.rays.iter().all(|u| !u.dot(r).is_negative()));
        }
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = PolyCone::from_rays(&[v(&[1, 0]), v(&[2, 2]), v(&[0, 3]), v(&[1, 0])]).unwrap();
        assert_eq!(c.rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn rejects_non_pointed_and_flat_cones() {
        assert_eq!(PolyCone::from_rays(&[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]), Err(Error::NotFullDimensional));
        assert_eq!(PolyCone::from_rays(&[v(&[1, 0, 0]), v(&[0, 1, 0])]), Err(Error::NotFullDimensional));
    }

    #[test]
    fn cuts() {
        let c = PolyCone::orthant(2);
        let p = cut_cone(&c, &v(&[1, 1])).unwrap();
        assert_eq!(p.vrep, vertex_enumerate(&p.hrep, 2).unwrap());
        assert_eq!(polytope_volume(&p).volume, frac(1, 2));
        let p = cut_cone(&c, &v(&[2, 1])).unwrap();
        assert_eq!(p.vrep, vec![v(&[0, 0]), v(&[0, 1]), RVector(vec![frac(1, 2), rat(0)])]);
        assert_eq!(polytope_volume(&p).volume, frac(1, 4));
        assert!(matches!(cut_cone(&c, &v(&[1, -1])), Err(Error::NotInReebCone(_))));
    }

    #[test]
    fn subdivision_of_square_cone() {
        let c = PolyCone::from_rays(&[v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])]).unwrap();
        let cones = simplicial_subdivision(&c);
        assert_eq!(cones.len(), 2);
        let total: Rational = cones.iter().map(|s| crate::exactgeom::linalg::det(s).abs()).sum();
        // normalized area of the unit square
        assert_eq!(total, rat(2));
        assert_eq!(simplicial_subdivision(&PolyCone::orthant(3)).len(), 1);
    }
}
