//! Singularity models and the numerology of cones over polarized log-Fano bases.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::linalg::{rank, solve};
use crate::exactgeom::polytope::Combinations;
use crate::exactgeom::{centroid, fmt_rational, rat, Halfspace, PolyCone, Polytope, RVector, Rational};
use crate::valuation::MonomialValuation;

/// Affine toric variety `Spec C[sigma^dual ∩ M]`.
///
/// `m0` is the Gorenstein vector: `<m0, u> = 1` on every primitive ray `u` of `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToricConeSingularity {
    pub n: usize,
    pub sigma: PolyCone,
    /// `sigma^dual`, whose rays generate the weight cone of the coordinate ring.
    pub weight_cone: PolyCone,
    pub m0: RVector,
}

impl ToricConeSingularity {
    pub fn from_rays(rays: &[RVector]) -> Result<Self> {
        if rays.iter().any(|r| r.as_integers().is_none()) {
            return Err(Error::InvalidModel("toric rays must be integer vectors".into()));
        }
        let sigma = PolyCone::from_rays(rays)?;
        let n = sigma.dim;
        let m0 = gorenstein_vector(&sigma.rays, n)?;
        let weight_cone = crate::exactgeom::dual_cone(&sigma);
        Ok(ToricConeSingularity { n, sigma, weight_cone, m0 })
    }

    pub fn from_int_rays(rays: &[&[i64]]) -> Result<Self> {
        let rays: Vec<RVector> = rays.iter().map(|r| RVector::from_ints(r)).collect();
        Self::from_rays(&rays)
    }

    /// `C^n` as the orthant.
    pub fn affine_space(n: usize) -> Self {
        let rays: Vec<RVector> = (0..n).map(|i| RVector::unit(n, i)).collect();
        Self::from_rays(&rays).expect("orthant is a valid cone")
    }

    /// Strict positivity on the generators of the weight cone.
    pub fn in_reeb_cone(&self, xi: &RVector) -> bool {
        xi.dim() == self.n && self.weight_cone.rays.iter().all(|g| g.dot(xi).is_positive())
    }
}

fn gorenstein_vector(rays: &[RVector], n: usize) -> Result<RVector> {
    let basis = Combinations::new(rays.len(), n)
        .map(|s| s.into_iter().map(|i| rays[i].clone()).collect::<Vec<_>>())
        .find(|rows| rank(rows) == n)
        .ok_or(Error::NotFullDimensional)?;
    let m0 = solve(&basis, &vec![Rational::one(); n]).ok_or(Error::NotFullDimensional)?;
    if let Some(u) = rays.iter().find(|u| !u.dot(&m0).is_one()) {
        return Err(Error::NotQGorenstein(format!("no m0 with <m0, u> = 1 on all rays (fails at {u})")));
    }
    Ok(m0)
}

/// Hypersurface `{f = 0}` in `C^{n+1}`; only the monomial support of `f` is recorded,
/// every listed monomial carrying a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedHomogeneousHypersurface {
    pub nvars: usize,
    pub monomials: Vec<Vec<u32>>,
    pub label: String,
}

impl WeightedHomogeneousHypersurface {
    pub fn new(monomials: Vec<Vec<u32>>, label: impl Into<String>) -> Result<Self> {
        let nvars = monomials.first().map(Vec::len).unwrap_or(0);
        if monomials.len() < 2 {
            return Err(Error::InvalidModel("hypersurface needs at least two monomials".into()));
        }
        if nvars < 2 || monomials.iter().any(|m| m.len() != nvars) {
            return Err(Error::InvalidModel("monomial exponent vectors must share a length >= 2".into()));
        }
        if monomials.iter().any(|m| m.iter().all(|&e| e == 0)) {
            return Err(Error::InvalidModel("constant term makes the origin a non-point".into()));
        }
        Ok(WeightedHomogeneousHypersurface { nvars, monomials, label: label.into() })
    }

    /// Dimension of the hypersurface.
    pub fn dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn monomial_weight(&self, m: &[u32], a: &RVector) -> Rational {
        m.iter().zip(a.iter()).fold(Rational::zero(), |acc, (&e, w)| acc + rat(e as i64) * w)
    }

    /// `d(a) = v_a(f)`: the least `a`-weight among the monomials of `f`.
    pub fn weighted_order(&self, a: &RVector) -> Rational {
        self.monomials.iter().map(|m| self.monomial_weight(m, a)).min().expect("at least two monomials")
    }

    pub fn weighted_order_f64(&self, a: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|m| m.iter().zip(a).map(|(&e, w)| e as f64 * w).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// Monomials achieving `d(a)`.
    pub fn initial_monomials(&self, a: &RVector) -> Vec<&[u32]> {
        let d = self.weighted_order(a);
        self.monomials.iter().filter(|m| self.monomial_weight(m, a) == d).map(Vec::as_slice).collect()
    }

    /// A pure power `z_j^e` among the initial monomials, used to pick standard monomials.
    pub fn reduction_variable(&self, a: &RVector) -> Option<(usize, u32)> {
        self.initial_monomials(a).into_iter().find_map(|m| {
            let support: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
            (support.len() == 1).then(|| (support[0], m[support[0]]))
        })
    }

    fn swap_preserves(&self, i: usize, j: usize) -> bool {
        let mut mons = self.monomials.clone();
        mons.sort();
        let mut swapped: Vec<Vec<u32>> = self
            .monomials
            .iter()
            .map(|m| {
                let mut m = m.clone();
                m.swap(i, j);
                m
            })
            .collect();
        swapped.sort();
        mons == swapped
    }

    /// Partition of the variables into classes whose transpositions preserve the support of `f`.
    pub fn symmetry_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of: Vec<usize> = (0..self.nvars).collect();
        for i in 0..self.nvars {
            for j in i + 1..self.nvars {
                if class_of[j] == j && self.swap_preserves(i, j) {
                    class_of[j] = class_of[i];
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (v, &c) in class_of.iter().enumerate() {
            match classes.iter_mut().find(|cl| class_of[cl[0]] == c) {
                Some(cl) => cl.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes
    }

    /// Raises the weight of every variable `z_j` with `f = z_j^e + g(others)` to at
    /// least `v_a(g)/e`, which is forced on the coordinate ring.
    pub fn saturate(&self, a: &RVector) -> RVector {
        let mut out = a.clone();
        for j in 0..self.nvars {
            let pure: Vec<&Vec<u32>> = self
                .monomials
                .iter()
                .filter(|m| m[j] > 0 && (0..self.nvars).all(|i| i == j || m[i] == 0))
                .collect();
            let others: Vec<&Vec<u32>> = self.monomials.iter().filter(|m| m[j] == 0).collect();
            if pure.len() != 1 || others.len() + 1 != self.monomials.len() {
                continue;
            }
            let e = rat(pure[0][j] as i64);
            let rest = others.iter().map(|m| self.monomial_weight(m, &out)).min().expect("nonempty");
            let floor = rest / e;
            if out.0[j] < floor {
                out.0[j] = floor;
            }
        }
        out
    }
}

/// Either kind of model, as consumed by the evaluators and the CLI.
#[derive(Clone, Debug, PartialEq)]
pub enum SingularityModel {
    Toric(ToricConeSingularity),
    Hypersurface(WeightedHomogeneousHypersurface),
}

impl SingularityModel {
    /// Dimension `n` of the singularity.
    pub fn dim(&self) -> usize {
        match self {
            SingularityModel::Toric(t) => t.n,
            SingularityModel::Hypersurface(h) => h.dim(),
        }
    }

    /// Number of weight coordinates a valuation on this model carries.
    pub fn weight_len(&self) -> usize {
        match self {
            SingularityModel::Toric(t) => t.n,
            SingularityModel::Hypersurface(h) => h.nvars,
        }
    }
}

/// `A_{k-1}^n = {z_1^2 + ... + z_n^2 + z_{n+1}^k = 0}`.
pub fn akm_singularity(n: usize, k: u32) -> Result<WeightedHomogeneousHypersurface> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidModel(format!("A_(k-1)^n needs n >= 2, k >= 1 (got n={n}, k={k})")));
    }
    let mut monomials = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut m = vec![0; n + 1];
        m[i] = 2;
        monomials.push(m);
    }
    let mut last = vec![0; n + 1];
    last[n] = k;
    monomials.push(last);
    WeightedHomogeneousHypersurface::new(monomials, format!("A_{}^{}", k - 1, n))
}

/// Weights `(k, ..., k, 2)` of the canonical C*-action on `A_{k-1}^n`.
pub fn canonical_weights(n: usize, k: u32) -> Result<MonomialValuation> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidModel(format!("A_(k-1)^n needs n >= 2, k >= 1 (got n={n}, k={k})")));
    }
    let mut w = vec![rat(k as i64); n];
    w.push(rat(2));
    MonomialValuation::new(RVector(w))
}

/// `0 < r <= n`.
pub fn fano_index_check(r: &Rational, n: usize) -> bool {
    r.is_positive() && *r <= rat(n as i64)
}

/// Cone `C(V, H)` over a log-Fano base of dimension `n - 1` with `H = -(K_V + E)/r`,
/// described only through `(n, r, H^{n-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedConeData {
    pub n: usize,
    pub r: Rational,
    pub deg_h: Rational,
}

impl PolarizedConeData {
    pub fn new(n: usize, r: Rational, deg_h: Rational) -> Result<Self> {
        if n == 0 || !fano_index_check(&r, n) {
            return Err(Error::InvalidIndex { r: fmt_rational(&r), n });
        }
        if !deg_h.is_positive() {
            return Err(Error::InvalidModel("H^(n-1) must be positive".into()));
        }
        Ok(PolarizedConeData { n, r, deg_h })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeInvariants {
    /// Cone angle `r/n`.
    pub beta: Rational,
    /// `(-K - D)^n = r^n ((n+1)/n)^n H^{n-1}` on the projective cone.
    pub antilog_power: Rational,
    /// `(n/(n+1))^n (-K - D)^n`.
    pub fujita_bound: Rational,
    /// `A(ord_V)^n vol(ord_V) = r^n H^{n-1}`.
    pub nvol_ord_v: Rational,
    pub sharp: bool,
}

pub fn pow(q: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * q)
}

pub fn cone_invariants(c: &PolarizedConeData) -> Result<ConeInvariants> {
    if !fano_index_check(&c.r, c.n) {
        return Err(Error::InvalidIndex { r: fmt_rational(&c.r), n: c.n });
    }
    let n = c.n;
    let ratio = Rational::new((n as i64 + 1).into(), (n as i64).into());
    let antilog_power = pow(&c.r, n) * pow(&ratio, n) * &c.deg_h;
    let fujita_bound = pow(&(Rational::one() / &ratio), n) * &antilog_power;
    let nvol_ord_v = pow(&c.r, n) * &c.deg_h;
    Ok(ConeInvariants {
        beta: &c.r / rat(n as i64),
        sharp: fujita_bound == nvol_ord_v,
        antilog_power,
        fujita_bound,
        nvol_ord_v,
    })
}

/// Cone angles of the toric log-Fano pair over a lattice polytope and of its projective cone.
#[derive(Clone, Debug)]
pub struct ToricLogFanoReport {
    pub n: usize,
    pub p_star: RVector,
    pub gammas: Vec<Rational>,
    pub lifted: Polytope,
    pub frak_p_star: RVector,
    pub s: Rational,
    pub beta_i: Vec<Rational>,
    pub beta_n: Rational,
    /// `frak_p_star == n/(n+1) (p_star, 1)`.
    pub centroid_identity: bool,
    /// `beta_n == r/n`.
    pub beta_n_identity: bool,
    /// `beta_i == gamma_i` for every facet.
    pub beta_gamma_identity: bool,
}

/// `P = {l_i(x) = <eta_i, x> + a_i >= 0} ⊂ R^{n-1}`; lifts to the cone polytope
/// `{<eta_i, y'> + a_i y_n >= 0, 1 - y_n >= 0} ⊂ R^n`.
pub fn toric_log_fano(facets: &[Halfspace], r: &Rational) -> Result<ToricLogFanoReport> {
    let base_dim = facets.first().map(|h| h.normal.dim()).ok_or_else(|| Error::InvalidModel("no facets".into()))?;
    if facets.iter().any(|h| h.normal.dim() != base_dim) {
        return Err(Error::InvalidModel("facet normals have mixed dimensions".into()));
    }
    if !r.is_positive() {
        return Err(Error::DomainError("r must be positive".into()));
    }
    let n = base_dim + 1;
    let base = Polytope::from_hrep(facets.to_vec(), base_dim)?;
    let p_star = centroid(&base)?;
    let gammas: Vec<Rational> = facets.iter().map(|h| r * h.eval(&p_star)).collect();
    if let Some((i, g)) = gammas.iter().enumerate().find(|(_, g)| **g > Rational::one()) {
        return Err(Error::AngleOutOfRange { index: i, value: fmt_rational(g) });
    }

    let mut lifted_h: Vec<Halfspace> = facets
        .iter()
        .map(|h| {
            let mut normal = h.normal.0.clone();
            normal.push(h.offset.clone());
            Halfspace::new(RVector(normal), Rational::zero())
        })
        .collect();
    let mut top = vec![Rational::zero(); n];
    top[n - 1] = rat(-1);
    let top = Halfspace::new(RVector(top), rat(1));
    lifted_h.push(top.clone());
    let lifted = Polytope::from_hrep(lifted_h, n)?;
    let frak_p_star = centroid(&lifted)?;

    let s = r * rat(n as i64 + 1) / rat(n as i64);
    let beta_i: Vec<Rational> = lifted.hrep[..facets.len()].iter().map(|h| &s * h.eval(&frak_p_star)).collect();
    let beta_n = &s * top.eval(&frak_p_star);

    let mut expected = p_star.0.clone();
    expected.push(Rational::one());
    let expected = RVector(expected).scale(&Rational::new((n as i64).into(), (n as i64 + 1).into()));
    Ok(ToricLogFanoReport {
        n,
        centroid_identity: frak_p_star == expected,
        beta_n_identity: beta_n == r / rat(n as i64),
        beta_gamma_identity: beta_i == gammas,
        p_star,
        gammas,
        lifted,
        frak_p_star,
        s,
        beta_i,
        beta_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::frac;

    #[test]
    fn akm_constructor() {
        let a = akm_singularity(2, 2).unwrap();
        assert_eq!(a.monomials, vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(a.label, "A_1^2");
        let b = akm_singularity(3, 4).unwrap();
        assert_eq!(b.monomials.last().unwrap(), &vec![0, 0, 0, 4]);
        let smooth = akm_singularity(2, 1).unwrap();
        assert_eq!(smooth.monomials.last().unwrap(), &vec![0, 0, 1]);
        assert!(akm_singularity(1, 2).is_err());
    }

    #[test]
    fn canonical_weight_pattern() {
        assert_eq!(canonical_weights(2, 2).unwrap().weights, RVector::from_ints(&[2, 2, 2]));
        assert_eq!(canonical_weights(3, 5).unwrap().weights, RVector::from_ints(&[5, 5, 5, 2]));
    }

    #[test]
    fn fano_index_bounds() {
        assert!(!fano_index_check(&rat(4), 3));
        assert!(fano_index_check(&rat(3), 3));
        assert!(fano_index_check(&frac(1, 2), 3));
        assert!(!fano_index_check(&rat(0), 3));
    }

    #[test]
    fn cone_invariant_values() {
        let a1 = PolarizedConeData::new(2, rat(2), frac(1, 2)).unwrap();
        let inv = cone_invariants(&a1).unwrap();
        assert_eq!(inv.beta, rat(1));
        assert_eq!(inv.fujita_bound, rat(2));
        assert_eq!(inv.nvol_ord_v, rat(2));
        assert!(inv.sharp);
        assert!(matches!(PolarizedConeData::new(3, rat(4), rat(1)), Err(Error::InvalidIndex { .. })));
        let p2 = PolarizedConeData::new(3, rat(3), rat(1)).unwrap();
        assert_eq!(cone_invariants(&p2).unwrap().nvol_ord_v, rat(27));
    }

    #[test]
    fn toric_gorenstein_vectors() {
        let c3 = ToricConeSingularity::affine_space(3);
        assert_eq!(c3.m0, RVector::from_ints(&[1, 1, 1]));
        let a1 = ToricConeSingularity::from_int_rays(&[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(a1.m0, RVector::from_ints(&[1, 0]));
        // cone over a square at height 1 (the conifold)
        let conifold = ToricConeSingularity::from_int_rays(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap();
        assert_eq!(conifold.m0, RVector::from_ints(&[0, 0, 1]));
        // rays at different heights: not Gorenstein with a common m0
        let bad = ToricConeSingularity::from_int_rays(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 2]]);
        assert!(matches!(bad, Err(Error::NotQGorenstein(_))));
    }

    #[test]
    fn symmetry_and_saturation() {
        let a = akm_singularity(3, 3).unwrap();
        assert_eq!(a.symmetry_classes(), vec![vec![0, 1, 2], vec![3]]);
        let low = RVector(vec![rat(1), rat(1), rat(1), frac(1, 2)]);
        assert_eq!(a.saturate(&low), RVector(vec![rat(1), rat(1), rat(1), frac(2, 3)]));
        let high = RVector::from_ints(&[1, 1, 1, 1]);
        assert_eq!(a.saturate(&high), high);
        let quadric = akm_singularity(3, 2).unwrap();
        assert_eq!(quadric.symmetry_classes(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn log_fano_interval() {
        let facets = vec![
            Halfspace::new(RVector::from_ints(&[1]), rat(1)),
            Halfspace::new(RVector::from_ints(&[-1]), rat(1)),
        ];
        let rep = toric_log_fano(&facets, &rat(1)).unwrap();
        assert_eq!(rep.p_star, RVector::from_ints(&[0]));
        assert_eq!(rep.gammas, vec![rat(1), rat(1)]);
        assert_eq!(rep.beta_n, frac(1, 2));
        assert!(rep.centroid_identity && rep.beta_n_identity && rep.beta_gamma_identity);
    }

    #[test]
    fn log_fano_simplex_angles() {
        let facets = vec![
            Halfspace::new(RVector::from_ints(&[1, 0]), rat(0)),
            Halfspace::new(RVector::from_ints(&[0, 1]), rat(0)),
            Halfspace::new(RVector::from_ints(&[-1, -1]), rat(1)),
        ];
        let rep = toric_log_fano(&facets, &rat(1)).unwrap();
        assert_eq!(rep.p_star, RVector(vec![frac(1, 3), frac(1, 3)]));
        assert_eq!(rep.gammas, vec![frac(1, 3); 3]);
        assert!(rep.centroid_identity);
        assert!(matches!(toric_log_fano(&facets, &rat(4)), Err(Error::AngleOutOfRange { .. })));
    }
}
