//! Monomial valuations: log discrepancy, volume, normalized volume, and a
//! lattice-counting oracle for the volume.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{
    cut_cone, fmt_rational, polytope_volume, rat, simplicial_subdivision, to_f64, Halfspace, Polytope, RVector, Rational,
};
use crate::exactgeom::linalg::det;
use crate::singularities::{pow, SingularityModel, ToricConeSingularity, WeightedHomogeneousHypersurface};

/// Weight `a_i > 0` on each ambient coordinate `z_i` (or a Reeb vector on a toric cone).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialValuation {
    pub weights: RVector,
}

impl MonomialValuation {
    pub fn new(weights: RVector) -> Result<Self> {
        if weights.dim() == 0 || !weights.all_positive() {
            return Err(Error::DomainError(format!("weights must be strictly positive, got {weights}")));
        }
        Ok(MonomialValuation { weights })
    }

    pub fn from_ints(w: &[i64]) -> Result<Self> {
        Self::new(RVector::from_ints(w))
    }

    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        Self::new(self.weights.scale(lambda))
    }
}

/// A rational or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(q) => to_f64(q),
            ExtRational::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinite => None,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write!(f, "{}", fmt_rational(q)),
            ExtRational::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValuationReport {
    pub logdisc: ExtRational,
    pub volume: Rational,
    pub nvol: ExtRational,
    pub logdisc_pair: Option<Rational>,
    /// `A <= 0`: the input is not klt along this valuation.
    pub nonpositive_logdisc: bool,
}

impl ValuationReport {
    pub fn new(logdisc: ExtRational, volume: Rational, n: usize) -> Self {
        let nvol = normalized_volume(&logdisc, &volume, n);
        let nonpositive_logdisc = matches!(&logdisc, ExtRational::Finite(a) if !a.is_positive());
        ValuationReport { logdisc, volume, nvol, logdisc_pair: None, nonpositive_logdisc }
    }
}

/// `<m0, xi>`.
pub fn log_discrepancy_toric(x: &ToricConeSingularity, xi: &RVector) -> Result<Rational> {
    check_reeb(x, xi)?;
    Ok(x.m0.dot(xi))
}

fn check_reeb(x: &ToricConeSingularity, xi: &RVector) -> Result<()> {
    if xi.dim() != x.n {
        return Err(Error::DomainError(format!("Reeb vector has dimension {}, cone has {}", xi.dim(), x.n)));
    }
    if !x.in_reeb_cone(xi) {
        return Err(Error::NotInReebCone(format!("{xi} is not strictly positive on the weight cone")));
    }
    Ok(())
}

/// `sum a_i - d(a)`; may be nonpositive for non-klt input.
pub fn log_discrepancy_hypersurface(w: &WeightedHomogeneousHypersurface, a: &MonomialValuation) -> Rational {
    a.weights.iter().fold(Rational::zero(), |acc, x| acc + x) - w.weighted_order(&a.weights)
}

/// `n! vol{alpha in sigma^dual : <alpha, xi> <= 1}`.
pub fn valuation_volume_toric(x: &ToricConeSingularity, xi: &RVector) -> Result<Rational> {
    check_reeb(x, xi)?;
    let cut = cut_cone(&x.weight_cone, xi)?;
    Ok(factorial(x.n) * polytope_volume(&cut).volume)
}

/// `d(a) / prod a_i`, the multiplicity of the initial degeneration.
pub fn valuation_volume_hypersurface(w: &WeightedHomogeneousHypersurface, a: &MonomialValuation) -> Rational {
    let prod = a.weights.iter().fold(Rational::one(), |acc, x| acc * x);
    w.weighted_order(&a.weights) / prod
}

/// At least two monomials attain `d(a)`, so the initial form is not a monomial.
pub fn has_binomial_initial_form(w: &WeightedHomogeneousHypersurface, a: &MonomialValuation) -> bool {
    w.initial_monomials(&a.weights).len() >= 2
}

/// Closed-form volume cross-checked against the lattice count at level `p`.
pub fn valuation_volume_hypersurface_checked(
    w: &WeightedHomogeneousHypersurface,
    a: &MonomialValuation,
    p: &Rational,
    rel_tol: f64,
    budget: u64,
) -> Result<Rational> {
    let closed = valuation_volume_hypersurface(w, a);
    let model = SingularityModel::Hypersurface(w.clone());
    let oracle = oracle_volume_estimate(&model, a, p, budget)?;
    let c = to_f64(&closed);
    if (oracle - c).abs() > rel_tol * c.abs() {
        return Err(Error::OracleDisagreement { closed: c, oracle });
    }
    Ok(closed)
}

/// `A^n vol`, or `+inf` when `A = +inf`.
pub fn normalized_volume(logdisc: &ExtRational, volume: &Rational, n: usize) -> ExtRational {
    match logdisc {
        ExtRational::Finite(a) => ExtRational::Finite(pow(a, n) * volume),
        ExtRational::Infinite => ExtRational::Infinite,
    }
}

pub fn normalized_volume_f64(logdisc: f64, volume: f64, n: usize) -> f64 {
    if logdisc == f64::INFINITY {
        return f64::INFINITY;
    }
    logdisc.powi(n as i32) * volume
}

/// `A_{(Y,E)}(v) = A_Y(v) - v(E)`.
pub fn log_adjusted_discrepancy(logdisc: &Rational, v_of_e: &Rational) -> Rational {
    logdisc - v_of_e
}

pub fn evaluate(model: &SingularityModel, a: &MonomialValuation) -> Result<ValuationReport> {
    if a.weights.dim() != model.weight_len() {
        return Err(Error::DomainError(format!(
            "valuation has {} weights, model needs {}",
            a.weights.dim(),
            model.weight_len()
        )));
    }
    let (logdisc, volume) = match model {
        SingularityModel::Toric(t) => (log_discrepancy_toric(t, &a.weights)?, valuation_volume_toric(t, &a.weights)?),
        SingularityModel::Hypersurface(h) => (log_discrepancy_hypersurface(h, a), valuation_volume_hypersurface(h, a)),
    };
    Ok(ValuationReport::new(ExtRational::Finite(logdisc), volume, model.dim()))
}

/// Normalized volume of `a`, exact.
pub fn nvol(model: &SingularityModel, a: &MonomialValuation) -> Result<Rational> {
    let rep = evaluate(model, a)?;
    Ok(rep.nvol.finite().cloned().expect("monomial valuations have finite log discrepancy"))
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(rat(1), |acc, k| acc * rat(k))
}

/// Toric volume as a sum over a fixed simplicial subdivision of the weight cone:
/// `vol(xi) = sum |det(u_1..u_n)| / prod <u_i, xi>`.
#[derive(Clone, Debug)]
pub struct ToricVolumeKernel {
    pub n: usize,
    cones: Vec<(Rational, Vec<RVector>)>,
    cones_f64: Vec<(f64, Vec<Vec<f64>>)>,
    m0: Vec<f64>,
}

impl ToricVolumeKernel {
    pub fn new(x: &ToricConeSingularity) -> Self {
        let cones: Vec<(Rational, Vec<RVector>)> =
            simplicial_subdivision(&x.weight_cone).into_iter().map(|rays| (det(&rays).abs(), rays)).collect();
        let cones_f64 = cones.iter().map(|(d, rays)| (to_f64(d), rays.iter().map(RVector::to_f64).collect())).collect();
        ToricVolumeKernel { n: x.n, cones, cones_f64, m0: x.m0.to_f64() }
    }

    /// `+inf` outside the Reeb cone.
    pub fn volume_f64(&self, xi: &[f64]) -> f64 {
        let mut total = 0.0;
        for (d, rays) in &self.cones_f64 {
            let mut prod = 1.0;
            for u in rays {
                let pairing: f64 = u.iter().zip(xi).map(|(a, b)| a * b).sum();
                if pairing <= 0.0 {
                    return f64::INFINITY;
                }
                prod *= pairing;
            }
            total += d / prod;
        }
        total
    }

    pub fn nvol_f64(&self, xi: &[f64]) -> f64 {
        let a: f64 = self.m0.iter().zip(xi).map(|(m, x)| m * x).sum();
        if a <= 0.0 {
            return f64::INFINITY;
        }
        a.powi(self.n as i32) * self.volume_f64(xi)
    }

    pub fn volume_exact(&self, xi: &RVector) -> Result<Rational> {
        let mut total = Rational::zero();
        for (d, rays) in &self.cones {
            let mut prod = Rational::one();
            for u in rays {
                let pairing = u.dot(xi);
                if !pairing.is_positive() {
                    return Err(Error::NotInReebCone(format!("<{u}, {xi}> <= 0")));
                }
                prod *= pairing;
            }
            total += d / prod;
        }
        Ok(total)
    }
}

/// Integer constraint `<normal, alpha> + offset >= 0`.
struct IntConstraint {
    normal: Vec<i128>,
    offset: i128,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::DomainError("oracle coefficients overflow 128 bits".into()))
}

/// Weights and level scaled to a common denominator: `(A, P)` with `A = a D`, `P = p D`.
fn integer_weights(a: &RVector, p: &Rational) -> Result<(Vec<i128>, i128)> {
    let den = a.iter().chain(std::iter::once(p)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = Rational::from_integer(den);
    let ints = a.iter().map(|x| to_i128(&(x * &scale).to_integer())).collect::<Result<Vec<_>>>()?;
    Ok((ints, to_i128(&(p * &scale).to_integer())?))
}

/// Lattice points in the box `[lo, hi]` satisfying every constraint. The last
/// coordinate is counted in closed form.
fn count_lattice_points(cons: &[IntConstraint], lo: &[i128], hi: &[i128], budget: u64) -> Result<u64> {
    let n = lo.len();
    let mut partial: Vec<i128> = cons.iter().map(|c| c.offset).collect();
    let mut count = 0u64;
    let mut work = 0u64;
    count_rec(cons, lo, hi, 0, n, &mut partial, &mut count, &mut work, budget)?;
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn count_rec(
    cons: &[IntConstraint],
    lo: &[i128],
    hi: &[i128],
    k: usize,
    n: usize,
    partial: &mut Vec<i128>,
    count: &mut u64,
    work: &mut u64,
    budget: u64,
) -> Result<()> {
    if k + 1 == n {
        *work += 1;
        if *work > budget.saturating_mul(10) {
            return Err(Error::BudgetExceeded(budget));
        }
        let (mut l, mut h) = (lo[k], hi[k]);
        for (c, s) in cons.iter().zip(partial.iter()) {
            let f = c.normal[k];
            // f x + s >= 0
            if f > 0 {
                l = l.max(Integer::div_ceil(&(-s), &f));
            } else if f < 0 {
                h = h.min(Integer::div_floor(s, &(-f)));
            } else if *s < 0 {
                return Ok(());
            }
        }
        if h >= l {
            *count += (h - l + 1) as u64;
            if *count > budget {
                return Err(Error::BudgetExceeded(budget));
            }
        }
        return Ok(());
    }
    for x in lo[k]..=hi[k] {
        for (c, s) in cons.iter().zip(partial.iter_mut()) {
            *s += c.normal[k] * x;
        }
        let r = count_rec(cons, lo, hi, k + 1, n, partial, count, work, budget);
        for (c, s) in cons.iter().zip(partial.iter_mut()) {
            *s -= c.normal[k] * x;
        }
        r?;
    }
    Ok(())
}

fn floor_i128(q: &Rational) -> Result<i128> {
    to_i128(&q.floor().to_integer())
}

fn ceil_i128(q: &Rational) -> Result<i128> {
    to_i128(&q.ceil().to_integer())
}

/// `dim R / a_p` for the monomial valuation `a`, by enumerating monomials of weight `< p`.
///
/// Toric models count lattice points of the weight cone. Hypersurfaces count standard
/// monomials with respect to a pure-power initial monomial `z_j^e`: those with `z_j`-exponent below `e`.
pub fn lattice_count_oracle(model: &SingularityModel, a: &MonomialValuation, p: &Rational, budget: u64) -> Result<u64> {
    if !p.is_positive() {
        return Err(Error::DomainError("level p must be positive".into()));
    }
    if a.weights.dim() != model.weight_len() {
        return Err(Error::DomainError("valuation length does not match the model".into()));
    }
    let (w, big_p) = integer_weights(&a.weights, p)?;
    let mut weight_cons = IntConstraint { normal: w.iter().map(|x| -x).collect(), offset: big_p - 1 };
    match model {
        SingularityModel::Toric(t) => {
            let mut cons: Vec<IntConstraint> = Vec::new();
            for f in &t.weight_cone.facets {
                let ints = f.as_integers().expect("facets are integral");
                cons.push(IntConstraint { normal: ints.iter().map(to_i128).collect::<Result<_>>()?, offset: 0 });
            }
            let cut = cut_cone(&t.weight_cone, &a.weights)?;
            let mut lo = vec![0i128; t.n];
            let mut hi = vec![0i128; t.n];
            for v in &cut.vrep {
                for i in 0..t.n {
                    let x = &v[i] * p;
                    lo[i] = lo[i].min(floor_i128(&x)?);
                    hi[i] = hi[i].max(ceil_i128(&x)?);
                }
            }
            cons.push(weight_cons);
            count_lattice_points(&cons, &lo, &hi, budget)
        }
        SingularityModel::Hypersurface(h) => {
            let (j, e) = h.reduction_variable(&a.weights).ok_or_else(|| {
                Error::DomainError("no pure-power monomial attains the weighted order".into())
            })?;
            let nv = h.nvars;
            // enumerate the reduction variable first so the bounded coordinate is outermost
            let mut order: Vec<usize> = vec![j];
            order.extend((0..nv).filter(|&i| i != j));
            let permute = |v: &[i128]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
            weight_cons.normal = permute(&weight_cons.normal);
            let mut cons = vec![weight_cons];
            let mut lo = vec![0i128; nv];
            let mut hi = vec![0i128; nv];
            for (slot, &i) in order.iter().enumerate() {
                let mut unit = vec![0i128; nv];
                unit[slot] = 1;
                cons.push(IntConstraint { normal: unit, offset: 0 });
                hi[slot] = Integer::div_floor(&(big_p - 1), &w[i]).max(0);
            }
            hi[0] = hi[0].min(e as i128 - 1);
            lo.iter_mut().for_each(|x| *x = 0);
            count_lattice_points(&cons, &lo, &hi, budget)
        }
    }
}

/// Lattice points of `{h >= 0 for h in closed} ∩ {h > 0 for h in strict}`, which must be bounded.
pub fn count_region(closed: &[Halfspace], strict: &[Halfspace], dim: usize, budget: u64) -> Result<u64> {
    let all: Vec<Halfspace> = closed.iter().chain(strict).cloned().collect();
    let poly = match Polytope::from_hrep(all, dim) {
        Ok(p) => p,
        Err(Error::EmptyRegion) => return Ok(0),
        Err(e) => return Err(e),
    };
    let mut lo = vec![i128::MAX; dim];
    let mut hi = vec![i128::MIN; dim];
    for v in &poly.vrep {
        for i in 0..dim {
            lo[i] = lo[i].min(floor_i128(&v[i])?);
            hi[i] = hi[i].max(ceil_i128(&v[i])?);
        }
    }
    let mut cons = Vec::with_capacity(closed.len() + strict.len());
    for (h, is_strict) in closed.iter().map(|h| (h, false)).chain(strict.iter().map(|h| (h, true))) {
        let den = h.normal.iter().chain(std::iter::once(&h.offset)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = Rational::from_integer(den);
        let normal = h.normal.iter().map(|x| to_i128(&(x * &scale).to_integer())).collect::<Result<Vec<_>>>()?;
        let offset = to_i128(&(&h.offset * &scale).to_integer())?;
        // integer-valued on the lattice, so `> 0` is `>= 1`
        cons.push(IntConstraint { normal, offset: if is_strict { offset - 1 } else { offset } });
    }
    count_lattice_points(&cons, &lo, &hi, budget)
}

/// `n! count / p^n`.
pub fn oracle_volume_estimate(model: &SingularityModel, a: &MonomialValuation, p: &Rational, budget: u64) -> Result<f64> {
    let count = lattice_count_oracle(model, a, p, budget)?;
    let n = model.dim();
    Ok(to_f64(&factorial(n)) * count as f64 / to_f64(p).powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::frac;
    use crate::singularities::akm_singularity;

    fn c2() -> ToricConeSingularity {
        ToricConeSingularity::affine_space(2)
    }

    fn a1_toric() -> ToricConeSingularity {
        ToricConeSingularity::from_int_rays(&[&[1, 0], &[1, 2]]).unwrap()
    }

    fn conifold() -> ToricConeSingularity {
        ToricConeSingularity::from_int_rays(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap()
    }

    fn mv(w: &[i64]) -> MonomialValuation {
        MonomialValuation::from_ints(w).unwrap()
    }

    #[test]
    fn toric_log_discrepancies() {
        let c3 = ToricConeSingularity::affine_space(3);
        assert_eq!(log_discrepancy_toric(&c3, &RVector::from_ints(&[1, 1, 1])).unwrap(), rat(3));
        assert_eq!(log_discrepancy_toric(&c2(), &RVector::from_ints(&[2, 3])).unwrap(), rat(5));
        assert_eq!(log_discrepancy_toric(&conifold(), &RVector::from_ints(&[2, 2, 4])).unwrap(), rat(4));
        assert!(matches!(
            log_discrepancy_toric(&c2(), &RVector::from_ints(&[1, 0])),
            Err(Error::NotInReebCone(_))
        ));
    }

    #[test]
    fn toric_volumes() {
        let c3 = ToricConeSingularity::affine_space(3);
        assert_eq!(valuation_volume_toric(&c3, &RVector::from_ints(&[1, 1, 1])).unwrap(), rat(1));
        assert_eq!(valuation_volume_toric(&c2(), &RVector::from_ints(&[2, 1])).unwrap(), frac(1, 2));
        let xi = RVector::from_ints(&[2, 2]);
        assert_eq!(log_discrepancy_toric(&a1_toric(), &xi).unwrap(), rat(2));
        assert_eq!(valuation_volume_toric(&a1_toric(), &xi).unwrap(), frac(1, 2));
        assert_eq!(valuation_volume_toric(&a1_toric(), &RVector::from_ints(&[1, 1])).unwrap(), rat(2));
        assert_eq!(valuation_volume_toric(&conifold(), &RVector::from_ints(&[2, 2, 4])).unwrap(), frac(1, 4));
    }

    #[test]
    fn kernel_matches_polytope_route() {
        for (x, xi) in [
            (conifold(), RVector::from_ints(&[1, 2, 5])),
            (a1_toric(), RVector::from_ints(&[3, 1])),
            (ToricConeSingularity::affine_space(3), RVector::from_ints(&[1, 2, 3])),
        ] {
            let k = ToricVolumeKernel::new(&x);
            let exact = valuation_volume_toric(&x, &xi).unwrap();
            assert_eq!(k.volume_exact(&xi).unwrap(), exact);
            assert!((k.volume_f64(&xi.to_f64()) - to_f64(&exact)).abs() < 1e-12);
        }
    }

    #[test]
    fn hypersurface_values() {
        let a22 = akm_singularity(2, 2).unwrap();
        let w = mv(&[2, 2, 2]);
        assert_eq!(log_discrepancy_hypersurface(&a22, &w), rat(2));
        assert_eq!(valuation_volume_hypersurface(&a22, &w), frac(1, 2));

        let smooth = akm_singularity(3, 1).unwrap();
        assert_eq!(log_discrepancy_hypersurface(&smooth, &mv(&[1, 1, 1, 2])), rat(3));

        let a35 = akm_singularity(3, 5).unwrap();
        let w = MonomialValuation::new(RVector(vec![rat(1), rat(1), rat(1), frac(1, 2)])).unwrap();
        assert_eq!(log_discrepancy_hypersurface(&a35, &w), frac(3, 2));
        assert_eq!(valuation_volume_hypersurface(&a35, &w), rat(4));

        let quadric = akm_singularity(3, 2).unwrap();
        assert_eq!(valuation_volume_hypersurface(&quadric, &mv(&[2, 2, 2, 2])), frac(1, 4));
    }

    #[test]
    fn canonical_akm_closed_form() {
        for (n, k) in [(2usize, 2u32), (2, 5), (3, 3), (3, 5), (4, 4)] {
            let h = akm_singularity(n, k).unwrap();
            let w = crate::singularities::canonical_weights(n, k).unwrap();
            let got = nvol(&SingularityModel::Hypersurface(h), &w).unwrap();
            let expected = pow(&rat(((n as i64) - 2) * k as i64 + 2), n) / pow(&rat(k as i64), n - 1);
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn normalized_volume_examples() {
        assert_eq!(normalized_volume(&ExtRational::Finite(rat(2)), &frac(1, 2), 2), ExtRational::Finite(rat(2)));
        assert_eq!(normalized_volume(&ExtRational::Finite(rat(4)), &frac(1, 4), 3), ExtRational::Finite(rat(16)));
        assert_eq!(normalized_volume(&ExtRational::Infinite, &rat(5), 3), ExtRational::Infinite);
        assert_eq!(normalized_volume_f64(f64::INFINITY, 5.0, 3), f64::INFINITY);
    }

    #[test]
    fn log_adjusted() {
        assert_eq!(log_adjusted_discrepancy(&rat(5), &rat(0)), rat(5));
        assert_eq!(log_adjusted_discrepancy(&rat(3), &rat(1)), rat(2));
        let beta = frac(1, 3);
        assert_eq!(log_adjusted_discrepancy(&rat(3), &(rat(1) - &beta)), rat(2) + beta);
    }

    #[test]
    fn report_flags_nonpositive_discrepancy() {
        // z1^5 + z2^5 is not log terminal: A = 2 - 5 at weights (1, 1)
        let h = WeightedHomogeneousHypersurface::new(vec![vec![5, 0], vec![0, 5]], "quintic").unwrap();
        let rep = evaluate(&SingularityModel::Hypersurface(h), &mv(&[1, 1])).unwrap();
        assert_eq!(rep.logdisc, ExtRational::Finite(rat(-3)));
        assert!(rep.nonpositive_logdisc);
    }

    #[test]
    fn small_lattice_counts() {
        let c2m = SingularityModel::Toric(c2());
        assert_eq!(lattice_count_oracle(&c2m, &mv(&[1, 1]), &rat(3), 1_000).unwrap(), 6);
        let a22 = SingularityModel::Hypersurface(akm_singularity(2, 2).unwrap());
        assert_eq!(lattice_count_oracle(&a22, &mv(&[1, 1, 1]), &rat(2), 1_000).unwrap(), 4);
        // toric A_1: alpha in cone((0,1),(2,-1)) with alpha_1 + alpha_2 < 2 at xi = (1,1)
        let a1m = SingularityModel::Toric(a1_toric());
        assert_eq!(lattice_count_oracle(&a1m, &mv(&[1, 1]), &rat(2), 1_000).unwrap(), 4);
        assert!(matches!(
            lattice_count_oracle(&c2m, &mv(&[1, 1]), &rat(1000), 100),
            Err(Error::BudgetExceeded(100))
        ));
    }

    #[test]
    fn region_counter_handles_strict_faces() {
        // 0 <= x, 0 <= y, x + y <= 2, and x > 0: {(1,0),(1,1),(2,0)}
        let closed = vec![
            Halfspace::new(RVector::from_ints(&[1, 0]), rat(0)),
            Halfspace::new(RVector::from_ints(&[0, 1]), rat(0)),
            Halfspace::new(RVector::from_ints(&[-1, -1]), rat(2)),
        ];
        let strict = vec![Halfspace::new(RVector::from_ints(&[1, 0]), rat(0))];
        assert_eq!(count_region(&closed, &[], 2, 100).unwrap(), 6);
        assert_eq!(count_region(&closed, &strict, 2, 100).unwrap(), 3);
        let half = vec![Halfspace::new(RVector(vec![frac(-1, 2), rat(0)]), frac(1, 4))];
        assert_eq!(count_region(&[closed, half].concat(), &[], 2, 100).unwrap(), 3);
    }

    #[test]
    fn oracle_tracks_closed_form() {
        let models = [
            (SingularityModel::Toric(conifold()), mv(&[1, 2, 4])),
            (SingularityModel::Hypersurface(akm_singularity(3, 2).unwrap()), mv(&[1, 1, 1, 1])),
        ];
        for (m, a) in models {
            let closed = to_f64(&evaluate(&m, &a).unwrap().volume);
            let est = oracle_volume_estimate(&m, &a, &rat(60), 10_000_000).unwrap();
            assert!((est - closed).abs() / closed < 0.1, "{est} vs {closed}");
        }
    }

    #[test]
    fn checked_variant_catches_wrong_formula() {
        let h = akm_singularity(2, 3).unwrap();
        let a = mv(&[3, 3, 2]);
        assert!(valuation_volume_hypersurface_checked(&h, &a, &rat(120), 0.05, 10_000_000).is_ok());
    }
}
