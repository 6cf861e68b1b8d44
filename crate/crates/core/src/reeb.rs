//! Minimization of the normalized volume over Reeb vectors and monomial weights.
//!
//! The objective is scale invariant, so every iterate is rescaled onto the slice
//! `A = n`. Gradient steps use central differences; kinks of the piecewise
//! hypersurface objective are handled by a compass search that follows the
//! gradient phase.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactgeom::rational::{convergents, from_f64};
use crate::exactgeom::{rat, to_f64, RVector, Rational};
use crate::singularities::{pow, SingularityModel, ToricConeSingularity, WeightedHomogeneousHypersurface};
use crate::valuation::{evaluate, MonomialValuation, ToricVolumeKernel};

/// `{xi : <alpha, xi> > 0 for every generator alpha}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReebCone {
    pub generators: Vec<RVector>,
}

impl ReebCone {
    pub fn of_toric(x: &ToricConeSingularity) -> Self {
        ReebCone { generators: x.weight_cone.rays.clone() }
    }

    pub fn orthant(n: usize) -> Self {
        ReebCone { generators: (0..n).map(|i| RVector::unit(n, i)).collect() }
    }
}

pub fn reeb_membership(rc: &ReebCone, xi: &RVector) -> bool {
    rc.generators.iter().all(|g| g.dim() == xi.dim() && g.dot(xi).is_positive())
}

fn logdisc(model: &SingularityModel, xi: &RVector) -> Result<Rational> {
    let a = MonomialValuation::new(xi.clone()).ok();
    match model {
        SingularityModel::Toric(t) => crate::valuation::log_discrepancy_toric(t, xi),
        SingularityModel::Hypersurface(h) => {
            let a = a.ok_or_else(|| Error::DomainError(format!("weights {xi} must be positive")))?;
            Ok(crate::valuation::log_discrepancy_hypersurface(h, &a))
        }
    }
}

/// `(n / A(xi)) xi`, so that the result has `A = n` exactly.
pub fn normalize_reeb(model: &SingularityModel, xi: &RVector) -> Result<RVector> {
    let a = logdisc(model, xi)?;
    if !a.is_positive() {
        return Err(Error::DomainError(format!("A({xi}) = {a} is not positive")));
    }
    Ok(xi.scale(&(rat(model.dim() as i64) / a)))
}

/// `vol(lambda xi) lambda^n == vol(xi)`, exactly.
pub fn rescaling_law_check(model: &SingularityModel, xi: &RVector, lambda: &Rational) -> Result<bool> {
    if !lambda.is_positive() {
        return Err(Error::DomainError("lambda must be positive".into()));
    }
    let a = MonomialValuation::new(xi.clone())
        .or_else(|_| match model {
            // Reeb vectors of toric cones may have nonpositive coordinates
            SingularityModel::Toric(_) => Ok(MonomialValuation { weights: xi.clone() }),
            _ => Err(Error::DomainError(format!("weights {xi} must be positive"))),
        })?;
    let scaled = MonomialValuation { weights: xi.scale(lambda) };
    let v = evaluate(model, &a)?.volume;
    let vs = evaluate(model, &scaled)?.volume;
    Ok(vs * pow(lambda, model.dim()) == v)
}

/// Scale-invariant objective over a (possibly symmetry-reduced) parameter vector.
enum Objective<'a> {
    Toric { kernel: ToricVolumeKernel, m0: Vec<f64>, n: usize },
    Hyper { h: &'a WeightedHomogeneousHypersurface, classes: Vec<Vec<usize>>, n: usize },
}

impl<'a> Objective<'a> {
    fn new(model: &'a SingularityModel) -> Self {
        match model {
            SingularityModel::Toric(t) => Objective::Toric { kernel: ToricVolumeKernel::new(t), m0: t.m0.to_f64(), n: t.n },
            SingularityModel::Hypersurface(h) => Objective::Hyper { h, classes: h.symmetry_classes(), n: h.dim() },
        }
    }

    fn n(&self) -> usize {
        match self {
            Objective::Toric { n, .. } | Objective::Hyper { n, .. } => *n,
        }
    }

    /// Full weight vector from parameters.
    fn expand_f64(&self, t: &[f64]) -> Vec<f64> {
        match self {
            Objective::Toric { .. } => t.to_vec(),
            Objective::Hyper { h, classes, .. } => {
                let mut a = vec![0.0; h.nvars];
                for (c, &v) in classes.iter().zip(t) {
                    c.iter().for_each(|&i| a[i] = v);
                }
                a
            }
        }
    }

    fn expand(&self, t: &RVector) -> RVector {
        match self {
            Objective::Toric { .. } => t.clone(),
            Objective::Hyper { h, classes, .. } => {
                let mut a = RVector::zeros(h.nvars);
                for (c, v) in classes.iter().zip(t.iter()) {
                    c.iter().for_each(|&i| a.0[i] = v.clone());
                }
                a
            }
        }
    }

    /// Parameters of a full weight vector; `None` when it breaks the symmetry.
    fn reduce(&self, a: &RVector) -> Option<RVector> {
        match self {
            Objective::Toric { .. } => Some(a.clone()),
            Objective::Hyper { classes, .. } => {
                let t: Vec<Rational> = classes.iter().map(|c| a[c[0]].clone()).collect();
                classes.iter().all(|c| c.iter().all(|&i| a[i] == a[c[0]])).then_some(RVector(t))
            }
        }
    }

    fn reduce_f64(&self, a: &[f64]) -> Vec<f64> {
        match self {
            Objective::Toric { .. } => a.to_vec(),
            Objective::Hyper { classes, .. } => {
                classes.iter().map(|c| c.iter().map(|&i| a[i]).sum::<f64>() / c.len() as f64).collect()
            }
        }
    }

    fn logdisc_f64(&self, t: &[f64]) -> f64 {
        match self {
            Objective::Toric { m0, .. } => m0.iter().zip(t).map(|(m, x)| m * x).sum(),
            Objective::Hyper { h, .. } => {
                let a = self.expand_f64(t);
                a.iter().sum::<f64>() - h.weighted_order_f64(&a)
            }
        }
    }

    /// `vol^`; `+inf` off the domain.
    fn value(&self, t: &[f64]) -> f64 {
        if t.iter().any(|x| !x.is_finite()) {
            return f64::INFINITY;
        }
        let v = match self {
            Objective::Toric { kernel, .. } => kernel.nvol_f64(t),
            Objective::Hyper { h, n, .. } => {
                let a = self.expand_f64(t);
                if a.iter().any(|&x| x <= 0.0) {
                    return f64::INFINITY;
                }
                let d = h.weighted_order_f64(&a);
                let big_a = a.iter().sum::<f64>() - d;
                if big_a <= 0.0 {
                    return f64::INFINITY;
                }
                big_a.powi(*n as i32) * d / a.iter().product::<f64>()
            }
        };
        if v.is_finite() { v } else { f64::INFINITY }
    }

    fn normalize(&self, t: &[f64]) -> Option<Vec<f64>> {
        let a = self.logdisc_f64(t);
        (a > 0.0 && a.is_finite()).then(|| t.iter().map(|x| x * self.n() as f64 / a).collect())
    }

    fn exact_value(&self, model: &SingularityModel, t: &RVector) -> Result<Rational> {
        let a = MonomialValuation { weights: self.expand(t) };
        match (self, model) {
            (Objective::Toric { kernel, .. }, SingularityModel::Toric(x)) => {
                let vol = kernel.volume_exact(&a.weights)?;
                Ok(pow(&x.m0.dot(&a.weights), x.n) * vol)
            }
            _ => {
                if !a.weights.all_positive() {
                    return Err(Error::NonFiniteObjective);
                }
                let rep = evaluate(model, &a)?;
                if rep.nonpositive_logdisc {
                    return Err(Error::NonFiniteObjective);
                }
                Ok(rep.nvol.finite().cloned().expect("finite log discrepancy"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { tol: 1e-8, max_iter: 2000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeResult {
    /// Full weight vector (or Reeb vector) on the slice `A = n`.
    pub argmin: RVector,
    pub min_nvol: f64,
    /// Exact objective at `argmin`.
    pub min_nvol_exact: Rational,
    pub iterations: usize,
    pub trajectory: Vec<(Vec<f64>, f64)>,
    pub grad_norm: f64,
    pub converged: bool,
    /// The minimum sits on a kink of the objective and was certified by the compass search.
    pub kink: bool,
    /// The argmin coordinates were replaced by low-denominator rationals.
    pub snapped: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn central_gradient(obj: &Objective, t: &[f64]) -> Option<Vec<f64>> {
    let mut g = vec![0.0; t.len()];
    for i in 0..t.len() {
        let h = 1e-6 * t[i].abs().max(1e-3);
        let mut p = t.to_vec();
        let mut m = t.to_vec();
        p[i] += h;
        m[i] -= h;
        let (fp, fm) = (obj.value(&p), obj.value(&m));
        if !fp.is_finite() || !fm.is_finite() {
            return None;
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    Some(g)
}

/// Removes the component along `x`; the objective is constant along rays.
fn tangent(g: &[f64], x: &[f64]) -> Vec<f64> {
    let s = dot(g, x) / dot(x, x);
    g.iter().zip(x).map(|(gi, xi)| gi - s * xi).collect()
}

pub fn minimize_nvol(model: &SingularityModel, init: &RVector, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    if init.dim() != model.weight_len() {
        return Err(Error::DomainError(format!("init has {} coordinates, model needs {}", init.dim(), model.weight_len())));
    }
    if let SingularityModel::Toric(t) = model {
        if !t.in_reeb_cone(init) {
            return Err(Error::NotInReebCone(format!("{init}")));
        }
    }
    let obj = Objective::new(model);
    let t0 = obj.reduce_f64(&init.to_f64());
    let mut x = obj.normalize(&t0).ok_or(Error::NonFiniteObjective)?;
    let mut fx = obj.value(&x);
    if !fx.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let mut trajectory = vec![(obj.expand_f64(&x), fx)];
    let mut iterations = 0;
    let mut grad_norm = f64::INFINITY;
    let mut smooth_stop = false;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;

    // projected gradient with Armijo backtracking and a Barzilai-Borwein first trial
    while iterations < opts.max_iter {
        let Some(g) = central_gradient(&obj, &x) else { break };
        let g = tangent(&g, &x);
        grad_norm = norm(&g);
        if grad_norm < opts.tol {
            smooth_stop = true;
            break;
        }
        let mut step = match &prev {
            Some((px, pg)) => {
                let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 0.0 { dot(&s, &s) / sy } else { 0.1 * norm(&x) / grad_norm }
            }
            None => 0.1 * norm(&x) / grad_norm,
        };
        let mut accepted = None;
        while step * grad_norm > 1e-14 * norm(&x) {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            if let Some(trial) = obj.normalize(&trial) {
                let ft = obj.value(&trial);
                if ft.is_finite() && ft <= fx - 1e-4 * step * grad_norm * grad_norm {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((nx, nf)) = accepted else { break };
        iterations += 1;
        prev = Some((x.clone(), g));
        let stalled = (fx - nf).abs() <= 1e-15 * fx.abs();
        x = nx;
        fx = nf;
        trajectory.push((obj.expand_f64(&x), fx));
        if stalled {
            break;
        }
    }

    // compass search along coordinate directions, each trial rescaled onto the slice
    let mut kink = false;
    let mut mesh = 0.05 * x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mesh_floor = 1e-12 * x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while mesh > mesh_floor && iterations < opts.max_iter {
        let mut best: Option<(Vec<f64>, f64)> = None;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut trial = x.clone();
                trial[i] += sign * mesh;
                if let Some(trial) = obj.normalize(&trial) {
                    let ft = obj.value(&trial);
                    if ft < best.as_ref().map_or(fx, |b| b.1) {
                        best = Some((trial, ft));
                    }
                }
            }
        }
        match best {
            Some((nx, nf)) if nf < fx => {
                x = nx;
                fx = nf;
                iterations += 1;
                trajectory.push((obj.expand_f64(&x), fx));
                kink = true;
            }
            _ => mesh *= 0.5,
        }
    }
    if let Some(g) = central_gradient(&obj, &x) {
        grad_norm = norm(&tangent(&g, &x));
    }
    let mesh_converged = mesh <= mesh_floor;
    let kink = kink && grad_norm >= opts.tol.max(1e-6);
    let converged = smooth_stop || mesh_converged || grad_norm < opts.tol;

    let (argmin_t, snapped) = snap(&obj, model, &x)?;
    let mut argmin = obj.expand(&argmin_t);
    let mut exact = obj.exact_value(model, &argmin_t)?;
    if let SingularityModel::Hypersurface(h) = model {
        let sat = normalize_reeb(model, &h.saturate(&argmin))?;
        if let Some(st) = obj.reduce(&sat) {
            if let Ok(v) = obj.exact_value(model, &st) {
                if v <= exact {
                    argmin = sat;
                    exact = v;
                }
            }
        }
    }
    Ok(MinimizeResult {
        min_nvol: to_f64(&exact),
        argmin,
        min_nvol_exact: exact,
        iterations,
        trajectory,
        grad_norm,
        converged,
        kink,
        snapped,
    })
}

/// Replaces each coordinate by its first continued-fraction convergent within `1e-6`
/// (denominator at most `10^6`), keeping the result only if its exact objective does
/// not exceed the exact objective at the binary value of `x`.
fn snap(obj: &Objective, model: &SingularityModel, x: &[f64]) -> Result<(RVector, bool)> {
    let n = rat(obj.n() as i64);
    let to_slice = |t: RVector| -> Option<RVector> {
        let a = MonomialValuation { weights: obj.expand(&t) };
        let ld = match model {
            SingularityModel::Toric(m) => m.m0.dot(&a.weights),
            SingularityModel::Hypersurface(h) => crate::valuation::log_discrepancy_hypersurface(h, &a),
        };
        ld.is_positive().then(|| t.scale(&(&n / ld)))
    };
    let raw = to_slice(RVector::from_f64s(x)?).ok_or(Error::NonFiniteObjective)?;
    let raw_value = obj.exact_value(model, &raw)?;
    let snapped: Option<RVector> = x
        .iter()
        .map(|&v| {
            let tol = 1e-6 * v.abs().max(1.0);
            convergents(v, 1_000_000).into_iter().find(|c| (to_f64(c) - v).abs() <= tol)
        })
        .collect::<Option<Vec<_>>>()
        .map(RVector)
        .and_then(to_slice);
    if let Some(s) = snapped {
        if obj.exact_value(model, &s).is_ok_and(|v| v <= raw_value) {
            return Ok((s, true));
        }
    }
    Ok((raw, false))
}

/// Random interior starting point.
pub fn random_init(model: &SingularityModel, rng: &mut ChaCha8Rng) -> Result<RVector> {
    match model {
        SingularityModel::Toric(t) => {
            let mut xi = RVector::zeros(t.n);
            for u in &t.sigma.rays {
                let c = from_f64(rng.gen_range(0.2..5.0))?;
                xi = &xi + &u.scale(&c);
            }
            Ok(xi)
        }
        SingularityModel::Hypersurface(h) => {
            let obj = Objective::new(model);
            // retry until the log discrepancy is positive
            for _ in 0..1000 {
                let t: Vec<f64> = h.symmetry_classes().iter().map(|_| rng.gen_range(0.3..3.0)).collect();
                if obj.logdisc_f64(&t) > 0.0 {
                    return RVector::from_f64s(&obj.expand_f64(&t));
                }
            }
            Err(Error::DomainError("no random weight with positive log discrepancy".into()))
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultiStartReport {
    pub runs: Vec<MinimizeResult>,
    /// Largest coordinate spread of the argmins on the slice.
    pub spread: f64,
    pub agree: bool,
}

/// `starts` seeded random inits; the argmins must agree within `agree_tol`.
pub fn multi_start(model: &SingularityModel, starts: usize, seed: u64, opts: &MinimizeOptions, agree_tol: f64) -> Result<MultiStartReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut runs = Vec::with_capacity(starts);
    for _ in 0..starts {
        let init = random_init(model, &mut rng)?;
        runs.push(minimize_nvol(model, &init, opts)?);
    }
    let first = runs[0].argmin.to_f64();
    let spread = runs
        .iter()
        .flat_map(|r| r.argmin.to_f64().into_iter().zip(first.clone()).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(MultiStartReport { spread, agree: spread <= agree_tol, runs })
}

#[derive(Clone, Debug)]
pub struct ConvexityProbe {
    pub segments: usize,
    pub min_second_difference: f64,
    pub convex: bool,
}

/// Second differences of `vol` restricted to random segments of the slice `<m0, xi> = n`
/// through `center`.
pub fn convexity_probe(x: &ToricConeSingularity, center: &RVector, segments: usize, seed: u64) -> Result<ConvexityProbe> {
    let kernel = ToricVolumeKernel::new(x);
    let m0 = x.m0.to_f64();
    let c = center.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = x.weight_cone.rays.iter().map(|g| to_f64(&g.dot(center)) / norm(&g.to_f64())).fold(f64::INFINITY, f64::min);
    if reach <= 0.0 {
        return Err(Error::NotInReebCone(format!("{center}")));
    }
    let mut worst = f64::INFINITY;
    for _ in 0..segments {
        let raw: Vec<f64> = (0..x.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = dot(&raw, &m0) / dot(&m0, &m0);
        let mut d: Vec<f64> = raw.iter().zip(&m0).map(|(r, m)| r - s * m).collect();
        let len = norm(&d);
        if len == 0.0 {
            continue;
        }
        d.iter_mut().for_each(|v| *v *= 0.5 * reach / len);
        let h = 0.1;
        let f = |s: f64| kernel.volume_f64(&c.iter().zip(&d).map(|(ci, di)| ci + s * di).collect::<Vec<_>>());
        for k in -9..=9 {
            let s = k as f64 * h;
            let sd = f(s - h) - 2.0 * f(s) + f(s + h);
            worst = worst.min(sd);
        }
    }
    Ok(ConvexityProbe { segments, min_second_difference: worst, convex: worst >= -1e-9 })
}

/// `(2 pi)^n / n^n * vol^(ord_S)`.
pub fn msy_link_volume(nvol_ord_s: f64, n: usize) -> Result<f64> {
    if nvol_ord_s < 0.0 || n == 0 {
        return Err(Error::DomainError("need vol^ >= 0 and n >= 1".into()));
    }
    Ok((2.0 * std::f64::consts::PI).powi(n as i32) / (n as f64).powi(n as i32) * nvol_ord_s)
}

/// `(m - 1) R / (m - R)`.
pub fn ricci_bound_transfer(r: f64, m: u32) -> Result<f64> {
    let mf = m as f64;
    if !(r > 0.0 && r <= 1.0) || m < 2 || mf <= r {
        return Err(Error::DomainError(format!("need 0 < R <= 1 and m >= 2 (R={r}, m={m})")));
    }
    Ok((mf - 1.0) * r / (mf - r))
}

/// `R^n vol^(ord_S)`.
pub fn hvol_lower(r: f64, nvol_ord_s: f64, n: usize) -> f64 {
    r.powi(n as i32) * nvol_ord_s
}

/// Objective value in floating point; `+inf` off the domain.
pub fn nvol_f64(model: &SingularityModel, a: &RVector) -> f64 {
    evaluate(model, &MonomialValuation { weights: a.clone() })
        .ok()
        .filter(|r| !r.nonpositive_logdisc)
        .map_or(f64::INFINITY, |r| r.nvol.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::frac;
    use crate::singularities::akm_singularity;

    fn hyper(n: usize, k: u32) -> SingularityModel {
        SingularityModel::Hypersurface(akm_singularity(n, k).unwrap())
    }

    fn conifold() -> SingularityModel {
        SingularityModel::Toric(
            ToricConeSingularity::from_int_rays(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap(),
        )
    }

    /// Last weight over the first, which is what the one-parameter family sees.
    fn ratio(r: &MinimizeResult) -> f64 {
        let a = r.argmin.to_f64();
        a[a.len() - 1] / a[0]
    }

    #[test]
    fn membership() {
        assert!(reeb_membership(&ReebCone::orthant(3), &RVector::from_ints(&[1, 1, 1])));
        assert!(!reeb_membership(&ReebCone::orthant(3), &RVector::from_ints(&[1, 0, 1])));
        let SingularityModel::Toric(c) = conifold() else { unreachable!() };
        assert!(reeb_membership(&ReebCone::of_toric(&c), &RVector::from_ints(&[1, 1, 2])));
        assert!(!reeb_membership(&ReebCone::of_toric(&c), &RVector::from_ints(&[1, 1, 1])));
    }

    #[test]
    fn normalization() {
        let c3 = SingularityModel::Toric(ToricConeSingularity::affine_space(3));
        assert_eq!(normalize_reeb(&c3, &RVector::from_ints(&[2, 2, 2])).unwrap(), RVector::from_ints(&[1, 1, 1]));
        let c2 = SingularityModel::Toric(ToricConeSingularity::affine_space(2));
        let got = normalize_reeb(&c2, &RVector::from_ints(&[1, 3])).unwrap();
        assert_eq!(got, RVector(vec![frac(1, 2), frac(3, 2)]));
        assert_eq!(normalize_reeb(&c2, &got).unwrap(), got);
    }

    #[test]
    fn rescaling_law() {
        let c3 = SingularityModel::Toric(ToricConeSingularity::affine_space(3));
        assert!(rescaling_law_check(&c3, &RVector::from_ints(&[1, 1, 1]), &rat(2)).unwrap());
        assert!(rescaling_law_check(&conifold(), &RVector::from_ints(&[1, 2, 4]), &rat(3)).unwrap());
        assert!(rescaling_law_check(&hyper(3, 2), &RVector::from_ints(&[2, 2, 2, 2]), &frac(1, 2)).unwrap());
    }

    #[test]
    fn smooth_point_minimum() {
        let c3 = SingularityModel::Toric(ToricConeSingularity::affine_space(3));
        let r = minimize_nvol(&c3, &RVector::from_ints(&[1, 2, 5]), &MinimizeOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.argmin, RVector::from_ints(&[1, 1, 1]));
        assert_eq!(r.min_nvol_exact, rat(27));
    }

    #[test]
    fn kink_minimum_for_a2() {
        let r = minimize_nvol(&hyper(3, 3), &RVector::from_ints(&[1, 1, 1, 1]), &MinimizeOptions::default()).unwrap();
        assert!((ratio(&r) - 2.0 / 3.0).abs() < 1e-6, "{}", ratio(&r));
        assert_eq!(r.min_nvol_exact, frac(125, 9));
    }

    #[test]
    fn smooth_minimum_for_a4() {
        let r = minimize_nvol(&hyper(3, 5), &RVector::from_ints(&[5, 5, 5, 2]), &MinimizeOptions::default()).unwrap();
        assert!((ratio(&r) - 0.5).abs() < 1e-6, "{}", ratio(&r));
        assert_eq!(r.min_nvol_exact, frac(27, 2));
    }

    #[test]
    fn flat_branch_saturates_to_canonical() {
        let r = minimize_nvol(&hyper(3, 1), &RVector::from_ints(&[1, 1, 1, 1]), &MinimizeOptions::default()).unwrap();
        assert!((ratio(&r) - 2.0).abs() < 1e-6, "{}", ratio(&r));
        assert_eq!(r.min_nvol_exact, rat(27));
    }

    #[test]
    fn surface_kinks() {
        let r = minimize_nvol(&hyper(2, 5), &RVector::from_ints(&[1, 1, 1]), &MinimizeOptions::default()).unwrap();
        assert!((ratio(&r) - 0.4).abs() < 1e-6);
        assert_eq!(r.min_nvol_exact, frac(4, 5));
    }

    #[test]
    fn rejects_init_outside_cone() {
        let e = minimize_nvol(&conifold(), &RVector::from_ints(&[1, 1, 1]), &MinimizeOptions::default());
        assert!(matches!(e, Err(Error::NotInReebCone(_))));
    }

    #[test]
    fn conifold_multistart_and_convexity() {
        let ms = multi_start(&conifold(), 5, 7, &MinimizeOptions::default(), 1e-6).unwrap();
        assert!(ms.agree, "spread {}", ms.spread);
        assert_eq!(ms.runs[0].argmin, RVector(vec![frac(3, 2), frac(3, 2), rat(3)]));
        assert_eq!(ms.runs[0].min_nvol_exact, rat(16));
        let SingularityModel::Toric(c) = conifold() else { unreachable!() };
        let probe = convexity_probe(&c, &ms.runs[0].argmin, 20, 3).unwrap();
        assert!(probe.convex, "{}", probe.min_second_difference);
    }

    #[test]
    fn transfers() {
        assert!((msy_link_volume(27.0, 3).unwrap() - (2.0 * std::f64::consts::PI).powi(3)).abs() < 1e-9);
        assert_eq!(msy_link_volume(0.0, 3).unwrap(), 0.0);
        assert_eq!(ricci_bound_transfer(1.0, 5).unwrap(), 1.0);
        assert!((ricci_bound_transfer(0.5, 3).unwrap() - 0.4).abs() < 1e-15);
        assert!(ricci_bound_transfer(0.0, 3).is_err());
        let seq: Vec<f64> = (2..40).map(|m| ricci_bound_transfer(0.5, m).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[0] < w[1]) && *seq.last().unwrap() < 0.5);
        assert_eq!(hvol_lower(0.5, 16.0, 2), 4.0);
    }
}
