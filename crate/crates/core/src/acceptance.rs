//! The acceptance suite: eleven criteria, each a list of two-sided checks.
//!
//! Shared by the `acceptance` test target and `hvol selftest`.

use std::fmt;
use std::time::Instant;

use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactgeom::{centroid, fmt_rational, frac, rat, to_f64, Halfspace, Polytope, RVector, Rational};
use crate::filtration::{
    fujita_gap, liu_bound_check, logdisc_of, phi, phi_derivative_s0, profile_from_model, propdim_check, theta,
    theta_integral, volume_from_profile, VolumeProfile,
};
use crate::quotient::{
    check_free_in_codim1, cyclic_group, library_groups, pair_identity_check, quotient_min_nvol, quotient_volume,
};
use crate::reeb::{minimize_nvol, multi_start, normalize_reeb, rescaling_law_check, MinimizeOptions};
use crate::singularities::{
    akm_singularity, canonical_weights, cone_invariants, pow, toric_log_fano, PolarizedConeData, SingularityModel,
    ToricConeSingularity,
};
use crate::valuation::{evaluate, nvol, oracle_volume_estimate, MonomialValuation};

/// `|a - b| <= tol max(1, |a|, |b|)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(Rational),
    Approx(f64),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(q) => write!(f, "{}", fmt_rational(q)),
            Num::Approx(x) => write!(f, "{x:.16e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: Num,
    pub rhs: Num,
    pub tolerance: f64,
}

impl Check {
    pub fn exact(name: impl Into<String>, lhs: Rational, rhs: Rational) -> Self {
        Check { name: name.into(), pass: lhs == rhs, lhs: Num::Exact(lhs), rhs: Num::Exact(rhs), tolerance: 0.0 }
    }

    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check { name: name.into(), pass: rel_close(lhs, rhs, tol), lhs: Num::Approx(lhs), rhs: Num::Approx(rhs), tolerance: tol }
    }

    /// `lhs >= rhs - tol`.
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check { name: name.into(), pass: lhs >= rhs - tol, lhs: Num::Approx(lhs), rhs: Num::Approx(rhs), tolerance: tol }
    }

    /// `lhs <= rhs + tol`.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check { name: name.into(), pass: lhs <= rhs + tol, lhs: Num::Approx(lhs), rhs: Num::Approx(rhs), tolerance: tol }
    }

    /// Boolean identity, recorded as `1` against `1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::exact(name, if ok { rat(1) } else { rat(0) }, rat(1))
    }
}

/// Deliberately broken variants, used to show the suite detects them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Drops one factor `(n+1)/n` from `(-K - D)^n` on the projective cone.
    ProjectiveVolume,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub suite: &'static str,
    pub checks: Vec<Check>,
    /// Error raised while running, if any; the criterion then fails.
    pub error: Option<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

type Runner = fn(Mutation) -> Result<Vec<Check>>;

/// `(id, name, suite, wall-time limit in seconds, runner)`.
const CRITERIA: [(u8, &str, &str, Option<f64>, Runner); 11] = [
    (1, "quotient_surfaces", "quotient", Some(1.0), quotient_surfaces),
    (2, "pair_identity", "quotient", Some(5.0), pair_identity),
    (3, "molien_limit", "quotient", None, molien_limit),
    (4, "akm_minimization", "minimizer", Some(30.0), akm_minimization),
    (5, "conjectured_minimizer", "minimizer", Some(10.0), conjectured_minimizer),
    (6, "fujita_sharpness", "singularities", None, fujita_sharpness),
    (7, "oracle_equivalence", "valuation", Some(60.0), oracle_equivalence),
    (8, "phi_calculus", "filtration", None, phi_calculus),
    (9, "fujita_gap", "filtration", None, fujita_gap_criterion),
    (10, "reeb_laws", "reeb", None, reeb_laws),
    (11, "toric_log", "singularities", None, toric_log),
];

pub fn criterion_names() -> Vec<(u8, &'static str, &'static str)> {
    CRITERIA.iter().map(|(id, name, suite, _, _)| (*id, *name, *suite)).collect()
}

/// Runs every criterion whose name, suite or number matches `filter`.
pub fn run(filter: Option<&str>, mutation: Mutation) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|(id, name, suite, _, _)| {
            filter.map_or(true, |f| name.contains(f) || *suite == f || id.to_string() == f)
        })
        .map(|&(id, name, suite, limit, runner)| {
            let start = Instant::now();
            let outcome = runner(mutation);
            let seconds = start.elapsed().as_secs_f64();
            let (mut checks, error) = match outcome {
                Ok(c) => (c, None),
                Err(e) => (Vec::new(), Some(format!("{}: {e}", e.code()))),
            };
            if let Some(limit) = limit {
                checks.push(Check::at_most("runtime_seconds", seconds, limit, 0.0));
            }
            CriterionReport { id, name, suite, checks, error, seconds }
        })
        .collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn quotient_surfaces(_: Mutation) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for r in 1..=12u32 {
        for a in 0..r.max(1) {
            if gcd(a, r) != 1 {
                continue;
            }
            let g = cyclic_group(r, a as i64)?;
            if !check_free_in_codim1(&g) {
                continue;
            }
            let q = quotient_min_nvol(&g)?;
            checks.push(Check::exact(format!("min_nvol 1/{r}(1,{a})"), q.min_nvol, frac(4, r as i64)));
        }
    }
    // the A_1 surface singularity is C^2/(Z/2) acting by -1
    let model = SingularityModel::Hypersurface(akm_singularity(2, 2)?);
    let m = minimize_nvol(&model, &RVector::from_ints(&[1, 2, 3]), &MinimizeOptions::default())?;
    let q = quotient_min_nvol(&cyclic_group(2, 1)?)?;
    checks.push(Check::exact("A_1 hypersurface vs 1/2(1,1)", m.min_nvol_exact, q.min_nvol));
    Ok(checks)
}

fn pair_identity(_: Mutation) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for g in library_groups() {
        let order = g.order();
        let mut ok = true;
        let mut m = order;
        while m <= 60 {
            ok &= pair_identity_check(&g, m)?;
            m += order;
        }
        checks.push(Check::holds(format!("d_m + d_(m+1) for {} (m <= 60)", g.label), ok));
    }
    Ok(checks)
}

fn molien_limit(_: Mutation) -> Result<Vec<Check>> {
    const M: usize = 400;
    library_groups()
        .iter()
        .map(|g| {
            let q = quotient_volume(g, M)?;
            let exact = to_f64(&q.exact);
            Ok(Check::at_most(format!("|d_M/(M^2/2) - 1/|G|| for {}", g.label), (q.estimate - exact).abs(), 2.0 / M as f64, 0.0))
        })
        .collect()
}

/// Largest coordinate gap between `a` and `b`, both rescaled to first coordinate 1.
fn projective_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x / a[0] - y / b[0]).abs()).fold(0.0, f64::max)
}

fn akm_minimization(_: Mutation) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (n, k) in [(2, 2), (2, 5), (3, 1), (3, 2), (3, 3), (4, 2), (3, 4), (4, 3)] {
        let model = SingularityModel::Hypersurface(akm_singularity(n, k)?);
        let init = RVector(vec![rat(1); n + 1]);
        let res = minimize_nvol(&model, &init, &MinimizeOptions::default())?;
        let canon = canonical_weights(n, k)?;
        let dist = projective_distance(&res.argmin.to_f64(), &canon.weights.to_f64());
        checks.push(Check::at_most(format!("argmin vs canonical, (n,k)=({n},{k})"), dist, 0.0, 1e-6));
        let (ni, ki) = (n as i64, k as i64);
        let closed = pow(&rat((ni - 2) * ki + 2), n) / pow(&rat(ki), n - 1);
        checks.push(Check::exact(format!("min nvol, (n,k)=({n},{k})"), res.min_nvol_exact.clone(), closed));
        let named = match (n, k) {
            (3, 2) => Some(rat(16)),
            (3, 3) => Some(frac(125, 9)),
            (2, 2) => Some(rat(2)),
            _ => None,
        };
        if let Some(v) = named {
            checks.push(Check::exact(format!("stated value, (n,k)=({n},{k})"), res.min_nvol_exact, v));
        }
    }
    Ok(checks)
}

fn conjectured_minimizer(_: Mutation) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (n, k) in [(3usize, 5u32), (4, 4)] {
        let model = SingularityModel::Hypersurface(akm_singularity(n, k)?);
        let res = minimize_nvol(&model, &RVector(vec![rat(1); n + 1]), &MinimizeOptions::default())?;
        let w = res.argmin.to_f64();
        let ratio = w[n] / w[0];
        let expected = (n as f64 - 2.0) / (n as f64 - 1.0);
        checks.push(Check::close(format!("last weight ratio, (n,k)=({n},{k})"), ratio, expected, 1e-6));
        let mut conj = vec![rat(1); n];
        conj.push(frac(n as i64 - 2, n as i64 - 1));
        let at_conj = nvol(&model, &MonomialValuation::new(RVector(conj))?)?;
        checks.push(Check::exact(format!("min nvol at conjectured weight, (n,k)=({n},{k})"), res.min_nvol_exact.clone(), at_conj));
        let at_v0 = nvol(&model, &canonical_weights(n, k)?)?;
        if (n, k) == (3, 5) {
            checks.push(Check::exact("min nvol, (3,5)", res.min_nvol_exact.clone(), frac(27, 2)));
            checks.push(Check::exact("nvol(v0), (3,5)", at_v0.clone(), frac(6860, 500)));
        }
        checks.push(Check::holds(format!("min below nvol(v0), (n,k)=({n},{k})"), res.min_nvol_exact < at_v0));
    }
    Ok(checks)
}

fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    frac(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

fn fujita_sharpness(mutation: Mutation) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = Vec::new();
    for i in 0..50 {
        let n = rng.gen_range(2..=6usize);
        // r uniform among fractions p/q <= n
        let q = rng.gen_range(1..=12i64);
        let r = frac(rng.gen_range(1..=n as i64 * q), q);
        let deg_h = random_rational(&mut rng, 50, 50);
        let data = PolarizedConeData::new(n, r.clone(), deg_h.clone())?;
        let inv = cone_invariants(&data)?;
        let ratio = frac(n as i64 + 1, n as i64);
        let antilog = match mutation {
            Mutation::None => inv.antilog_power.clone(),
            Mutation::ProjectiveVolume => pow(&r, n) * pow(&ratio, n - 1) * &deg_h,
        };
        let lhs = pow(&(Rational::one() / &ratio), n) * antilog;
        checks.push(Check::exact(format!("triple {i}: (n/(n+1))^n (-K-D)^n = r^n H^(n-1)"), lhs, pow(&r, n) * deg_h));
    }
    Ok(checks)
}

fn oracle_equivalence(_: Mutation) -> Result<Vec<Check>> {
    let c2 = SingularityModel::Toric(ToricConeSingularity::affine_space(2));
    let c3 = SingularityModel::Toric(ToricConeSingularity::affine_space(3));
    let a12 = SingularityModel::Hypersurface(akm_singularity(2, 2)?);
    let a13 = SingularityModel::Hypersurface(akm_singularity(3, 2)?);
    let a23 = SingularityModel::Hypersurface(akm_singularity(3, 3)?);
    let cases: Vec<(&str, &SingularityModel, Vec<&[i64]>)> = vec![
        ("C^2", &c2, vec![&[1, 1], &[1, 2], &[2, 3]]),
        ("C^3", &c3, vec![&[1, 1, 1], &[1, 1, 2], &[1, 2, 3]]),
        ("A_1^2", &a12, vec![&[1, 1, 1], &[2, 2, 2], &[1, 2, 3]]),
        ("A_1^3", &a13, vec![&[1, 1, 1, 1], &[1, 2, 2, 1], &[2, 1, 3, 2]]),
        ("A_2^3", &a23, vec![&[1, 1, 1, 1], &[3, 3, 3, 2], &[2, 3, 3, 2]]),
    ];
    let mut checks = Vec::new();
    for (label, model, ws) in cases {
        for w in ws {
            let a = MonomialValuation::from_ints(w)?;
            let closed = to_f64(&evaluate(model, &a)?.volume);
            let est = oracle_volume_estimate(model, &a, &rat(200), 200_000_000)?;
            checks.push(Check::at_most(format!("{label} {w:?}: relative oracle error"), (est - closed).abs() / closed, 0.05, 0.0));
        }
    }
    Ok(checks)
}

pub fn conifold() -> ToricConeSingularity {
    ToricConeSingularity::from_int_rays(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).expect("Gorenstein cone")
}

/// Toric cones used by the Reeb-cone checks.
pub fn toric_library() -> Vec<(&'static str, ToricConeSingularity)> {
    let lift = |pts: &[[i64; 2]]| -> ToricConeSingularity {
        let rays: Vec<RVector> = pts.iter().map(|p| RVector::from_ints(&[p[0], p[1], 1])).collect();
        ToricConeSingularity::from_rays(&rays).expect("lattice polygon")
    };
    vec![
        ("C^2", ToricConeSingularity::affine_space(2)),
        ("C^3", ToricConeSingularity::affine_space(3)),
        ("A_1 (toric)", ToricConeSingularity::from_int_rays(&[&[1, 0], &[1, 2]]).expect("Gorenstein cone")),
        ("1/3(1,1)", ToricConeSingularity::from_int_rays(&[&[0, 1], &[3, -1]]).expect("Q-Gorenstein cone")),
        ("conifold", conifold()),
        ("cone over dP1", lift(&[[1, 0], [0, 1], [-1, 0], [-1, -1]])),
        ("cone over dP6", lift(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]])),
    ]
}

/// Profile checks on one pair `(v0, v1)`; `r = A(v0)`.
fn profile_checks(label: &str, model: &SingularityModel, v0: &MonomialValuation, v1: &MonomialValuation) -> Result<Vec<Check>> {
    let p = profile_from_model(model, v0, v1)?;
    let n = p.n;
    let h = to_f64(&p.deg_h);
    let vol_v1 = to_f64(&evaluate(model, v1)?.volume);
    let lambda_star = to_f64(&(logdisc_of(model, v0)? / logdisc_of(model, v1)?));
    let mut checks = vec![Check::close(format!("{label}: vol(v1) from profile"), volume_from_profile(&p)?, vol_v1, 1e-6)];
    for lambda in [0.5, 1.0, 2.0, lambda_star] {
        let phi0 = phi(&p, lambda, 0.0)?;
        checks.push(Check { name: format!("{label}: Phi({lambda},0) = H"), pass: phi0 == h, lhs: Num::Approx(phi0), rhs: Num::Exact(p.deg_h.clone()), tolerance: 0.0 });
        checks.push(Check::close(format!("{label}: Phi({lambda},1) = lambda^-n vol(v1)"), phi(&p, lambda, 1.0)?, vol_v1 / lambda.powi(n as i32), 1e-8));
        let grid = (0..=20).map(|i| phi(&p, lambda, i as f64 / 20.0)).collect::<Result<Vec<_>>>()?;
        let worst = grid.windows(3).map(|w| 0.5 * (w[0] + w[2]) - w[1]).fold(f64::INFINITY, f64::min);
        checks.push(Check::at_least(format!("{label}: midpoint convexity of Phi({lambda},.)"), worst, 0.0, 1e-9));
        let d = phi_derivative_s0(&p, lambda)?;
        checks.push(Check::at_most(format!("{label}: derivative forms agree at lambda={lambda}"), d.max_rel_spread(), 0.0, 1e-7));
    }
    let c1 = to_f64(&p.c1);
    let theta_c1 = theta(&p, c1)?;
    checks.push(Check::close(format!("{label}: Theta(c1) = H - c1^n vol(v1)"), theta_c1, h - c1.powi(n as i32) * vol_v1, 1e-8));
    let nf = n as f64;
    checks.push(Check::close(
        format!("{label}: int vol_r = (n+1)/n int Theta + c1/n Theta(c1)"),
        p.vol_r_integral()?,
        (nf + 1.0) / nf * theta_integral(&p)? + c1 / nf * theta_c1,
        1e-8,
    ));
    let c2 = to_f64(&p.c2);
    let xs: Vec<f64> = (1..=40).map(|i| c2 * i as f64 / 40.0).collect();
    checks.push(Check::holds(format!("{label}: Liu bound"), liu_bound_check(&p, &xs)?));
    Ok(checks)
}

fn trivial_derivative(label: &str, model: &SingularityModel, v0: &MonomialValuation) -> Result<Check> {
    let p = profile_from_model(model, v0, v0)?;
    let d = phi_derivative_s0(&p, 1.0)?;
    let worst = [d.form_a, d.form_b1, d.form_b, d.form_c].iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(Check::at_most(format!("{label}: v1 = v0 derivative at lambda=1"), worst, 0.0, 1e-9))
}

fn phi_calculus(_: Mutation) -> Result<Vec<Check>> {
    let c2 = SingularityModel::Toric(ToricConeSingularity::affine_space(2));
    let c3 = SingularityModel::Toric(ToricConeSingularity::affine_space(3));
    let a13 = SingularityModel::Hypersurface(akm_singularity(3, 2)?);
    let mv = |w: &[i64]| MonomialValuation::from_ints(w);
    let mut checks = Vec::new();
    checks.extend(profile_checks("C^2 v1=(1,2)", &c2, &mv(&[1, 1])?, &mv(&[1, 2])?)?);
    checks.extend(profile_checks("A_1^3 canonical", &a13, &mv(&[2, 2, 2, 2])?, &mv(&[2, 2, 2, 2])?)?);
    checks.extend(profile_checks("C^3 v1=(1,1,2)", &c3, &mv(&[1, 1, 1])?, &mv(&[1, 1, 2])?)?);
    let p = profile_from_model(&a13, &mv(&[2, 2, 2, 2])?, &mv(&[2, 2, 2, 2])?)?;
    checks.push(Check::close("A_1^3 canonical: Phi(2,1) = 1/32", phi(&p, 2.0, 1.0)?, 1.0 / 32.0, 1e-12));
    checks.push(trivial_derivative("C^2", &c2, &mv(&[1, 1])?)?);
    checks.push(trivial_derivative("C^3", &c3, &mv(&[1, 1, 1])?)?);
    checks.push(trivial_derivative("A_1^3", &a13, &mv(&[2, 2, 2, 2])?)?);
    for m in [5, 10, 20] {
        let (lhs, rhs) = propdim_check(&c2, &mv(&[1, 1])?, &mv(&[1, 2])?, m, 100_000_000)?;
        checks.push(Check::exact(format!("C^2 v1=(1,2): colength identity at m={m}"), rat(lhs as i64), rat(rhs as i64)));
    }
    Ok(checks)
}

/// Random integer Reeb vector: a positive combination of the rays of `sigma`.
fn random_reeb(t: &ToricConeSingularity, rng: &mut ChaCha8Rng) -> RVector {
    t.sigma.rays.iter().fold(RVector::zeros(t.n), |acc, u| &acc + &u.scale(&rat(rng.gen_range(1..=5))))
}

/// Random positive weights on `A_1^3` with `z_1^2` initial, so the profile against
/// `(1,1,1,1)` is defined.
fn random_a13_weights(rng: &mut ChaCha8Rng) -> RVector {
    let a1 = rng.gen_range(1..=3);
    let mut w = vec![rat(a1)];
    w.extend((0..3).map(|_| rat(a1 + rng.gen_range(0..=4))));
    RVector(w)
}

fn fujita_gap_criterion(_: Mutation) -> Result<Vec<Check>> {
    // v0 is the certified minimizer (criteria 4 and 10), r = A(v0), H^{n-1} = vol(v0)
    let models = [
        ("C^2", SingularityModel::Toric(ToricConeSingularity::affine_space(2)), RVector::from_ints(&[1, 1])),
        ("C^3", SingularityModel::Toric(ToricConeSingularity::affine_space(3)), RVector::from_ints(&[1, 1, 1])),
        ("conifold", SingularityModel::Toric(conifold()), RVector::from_ints(&[1, 1, 2])),
        ("A_1^3", SingularityModel::Hypersurface(akm_singularity(3, 2)?), RVector::from_ints(&[1, 1, 1, 1])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checks = Vec::new();
    for (label, model, w0) in models {
        let n = model.dim();
        let v0 = MonomialValuation { weights: w0 };
        let r = logdisc_of(&model, &v0)?;
        let deg_h = evaluate(&model, &v0)?.volume;
        let delta = &r * frac(n as i64 + 1, n as i64);
        let gap_at = |p: &VolumeProfile, a: &Rational| fujita_gap(p, to_f64(a), &delta, &deg_h);

        let p0 = profile_from_model(&model, &v0, &v0)?;
        checks.push(Check::close(format!("{label}: gap at v0"), gap_at(&p0, &r)?, 0.0, 1e-8));
        for i in 0..10 {
            let w1 = match &model {
                SingularityModel::Toric(t) => random_reeb(t, &mut rng),
                SingularityModel::Hypersurface(_) => random_a13_weights(&mut rng),
            };
            let v1 = MonomialValuation { weights: w1 };
            let a = logdisc_of(&model, &v1)?;
            let p = profile_from_model(&model, &v0, &v1)?;
            let gap = gap_at(&p, &a)?;
            checks.push(Check::at_least(format!("{label} sample {i} {}: gap", v1.weights), gap, 0.0, 1e-9));
            let lambda_star = to_f64(&(&r / &a));
            let d = phi_derivative_s0(&p, lambda_star)?;
            let rhs = n as f64 * to_f64(&deg_h) / to_f64(&a) * gap;
            checks.push(Check::close(format!("{label} sample {i}: Phi_s(lambda*,0) = n H gap / A"), d.form_a, rhs, 1e-7));
            checks.push(Check::at_most(format!("{label} sample {i}: derivative forms agree"), d.max_rel_spread(), 0.0, 1e-7));
            checks.push(Check::at_least(
                format!("{label} sample {i}: Phi(lambda*,1) >= Phi(lambda*,0)"),
                phi(&p, lambda_star, 1.0)?,
                phi(&p, lambda_star, 0.0)?,
                1e-9,
            ));
        }
    }
    Ok(checks)
}

fn reeb_laws(_: Mutation) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checks = Vec::new();
    for (label, t) in toric_library() {
        let n = t.n;
        let model = SingularityModel::Toric(t.clone());
        for _ in 0..3 {
            let xi = random_reeb(&t, &mut rng);
            for lambda in [frac(1, 2), rat(3), frac(7, 5)] {
                checks.push(Check::holds(
                    format!("{label} {xi}: vol(lambda xi) lambda^n = vol(xi), lambda={}", fmt_rational(&lambda)),
                    rescaling_law_check(&model, &xi, &lambda)?,
                ));
            }
            let once = normalize_reeb(&model, &xi)?;
            let twice = normalize_reeb(&model, &once)?;
            checks.push(Check::holds(format!("{label} {xi}: normalize idempotent"), once == twice));
            checks.push(Check::exact(format!("{label} {xi}: A(normalized) = n"), t.m0.dot(&once), rat(n as i64)));
        }
        let ms = multi_start(&model, 5, 10, &MinimizeOptions::default(), 1e-6)?;
        checks.push(Check::at_most(format!("{label}: multi-start argmin spread"), ms.spread, 0.0, 1e-6));
    }
    Ok(checks)
}

/// Box `[-lo_i, hi_i]` cut by one random halfspace through a neighbourhood of the origin.
fn random_polytope(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Halfspace> {
    let mut h = Vec::new();
    for i in 0..dim {
        let e = RVector::unit(dim, i);
        h.push(Halfspace::new(e.clone(), rat(rng.gen_range(1..=4))));
        h.push(Halfspace::new(-&e, rat(rng.gen_range(1..=4))));
    }
    let normal = RVector((0..dim).map(|_| rat(rng.gen_range(-3..=3))).collect());
    if !normal.is_zero() {
        h.push(Halfspace::new(normal, rat(rng.gen_range(2..=6))));
    }
    h
}

fn toric_log(_: Mutation) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checks = Vec::new();
    for i in 0..10 {
        let dim = 2 + i % 3;
        let facets = random_polytope(dim, &mut rng);
        let base = Polytope::from_hrep(facets.clone(), dim)?;
        let p_star = centroid(&base)?;
        // largest r keeping every angle r l_i(p*) <= 1
        let r = facets.iter().map(|f| Rational::one() / f.eval(&p_star)).min().ok_or(Error::DegeneratePolytope)?;
        if !r.is_positive() {
            return Err(Error::DegeneratePolytope);
        }
        let rep = toric_log_fano(&facets, &r)?;
        checks.push(Check::holds(format!("polytope {i} (dim {dim}): lifted centroid = n/(n+1)(p*,1)"), rep.centroid_identity));
        checks.push(Check::exact(format!("polytope {i}: beta_n = r/n"), rep.beta_n, &r / rat(rep.n as i64)));
        checks.push(Check::exact(
            format!("polytope {i}: s = r(n+1)/n"),
            rep.s.clone(),
            &r * frac(rep.n as i64 + 1, rep.n as i64),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_close_scales() {
        assert!(rel_close(1e9, 1e9 + 1.0, 1e-8));
        assert!(!rel_close(0.0, 1e-7, 1e-8));
    }

    #[test]
    fn filter_selects_suite() {
        let reps = run(Some("quotient"), Mutation::None);
        assert_eq!(reps.iter().map(|r| r.id).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn mutant_breaks_sharpness() {
        let rep = run(Some("fujita_sharpness"), Mutation::ProjectiveVolume);
        assert!(!rep[0].pass());
        assert!(run(Some("fujita_sharpness"), Mutation::None)[0].pass());
    }
}
