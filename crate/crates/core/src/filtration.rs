//! Volume functions of the filtration induced by a second valuation `v1` on the
//! graded ring of `v0`, and the interpolating function `Phi(lambda, s)`.
//!
//! `vol(R^(t))` is normalized so that it equals `H^{n-1}` for small `t`. For monomial
//! valuations it is `H^{n-1} - n! e vol{alpha in C : <w0, alpha> <= 1, <w1, alpha> <= t <w0, alpha>}`,
//! piecewise polynomial with breakpoints at the ray ratios `<w1, u>/<w0, u>`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::linalg::solve;
use crate::exactgeom::rational::from_f64;
use crate::exactgeom::{polytope_volume, rat, to_f64, Halfspace, PolyCone, Polytope, RVector, Rational};
use crate::singularities::{pow, PolarizedConeData, SingularityModel};
use crate::valuation::{count_region, evaluate, lattice_count_oracle, MonomialValuation, ValuationReport};

/// Polynomial `sum coeffs[k] t^k` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub coeffs: Vec<Rational>,
}

impl Piece {
    fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileShape {
    /// Exact pieces covering `[c1, c2]`.
    Pieces(Vec<Piece>),
    /// `(t, vol)` samples on `[c1, c2]`, linearly interpolated.
    Table(Vec<(f64, f64)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeProfile {
    pub n: usize,
    pub deg_h: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub shape: ProfileShape,
    pub vol_v1: f64,
}

/// Cone and weights in the coordinates the profile is computed in.
struct ProfileGeometry {
    cone: PolyCone,
    w0: RVector,
    w1: RVector,
    multiplicity: Rational,
}

fn geometry(model: &SingularityModel, v0: &MonomialValuation, v1: &MonomialValuation) -> Result<ProfileGeometry> {
    for v in [v0, v1] {
        if v.weights.dim() != model.weight_len() {
            return Err(Error::DomainError("valuation length does not match the model".into()));
        }
    }
    match model {
        SingularityModel::Toric(t) => {
            for v in [v0, v1] {
                if !t.in_reeb_cone(&v.weights) {
                    return Err(Error::NotInReebCone(format!("{}", v.weights)));
                }
            }
            Ok(ProfileGeometry { cone: t.weight_cone.clone(), w0: v0.weights.clone(), w1: v1.weights.clone(), multiplicity: rat(1) })
        }
        SingularityModel::Hypersurface(h) => {
            let (j, e) = h
                .reduction_variable(&v0.weights)
                .ok_or_else(|| Error::UnsupportedProfile("no pure-power initial monomial for v0".into()))?;
            let shared = h.initial_monomials(&v1.weights).iter().any(|m| {
                m[j] == e && (0..h.nvars).all(|i| i == j || m[i] == 0)
            });
            if !shared {
                return Err(Error::UnsupportedProfile(format!("z{}^{e} is not initial for both valuations", j + 1)));
            }
            let drop = |w: &RVector| RVector(w.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x.clone()).collect());
            Ok(ProfileGeometry {
                cone: PolyCone::orthant(h.nvars - 1),
                w0: drop(&v0.weights),
                w1: drop(&v1.weights),
                multiplicity: rat(e as i64),
            })
        }
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(rat(1), |acc, k| acc * rat(k))
}

impl ProfileGeometry {
    fn n(&self) -> usize {
        self.cone.dim
    }

    fn deg_h(&self) -> Rational {
        let cut = Polytope::from_hrep(self.base_hrep(), self.n()).expect("w0 is in the Reeb cone");
        factorial(self.n()) * &self.multiplicity * polytope_volume(&cut).volume
    }

    fn base_hrep(&self) -> Vec<Halfspace> {
        let mut h = self.cone.halfspaces();
        h.push(Halfspace::new(-&self.w0, rat(1)));
        h
    }

    /// `H^{n-1} - vol(R^(t))`.
    fn deficit(&self, t: &Rational) -> Result<Rational> {
        let mut h = self.base_hrep();
        h.push(Halfspace::new(&self.w0.scale(t) - &self.w1, Rational::zero()));
        let vol = match Polytope::from_hrep(h, self.n()) {
            Ok(p) => polytope_volume(&p).volume,
            Err(Error::EmptyRegion) => Rational::zero(),
            Err(e) => return Err(e),
        };
        Ok(factorial(self.n()) * &self.multiplicity * vol)
    }

    fn ratios(&self) -> Vec<Rational> {
        let mut r: Vec<Rational> = self.cone.rays.iter().map(|u| self.w1.dot(u) / self.w0.dot(u)).collect();
        r.sort();
        r.dedup();
        r
    }
}

/// Exact piecewise-polynomial profile of `v1` relative to `v0`.
pub fn profile_from_model(model: &SingularityModel, v0: &MonomialValuation, v1: &MonomialValuation) -> Result<VolumeProfile> {
    let g = geometry(model, v0, v1)?;
    let n = g.n();
    let deg_h = g.deg_h();
    let ratios = g.ratios();
    let (c1, c2) = (ratios[0].clone(), ratios[ratios.len() - 1].clone());
    let mut pieces = Vec::new();
    for w in ratios.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let at = |k: usize, of: usize| lo + (hi - lo) * rat(k as i64) / rat(of as i64);
        let ts: Vec<Rational> = (1..=n).map(|k| at(k, n + 1)).collect();
        let rows: Vec<RVector> = ts.iter().map(|t| RVector((0..n).map(|k| pow(t, k)).collect())).collect();
        let vals = ts.iter().map(|t| Ok(&deg_h - g.deficit(t)?)).collect::<Result<Vec<_>>>()?;
        let coeffs = solve(&rows, &vals).expect("distinct nodes give an invertible Vandermonde matrix").0;
        let piece = Piece { lo: lo.clone(), hi: hi.clone(), coeffs };
        let probe = at(2 * n + 1, 2 * n + 2);
        if piece.eval(&probe) != &deg_h - g.deficit(&probe)? {
            return Err(Error::UnsupportedProfile("volume is not polynomial between breakpoints".into()));
        }
        pieces.push(piece);
    }
    let mut p = VolumeProfile { n, deg_h, c1, c2, shape: ProfileShape::Pieces(pieces), vol_v1: 0.0 };
    p.vol_v1 = to_f64(&p.volume_exact().expect("pieces"));
    Ok(p)
}

/// Profile sampled from lattice counts at level `k`:
/// `H^{n-1} - vol(R^(t)) ~ n!/k^n #{alpha : <w0, alpha> <= k, <w1, alpha> < t <w0, alpha>}`.
pub fn sampled_profile(
    model: &SingularityModel,
    v0: &MonomialValuation,
    v1: &MonomialValuation,
    k: u64,
    samples: usize,
    budget: u64,
) -> Result<VolumeProfile> {
    let exact = profile_from_model(model, v0, v1)?;
    let n = exact.n;
    let kq = rat(k as i64);
    let (cone, reduction): (PolyCone, Option<(usize, u32)>) = match model {
        SingularityModel::Toric(t) => (t.weight_cone.clone(), None),
        SingularityModel::Hypersurface(h) => (PolyCone::orthant(h.nvars), h.reduction_variable(&v0.weights)),
    };
    let dim = cone.dim;
    let mut closed = cone.halfspaces();
    closed.push(Halfspace::new(-&v0.weights, kq.clone()));
    if let Some((j, e)) = reduction {
        closed.push(Halfspace::new(-&RVector::unit(dim, j), rat(e as i64 - 1)));
    }
    let total = count_region(&closed, &[], dim, budget)? as f64;
    let scale = to_f64(&factorial(n)) / (k as f64).powi(n as i32);
    let (c1, c2) = (to_f64(&exact.c1), to_f64(&exact.c2));
    let mut table = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = c1 + (c2 - c1) * i as f64 / samples as f64;
        let tq = from_f64(t)?;
        let strict = vec![Halfspace::new(&v0.weights.scale(&tq) - &v1.weights, Rational::zero())];
        let below = count_region(&closed, &strict, dim, budget)? as f64;
        table.push((t, (total - below) * scale));
    }
    let mut p = VolumeProfile { n, deg_h: exact.deg_h, c1: exact.c1, c2: exact.c2, shape: ProfileShape::Table(table), vol_v1: 0.0 };
    p.vol_v1 = volume_from_profile(&p)?;
    Ok(p)
}

/// Both sides of `sum_k dim R_k / F^m R_k = dim R / a_m(v1)`, counted independently.
pub fn propdim_check(model: &SingularityModel, v0: &MonomialValuation, v1: &MonomialValuation, m: u64, budget: u64) -> Result<(u64, u64)> {
    geometry(model, v0, v1)?;
    let rhs = lattice_count_oracle(model, v1, &rat(m as i64), budget)?;
    let (cone, reduction): (PolyCone, Option<(usize, u32)>) = match model {
        SingularityModel::Toric(t) => (t.weight_cone.clone(), None),
        SingularityModel::Hypersurface(h) => (PolyCone::orthant(h.nvars), h.reduction_variable(&v1.weights)),
    };
    let dim = cone.dim;
    let mut closed = cone.halfspaces();
    if let Some((j, e)) = reduction {
        closed.push(Halfspace::new(-&RVector::unit(dim, j), rat(e as i64 - 1)));
    }
    // a_m(v1) = {v1 >= m}, so its complement is v1 < m
    let strict = vec![Halfspace::new(-&v1.weights, rat(m as i64))];
    let region = Polytope::from_hrep([closed.clone(), strict.clone()].concat(), dim)?;
    let den = v0.weights.iter().fold(num_bigint::BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let w0 = v0.weights.scale(&Rational::from_integer(den));
    let kmax = region.vrep.iter().map(|v| w0.dot(v)).max().expect("nonempty").ceil();
    let kmax: i64 = kmax.to_integer().try_into().map_err(|_| Error::BudgetExceeded(budget))?;
    let mut lhs = 0u64;
    for k in 0..=kmax {
        let mut c = closed.clone();
        c.push(Halfspace::new(w0.clone(), rat(-k)));
        c.push(Halfspace::new(-&w0, rat(k)));
        lhs += count_region(&c, &strict, dim, budget)?;
    }
    Ok((lhs, rhs))
}

/// `int_a^b t^e dt` for an integer `e != -1`.
fn power_integral(e: i64, a: &Rational, b: &Rational) -> Rational {
    let p = |x: &Rational| -> Rational {
        if e + 1 >= 0 {
            pow(x, (e + 1) as usize)
        } else {
            Rational::one() / pow(x, (-(e + 1)) as usize)
        }
    };
    (p(b) - p(a)) / rat(e + 1)
}

fn power_integral_f64(e: i64, a: f64, b: f64) -> f64 {
    (b.powi((e + 1) as i32) - a.powi((e + 1) as i32)) / (e + 1) as f64
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if !delta.is_finite() {
            return f64::NAN;
        }
        if depth == 0 || delta.abs() <= 15.0 * tol.max(1e-15 * (left + right).abs()) {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return Ok(0.0);
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = rec(f, a, b, fa, fm, fb, whole, tol, 30);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::IntegralDivergence(format!("non-finite integral on [{a}, {b}]")))
    }
}

const SIMPSON_TOL: f64 = 1e-12;

impl VolumeProfile {
    /// Breakpoints `c1 = b_0 < ... < b_k = c2` of the profile.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            ProfileShape::Pieces(ps) if !ps.is_empty() => {
                let mut b: Vec<f64> = ps.iter().map(|p| to_f64(&p.lo)).collect();
                b.push(to_f64(&ps[ps.len() - 1].hi));
                b
            }
            ProfileShape::Table(tab) => {
                let (c1, c2) = (to_f64(&self.c1), to_f64(&self.c2));
                let mut b = vec![c1];
                b.extend(tab.iter().map(|r| r.0).filter(|&t| t > c1 && t < c2));
                b.push(c2);
                b
            }
            _ => vec![to_f64(&self.c1), to_f64(&self.c2)],
        }
    }

    /// `vol(R^(t))`.
    pub fn vol_r(&self, t: f64) -> f64 {
        let (c1, c2) = (to_f64(&self.c1), to_f64(&self.c2));
        if t <= c1 {
            return to_f64(&self.deg_h);
        }
        if t >= c2 {
            return 0.0;
        }
        match &self.shape {
            ProfileShape::Pieces(ps) => ps
                .iter()
                .find(|p| t <= to_f64(&p.hi))
                .map_or(0.0, |p| p.eval_f64(t)),
            ProfileShape::Table(tab) => {
                let i = tab.partition_point(|(x, _)| *x < t).clamp(1, tab.len() - 1);
                let ((x0, y0), (x1, y1)) = (tab[i - 1], tab[i]);
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
        }
    }

    /// `int_x^inf vol(R^(t)) t^{-n-1} dt`, exact for piecewise profiles and positive `x`.
    fn tail_moment_exact(&self, x: &Rational) -> Option<Rational> {
        let ProfileShape::Pieces(ps) = &self.shape else { return None };
        let n = self.n as i64;
        let mut total = Rational::zero();
        if x < &self.c1 {
            total += power_integral(-n - 1, x, &self.c1) * &self.deg_h;
        }
        for p in ps {
            let lo = if &p.lo > x { p.lo.clone() } else { x.clone() };
            if lo >= p.hi {
                continue;
            }
            for (k, c) in p.coeffs.iter().enumerate() {
                total += c * power_integral(k as i64 - n - 1, &lo, &p.hi);
            }
        }
        Some(total)
    }

    fn tail_moment(&self, x: f64) -> Result<f64> {
        let n = self.n as i64;
        let c1 = to_f64(&self.c1);
        let mut total = 0.0;
        if x < c1 {
            total += to_f64(&self.deg_h) * power_integral_f64(-n - 1, x, c1);
        }
        match &self.shape {
            ProfileShape::Pieces(ps) => {
                for p in ps {
                    let (lo, hi) = (to_f64(&p.lo).max(x), to_f64(&p.hi));
                    if lo < hi {
                        total += p.coeffs.iter().enumerate().map(|(k, c)| to_f64(c) * power_integral_f64(k as i64 - n - 1, lo, hi)).sum::<f64>();
                    }
                }
            }
            ProfileShape::Table(_) => {
                // linear on each table segment
                for w in self.breakpoints().windows(2) {
                    let (lo, hi) = (w[0].max(x), w[1]);
                    if lo < hi {
                        let (y0, y1) = (self.vol_r(w[0]), self.vol_r(w[1]));
                        let b = (y1 - y0) / (w[1] - w[0]);
                        let a = y0 - b * w[0];
                        total += a * power_integral_f64(-n - 1, lo, hi) + b * power_integral_f64(-n, lo, hi);
                    }
                }
            }
        }
        Ok(total)
    }

    /// `vol(v1) = H^{n-1}/c1^n - n int_{c1}^inf vol(R^(t)) t^{-n-1} dt`, exactly.
    pub fn volume_exact(&self) -> Option<Rational> {
        let tail = self.tail_moment_exact(&self.c1)?;
        Some(&self.deg_h / pow(&self.c1, self.n) - rat(self.n as i64) * tail)
    }

    /// `Theta(x) = n x^n int_x^inf vol(R^(t)) t^{-n-1} dt`, exactly.
    pub fn theta_exact(&self, x: &Rational) -> Option<Rational> {
        if !x.is_positive() {
            return Some(self.deg_h.clone());
        }
        Some(rat(self.n as i64) * pow(x, self.n) * self.tail_moment_exact(x)?)
    }

    /// `int_{c1}^inf vol(R^(t)) dt`, exactly.
    pub fn vol_r_integral_exact(&self) -> Option<Rational> {
        let ProfileShape::Pieces(ps) = &self.shape else { return None };
        Some(ps.iter().flat_map(|p| p.coeffs.iter().enumerate().map(|(k, c)| c * power_integral(k as i64, &p.lo, &p.hi))).sum())
    }

    pub fn vol_r_integral(&self) -> Result<f64> {
        match self.vol_r_integral_exact() {
            Some(v) => Ok(to_f64(&v)),
            None => self.integrate_pieces(&|t| self.vol_r(t), to_f64(&self.c1), to_f64(&self.c2)),
        }
    }

    /// Simpson on each breakpoint interval meeting `[a, b]`.
    fn integrate_pieces(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
        let mut cuts: Vec<f64> = vec![a];
        cuts.extend(self.breakpoints().into_iter().filter(|&x| x > a && x < b));
        cuts.push(b);
        cuts.windows(2).map(|w| adaptive_simpson(f, w[0], w[1], SIMPSON_TOL)).sum()
    }

    /// Profile with the support invariants checked.
    pub fn validate(&self) -> Result<()> {
        if !self.c1.is_positive() || self.c2 < self.c1 || !self.deg_h.is_positive() {
            return Err(Error::IntegralDivergence("profile needs 0 < c1 <= c2 and H^{n-1} > 0".into()));
        }
        let h = to_f64(&self.deg_h);
        let b = self.breakpoints();
        let (c1, c2) = (b[0], b[b.len() - 1]);
        let mut prev = h;
        for i in 0..=64 {
            let t = c1 + (c2 - c1) * i as f64 / 64.0;
            let v = self.vol_r(t);
            if v > prev + 1e-9 * h || v < -1e-9 * h || v > h * (1.0 + 1e-9) {
                return Err(Error::IntegralDivergence(format!("vol(R^(t)) leaves [0, H^(n-1)] or increases at t={t}")));
            }
            prev = v;
        }
        Ok(())
    }
}

pub fn theta(p: &VolumeProfile, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(to_f64(&p.deg_h));
    }
    if x >= to_f64(&p.c2) {
        return Ok(0.0);
    }
    Ok(p.n as f64 * x.powi(p.n as i32) * p.tail_moment(x)?)
}

/// `vol(v1)` from the profile.
pub fn volume_from_profile(p: &VolumeProfile) -> Result<f64> {
    if let Some(v) = p.volume_exact() {
        return Ok(to_f64(&v));
    }
    let c1 = to_f64(&p.c1);
    Ok(to_f64(&p.deg_h) / c1.powi(p.n as i32) - p.n as f64 * p.tail_moment(c1)?)
}

/// `vol(F S^(x))`: `H^{n-1}` for `x <= 0` and `Theta(x)` otherwise.
pub fn filtration_section_volume(p: &VolumeProfile, x: f64) -> Result<f64> {
    theta(p, x)
}

/// `vol(F S^(x)) + vol(v1) x^n >= H^{n-1}` at every sample, with equality for `x <= c1`.
pub fn liu_bound_check(p: &VolumeProfile, xs: &[f64]) -> Result<bool> {
    let h = to_f64(&p.deg_h);
    let c1 = to_f64(&p.c1);
    for &x in xs {
        let lhs = filtration_section_volume(p, x)? + p.vol_v1 * x.powi(p.n as i32);
        if lhs < h - 1e-8 || (x <= c1 && (lhs - h).abs() > 1e-8) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Phi(lambda, s) = H/(lambda c1 s + 1 - s)^n - n int_{c1}^inf vol(R^(t)) lambda s / (1 - s + lambda s t)^{n+1} dt`.
pub fn phi(p: &VolumeProfile, lambda: f64, s: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(0.0..=1.0).contains(&s) {
        return Err(Error::DomainError(format!("need lambda > 0 and s in [0, 1] (lambda={lambda}, s={s})")));
    }
    let h = to_f64(&p.deg_h);
    if s == 0.0 {
        return Ok(h);
    }
    let n = p.n as i32;
    let c1 = to_f64(&p.c1);
    let f = |t: f64| p.vol_r(t) * lambda * s / (1.0 - s + lambda * s * t).powi(n + 1);
    let b = p.breakpoints();
    let tail = p.integrate_pieces(&f, c1, b[b.len() - 1])?;
    Ok(h / (lambda * c1 * s + 1.0 - s).powi(n) - p.n as f64 * tail)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeForms {
    pub form_a: f64,
    pub form_b1: f64,
    pub form_b: f64,
    pub form_c: f64,
}

impl DerivativeForms {
    pub fn max_rel_spread(&self) -> f64 {
        let v = [self.form_a, self.form_b1, self.form_b, self.form_c];
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        (hi - lo) / scale
    }
}

/// `int_{c1}^inf Theta dt`, by quadrature of the closed-form `Theta`.
pub fn theta_integral(p: &VolumeProfile) -> Result<f64> {
    let b = p.breakpoints();
    let f = |t: f64| theta(p, t).unwrap_or(f64::NAN);
    p.integrate_pieces(&f, b[0], b[b.len() - 1])
}

/// `int_0^inf vol(F S^(t)) dt`, by quadrature.
pub fn section_volume_integral(p: &VolumeProfile) -> Result<f64> {
    let b = p.breakpoints();
    let f = |t: f64| filtration_section_volume(p, t).unwrap_or(f64::NAN);
    p.integrate_pieces(&f, 0.0, b[b.len() - 1])
}

/// The four expressions for `d/ds Phi(lambda, s)` at `s = 0`.
pub fn phi_derivative_s0(p: &VolumeProfile, lambda: f64) -> Result<DerivativeForms> {
    if !(lambda > 0.0) {
        return Err(Error::DomainError("lambda must be positive".into()));
    }
    p.validate()?;
    let n = p.n as f64;
    let h = to_f64(&p.deg_h);
    let c1 = to_f64(&p.c1);
    let pre = n * lambda * h;
    let int_vol_r = p.vol_r_integral()?;
    let int_theta = theta_integral(p)?;
    let theta_c1 = theta(p, c1)?;
    let int_fs = section_volume_integral(p)?;
    Ok(DerivativeForms {
        form_a: pre * (1.0 / lambda - c1 - int_vol_r / h),
        form_b1: pre * (1.0 / lambda - c1 - (n + 1.0) / (n * h) * int_theta - c1 * theta_c1 / (n * h)),
        form_b: pre
            * (1.0 / lambda - c1 * (n + 1.0) / n - (n + 1.0) / (n * h) * int_theta
                + c1.powi(p.n as i32 + 1) / n * p.vol_v1 / h),
        form_c: pre * (1.0 / lambda - (n + 1.0) / (n * h) * int_fs),
    })
}

/// `A(v) - delta / L^n int_0^inf vol(F S^(t)) dt`.
pub fn fujita_gap(p: &VolumeProfile, a_v: f64, delta: &Rational, ln: &Rational) -> Result<f64> {
    if !a_v.is_finite() || !delta.is_positive() || !ln.is_positive() {
        return Err(Error::DomainError("need finite A and positive delta, L^n".into()));
    }
    Ok(a_v - to_f64(delta) / to_f64(ln) * section_volume_integral(p)?)
}

/// `vol^(v) >= r^n H^{n-1}`.
pub fn fujita_lower_bound_check(report: &ValuationReport, c: &PolarizedConeData) -> Result<bool> {
    let lhs = report.nvol.to_f64();
    let rhs = to_f64(&(pow(&c.r, c.n) * &c.deg_h));
    if lhs < rhs - 1e-9 {
        return Err(Error::BoundViolated { lhs, rhs });
    }
    Ok(true)
}

/// Exact `A(v1)` on the model, for `lambda* = r / A(v1)`.
pub fn logdisc_of(model: &SingularityModel, v: &MonomialValuation) -> Result<Rational> {
    evaluate(model, v)?.logdisc.finite().cloned().ok_or(Error::NonFiniteObjective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::frac;
    use crate::singularities::{akm_singularity, ToricConeSingularity};

    fn c2() -> SingularityModel {
        SingularityModel::Toric(ToricConeSingularity::affine_space(2))
    }

    fn mv(w: &[i64]) -> MonomialValuation {
        MonomialValuation::from_ints(w).unwrap()
    }

    #[test]
    fn plane_profile_is_linear() {
        let p = profile_from_model(&c2(), &mv(&[1, 1]), &mv(&[1, 2])).unwrap();
        assert_eq!(p.c1, rat(1));
        assert_eq!(p.c2, rat(2));
        let ProfileShape::Pieces(ps) = &p.shape else { panic!() };
        assert_eq!(ps[0].coeffs, vec![rat(2), rat(-1)]);
        assert_eq!(p.volume_exact().unwrap(), frac(1, 2));
        assert!((p.vol_r(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trivial_profile() {
        let p = profile_from_model(&c2(), &mv(&[1, 1]), &mv(&[1, 1])).unwrap();
        assert_eq!((p.c1.clone(), p.c2.clone()), (rat(1), rat(1)));
        assert_eq!(p.volume_exact().unwrap(), rat(1));
        assert_eq!(p.theta_exact(&frac(1, 2)).unwrap(), frac(3, 4));
        assert_eq!(theta(&p, 1.5).unwrap(), 0.0);
        let d = phi_derivative_s0(&p, 1.0).unwrap();
        for v in [d.form_a, d.form_b1, d.form_b, d.form_c] {
            assert!(v.abs() < 1e-9, "{d:?}");
        }
        let d = phi_derivative_s0(&p, 2.0).unwrap();
        assert!((d.form_c + 2.0).abs() < 1e-9);
    }

    #[test]
    fn theta_at_c1_matches_volume() {
        let p = profile_from_model(&c2(), &mv(&[1, 1]), &mv(&[1, 2])).unwrap();
        let lhs = p.theta_exact(&p.c1).unwrap();
        assert_eq!(lhs, &p.deg_h - pow(&p.c1, 2) * p.volume_exact().unwrap());
    }

    #[test]
    fn conifold_profile_matches_valuation_volume() {
        let m = SingularityModel::Toric(
            ToricConeSingularity::from_int_rays(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap(),
        );
        let v1 = mv(&[1, 2, 4]);
        let p = profile_from_model(&m, &mv(&[1, 1, 2]), &v1).unwrap();
        assert_eq!(p.deg_h, rat(2));
        assert_eq!(p.volume_exact().unwrap(), evaluate(&m, &v1).unwrap().volume);
    }

    #[test]
    fn hypersurface_profile() {
        let m = SingularityModel::Hypersurface(akm_singularity(3, 2).unwrap());
        let p = profile_from_model(&m, &mv(&[2, 2, 2, 2]), &mv(&[2, 2, 2, 2])).unwrap();
        assert_eq!(p.deg_h, frac(1, 4));
        assert!((phi(&p, 2.0, 1.0).unwrap() - 1.0 / 32.0).abs() < 1e-12);
        let v1 = mv(&[1, 1, 2, 1]);
        let p = profile_from_model(&m, &mv(&[1, 1, 1, 1]), &v1).unwrap();
        assert_eq!(p.volume_exact().unwrap(), evaluate(&m, &v1).unwrap().volume);
        let bad = profile_from_model(&m, &mv(&[1, 1, 1, 1]), &mv(&[3, 1, 1, 1]));
        assert!(matches!(bad, Err(Error::UnsupportedProfile(_))));
    }

    #[test]
    fn derivative_forms_off_unit_c1() {
        let m = SingularityModel::Hypersurface(akm_singularity(3, 2).unwrap());
        let p = profile_from_model(&m, &mv(&[1, 1, 1, 1]), &mv(&[1, 2, 3, 4])).unwrap();
        assert_eq!(p.c1, rat(2));
        let lambda = 0.4;
        let d = phi_derivative_s0(&p, lambda).unwrap();
        assert!(d.max_rel_spread() < 1e-9, "{d:?}");
        // Richardson-extrapolated forward difference of Phi itself
        let h = 1e-4;
        let f0 = phi(&p, lambda, 0.0).unwrap();
        let d1 = (phi(&p, lambda, h).unwrap() - f0) / h;
        let d2 = (phi(&p, lambda, h / 2.0).unwrap() - f0) / (h / 2.0);
        assert!((2.0 * d2 - d1 - d.form_a).abs() < 1e-5, "{} vs {}", 2.0 * d2 - d1, d.form_a);
    }

    #[test]
    fn propdim_identity() {
        for m in [5, 10, 20] {
            let (l, r) = propdim_check(&c2(), &mv(&[1, 1]), &mv(&[1, 2]), m, 1_000_000).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn sampled_profile_tracks_exact() {
        let p = sampled_profile(&c2(), &mv(&[1, 1]), &mv(&[1, 2]), 400, 40, 10_000_000).unwrap();
        assert!((p.vol_r(1.5) - 0.5).abs() < 0.02);
        assert!((p.vol_v1 - 0.5).abs() < 0.02);
    }

    #[test]
    fn simpson_on_polynomial() {
        let v = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        assert!(adaptive_simpson(&|_| f64::NAN, 0.0, 1.0, 1e-9).is_err());
    }
}
