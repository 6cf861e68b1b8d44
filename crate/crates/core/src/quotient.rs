//! Quotients `C^2 / G` by finite subgroups of `U(2)`: invariant dimensions by
//! averaging traces over the group, in exact cyclotomic arithmetic.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{frac, rat, Rational};

/// Diagonalized element with eigenvalues `exp(2 pi i eig1)`, `exp(2 pi i eig2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupElement {
    pub eig1: Rational,
    pub eig2: Rational,
}

fn mod_one(q: Rational) -> Rational {
    &q - q.floor()
}

impl GroupElement {
    pub fn new(eig1: Rational, eig2: Rational) -> Self {
        GroupElement { eig1: mod_one(eig1), eig2: mod_one(eig2) }
    }

    pub fn from_fracs(p1: i64, q1: i64, p2: i64, q2: i64) -> Self {
        Self::new(frac(p1, q1), frac(p2, q2))
    }

    pub fn identity() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.eig1.is_zero() && self.eig2.is_zero()
    }

    /// An eigenvalue equals 1 on a non-identity element.
    pub fn is_pseudo_reflection(&self) -> bool {
        !self.is_identity() && (self.eig1.is_zero() || self.eig2.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupAction {
    pub elements: Vec<GroupElement>,
    pub label: String,
}

impl FiniteGroupAction {
    pub fn new(elements: Vec<GroupElement>, label: impl Into<String>) -> Result<Self> {
        if !elements.iter().any(GroupElement::is_identity) {
            return Err(Error::InvalidModel("group element list lacks the identity".into()));
        }
        Ok(FiniteGroupAction { elements, label: label.into() })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `1/r (1, a)`: elements `(j/r, aj/r)` for `j = 0..r-1`.
pub fn cyclic_group(r: u32, a: i64) -> Result<FiniteGroupAction> {
    if r == 0 {
        return Err(Error::InvalidModel("cyclic group order must be positive".into()));
    }
    let r = r as i64;
    let elements = (0..r).map(|j| GroupElement::from_fracs(j, r, a * j, r)).collect();
    FiniteGroupAction::new(elements, format!("Z{r}({},{})", 1, a.rem_euclid(r)))
}

pub fn check_free_in_codim1(g: &FiniteGroupAction) -> bool {
    !g.elements.iter().any(GroupElement::is_pseudo_reflection)
}

/// Quaternion group `Q8` in `SU(2)`.
pub fn quaternion_group() -> FiniteGroupAction {
    let mut el = vec![GroupElement::identity(), GroupElement::from_fracs(1, 2, 1, 2)];
    el.extend((0..6).map(|_| GroupElement::from_fracs(1, 4, 3, 4)));
    FiniteGroupAction::new(el, "Q8").expect("contains identity")
}

/// Binary dihedral group of order 12 in `SU(2)`.
pub fn binary_dihedral_12() -> FiniteGroupAction {
    let mut el: Vec<GroupElement> = (0..6).map(|j| GroupElement::from_fracs(j, 6, -j, 6)).collect();
    el.extend((0..6).map(|_| GroupElement::from_fracs(1, 4, 3, 4)));
    FiniteGroupAction::new(el, "BD12").expect("contains identity")
}

/// Binary tetrahedral group (order 24) in `SU(2)`.
pub fn binary_tetrahedral() -> FiniteGroupAction {
    let mut el = vec![GroupElement::identity(), GroupElement::from_fracs(1, 2, 1, 2)];
    el.extend((0..6).map(|_| GroupElement::from_fracs(1, 4, 3, 4)));
    el.extend((0..8).map(|_| GroupElement::from_fracs(1, 6, 5, 6)));
    el.extend((0..8).map(|_| GroupElement::from_fracs(1, 3, 2, 3)));
    FiniteGroupAction::new(el, "BT24").expect("contains identity")
}

/// Integer polynomials, coefficient `i` on `x^i`.
type Poly = Vec<i64>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && *p.last().expect("nonempty") == 0 {
        p.pop();
    }
    p
}

/// Remainder and quotient of `num` by the monic `den`.
fn divmod_monic(num: &[i64], den: &[i64]) -> (Poly, Poly) {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    if r.len() <= dd {
        return (vec![0], trim(r));
    }
    let mut q = vec![0; r.len() - dd];
    for k in (dd..r.len()).rev() {
        let c = r[k];
        if c != 0 {
            q[k - dd] = c;
            for (i, d) in den.iter().enumerate() {
                r[k - dd + i] -= c * d;
            }
        }
    }
    r.truncate(dd.max(1));
    (trim(q), trim(r))
}

/// `Phi_n(x)`, by dividing `x^n - 1` by `Phi_d` for the proper divisors `d`.
pub fn cyclotomic(n: usize) -> Vec<i64> {
    let mut p = vec![0; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        p = divmod_monic(&p, &cyclotomic(d)).0;
    }
    p
}

/// Exact value of `sum_k c_k zeta_N^k` when it is rational, reducing modulo `Phi_N`.
fn cyclotomic_sum(counts: &[i64], phi: &[i64]) -> Option<i64> {
    let (_, r) = divmod_monic(counts, phi);
    r[1..].iter().all(|&c| c == 0).then_some(r[0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionSeries {
    /// `dims[m] = dim C[x,y]^G_{<m}`, for `m = 0..=M`.
    pub dims: Vec<u64>,
}

/// Common denominator `N` and the integer exponents of each element's eigenvalues over `zeta_N`.
fn exponents(g: &FiniteGroupAction) -> (usize, Vec<(usize, usize)>) {
    let n = g.elements.iter().fold(num_bigint::BigInt::one(), |acc, e| acc.lcm(e.eig1.denom()).lcm(e.eig2.denom()));
    let n: usize = n.try_into().expect("group exponent fits in usize");
    let nr = rat(n as i64);
    let ex = g
        .elements
        .iter()
        .map(|e| {
            let p: usize = (&e.eig1 * &nr).to_integer().try_into().expect("reduced mod 1");
            let q: usize = (&e.eig2 * &nr).to_integer().try_into().expect("reduced mod 1");
            (p, q)
        })
        .collect();
    (n, ex)
}

/// `dim (Sym^k)^G = (1/|G|) sum_g sum_{i+j=k} lambda_g^i mu_g^j` for `k < M`, accumulated.
pub fn invariant_dimension_series(g: &FiniteGroupAction, max_m: usize) -> Result<DimensionSeries> {
    if max_m == 0 {
        return Err(Error::DomainError("series length must be at least 1".into()));
    }
    let (n, ex) = exponents(g);
    let phi = cyclotomic(n);
    let order = g.order() as i64;
    let mut dims = vec![0u64];
    for k in 0..max_m {
        let mut counts = vec![0i64; n];
        for &(p, q) in &ex {
            for i in 0..=k {
                counts[(p * i + q * (k - i)) % n] += 1;
            }
        }
        let total = cyclotomic_sum(&counts, &phi).ok_or(Error::NonIntegerDimension(k))?;
        if total % order != 0 || total < 0 {
            return Err(Error::NonIntegerDimension(k));
        }
        dims.push(dims[k] + (total / order) as u64);
    }
    Ok(DimensionSeries { dims })
}

/// `d_m + d_{m+1} = ((m+1)^2 + |G| - 1)/|G|` for `|G| | m`.
pub fn pair_identity_check(g: &FiniteGroupAction, m: usize) -> Result<bool> {
    let order = g.order();
    if m == 0 || m % order != 0 {
        return Err(Error::PreconditionViolated(format!("|G| = {order} must divide m = {m}")));
    }
    if !check_free_in_codim1(g) {
        return Err(Error::PreconditionViolated("G contains a pseudo-reflection".into()));
    }
    let s = invariant_dimension_series(g, m + 1)?;
    let lhs = rat((s.dims[m] + s.dims[m + 1]) as i64);
    let rhs = frac(((m + 1) * (m + 1) + order - 1) as i64, order as i64);
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientVolume {
    pub exact: Rational,
    /// `d_M / (M^2/2)`.
    pub estimate: f64,
}

pub fn quotient_volume(g: &FiniteGroupAction, max_m: usize) -> Result<QuotientVolume> {
    if !check_free_in_codim1(g) {
        return Err(Error::PreconditionViolated("G contains a pseudo-reflection".into()));
    }
    let s = invariant_dimension_series(g, max_m)?;
    let m = max_m as f64;
    Ok(QuotientVolume { exact: frac(1, g.order() as i64), estimate: s.dims[max_m] as f64 / (m * m / 2.0) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientNvol {
    pub min_nvol: Rational,
    pub logdisc: Rational,
    pub volume: Rational,
}

/// `4/|G|`, attained by the valuation pulled back from the origin of `C^2`.
pub fn quotient_min_nvol(g: &FiniteGroupAction) -> Result<QuotientNvol> {
    if !check_free_in_codim1(g) {
        return Err(Error::PreconditionViolated("G contains a pseudo-reflection".into()));
    }
    let volume = frac(1, g.order() as i64);
    Ok(QuotientNvol { min_nvol: rat(4) * &volume, logdisc: rat(2), volume })
}

/// Library groups, all free in codimension 1 except where noted by the caller.
pub fn library_groups() -> Vec<FiniteGroupAction> {
    let mut out: Vec<FiniteGroupAction> = [(1, 0), (2, 1), (3, 2), (3, 1), (5, 2), (7, 3), (4, 1), (4, 3), (6, 5)]
        .into_iter()
        .map(|(r, a)| cyclic_group(r, a).expect("positive order"))
        .collect();
    out.extend([quaternion_group(), binary_dihedral_12(), binary_tetrahedral()]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn freeness() {
        assert!(check_free_in_codim1(&cyclic_group(2, 1).unwrap()));
        assert!(!check_free_in_codim1(&cyclic_group(4, 2).unwrap()));
        assert!(check_free_in_codim1(&cyclic_group(1, 0).unwrap()));
        assert!(library_groups().iter().all(check_free_in_codim1));
    }

    #[test]
    fn z3_series() {
        let s = invariant_dimension_series(&cyclic_group(3, 2).unwrap(), 6).unwrap();
        assert_eq!(s.dims[0], 0);
        assert_eq!(s.dims[1], 1);
        assert_eq!(s.dims[3], 2);
        assert_eq!(s.dims[4], 4);
    }

    #[test]
    fn trivial_group_counts_all_monomials() {
        let s = invariant_dimension_series(&cyclic_group(1, 0).unwrap(), 20).unwrap();
        for m in 0..=20u64 {
            assert_eq!(s.dims[m as usize], m * (m + 1) / 2);
        }
    }

    #[test]
    fn pair_identities() {
        assert!(pair_identity_check(&cyclic_group(3, 2).unwrap(), 3).unwrap());
        assert!(pair_identity_check(&cyclic_group(2, 1).unwrap(), 2).unwrap());
        assert!(pair_identity_check(&cyclic_group(1, 0).unwrap(), 1).unwrap());
        assert!(matches!(pair_identity_check(&cyclic_group(3, 2).unwrap(), 4), Err(Error::PreconditionViolated(_))));
        for g in library_groups() {
            for m in (g.order()..=60).step_by(g.order()) {
                assert!(pair_identity_check(&g, m).unwrap(), "{} m={m}", g.label);
            }
        }
    }

    #[test]
    fn corrupted_element_list_is_caught() {
        // dropping one element of Q8 breaks closure
        let mut q = quaternion_group();
        q.elements.pop();
        assert!(matches!(invariant_dimension_series(&q, 10), Err(Error::NonIntegerDimension(_))));
    }

    #[test]
    fn volumes_and_minima() {
        assert_eq!(quotient_volume(&cyclic_group(2, 1).unwrap(), 10).unwrap().exact, frac(1, 2));
        assert_eq!(quotient_volume(&cyclic_group(5, 2).unwrap(), 10).unwrap().exact, frac(1, 5));
        assert_eq!(quotient_volume(&cyclic_group(1, 0).unwrap(), 10).unwrap().exact, rat(1));
        for g in library_groups() {
            let q = quotient_volume(&g, 200).unwrap();
            let err = (q.estimate - crate::exactgeom::to_f64(&q.exact)).abs();
            assert!(err <= 2.0 / 200.0, "{} {err}", g.label);
        }
        assert_eq!(quotient_min_nvol(&cyclic_group(2, 1).unwrap()).unwrap().min_nvol, rat(2));
        assert_eq!(quotient_min_nvol(&cyclic_group(7, 3).unwrap()).unwrap().min_nvol, frac(4, 7));
        assert_eq!(quotient_min_nvol(&cyclic_group(1, 0).unwrap()).unwrap().min_nvol, rat(4));
        assert!(quotient_min_nvol(&cyclic_group(4, 2).unwrap()).is_err());
    }
}
