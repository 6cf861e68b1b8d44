use hvol::exactgeom::{cut_cone, frac, polytope_volume, rat, Halfspace, Polytope, RVector};
use hvol::filtration::{liu_bound_check, profile_from_model};
use hvol::quotient::{check_free_in_codim1, cyclic_group, pair_identity_check};
use hvol::reeb::{normalize_reeb, rescaling_law_check};
use hvol::singularities::{akm_singularity, SingularityModel, ToricConeSingularity};
use hvol::valuation::{evaluate, nvol, MonomialValuation};
use proptest::prelude::*;

fn conifold() -> SingularityModel {
    SingularityModel::Toric(
        ToricConeSingularity::from_int_rays(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap(),
    )
}

/// Interior Reeb vector of the conifold: a positive combination of its rays.
fn conifold_reeb() -> impl Strategy<Value = RVector> {
    prop::array::uniform4(1i64..8).prop_map(|c| RVector::from_ints(&[c[1] + c[3], c[2] + c[3], c[0] + c[1] + c[2] + c[3]]))
}

fn weights(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..7, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn toric_volume_rescales(xi in conifold_reeb(), p in 1i64..9, q in 1i64..9) {
        prop_assert!(rescaling_law_check(&conifold(), &xi, &frac(p, q)).unwrap());
    }

    #[test]
    fn nvol_is_scale_invariant(w in weights(4), p in 1i64..9, q in 1i64..9) {
        let m = SingularityModel::Hypersurface(akm_singularity(3, 3).unwrap());
        let a = MonomialValuation::from_ints(&w).unwrap();
        let scaled = a.scaled(&frac(p, q)).unwrap();
        prop_assert_eq!(nvol(&m, &a).unwrap(), nvol(&m, &scaled).unwrap());
    }

    #[test]
    fn volume_decreases_in_each_weight(w in weights(3), i in 0usize..3) {
        let m = SingularityModel::Toric(ToricConeSingularity::affine_space(3));
        let a = MonomialValuation::from_ints(&w).unwrap();
        let mut bigger = w.clone();
        bigger[i] += 1;
        let b = MonomialValuation::from_ints(&bigger).unwrap();
        prop_assert!(evaluate(&m, &b).unwrap().volume < evaluate(&m, &a).unwrap().volume);
    }

    #[test]
    fn normalize_is_idempotent(xi in conifold_reeb()) {
        let m = conifold();
        let once = normalize_reeb(&m, &xi).unwrap();
        prop_assert_eq!(normalize_reeb(&m, &once).unwrap(), once.clone());
        prop_assert_eq!(once[2].clone(), rat(3));
    }

    #[test]
    fn polytope_volume_scales_by_power(c in prop::collection::vec(1i64..5, 3), s in 1i64..4) {
        let mut h = Vec::new();
        for (i, ci) in c.iter().enumerate() {
            let e = RVector::unit(3, i);
            h.push(Halfspace::new(e.clone(), rat(1)));
            h.push(Halfspace::new(-&e, rat(*ci)));
        }
        h.push(Halfspace::new(RVector::from_ints(&[-1, -1, -1]), rat(c.iter().sum::<i64>() - 1)));
        let p = Polytope::from_hrep(h, 3).unwrap();
        let v = polytope_volume(&p).volume;
        prop_assert_eq!(polytope_volume(&p.scaled(&rat(s))).volume, v * rat(s * s * s));
    }

    #[test]
    fn cut_cone_volume_matches_toric_volume(xi in conifold_reeb()) {
        let SingularityModel::Toric(t) = conifold() else { unreachable!() };
        let cut = cut_cone(&t.weight_cone, &xi).unwrap();
        let vol = evaluate(&conifold(), &MonomialValuation { weights: xi }).unwrap().volume;
        prop_assert_eq!(polytope_volume(&cut).volume * rat(6), vol);
    }

    #[test]
    fn liu_bound_on_plane(a in 1i64..6, b in 1i64..6) {
        let m = SingularityModel::Toric(ToricConeSingularity::affine_space(2));
        let v0 = MonomialValuation::from_ints(&[1, 1]).unwrap();
        let v1 = MonomialValuation::from_ints(&[a, b]).unwrap();
        let p = profile_from_model(&m, &v0, &v1).unwrap();
        let c2 = hvol::exactgeom::to_f64(&p.c2);
        let xs: Vec<f64> = (1..=30).map(|i| c2 * i as f64 / 30.0).collect();
        prop_assert!(liu_bound_check(&p, &xs).unwrap());
    }

    #[test]
    fn pair_identity_for_cyclic_groups(r in 2u32..13, a in 1i64..12) {
        let g = cyclic_group(r, a).unwrap();
        prop_assume!(check_free_in_codim1(&g));
        let o = g.order();
        for m in (o..=48).step_by(o) {
            prop_assert!(pair_identity_check(&g, m).unwrap());
        }
    }
}
