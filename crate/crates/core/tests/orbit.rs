mod common;

use std::collections::HashSet;

use saxl_core::action::{cube_criterion_check, predicted_orbit_size, stabilizer_order, ActionCtx};
use saxl_core::geometry::GramModel;
use saxl_core::group;

use common::{geom, small};

#[test]
fn both_models_give_the_same_count() {
    for model in [GramModel::AntiDiagonal, GramModel::Identity] {
        let a = ActionCtx::new(geom(7, model)).unwrap();
        assert_eq!(a.len(), 16856);
        assert_eq!(a.stab().len() as u64, stabilizer_order(7));
        if model == GramModel::AntiDiagonal {
            assert_eq!(a.iso_points_of_base().len(), 8);
        }
    }
}

#[test]
fn generator_choice_does_not_matter() {
    let (a, _) = small();
    let g = geom(7, GramModel::AntiDiagonal);
    let mut gens = group::su3_generators(&g).unwrap();
    gens.reverse();
    let b = ActionCtx::with_generators(g, gens).unwrap();
    assert_eq!(b.len() as u64, predicted_orbit_size(7));
    let ka: HashSet<u128> = a.keys().iter().copied().collect();
    let kb: HashSet<u128> = b.keys().iter().copied().collect();
    assert_eq!(ka, kb);
    let sa: HashSet<_> = a.stab().iter().copied().collect();
    let sb: HashSet<_> = b.stab().iter().copied().collect();
    assert_eq!(sa, sb);
}

#[test]
fn stabilizer_and_transversal() {
    let (a, _) = small();
    for g in a.stab() {
        assert!(group::is_unitary(&a.geom, g));
        assert_eq!(a.image(0, g).unwrap(), 0);
    }
    a.verify_transversal(0..a.len()).unwrap();
    let step = a.len() / 17;
    for i in (1..a.len()).step_by(step) {
        let t = a.transversal(i);
        let back = group::inv(a.field(), t);
        assert_eq!(a.image(i, &back).unwrap(), 0);
    }
}

#[test]
fn cache_round_trip() {
    let (a, _) = small();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("omega.bin");
    a.save_cache(&path).unwrap();
    let b = ActionCtx::load_cache(geom(7, GramModel::AntiDiagonal), &path).unwrap();
    assert_eq!(a.keys(), b.keys());
    assert_eq!(a.stab(), b.stab());
    for i in [0, 1, a.len() / 2, a.len() - 1] {
        assert_eq!(a.points(i), b.points(i));
        assert_eq!(a.transversal(i), b.transversal(i));
    }
    assert!(ActionCtx::load_cache(geom(9, GramModel::AntiDiagonal), &path).is_err());
}

#[test]
fn index_d_test_decides_membership() {
    for q in [7u64, 11] {
        let a = ActionCtx::new(geom(q, GramModel::Identity)).unwrap();
        let r = cube_criterion_check(&a).unwrap();
        assert_eq!(r.shortcut_agree, r.samples, "q={q}");
        assert!(r.members > 0);
    }
}
