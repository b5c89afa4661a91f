mod common;

use std::collections::HashSet;

use saxl_core::geometry::GramModel;
use saxl_core::group;
use saxl_core::involution::{coperp, fixed_isotropic, pair_type, tau, PairType};

use common::{geom, small};

#[test]
fn involutions_of_the_base_stabilizer() {
    let (a, _) = small();
    let g = &a.geom;
    let f = a.field();
    let q = a.q() as usize;
    let from_stab: HashSet<_> = a
        .stab()
        .iter()
        .filter(|m| !f.is_scalar(m) && f.is_scalar(&f.mat_mul(m, m)))
        .copied()
        .collect();
    let from_poles: HashSet<_> = a
        .points(0)
        .iter()
        .filter(|&&p| !g.is_isotropic(p))
        .map(|&p| tau(g, &g.point_vec(p)).unwrap().mat)
        .collect();
    assert_eq!(from_stab.len(), q * q);
    assert_eq!(from_stab, from_poles);
}

#[test]
fn tau_laws_in_both_models() {
    for model in [GramModel::AntiDiagonal, GramModel::Identity] {
        let g = geom(7, model);
        let f = &g.field;
        let non: Vec<u32> = (0..g.point_count() as u32).filter(|&p| !g.is_isotropic(p)).collect();
        let mut seen = HashSet::new();
        for &p in &non {
            let t = tau(&g, &g.point_vec(p)).unwrap();
            assert!(group::is_unitary(&g, &t.mat));
            assert!(f.is_scalar(&f.mat_mul(&t.mat, &t.mat)));
            assert_eq!(fixed_isotropic(&g, &t.mat), 8);
            assert!(seen.insert(t.mat));
        }
        let iso = g.isotropic_points().next().unwrap();
        assert!(tau(&g, &g.point_vec(iso)).is_err());
    }
}

#[test]
fn pair_types_follow_the_geometry() {
    let g = geom(7, GramModel::AntiDiagonal);
    let f = &g.field;
    let non: Vec<u32> = (0..g.point_count() as u32).filter(|&p| !g.is_isotropic(p)).collect();
    let invs: Vec<_> = non.iter().map(|&p| tau(&g, &g.point_vec(p)).unwrap()).collect();
    for a in (0..invs.len()).step_by(7) {
        for b in (a + 1..invs.len()).step_by(3) {
            let (ya, yb) = (g.point_vec(non[a]), g.point_vec(non[b]));
            let kind = pair_type(&g, &invs[a], &invs[b]).unwrap();
            let prod = f.mat_mul(&invs[a].mat, &invs[b].mat);
            let order = group::element_order(f, &prod, 64).unwrap();
            assert_eq!(kind == PairType::Commuting, g.herm(&ya, &yb).is_zero());
            assert_eq!(kind == PairType::Dihedral2p, coperp(&g, &ya, &yb).unwrap());
            match kind {
                PairType::Commuting => assert_eq!(order, 2),
                PairType::Dihedral2p => assert_eq!(order, 7),
                PairType::Dihedral2l(n) => {
                    assert_eq!(n, order);
                    assert!(6 % n == 0 || 8 % n == 0, "order {n}");
                }
            }
        }
    }
    assert!(pair_type(&g, &invs[0], &invs[0]).is_err());
}
