mod common;

use proptest::prelude::*;
use saxl_core::field::{Fe, FieldCtx};
use saxl_core::geometry::GramModel;
use saxl_core::group;
use saxl_core::saxl::is_base_pair;

use common::{geom, small};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conjugation_is_a_field_automorphism(a in 0u16..81, b in 0u16..81) {
        let f = FieldCtx::from_q(9).unwrap();
        let (a, b) = (Fe(a), Fe(b));
        prop_assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(f.conj(a)), a);
        prop_assert!(f.in_subfield(f.norm(a)));
    }

    #[test]
    fn base_pairs_are_symmetric(i in 0usize..16856, j in 0usize..16856) {
        prop_assume!(i != j);
        let (a, _) = small();
        prop_assert_eq!(is_base_pair(a, i, j).unwrap(), is_base_pair(a, j, i).unwrap());
    }

    #[test]
    fn action_preserves_isotropy(i in 0usize..16856, p in 0u32..2451) {
        let (a, _) = small();
        let g = &a.geom;
        let t = a.transversal(i);
        let v = group::act(g, t, &g.point_vec(p));
        prop_assert_eq!(g.is_isotropic(g.point_index(&v)), g.is_isotropic(p));
    }

    #[test]
    fn identity_model_is_conjugate(i in 0usize..16856) {
        let (a, _) = small();
        let id = geom(7, GramModel::Identity);
        let m = a.field().normalize_mat(&a.geom.matrix_to_identity(a.transversal(i)));
        prop_assert!(group::is_unitary(&id, &m));
    }
}
