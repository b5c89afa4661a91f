mod common;

use saxl_core::field::FieldCtx;
use saxl_core::lab;

use common::small;

#[test]
fn field_lab_passes_where_the_count_applies() {
    let f = FieldCtx::from_q(11).unwrap();
    let fl = lab::field_lab(&f, 7, 60).unwrap();
    assert!(lab::all_passed(&fl.checks), "{:?}", fl.checks);
    assert!(fl.checks.contains_key("lambda12-third"));
    assert!(fl.reported.is_empty());
}

#[test]
fn third_bound_is_only_reported_off_residue_two() {
    let f = FieldCtx::from_q(7).unwrap();
    let fl = lab::field_lab(&f, 7, 20).unwrap();
    assert!(!fl.checks.contains_key("lambda12-third"));
    assert!(fl.reported.contains_key("lambda12-third"));
}

#[test]
fn diagonal_intersection_is_the_nonregular_set() {
    let (a, c) = small();
    let e = lab::ell_criterion(a, c).unwrap();
    assert_eq!(e.diagonal, e.gamma_nr);
    assert_eq!(e.gamma_nr + e.gamma_r + 1, a.len() as u64);
    assert!(e.min_intersection <= e.diagonal);
    assert!(!e.asymptotic_regime);
}

#[test]
fn pair_lab_on_a_few_representatives() {
    let (a, c) = small();
    let pl = lab::pair_lab(a, c, Some(6)).unwrap();
    assert_eq!(pl.reps, 6);
    assert!(lab::all_passed(&pl.checks), "{:?}", pl.checks);
}
