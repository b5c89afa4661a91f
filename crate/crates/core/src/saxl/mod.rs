//! Base pairs, suborbits and the common-neighbour property of the Saxl graph.

pub mod bg;
pub mod census;
pub mod construct;

use crate::action::ActionCtx;
use crate::error::{Error, Result};
use crate::geometry::intersect_sorted;

pub use bg::{regular_count_formula, verify_bg, BgReport, BgVerdict};
pub use census::{suborbit_census, two_point_stabilizer, Census, StabClass, SuborbitRecord};
pub use construct::{constructive_common_neighbor, FinderOutcome};

/// Two sorted point lists meet in nothing or in one isotropic point.
pub fn is_base_points(action: &ActionCtx, a: &[u32], b: &[u32]) -> bool {
    let common = intersect_sorted(a, b);
    match common.as_slice() {
        [] => true,
        [p] => action.geom.is_isotropic(*p),
        _ => false,
    }
}

/// Geometric base test for Ω[i], Ω[j].
pub fn is_base_pair(action: &ActionCtx, i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Err(Error::SameSubplane);
    }
    Ok(is_base_points(action, action.points(i), action.points(j)))
}

/// Order of G_{Ω[i]} ∩ G_{Ω[j]}, counted inside M after transporting Ω[i] to Ω[0].
pub fn joint_stabilizer_order(action: &ActionCtx, i: usize, j: usize) -> usize {
    let f = action.field();
    let a = f.mat_mul(action.transversal(j), &f.adjugate(action.transversal(i)));
    let a_inv = f.adjugate(&a);
    action
        .stab()
        .iter()
        .filter(|g| action.in_stab(&f.mat_mul(&f.mat_mul(&a, g), &a_inv)))
        .count()
}

/// Stabilizer oracle: the pair is a base iff its joint stabilizer is trivial.
pub fn base_pair_oracle(action: &ActionCtx, i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Err(Error::SameSubplane);
    }
    Ok(joint_stabilizer_order(action, i, j) == 1)
}
