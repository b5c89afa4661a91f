//! Explicit common neighbours of the form τ_y(w₀), y = e₂ + x·e₁.

use serde::Serialize;

use crate::action::ActionCtx;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::geometry::{GeomCtx, GramModel};
use crate::group;
use crate::involution::tau;
use crate::matrix::{Vec3, IDENTITY};

use super::is_base_points;

#[derive(Clone, Debug, Serialize)]
pub struct FinderOutcome {
    pub w1: u32,
    pub w2: u32,
    pub witness: u32,
    pub x: Fe,
    pub lambda0: Fe,
    pub lambda0_in_subfield: bool,
    pub delta_size: usize,
    pub trials_to_first: usize,
    pub successes: usize,
}

/// Δ = F_{q²} ∖ (F_q ∪ (λ₀/2 + F_q)) in encoding order.
pub fn delta_set(geom: &GeomCtx, lambda0: Fe) -> Vec<Fe> {
    let f = &geom.field;
    let half = f.div(lambda0, f.from_int(2));
    f.elements()
        .filter(|&x| !f.in_subfield(x) && !f.in_subfield(f.sub(x, half)))
        .collect()
}

/// Transports (w₁, P) to (w₀, ⟨e₁⟩) for the first isotropic P ∈ w₁ ∖ w₂, reads
/// λ₀ from w′ ∩ PG(e₁^⊥) = ⟨e₂ + λ₀e₁⟩ and scans Δ for y whose τ_y(w₀) is a
/// base partner of both w₀ and w′. The whole of Δ is scanned to count successes.
pub fn constructive_common_neighbor(action: &ActionCtx, w1: usize, w2: usize) -> Result<FinderOutcome> {
    let geom = &action.geom;
    if geom.model() != GramModel::AntiDiagonal {
        return Err(Error::WrongGram("anti-diagonal"));
    }
    if w1 == w2 {
        return Err(Error::SameSubplane);
    }
    let f = &geom.field;
    let p = action
        .points(w1)
        .iter()
        .copied()
        .find(|&p| geom.is_isotropic(p) && !action.contains_point(w2, p))
        .ok_or(Error::Degenerate("no isotropic point of w1 outside w2"))?;
    let g = action.transport_pair(w1, p)?;
    debug_assert_eq!(action.image(w1, &g)?, 0);
    let wp = action.image(w2, &g)? as usize;

    let on_tangent: Vec<Vec3> = action
        .points(wp)
        .iter()
        .map(|&x| geom.point_vec(x))
        .filter(|v| v[2].is_zero())
        .collect();
    let [v] = on_tangent.as_slice() else {
        return Err(Error::Degenerate("w' does not meet the tangent at e1 in one point"));
    };
    if v[1].is_zero() {
        return Err(Error::Degenerate("w' contains e1"));
    }
    let lambda0 = f.div(v[0], v[1]);

    let delta = delta_set(geom, lambda0);
    let g_inv = group::inv(f, &g);
    let mut first: Option<(usize, Fe, usize)> = None;
    let mut successes = 0;
    for (n, &x) in delta.iter().enumerate() {
        let y = [x, Fe::ONE, Fe::ZERO];
        let t = tau(geom, &y)?;
        let c = action.image(0, &t.mat)? as usize;
        if c == 0 || c == wp {
            continue;
        }
        let ok = is_base_points(action, action.points(c), action.points(0))
            && is_base_points(action, action.points(c), action.points(wp));
        if ok {
            successes += 1;
            if first.is_none() {
                first = Some((n + 1, x, c));
            }
        }
    }
    let (trials, x, c) = first.ok_or(Error::FinderExhausted(delta.len()))?;
    let witness = action.image(c, &g_inv)?;
    Ok(FinderOutcome {
        w1: w1 as u32,
        w2: w2 as u32,
        witness,
        x,
        lambda0,
        lambda0_in_subfield: f.in_subfield(lambda0),
        delta_size: delta.len(),
        trials_to_first: trials,
        successes,
    })
}

/// Replays the secant-subline construction for λ₀ ∉ F_q and x ∈ F_q:
/// z₁ = λ₀e₁ + e₂, z₂ = −(x²/2)e₁ + xe₂ + e₃, z₃ = z₂ − (x + λ₀^q)z₁.
/// Returns whether the Baer subline through them meets the lines
/// ℓ_u = PG⟨e₁, e₃ + ue₂⟩, u ∈ F_q ∪ (λ₀ + F_q), and ℓ_∞ = PG⟨e₁, e₂⟩
/// exactly in {z₁, z₂, z₃}.
pub fn secant_subline_replay(geom: &GeomCtx, lambda0: Fe, x: Fe) -> Result<bool> {
    let f = &geom.field;
    if f.in_subfield(lambda0) || !f.in_subfield(x) {
        return Err(Error::BadParams("need lambda0 outside F_q and x in F_q"));
    }
    let half = f.inv(f.from_int(2));
    let z1 = [lambda0, Fe::ONE, Fe::ZERO];
    let z2 = [f.neg(f.mul(half, f.mul(x, x))), x, Fe::ONE];
    let m = f.add(x, f.conj(lambda0));
    let z3 = f.vec_sub(&z2, &f.vec_scale(m, &z1));
    let sub = geom.baer_subline(&z1, &z2, &z3)?;
    let e1 = geom.point_index(&IDENTITY[0]);
    let in_union = |idx: u32| {
        if idx == e1 {
            return true;
        }
        let v = geom.point_vec(idx);
        if v[2].is_zero() {
            return true;
        }
        let u = f.div(v[1], v[2]);
        f.in_subfield(u) || f.in_subfield(f.sub(u, lambda0))
    };
    let mut hit: Vec<u32> = sub.into_iter().filter(|&p| in_union(p)).collect();
    hit.sort_unstable();
    let mut expected: Vec<u32> = [z1, z2, z3].iter().map(|z| geom.point_index(z)).collect();
    expected.sort_unstable();
    Ok(hit == expected)
}
