//! Regular neighbourhoods and the common-neighbour check.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionCtx;
use crate::error::Result;
use crate::group;

use super::census::{Census, StabClass};
use super::is_base_points;

/// Γ_r(Ω[0]) as a membership vector.
pub fn regular_neighborhood(census: &Census) -> Vec<bool> {
    (0..census.omega_size).map(|i| census.is_regular(i)).collect()
}

/// (1/3d)q⁵ − (1/3d)q⁴ + (2/3)q³ + (1/3d)q² − ((10−d)/9)q.
pub fn regular_count_formula(q: u64) -> Ratio<i128> {
    let q = q as i128;
    let d = if (q + 1) % 3 == 0 { 3 } else { 1 };
    let r = |n: i128, m: i128| Ratio::new(n, m);
    r(q.pow(5), 3 * d) - r(q.pow(4), 3 * d) + r(2 * q.pow(3), 3) + r(q * q, 3 * d) - r((10 - d) * q, 9)
}

/// (q⁵ − q⁴)/3d.
pub fn regular_count_lower_bound(q: u64) -> Ratio<i128> {
    let q = q as i128;
    let d = if (q + 1) % 3 == 0 { 3 } else { 1 };
    Ratio::new(q.pow(5) - q.pow(4), 3 * d)
}

#[derive(Clone, Debug, Serialize)]
pub struct BgVerdict {
    pub rep: u32,
    pub class: Option<StabClass>,
    pub witness: Option<u32>,
    pub scanned: usize,
    pub geometric_check: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BgReport {
    pub q: u32,
    pub d: u32,
    pub gram: &'static str,
    pub gamma_r: u64,
    pub verified: bool,
    pub verdicts: Vec<BgVerdict>,
    #[serde(skip)]
    pub millis: u128,
}

impl BgReport {
    pub fn failures(&self) -> impl Iterator<Item = &BgVerdict> {
        self.verdicts.iter().filter(|v| v.witness.is_none() || !v.geometric_check)
    }
}

/// For every M-orbit representative β (α included) find γ ∈ Γ_r(α) ∩ Γ_r(β),
/// scanning Γ_r(α) in index order. Γ_r(β) = Γ_r(α)^{t_β}, so γ qualifies when
/// γ^{t_β⁻¹} ∈ Γ_r(α). Reps beyond `max_reps` are skipped.
pub fn verify_bg(action: &ActionCtx, census: &Census, max_reps: Option<usize>) -> Result<BgReport> {
    let start = std::time::Instant::now();
    let gamma = regular_neighborhood(census);
    let gamma_list: Vec<usize> = (0..gamma.len()).filter(|&i| gamma[i]).collect();
    let mut reps: Vec<(u32, Option<StabClass>)> = vec![(0, None)];
    reps.extend(census.records.iter().map(|r| (r.rep, Some(r.class))));
    if let Some(m) = max_reps {
        reps.truncate(m);
    }
    let f = action.field();
    let verdicts: Vec<Result<BgVerdict>> = reps
        .par_iter()
        .map(|&(rep, class)| {
            let t_inv = group::inv(f, action.transversal(rep as usize));
            let perm = group::point_perm(&action.geom, &t_inv);
            let mut buf = Vec::with_capacity(action.plane_len());
            let mut witness = None;
            let mut scanned = 0;
            for &g in &gamma_list {
                if g == rep as usize {
                    continue;
                }
                scanned += 1;
                let back = action.image_by_perm(g, &perm, &mut buf)? as usize;
                if gamma[back] {
                    witness = Some(g as u32);
                    break;
                }
            }
            let geometric_check = witness.is_some_and(|w| {
                let w = w as usize;
                is_base_points(action, action.points(0), action.points(w))
                    && is_base_points(action, action.points(rep as usize), action.points(w))
            });
            Ok(BgVerdict {
                rep,
                class,
                witness,
                scanned,
                geometric_check,
            })
        })
        .collect();
    let verdicts: Vec<BgVerdict> = verdicts.into_iter().collect::<Result<_>>()?;
    let verified = verdicts.iter().all(|v| v.witness.is_some() && v.geometric_check);
    Ok(BgReport {
        q: action.q(),
        d: action.d(),
        gram: action.geom.model().name(),
        gamma_r: census.gamma_r,
        verified,
        verdicts,
        millis: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(regular_count_formula(7), Ratio::from_integer(5040));
        assert_eq!(regular_count_formula(11), Ratio::from_integer(17160));
        assert_eq!(regular_count_formula(9), Ratio::from_integer(18000));
        assert_eq!(regular_count_formula(13), Ratio::from_integer(115752));
        for q in [7, 9, 11, 13] {
            assert!(regular_count_formula(q) >= regular_count_lower_bound(q));
        }
    }
}
