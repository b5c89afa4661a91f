//! M-orbits on Ω, their two-point stabilizers and fixed-point counts.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::ActionCtx;
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::group;
use crate::matrix::{Mat3, IDENTITY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabClass {
    #[serde(rename = "D2(q+1)")]
    DihedralPlus,
    #[serde(rename = "D2(q-1)")]
    DihedralMinus,
    #[serde(rename = "D4A")]
    D4A,
    #[serde(rename = "D4B")]
    D4B,
    #[serde(rename = "Zp^m:Z2")]
    Borel,
    #[serde(rename = "Z2A")]
    Z2A,
    #[serde(rename = "Z2B")]
    Z2B,
    #[serde(rename = "A4")]
    A4,
    #[serde(rename = "regular")]
    Regular,
}

impl StabClass {
    /// The nonregular classes in table order.
    pub const TABLE: [StabClass; 8] = [
        StabClass::DihedralPlus,
        StabClass::DihedralMinus,
        StabClass::D4A,
        StabClass::D4B,
        StabClass::Borel,
        StabClass::Z2A,
        StabClass::Z2B,
        StabClass::A4,
    ];

    pub fn column(self) -> Option<usize> {
        Self::TABLE.iter().position(|&c| c == self)
    }

    pub fn label(self) -> &'static str {
        match self {
            StabClass::DihedralPlus => "D2(q+1)",
            StabClass::DihedralMinus => "D2(q-1)",
            StabClass::D4A => "D4A",
            StabClass::D4B => "D4B",
            StabClass::Borel => "Zp^m:Z2",
            StabClass::Z2A => "Z2A",
            StabClass::Z2B => "Z2B",
            StabClass::A4 => "A4",
            StabClass::Regular => "regular",
        }
    }

    /// |K| for this class at q.
    pub fn order(self, q: u64) -> u64 {
        match self {
            StabClass::DihedralPlus => 2 * (q + 1),
            StabClass::DihedralMinus => 2 * (q - 1),
            StabClass::D4A | StabClass::D4B => 4,
            StabClass::Borel => 2 * q,
            StabClass::Z2A | StabClass::Z2B => 2,
            StabClass::A4 => 12,
            StabClass::Regular => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuborbitRecord {
    pub rep: u32,
    pub class: StabClass,
    pub order: usize,
    pub length: usize,
    pub involutions: usize,
    pub normalizer: Option<usize>,
    pub shape: Shape,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub class: StabClass,
    pub order: usize,
    pub length: usize,
    pub fix: Option<u64>,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub q: u32,
    pub d: u32,
    pub omega_size: usize,
    pub records: Vec<SuborbitRecord>,
    pub x: [u64; 8],
    pub k: [u64; 8],
    pub expected_x: Option<[u64; 8]>,
    pub expected_k: [u64; 8],
    pub gamma_r: u64,
    pub regular_suborbits: usize,
    #[serde(skip)]
    pub orbit_of: Vec<u32>,
    #[serde(skip)]
    pub class_stabs: Vec<Option<Vec<Mat3>>>,
}

impl Census {
    pub fn x_matches(&self) -> bool {
        self.expected_x == Some(self.x)
    }
    pub fn k_matches(&self) -> bool {
        self.expected_k == self.k
    }

    /// |Ω| − 1 − Σ xᵢ|M:Kᵢ|.
    pub fn regular_by_difference(&self) -> i64 {
        let q = self.q as u64;
        let m = crate::action::stabilizer_order(q);
        let nonreg: u64 = StabClass::TABLE
            .iter()
            .zip(self.x)
            .map(|(c, x)| x * (m / c.order(q)))
            .sum();
        self.omega_size as i64 - 1 - nonreg as i64
    }

    /// Class of the suborbit containing Ω[i]; `None` for Ω[0] itself.
    pub fn class_of(&self, i: usize) -> Option<StabClass> {
        let id = self.orbit_of[i] as usize;
        (id > 0).then(|| self.records[id - 1].class)
    }

    pub fn is_regular(&self, i: usize) -> bool {
        self.class_of(i) == Some(StabClass::Regular)
    }

    /// Rows aggregated by class, in table order with the regular row last.
    pub fn rows(&self) -> Vec<ClassRow> {
        let mut out = Vec::new();
        let classes = StabClass::TABLE.iter().copied().chain([StabClass::Regular]);
        for c in classes {
            let recs: Vec<&SuborbitRecord> = self.records.iter().filter(|r| r.class == c).collect();
            let Some(first) = recs.first() else { continue };
            out.push(ClassRow {
                class: c,
                order: first.order,
                length: first.length,
                fix: c.column().map(|i| self.k[i]),
                count: recs.len(),
            });
        }
        out
    }
}

fn exact(num: i128, den: i128) -> Option<u64> {
    (num % den == 0 && num / den >= 0).then(|| (num / den) as u64)
}

/// Table x-vector for the (d, q mod 4) block of q; `None` if a formula is not integral.
pub fn table_x(q: u64) -> Option<[u64; 8]> {
    let q = q as i128;
    let d = if (q + 1) % 3 == 0 { 3 } else { 1 };
    let x1 = exact(q + 1, d)? - 1;
    let (x3, x4, x8) = if d == 1 {
        (exact(q * q - q, 6)?, exact(q * q - q, 2)?, 0)
    } else {
        (exact((q + 1) * (q - 2), 18)?, exact(q * q - q + 4, 6)?, 1)
    };
    let q3 = q * q * q;
    let (x6, x7) = match (d, q % 4 == 1) {
        (1, true) => (
            exact(q3 + 6 * q * q - 3 * q - 4, 4 * (q - 1))?,
            exact(3 * q3 - 15 * q - 12, 4 * (q + 1))?,
        ),
        (_, true) => (
            exact(q3 + 6 * q * q - 7 * q, 12 * (q - 1))?,
            exact(q3 - 9 * q - 8, 4 * (q + 1))?,
        ),
        (1, false) => (
            exact(q3 - 3 * q - 2, 2 * (q + 1))?,
            exact(q3 + 2 * q * q - 5 * q + 2, 2 * (q - 1))?,
        ),
        (_, false) => (
            exact(q3 - 3 * q - 2, 6 * (q + 1))?,
            exact(q3 + 2 * q * q - 13 * q + 10, 6 * (q - 1))?,
        ),
    };
    Some([x1, x1, x3, x4, 2, x6, x7, x8])
}

/// Fixed-point counts on Ω of the table's stabilizer classes.
pub fn table_k(q: u64) -> [u64; 8] {
    let d = if (q + 1).is_multiple_of(3) { 3 } else { 1 };
    let l = (q + 1) / d;
    let dd = (q + 1) * (q + 1) / d;
    let z = q * q * (q + 1) / d;
    [l, l, dd, dd, q, z, z, d]
}

fn involution_count(action: &ActionCtx, k: &[Mat3]) -> usize {
    let f = action.field();
    k.iter()
        .filter(|g| **g != IDENTITY && f.is_scalar(&f.mat_mul(g, g)))
        .count()
}

/// Elements of M normalizing the subgroup `k`.
fn normalizer(action: &ActionCtx, k: &[Mat3]) -> Vec<Mat3> {
    let f = action.field();
    let set: HashSet<Mat3> = k.iter().copied().collect();
    action
        .stab()
        .iter()
        .filter(|g| k.iter().all(|h| set.contains(&group::conj_by(f, g, h))))
        .copied()
        .collect()
}

/// M ∩ G_{Ω[i]}.
pub fn two_point_stabilizer(action: &ActionCtx, i: usize) -> Vec<Mat3> {
    let f = action.field();
    let t = action.transversal(i);
    let t_inv = f.adjugate(t);
    action
        .stab()
        .iter()
        .filter(|g| action.in_stab(&f.mat_mul(&f.mat_mul(t, g), &t_inv)))
        .copied()
        .collect()
}

fn classify(action: &ActionCtx, k: &[Mat3]) -> Result<(StabClass, usize, Option<usize>)> {
    let q = action.q() as usize;
    let n = k.len();
    let inv = involution_count(action, k);
    let eps_minus = if q % 4 == 1 { q - 1 } else { q + 1 };
    let eps_plus = if q % 4 == 1 { q + 1 } else { q - 1 };
    let unclassifiable = |normalizer: usize| Error::Unclassifiable {
        order: n,
        involutions: inv,
        normalizer,
    };
    match n {
        1 => return Ok((StabClass::Regular, inv, None)),
        2 | 4 => {
            let nm = normalizer(action, k).len();
            let class = match (n, nm) {
                (2, x) if x == 2 * eps_minus => StabClass::Z2A,
                (2, x) if x == 2 * eps_plus => StabClass::Z2B,
                (4, 24) => StabClass::D4A,
                (4, 8) => StabClass::D4B,
                _ => return Err(unclassifiable(nm)),
            };
            return Ok((class, inv, Some(nm)));
        }
        _ => {}
    }
    let class = if n == 12 && inv == 3 {
        StabClass::A4
    } else if n == 2 * (q + 1) && inv == q + 2 {
        StabClass::DihedralPlus
    } else if n == 2 * (q - 1) && inv == q {
        StabClass::DihedralMinus
    } else if n == 2 * q && inv == q {
        StabClass::Borel
    } else {
        return Err(unclassifiable(normalizer(action, k).len()));
    };
    Ok((class, inv, None))
}

/// A generating set of the subgroup `k`, chosen greedily in element order.
fn generating_set(action: &ActionCtx, k: &[Mat3]) -> Result<Vec<Mat3>> {
    let f = action.field();
    let mut c = group::Closure::new();
    for g in k {
        if c.elements.len() == k.len() {
            break;
        }
        c.add(f, g, k.len())?;
    }
    Ok(c.gens)
}

/// |{ω ∈ Ω : K fixes ω}|.
pub fn fix_count(action: &ActionCtx, k: &[Mat3]) -> Result<u64> {
    let gens = generating_set(action, k)?;
    let perms: Vec<Vec<u32>> = gens.iter().map(|g| group::point_perm(&action.geom, g)).collect();
    Ok((0..action.len())
        .into_par_iter()
        .filter(|&i| perms.iter().all(|p| action.fixes(i, p)))
        .count() as u64)
}

/// M-orbit ids for every point of Ω, assigned in order of smallest member.
pub fn m_orbits(action: &ActionCtx) -> Result<(Vec<u32>, Vec<u32>, Vec<usize>)> {
    let perms: Vec<Vec<u32>> = action
        .stab_gens()
        .iter()
        .map(|g| group::point_perm(&action.geom, g))
        .collect();
    let n = action.len();
    let mut orbit_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut lengths = Vec::new();
    let mut buf = Vec::with_capacity(action.plane_len());
    let mut stack = Vec::new();
    for start in 0..n {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(start as u32);
        orbit_of[start] = id;
        stack.push(start);
        let mut len = 0;
        while let Some(i) = stack.pop() {
            len += 1;
            for p in &perms {
                let j = action.image_by_perm(i, p, &mut buf)? as usize;
                if orbit_of[j] == u32::MAX {
                    orbit_of[j] = id;
                    stack.push(j);
                }
            }
        }
        lengths.push(len);
    }
    Ok((orbit_of, reps, lengths))
}

/// The full census: suborbits, classes, x- and k-vectors and |Γ_r|.
pub fn suborbit_census(action: &ActionCtx) -> Result<Census> {
    let q = action.q() as u64;
    let m = action.stab().len();
    let (orbit_of, reps, lengths) = m_orbits(action)?;
    if lengths[0] != 1 {
        return Err(Error::Degenerate("base subplane is not fixed by M"));
    }

    let analysed: Vec<Result<(SuborbitRecord, Vec<Mat3>)>> = reps[1..]
        .par_iter()
        .zip(&lengths[1..])
        .map(|(&rep, &length)| {
            let k = two_point_stabilizer(action, rep as usize);
            if k.len() * length != m {
                return Err(Error::StabilizerOrder {
                    found: k.len() * length,
                    expected: m,
                });
            }
            let (class, involutions, normalizer) = classify(action, &k)?;
            let mut shape = action.geom.intersection_profile(action.points(0), action.points(rep as usize)).shape;
            if class == StabClass::A4 && shape == Shape::ThreeNonisotropic {
                shape = Shape::A4Profile;
            }
            Ok((
                SuborbitRecord {
                    rep,
                    class,
                    order: k.len(),
                    length,
                    involutions,
                    normalizer,
                    shape,
                },
                k,
            ))
        })
        .collect();

    let mut records = Vec::with_capacity(analysed.len());
    let mut class_stabs: Vec<Option<Vec<Mat3>>> = vec![None; 8];
    let mut x = [0u64; 8];
    let mut gamma_r = 0u64;
    let mut regular_suborbits = 0;
    for a in analysed {
        let (rec, k) = a?;
        match rec.class.column() {
            Some(c) => {
                x[c] += 1;
                if class_stabs[c].is_none() {
                    class_stabs[c] = Some(k);
                }
            }
            None => {
                gamma_r += rec.length as u64;
                regular_suborbits += 1;
            }
        }
        records.push(rec);
    }

    let a4 = StabClass::A4.column().expect("A4 is a table class");
    if class_stabs[a4].is_none() {
        let d4 = class_stabs[StabClass::D4A.column().expect("table class")]
            .clone()
            .ok_or(Error::Degenerate("no D4A suborbit to extend to A4"))?;
        class_stabs[a4] = Some(a4_over(action, &d4)?);
    }

    let mut k = [0u64; 8];
    for (c, stab) in class_stabs.iter().enumerate() {
        if let Some(s) = stab {
            k[c] = fix_count(action, s)?;
        }
    }

    Ok(Census {
        q: q as u32,
        d: action.d(),
        omega_size: action.len(),
        records,
        x,
        k,
        expected_x: table_x(q),
        expected_k: table_k(q),
        gamma_r,
        regular_suborbits,
        orbit_of,
        class_stabs,
    })
}

/// ⟨D, g⟩ for an element g of order 3 normalizing the four-group D.
fn a4_over(action: &ActionCtx, d4: &[Mat3]) -> Result<Vec<Mat3>> {
    let f = action.field();
    let norm = normalizer(action, d4);
    let g3 = norm
        .iter()
        .find(|g| group::element_order(f, g, 4).ok() == Some(3))
        .ok_or(Error::Degenerate("normalizer of D4 has no element of order 3"))?;
    let mut gens = d4.to_vec();
    gens.push(*g3);
    let a4 = group::closure(f, &gens, 12)?;
    if a4.len() != 12 {
        return Err(Error::Degenerate("D4 and an order-3 normalizer element do not generate A4"));
    }
    Ok(a4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(table_x(7), Some([7, 7, 7, 21, 2, 20, 34, 0]));
        assert_eq!(table_x(9), Some([9, 9, 12, 36, 2, 37, 51, 0]));
        assert_eq!(table_x(11), Some([3, 3, 6, 19, 2, 18, 24, 1]));
        assert_eq!(table_x(13), Some([13, 13, 26, 78, 2, 66, 114, 0]));
        assert_eq!(table_k(7), [8, 8, 64, 64, 7, 392, 392, 1]);
    }
}
