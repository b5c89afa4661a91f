//! Involution incidences between Ω[0], a second subplane and the rest of Ω.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionCtx;
use crate::error::Result;
use crate::group;
use crate::involution::{coperp, tau};
use crate::matrix::Mat3;
use crate::saxl::{two_point_stabilizer, Census, StabClass};

/// Isomorphism types of two-point stabilizers, named by their index label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Cat {
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "q+1")]
    QPlus,
    #[serde(rename = "q-1")]
    QMinus,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "other")]
    Other,
}

impl Cat {
    pub fn label(self) -> &'static str {
        match self {
            Cat::Q => "q",
            Cat::QPlus => "q+1",
            Cat::QMinus => "q-1",
            Cat::Three => "3",
            Cat::Four => "4",
            Cat::Two => "2",
            Cat::One => "1",
            Cat::Other => "other",
        }
    }

    pub fn of_class(c: Option<StabClass>) -> Cat {
        match c {
            Some(StabClass::DihedralPlus) => Cat::QPlus,
            Some(StabClass::DihedralMinus) => Cat::QMinus,
            Some(StabClass::D4A | StabClass::D4B) => Cat::Three,
            Some(StabClass::A4) => Cat::Four,
            Some(StabClass::Borel) => Cat::Q,
            Some(StabClass::Z2A | StabClass::Z2B) => Cat::Two,
            Some(StabClass::Regular) => Cat::One,
            None => Cat::Other,
        }
    }

    /// From (order, involutions) of a subgroup.
    pub fn of_group(q: usize, order: usize, involutions: usize) -> Cat {
        match (order, involutions) {
            (1, 0) => Cat::One,
            (2, 1) => Cat::Two,
            (4, 3) => Cat::Three,
            (12, 3) => Cat::Four,
            (n, i) if n == 2 * q && i == q => Cat::Q,
            (n, i) if n == 2 * (q + 1) && i == q + 2 => Cat::QPlus,
            (n, i) if n == 2 * (q - 1) && i == q => Cat::QMinus,
            _ => Cat::Other,
        }
    }
}

/// Per-involution tallies for t ∈ I ∖ I′.
#[derive(Clone, Debug, Serialize)]
pub struct InvolutionTally {
    pub pole: u32,
    pub i2: usize,
    pub ip: usize,
    pub other: usize,
    pub e_t: u64,
    pub precursor_holds: bool,
    /// |E(t)| ≥ the bound after replacing |I ∩ I′| by q + 2.
    pub chain_first_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairContext {
    pub alpha: u32,
    pub alpha_prime: u32,
    pub class: Option<StabClass>,
    pub i_size: usize,
    pub i_prime_size: usize,
    pub i_cap: usize,
    pub gamma_nr_cap: u64,
    pub w_size: u64,
    pub e_by_t: u64,
    pub e_by_w: u64,
    pub w_in_gamma_nr_cap: bool,
    pub max_i2: usize,
    pub max_ip: usize,
    pub min_e_t: Option<u64>,
    /// Order of tt′ → number of pairs (t, t′) ∈ (I∖I′) × (I′∖I).
    pub product_orders: BTreeMap<usize, usize>,
    /// Pair kind → distinct counts of subplanes containing both poles.
    pub pair_multiplicity: BTreeMap<String, Vec<u64>>,
    /// "j,k,l" → n_{j,k,l}.
    pub n_jkl: BTreeMap<String, u64>,
    pub tallies: Vec<InvolutionTally>,
}

impl PairContext {
    pub fn n(&self, j: Cat, k: Cat, l: Cat) -> u64 {
        let key = format!("{},{},{}", j.label(), k.label(), l.label());
        self.n_jkl.get(&key).copied().unwrap_or(0)
    }

    pub fn precursor_failures(&self) -> usize {
        self.tallies.iter().filter(|t| !t.precursor_holds).count()
    }
}

/// Subplanes through each nonisotropic point, sorted.
pub struct Incidence {
    through: Vec<Vec<u32>>,
}

impl Incidence {
    pub fn build(action: &ActionCtx) -> Self {
        let geom = &action.geom;
        let mut through = vec![Vec::new(); geom.point_count()];
        for i in 0..action.len() {
            for &p in action.points(i) {
                if !geom.is_isotropic(p) {
                    through[p as usize].push(i as u32);
                }
            }
        }
        Incidence { through }
    }

    pub fn common(&self, y: u32, z: u32) -> u64 {
        crate::geometry::intersect_count(&self.through[y as usize], &self.through[z as usize]) as u64
    }
}

fn q_d(action: &ActionCtx) -> (i128, i128) {
    (action.q() as i128, action.d() as i128)
}

/// d·|E(t)| = q²(q+1) + (q²+q)I′(t,2) + ((d−1)q−1)I′(t,p) − (q+1)|I∩I′|.
pub fn precursor_rhs(q: i128, d: i128, i2: usize, ip: usize, cap: usize) -> Ratio<i128> {
    let v = q * q * (q + 1) + (q * q + q) * i2 as i128 + ((d - 1) * q - 1) * ip as i128 - (q + 1) * cap as i128;
    Ratio::new(v, d)
}

/// q²(q+1)/d − (q+1)(q+2)/d + ((d−1)q−1)/d·I′(t,p).
pub fn chain_first(q: i128, d: i128, ip: usize) -> Ratio<i128> {
    Ratio::new(q * q * (q + 1) - (q + 1) * (q + 2) + ((d - 1) * q - 1) * ip as i128, d)
}

/// q³ − 6q − 1 for d = 1, (q³ − 3q − 2)/3 for d = 3.
pub fn chain_final(q: i128, d: i128) -> Ratio<i128> {
    if d == 1 {
        Ratio::from_integer(q.pow(3) - 6 * q - 1)
    } else {
        Ratio::new(q.pow(3) - 3 * q - 2, 3)
    }
}

fn involution_count(action: &ActionCtx, k: &[Mat3]) -> usize {
    let f = action.field();
    k.iter()
        .filter(|g| !f.is_scalar(g) && f.is_scalar(&f.mat_mul(g, g)))
        .count()
}

/// Exact pair quantities for (Ω[0], Ω[rep]).
pub fn enumerate_pair_quantities(
    action: &ActionCtx,
    census: &Census,
    incidence: &Incidence,
    rep: usize,
) -> Result<PairContext> {
    let geom = &action.geom;
    let f = action.field();
    let (q, d) = q_d(action);
    let plane = geom.point_count();

    let mut in0 = vec![false; plane];
    let mut inp = vec![false; plane];
    for &p in action.points(0) {
        in0[p as usize] = true;
    }
    for &p in action.points(rep) {
        inp[p as usize] = true;
    }
    let non = |p: &&u32| !geom.is_isotropic(**p);
    let i_poles: Vec<u32> = action.points(0).iter().filter(non).copied().collect();
    let ip_poles: Vec<u32> = action.points(rep).iter().filter(non).copied().collect();
    let i_cap = i_poles.iter().filter(|&&p| inp[p as usize]).count();
    let t_set: Vec<u32> = i_poles.iter().copied().filter(|&p| !inp[p as usize]).collect();
    let tp_set: Vec<u32> = ip_poles.iter().copied().filter(|&p| !in0[p as usize]).collect();

    let cap = 2 * (action.q() as usize + 1);
    let invs_p: Vec<_> = tp_set
        .iter()
        .map(|&p| tau(geom, &geom.point_vec(p)))
        .collect::<Result<_>>()?;
    let mut product_orders = BTreeMap::new();
    let mut multiplicity: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    let mut tallies = Vec::with_capacity(t_set.len());
    for &y in &t_set {
        let yv = geom.point_vec(y);
        let t = tau(geom, &yv)?;
        let (mut i2, mut ip, mut other, mut e_t) = (0, 0, 0, 0u64);
        for (k, &z) in tp_set.iter().enumerate() {
            let zv = geom.point_vec(z);
            let kind = if geom.herm(&yv, &zv).is_zero() {
                i2 += 1;
                "2"
            } else if coperp(geom, &yv, &zv)? {
                ip += 1;
                "p"
            } else {
                other += 1;
                "other"
            };
            let order = group::element_order(f, &f.mat_mul(&t.mat, &invs_p[k].mat), cap)?;
            *product_orders.entry(order).or_insert(0) += 1;
            let mult = incidence.common(y, z);
            let seen = multiplicity.entry(kind.to_string()).or_default();
            if !seen.contains(&mult) {
                seen.push(mult);
            }
            e_t += mult;
        }
        let e_ratio = Ratio::from_integer(e_t as i128);
        tallies.push(InvolutionTally {
            pole: y,
            i2,
            ip,
            other,
            e_t,
            precursor_holds: e_ratio == precursor_rhs(q, d, i2, ip, i_cap),
            chain_first_ok: e_ratio >= chain_first(q, d, ip),
        });
    }
    for v in multiplicity.values_mut() {
        v.sort_unstable();
    }

    let mut in_t = vec![false; plane];
    let mut in_tp = vec![false; plane];
    for &p in &t_set {
        in_t[p as usize] = true;
    }
    for &p in &tp_set {
        in_tp[p as usize] = true;
    }
    let t_inv = group::inv(f, action.transversal(rep));
    let back_perm = group::point_perm(geom, &t_inv);
    let joint = two_point_stabilizer(action, rep);
    let joint_perms: Vec<(Mat3, Vec<u32>)> = joint.iter().map(|g| (*g, group::point_perm(geom, g))).collect();
    let qs = action.q() as usize;

    struct Acc {
        gamma_nr_cap: u64,
        w_size: u64,
        e_by_w: u64,
        w_ok: bool,
        n: BTreeMap<(Cat, Cat, Cat), u64>,
    }
    let per_chunk: Vec<Result<Acc>> = (0..action.len())
        .into_par_iter()
        .fold(
            || {
                Ok(Acc {
                    gamma_nr_cap: 0,
                    w_size: 0,
                    e_by_w: 0,
                    w_ok: true,
                    n: BTreeMap::new(),
                })
            },
            |acc: Result<Acc>, i| {
                let mut acc = acc?;
                if i == 0 || i == rep {
                    return Ok(acc);
                }
                let mut buf = Vec::with_capacity(action.plane_len());
                let back = action.image_by_perm(i, &back_perm, &mut buf)? as usize;
                let nr = !census.is_regular(i) && !census.is_regular(back);
                acc.gamma_nr_cap += nr as u64;
                let pts = action.points(i);
                let s = pts.iter().filter(|&&p| in_t[p as usize]).count() as u64;
                let sp = pts.iter().filter(|&&p| in_tp[p as usize]).count() as u64;
                if s > 0 && sp > 0 {
                    acc.w_size += 1;
                    acc.e_by_w += s * sp;
                    acc.w_ok &= nr;
                    let j = Cat::of_class(census.class_of(i));
                    let k = Cat::of_class(census.class_of(back));
                    let triple: Vec<Mat3> = joint_perms
                        .iter()
                        .filter(|(_, p)| action.fixes(i, p))
                        .map(|(g, _)| *g)
                        .collect();
                    let l = Cat::of_group(qs, triple.len(), involution_count(action, &triple));
                    *acc.n.entry((j, k, l)).or_insert(0) += 1;
                }
                Ok(acc)
            },
        )
        .collect();
    let mut gamma_nr_cap = 0;
    let mut w_size = 0;
    let mut e_by_w = 0;
    let mut w_ok = true;
    let mut n_jkl = BTreeMap::new();
    for a in per_chunk {
        let a = a?;
        gamma_nr_cap += a.gamma_nr_cap;
        w_size += a.w_size;
        e_by_w += a.e_by_w;
        w_ok &= a.w_ok;
        for ((j, k, l), v) in a.n {
            *n_jkl.entry(format!("{},{},{}", j.label(), k.label(), l.label())).or_insert(0) += v;
        }
    }

    Ok(PairContext {
        alpha: 0,
        alpha_prime: rep as u32,
        class: census.class_of(rep),
        i_size: i_poles.len(),
        i_prime_size: ip_poles.len(),
        i_cap,
        gamma_nr_cap,
        w_size,
        e_by_t: tallies.iter().map(|t| t.e_t).sum(),
        e_by_w,
        w_in_gamma_nr_cap: w_ok,
        max_i2: tallies.iter().map(|t| t.i2).max().unwrap_or(0),
        max_ip: tallies.iter().map(|t| t.ip).max().unwrap_or(0),
        min_e_t: tallies.iter().map(|t| t.e_t).min(),
        product_orders,
        pair_multiplicity: multiplicity,
        n_jkl,
        tallies,
    })
}

/// Pair quantities for every nontrivial suborbit representative.
pub fn all_pairs(action: &ActionCtx, census: &Census, max_reps: Option<usize>) -> Result<Vec<PairContext>> {
    let incidence = Incidence::build(action);
    let mut reps: Vec<usize> = census.records.iter().map(|r| r.rep as usize).collect();
    if let Some(m) = max_reps {
        reps.truncate(m);
    }
    reps.iter()
        .map(|&r| enumerate_pair_quantities(action, census, &incidence, r))
        .collect()
}

/// |Γ_nr(α)| = |Ω| − 1 − |Γ_r(α)|.
pub fn gamma_nr_size(census: &Census) -> u64 {
    census.omega_size as u64 - 1 - census.gamma_r
}
