//! Involutions τ_y(x) = −x + 2(x,y)/(y,y)·y attached to nonisotropic points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::geometry::GeomCtx;
use crate::group;
use crate::matrix::{Mat3, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Involution {
    pub pole: Vec3,
    pub pole_index: u32,
    pub mat: Mat3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairType {
    Commuting,
    Dihedral2p,
    Dihedral2l(usize),
}

/// Right-acting matrix −I + (2/(y,y))·(gram·ȳᵀ)·y, projectively normalized.
pub fn tau(geom: &GeomCtx, y: &Vec3) -> Result<Involution> {
    let f = &geom.field;
    let h = geom.herm(y, y);
    if h.is_zero() {
        return Err(Error::IsotropicPole);
    }
    let col = f.vec_mat(&f.vec_conj(y), &f.transpose(geom.gram()));
    let c = f.div(f.from_int(2), h);
    let mut m = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut x = f.mul(c, f.mul(col[i], y[j]));
            if i == j {
                x = f.sub(x, Fe::ONE);
            }
            m[i][j] = x;
        }
    }
    let pole = f.normalize_vec(y);
    Ok(Involution {
        pole,
        pole_index: geom.point_index(&pole),
        mat: f.normalize_mat(&m),
    })
}

pub fn apply(geom: &GeomCtx, t: &Involution, x: &Vec3) -> Vec3 {
    group::act(geom, &t.mat, x)
}

/// The involutions whose poles are the nonisotropic points of a subplane.
pub fn involutions_of(geom: &GeomCtx, points: &[u32]) -> Vec<Involution> {
    points
        .iter()
        .filter(|&&p| !geom.is_isotropic(p))
        .map(|&p| tau(geom, &geom.point_vec(p)).expect("nonisotropic pole"))
        .collect()
}

/// Whether ⟨y⟩ and ⟨z⟩ both lie on v^⊥ for an isotropic v, i.e. the line yz is tangent.
pub fn coperp(geom: &GeomCtx, y: &Vec3, z: &Vec3) -> Result<bool> {
    let line = geom.line_through(y, z)?;
    let v = geom.pole(&line);
    Ok(geom.herm(&v, &v).is_zero())
}

/// Classification of ⟨τ_y, τ_z⟩ by the order of τ_yτ_z, capped at 2(q+1).
pub fn pair_type(geom: &GeomCtx, a: &Involution, b: &Involution) -> Result<PairType> {
    if a.pole_index == b.pole_index {
        return Err(Error::EqualPoints);
    }
    let f = &geom.field;
    let cap = 2 * (geom.q() as usize + 1);
    let prod = f.mat_mul(&a.mat, &b.mat);
    let n = group::element_order(f, &prod, cap)?;
    Ok(match n {
        2 => PairType::Commuting,
        n if n == f.p() as usize => PairType::Dihedral2p,
        n => PairType::Dihedral2l(n),
    })
}

/// Number of isotropic points fixed by a collineation.
pub fn fixed_isotropic(geom: &GeomCtx, g: &Mat3) -> usize {
    let f = &geom.field;
    geom.isotropic_points()
        .filter(|&p| geom.point_index(&f.vec_mat(&geom.point_vec(p), g)) == p)
        .count()
}

/// Triples of pairwise orthogonal nonisotropic points of a point set, sorted.
pub fn orthogonal_frames(geom: &GeomCtx, points: &[u32]) -> Vec<[u32; 3]> {
    let non: Vec<u32> = points.iter().copied().filter(|&p| !geom.is_isotropic(p)).collect();
    let vecs: Vec<Vec3> = non.iter().map(|&p| geom.point_vec(p)).collect();
    let orth = |i: usize, j: usize| geom.herm(&vecs[i], &vecs[j]).is_zero();
    let mut out = Vec::new();
    for i in 0..non.len() {
        for j in i + 1..non.len() {
            if !orth(i, j) {
                continue;
            }
            for k in j + 1..non.len() {
                if orth(i, k) && orth(j, k) {
                    out.push([non[i], non[j], non[k]]);
                }
            }
        }
    }
    out
}

/// Frame commutation property for a pair of subplanes (u, u′): every frame
/// of u none of whose poles lies in u′ has a pole orthogonal to some
/// nonisotropic point of u′. Returns (frames checked, frames failing).
pub fn frame_commutation(geom: &GeomCtx, u: &[u32], u2: &[u32]) -> (usize, usize) {
    let non2: Vec<Vec3> = u2
        .iter()
        .filter(|&&p| !geom.is_isotropic(p))
        .map(|&p| geom.point_vec(p))
        .collect();
    let mut checked = 0;
    let mut failing = 0;
    for frame in orthogonal_frames(geom, u) {
        if frame.iter().any(|p| u2.binary_search(p).is_ok()) {
            continue;
        }
        checked += 1;
        let ok = frame.iter().any(|&p| {
            let y = geom.point_vec(p);
            non2.iter().any(|z| geom.herm(&y, z).is_zero())
        });
        if !ok {
            failing += 1;
        }
    }
    (checked, failing)
}
