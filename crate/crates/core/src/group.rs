//! Projective unitary matrices acting on the right: x ↦ x·g.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::geometry::{BaerSubplane, GeomCtx, GramModel};
use crate::matrix::{Mat3, Vec3, IDENTITY};

/// A group element is a matrix in projective normal form
/// (see [`FieldCtx::normalize_mat`]); equal elements have equal entries.
pub type GroupElement = Mat3;

/// q(a,b) for b + b̄ + aā = 0.
pub fn q_elem(f: &FieldCtx, a: Fe, b: Fe) -> Mat3 {
    [
        [Fe::ONE, a, b],
        [Fe::ZERO, Fe::ONE, f.neg(f.conj(a))],
        [Fe::ZERO, Fe::ZERO, Fe::ONE],
    ]
}

/// h(k) = diag(k^{−q}, k^{q−1}, k).
pub fn h_elem(f: &FieldCtx, k: Fe) -> Mat3 {
    let q = f.q() as u64;
    let kq = f.pow(k, q);
    [
        [f.inv(kq), Fe::ZERO, Fe::ZERO],
        [Fe::ZERO, f.div(kq, k), Fe::ZERO],
        [Fe::ZERO, Fe::ZERO, k],
    ]
}

pub fn tau_elem(f: &FieldCtx) -> Mat3 {
    [
        [Fe::ZERO, Fe::ZERO, Fe::ONE],
        [Fe::ZERO, f.neg(Fe::ONE), Fe::ZERO],
        [Fe::ONE, Fe::ZERO, Fe::ZERO],
    ]
}

/// g·gram·ḡᵀ is a nonzero multiple of gram.
pub fn is_unitary(geom: &GeomCtx, g: &Mat3) -> bool {
    let f = &geom.field;
    let lhs = f.mat_mul(&f.mat_mul(g, geom.gram()), &f.adjoint(g));
    let gram = geom.gram();
    let (i, j) = (0..9)
        .map(|k| (k / 3, k % 3))
        .find(|&(i, j)| !gram[i][j].is_zero())
        .expect("gram is nonzero");
    let lambda = f.div(lhs[i][j], gram[i][j]);
    !lambda.is_zero() && lhs == f.mat_scale(lambda, gram)
}

fn require_antidiag(geom: &GeomCtx) -> Result<()> {
    match geom.model() {
        GramModel::AntiDiagonal => Ok(()),
        GramModel::Identity => Err(Error::WrongGram("anti-diagonal")),
    }
}

/// q(aₖ, −aₖāₖ/2) over the F_p-basis of F_{q²}, q(0, i·θᵏ) for k < m, h(ξ) and τ.
pub fn su3_generators(geom: &GeomCtx) -> Result<Vec<Mat3>> {
    require_antidiag(geom)?;
    let f = &geom.field;
    let half = f.inv(f.from_int(2));
    let n = 2 * f.m() as usize;
    let mut gens = Vec::new();
    for k in 0..n {
        let mut c = vec![0; n];
        c[k] = 1;
        let a = f.from_coeffs(&c);
        gens.push(q_elem(f, a, f.neg(f.mul(f.norm(a), half))));
    }
    let mut t = Fe::ONE;
    for _ in 0..f.m() {
        gens.push(q_elem(f, Fe::ZERO, f.mul(f.i_elem(), t)));
        t = f.mul(t, f.theta());
    }
    gens.push(h_elem(f, f.xi()));
    gens.push(tau_elem(f));
    Ok(gens)
}

/// A three-element generating set: q(1, −1/2), h(ξ), τ, rewritten into the
/// context's model. The h(ξ)-conjugates of q(1,−1/2) already span the
/// translations of Q, so the orbit is the same as for the full list.
pub fn compact_generators(geom: &GeomCtx) -> Vec<Mat3> {
    let f = &geom.field;
    let half = f.inv(f.from_int(2));
    let base = [q_elem(f, Fe::ONE, f.neg(half)), h_elem(f, f.xi()), tau_elem(f)];
    match geom.model() {
        GramModel::AntiDiagonal => base.to_vec(),
        GramModel::Identity => {
            let anti = GeomCtx::new(f.clone(), GramModel::AntiDiagonal);
            base.iter()
                .map(|g| f.normalize_mat(&anti.matrix_to_identity(g)))
                .collect()
        }
    }
}

#[inline]
pub fn act(geom: &GeomCtx, g: &Mat3, p: &Vec3) -> Vec3 {
    let f = &geom.field;
    f.normalize_vec(&f.vec_mat(p, g))
}

pub fn act_subplane(geom: &GeomCtx, g: &Mat3, w: &BaerSubplane) -> BaerSubplane {
    let f = &geom.field;
    let basis = [f.vec_mat(&w.basis[0], g), f.vec_mat(&w.basis[1], g), f.vec_mat(&w.basis[2], g)];
    geom.subplane_unchecked(basis)
}

/// The permutation induced on point indices.
pub fn point_perm(geom: &GeomCtx, g: &Mat3) -> Vec<u32> {
    let f = &geom.field;
    (0..geom.point_count() as u32)
        .map(|i| geom.point_index(&f.vec_mat(&geom.point_vec(i), g)))
        .collect()
}

pub fn mul(f: &FieldCtx, a: &Mat3, b: &Mat3) -> Mat3 {
    f.normalize_mat(&f.mat_mul(a, b))
}

pub fn inv(f: &FieldCtx, a: &Mat3) -> Mat3 {
    f.normalize_mat(&f.adjugate(a))
}

/// g·h·g⁻¹.
pub fn conj_by(f: &FieldCtx, g: &Mat3, h: &Mat3) -> Mat3 {
    f.normalize_mat(&f.mat_mul(&f.mat_mul(g, h), &f.adjugate(g)))
}

/// Projective order, failing past `cap`.
pub fn element_order(f: &FieldCtx, g: &Mat3, cap: usize) -> Result<usize> {
    let mut x = f.normalize_mat(g);
    for k in 1..=cap {
        if f.is_scalar(&x) {
            return Ok(k);
        }
        x = f.normalize_mat(&f.mat_mul(&x, g));
    }
    Err(Error::OrderCap(cap))
}

/// The subgroup generated by `gens`, failing once it exceeds `limit` elements.
pub fn closure(f: &FieldCtx, gens: &[Mat3], limit: usize) -> Result<Vec<Mat3>> {
    let mut c = Closure::new();
    for g in gens {
        c.add(f, g, limit)?;
    }
    Ok(c.elements)
}

/// Incrementally grown subgroup closure.
#[derive(Clone, Debug)]
pub struct Closure {
    pub elements: Vec<Mat3>,
    pub set: HashSet<Mat3>,
    pub gens: Vec<Mat3>,
}

impl Default for Closure {
    fn default() -> Self {
        Self::new()
    }
}

impl Closure {
    pub fn new() -> Self {
        let mut set = HashSet::new();
        set.insert(IDENTITY);
        Closure {
            elements: vec![IDENTITY],
            set,
            gens: Vec::new(),
        }
    }

    pub fn contains(&self, g: &Mat3) -> bool {
        self.set.contains(g)
    }

    /// Adds a generator; returns whether the group grew.
    pub fn add(&mut self, f: &FieldCtx, g: &Mat3, limit: usize) -> Result<bool> {
        let g = f.normalize_mat(g);
        if self.set.contains(&g) {
            return Ok(false);
        }
        self.gens.push(g);
        let mut queue: VecDeque<usize> = (0..self.elements.len()).collect();
        while let Some(i) = queue.pop_front() {
            for s in &self.gens {
                let x = f.normalize_mat(&f.mat_mul(&self.elements[i], s));
                if self.set.insert(x) {
                    self.elements.push(x);
                    if self.elements.len() > limit {
                        return Err(Error::StabilizerOrder {
                            found: self.elements.len(),
                            expected: limit,
                        });
                    }
                    queue.push_back(self.elements.len() - 1);
                }
            }
        }
        Ok(true)
    }
}
