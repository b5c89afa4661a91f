//! The Hermitian plane PG(2,q²): points, lines, Baer sublines and subplanes.
//!
//! Points are indexed densely. With S = q² and the first nonzero coordinate
//! scaled to 1, `(1,x,y)` has index `x·S + y`, `(0,1,y)` has `S² + y` and
//! `(0,0,1)` has `S² + S`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::matrix::{Mat3, Vec3, IDENTITY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GramModel {
    Identity,
    #[serde(rename = "antidiag")]
    AntiDiagonal,
}

impl GramModel {
    pub fn name(self) -> &'static str {
        match self {
            GramModel::Identity => "identity",
            GramModel::AntiDiagonal => "antidiag",
        }
    }
}

impl std::str::FromStr for GramModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(GramModel::Identity),
            "antidiag" | "anti-diagonal" => Ok(GramModel::AntiDiagonal),
            _ => Err(Error::BadParams("gram must be identity or antidiag")),
        }
    }
}

/// A line of PG(2,q²), stored by its dual coordinates: the points x with Σ xᵢdᵢ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Line {
    pub dual: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Empty,
    OneIsotropic,
    OneNonisotropic,
    ThreeNonisotropic,
    QSet,
    Subline,
    SublinePlusPole,
    A4Profile,
    Irregular(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub points: Vec<u32>,
    pub isotropic: usize,
    pub shape: Shape,
}

/// An F_q-form of F_{q²}³ together with its projective point set.
#[derive(Clone, Debug)]
pub struct BaerSubplane {
    pub basis: [Vec3; 3],
    pub points: Vec<u32>,
    pub key: u128,
}

impl PartialEq for BaerSubplane {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.points == other.points
    }
}
impl Eq for BaerSubplane {}

/// Canonical identity of a sorted point list.
pub fn point_set_key(points: &[u32]) -> u128 {
    let mut h = Sha256::new();
    for p in points {
        h.update(p.to_le_bytes());
    }
    let digest = h.finalize();
    u128::from_le_bytes(digest[..16].try_into().expect("digest has 32 bytes"))
}

#[derive(Clone, Debug)]
pub struct GeomCtx {
    pub field: FieldCtx,
    model: GramModel,
    gram: Mat3,
    converter: Mat3,
    converter_inv: Mat3,
    isotropic: Vec<bool>,
}

impl GeomCtx {
    pub fn new(field: FieldCtx, model: GramModel) -> Self {
        let f = &field;
        let gram = match model {
            GramModel::Identity => IDENTITY,
            GramModel::AntiDiagonal => [
                [Fe::ZERO, Fe::ZERO, Fe::ONE],
                [Fe::ZERO, Fe::ONE, Fe::ZERO],
                [Fe::ONE, Fe::ZERO, Fe::ZERO],
            ],
        };
        let converter = orthonormalize(f, &gram);
        let converter_inv = f.mat_inv(&converter).expect("orthonormal basis is invertible");
        let mut ctx = GeomCtx {
            field,
            model,
            gram,
            converter,
            converter_inv,
            isotropic: Vec::new(),
        };
        let n = ctx.point_count();
        ctx.isotropic = (0..n)
            .map(|i| {
                let v = ctx.point_vec(i as u32);
                ctx.herm(&v, &v).is_zero()
            })
            .collect();
        ctx
    }

    pub fn model(&self) -> GramModel {
        self.model
    }
    pub fn gram(&self) -> &Mat3 {
        &self.gram
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// C with C·gram·C̄ᵀ = I: identity-model coordinates x′ correspond to x′C here.
    pub fn converter(&self) -> &Mat3 {
        &self.converter
    }
    pub fn converter_inv(&self) -> &Mat3 {
        &self.converter_inv
    }

    /// Rewrites a matrix acting in this model as one acting in identity-model coordinates.
    pub fn matrix_to_identity(&self, g: &Mat3) -> Mat3 {
        let f = &self.field;
        f.mat_mul(&f.mat_mul(&self.converter, g), &self.converter_inv)
    }

    /// x·gram·ȳᵀ.
    #[inline]
    pub fn herm(&self, x: &Vec3, y: &Vec3) -> Fe {
        let f = &self.field;
        match self.model {
            GramModel::Identity => f.dot(x, &f.vec_conj(y)),
            GramModel::AntiDiagonal => {
                let s = f.add(f.mul(x[0], f.conj(y[2])), f.mul(x[1], f.conj(y[1])));
                f.add(s, f.mul(x[2], f.conj(y[0])))
            }
        }
    }

    pub fn point_count(&self) -> usize {
        let s = self.field.size() as usize;
        s * s + s + 1
    }

    #[inline]
    pub fn point_index(&self, v: &Vec3) -> u32 {
        let f = &self.field;
        let s = f.size();
        if !v[0].is_zero() {
            let i = f.inv(v[0]);
            f.mul(v[1], i).0 as u32 * s + f.mul(v[2], i).0 as u32
        } else if !v[1].is_zero() {
            s * s + f.div(v[2], v[1]).0 as u32
        } else {
            s * s + s
        }
    }

    pub fn point_vec(&self, idx: u32) -> Vec3 {
        let s = self.field.size();
        if idx < s * s {
            [Fe::ONE, Fe((idx / s) as u16), Fe((idx % s) as u16)]
        } else if idx < s * s + s {
            [Fe::ZERO, Fe::ONE, Fe((idx - s * s) as u16)]
        } else {
            [Fe::ZERO, Fe::ZERO, Fe::ONE]
        }
    }

    #[inline]
    pub fn is_isotropic(&self, idx: u32) -> bool {
        self.isotropic[idx as usize]
    }

    /// (|H|, |N|) from the full point list.
    pub fn point_census(&self) -> (usize, usize) {
        let h = self.isotropic.iter().filter(|&&b| b).count();
        (h, self.isotropic.len() - h)
    }

    pub fn isotropic_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.isotropic
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u32)
    }

    pub fn perp(&self, v: &Vec3) -> Line {
        let f = &self.field;
        let c = f.vec_conj(v);
        Line {
            dual: f.vec_mat(&c, &f.transpose(&self.gram)),
        }
    }

    /// The point whose perp is `line`.
    pub fn pole(&self, line: &Line) -> Vec3 {
        let f = &self.field;
        let gi = f.mat_inv(&f.transpose(&self.gram)).expect("gram is invertible");
        f.normalize_vec(&f.vec_conj(&f.vec_mat(&line.dual, &gi)))
    }

    pub fn line_through(&self, a: &Vec3, b: &Vec3) -> Result<Line> {
        let f = &self.field;
        let d = f.cross(a, b);
        if d.iter().all(|x| x.is_zero()) {
            return Err(Error::EqualPoints);
        }
        Ok(Line { dual: d })
    }

    pub fn on_line(&self, line: &Line, v: &Vec3) -> bool {
        self.field.dot(&line.dual, v).is_zero()
    }

    /// The q²+1 points of a line, as sorted indices.
    pub fn line_points(&self, line: &Line) -> Vec<u32> {
        let f = &self.field;
        let (u, v) = kernel_pair(f, &line.dual);
        let mut pts: Vec<u32> = f
            .elements()
            .map(|t| self.point_index(&f.vec_add(&u, &f.vec_scale(t, &v))))
            .collect();
        pts.push(self.point_index(&v));
        pts.sort_unstable();
        pts
    }

    /// The q²+1 lines through a point.
    pub fn lines_through(&self, p: &Vec3) -> Vec<Line> {
        let f = &self.field;
        let (u, v) = kernel_pair(f, p);
        let mut lines: Vec<Line> = f
            .elements()
            .map(|t| Line {
                dual: f.vec_add(&u, &f.vec_scale(t, &v)),
            })
            .collect();
        lines.push(Line { dual: v });
        lines
    }

    /// Gram matrix ((αᵢ,αⱼ)) of three vectors.
    pub fn iso(&self, basis: &[Vec3; 3]) -> Mat3 {
        let mut g = [[Fe::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = self.herm(&basis[i], &basis[j]);
            }
        }
        g
    }

    pub fn subplane_from_basis(&self, basis: [Vec3; 3]) -> Result<BaerSubplane> {
        let f = &self.field;
        if f.det(&basis).is_zero() {
            return Err(Error::NotUnitaryForm);
        }
        let iso = self.iso(&basis);
        if !iso.iter().flatten().all(|&x| f.in_subfield(x)) || f.det(&iso).is_zero() {
            return Err(Error::NotUnitaryForm);
        }
        Ok(self.subplane_unchecked(basis))
    }

    /// Builds the subplane without certifying the basis.
    pub fn subplane_unchecked(&self, basis: [Vec3; 3]) -> BaerSubplane {
        let points = self.span_points(&basis);
        let key = point_set_key(&points);
        BaerSubplane { basis, points, key }
    }

    /// Sorted indices of the points ⟨Σ aᵢαᵢ⟩, aᵢ ∈ F_q.
    pub fn span_points(&self, basis: &[Vec3; 3]) -> Vec<u32> {
        let f = &self.field;
        let sub = f.subfield();
        let mut pts = Vec::with_capacity(sub.len() * sub.len() + sub.len() + 1);
        for &a in sub {
            let va = f.vec_add(&basis[0], &f.vec_scale(a, &basis[1]));
            for &b in sub {
                pts.push(self.point_index(&f.vec_add(&va, &f.vec_scale(b, &basis[2]))));
            }
        }
        for &b in sub {
            pts.push(self.point_index(&f.vec_add(&basis[1], &f.vec_scale(b, &basis[2]))));
        }
        pts.push(self.point_index(&basis[2]));
        pts.sort_unstable();
        pts
    }

    /// The standard subplane ⟨e₁,e₂,e₃⟩ over F_q.
    pub fn standard_subplane(&self) -> BaerSubplane {
        self.subplane_unchecked(IDENTITY)
    }

    /// Membership by the F_q-rationality of (aP, βⱼ).
    pub fn subplane_contains(&self, w: &BaerSubplane, p: &Vec3) -> bool {
        let f = &self.field;
        let h: Vec<Fe> = w.basis.iter().map(|b| self.herm(p, b)).collect();
        let Some(&pivot) = h.iter().find(|x| !x.is_zero()) else {
            return false;
        };
        let a = f.inv(pivot);
        h.iter().all(|&x| f.in_subfield(f.mul(a, x)))
    }

    pub fn intersect_subplanes(&self, w1: &BaerSubplane, w2: &BaerSubplane) -> Result<IntersectionProfile> {
        if w1 == w2 {
            return Err(Error::SameSubplane);
        }
        Ok(self.intersection_profile(&w1.points, &w2.points))
    }

    /// Profile of two sorted point lists.
    pub fn intersection_profile(&self, a: &[u32], b: &[u32]) -> IntersectionProfile {
        let points = intersect_sorted(a, b);
        let isotropic = points.iter().filter(|&&p| self.is_isotropic(p)).count();
        let q = self.q() as usize;
        let n = points.len();
        let shape = match (n, isotropic) {
            (0, _) => Shape::Empty,
            (1, 1) => Shape::OneIsotropic,
            (1, 0) => Shape::OneNonisotropic,
            (3, 0) => Shape::ThreeNonisotropic,
            _ if n == q => Shape::QSet,
            _ if n == q + 1 => Shape::Subline,
            _ if n == q + 2 => Shape::SublinePlusPole,
            _ => Shape::Irregular(n),
        };
        IntersectionProfile {
            points,
            isotropic,
            shape,
        }
    }

    /// The unique Baer subline through three distinct collinear points.
    pub fn baer_subline(&self, p1: &Vec3, p2: &Vec3, p3: &Vec3) -> Result<Vec<u32>> {
        let f = &self.field;
        let (i1, i2, i3) = (self.point_index(p1), self.point_index(p2), self.point_index(p3));
        if i1 == i2 || i1 == i3 || i2 == i3 {
            return Err(Error::EqualPoints);
        }
        if !f.det(&[*p1, *p2, *p3]).is_zero() {
            return Err(Error::NotCollinear);
        }
        let (a, b) = solve_pair(f, p1, p2, p3);
        let u = f.vec_scale(a, p1);
        let v = f.vec_scale(b, p2);
        let mut pts: Vec<u32> = f
            .subfield()
            .iter()
            .map(|&k| self.point_index(&f.vec_add(&f.vec_scale(k, &u), &v)))
            .collect();
        pts.push(i1);
        pts.sort_unstable();
        Ok(pts)
    }
}

/// (a,b) with a·p1 + b·p2 proportional to p3, for independent p1, p2 spanning p3.
fn solve_pair(f: &FieldCtx, p1: &Vec3, p2: &Vec3, p3: &Vec3) -> (Fe, Fe) {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = f.sub(f.mul(p1[i], p2[j]), f.mul(p1[j], p2[i]));
        if det.is_zero() {
            continue;
        }
        let a = f.div(f.sub(f.mul(p3[i], p2[j]), f.mul(p3[j], p2[i])), det);
        let b = f.div(f.sub(f.mul(p1[i], p3[j]), f.mul(p1[j], p3[i])), det);
        return (a, b);
    }
    unreachable!("distinct projective points have an invertible 2×2 minor")
}

/// Two independent vectors of {x : Σ xᵢdᵢ = 0}.
fn kernel_pair(f: &FieldCtx, d: &Vec3) -> (Vec3, Vec3) {
    let units = IDENTITY;
    let cands: Vec<Vec3> = units
        .iter()
        .map(|e| f.cross(d, e))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let u = cands[0];
    let v = cands[1..]
        .iter()
        .find(|v| f.cross(&u, v).iter().any(|x| !x.is_zero()))
        .copied()
        .expect("kernel of a nonzero functional is 2-dimensional");
    (u, v)
}

/// Deterministic Gram–Schmidt: rows cᵢ with herm(cᵢ,cⱼ) = δᵢⱼ.
fn orthonormalize(f: &FieldCtx, gram: &Mat3) -> Mat3 {
    let herm = |x: &Vec3, y: &Vec3| f.dot(&f.vec_mat(x, gram), &f.vec_conj(y));
    let e = IDENTITY;
    let cands = [
        e[0],
        e[1],
        e[2],
        f.vec_add(&e[0], &e[1]),
        f.vec_add(&e[0], &e[2]),
        f.vec_add(&e[1], &e[2]),
        f.vec_add(&f.vec_add(&e[0], &e[1]), &e[2]),
    ];
    let mut rows: Vec<Vec3> = Vec::new();
    for c in cands {
        if rows.len() == 3 {
            break;
        }
        let mut v = c;
        for r in &rows {
            v = f.vec_sub(&v, &f.vec_scale(herm(&v, r), r));
        }
        let h = herm(&v, &v);
        if h.is_zero() {
            continue;
        }
        let target = f.inv(h);
        let s = f
            .elements()
            .find(|&s| f.norm(s) == target)
            .expect("the norm map onto F_q^* is surjective");
        rows.push(f.vec_scale(s, &v));
    }
    [rows[0], rows[1], rows[2]]
}

/// Sorted-merge intersection.
pub fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn intersect_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64, model: GramModel) -> GeomCtx {
        GeomCtx::new(FieldCtx::from_q(q).unwrap(), model)
    }

    fn e(i: usize) -> Vec3 {
        IDENTITY[i]
    }

    #[test]
    fn herm_examples() {
        let g = ctx(7, GramModel::Identity);
        let f = &g.field;
        assert_eq!(g.herm(&e(0), &e(1)), Fe::ZERO);
        let rho = f.xi();
        let v = [Fe::ZERO, Fe::ONE, rho];
        assert_eq!(g.herm(&v, &v), f.add(Fe::ONE, f.norm(rho)));
        let a = ctx(7, GramModel::AntiDiagonal);
        assert_eq!(a.herm(&e(0), &e(0)), Fe::ZERO);
    }

    #[test]
    fn point_census_q7() {
        for model in [GramModel::Identity, GramModel::AntiDiagonal] {
            let g = ctx(7, model);
            assert_eq!(g.point_count(), 2451);
            assert_eq!(g.point_census(), (344, 2107));
        }
    }

    #[test]
    fn point_index_round_trip() {
        let g = ctx(7, GramModel::Identity);
        for i in 0..g.point_count() as u32 {
            assert_eq!(g.point_index(&g.point_vec(i)), i);
        }
    }

    #[test]
    fn converter_is_orthonormal() {
        for q in [7, 9, 11] {
            let g = ctx(q, GramModel::AntiDiagonal);
            let f = &g.field;
            let c = g.converter();
            let prod = f.mat_mul(&f.mat_mul(c, g.gram()), &f.adjoint(c));
            assert_eq!(prod, IDENTITY);
        }
    }

    #[test]
    fn perp_of_e1_antidiag() {
        let g = ctx(7, GramModel::AntiDiagonal);
        let f = &g.field;
        let line = g.perp(&e(0));
        let pts = g.line_points(&line);
        assert_eq!(pts.len(), 50);
        let expected = g.line_points(&g.line_through(&e(0), &e(1)).unwrap());
        assert_eq!(pts, expected);
        assert!(pts.iter().all(|&p| g.point_vec(p)[2].is_zero()));
        let iso = pts.iter().filter(|&&p| g.is_isotropic(p)).count();
        assert_eq!(iso, 1);
        let y = [f.xi(), Fe::ONE, Fe::ZERO];
        assert!(!g.on_line(&g.perp(&y), &y));
        assert_eq!(g.point_index(&g.pole(&line)), g.point_index(&e(0)));
    }

    #[test]
    fn nontangent_lines_have_q_plus_one_isotropic_points() {
        let g = ctx(7, GramModel::Identity);
        let f = &g.field;
        let p = [Fe::ONE, f.xi(), Fe::ZERO];
        for line in g.lines_through(&p) {
            let pts = g.line_points(&line);
            assert_eq!(pts.len(), 50);
            let iso = pts.iter().filter(|&&x| g.is_isotropic(x)).count();
            assert!(iso == 1 || iso == 8, "{iso}");
        }
        assert!(g.line_through(&p, &p).is_err());
    }

    #[test]
    fn standard_subplane() {
        let g = ctx(7, GramModel::Identity);
        let f = &g.field;
        let w0 = g.subplane_from_basis(IDENTITY).unwrap();
        assert_eq!(w0.points.len(), 57);
        let t = f.theta();
        let w1 = g
            .subplane_from_basis([f.vec_scale(t, &e(0)), e(1), e(2)])
            .unwrap();
        assert_eq!(w0.key, w1.key);
        assert!(!g.subplane_contains(&w0, &[Fe::ONE, f.xi(), Fe::ZERO]));
        for i in 0..g.point_count() as u32 {
            let member = w0.points.binary_search(&i).is_ok();
            assert_eq!(g.subplane_contains(&w0, &g.point_vec(i)), member);
        }
        let bad = [e(0), f.vec_add(&f.vec_scale(f.xi(), &e(0)), &e(1)), e(2)];
        assert!(matches!(g.subplane_from_basis(bad), Err(Error::NotUnitaryForm)));
        assert!(matches!(g.intersect_subplanes(&w0, &w1), Err(Error::SameSubplane)));
    }

    #[test]
    fn prop_2_1_lines_meet_subplane() {
        let g = ctx(7, GramModel::Identity);
        let f = &g.field;
        let w0 = g.standard_subplane();
        let v = [Fe::ONE, f.xi(), f.from_int(3)];
        assert!(w0.points.binary_search(&g.point_index(&v)).is_err());
        let mut big = 0;
        let mut single = 0;
        for line in g.lines_through(&v) {
            let n = intersect_count(&g.line_points(&line), &w0.points);
            match n {
                1 => single += 1,
                8 => big += 1,
                _ => panic!("line meets subplane in {n} points"),
            }
        }
        assert_eq!((big, single), (1, 49));
    }

    #[test]
    fn baer_subline_standard() {
        let g = ctx(7, GramModel::Identity);
        let f = &g.field;
        let p1 = e(0);
        let p2 = e(1);
        let p3 = f.vec_add(&e(0), &e(1));
        let sub = g.baer_subline(&p1, &p2, &p3).unwrap();
        assert_eq!(sub.len(), 8);
        let w0 = g.standard_subplane();
        assert!(sub.iter().all(|p| w0.points.binary_search(p).is_ok()));
        assert!(matches!(g.baer_subline(&p1, &p2, &e(2)), Err(Error::NotCollinear)));
        assert!(matches!(g.baer_subline(&p1, &p1, &p3), Err(Error::EqualPoints)));
        let p4 = f.vec_add(&e(0), &f.vec_scale(f.xi(), &e(1)));
        let sub2 = g.baer_subline(&p1, &p2, &p4).unwrap();
        assert_eq!(sub2.len(), 8);
        assert!(sub2.contains(&g.point_index(&p4)));
    }
}
