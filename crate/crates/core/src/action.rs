//! The orbit Ω of the standard subplane, its transversal and the stabilizer M.

use std::collections::{HashMap, HashSet};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::geometry::{point_set_key, BaerSubplane, GeomCtx, GramModel};
use crate::group::{self, Closure, GroupElement};
use crate::matrix::{Mat3, Vec3, IDENTITY};

const MAGIC: &[u8; 8] = b"PSUSAXL\0";
const VERSION: u32 = 1;
const ROOT: u32 = u32::MAX;

/// |Ω| = q²(q³+1)/d.
pub fn predicted_orbit_size(q: u64) -> u64 {
    let d = if (q + 1).is_multiple_of(3) { 3 } else { 1 };
    q * q * (q * q * q + 1) / d
}

/// |M| = q(q²−1).
pub fn stabilizer_order(q: u64) -> u64 {
    q * (q * q - 1)
}

pub struct ActionCtx {
    pub geom: GeomCtx,
    gens: Vec<Mat3>,
    gen_perms: Vec<Vec<u32>>,
    plane_len: usize,
    points: Vec<u32>,
    keys: Vec<u128>,
    index: HashMap<u128, u32>,
    words: Vec<(u32, u8)>,
    transversal: Vec<Mat3>,
    stab: Closure,
    iso_transversal: HashMap<u32, Mat3>,
}

impl ActionCtx {
    pub fn new(geom: GeomCtx) -> Result<Self> {
        let gens = group::compact_generators(&geom);
        Self::with_generators(geom, gens)
    }

    pub fn with_generators(geom: GeomCtx, gens: Vec<Mat3>) -> Result<Self> {
        let f = &geom.field;
        let gens: Vec<Mat3> = gens.iter().map(|g| f.normalize_mat(g)).collect();
        if gens.is_empty() || gens.len() > u8::MAX as usize {
            return Err(Error::BadParams("generator count must be in 1..=255"));
        }
        let gen_perms: Vec<Vec<u32>> = gens.iter().map(|g| group::point_perm(&geom, g)).collect();
        let q = geom.q() as u64;
        let expected = predicted_orbit_size(q) as usize;
        let w0 = geom.standard_subplane();
        let plane_len = w0.points.len();

        let mut ctx = ActionCtx {
            gens,
            gen_perms,
            plane_len,
            points: Vec::with_capacity(expected * plane_len),
            keys: Vec::with_capacity(expected),
            index: HashMap::with_capacity(expected),
            words: Vec::with_capacity(expected),
            transversal: Vec::with_capacity(expected),
            stab: Closure::new(),
            iso_transversal: HashMap::new(),
            geom,
        };
        ctx.push(&w0.points, w0.key, (ROOT, 0), IDENTITY);

        let mut buf = vec![0u32; plane_len];
        let mut head = 0;
        while head < ctx.keys.len() {
            for j in 0..ctx.gens.len() {
                ctx.map_points(head, j, &mut buf);
                let key = point_set_key(&buf);
                match ctx.index.get(&key) {
                    Some(&k) => {
                        if ctx.points(k as usize) != buf.as_slice() {
                            return Err(Error::KeyCollision);
                        }
                    }
                    None => {
                        if ctx.keys.len() == expected {
                            return Err(Error::OrbitOverflow(expected));
                        }
                        let f = &ctx.geom.field;
                        let t = f.normalize_mat(&f.mat_mul(&ctx.transversal[head], &ctx.gens[j]));
                        let pts = buf.clone();
                        ctx.push(&pts, key, (head as u32, j as u8), t);
                    }
                }
            }
            head += 1;
        }
        if ctx.keys.len() != expected {
            return Err(Error::OrbitSize {
                found: ctx.keys.len(),
                expected,
            });
        }
        ctx.recover_stabilizer()?;
        ctx.build_iso_transversal();
        Ok(ctx)
    }

    fn push(&mut self, pts: &[u32], key: u128, word: (u32, u8), t: Mat3) {
        self.index.insert(key, self.keys.len() as u32);
        self.keys.push(key);
        self.points.extend_from_slice(pts);
        self.words.push(word);
        self.transversal.push(t);
    }

    fn map_points(&self, i: usize, gen: usize, out: &mut [u32]) {
        let perm = &self.gen_perms[gen];
        for (o, &p) in out.iter_mut().zip(self.points(i)) {
            *o = perm[p as usize];
        }
        out.sort_unstable();
    }

    fn recover_stabilizer(&mut self) -> Result<()> {
        let q = self.geom.q() as u64;
        let target = stabilizer_order(q) as usize;
        let mut buf = vec![0u32; self.plane_len];
        'outer: for i in 0..self.len() {
            for j in 0..self.gens.len() {
                self.map_points(i, j, &mut buf);
                let k = self.lookup(&buf).ok_or(Error::NotInOrbit)?;
                let f = &self.geom.field;
                let s = f.mat_mul(&f.mat_mul(&self.transversal[i], &self.gens[j]), &f.adjugate(&self.transversal[k as usize]));
                self.stab.add(f, &s, target)?;
                if self.stab.elements.len() == target {
                    break 'outer;
                }
            }
        }
        if self.stab.elements.len() != target {
            return Err(Error::StabilizerOrder {
                found: self.stab.elements.len(),
                expected: target,
            });
        }
        Ok(())
    }

    fn build_iso_transversal(&mut self) {
        if self.geom.model() != GramModel::AntiDiagonal {
            return;
        }
        let e1 = self.geom.point_index(&IDENTITY[0]);
        let mut map = HashMap::new();
        map.insert(e1, IDENTITY);
        let mut frontier = vec![e1];
        while let Some(p) = frontier.pop() {
            let v = self.geom.point_vec(p);
            let m = map[&p];
            for s in &self.stab.gens {
                let img = self.geom.point_index(&self.geom.field.vec_mat(&v, s));
                if let std::collections::hash_map::Entry::Vacant(e) = map.entry(img) {
                    e.insert(group::mul(&self.geom.field, &m, s));
                    frontier.push(img);
                }
            }
        }
        self.iso_transversal = map;
    }

    pub fn field(&self) -> &FieldCtx {
        &self.geom.field
    }
    pub fn q(&self) -> u32 {
        self.geom.q()
    }
    pub fn d(&self) -> u32 {
        self.geom.field.d()
    }
    pub fn len(&self) -> usize {
        self.keys.len()
    }
    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
    pub fn plane_len(&self) -> usize {
        self.plane_len
    }
    pub fn generators(&self) -> &[Mat3] {
        &self.gens
    }

    /// Sorted point indices of Ω[i].
    #[inline]
    pub fn points(&self, i: usize) -> &[u32] {
        &self.points[i * self.plane_len..(i + 1) * self.plane_len]
    }
    pub fn key(&self, i: usize) -> u128 {
        self.keys[i]
    }
    pub fn keys(&self) -> &[u128] {
        &self.keys
    }
    pub fn contains_point(&self, i: usize, p: u32) -> bool {
        self.points(i).binary_search(&p).is_ok()
    }

    /// Index of a sorted point list, if it is in Ω.
    pub fn lookup(&self, sorted: &[u32]) -> Option<u32> {
        let k = *self.index.get(&point_set_key(sorted))?;
        (self.points(k as usize) == sorted).then_some(k)
    }

    pub fn index_of(&self, w: &BaerSubplane) -> Result<u32> {
        self.lookup(&w.points).ok_or(Error::NotInOrbit)
    }

    /// t with Ω[0]^t = Ω[i].
    pub fn transversal(&self, i: usize) -> &Mat3 {
        &self.transversal[i]
    }
    /// (parent, generator) of the breadth-first tree; the root has parent `u32::MAX`.
    pub fn word(&self, i: usize) -> (u32, u8) {
        self.words[i]
    }

    pub fn basis(&self, i: usize) -> [Vec3; 3] {
        let t = &self.transversal[i];
        let f = &self.geom.field;
        [f.vec_mat(&IDENTITY[0], t), f.vec_mat(&IDENTITY[1], t), f.vec_mat(&IDENTITY[2], t)]
    }

    pub fn subplane(&self, i: usize) -> BaerSubplane {
        BaerSubplane {
            basis: self.basis(i),
            points: self.points(i).to_vec(),
            key: self.keys[i],
        }
    }

    /// The stabilizer M of Ω[0], in closure order.
    pub fn stab(&self) -> &[Mat3] {
        &self.stab.elements
    }
    /// The Schreier generators that were needed to reach |M|.
    pub fn stab_gens(&self) -> &[Mat3] {
        &self.stab.gens
    }
    pub fn in_stab(&self, g: &Mat3) -> bool {
        self.stab.contains(&self.geom.field.normalize_mat(g))
    }
    pub fn stab_set(&self) -> &HashSet<Mat3> {
        &self.stab.set
    }

    /// Image of Ω[i] under an arbitrary permutation of points.
    pub fn image_by_perm(&self, i: usize, perm: &[u32], buf: &mut Vec<u32>) -> Result<u32> {
        buf.clear();
        buf.extend(self.points(i).iter().map(|&p| perm[p as usize]));
        buf.sort_unstable();
        self.lookup(buf).ok_or(Error::NotInOrbit)
    }

    /// Image of Ω[i] under a matrix, computed pointwise.
    pub fn image(&self, i: usize, g: &Mat3) -> Result<u32> {
        let f = &self.geom.field;
        let mut buf: Vec<u32> = self
            .points(i)
            .iter()
            .map(|&p| self.geom.point_index(&f.vec_mat(&self.geom.point_vec(p), g)))
            .collect();
        buf.sort_unstable();
        self.lookup(&buf).ok_or(Error::NotInOrbit)
    }

    /// Whether g maps Ω[i] onto itself, via its point permutation.
    pub fn fixes(&self, i: usize, perm: &[u32]) -> bool {
        let pts = self.points(i);
        if pts.binary_search(&perm[pts[0] as usize]).is_err() {
            return false;
        }
        pts.iter().all(|&p| pts.binary_search(&perm[p as usize]).is_ok())
    }

    /// The isotropic points of Ω[0], which M permutes transitively.
    pub fn iso_points_of_base(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.iso_transversal.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// g with Ω[i]^g = Ω[0] and P^g = ⟨e₁⟩.
    pub fn transport_pair(&self, i: usize, p: u32) -> Result<GroupElement> {
        if self.geom.model() != GramModel::AntiDiagonal {
            return Err(Error::WrongGram("anti-diagonal"));
        }
        if !self.geom.is_isotropic(p) || !self.contains_point(i, p) {
            return Err(Error::BadTransportPoint);
        }
        let f = &self.geom.field;
        let t_inv = group::inv(f, &self.transversal[i]);
        let p0 = self.geom.point_index(&f.vec_mat(&self.geom.point_vec(p), &t_inv));
        let m = self.iso_transversal.get(&p0).ok_or(Error::BadTransportPoint)?;
        Ok(group::mul(f, &t_inv, &group::inv(f, m)))
    }

    /// Checks Ω[0]^{tᵢ} = Ω[i] pointwise for the given indices.
    pub fn verify_transversal(&self, indices: impl IntoIterator<Item = usize>) -> Result<()> {
        for i in indices {
            if self.image(0, &self.transversal[i])? as usize != i {
                return Err(Error::NotInOrbit);
            }
        }
        Ok(())
    }

    /// Writes the orbit to a versioned binary file.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let tmp = tempfile::NamedTempFile::new_in(dir)?;
        {
            let mut w = BufWriter::new(tmp.as_file());
            let f = &self.geom.field;
            w.write_all(MAGIC)?;
            for x in [VERSION, f.p(), f.m(), f.d()] {
                w.write_all(&x.to_le_bytes())?;
            }
            w.write_all(&(self.len() as u64).to_le_bytes())?;
            w.write_all(&[gram_byte(self.geom.model())])?;
            w.write_all(&(self.gens.len() as u32).to_le_bytes())?;
            for g in &self.gens {
                write_mat(&mut w, g)?;
            }
            for i in 0..self.len() {
                for v in self.basis(i) {
                    for x in v {
                        w.write_all(&x.0.to_le_bytes())?;
                    }
                }
            }
            for &(parent, gen) in &self.words {
                w.write_all(&parent.to_le_bytes())?;
                w.write_all(&[gen])?;
            }
            w.write_all(&(self.stab.gens.len() as u32).to_le_bytes())?;
            for g in &self.stab.gens {
                write_mat(&mut w, g)?;
            }
            w.flush()?;
        }
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Reads a cache written by [`ActionCtx::save_cache`], replaying the
    /// transversal words and checking each stored basis against them.
    pub fn load_cache(geom: GeomCtx, path: &Path) -> Result<Self> {
        let mut r = BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let f = geom.field.clone();
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        let (p, m, d) = (read_u32(&mut r)?, read_u32(&mut r)?, read_u32(&mut r)?);
        if (p, m, d) != (f.p(), f.m(), f.d()) {
            return Err(Error::Cache("field parameters differ".into()));
        }
        let mut n8 = [0u8; 8];
        r.read_exact(&mut n8)?;
        let n = u64::from_le_bytes(n8) as usize;
        if n as u64 != predicted_orbit_size(f.q() as u64) {
            return Err(Error::Cache("orbit size differs from prediction".into()));
        }
        let mut gb = [0u8; 1];
        r.read_exact(&mut gb)?;
        if gb[0] != gram_byte(geom.model()) {
            return Err(Error::Cache("gram model differs".into()));
        }
        let ng = read_u32(&mut r)? as usize;
        let gens: Vec<Mat3> = (0..ng).map(|_| read_mat(&mut r)).collect::<Result<_>>()?;
        let mut bases = Vec::with_capacity(n);
        for _ in 0..n {
            let m = read_mat(&mut r)?;
            bases.push(m);
        }
        let mut words = Vec::with_capacity(n);
        for _ in 0..n {
            let parent = read_u32(&mut r)?;
            r.read_exact(&mut gb)?;
            words.push((parent, gb[0]));
        }
        let ns = read_u32(&mut r)? as usize;
        let stab_gens: Vec<Mat3> = (0..ns).map(|_| read_mat(&mut r)).collect::<Result<_>>()?;

        let gen_perms: Vec<Vec<u32>> = gens.iter().map(|g| group::point_perm(&geom, g)).collect();
        let w0 = geom.standard_subplane();
        let plane_len = w0.points.len();
        let mut ctx = ActionCtx {
            gens,
            gen_perms,
            plane_len,
            points: Vec::with_capacity(n * plane_len),
            keys: Vec::with_capacity(n),
            index: HashMap::with_capacity(n),
            words: Vec::with_capacity(n),
            transversal: Vec::with_capacity(n),
            stab: Closure::new(),
            iso_transversal: HashMap::new(),
            geom,
        };
        let mut buf = vec![0u32; plane_len];
        for (i, &(parent, gen)) in words.iter().enumerate() {
            let (pts, t) = if parent == ROOT {
                if i != 0 {
                    return Err(Error::Cache("root word out of place".into()));
                }
                (w0.points.clone(), IDENTITY)
            } else {
                if parent as usize >= i || gen as usize >= ctx.gens.len() {
                    return Err(Error::Cache("malformed word".into()));
                }
                ctx.map_points(parent as usize, gen as usize, &mut buf);
                let t = group::mul(&f, &ctx.transversal[parent as usize], &ctx.gens[gen as usize]);
                (buf.clone(), t)
            };
            let key = point_set_key(&pts);
            if ctx.index.contains_key(&key) {
                return Err(Error::Cache("duplicate subplane".into()));
            }
            ctx.push(&pts, key, (parent, gen), t);
            if ctx.basis(i) != bases[i] {
                return Err(Error::Cache(format!("basis {i} disagrees with its word")));
            }
        }
        let target = stabilizer_order(f.q() as u64) as usize;
        for s in &stab_gens {
            if group::act_subplane(&ctx.geom, s, &w0) != w0 {
                return Err(Error::Cache("stored stabilizer generator moves the base subplane".into()));
            }
            ctx.stab.add(&f, s, target)?;
        }
        if ctx.stab.elements.len() != target {
            return Err(Error::StabilizerOrder {
                found: ctx.stab.elements.len(),
                expected: target,
            });
        }
        ctx.build_iso_transversal();
        Ok(ctx)
    }
}

fn gram_byte(m: GramModel) -> u8 {
    match m {
        GramModel::Identity => 0,
        GramModel::AntiDiagonal => 1,
    }
}

fn write_mat(w: &mut impl Write, g: &Mat3) -> Result<()> {
    for row in g {
        for x in row {
            w.write_all(&x.0.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_mat(r: &mut impl Read) -> Result<Mat3> {
    let mut g = [[Fe::ZERO; 3]; 3];
    let mut b = [0u8; 2];
    for row in g.iter_mut() {
        for x in row.iter_mut() {
            r.read_exact(&mut b)?;
            *x = Fe(u16::from_le_bytes(b));
        }
    }
    Ok(g)
}

/// Agreement of the cube criterion for ⟨e₁, b·e₂, c·e₃⟩ with orbit membership.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CubeAgreement {
    pub samples: usize,
    pub members: usize,
    pub literal_agree: usize,
    pub shortcut_agree: usize,
}

/// Identity model only: for every b, c ∈ F_{q²}^*, compares membership of
/// ⟨e₁, b·e₂, c·e₃⟩_{F_q} in Ω with the literal test "bc is a cube" and with
/// the index-d test "bc ∈ ⟨ξ^d⟩".
pub fn cube_criterion_check(action: &ActionCtx) -> Result<CubeAgreement> {
    let geom = &action.geom;
    if geom.model() != GramModel::Identity {
        return Err(Error::WrongGram("identity"));
    }
    let f = &geom.field;
    let d = f.d();
    let mut out = CubeAgreement::default();
    for b in f.elements().skip(1) {
        for c in f.elements().skip(1) {
            let basis = [IDENTITY[0], f.vec_scale(b, &IDENTITY[1]), f.vec_scale(c, &IDENTITY[2])];
            let w = geom.subplane_from_basis(basis)?;
            let member = action.lookup(&w.points).is_some();
            let abc = f.mul(b, c);
            let literal = f.is_cube(abc)?;
            let shortcut = f.log(abc).expect("nonzero").is_multiple_of(d);
            out.samples += 1;
            out.members += member as usize;
            out.literal_agree += (literal == member) as usize;
            out.shortcut_agree += (shortcut == member) as usize;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_sizes() {
        assert_eq!(predicted_orbit_size(7), 16856);
        assert_eq!(predicted_orbit_size(9), 59130);
        assert_eq!(predicted_orbit_size(11), 53724);
        assert_eq!(predicted_orbit_size(13), 371462);
        assert_eq!(stabilizer_order(7), 336);
    }
}
