//! 3×3 linear algebra over F_{q²}.

use crate::field::{Fe, FieldCtx};

pub type Vec3 = [Fe; 3];
pub type Mat3 = [[Fe; 3]; 3];

pub const IDENTITY: Mat3 = [
    [Fe::ONE, Fe::ZERO, Fe::ZERO],
    [Fe::ZERO, Fe::ONE, Fe::ZERO],
    [Fe::ZERO, Fe::ZERO, Fe::ONE],
];

impl FieldCtx {
    #[inline]
    pub fn dot(&self, a: &Vec3, b: &Vec3) -> Fe {
        let s = self.add(self.mul(a[0], b[0]), self.mul(a[1], b[1]));
        self.add(s, self.mul(a[2], b[2]))
    }

    /// Row vector times matrix.
    #[inline]
    pub fn vec_mat(&self, v: &Vec3, g: &Mat3) -> Vec3 {
        let mut out = [Fe::ZERO; 3];
        for (j, o) in out.iter_mut().enumerate() {
            let s = self.add(self.mul(v[0], g[0][j]), self.mul(v[1], g[1][j]));
            *o = self.add(s, self.mul(v[2], g[2][j]));
        }
        out
    }

    pub fn vec_add(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        [self.add(a[0], b[0]), self.add(a[1], b[1]), self.add(a[2], b[2])]
    }
    pub fn vec_sub(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        [self.sub(a[0], b[0]), self.sub(a[1], b[1]), self.sub(a[2], b[2])]
    }
    pub fn vec_scale(&self, s: Fe, a: &Vec3) -> Vec3 {
        [self.mul(s, a[0]), self.mul(s, a[1]), self.mul(s, a[2])]
    }
    pub fn vec_conj(&self, a: &Vec3) -> Vec3 {
        [self.conj(a[0]), self.conj(a[1]), self.conj(a[2])]
    }

    pub fn cross(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        [
            self.sub(self.mul(a[1], b[2]), self.mul(a[2], b[1])),
            self.sub(self.mul(a[2], b[0]), self.mul(a[0], b[2])),
            self.sub(self.mul(a[0], b[1]), self.mul(a[1], b[0])),
        ]
    }

    pub fn mat_mul(&self, a: &Mat3, b: &Mat3) -> Mat3 {
        [self.vec_mat(&a[0], b), self.vec_mat(&a[1], b), self.vec_mat(&a[2], b)]
    }

    pub fn mat_scale(&self, s: Fe, a: &Mat3) -> Mat3 {
        [self.vec_scale(s, &a[0]), self.vec_scale(s, &a[1]), self.vec_scale(s, &a[2])]
    }

    pub fn mat_add(&self, a: &Mat3, b: &Mat3) -> Mat3 {
        [self.vec_add(&a[0], &b[0]), self.vec_add(&a[1], &b[1]), self.vec_add(&a[2], &b[2])]
    }

    pub fn transpose(&self, a: &Mat3) -> Mat3 {
        let mut t = [[Fe::ZERO; 3]; 3];
        for (i, row) in a.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                t[j][i] = x;
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self, a: &Mat3) -> Mat3 {
        let t = self.transpose(a);
        [self.vec_conj(&t[0]), self.vec_conj(&t[1]), self.vec_conj(&t[2])]
    }

    pub fn det(&self, a: &Mat3) -> Fe {
        self.dot(&a[0], &self.cross(&a[1], &a[2]))
    }

    /// Classical adjugate, so that a · adj(a) = det(a) · I.
    pub fn adjugate(&self, a: &Mat3) -> Mat3 {
        let c0 = self.cross(&a[1], &a[2]);
        let c1 = self.cross(&a[2], &a[0]);
        let c2 = self.cross(&a[0], &a[1]);
        self.transpose(&[c0, c1, c2])
    }

    pub fn mat_inv(&self, a: &Mat3) -> Option<Mat3> {
        let d = self.det(a);
        (!d.is_zero()).then(|| self.mat_scale(self.inv(d), &self.adjugate(a)))
    }

    /// Scales a nonzero vector so its first nonzero coordinate is 1.
    #[inline]
    pub fn normalize_vec(&self, v: &Vec3) -> Vec3 {
        let lead = if !v[0].is_zero() {
            v[0]
        } else if !v[1].is_zero() {
            v[1]
        } else {
            v[2]
        };
        self.vec_scale(self.inv(lead), v)
    }

    /// Projective normal form: the first nonzero entry of the first nonzero
    /// column becomes 1.
    pub fn normalize_mat(&self, a: &Mat3) -> Mat3 {
        for j in 0..3 {
            for row in a.iter() {
                if !row[j].is_zero() {
                    return self.mat_scale(self.inv(row[j]), a);
                }
            }
        }
        *a
    }

    pub fn mat_pow(&self, a: &Mat3, mut e: u64) -> Mat3 {
        let mut base = *a;
        let mut acc = IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            base = self.mat_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_scalar(&self, a: &Mat3) -> bool {
        let s = a[0][0];
        !s.is_zero()
            && a.iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| if i == j { x == s } else { x.is_zero() }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let f = FieldCtx::new(7, 1).unwrap();
        let x = f.xi();
        let a: Mat3 = [[x, Fe::ONE, Fe::ZERO], [Fe::ZERO, x, f.from_int(3)], [f.from_int(2), Fe::ZERO, Fe::ONE]];
        let inv = f.mat_inv(&a).unwrap();
        assert_eq!(f.mat_mul(&a, &inv), IDENTITY);
        assert_eq!(f.det(&IDENTITY), Fe::ONE);
        let b = f.mat_mul(&a, &a);
        assert_eq!(f.det(&b), f.mul(f.det(&a), f.det(&a)));
        assert!(f.is_scalar(&f.normalize_mat(&f.mat_scale(x, &IDENTITY))));
    }
}
