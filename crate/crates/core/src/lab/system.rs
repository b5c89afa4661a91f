//! The determinant systems h(a,b,c) = f(a,c)b − g(a,c) attached to g₁ and g₂.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::matrix::Mat3;

use super::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    G1 { e: Fe, t: Fe },
    G2 { s: Fe },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PolySystem {
    pub gen: Generator,
    pub m1: Fe,
    pub n1: Fe,
    pub m2: Fe,
    pub n2: Fe,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LambdaCounts {
    pub l1: usize,
    pub l2: usize,
    pub l11: usize,
    pub l12: usize,
    pub l12_prime: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemReport {
    pub system: PolySystem,
    pub lambda: LambdaCounts,
    pub identity_holds: bool,
    /// a₀ ∈ F_q at which f(a₀, c) and g(a₀, c) share a factor.
    pub non_coprime: Vec<Fe>,
}

impl PolySystem {
    pub fn g1(f: &FieldCtx, e: Fe, t: Fe, m: [Fe; 4]) -> Result<Self> {
        let sys = PolySystem {
            gen: Generator::G1 { e, t },
            m1: m[0],
            n1: m[1],
            m2: m[2],
            n2: m[3],
        };
        sys.validate(f)?;
        Ok(sys)
    }

    pub fn g2(f: &FieldCtx, m: [Fe; 4]) -> Result<Self> {
        let s = f.sub(f.mul(m[2], m[1]), f.mul(m[0], m[3]));
        let sys = PolySystem {
            gen: Generator::G2 { s },
            m1: m[0],
            n1: m[1],
            m2: m[2],
            n2: m[3],
        };
        sys.validate(f)?;
        Ok(sys)
    }

    pub fn validate(&self, f: &FieldCtx) -> Result<()> {
        let mut all = vec![self.m1, self.n1, self.m2, self.n2];
        let det = f.sub(f.mul(self.m2, self.n1), f.mul(self.m1, self.n2));
        match self.gen {
            Generator::G1 { e, t } => {
                all.extend([e, t]);
                if t.is_zero() {
                    return Err(Error::BadParams("t must be nonzero"));
                }
                if det != Fe::ONE {
                    return Err(Error::BadParams("m2*n1 - m1*n2 must be 1"));
                }
            }
            Generator::G2 { s } => {
                all.push(s);
                if s.is_zero() {
                    return Err(Error::BadParams("s must be nonzero"));
                }
                if det != s {
                    return Err(Error::BadParams("m2*n1 - m1*n2 must equal s"));
                }
            }
        }
        if all.iter().any(|&x| !f.in_subfield(x)) {
            return Err(Error::NotInSubfield);
        }
        Ok(())
    }

    /// A uniformly drawn valid parameter tuple.
    pub fn sample<R: Rng>(f: &FieldCtx, first: bool, rng: &mut R) -> Self {
        let fq = f.subfield();
        let mut pick = || fq[rng.random_range(0..fq.len())];
        loop {
            let m = [pick(), pick(), pick(), pick()];
            let built = if first {
                let (e, t) = (pick(), pick());
                PolySystem::g1(f, e, t, m)
            } else {
                PolySystem::g2(f, m)
            };
            if let Ok(sys) = built {
                return sys;
            }
        }
    }

    /// (g_A, g_B) with g = g_A + g_B·i.
    pub fn parts(&self, f: &FieldCtx) -> (Mat3, Mat3) {
        let (z, one) = (Fe::ZERO, Fe::ONE);
        match self.gen {
            Generator::G1 { e, t } => (
                [[z, one, self.m1], [e, t, z], [t, z, self.m2]],
                [[z, z, self.n1], [one, z, z], [z, one, self.n2]],
            ),
            Generator::G2 { s } => (
                [[z, one, self.m1], [s, f.neg(one), z], [z, z, self.m2]],
                [[z, z, self.n1], [z, z, z], [one, s, self.n2]],
            ),
        }
    }

    /// A = a(g_A E_B + g_B E_A) + (g_A E_A + θ g_B E_B) for [1, −b+i, −c+i] = E_A + E_B i.
    pub fn matrix_a(&self, f: &FieldCtx, a: Fe, b: Fe, c: Fe) -> Mat3 {
        let (ga, gb) = self.parts(f);
        let ea = [Fe::ONE, f.neg(b), f.neg(c)];
        let eb = [Fe::ZERO, Fe::ONE, Fe::ONE];
        let th = f.theta();
        let mut out = [[Fe::ZERO; 3]; 3];
        for r in 0..3 {
            for col in 0..3 {
                let x = f.add(f.mul(ga[r][col], eb[col]), f.mul(gb[r][col], ea[col]));
                let y = f.add(f.mul(ga[r][col], ea[col]), f.mul(th, f.mul(gb[r][col], eb[col])));
                out[r][col] = f.add(f.mul(a, x), y);
            }
        }
        out
    }

    /// h(a,b,c) = det A.
    pub fn h(&self, f: &FieldCtx, a: Fe, b: Fe, c: Fe) -> Fe {
        f.det(&self.matrix_a(f, a, b, c))
    }

    /// (am + θn) − (m + an)c.
    fn bracket(&self, f: &FieldCtx, a: Fe, m: Fe, n: Fe) -> Poly {
        let th = f.theta();
        Poly::new(vec![
            f.add(f.mul(a, m), f.mul(th, n)),
            f.neg(f.add(m, f.mul(a, n))),
        ])
    }

    /// f(a, ·) and g(a, ·) as polynomials in c.
    pub fn fg(&self, f: &FieldCtx, a: Fe) -> (Poly, Poly) {
        let th = f.theta();
        let x1 = self.bracket(f, a, self.m1, self.n1);
        let x2 = self.bracket(f, a, self.m2, self.n2);
        match self.gen {
            Generator::G1 { e, t } => {
                let ea = f.add(e, a);
                let big_a = f.poly_scale(ea, &x2);
                let big_b = f.poly_scale(t, &x1);
                let big_c = f.poly_scale(ea, &x1);
                let ff = f.poly_sub(&f.poly_add(&big_a, &f.poly_scale(t, &big_b)), &f.poly_scale(a, &big_c));
                let gg = f.poly_sub(
                    &f.poly_add(&f.poly_scale(a, &big_a), &f.poly_scale(f.mul(a, t), &big_b)),
                    &f.poly_scale(th, &big_c),
                );
                (ff, gg)
            }
            Generator::G2 { s } => {
                let big_a = f.poly_scale(s, &x2);
                let big_b = f.poly_scale(a, &x1);
                let big_c = f.poly_scale(s, &x1);
                let ff = f.poly_sub(&f.poly_sub(&big_a, &big_b), &f.poly_scale(f.mul(a, s), &big_c));
                let gg = f.poly_sub(
                    &f.poly_sub(&f.poly_scale(a, &big_a), &f.poly_scale(a, &big_b)),
                    &f.poly_scale(f.mul(th, s), &big_c),
                );
                (ff, gg)
            }
        }
    }

    /// h′(a,c,z) = F(z³ + 3zθ) + G(3z² + θ), F = g + fc, G = gc + fθ.
    pub fn h_prime(&self, f: &FieldCtx, fv: Fe, gv: Fe, c: Fe, z: Fe) -> Fe {
        let th = f.theta();
        let three = f.from_int(3);
        let big_f = f.add(gv, f.mul(fv, c));
        let big_g = f.add(f.mul(gv, c), f.mul(fv, th));
        let u = f.add(f.pow(z, 3), f.mul(three, f.mul(z, th)));
        let v = f.add(f.mul(three, f.mul(z, z)), th);
        f.add(f.mul(big_f, u), f.mul(big_g, v))
    }

    /// Exhaustive Λ-set counts, the h = fb − g identity and the coprimality scan.
    pub fn analyse(&self, f: &FieldCtx) -> SystemReport {
        let fq = f.subfield();
        let i = f.i_elem();
        let cube_ok = |b: Fe, c: Fe| f.is_cube(f.mul(f.sub(i, b), f.sub(i, c))).expect("i is not in F_q");
        let mut lambda = LambdaCounts::default();
        let mut identity_holds = true;
        let mut non_coprime = Vec::new();
        for &a in fq {
            let (fp, gp) = self.fg(f, a);
            let g = f.poly_gcd(&fp, &gp);
            if g.degree() != Some(0) {
                non_coprime.push(a);
            }
            for &c in fq {
                let fv = f.poly_eval(&fp, c);
                let gv = f.poly_eval(&gp, c);
                for &z in fq {
                    if self.h_prime(f, fv, gv, c, z).is_zero() {
                        lambda.l12_prime += 1;
                    }
                }
                for &b in fq {
                    let h = self.h(f, a, b, c);
                    if h != f.sub(f.mul(fv, b), gv) {
                        identity_holds = false;
                    }
                    if !cube_ok(b, c) {
                        continue;
                    }
                    if fv.is_zero() {
                        if gv.is_zero() {
                            lambda.l2 += 1;
                        }
                    } else if h.is_zero() {
                        lambda.l1 += 1;
                        if f.add(b, c).is_zero() {
                            lambda.l11 += 1;
                        } else {
                            lambda.l12 += 1;
                        }
                    }
                }
            }
        }
        SystemReport {
            system: *self,
            lambda,
            identity_holds,
            non_coprime,
        }
    }
}

/// Discriminant of m(z, μ) = z³ − 3μz² + 3θz − μθ against −3θ·2²·3²·(μ² − θ)².
pub fn m_discriminant(f: &FieldCtx, mu: Fe) -> Result<(Fe, Fe)> {
    let th = f.theta();
    let m = Poly::new(vec![
        f.neg(f.mul(mu, th)),
        f.mul(f.from_int(3), th),
        f.neg(f.mul(f.from_int(3), mu)),
        Fe::ONE,
    ]);
    let disc = super::poly::cubic_discriminant(f, &m)?;
    let w = f.sub(f.mul(mu, mu), th);
    let closed = f.mul(f.mul(f.from_int(-3 * 4 * 9), th), f.mul(w, w));
    Ok((disc, closed))
}
