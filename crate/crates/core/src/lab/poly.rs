//! Dense univariate polynomials over the field context, low degree first.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Fe>);

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Fe) -> Self {
        Poly::new(vec![c])
    }

    /// x + c.
    pub fn linear(c: Fe) -> Self {
        Poly::new(vec![c, Fe::ONE])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.0.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.0.last().copied().unwrap_or(Fe::ZERO)
    }
}

impl FieldCtx {
    pub fn poly_add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        Poly::new((0..n).map(|i| self.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn poly_sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        Poly::new((0..n).map(|i| self.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn poly_scale(&self, c: Fe, a: &Poly) -> Poly {
        Poly::new(a.0.iter().map(|&x| self.mul(c, x)).collect())
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Poly::new(out)
    }

    pub fn poly_eval(&self, a: &Poly, x: Fe) -> Fe {
        a.0.iter().rev().fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn poly_monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        self.poly_scale(self.inv(a.lead()), a)
    }

    pub fn poly_derivative(&self, a: &Poly) -> Poly {
        Poly::new(
            a.0.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul(self.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn poly_divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.degree().expect("division by the zero polynomial");
        let inv_lead = self.inv(b.lead());
        let mut r = a.0.clone();
        let mut q = vec![Fe::ZERO; a.0.len().saturating_sub(db)];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = self.mul(r[r.len() - 1], inv_lead);
            q[k] = c;
            for (j, &bj) in b.0.iter().enumerate() {
                r[k + j] = self.sub(r[k + j], self.mul(c, bj));
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > db {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn poly_gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.poly_divrem(&x, &y).1;
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    /// Exact square root of a monic polynomial of even degree, if one exists.
    pub fn poly_sqrt(&self, a: &Poly) -> Option<Poly> {
        let n = a.degree()?;
        if n % 2 == 1 || a.lead() != Fe::ONE {
            return None;
        }
        let k = n / 2;
        let two_inv = self.inv(self.from_int(2));
        let mut s = vec![Fe::ZERO; k + 1];
        s[k] = Fe::ONE;
        for i in 1..=k {
            let mut acc = a.coeff(n - i);
            for j in 1..i {
                acc = self.sub(acc, self.mul(s[k - j], s[k - (i - j)]));
            }
            s[k - i] = self.mul(acc, two_inv);
        }
        let root = Poly::new(s);
        (self.poly_mul(&root, &root) == *a).then_some(root)
    }

    /// Roots in F_q with multiplicity, by trial division.
    pub fn poly_roots_fq(&self, a: &Poly) -> Vec<(Fe, usize)> {
        let mut out = Vec::new();
        if a.is_zero() {
            return out;
        }
        for &x in self.subfield() {
            let lin = Poly::linear(self.neg(x));
            let mut cur = a.clone();
            let mut mult = 0;
            loop {
                let (quo, rem) = self.poly_divrem(&cur, &lin);
                if !rem.is_zero() || cur.degree() == Some(0) {
                    break;
                }
                mult += 1;
                cur = quo;
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubicClass {
    Multiple,
    OneRoot,
    ZeroOrThree,
}

/// b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd for ax³ + bx² + cx + d.
pub fn cubic_discriminant(f: &FieldCtx, p: &Poly) -> Result<Fe> {
    if p.degree() != Some(3) {
        return Err(Error::NotCubic);
    }
    let (d, c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2), p.coeff(3));
    let m = |xs: &[Fe]| xs.iter().fold(Fe::ONE, |acc, &x| f.mul(acc, x));
    let k = |n: i64| f.from_int(n);
    let terms = [
        m(&[b, b, c, c]),
        f.neg(m(&[k(4), a, c, c, c])),
        f.neg(m(&[k(4), b, b, b, d])),
        f.neg(m(&[k(27), a, a, d, d])),
        m(&[k(18), a, b, c, d]),
    ];
    Ok(f.sum(terms))
}

/// Classification of a cubic over F_q by the quadratic character of its discriminant.
pub fn discriminant_classify(f: &FieldCtx, p: &Poly) -> Result<CubicClass> {
    if p.coeffs().iter().any(|&c| !f.in_subfield(c)) {
        return Err(Error::NotInSubfield);
    }
    let disc = cubic_discriminant(f, p)?;
    Ok(match f.quadratic_character(disc)? {
        0 => CubicClass::Multiple,
        -1 => CubicClass::OneRoot,
        _ => CubicClass::ZeroOrThree,
    })
}

/// The class read off from the F_q-roots of `p`.
pub fn brute_force_class(f: &FieldCtx, p: &Poly) -> Result<CubicClass> {
    if p.degree() != Some(3) {
        return Err(Error::NotCubic);
    }
    let roots = f.poly_roots_fq(p);
    let with_mult: usize = roots.iter().map(|r| r.1).sum();
    Ok(if roots.iter().any(|r| r.1 > 1) {
        CubicClass::Multiple
    } else if with_mult == 1 {
        CubicClass::OneRoot
    } else {
        CubicClass::ZeroOrThree
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilOutcome {
    pub degree: usize,
    pub points: u64,
    pub irreducible: bool,
    /// `None` when the curve is reducible and the bound is not asserted.
    pub bound_ok: Option<bool>,
}

/// Affine points of y² = g(x) over F_q and, when y² − g is absolutely
/// irreducible, whether (N − q)² ≤ (deg − 1)²q.
pub fn weil_check(f: &FieldCtx, g: &Poly) -> Result<WeilOutcome> {
    if g.coeffs().iter().any(|&c| !f.in_subfield(c)) {
        return Err(Error::NotInSubfield);
    }
    let degree = g.degree().ok_or(Error::BadParams("zero polynomial"))?;
    let mut points = 0u64;
    for &x in f.subfield() {
        points += (1 + f.quadratic_character(f.poly_eval(g, x))?) as u64;
    }
    let irreducible = degree > 0 && f.poly_sqrt(&f.poly_monic(g)).is_none();
    let q = f.q() as i128;
    let bound_ok = irreducible.then(|| {
        let dev = points as i128 - q;
        let dm1 = degree as i128 - 1;
        dev * dev <= dm1 * dm1 * q
    });
    Ok(WeilOutcome {
        degree,
        points,
        irreducible,
        bound_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fq(f: &FieldCtx, xs: &[i64]) -> Poly {
        Poly::new(xs.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let f = FieldCtx::from_q(7).unwrap();
        let a = fq(&f, &[-1, 0, 1]);
        let b = fq(&f, &[-1, 1]);
        let (q, r) = f.poly_divrem(&a, &b);
        assert_eq!(q, fq(&f, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.poly_gcd(&a, &fq(&f, &[1, 1])), fq(&f, &[1, 1]));
        assert_eq!(f.poly_gcd(&Poly::zero(), &Poly::zero()), Poly::zero());
    }

    #[test]
    fn sqrt_detects_squares() {
        let f = FieldCtx::from_q(11).unwrap();
        let h = fq(&f, &[3, 5, 1]);
        let sq = f.poly_mul(&h, &h);
        assert_eq!(f.poly_sqrt(&sq), Some(h));
        assert_eq!(f.poly_sqrt(&fq(&f, &[1, 0, 0, 1])), None);
        assert_eq!(f.poly_sqrt(&fq(&f, &[2, 0, 1])), None);
    }

    #[test]
    fn cubic_examples() {
        let f = FieldCtx::from_q(7).unwrap();
        let p = f.poly_mul(&f.poly_mul(&fq(&f, &[-1, 1]), &fq(&f, &[-1, 1])), &fq(&f, &[-2, 1]));
        assert_eq!(discriminant_classify(&f, &p).unwrap(), CubicClass::Multiple);
        assert!(matches!(discriminant_classify(&f, &fq(&f, &[1, 1])), Err(Error::NotCubic)));
        let f = FieldCtx::from_q(11).unwrap();
        let p = Poly::new(vec![f.neg(f.theta()), Fe::ZERO, Fe::ZERO, Fe::ONE]);
        assert_eq!(f.poly_roots_fq(&p).len(), 1);
        assert_eq!(discriminant_classify(&f, &p).unwrap(), CubicClass::OneRoot);
    }

    #[test]
    fn weil_small_cases() {
        let f = FieldCtx::from_q(7).unwrap();
        let x = fq(&f, &[0, 1]);
        let w = weil_check(&f, &x).unwrap();
        assert_eq!(w.points, 7);
        assert_eq!(w.bound_ok, Some(true));
        let x2 = fq(&f, &[0, 0, 1]);
        let w = weil_check(&f, &x2).unwrap();
        assert!(!w.irreducible);
        assert_eq!(w.bound_ok, None);
        assert_eq!(w.points, 13);
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(a in prop::collection::vec(0i64..13, 0..9), b in prop::collection::vec(0i64..13, 1..5)) {
            let f = FieldCtx::from_q(13).unwrap();
            let a = fq(&f, &a);
            let b = fq(&f, &b);
            prop_assume!(!b.is_zero());
            let (q, r) = f.poly_divrem(&a, &b);
            prop_assert_eq!(f.poly_add(&f.poly_mul(&q, &b), &r), a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_both(a in prop::collection::vec(0i64..7, 1..7), b in prop::collection::vec(0i64..7, 1..7)) {
            let f = FieldCtx::from_q(7).unwrap();
            let a = fq(&f, &a);
            let b = fq(&f, &b);
            let g = f.poly_gcd(&a, &b);
            prop_assume!(!g.is_zero());
            prop_assert!(f.poly_divrem(&a, &g).1.is_zero());
            prop_assert!(f.poly_divrem(&b, &g).1.is_zero());
        }
    }
}
