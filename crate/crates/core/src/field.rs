//! Table-driven arithmetic in F_p ⊆ F_q ⊆ F_{q²}.
//!
//! Elements of F_{q²} are polynomials of degree < 2m over F_p, stored as the
//! integer whose base-p digits are the coefficients (little-endian by degree).
//! F_q is not a separate type: it is the fixed field of x ↦ x^q.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest q accepted by [`FieldCtx::new`]; the add and mul tables grow like q⁴.
pub const MAX_Q: u64 = 49;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    size: u32,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    conj: Vec<u16>,
    log: Vec<u32>,
    exp: Vec<u16>,
    xi: Fe,
    theta: Fe,
    i_elem: Fe,
    subfield: Vec<Fe>,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic-or-not polynomial `b` over F_p.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % p;
            let shift = r.len() - 1 - db;
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p * p - c * bk % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut x: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut g = digits(low, p, deg);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, f, p);
    r.resize(f.len() - 1, 0);
    r
}

impl FieldCtx {
    /// Builds F_{q²} for q = p^m using the lexicographically least monic
    /// irreducible polynomial of degree 2m (coefficients compared from the top).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::BadCharacteristic(p));
        }
        if m == 0 {
            return Err(Error::FieldTooSmall(1));
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 < 7 {
            return Err(Error::FieldTooSmall(q64));
        }
        if q64 > MAX_Q {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let size = q * q;
        let n = 2 * m as usize;

        let modulus = (0..size)
            .map(|low| {
                let mut f = digits(low, p, n);
                f.push(1);
                f
            })
            .find(|f| f[0] != 0 && is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");

        let order = size - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut xi = 0;
        for cand in 2..size {
            let g = digits(cand, p, n);
            let mut cur = digits(1, p, n);
            let mut powers = Vec::with_capacity(order as usize);
            let mut k = 0;
            loop {
                powers.push(undigits(&cur, p) as u16);
                cur = mul_mod(&cur, &g, &modulus, p);
                k += 1;
                if undigits(&cur, p) == 1 || k > order {
                    break;
                }
            }
            if k == order {
                xi = cand;
                exp = powers;
                break;
            }
        }
        assert!(xi != 0, "multiplicative group of a finite field is cyclic");

        let mut log = vec![u32::MAX; size as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }

        let s = size as usize;
        let mut add = vec![0u16; s * s];
        let mut mul = vec![0u16; s * s];
        let digit_table: Vec<Vec<u32>> = (0..size).map(|x| digits(x, p, n)).collect();
        for a in 0..s {
            for b in 0..s {
                let sum: Vec<u32> = digit_table[a]
                    .iter()
                    .zip(&digit_table[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * s + b] = undigits(&sum, p) as u16;
                if a != 0 && b != 0 {
                    let e = (log[a] + log[b]) % order;
                    mul[a * s + b] = exp[e as usize];
                }
            }
        }
        let neg: Vec<u16> = (0..s)
            .map(|a| {
                let d: Vec<u32> = digit_table[a].iter().map(|&x| (p - x) % p).collect();
                undigits(&d, p) as u16
            })
            .collect();
        let inv: Vec<u16> = (0..s)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[((order - log[a]) % order) as usize]
                }
            })
            .collect();
        let conj: Vec<u16> = (0..s)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[((log[a] as u64 * q as u64) % order as u64) as usize]
                }
            })
            .collect();
        let subfield: Vec<Fe> = (0..s)
            .filter(|&a| conj[a] as usize == a)
            .map(|a| Fe(a as u16))
            .collect();

        let theta = Fe(exp[(q + 1) as usize % order as usize]);
        let i_elem = Fe(exp[q.div_ceil(2) as usize]);

        Ok(FieldCtx {
            p,
            m,
            q,
            size,
            modulus,
            add,
            mul,
            neg,
            inv,
            conj,
            log,
            exp,
            xi: Fe(xi as u16),
            theta,
            i_elem,
            subfield,
        })
    }

    /// Convenience constructor from q itself.
    pub fn from_q(q: u64) -> Result<Self> {
        let (p, m) = split_prime_power(q).ok_or(Error::BadCharacteristic(q as u32))?;
        Self::new(p, m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Number of elements of F_{q²}.
    pub fn size(&self) -> u32 {
        self.size
    }
    /// d = gcd(3, q+1).
    pub fn d(&self) -> u32 {
        if (self.q + 1).is_multiple_of(3) {
            3
        } else {
            1
        }
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn xi(&self) -> Fe {
        self.xi
    }
    pub fn theta(&self) -> Fe {
        self.theta
    }
    pub fn i_elem(&self) -> Fe {
        self.i_elem
    }
    /// The elements of F_q in increasing encoding order.
    pub fn subfield(&self) -> &[Fe] {
        &self.subfield
    }
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(|x| Fe(x as u16))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.size as usize + b.0 as usize])
    }
    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.0 as usize * self.size as usize + b.0 as usize])
    }
    /// Multiplicative inverse; 0 maps to 0.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        Fe(self.inv[a.0 as usize])
    }
    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }
    #[inline]
    pub fn conj(&self, a: Fe) -> Fe {
        Fe(self.conj[a.0 as usize])
    }
    #[inline]
    pub fn norm(&self, a: Fe) -> Fe {
        self.mul(a, self.conj(a))
    }
    #[inline]
    pub fn trace(&self, a: Fe) -> Fe {
        self.add(a, self.conj(a))
    }
    #[inline]
    pub fn in_subfield(&self, a: Fe) -> bool {
        self.conj(a) == a
    }

    /// Discrete logarithm to base xi; `None` at 0.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }
    pub fn xi_pow(&self, e: i64) -> Fe {
        let order = (self.size - 1) as i64;
        Fe(self.exp[e.rem_euclid(order) as usize])
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (e % order)) % order) as usize])
    }

    /// Image of an integer under Z → F_p.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// Cube test x^{(q²−1)/gcd(3,q²−1)} = 1.
    pub fn is_cube(&self, x: Fe) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroCube);
        }
        let order = (self.size - 1) as u64;
        let g = if order.is_multiple_of(3) { 3 } else { 1 };
        Ok(self.pow(x, order / g) == Fe::ONE)
    }

    /// Legendre-type character on F_q: +1 on nonzero squares, −1 on nonsquares, 0 at 0.
    pub fn quadratic_character(&self, x: Fe) -> Result<i8> {
        if !self.in_subfield(x) {
            return Err(Error::NotInSubfield);
        }
        if x.is_zero() {
            return Ok(0);
        }
        let e = self.pow(x, ((self.q - 1) / 2) as u64);
        Ok(if e == Fe::ONE { 1 } else { -1 })
    }

    /// A square root in F_{q²} (every element of F_q has one there).
    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        if x.is_zero() {
            return Some(Fe::ZERO);
        }
        let l = self.log[x.0 as usize];
        l.is_multiple_of(2).then(|| Fe(self.exp[(l / 2) as usize]))
    }

    /// Coefficient vector (little-endian by degree) of an element.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        digits(x.0 as u32, self.p, 2 * self.m as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let mut d: Vec<u32> = c.iter().map(|x| x % self.p).collect();
        d.resize(2 * self.m as usize, 0);
        Fe(undigits(&d, self.p) as u16)
    }

    /// Writes x = a + b·i with a, b ∈ F_q.
    pub fn split_i(&self, x: Fe) -> (Fe, Fe) {
        let two = self.from_int(2);
        let a = self.div(self.trace(x), two);
        let b = self.div(self.sub(x, self.conj(x)), self.mul(two, self.i_elem));
        (a, b)
    }
    pub fn join_i(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.mul(b, self.i_elem))
    }
}

/// Splits q = p^m with p prime; `None` if q is not a prime power.
pub fn split_prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut m = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p as u32, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldCtx::new(2, 3), Err(Error::BadCharacteristic(2))));
        assert!(matches!(FieldCtx::new(9, 1), Err(Error::BadCharacteristic(9))));
        assert!(matches!(FieldCtx::new(5, 1), Err(Error::FieldTooSmall(5))));
        assert!(matches!(FieldCtx::new(3, 1), Err(Error::FieldTooSmall(3))));
        assert!(FieldCtx::new(3, 2).is_ok());
    }

    #[test]
    fn q7_group_order_and_trace() {
        let f = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f.size(), 49);
        assert_eq!(f.elements().filter(|x| !x.is_zero()).count(), 48);
        let t = f.trace(f.xi());
        assert!(f.in_subfield(t));
        assert_eq!(t, f.add(f.xi(), f.pow(f.xi(), 7)));
    }

    #[test]
    fn q9_subfield_has_nine_elements() {
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.subfield().len(), 9);
        assert_eq!(f.modulus().len(), 5);
    }

    #[test]
    fn q11_theta_order() {
        let f = FieldCtx::new(11, 1).unwrap();
        assert_eq!(f.theta(), f.pow(f.xi(), 12));
        let mut x = f.theta();
        let mut k = 1;
        while x != Fe::ONE {
            x = f.mul(x, f.theta());
            k += 1;
        }
        assert_eq!(k, 10);
    }

    #[test]
    fn q7_cube_count() {
        let f = FieldCtx::new(7, 1).unwrap();
        let cubes = f.elements().filter(|x| !x.is_zero()).filter(|&x| f.is_cube(x).unwrap()).count();
        assert_eq!(cubes, 16);
        assert!(f.is_cube(Fe::ONE).unwrap());
        assert!(f.is_cube(Fe::ZERO).is_err());
    }

    #[test]
    fn generator_invariants() {
        for (p, m) in [(7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = FieldCtx::new(p, m).unwrap();
            let q = f.q() as u64;
            let mut seen = std::collections::HashSet::new();
            let mut x = Fe::ONE;
            for _ in 0..q * q - 1 {
                seen.insert(x);
                x = f.mul(x, f.xi());
            }
            assert_eq!(seen.len() as u64, q * q - 1);
            assert_eq!(f.mul(f.i_elem(), f.i_elem()), f.theta());
            assert!(!f.in_subfield(f.i_elem()));
            assert_eq!(f.quadratic_character(f.theta()).unwrap(), -1);
            let sq = f.subfield().iter().filter(|&&x| f.quadratic_character(x).unwrap() == 1).count();
            assert_eq!(sq as u64, (q - 1) / 2);
            let ni = f.norm(f.i_elem());
            assert!(f.in_subfield(ni));
            assert_eq!(f.mul(ni, ni), f.pow(f.theta(), q + 1));
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = FieldCtx::new(3, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)), x);
            let (a, b) = f.split_i(x);
            assert!(f.in_subfield(a) && f.in_subfield(b));
            assert_eq!(f.join_i(a, b), x);
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(split_prime_power(9), Some((3, 2)));
        assert_eq!(split_prime_power(13), Some((13, 1)));
        assert_eq!(split_prime_power(12), None);
    }
}
