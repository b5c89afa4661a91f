//! Closed-form bounds evaluated exactly, and the ℓ-criterion by enumeration.

use std::cmp::Ordering;

use num_rational::Ratio;
use serde::Serialize;

use crate::action::ActionCtx;
use crate::error::{Error, Result};
use crate::group;
use crate::saxl::Census;

type Q = Ratio<i128>;

/// a + b·√n with rational a, b.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Q,
    pub b: Q,
    pub n: u64,
}

impl Surd {
    pub fn new(a: Q, b: Q, n: u64) -> Self {
        Surd { a, b, n }
    }

    pub fn to_f64(self) -> f64 {
        let f = |r: Q| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * (self.n as f64).sqrt()
    }

    pub fn signum(self) -> Ordering {
        let zero = Q::from_integer(0);
        let (sa, sb) = (self.a.cmp(&zero), self.b.cmp(&zero));
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // a and b have opposite signs: compare a² with b²n.
        let lhs = self.a * self.a;
        let rhs = self.b * self.b * Q::from_integer(self.n as i128);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Ordering of the surd against an integer.
    pub fn cmp_int(self, k: i128) -> Ordering {
        Surd::new(self.a - Q::from_integer(k), self.b, self.n).signum()
    }
}

impl Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Surd", 4)?;
        st.serialize_field("rational", &self.a.to_string())?;
        st.serialize_field("sqrt_coefficient", &self.b.to_string())?;
        st.serialize_field("radicand", &self.n)?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

fn d_of(q: u64) -> i128 {
    if (q + 1).is_multiple_of(3) {
        3
    } else {
        1
    }
}

fn r(n: i128, m: i128) -> Q {
    Q::new(n, m)
}

/// c₅q⁵ + c₄q⁴ + s·q⁴√q.
fn quintic(q: u64, c5: Q, c4: Q, s: Q) -> Surd {
    let q = q as i128;
    let q4 = Q::from_integer(q.pow(4));
    Surd::new(c5 * Q::from_integer(q.pow(5)) + c4 * q4, s * q4, q as u64)
}

/// Lower bound for |Γ_nr(α) ∩ Γ_nr(α′)| from the asymptotic estimate.
pub fn intersection_lower_bound(q: u64) -> Surd {
    if d_of(q) == 1 {
        quintic(q, r(4, 9), -r(221555, 10000), -r(1, 3))
    } else {
        quintic(q, r(4, 27), -r(168372, 10000), -r(31, 27))
    }
}

/// Lower bound for Σ_{t∈I∖I′}|E(t)|.
pub fn a_lower_bound(q: u64) -> Surd {
    if d_of(q) == 1 {
        quintic(q, r(1, 1), -r(10355, 10000), Q::from_integer(0))
    } else {
        quintic(q, r(1, 3), -r(3342, 10000), Q::from_integer(0))
    }
}

pub fn b_upper_bound(q: u64) -> Surd {
    if d_of(q) == 1 {
        quintic(q, r(5, 9), r(1525, 100), r(1, 3))
    } else {
        quintic(q, r(5, 27), r(1074, 100), r(31, 27))
    }
}

pub fn c_upper_bound(q: u64) -> Surd {
    let c = if d_of(q) == 1 { r(385, 100) } else { r(326, 100) };
    quintic(q, Q::from_integer(0), c, Q::from_integer(0))
}

pub fn d_upper_bound(q: u64) -> Surd {
    let c = if d_of(q) == 1 { r(202, 100) } else { r(2503, 1000) };
    quintic(q, Q::from_integer(0), c, Q::from_integer(0))
}

/// √q ≥ 15d.
pub fn asymptotic_regime(q: u64) -> bool {
    let d = d_of(q) as u64;
    q >= 225 * d * d
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Bound on the regular suborbits fixed by an order-r field-type subgroup, q = p^m.
pub fn nprime_bound(p: u32, m: u32, r: u32) -> Result<Q> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadCharacteristic(p));
    }
    if !is_prime(r) {
        return Err(Error::NotPrime(r));
    }
    if !(2 * m).is_multiple_of(r) {
        return Err(Error::BadDegree(r));
    }
    let q = (p as i128).pow(m);
    let d = d_of(q as u64);
    if r == 2 {
        return Ok(if d == 1 {
            Q::from_integer(q) + r_half(5)
        } else {
            Q::new(q, 2) + Q::new(1, 3)
        });
    }
    let q1_sq = (p as i128).pow(2 * m / r);
    Ok(Q::new(q1_sq, d) + Q::new(3, 2 * d))
}

fn r_half(n: i128) -> Q {
    Q::new(n, 2)
}

/// |Γ_nr(Ω[0]) ∩ Γ_nr(Ω[rep])|.
pub fn gamma_nr_intersection(action: &ActionCtx, census: &Census, rep: usize) -> Result<u64> {
    let f = action.field();
    let perm = group::point_perm(&action.geom, &group::inv(f, action.transversal(rep)));
    let mut buf = Vec::with_capacity(action.plane_len());
    let mut n = 0;
    for i in 0..action.len() {
        if i == 0 || i == rep || census.is_regular(i) {
            continue;
        }
        let back = action.image_by_perm(i, &perm, &mut buf)? as usize;
        n += !census.is_regular(back) as u64;
    }
    Ok(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct EllReport {
    pub q: u32,
    pub d: u32,
    pub omega: u64,
    pub gamma_r: u64,
    pub gamma_nr: u64,
    pub diagonal: u64,
    pub min_intersection: u64,
    pub argmin: u32,
    pub ell: i64,
    pub positive: bool,
    pub asymptotic_regime: bool,
    pub lower_bound: Surd,
    pub lower_bound_holds: bool,
}

/// ℓ = min_{α′} |Γ_nr(α) ∩ Γ_nr(α′)| − |Ω| + 2|Γ_r(α)| over the suborbit representatives.
pub fn ell_criterion(action: &ActionCtx, census: &Census) -> Result<EllReport> {
    let omega = census.omega_size as u64;
    let gamma_nr = omega - 1 - census.gamma_r;
    let diagonal = gamma_nr_intersection(action, census, 0)?;
    let mut best: Option<(u64, u32)> = None;
    for rec in &census.records {
        let v = gamma_nr_intersection(action, census, rec.rep as usize)?;
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, rec.rep));
        }
    }
    let (min_intersection, argmin) = best.ok_or(Error::Degenerate("no suborbits"))?;
    let ell = min_intersection as i64 - omega as i64 + 2 * census.gamma_r as i64;
    let q = census.q as u64;
    let lower_bound = intersection_lower_bound(q);
    Ok(EllReport {
        q: census.q,
        d: census.d,
        omega,
        gamma_r: census.gamma_r,
        gamma_nr,
        diagonal,
        min_intersection,
        argmin,
        ell,
        positive: ell > 0,
        asymptotic_regime: asymptotic_regime(q),
        lower_bound,
        lower_bound_holds: lower_bound.cmp_int(min_intersection as i128) != Ordering::Greater,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nprime_values() {
        assert_eq!(nprime_bound(7, 2, 2).unwrap(), Q::new(103, 2));
        assert_eq!(nprime_bound(7, 3, 3).unwrap(), Q::new(49, 1) + Q::new(3, 2));
        assert_eq!(nprime_bound(5, 3, 3).unwrap(), Q::new(25, 3) + Q::new(1, 2));
        assert_eq!(nprime_bound(11, 1, 2).unwrap(), Q::new(11, 2) + Q::new(1, 3));
        assert!(matches!(nprime_bound(7, 2, 4), Err(Error::NotPrime(4))));
        assert!(matches!(nprime_bound(7, 2, 3), Err(Error::BadDegree(3))));
        assert!(matches!(nprime_bound(9, 1, 2), Err(Error::BadCharacteristic(9))));
    }

    #[test]
    fn regime_is_never_desk_scale() {
        assert!(!asymptotic_regime(13));
        assert!(asymptotic_regime(225));
        assert!(!asymptotic_regime(227));
        assert!(asymptotic_regime(2025));
    }

    #[test]
    fn bound_at_q7() {
        let b = intersection_lower_bound(7);
        let exact = 4.0 / 9.0 * 7f64.powi(5) - 7f64.powi(4) * 7f64.sqrt() / 3.0 - 22.1555 * 7f64.powi(4);
        assert!((b.to_f64() - exact).abs() < 1e-6);
        assert_eq!(b.signum(), Ordering::Less);
    }

    proptest! {
        #[test]
        fn surd_sign_matches_float(a in -1000i128..1000, b in -1000i128..1000, n in 2u64..200) {
            let s = Surd::new(Q::from_integer(a), Q::from_integer(b), n);
            let x = s.to_f64();
            prop_assume!(x.abs() > 1e-9);
            let expected = if x > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(s.signum(), expected);
        }
    }
}
