//! Desk-scale checks of the counting arguments behind the regular-suborbit bounds.

pub mod bounds;
pub mod pairs;
pub mod poly;
pub mod system;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionCtx;
use crate::error::Result;
use crate::field::{Fe, FieldCtx};
use crate::saxl::Census;

use pairs::{Cat, PairContext};
use poly::{CubicClass, Poly};
use system::{Generator, PolySystem, SystemReport};

pub use bounds::{ell_criterion, nprime_bound, EllReport, Surd};
pub use pairs::{all_pairs, enumerate_pair_quantities, Incidence};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Check {
    pub checked: u64,
    pub violations: Vec<String>,
}

impl Check {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub type Checks = BTreeMap<&'static str, Check>;

pub fn all_passed(checks: &Checks) -> bool {
    checks.values().all(Check::passed)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LambdaSummary {
    pub systems: usize,
    pub max_l2_g1: usize,
    pub max_l1: usize,
    pub max_l12: usize,
    pub max_l12_prime: usize,
    /// Systems with Λ₁₂ nonempty.
    pub nonempty_l12: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeilSummary {
    pub sampled: usize,
    pub irreducible: usize,
    pub skipped_reducible: usize,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DiscriminantSummary {
    pub cubics: usize,
    pub by_class: BTreeMap<String, usize>,
    /// Square discriminant split by actual root count.
    pub square_zero_roots: usize,
    pub square_three_roots: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldLab {
    pub q: u32,
    pub d: u32,
    pub seed: u64,
    pub trials: usize,
    pub lambda: LambdaSummary,
    pub weil: WeilSummary,
    pub discriminant: DiscriminantSummary,
    pub m_discriminant_checked: usize,
    pub checks: Checks,
    pub reported: Checks,
}

fn fe(f: &FieldCtx, x: Fe) -> String {
    let c = f.coeffs(x);
    format!("{c:?}")
}

/// Λ-sets over `trials` systems of each generator type.
/// The one-third inequality for Λ₁₂ is asserted only when q ≡ 2 mod 3 and lands in `reported` otherwise.
fn lambda_checks(f: &FieldCtx, seed: u64, trials: usize, checks: &mut Checks, reported: &mut Checks) -> LambdaSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let systems: Vec<PolySystem> = (0..2 * trials).map(|k| PolySystem::sample(f, k % 2 == 0, &mut rng)).collect();
    let reports: Vec<SystemReport> = systems.par_iter().map(|s| s.analyse(f)).collect();
    let q = f.q() as usize;
    let mut sum = LambdaSummary {
        systems: reports.len(),
        ..Default::default()
    };
    for (k, rep) in reports.iter().enumerate() {
        let l = rep.lambda;
        sum.max_l1 = sum.max_l1.max(l.l1);
        sum.max_l12 = sum.max_l12.max(l.l12);
        sum.max_l12_prime = sum.max_l12_prime.max(l.l12_prime);
        sum.nonempty_l12 += (l.l12 > 0) as usize;
        let tag = format!("system {k} ({:?})", rep.system.gen);
        checks
            .entry("h-expansion")
            .or_default()
            .record(rep.identity_holds, || tag.clone());
        let third = if q % 3 == 2 { &mut *checks } else { &mut *reported };
        third
            .entry("lambda12-third")
            .or_default()
            .record(3 * l.l12 <= l.l12_prime, || format!("{tag}: |L12|={} |L12'|={}", l.l12, l.l12_prime));
        match rep.system.gen {
            Generator::G1 { e, .. } => {
                sum.max_l2_g1 = sum.max_l2_g1.max(l.l2);
                checks
                    .entry("lambda2-bound")
                    .or_default()
                    .record(l.l2 <= q, || format!("{tag}: |L2|={}", l.l2));
                let ok = rep.non_coprime.iter().all(|&a| a == f.neg(e));
                checks
                    .entry("coprime")
                    .or_default()
                    .record(ok, || format!("{tag}: shared factor at {:?}", rep.non_coprime));
            }
            Generator::G2 { .. } => {
                checks
                    .entry("lambda2-empty")
                    .or_default()
                    .record(l.l2 == 0, || format!("{tag}: |L2|={}", l.l2));
                checks
                    .entry("coprime")
                    .or_default()
                    .record(rep.non_coprime.is_empty(), || format!("{tag}: shared factor at {:?}", rep.non_coprime));
            }
        }
    }
    sum
}

fn random_poly(f: &FieldCtx, degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let fq = f.subfield();
    let mut c: Vec<Fe> = (0..degree).map(|_| fq[rng.random_range(0..fq.len())]).collect();
    c.push(fq[rng.random_range(1..fq.len())]);
    Poly::new(c)
}

/// Weil bound over random g of degree 1..=12, plus a batch of sextics.
fn weil_checks(f: &FieldCtx, seed: u64, trials: usize, checks: &mut Checks) -> Result<WeilSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5745_494c);
    let mut polys: Vec<Poly> = (0..trials)
        .map(|_| {
            let deg = rng.random_range(1..=12);
            random_poly(f, deg, &mut rng)
        })
        .collect();
    polys.extend((0..trials).map(|_| random_poly(f, 6, &mut rng)));
    let mut sum = WeilSummary::default();
    let check = checks.entry("weil").or_default();
    let q = f.q() as f64;
    for g in &polys {
        let w = poly::weil_check(f, g)?;
        sum.sampled += 1;
        match w.bound_ok {
            Some(ok) => {
                sum.irreducible += 1;
                if w.degree > 1 {
                    let ratio = (w.points as f64 - q).abs() / ((w.degree - 1) as f64 * q.sqrt());
                    sum.max_ratio = sum.max_ratio.max(ratio);
                }
                check.record(ok, || format!("deg {} N={}", w.degree, w.points));
            }
            None => sum.skipped_reducible += 1,
        }
    }
    Ok(sum)
}

/// Every monic cubic over F_q against its brute-force root count.
fn discriminant_checks(f: &FieldCtx, checks: &mut Checks) -> Result<DiscriminantSummary> {
    let fq = f.subfield();
    let mut sum = DiscriminantSummary::default();
    let check = checks.entry("discriminant").or_default();
    for &a0 in fq {
        for &a1 in fq {
            for &a2 in fq {
                let p = Poly::new(vec![a0, a1, a2, Fe::ONE]);
                let class = poly::discriminant_classify(f, &p)?;
                let truth = poly::brute_force_class(f, &p)?;
                sum.cubics += 1;
                let label = match class {
                    CubicClass::Multiple => "multiple",
                    CubicClass::OneRoot => "one-root",
                    CubicClass::ZeroOrThree => "zero-or-three",
                };
                *sum.by_class.entry(label.to_string()).or_insert(0) += 1;
                if class == CubicClass::ZeroOrThree {
                    if f.poly_roots_fq(&p).is_empty() {
                        sum.square_zero_roots += 1;
                    } else {
                        sum.square_three_roots += 1;
                    }
                }
                check.record(class == truth, || {
                    format!("[{}, {}, {}, 1]: {class:?} vs {truth:?}", fe(f, a0), fe(f, a1), fe(f, a2))
                });
            }
        }
    }
    Ok(sum)
}

/// The discriminant of m(z, μ) is a nonzero square for every μ when q ≡ 2 mod 3.
pub fn m_discriminant_checks(f: &FieldCtx, checks: &mut Checks) -> Result<usize> {
    if f.q() % 3 != 2 {
        return Ok(0);
    }
    let check = checks.entry("m-discriminant").or_default();
    for &mu in f.subfield() {
        let (disc, closed) = system::m_discriminant(f, mu)?;
        let ok = disc == closed && f.quadratic_character(disc)? == 1;
        check.record(ok, || format!("mu={}", fe(f, mu)));
    }
    Ok(f.q() as usize)
}

/// Polynomial-system, Weil and discriminant checks over F_q.
pub fn field_lab(f: &FieldCtx, seed: u64, trials: usize) -> Result<FieldLab> {
    let mut checks = Checks::new();
    let mut reported = Checks::new();
    let lambda = lambda_checks(f, seed, trials, &mut checks, &mut reported);
    let weil = weil_checks(f, seed, trials, &mut checks)?;
    let discriminant = discriminant_checks(f, &mut checks)?;
    let m_discriminant_checked = m_discriminant_checks(f, &mut checks)?;
    Ok(FieldLab {
        q: f.q(),
        d: f.d(),
        seed,
        trials,
        lambda,
        weil,
        discriminant,
        m_discriminant_checked,
        checks,
        reported,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairSummary {
    pub rep: u32,
    pub class: Option<crate::saxl::StabClass>,
    pub i_cap: usize,
    pub gamma_nr_cap: u64,
    pub w: u64,
    pub e: u64,
    pub max_i2: usize,
    pub max_ip: usize,
    pub min_e_t: Option<u64>,
    pub precursor_failures: usize,
    pub chain_failures: usize,
    pub product_orders: BTreeMap<usize, usize>,
    pub pair_multiplicity: BTreeMap<String, Vec<u64>>,
    pub n_jkl: BTreeMap<String, u64>,
}

impl From<&PairContext> for PairSummary {
    fn from(c: &PairContext) -> Self {
        PairSummary {
            rep: c.alpha_prime,
            class: c.class,
            i_cap: c.i_cap,
            gamma_nr_cap: c.gamma_nr_cap,
            w: c.w_size,
            e: c.e_by_t,
            max_i2: c.max_i2,
            max_ip: c.max_ip,
            min_e_t: c.min_e_t,
            precursor_failures: c.precursor_failures(),
            chain_failures: c.tallies.iter().filter(|t| !t.chain_first_ok).count(),
            product_orders: c.product_orders.clone(),
            pair_multiplicity: c.pair_multiplicity.clone(),
            n_jkl: c.n_jkl.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub rep: u32,
    pub step: &'static str,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairLab {
    pub q: u32,
    pub reps: usize,
    pub pairs: Vec<PairSummary>,
    /// Steps of the |E(t)| lower-bound chain that fail numerically; reported only.
    pub chain_flags: Vec<ChainStep>,
    pub checks: Checks,
}

/// Pair quantities for every representative, with their asserted properties.
pub fn pair_lab(action: &ActionCtx, census: &Census, max_reps: Option<usize>) -> Result<PairLab> {
    let contexts = all_pairs(action, census, max_reps)?;
    let q = action.q() as usize;
    let (qi, di) = (q as i128, action.d() as i128);
    let mut checks = Checks::new();
    let mut chain_flags = Vec::new();
    for c in &contexts {
        let rep = c.alpha_prime;
        for t in &c.tallies {
            checks
                .entry("commuting-partners")
                .or_default()
                .record(t.i2 <= 1, || format!("rep {rep} pole {}: I'(t,2)={}", t.pole, t.i2));
            checks
                .entry("tangent-partners")
                .or_default()
                .record(t.ip < 3 * q, || format!("rep {rep} pole {}: I'(t,p)={}", t.pole, t.ip));
            checks
                .entry("precursor")
                .or_default()
                .record(t.precursor_holds, || format!("rep {rep} pole {}: |E(t)|={}", t.pole, t.e_t));
        }
        checks
            .entry("common-involutions")
            .or_default()
            .record(c.i_cap <= q + 2, || format!("rep {rep}: |I cap I'|={}", c.i_cap));
        checks
            .entry("e-bookkeeping")
            .or_default()
            .record(c.e_by_t == c.e_by_w, || format!("rep {rep}: {} vs {}", c.e_by_t, c.e_by_w));
        checks
            .entry("w-subset")
            .or_default()
            .record(c.w_in_gamma_nr_cap && c.w_size <= c.gamma_nr_cap, || format!("rep {rep}"));
        let vanishing = [
            (Cat::QPlus, Cat::QMinus),
            (Cat::QMinus, Cat::QPlus),
            (Cat::QPlus, Cat::QPlus),
        ];
        for (j, k) in vanishing {
            let n = c.n(j, k, Cat::One);
            checks.entry("vanishing-cells").or_default().record(n == 0, || {
                format!("rep {rep}: n[{},{},1]={n}", j.label(), k.label())
            });
        }
        if c.tallies.iter().any(|t| !t.chain_first_ok) {
            chain_flags.push(ChainStep {
                rep,
                step: "replace |I cap I'| by q+2",
                lhs: format!("{:?}", c.min_e_t),
                rhs: "q^2(q+1)/d - (q+1)(q+2)/d + ((d-1)q-1)/d I'(t,p)".into(),
            });
        }
        let first_min = c
            .tallies
            .iter()
            .map(|t| pairs::chain_first(qi, di, t.ip))
            .min();
        if let Some(m) = first_min {
            let fin = pairs::chain_final(qi, di);
            if m < fin {
                chain_flags.push(ChainStep {
                    rep,
                    step: "closed-form minimum",
                    lhs: m.to_string(),
                    rhs: fin.to_string(),
                });
            }
        }
    }
    Ok(PairLab {
        q: action.q(),
        reps: contexts.len(),
        pairs: contexts.iter().map(PairSummary::from).collect(),
        chain_flags,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub q: u32,
    pub asymptotic_regime: bool,
    pub intersection_lower: Surd,
    pub a_lower: Surd,
    pub b_upper: Surd,
    pub c_upper: Surd,
    pub d_upper: Surd,
    /// r → n′(r) bound for the primes r dividing 2m.
    pub nprime: BTreeMap<u32, String>,
}

pub fn bounds_report(f: &FieldCtx) -> Result<BoundsReport> {
    let q = f.q() as u64;
    let mut nprime = BTreeMap::new();
    for r in 2..=2 * f.m() {
        if (2 * f.m()).is_multiple_of(r) && (2..r).all(|k| r % k != 0) {
            nprime.insert(r, nprime_bound(f.p(), f.m(), r)?.to_string());
        }
    }
    Ok(BoundsReport {
        q: f.q(),
        asymptotic_regime: bounds::asymptotic_regime(q),
        intersection_lower: bounds::intersection_lower_bound(q),
        a_lower: bounds::a_lower_bound(q),
        b_upper: bounds::b_upper_bound(q),
        c_upper: bounds::c_upper_bound(q),
        d_upper: bounds::d_upper_bound(q),
        nprime,
    })
}
