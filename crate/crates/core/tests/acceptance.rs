//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A FAIL that matches a documented deviation is printed as such and does not
//! change the exit status; any other FAIL exits nonzero.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saxl_core::action::{predicted_orbit_size, ActionCtx};
use saxl_core::field::FieldCtx;
use saxl_core::geometry::{GeomCtx, GramModel};
use saxl_core::group;
use saxl_core::involution::{fixed_isotropic, tau};
use saxl_core::lab::{self, Checks};
use saxl_core::saxl::bg::regular_count_lower_bound;
use saxl_core::saxl::census::{table_k, table_x};
use saxl_core::saxl::{
    base_pair_oracle, constructive_common_neighbor, is_base_pair, regular_count_formula, suborbit_census,
    verify_bg, Census,
};

const SEED: u64 = 20240601;
const ORACLE_PAIRS: usize = 10_000;
const LAB_TRIALS: usize = 200;

#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
    documented: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn deviate(&mut self, what: impl Into<String>) {
        self.documented.push(what.into());
    }
}

fn action_for(q: u64) -> ActionCtx {
    let geom = GeomCtx::new(FieldCtx::from_q(q).expect("valid q"), GramModel::AntiDiagonal);
    ActionCtx::new(geom).expect("orbit enumeration")
}

fn census_block(c: &mut Criterion, q: u64, census: &Census) {
    let expected_x = table_x(q).expect("integral table row");
    let k_ok = census.k == table_k(q);
    let identity = census.regular_by_difference() == census.gamma_r as i64;
    let literal: Option<[u64; 8]> = match q {
        7 => Some([7, 7, 7, 21, 2, 20, 34, 0]),
        11 => Some([3, 3, 6, 19, 2, 18, 24, 1]),
        _ => None,
    };
    if let Some(v) = literal {
        c.check(census.x == v, format!("q={q} x={:?} against the worked example", census.x));
    }
    c.check(k_ok, format!("q={q} k={:?}", census.k));
    c.check(identity, format!("q={q} |Omega|-1-sum x_i|M:K_i| = {}", census.regular_by_difference()));
    if census.x == expected_x {
        c.notes.push(format!("q={q} x={:?}", census.x));
        return;
    }
    let differing: Vec<usize> = (0..8).filter(|&i| census.x[i] != expected_x[i]).collect();
    let swap_only = q % 4 == 1
        && differing == [5, 6]
        && census.x[5] + census.x[6] == expected_x[5] + expected_x[6]
        && k_ok
        && identity;
    let msg = format!("q={q} x={:?} table={:?}", census.x, expected_x);
    if swap_only {
        c.deviate(format!(
            "{msg}: the table's Z2A/Z2B split for q = 1 mod 4 miscounts the Z2A subgroups of D4B; \
             sums, k-vector and the regular identity agree"
        ));
    } else {
        c.check(false, msg);
    }
}

fn involution_laws(c: &mut Criterion, action: &ActionCtx) {
    let geom = &action.geom;
    let f = &geom.field;
    let q = action.q() as usize;
    let non: Vec<u32> = (0..geom.point_count() as u32).filter(|&p| !geom.is_isotropic(p)).collect();
    let invs: Vec<_> = non.iter().map(|&p| tau(geom, &geom.point_vec(p)).expect("pole")).collect();
    let involutory = invs
        .iter()
        .all(|t| group::is_unitary(geom, &t.mat) && !f.is_scalar(&t.mat) && f.is_scalar(&f.mat_mul(&t.mat, &t.mat)));
    c.check(involutory, format!("{} involutions tau_y square to 1", invs.len()));
    let distinct: HashSet<_> = invs.iter().map(|t| t.mat).collect();
    c.check(distinct.len() == non.len(), format!("y -> tau_y injective on {} points", non.len()));

    let in_m: HashSet<_> = action
        .stab()
        .iter()
        .filter(|g| !f.is_scalar(g) && f.is_scalar(&f.mat_mul(g, g)))
        .copied()
        .collect();
    let from_poles: HashSet<_> = action
        .points(0)
        .iter()
        .filter(|&&p| !geom.is_isotropic(p))
        .map(|&p| tau(geom, &geom.point_vec(p)).expect("pole").mat)
        .collect();
    c.check(
        in_m.len() == q * q && in_m == from_poles,
        format!("|I| = {} = q^2 and I = tau(w0 nonisotropic)", in_m.len()),
    );

    let fix_ok = invs.iter().all(|t| fixed_isotropic(geom, &t.mat) == q + 1);
    c.check(fix_ok, "every tau fixes q+1 isotropic points");

    let mut bad = 0usize;
    let mut pairs = 0usize;
    for (a, ta) in invs.iter().enumerate() {
        let ya = geom.point_vec(non[a]);
        for (b, tb) in invs.iter().enumerate().skip(a + 1) {
            let yb = geom.point_vec(non[b]);
            let commute = f.normalize_mat(&f.mat_mul(&ta.mat, &tb.mat)) == f.normalize_mat(&f.mat_mul(&tb.mat, &ta.mat));
            let orth = geom.herm(&ya, &yb).is_zero();
            pairs += 1;
            bad += (commute != orth) as usize;
        }
    }
    c.check(bad == 0, format!("commuting <=> orthogonal on {pairs} pairs ({bad} mismatches)"));
}

fn finder(c: &mut Criterion, action: &ActionCtx, census: &Census) {
    let mut ok = 0;
    for rec in &census.records {
        let rep = rec.rep as usize;
        match constructive_common_neighbor(action, 0, rep) {
            Ok(out) => {
                let w = out.witness as usize;
                let base = is_base_pair(action, 0, w).unwrap_or(false) && is_base_pair(action, rep, w).unwrap_or(false);
                if base {
                    ok += 1;
                } else {
                    c.check(false, format!("rep {rep}: witness {w} is not a base partner"));
                }
            }
            Err(e) => c.check(false, format!("rep {rep}: {e}")),
        }
    }
    c.notes.push(format!("{ok}/{} representatives", census.records.len()));
}

fn oracle(c: &mut Criterion, action: &ActionCtx, census: &Census, rng: &mut ChaCha8Rng) {
    let n = action.len();
    let mut pairs: Vec<(usize, usize)> = census.records.iter().map(|r| (0, r.rep as usize)).collect();
    while pairs.len() < ORACLE_PAIRS + census.records.len() {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i != j {
            pairs.push((i, j));
        }
    }
    let mut agree = 0;
    let mut bases = 0;
    for &(i, j) in &pairs {
        let geo = is_base_pair(action, i, j).expect("distinct");
        let alg = base_pair_oracle(action, i, j).expect("distinct");
        agree += (geo == alg) as usize;
        bases += alg as usize;
    }
    c.check(
        agree == pairs.len(),
        format!("q={} {agree}/{} agree ({bases} bases)", action.q(), pairs.len()),
    );
}

fn lab_checks(c: &mut Criterion, q: u64, checks: &Checks, tags: &[&str]) {
    for tag in tags {
        if let Some(ch) = checks.get(tag) {
            c.check(
                ch.passed(),
                format!("q={q} {tag}: {} checked, {} violations", ch.checked, ch.violations.len()),
            );
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut crit: Vec<Criterion> = (0..9).map(|_| Criterion::default()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    for q in [7u64, 9, 11, 13] {
        let t = Instant::now();
        let action = action_for(q);
        let size = action.len() as u64;
        let known = match q {
            7 => 16856,
            9 => 59130,
            11 => 53724,
            _ => 371462,
        };
        crit[0].check(
            size == predicted_orbit_size(q) && size == known,
            format!("q={q} |Omega|={size} in {:.1?}", t.elapsed()),
        );

        let census = suborbit_census(&action).expect("census");
        census_block(&mut crit[1], q, &census);

        let closed = regular_count_formula(q);
        crit[2].check(
            closed.is_integer() && *closed.numer() == census.gamma_r as i128,
            format!("q={q} |Gamma_r|={} closed form {closed}", census.gamma_r),
        );
        crit[2].check(
            regular_count_lower_bound(q) <= closed && census.gamma_r > 0,
            format!("q={q} above (q^5-q^4)/3d, b(G)=2"),
        );

        if q <= 11 {
            let bg = verify_bg(&action, &census, None).expect("bg run");
            let failures: Vec<u32> = bg.failures().map(|v| v.rep).collect();
            crit[3].check(
                bg.verified,
                format!("q={q} {} representatives, failures {failures:?}", bg.verdicts.len()),
            );
        }

        oracle(&mut crit[4], &action, &census, &mut rng);

        if q == 7 {
            finder(&mut crit[5], &action, &census);
            involution_laws(&mut crit[6], &action);
            let pl = lab::pair_lab(&action, &census, None).expect("pair lab");
            let tags: Vec<&str> = pl.checks.keys().copied().collect();
            lab_checks(&mut crit[7], q, &pl.checks, &tags);
        }
        eprintln!("q={q} done in {:.1?}", t.elapsed());
    }

    for q in [7u64, 11, 13] {
        let f = FieldCtx::from_q(q).expect("valid q");
        let fl = lab::field_lab(&f, SEED, LAB_TRIALS).expect("field lab");
        let tags: Vec<&str> = fl
            .checks
            .keys()
            .copied()
            .filter(|t| !["weil", "discriminant", "m-discriminant"].contains(t))
            .collect();
        lab_checks(&mut crit[7], q, &fl.checks, &tags);
        if let Some(ch) = fl.reported.get("lambda12-third") {
            let msg = format!("q={q} lambda12-third: {} checked, {} violations", ch.checked, ch.violations.len());
            if ch.passed() {
                crit[7].notes.push(msg);
            } else {
                crit[7].deviate(format!("{msg}: the one-third count needs q = 2 mod 3"));
            }
        }
        if q == 7 {
            lab_checks(&mut crit[8], q, &fl.checks, &["discriminant"]);
        }
        lab_checks(&mut crit[8], q, &fl.checks, &["weil"]);
    }
    for q in [11u64, 17] {
        let f = FieldCtx::from_q(q).expect("valid q");
        let mut checks = Checks::new();
        lab::m_discriminant_checks(&f, &mut checks).expect("m discriminant");
        lab_checks(&mut crit[8], q, &checks, &["m-discriminant"]);
    }

    let titles = [
        "orbit size",
        "suborbit census against the table",
        "regular suborbit count",
        "common regular neighbour",
        "geometric base criterion against the oracle",
        "constructive finder",
        "involution laws",
        "polynomial systems and pair counts",
        "discriminant and Weil",
    ];
    let mut hard_fail = false;
    for (n, (c, title)) in crit.iter().zip(titles).enumerate() {
        let status = if c.failures.is_empty() && c.documented.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        hard_fail |= !c.failures.is_empty();
        println!("{status} {}: {title}", n + 1);
        for f in &c.failures {
            println!("    failed: {f}");
        }
        for d in &c.documented {
            println!("    documented deviation: {d}");
        }
        for note in &c.notes {
            println!("    ok: {note}");
        }
    }
    println!("total {:.1?}", start.elapsed());
    if hard_fail {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
