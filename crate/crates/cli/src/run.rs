//! Builds the contexts and assembles the report sections.

use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use saxl_core::action::ActionCtx;
use saxl_core::field::FieldCtx;
use saxl_core::geometry::GeomCtx;
use saxl_core::lab::{self, BoundsReport, Checks, EllReport, FieldLab, PairLab};
use saxl_core::saxl::{
    constructive_common_neighbor, is_base_pair, regular_count_formula, suborbit_census, verify_bg, BgReport,
    Census, FinderOutcome,
};

use crate::{Command, RunConfig};

#[derive(Serialize)]
pub struct Assertion {
    pub tag: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Flag {
    pub tag: &'static str,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Bounds {
    pub closed_forms: BoundsReport,
    pub ell: EllReport,
}

#[derive(Serialize)]
pub struct Lab5 {
    pub field: FieldLab,
    pub pairs: PairLab,
}

#[derive(Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub omega: usize,
    pub stabilizer: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Census>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_bg: Option<BgReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construct: Option<Vec<FinderOutcome>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lab5: Option<Lab5>,
    pub assertions: Vec<Assertion>,
    pub flags: Vec<Flag>,
}

impl Report {
    fn assert(&mut self, tag: &'static str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            tag,
            passed,
            detail: detail.into(),
        });
    }

    fn flag(&mut self, tag: &'static str, detail: impl Into<String>) {
        self.flags.push(Flag {
            tag,
            detail: detail.into(),
        });
    }

    fn checks(&mut self, checks: &Checks) {
        for (&tag, c) in checks {
            let detail = match c.violations.first() {
                None => format!("{} checked", c.checked),
                Some(v) => format!("{} of {} violated, first: {v}", c.violations.len(), c.checked),
            };
            self.assert(tag, c.passed(), detail);
        }
    }
}

fn progress(start: Instant, msg: &str) {
    eprintln!("[{:>7.1}s] {msg}", start.elapsed().as_secs_f64());
}

fn build_action(cfg: &RunConfig, start: Instant) -> Result<ActionCtx> {
    let field = FieldCtx::new(cfg.p, cfg.m).context("building the field")?;
    let geom = GeomCtx::new(field, cfg.gram);
    if let Some(path) = &cfg.cache {
        if path.exists() {
            progress(start, &format!("loading orbit from {}", path.display()));
            return ActionCtx::load_cache(geom, path).with_context(|| format!("reading cache {}", path.display()));
        }
    }
    progress(start, "enumerating the orbit");
    let action = ActionCtx::new(geom).context("enumerating the orbit")?;
    if let Some(path) = &cfg.cache {
        action
            .save_cache(path)
            .with_context(|| format!("writing cache {}", path.display()))?;
        progress(start, &format!("orbit cached at {}", path.display()));
    }
    Ok(action)
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let action = build_action(cfg, start)?;
    progress(start, &format!("|Omega| = {}, |M| = {}", action.len(), action.stab().len()));
    let mut r = Report {
        config: cfg.clone(),
        omega: action.len(),
        stabilizer: action.stab().len(),
        census: None,
        verify_bg: None,
        construct: None,
        bounds: None,
        lab5: None,
        assertions: Vec::new(),
        flags: Vec::new(),
    };

    let census = suborbit_census(&action).context("suborbit census")?;
    progress(start, &format!("census: {} suborbits", census.records.len()));
    let q = cfg.q;

    if cfg.cmd.includes(Command::Census) {
        let diff = census.regular_by_difference();
        r.assert(
            "regular-identity",
            diff == census.gamma_r as i64,
            format!("|Omega|-1-sum x_i|M:K_i| = {diff}, |Gamma_r| = {}", census.gamma_r),
        );
        let closed = regular_count_formula(q);
        r.assert(
            "regular-count",
            closed.is_integer() && *closed.numer() == census.gamma_r as i128,
            format!("|Gamma_r| = {}, closed form {closed}", census.gamma_r),
        );
        r.assert("k-vector", census.k_matches(), format!("{:?}", census.k));
        if !census.x_matches() {
            r.flag(
                "census-table",
                format!("x = {:?}, table {:?}", census.x, census.expected_x),
            );
        }
    }

    if cfg.cmd.includes(Command::VerifyBg) {
        let bg = verify_bg(&action, &census, cfg.max_reps).context("common-neighbour search")?;
        progress(start, &format!("common neighbours: {} representatives", bg.verdicts.len()));
        let bad: Vec<u32> = bg.failures().map(|v| v.rep).collect();
        r.assert(
            "common-neighbour",
            bg.verified,
            format!("{} representatives, failures {bad:?}", bg.verdicts.len()),
        );
        r.verify_bg = Some(bg);
    }

    if cfg.cmd.includes(Command::Construct) {
        let reps = census.records.iter().take(cfg.max_reps.unwrap_or(usize::MAX));
        let mut outcomes = Vec::new();
        let mut bad = Vec::new();
        for rec in reps {
            let rep = rec.rep as usize;
            match constructive_common_neighbor(&action, 0, rep) {
                Ok(o) => {
                    let w = o.witness as usize;
                    if !(is_base_pair(&action, 0, w)? && is_base_pair(&action, rep, w)?) {
                        bad.push(rep);
                    }
                    outcomes.push(o);
                }
                Err(_) => bad.push(rep),
            }
        }
        progress(start, &format!("finder: {} representatives", outcomes.len()));
        r.assert(
            "finder",
            bad.is_empty(),
            format!("{} witnesses, failures {bad:?}", outcomes.len()),
        );
        r.construct = Some(outcomes);
    }

    if cfg.cmd.includes(Command::Bounds) {
        let closed_forms = lab::bounds_report(action.field())?;
        let ell = lab::ell_criterion(&action, &census)?;
        progress(start, &format!("intersection criterion: l = {}", ell.ell));
        r.assert(
            "ell-diagonal",
            ell.diagonal == ell.gamma_nr,
            format!("diagonal {} vs |Gamma_nr| {}", ell.diagonal, ell.gamma_nr),
        );
        if !ell.positive {
            r.flag("ell", format!("l = {} is not positive", ell.ell));
        }
        r.bounds = Some(Bounds { closed_forms, ell });
    }

    if cfg.cmd.includes(Command::Lab5) {
        let field = lab::field_lab(action.field(), cfg.seed, cfg.trials)?;
        progress(start, "polynomial systems done");
        let pairs = lab::pair_lab(&action, &census, cfg.max_reps)?;
        progress(start, &format!("pair laboratory: {} representatives", pairs.reps));
        r.checks(&field.checks);
        r.checks(&pairs.checks);
        for (&tag, c) in &field.reported {
            if !c.passed() {
                r.flag(tag, format!("{} of {} violated (not asserted at this q)", c.violations.len(), c.checked));
            }
        }
        if !pairs.chain_flags.is_empty() {
            r.flag("chain", format!("{} chain steps fail numerically", pairs.chain_flags.len()));
        }
        r.lab5 = Some(Lab5 { field, pairs });
    }
    if cfg.cmd.includes(Command::Census) {
        r.census = Some(census);
    }
    progress(start, "done");
    Ok(r)
}
