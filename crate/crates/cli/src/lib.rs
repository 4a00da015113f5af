//! Command implementations behind the `ncdr` binary. Every command returns
//! a [`Report`]; `main` only parses flags, writes JSON and picks the exit code.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use ncdr_core::aphi::{extract_star, flatness_check, APhi};
use ncdr_core::cochain::verify_dg_suite;
use ncdr_core::deform::{mc_check, star_associativity};
use ncdr_core::error::{Error, Result};
use ncdr_core::findim::build_findim;
use ncdr_core::forms::Calculus;
use ncdr_core::gm::{gm_flatness, Relative};
use ncdr_core::harmonic::harmonic_suite;
use ncdr_core::homology::{form_records, hh_kernel_iota, hochschild};
use ncdr_core::identities::operator_identities;
use ncdr_core::report::Suite;
use ncdr_core::rep::{sample_grid, verify_rep_thm, RepScheme};
use ncdr_core::rewrite::AlgebraPresentation;
use ncdr_core::spec::{parse_algebra, parse_family, AlgebraSpec, FamilySpec};
use ncdr_core::window::{cyclic_and_negative, intertwiner_check, periodic_homology};

/// Everything a run depends on; echoed verbatim into its report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub spec: PathBuf,
    pub n_max: Option<usize>,
    pub window: Option<(i64, i64)>,
    pub cap: Option<usize>,
    pub dim: Option<usize>,
    pub order: Option<usize>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: &str, spec: impl Into<PathBuf>) -> Self {
        Self { command: command.into(), spec: spec.into(), n_max: None, window: None, cap: None, dim: None, order: None, seed: 0 }
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [("--n-max", self.n_max), ("--cap", self.cap), ("--dim", self.dim), ("--order", self.order)] {
            if v == Some(0) && name != "--n-max" {
                return Err(Error::input(format!("{name} must be positive")));
            }
        }
        if let Some((a, b)) = self.window {
            if a > b {
                return Err(Error::input(format!("empty window {a}..{b}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    IdentityFailure,
    InvariantViolation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::IdentityFailure => 1,
            Status::InvariantViolation => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub status: Status,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Exit code for an error that aborted a run.
pub fn error_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        3
    }
}

/// Parse `a..b`, either bound possibly negative.
pub fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("window `{s}` is not of the form a..b"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("bad window bound `{x}`"));
    Ok((p(a)?, p(b)?))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

/// Prefix input errors with the file they came from.
fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        e if e.is_input_error() => Error::Input(format!("{}: {e}", path.display())),
        e => e,
    }
}

fn load_algebra(path: &Path) -> Result<AlgebraSpec> {
    parse_algebra(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_family(path: &Path) -> Result<FamilySpec> {
    parse_family(&read(path)?).map_err(|e| in_file(path, e))
}

/// Refuse form spaces past `NCDR_SIZE_LIMIT` before building them.
fn guard_forms(calc: &Calculus, top: usize) -> Result<()> {
    let limit = ncdr_core::size_limit();
    let size = calc.omega_dim(top);
    if size > limit {
        return Err(Error::SizeLimit { size, limit });
    }
    Ok(())
}

fn suite_json(s: &Suite) -> Value {
    let passed: usize = s.checks.iter().map(|c| c.checked - c.failed).sum();
    let failed: usize = s.checks.iter().map(|c| c.failed).sum();
    json!({ "name": s.name, "passed": passed, "failed": failed, "checks": s.checks })
}

fn suite_status(s: &Suite) -> Status {
    if s.passed() {
        Status::Ok
    } else {
        Status::IdentityFailure
    }
}

fn report(config: &RunConfig, status: Status, result: Value) -> Report {
    Report { tool: "ncdr", version: env!("CARGO_PKG_VERSION"), config: config.clone(), status, result }
}

fn algebra_json(spec: &AlgebraSpec) -> Value {
    json!({ "name": spec.name, "dim": spec.algebra.dim(), "basis": spec.algebra.labels })
}

pub fn cmd_hh(cfg: &RunConfig) -> Result<Report> {
    cfg.check()?;
    let spec = load_algebra(&cfg.spec)?;
    let n_max = cfg.n_max.unwrap_or(3);
    let calc = Calculus::new(&spec.algebra);
    guard_forms(&calc, n_max + 1)?;
    let omega = hochschild(&calc, n_max);
    let mut kernel = Vec::new();
    let mut degrees = Vec::new();
    let mut well_defined = true;
    for n in 0..=n_max {
        let k = hh_kernel_iota(&calc, n);
        well_defined &= k.well_defined;
        kernel.push(k.dim);
        degrees.push(json!({
            "degree": n,
            "dim": k.dim,
            "dr_dim": k.dr_dim,
            "representatives": k.reps.iter().map(|f| form_records(&calc, f)).collect::<Vec<_>>(),
        }));
    }
    let agree = omega.dims == kernel;
    let status = if agree && well_defined { Status::Ok } else { Status::InvariantViolation };
    Ok(report(
        cfg,
        status,
        json!({
            "algebra": algebra_json(&spec),
            "dims": omega.dims,
            "dims_kernel_iota": kernel,
            "agree": agree,
            "iota_well_defined": well_defined,
            "by_weight": omega.by_weight,
            "kernel_iota": degrees,
        }),
    ))
}

fn window_cfg(cfg: &RunConfig) -> ((i64, i64), usize) {
    (cfg.window.unwrap_or((-2, 4)), cfg.cap.unwrap_or(6))
}

pub fn cmd_hp(cfg: &RunConfig) -> Result<Report> {
    cfg.check()?;
    let spec = load_algebra(&cfg.spec)?;
    let ((lo, hi), cap) = window_cfg(cfg);
    let calc = Calculus::new(&spec.algebra);
    guard_forms(&calc, cap + 3)?;
    let r = periodic_homology(&calc, lo, hi, cap)?;
    if !r.square_zero {
        return Err(Error::invariant("window differential does not square to zero"));
    }
    let n_max = cfg.n_max.unwrap_or(4.min(cap));
    let inter = intertwiner_check(&calc, n_max);
    let degrees: Vec<Value> =
        (lo..=hi).zip(r.b_tb.iter().zip(&r.d_tiota)).map(|(n, (x, y))| json!({ "degree": n, "b_tb": x, "d_tiota": y })).collect();
    let status = if inter.passed() { Status::Ok } else { Status::IdentityFailure };
    Ok(report(
        cfg,
        status,
        json!({
            "algebra": algebra_json(&spec),
            "window": [lo, hi],
            "cap": cap,
            "degrees": degrees,
            "stable": r.stable,
            "variants_agree": r.agree,
            "square_zero": r.square_zero,
            "intertwiner": suite_json(&inter),
        }),
    ))
}

pub fn cmd_hc(cfg: &RunConfig) -> Result<Report> {
    cfg.check()?;
    let spec = load_algebra(&cfg.spec)?;
    let ((lo, hi), cap) = window_cfg(cfg);
    let calc = Calculus::new(&spec.algebra);
    guard_forms(&calc, cap + 3)?;
    let r = cyclic_and_negative(&calc, lo, hi, cap)?;
    let degrees: Vec<Value> = (lo..=hi)
        .enumerate()
        .map(|(i, n)| {
            json!({
                "degree": n,
                "hc": r.hc[i],
                "hc_minus": r.hc_minus[i],
                "heart_hc": r.heart_hc[i],
                "heart_hc_minus": r.heart_hc_minus[i],
                "p_heart_hc": r.p_heart_hc[i],
                "p_heart_hc_minus": r.p_heart_hc_minus[i],
            })
        })
        .collect();
    Ok(report(
        cfg,
        suite_status(&r.suite),
        json!({
            "algebra": algebra_json(&spec),
            "window": [lo, hi],
            "cap": cap,
            "degrees": degrees,
            "stable": r.stable,
            // compared on the degrees the cap can represent
            "harmonic_agree": r.suite.passed(),
            "suite": suite_json(&r.suite),
        }),
    ))
}

/// The five verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Identities,
    Harmonic,
    DeformDg,
    Rep,
    Gm,
}

impl SuiteKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "identities" => Self::Identities,
            "harmonic" => Self::Harmonic,
            "deform-dg" => Self::DeformDg,
            "rep" => Self::Rep,
            "gm" => Self::Gm,
            _ => return None,
        })
    }
}

pub fn cmd_verify(kind: SuiteKind, cfg: &RunConfig) -> Result<Report> {
    cfg.check()?;
    if kind == SuiteKind::Gm {
        return gm_report(cfg, true);
    }
    let spec = load_algebra(&cfg.spec)?;
    let (suite, extra) = match kind {
        SuiteKind::Identities | SuiteKind::Harmonic => {
            let n_max = cfg.n_max.unwrap_or(4);
            let calc = Calculus::new(&spec.algebra);
            guard_forms(&calc, n_max + 1)?;
            let s = if kind == SuiteKind::Identities { operator_identities(&spec.algebra, n_max) } else { harmonic_suite(&calc, n_max) };
            (s, json!({ "n_max": n_max }))
        }
        SuiteKind::DeformDg => {
            let s = verify_dg_suite(&spec.algebra, 50, 10, cfg.seed);
            (s, json!({ "tuples": 50, "cocycle_pairs": 10 }))
        }
        SuiteKind::Rep => rep_suite(&spec, cfg)?,
        SuiteKind::Gm => unreachable!(),
    };
    Ok(report(cfg, suite_status(&suite), json!({ "algebra": algebra_json(&spec), "parameters": extra, "suite": suite_json(&suite) })))
}

/// The commuting square on a grid of cyclic words, for a free algebra.
fn rep_suite(spec: &AlgebraSpec, cfg: &RunConfig) -> Result<(Suite, Value)> {
    let pres = spec.presentation.as_ref().ok_or_else(|| Error::input("the rep suite needs generators, not structure constants"))?;
    if !pres.relations.is_empty() {
        return Err(Error::input("the rep suite needs a free algebra (no relations)"));
    }
    let slot_weight = cfg.cap.unwrap_or(1);
    let dim = cfg.dim.unwrap_or(1);
    if pres.degree_cap < 3 * slot_weight.max(2) {
        return Err(Error::input(format!("degree_cap {} is too small for slot words of weight {slot_weight}; need {}", pres.degree_cap, 3 * slot_weight.max(2))));
    }
    let words = spec.algebra.words.as_ref().expect("presented algebras carry words");
    let slot: Vec<usize> = (0..words.len()).filter(|&i| pres.gens.weight(&words[i]) <= slot_weight).collect();
    let kernel_cap = pres.degree_cap.min(3);
    let kpres = AlgebraPresentation::new(pres.gens.clone(), Vec::new(), kernel_cap)?;
    let kalg = build_findim(&kpres, kernel_cap)?;
    let calc = Calculus::new(&spec.algebra);
    let kcalc = Calculus::new(&kalg);
    let names: Vec<String> = pres.gens.gens.iter().map(|g| g.name.clone()).collect();
    let scheme = RepScheme::new(dim, names)?;
    let grid = sample_grid(&slot, 2);
    let r = verify_rep_thm(&scheme, &calc, &grid, &[], &kcalc, 2)?;
    Ok((r.suite, json!({ "dim": dim, "slot_weight": slot_weight, "samples": r.samples, "kernel_classes": r.kernel_classes })))
}

pub fn cmd_deform_mc(cfg: &RunConfig) -> Result<Report> {
    cfg.check()?;
    let spec = load_algebra(&cfg.spec)?;
    let datum = spec.deformation(cfg.order)?;
    let pres = spec.presentation.as_ref().expect("deformation data has a presentation");
    let w = cfg.cap.unwrap_or(pres.degree_cap);
    let a = build_findim(pres, w)?;
    let aphi = APhi::build(&datum, w)?;
    let flat = flatness_check(&aphi, &a);
    let star = extract_star(&aphi, &a)?;
    let mc = mc_check(&a, &star);
    let direct = star_associativity(&a, &star);
    // the order-by-order check and direct associativity must see the same failure
    if mc.first_failure != direct.as_ref().map(|d| d.0) {
        return Err(Error::invariant(format!("MC check fails at {:?} but associativity at {:?}", mc.first_failure, direct.map(|d| d.0))));
    }
    let status = if mc.passed { Status::Ok } else { Status::IdentityFailure };
    Ok(report(
        cfg,
        status,
        json!({
            "algebra": algebra_json(&spec),
            "phi": spec.phi,
            "t_order": datum.t_order,
            "weight_cap": w,
            "flatness": flat,
            "flat": flat.flat,
            "mc": mc,
            "pass": mc.passed,
        }),
    ))
}

fn gm_report(cfg: &RunConfig, quiet: bool) -> Result<Report> {
    let spec = load_family(&cfg.spec)?;
    let mut fam = spec.family.clone();
    if let Some(c) = cfg.cap {
        fam.weight_cap = c;
        fam.pres.degree_cap = c;
    }
    let rel = Relative::build(&fam)?;
    let trivial = fam.is_trivial();
    let r = gm_flatness(&rel, 3, cfg.seed, trivial);
    let mut result = json!({
        "name": spec.name,
        "weight_cap": r.weight_cap,
        "base_weight": r.base_weight,
        "trivial_family": trivial,
        "homology": r.homology.iter().map(|(w, h)| json!({ "weight": w, "even": h[0], "odd": h[1] })).collect::<Vec<_>>(),
        "nonzero_classes": r.nonzero_classes,
        "note": r.curvature_note,
        "suite": suite_json(&r.suite),
    });
    if !quiet {
        result["dims"] = json!(r.dims);
        result["samples"] = json!(r.samples);
    }
    Ok(report(cfg, suite_status(&r.suite), result))
}

pub fn cmd_gm(cfg: &RunConfig) -> Result<Report> {
    cfg.check()?;
    gm_report(cfg, false)
}
