//! Scenario files, the six commands behind the CLI, and their JSON/CSV reports.
//!
//! Each command returns a [`CommandReport`] whose checks carry the acceptance
//! criterion they witness; [`cmd_report`] folds a directory of reports into a
//! pass/fail matrix keyed by criterion.

pub mod checks;
pub mod scenario;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::adiabatic_ss::{compute_pages_with, limit_of, spectrum_sweep, zero_eigenvalue_count, PageOptions, PageReport};
use crate::chern_weil::InvariantPolynomial;
use crate::error::{Error, Result};
use crate::lie_algebra::{make_su2, make_su3};

pub use scenario::{kunneth_dims, Scenario, Tolerances};

/// Slope tolerance for the decay-exponent grouping.
pub const SLOPE_TOL: f64 = 0.3;
/// Random forms in the exactness suite.
pub const EXACTNESS_FORMS: usize = 100;
/// Band of the random forms in the exactness suite.
pub const EXACTNESS_BAND: usize = 2;
const IDENTITY_TOL: f64 = 1e-11;
const LIE_TOL: f64 = 1e-10;
const RECOVERY_TOL: f64 = 1e-8;
const WITNESS_FLOOR: f64 = 1e-4;
const GALERKIN_DELTA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    ToleranceFailure,
    ConfigError,
    SolverFailure,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::ToleranceFailure => 1,
            Outcome::ConfigError => 2,
            Outcome::SolverFailure => 3,
        }
    }

    pub fn of_error(e: &Error) -> Outcome {
        match e {
            Error::SolverFailure { .. } | Error::NotStabilized(_) => Outcome::SolverFailure,
            Error::NotExact { .. } => Outcome::ToleranceFailure,
            _ => Outcome::ConfigError,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    LieCheck,
    VerifyCs1,
    VerifyCs3,
    Pages,
    Spectrum,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LieCheck => "lie-check",
            Command::VerifyCs1 => "verify-cs1",
            Command::VerifyCs3 => "verify-cs3",
            Command::Pages => "pages",
            Command::Spectrum => "spectrum",
        }
    }
}

/// One pass/fail observation, optionally tied to an acceptance criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub criterion: Option<String>,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: String,
    pub scenario: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
    /// Extra files written next to the report.
    pub artifacts: Vec<String>,
}

impl CommandReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Checks tagged with `criterion`.
    pub fn criterion(&self, id: &str) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.criterion.as_deref() == Some(id)).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub band: Option<usize>,
    pub quiet: bool,
}

/// A finished command: report plus named text artifacts.
pub struct Output {
    pub report: CommandReport,
    pub files: Vec<(String, String)>,
}

struct Builder<'a> {
    scenario: &'a Scenario,
    checks: Vec<Check>,
}

impl<'a> Builder<'a> {
    fn new(scenario: &'a Scenario) -> Self {
        Builder { scenario, checks: Vec::new() }
    }

    /// Tags with `criterion` only if the scenario is a fixture for it.
    fn check(&mut self, criterion: &str, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        let criterion = self.scenario.lists(criterion).then(|| criterion.to_string());
        self.checks.push(Check { criterion, name: name.into(), pass, detail: detail.into() });
    }

    fn always(&mut self, criterion: Option<&str>, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { criterion: criterion.map(String::from), name: name.into(), pass, detail: detail.into() });
    }

    fn finish(self, command: Command, seed: u64, data: serde_json::Value, files: Vec<(String, String)>) -> Output {
        let outcome = if self.checks.iter().all(|c| c.pass) { Outcome::Pass } else { Outcome::ToleranceFailure };
        Output {
            report: CommandReport {
                command: command.name().into(),
                scenario: self.scenario.name.clone(),
                seed,
                outcome,
                error: None,
                checks: self.checks,
                data,
                artifacts: files.iter().map(|f| f.0.clone()).collect(),
            },
            files,
        }
    }
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ")
}

fn band_of(s: &Scenario, opts: &RunOptions) -> usize {
    opts.band.unwrap_or(s.band)
}

pub fn cmd_lie_check(s: &Scenario, opts: &RunOptions) -> Result<Output> {
    let mut b = Builder::new(s);
    let own = checks::lie_suite(&s.algebra)?;
    b.always(None, format!("{} structure and harmonic theory", s.algebra_name), own.pass(LIE_TOL), format!("{own:?}"));
    let mut reference = BTreeMap::new();
    for (name, alg, betti) in [("su2", make_su2(), vec![1, 0, 0, 1]), ("su3", make_su3(), vec![1, 0, 0, 1, 0, 1, 0, 0, 1])] {
        let suite = checks::lie_suite(&alg)?;
        b.always(Some("1"), format!("{name} Betti numbers"), suite.betti == betti && suite.harmonic_dims == betti, format!("betti {:?}, harmonic {:?}", suite.betti, suite.harmonic_dims));
        b.always(
            Some("1"),
            format!("{name} harmonic = ad-invariant"),
            suite.harmonic_dims == suite.invariant_dims && suite.harmonic_invariance <= LIE_TOL,
            format!("invariant dims {:?}, max |ad* h| {:.2e}", suite.invariant_dims, suite.harmonic_invariance),
        );
        let g = suite.green_residual.unwrap_or(f64::INFINITY).max(suite.green_closedness.unwrap_or(f64::INFINITY));
        b.always(Some("1"), format!("{name} Green right inverse"), g <= LIE_TOL, format!("{g:.2e}"));
        b.always(Some("1"), format!("{name} structure identities"), suite.pass(LIE_TOL), format!("jacobi {:.2e}, d² {:.2e}", suite.jacobi, suite.ce_square));
        reference.insert(name, suite);
    }
    let data = json!({ "algebra": s.algebra_name, "suite": own, "reference": reference });
    Ok(b.finish(Command::LieCheck, opts.seed, data, vec![]))
}

fn linear(s: &Scenario) -> Result<&InvariantPolynomial> {
    match s.polynomial()? {
        p @ InvariantPolynomial::Linear { .. } => Ok(p),
        _ => Err(Error::WrongPolynomial("degree-one check needs a linear polynomial".into())),
    }
}

fn bilinear(s: &Scenario) -> Result<&InvariantPolynomial> {
    match s.polynomial()? {
        p @ InvariantPolynomial::Bilinear { .. } => Ok(p),
        _ => Err(Error::WrongPolynomial("degree-three check needs a bilinear polynomial".into())),
    }
}

pub fn cmd_verify_cs1(s: &Scenario, opts: &RunOptions) -> Result<Output> {
    let conn = s.connection()?;
    let phi = linear(s)?;
    let mut b = Builder::new(s);
    let tol = s.tolerances.formal;
    match checks::cs1_run(&conn, phi, &s.deltas) {
        Err(Error::NotExact { harmonic, total, .. }) => {
            b.check("4", "c1 ≠ 0 reported as NotExact", true, format!("harmonic part {harmonic:.3e} of {total:.3e}"));
            if s.lists("3") {
                b.check("3", "Chern–Weil 2-form exact", false, "NotExact");
            }
            let data = json!({ "branch": "not_exact", "harmonic": harmonic, "total": total });
            Ok(b.finish(Command::VerifyCs1, opts.seed, data, vec![]))
        }
        Err(e) => Err(e),
        Ok(run) => {
            if s.lists("4") {
                b.check("4", "c1 ≠ 0 reported as NotExact", false, "Chern–Weil 2-form is exact");
            }
            let worst = run.d_orders.iter().chain(&run.dstar_orders).fold(0.0, |m: f64, x| m.max(x.1));
            b.check("3", "formal residual orders vanish", worst <= tol, format!("max order norm {worst:.3e}"));
            for &(delta, d, ds) in &run.unscaled {
                b.check("3", format!("harmonic at δ = {delta}"), d <= tol && ds <= tol, format!("|dω| {d:.3e}, |d*ω| {ds:.3e}"));
            }
            let mut csv = String::from("delta,d_residual,dstar_residual\n");
            for (delta, d, ds) in &run.unscaled {
                let _ = writeln!(csv, "{delta},{d:e},{ds:e}");
            }
            let data = json!({ "branch": "exact", "run": run });
            Ok(b.finish(Command::VerifyCs1, opts.seed, data, vec![("verify-cs1.csv".into(), csv)]))
        }
    }
}

pub fn cmd_verify_cs3(s: &Scenario, opts: &RunOptions) -> Result<Output> {
    let conn = s.connection()?;
    let pair = bilinear(s)?;
    let mut b = Builder::new(s);
    let mut data = serde_json::Map::new();
    let mut files = Vec::new();
    match checks::cs3_run(&conn, pair) {
        Err(Error::NotExact { harmonic, total, .. }) => {
            b.check("5", "Chern–Weil 4-form exact", false, format!("NotExact: harmonic {harmonic:.3e} of {total:.3e}"));
            data.insert("branch".into(), json!("not_exact"));
        }
        Err(e) => return Err(e),
        Ok(run) => {
            let tol = s.tolerances.formal;
            b.check("5", "Chern–Weil 4-form exact", run.cw4_harmonic <= tol, format!("harmonic part {:.3e}", run.cw4_harmonic));
            let scale = tol * run.input_norm;
            let worst = (0..4)
                .map(|m| checks::order_at(&run.d_orders, m).max(checks::order_at(&run.dstar_orders, m)))
                .fold(0.0, f64::max);
            b.check("5", "orders 0–3 vanish with β", worst <= scale, format!("max {worst:.3e} against {scale:.3e}"));
            let r3 = checks::order_at(&run.dstar_orders_without_beta, 3);
            let w = run.necessity_witness;
            let agree = (r3 - w).abs() <= 1e-10 * (1.0 + w);
            b.check("5", "order-3 d* residual without β equals |d*_∇ α21|", agree && w > WITNESS_FLOOR, format!("residual {r3:.6e}, witness {w:.6e}"));
            let (p1, p2) = run.beta_posts;
            b.check("5", "β solves the vertical equation", p1 <= tol * (1.0 + w) && p2 <= tol * (1.0 + w), format!("{p1:.2e}, {p2:.2e}"));
            b.check("5", "recovered ω3 equals −h", run.recovery_error <= RECOVERY_TOL, format!("relative error {:.3e}", run.recovery_error));
            let mut csv = String::from("order,d_norm,dstar_norm,d_norm_without_beta,dstar_norm_without_beta\n");
            let top = run.d_orders.len().max(run.dstar_orders.len()).max(run.dstar_orders_without_beta.len());
            for m in 0..top {
                let _ = writeln!(
                    csv,
                    "{m},{:e},{:e},{:e},{:e}",
                    checks::order_at(&run.d_orders, m),
                    checks::order_at(&run.dstar_orders, m),
                    checks::order_at(&run.d_orders_without_beta, m),
                    checks::order_at(&run.dstar_orders_without_beta, m)
                );
            }
            files.push(("verify-cs3.csv".into(), csv));
            data.insert("branch".into(), json!("exact"));
            data.insert("run".into(), json!(run));
        }
    }
    if s.lists("2") {
        let suite = checks::exactness_suite(&conn, EXACTNESS_FORMS, EXACTNESS_BAND, opts.seed)?;
        b.check("2", "d² identities", suite.identities.iter().all(|&v| v <= IDENTITY_TOL), sci(&suite.identities));
        b.check("2", "adjoint d² identities", suite.adjoint_identities.iter().all(|&v| v <= IDENTITY_TOL), sci(&suite.adjoint_identities));
        b.check("2", "adjointness", suite.adjointness <= IDENTITY_TOL, format!("{:.2e}", suite.adjointness));
        data.insert("exactness".into(), json!(suite));
    }
    if s.lists("8") {
        let inv = checks::class_invariance(&conn, pair, opts.seed)?;
        b.check("8", "cw4 class independent of connection", inv.harmonic_difference <= s.tolerances.formal, format!("harmonic difference {:.3e}", inv.harmonic_difference));
        data.insert("class_invariance".into(), json!(inv));
    }
    Ok(b.finish(Command::VerifyCs3, opts.seed, serde_json::Value::Object(data), files))
}

pub fn cmd_pages(s: &Scenario, opts: &RunOptions) -> Result<Output> {
    let conn = s.connection()?;
    let band = band_of(s, opts);
    let mut b = Builder::new(s);
    let mut reports = Vec::new();
    let mut files = Vec::new();
    let mut degrees = s.degrees.clone();
    for e in &s.expected_limits {
        if !degrees.contains(&e.p) {
            degrees.push(e.p);
        }
    }
    let page_opts = PageOptions { k_max: s.k_max, tau_rank: s.tolerances.rank, ..PageOptions::default() };
    let betti = crate::lie_algebra::betti_numbers(&s.algebra);
    for &p in &degrees {
        let pages = compute_pages_with(&conn, p, band, &page_opts)?;
        let inf = pages.infinity();
        b.check("6", format!("p = {p} stabilizes by K = {}", s.k_max), pages.stabilized(), format!("totals {:?}", pages.totals()));
        let zeros = zero_eigenvalue_count(&conn, p, GALERKIN_DELTA, band, s.tolerances.spectral)?;
        b.check("6", format!("p = {p} E∞ equals Galerkin kernel"), zeros == inf.total, format!("E∞ {} vs {zeros} near-zero eigenvalues", inf.total));
        if s.is_flat_trivial() {
            let want = kunneth_dims(s.geometry.n, &betti, p);
            let got: Vec<_> = want.iter().map(|&(slot, _)| (slot, inf.dims.get(&slot).copied().unwrap_or(0))).collect();
            b.check("6", format!("p = {p} Künneth"), got == want, format!("E∞ {got:?}, Künneth {want:?}"));
        }
        for e in s.expected_limits.iter().filter(|e| e.p == p) {
            let slots_ok = e.slots.iter().all(|&(slot, d)| inf.dims.get(&slot).copied().unwrap_or(0) == d);
            let pass = inf.total == e.total && slots_ok;
            let detail = format!("E∞ total {} slots {:?}, expected total {} slots {:?}", inf.total, inf.dims, e.total, e.slots);
            b.always(e.criterion.as_deref(), format!("p = {p} E∞ dimensions"), pass, detail);
        }
        if !inf.entries.is_empty() {
            let limits: Vec<_> = inf.entries.iter().map(|e| limit_of(&e.lift, e.slot, &conn).to_json()).collect();
            files.push((format!("limits_p{p}.json"), serde_json::to_string_pretty(&limits).map_err(|e| Error::Io(e.to_string()))?));
        }
        let mut r = serde_json::to_value(PageReport::from(&pages)).map_err(|e| Error::Io(e.to_string()))?;
        r["galerkin_zero_count"] = json!(zeros);
        reports.push(r);
    }
    let data = json!({ "band": band, "k_max": s.k_max, "degrees": reports });
    Ok(b.finish(Command::Pages, opts.seed, data, files))
}

pub fn cmd_spectrum(s: &Scenario, opts: &RunOptions) -> Result<Output> {
    let conn = s.connection()?;
    let band = band_of(s, opts);
    let p = s.spectrum_degree;
    let mut rep = spectrum_sweep(&conn, p, &s.spectrum_deltas, band)?;
    let page_opts = PageOptions { k_max: s.k_max, tau_rank: s.tolerances.rank, ..PageOptions::default() };
    let pages = compute_pages_with(&conn, p, band, &page_opts)?;
    rep.compare_with_pages(&pages);
    let mut b = Builder::new(s);
    for g in &rep.groups {
        let label = g.k.map_or("zero".to_string(), |k| format!("2K = {}", 2 * k));
        b.check(
            "7",
            format!("branches decaying like δ^{label}"),
            g.expected == Some(g.count) && g.max_slope_error <= SLOPE_TOL,
            format!("count {} expected {:?}, max |slope − 2K| {:.3}", g.count, g.expected, g.max_slope_error),
        );
    }
    b.check("7", "every group matches", rep.matches(SLOPE_TOL), format!("{} groups", rep.groups.len()));
    let mut table = String::from("k,count,expected,max_slope_error\n");
    for g in &rep.groups {
        let k = g.k.map_or("inf".to_string(), |k| k.to_string());
        let _ = writeln!(table, "{k},{},{},{:.6}", g.count, g.expected.map_or(String::new(), |e| e.to_string()), g.max_slope_error);
    }
    let data = json!({
        "p": p,
        "band": band,
        "deltas": rep.deltas,
        "spectral_norms": rep.spectral_norms,
        "groups": rep.groups,
        "small_gaps": rep.small_gaps,
        "page_totals": pages.totals(),
        "slopes": rep.branches.iter().filter_map(|br| br.slope).collect::<Vec<_>>(),
    });
    let files = vec![(format!("spectrum_p{p}.csv"), rep.to_csv()), (format!("exponents_p{p}.csv"), table)];
    Ok(b.finish(Command::Spectrum, opts.seed, data, files))
}

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let tmp = path.with_extension(format!("{}.tmp", path.extension().and_then(|e| e.to_str()).unwrap_or("")));
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn out_dir(s: Option<&Scenario>, opts: &RunOptions) -> PathBuf {
    opts.out.clone().or_else(|| s.and_then(|s| s.output.clone())).unwrap_or_else(|| PathBuf::from("out"))
}

fn failed(command: Command, name: &str, seed: u64, e: &Error) -> CommandReport {
    CommandReport {
        command: command.name().into(),
        scenario: name.into(),
        seed,
        outcome: Outcome::of_error(e),
        error: Some(e.to_string()),
        checks: vec![],
        data: serde_json::Value::Null,
        artifacts: vec![],
    }
}

/// Loads the scenario, runs `command`, and writes `<out>/<scenario>/<command>.json` plus artifacts.
///
/// Errors never escape: they become a report with the matching outcome.
pub fn run(command: Command, scenario: &Path, opts: &RunOptions) -> CommandReport {
    let stem = scenario.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario").to_string();
    let s = match Scenario::load(scenario) {
        Ok(s) => s,
        Err(e) => {
            let report = failed(command, &stem, opts.seed, &e);
            let _ = persist(&out_dir(None, opts).join(&stem), &report, &[]);
            return report;
        }
    };
    run_scenario(command, &s, opts)
}

pub fn run_scenario(command: Command, s: &Scenario, opts: &RunOptions) -> CommandReport {
    let result = match command {
        Command::LieCheck => cmd_lie_check(s, opts),
        Command::VerifyCs1 => cmd_verify_cs1(s, opts),
        Command::VerifyCs3 => cmd_verify_cs3(s, opts),
        Command::Pages => cmd_pages(s, opts),
        Command::Spectrum => cmd_spectrum(s, opts),
    };
    let dir = out_dir(Some(s), opts).join(&s.name);
    match result {
        Ok(out) => match persist(&dir, &out.report, &out.files) {
            Ok(()) => out.report,
            Err(e) => failed(command, &s.name, opts.seed, &e),
        },
        Err(e) => {
            let report = failed(command, &s.name, opts.seed, &e);
            let _ = persist(&dir, &report, &[]);
            report
        }
    }
}

fn persist(dir: &Path, report: &CommandReport, files: &[(String, String)]) -> Result<()> {
    for (name, text) in files {
        write_atomic(&dir.join(name), text.as_bytes())?;
    }
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&dir.join(format!("{}.json", report.command)), json.as_bytes())
}

/// Aggregated verdict for one criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionRow {
    pub criterion: String,
    pub pass: bool,
    pub checks: usize,
    pub sources: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub outcome: Outcome,
    pub reports: usize,
    pub criteria: Vec<CriterionRow>,
    /// Reports that ended in an error rather than a verdict.
    pub errors: Vec<String>,
}

fn collect_reports(dir: &Path, out: &mut Vec<(PathBuf, CommandReport)>) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths {
        if path.is_dir() {
            collect_reports(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "json") {
            let Ok(text) = std::fs::read_to_string(&path) else { continue };
            if let Ok(r) = serde_json::from_str::<CommandReport>(&text) {
                out.push((path, r));
            }
        }
    }
    Ok(())
}

/// Folds every report under `dir` into `summary.json` and `summary.md` there.
pub fn cmd_report(dir: &Path) -> Result<Summary> {
    let mut reports = Vec::new();
    collect_reports(dir, &mut reports)?;
    if reports.is_empty() {
        return Err(Error::Config(format!("no reports under {}", dir.display())));
    }
    let mut rows: BTreeMap<String, CriterionRow> = BTreeMap::new();
    let mut errors = Vec::new();
    let mut outcome = Outcome::Pass;
    for (_, r) in &reports {
        let source = format!("{}/{}", r.scenario, r.command);
        if let Some(e) = &r.error {
            errors.push(format!("{source}: {e}"));
        }
        outcome = outcome.max(r.outcome);
        for c in &r.checks {
            let Some(id) = &c.criterion else { continue };
            let row = rows.entry(id.clone()).or_insert_with(|| CriterionRow { criterion: id.clone(), pass: true, checks: 0, sources: vec![] });
            row.pass &= c.pass;
            row.checks += 1;
            if !row.sources.contains(&source) {
                row.sources.push(source.clone());
            }
        }
    }
    let mut criteria: Vec<CriterionRow> = rows.into_values().collect();
    criteria.sort_by_key(|r| r.criterion.parse::<u32>().unwrap_or(u32::MAX));
    let summary = Summary { outcome, reports: reports.len(), criteria, errors };
    let mut md = String::from("| criterion | verdict | checks | sources |\n|---|---|---|---|\n");
    for r in &summary.criteria {
        let _ = writeln!(md, "| {} | {} | {} | {} |", r.criterion, if r.pass { "pass" } else { "FAIL" }, r.checks, r.sources.join(", "));
    }
    for e in &summary.errors {
        let _ = writeln!(md, "\nerror: {e}");
    }
    write_atomic(&dir.join("summary.md"), md.as_bytes())?;
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&dir.join("summary.json"), json.as_bytes())?;
    Ok(summary)
}
