//! One function per subcommand. Each writes its files under the configured
//! output directory and returns a printable summary plus an exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use dwolff::conjugation::{
    baker_pommerenke_normalized, conjugation_report, pommerenke_normalized, ConjugationError, ConjugationKind,
    ConjugationResult,
};
use dwolff::diagnostics::{
    approach_report, approach_series, conjecture_probe, default_suite, probe_starts, radial_quotient_series,
    theorem_harness, ApproachFlags, DiagnosticsError, HarnessReport, HarnessRow, HarnessSummary, LemmaViolation,
    ProbeReport, RowStatus,
};
use dwolff::dynamics::{
    classify, iterate, step_series, ClassificationReport, DwPoint, DynamicsError, MapType, Orbit, StepSeries,
    StepVerdict, StopReason,
};
use dwolff::geometry::{BoundaryPoint, Point};
use dwolff::maps::MapSpec;
use dwolff::Complex64;
use serde::Serialize;

use crate::config::{default_dim, ExperimentConfig};
use crate::output::{num, Table, Written};
use crate::plot::{render_svg, PlotData};
use crate::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_USAGE, error: e.into() }
    }

    pub fn inconclusive(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_INCONCLUSIVE, error: e.into() }
    }

    pub fn numeric(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_NUMERIC, error: e.into() }
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::StartModel { .. } | DynamicsError::TooFewStarts(_) => Failure::usage(e),
            DynamicsError::Disagreement { .. } | DynamicsError::NotConverged | DynamicsError::InteriorLimit => {
                Failure::inconclusive(e)
            }
            _ => Failure::numeric(e),
        }
    }
}

impl From<DiagnosticsError> for Failure {
    fn from(e: DiagnosticsError) -> Self {
        match e {
            DiagnosticsError::TooFewStarts { .. } => Failure::usage(e),
            DiagnosticsError::NotConverging { .. } => Failure::inconclusive(e),
            DiagnosticsError::Dynamics(d) => d.into(),
            _ => Failure::numeric(e),
        }
    }
}

impl From<ConjugationError> for Failure {
    fn from(e: ConjugationError) -> Self {
        match e {
            ConjugationError::WrongModel(_) | ConjugationError::NoCheckpoints | ConjugationError::GridOutside(_) => {
                Failure::usage(e)
            }
            ConjugationError::NotParabolic(_) | ConjugationError::NotZeroStep(_) => Failure::inconclusive(e),
            ConjugationError::Dynamics(d) => d.into(),
            _ => Failure::numeric(e),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

pub type CmdResult = std::result::Result<Outcome, Failure>;

fn io(e: anyhow::Error) -> Failure {
    Failure { code: EXIT_NUMERIC, error: e.context("writing output") }
}

fn map(cfg: &ExperimentConfig) -> std::result::Result<&MapSpec, Failure> {
    cfg.map().map_err(Failure::usage)
}

fn starts(cfg: &ExperimentConfig) -> std::result::Result<Vec<Point>, Failure> {
    cfg.starts().map_err(Failure::usage)
}

fn out_dir(cfg: &ExperimentConfig) -> &Path {
    &cfg.output.dir
}

fn coord_header(dim: usize) -> Vec<String> {
    let mut h = vec!["n".to_string(), "re".to_string(), "im".to_string()];
    for j in 1..dim {
        h.push(format!("w{j}_re"));
        h.push(format!("w{j}_im"));
    }
    h
}

fn coord_cells(n: usize, p: &Point) -> Vec<String> {
    let mut row = vec![n.to_string()];
    for c in p.coords() {
        row.push(num(c.re));
        row.push(num(c.im));
    }
    row
}

fn orbits(cfg: &ExperimentConfig) -> std::result::Result<Vec<Orbit>, Failure> {
    let spec = map(cfg)?;
    starts(cfg)?
        .iter()
        .map(|s| iterate(spec, s, cfg.budgets.n_max, &cfg.budgets.stop).map_err(Failure::from))
        .collect()
}

fn worst_stop(orbits: &[Orbit]) -> i32 {
    if orbits.iter().any(|o| o.stop_reason == StopReason::NumericFailure) {
        EXIT_NUMERIC
    } else {
        EXIT_OK
    }
}

// ---------------------------------------------------------------------------

pub fn describe_classification(r: &ClassificationReport) -> String {
    let mut s = match (r.map_type, r.multiplier_c) {
        (MapType::Elliptic, Some(c)) => format!("elliptic, |f'(p)|≈{c:.6}"),
        (MapType::Elliptic, None) => "elliptic".to_string(),
        (MapType::Inconclusive, _) => "inconclusive".to_string(),
        (t, Some(c)) => format!("{t}, c≈{c:.6}"),
        (t, None) => t.to_string(),
    };
    match &r.dw_point {
        Some(DwPoint::Interior(p)) => {
            let _ = write!(s, "\nDenjoy-Wolff point (interior): {}", fmt_vec(p));
        }
        Some(DwPoint::Boundary(BoundaryPoint::Infinity)) => s.push_str("\nDenjoy-Wolff point: infinity"),
        Some(DwPoint::Boundary(BoundaryPoint::Finite(p))) => {
            let _ = write!(s, "\nDenjoy-Wolff point (boundary): {}", fmt_vec(p));
        }
        None => {}
    }
    for note in &r.notes {
        let _ = write!(s, "\nnote: {note}");
    }
    s
}

fn fmt_vec(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{:.9}{:+.9}i", c.re, c.im)).collect();
    format!("({})", parts.join(", "))
}

pub fn cmd_classify(cfg: &ExperimentConfig, _format: Format) -> CmdResult {
    let spec = map(cfg)?;
    let report = classify(spec, &starts(cfg)?, &cfg.budgets);
    let mut files = Written::default();
    files.toml(out_dir(cfg), "classify.toml", &report).map_err(io)?;
    let code = if report.map_type == MapType::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok(Outcome { code, summary: describe_classification(&report), files: files.0 })
}

#[derive(Serialize)]
struct OrbitDoc<'a> {
    stop_reason: StopReason,
    points: &'a [Point],
}

pub fn cmd_orbit(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let orbits = orbits(cfg)?;
    let dir = out_dir(cfg);
    let mut files = Written::default();
    let mut summary = String::new();
    for (k, o) in orbits.iter().enumerate() {
        match format {
            Format::Csv => {
                let mut t = Table::new(coord_header(o.start().dim()));
                for (n, p) in o.points.iter().enumerate() {
                    t.push(coord_cells(n, p));
                }
                files.table(dir, &format!("orbit_{k}.csv"), &t).map_err(io)?;
            }
            Format::Structured => {
                let doc = OrbitDoc { stop_reason: o.stop_reason, points: &o.points };
                files.toml(dir, &format!("orbit_{k}.toml"), &doc).map_err(io)?;
            }
        }
        let _ = writeln!(summary, "start {k}: {} iterates, stopped by {:?}", o.len() - 1, o.stop_reason);
    }
    Ok(Outcome { code: worst_stop(&orbits), summary: summary.trim_end().to_string(), files: files.0 })
}

#[derive(Serialize)]
struct StepDoc {
    start: usize,
    verdict: StepVerdict,
    d_inf_estimate: f64,
    final_step: f64,
    max_increase: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<Vec<f64>>,
}

fn step_doc(k: usize, s: &StepSeries, full: bool) -> StepDoc {
    StepDoc {
        start: k,
        verdict: s.verdict,
        d_inf_estimate: s.d_inf_estimate,
        final_step: s.final_step(),
        max_increase: s.max_increase,
        s: full.then(|| s.s.clone()),
    }
}

#[derive(Serialize)]
struct StepsDoc {
    steps: Vec<StepDoc>,
}

pub fn cmd_steps(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let orbits = orbits(cfg)?;
    let dir = out_dir(cfg);
    let mut files = Written::default();
    let mut summary = String::new();
    let mut docs = Vec::new();
    let mut code = worst_stop(&orbits);
    for (k, o) in orbits.iter().enumerate() {
        let series = step_series(o, &cfg.budgets.step)?;
        if format == Format::Csv {
            let mut t = Table::new(["n", "s_n"]);
            for (n, s) in series.s.iter().enumerate() {
                t.push(vec![n.to_string(), num(*s)]);
            }
            files.table(dir, &format!("steps_{k}.csv"), &t).map_err(io)?;
        }
        if series.verdict == StepVerdict::Inconclusive && code == EXIT_OK {
            code = EXIT_INCONCLUSIVE;
        }
        let _ = writeln!(
            summary,
            "start {k}: {} (d_inf ≈ {:.6e}, final step {:.6e})",
            series.verdict,
            series.d_inf_estimate,
            series.final_step()
        );
        docs.push(step_doc(k, &series, format == Format::Structured));
    }
    let name = if format == Format::Csv { "steps_summary.toml" } else { "steps.toml" };
    files.toml(dir, name, &StepsDoc { steps: docs }).map_err(io)?;
    Ok(Outcome { code, summary: summary.trim_end().to_string(), files: files.0 })
}

fn boundary_limit(cfg: &ExperimentConfig) -> std::result::Result<BoundaryPoint, Failure> {
    let report = classify(map(cfg)?, &starts(cfg)?, &cfg.budgets);
    match report.boundary_point() {
        Some(x) => Ok(x.clone()),
        None => Err(Failure::inconclusive(anyhow!(
            "no boundary Denjoy-Wolff point: {}",
            describe_classification(&report).replace('\n', "; ")
        ))),
    }
}

#[derive(Serialize)]
struct ApproachSummary {
    start: usize,
    flags: ApproachFlags,
    koranyi_sup_tail: f64,
    koranyi_m: Option<f64>,
    special_ratio_mean: f64,
    nt_quotient_sup: f64,
    nontangential_sup: f64,
    arg_margin: f64,
    step_verdict: StepVerdict,
    violations: Vec<LemmaViolation>,
}

#[derive(Serialize)]
struct ApproachDoc {
    x: BoundaryPoint,
    starts: Vec<ApproachSummary>,
}

pub fn cmd_approach(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let x = boundary_limit(cfg)?;
    let orbits = orbits(cfg)?;
    let dir = out_dir(cfg);
    let mut files = Written::default();
    let mut summary = String::new();
    let mut docs = Vec::new();
    for (k, o) in orbits.iter().enumerate() {
        let steps = step_series(o, &cfg.budgets.step)?;
        let report = approach_report(o, &x, &cfg.approach)?;
        let rows = approach_series(o, &x)?;
        let radial = radial_quotient_series(o, &x)?;
        let violations = dwolff::diagnostics::flag_logic_violations(&report.flags);
        match format {
            Format::Csv => {
                let mut header = coord_header(o.start().dim());
                header.extend(
                    ["s_n", "koranyi_q", "special_ratio", "nt_q", "radial_q", "radial_q_im"].map(String::from),
                );
                let mut t = Table::new(header);
                for n in 0..o.len() - 1 {
                    let mut row = coord_cells(n, &o.points[n]);
                    let r = &rows[n];
                    row.extend([
                        num(steps.s[n]),
                        num(r.koranyi_q),
                        num(r.special_ratio),
                        num(r.nt_q),
                        num(radial[n].re),
                        num(radial[n].im),
                    ]);
                    t.push(row);
                }
                files.table(dir, &format!("approach_{k}.csv"), &t).map_err(io)?;
            }
            Format::Structured => {
                files.toml(dir, &format!("approach_{k}.toml"), &report).map_err(io)?;
            }
        }
        let f = report.flags;
        let _ = writeln!(
            summary,
            "start {k}: special={} restricted={} koranyi={} nontangential={} step={} violations={}",
            f.is_special,
            f.is_restricted,
            f.in_koranyi,
            f.is_nontangential,
            steps.verdict,
            violations.len()
        );
        docs.push(ApproachSummary {
            start: k,
            flags: f,
            koranyi_sup_tail: report.koranyi_sup_tail,
            koranyi_m: report.koranyi_m,
            special_ratio_mean: report.special_ratio_mean,
            nt_quotient_sup: report.nt_quotient_sup,
            nontangential_sup: report.nontangential_sup,
            arg_margin: report.arg_margin,
            step_verdict: steps.verdict,
            violations,
        });
    }
    files.toml(dir, "approach_summary.toml", &ApproachDoc { x, starts: docs }).map_err(io)?;
    Ok(Outcome { code: worst_stop(&orbits), summary: summary.trim_end().to_string(), files: files.0 })
}

pub fn run_conjugation(cfg: &ExperimentConfig) -> std::result::Result<ConjugationResult, Failure> {
    let spec = map(cfg)?;
    let opts = cfg.conjugation_options();
    let result = match cfg.conjugation.kind {
        ConjugationKind::Pommerenke => pommerenke_normalized(spec, &opts),
        ConjugationKind::BakerPommerenke => baker_pommerenke_normalized(spec, &opts),
    };
    Ok(result?)
}

pub fn cmd_conjugate(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let result = run_conjugation(cfg)?;
    let dir = out_dir(cfg);
    let mut files = Written::default();
    match format {
        Format::Csv => {
            let mut t = Table::new(["n", "re_g", "im_g", "re_psi", "im_psi"]);
            for (k, n) in result.checkpoints.iter().enumerate() {
                for (g, psi) in result.grid.iter().zip(&result.psi_n[k]) {
                    t.push(vec![n.to_string(), num(g.re), num(g.im), num(psi.re), num(psi.im)]);
                }
            }
            files.table(dir, "conjugation.csv", &t).map_err(io)?;
            let mut r = Table::new(["n", "residual", "shift_re", "shift_im", "delta"]);
            let deltas = result.deltas();
            for (k, n) in result.checkpoints.iter().enumerate() {
                let delta = if k == 0 { String::new() } else { num(deltas[k - 1]) };
                let tau = result.translation[k];
                r.push(vec![n.to_string(), num(result.residual_series[k]), num(tau.re), num(tau.im), delta]);
            }
            files.table(dir, "conjugation_residuals.csv", &r).map_err(io)?;
        }
        Format::Structured => files.toml(dir, "conjugation.toml", &result).map_err(io)?,
    }
    let report = conjugation_report(&result);
    files.text(dir, "conjugation.txt", &report).map_err(io)?;
    Ok(Outcome { code: EXIT_OK, summary: report.trim_end().to_string(), files: files.0 })
}

fn violation_list(v: &[LemmaViolation]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(";")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn harness_table(report: &HarnessReport) -> Table {
    let mut t = Table::new([
        "index",
        "label",
        "family",
        "status",
        "restricted",
        "special",
        "step_verdict",
        "final_step",
        "d_inf",
        "radial_q",
        "radial_q_im",
        "radial_dev",
        "arg_margin",
        "violations",
        "reasons",
    ]);
    for r in &report.rows {
        let status = match r.status {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Skipped => "skipped",
        };
        t.push(vec![
            r.index.to_string(),
            r.label.clone(),
            format!("{:?}", r.family),
            status.to_string(),
            r.restricted.to_string(),
            r.special.to_string(),
            r.step_verdict.map(|v| v.to_string()).unwrap_or_default(),
            opt_num(r.final_step),
            opt_num(r.d_inf_estimate),
            opt_num(r.radial_quotient_final.map(|q| q.re)),
            opt_num(r.radial_quotient_final.map(|q| q.im)),
            opt_num(r.radial_tail_deviation),
            opt_num(r.arg_margin),
            violation_list(&r.violations),
            r.reasons.join("; "),
        ]);
    }
    t
}

#[derive(Serialize)]
struct HarnessDoc {
    seed: u64,
    all_passed: bool,
    summary: HarnessSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    rows: Vec<HarnessRow>,
}

pub fn run_harness(cfg: &ExperimentConfig) -> HarnessReport {
    let suite = if cfg.harness.cases.is_empty() { default_suite(cfg.seed) } else { cfg.harness.cases.clone() };
    theorem_harness(&suite, &cfg.harness_options())
}

pub fn cmd_harness(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let report = run_harness(cfg);
    let dir = out_dir(cfg);
    let mut files = Written::default();
    let rows = match format {
        Format::Csv => {
            files.table(dir, "harness.csv", &harness_table(&report)).map_err(io)?;
            Vec::new()
        }
        // tails are long; the flags and statistics stay in the rows
        Format::Structured => report
            .rows
            .iter()
            .cloned()
            .map(|mut r| {
                r.approach = None;
                r
            })
            .collect(),
    };
    let doc = HarnessDoc { seed: cfg.seed, all_passed: report.all_passed(), summary: report.summary, rows };
    let name = if format == Format::Csv { "harness_summary.toml" } else { "harness.toml" };
    files.toml(dir, name, &doc).map_err(io)?;
    let s = report.summary;
    let mut summary = format!(
        "{} cases: {} passed, {} failed, {} skipped; {} restricted, {} zero_step, {} nonzero_step, {} inconclusive; \
         theorem violations {}, lemma violations {}",
        s.total,
        s.passed,
        s.failed,
        s.skipped,
        s.restricted,
        s.zero_step,
        s.nonzero_step,
        s.inconclusive,
        s.theorem_violations,
        s.lemma_violations
    );
    for r in report.rows.iter().filter(|r| r.status != RowStatus::Pass) {
        let _ = write!(summary, "\n{:?} {}: {}", r.status, r.label, r.reasons.join("; "));
    }
    let code = if report.all_passed() { EXIT_OK } else { EXIT_VERIFICATION };
    Ok(Outcome { code, summary, files: files.0 })
}

pub fn run_probe(cfg: &ExperimentConfig) -> std::result::Result<ProbeReport, Failure> {
    let spec = map(cfg)?;
    let model = spec.model().map_err(Failure::usage)?;
    let starts = if cfg.starts.is_empty() { probe_starts(model, default_dim(spec, model)) } else { cfg.starts.clone() };
    Ok(conjecture_probe(spec, &starts, &cfg.budgets)?)
}

pub fn cmd_probe(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let report = run_probe(cfg)?;
    let dir = out_dir(cfg);
    let mut files = Written::default();
    if format == Format::Csv {
        let dim = report.rows.first().map(|r| r.start.dim()).unwrap_or(1);
        let mut header = vec!["start".to_string()];
        header.extend(coord_header(dim).into_iter().skip(1));
        header.extend(["verdict", "d_inf", "final_step"].map(String::from));
        let mut t = Table::new(header);
        for (k, r) in report.rows.iter().enumerate() {
            let mut row = coord_cells(k, &r.start);
            row.extend([r.verdict.to_string(), num(r.d_inf_estimate), num(r.final_step)]);
            t.push(row);
        }
        files.table(dir, "probe.csv", &t).map_err(io)?;
    }
    files.toml(dir, "probe.toml", &report).map_err(io)?;
    let mut summary = format!("{} ({} starts, map classified {})", report.verdict, report.rows.len(), report.map_type);
    for (k, r) in report.rows.iter().enumerate() {
        let _ = write!(summary, "\nstart {k}: {} (d_inf ≈ {:.6e})", r.verdict, r.d_inf_estimate);
    }
    Ok(Outcome { code: EXIT_OK, summary, files: files.0 })
}

/// Orbit of the first start in the disk cross-section, with the
/// Denjoy-Wolff point when the classifier locates one.
pub fn plot_data(cfg: &ExperimentConfig) -> std::result::Result<PlotData, Failure> {
    let spec = map(cfg)?;
    let starts = starts(cfg)?;
    let orbit = iterate(spec, &starts[0], cfg.budgets.n_max, &cfg.budgets.stop)?;
    let dw = if orbit.len() > 1 {
        let report = classify(spec, &starts, &cfg.budgets);
        let dim = starts[0].dim();
        match report.dw_point {
            Some(DwPoint::Boundary(b)) => Some(b.ball_frame(dim)[0]),
            Some(DwPoint::Interior(p)) => Some(p[0]),
            None => None,
        }
        .map(|u| (u.re, u.im))
    } else {
        None
    };
    Ok(PlotData::from_orbit(&orbit, dw))
}

pub fn cmd_plot(cfg: &ExperimentConfig, _format: Format) -> CmdResult {
    let data = plot_data(cfg)?;
    let svg = render_svg(&data, &cfg.plot);
    let mut files = Written::default();
    files.text(out_dir(cfg), "plot.svg", &svg).map_err(io)?;
    let summary = match data.points.last() {
        Some((x, y)) if !data.is_trivial() => {
            format!("{} points plotted, final point ({x:.6}, {y:.6})", data.points.len())
        }
        _ => "start point only".to_string(),
    };
    Ok(Outcome { code: EXIT_OK, summary, files: files.0 })
}
