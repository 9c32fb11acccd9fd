//! Boundary approach of orbits: Koranyi, special and restricted flags, the
//! radial quotient `(1 − ζₙ₊₁)/(1 − ζₙ)` with `ζₙ = ⟨Zₙ, X⟩`, a harness that
//! checks "restricted ⟹ zero step" on a suite of parabolic maps, and a
//! probe comparing step verdicts across starts.
//!
//! All quantities are read in the ball frame; Siegel and half-plane orbits
//! go through [`ApproachCoords`] so nothing is lost to cancellation near `∞`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    classify, iterate, step_series, tail_len, Budgets, DynamicsError, MapType, Orbit, StepVerdict,
};
use crate::geometry::{ApproachCoords, BoundaryPoint, GeometryError, Model, Point};
use crate::maps::{compose, MapError, MapSpec};
use crate::sample;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("orbit does not approach the boundary point: distance {end:e} at the end vs {start:e} at the tail start")]
    NotConverging { start: f64, end: f64 },
    #[error("orbit too short: need at least {needed} points, have {have}")]
    TooShort { needed: usize, have: usize },
    #[error("degenerate quotient at index {index}")]
    DegenerateQuotient { index: usize },
    #[error("need at least {needed} starts, got {have}")]
    TooFewStarts { needed: usize, have: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Map(#[from] MapError),
}

pub type Result<T> = std::result::Result<T, DiagnosticsError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ApproachOptions {
    pub tail_fraction: f64,
    /// `is_special` needs the tail mean of the special ratio below this.
    pub tol_ratio: f64,
    /// Tail suprema at or above this count as unbounded.
    pub m_cap: f64,
}

impl Default for ApproachOptions {
    fn default() -> Self {
        ApproachOptions { tail_fraction: 0.2, tol_ratio: 1e-2, m_cap: 1e3 }
    }
}

/// Per-point approach quantities, one row per orbit point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproachRow {
    pub koranyi_q: f64,
    pub special_ratio: f64,
    /// Stolz quotient of the projection `⟨Zₙ,X⟩X`.
    pub nt_q: f64,
    /// Stolz quotient `‖X − Zₙ‖/(1 − ‖Zₙ‖)` of the point itself.
    pub nontangential_q: f64,
    pub tangency_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproachFlags {
    pub is_special: bool,
    pub is_restricted: bool,
    pub in_koranyi: bool,
    pub is_nontangential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachReport {
    pub x: BoundaryPoint,
    /// Index of the first orbit point in the tail.
    pub tail_start: usize,
    pub koranyi_sup_tail: f64,
    /// Smallest admissible Koranyi amplitude on the tail, `None` if unbounded.
    pub koranyi_m: Option<f64>,
    pub special_ratio_tail: Vec<f64>,
    pub nt_quotient_tail: Vec<f64>,
    pub nontangential_tail: Vec<f64>,
    pub tangency_angle_tail: Vec<f64>,
    pub special_ratio_mean: f64,
    pub nt_quotient_sup: f64,
    pub nontangential_sup: f64,
    /// `ε = π − 2·max|θₙ|` over the tail, so that `−2θₙ ≥ −π + ε`.
    pub arg_margin: f64,
    pub flags: ApproachFlags,
}

fn coords(p: &Point, x: &BoundaryPoint, index: usize) -> Result<ApproachCoords> {
    let c = ApproachCoords::from_point(p, x)?;
    if c.one_minus_proj.norm_sqr() == 0.0 {
        return Err(DiagnosticsError::DegenerateQuotient { index });
    }
    Ok(c)
}

fn row(c: &ApproachCoords, index: usize) -> Result<ApproachRow> {
    let nt_q = c.projection_nt_quotient().map_err(|_| DiagnosticsError::DegenerateQuotient { index })?;
    let tangency_angle = c.tangency_angle().map_err(|_| DiagnosticsError::DegenerateQuotient { index })?;
    Ok(ApproachRow {
        koranyi_q: c.koranyi_quotient(),
        special_ratio: c.special_ratio(),
        nt_q,
        nontangential_q: c.nontangential_quotient(),
        tangency_angle,
    })
}

/// Approach quantities for every point of `orbit` relative to `x`.
pub fn approach_series(orbit: &Orbit, x: &BoundaryPoint) -> Result<Vec<ApproachRow>> {
    orbit.points.iter().enumerate().map(|(i, p)| row(&coords(p, x, i)?, i)).collect()
}

fn approach_tail(orbit: &Orbit, x: &BoundaryPoint, tail_fraction: f64) -> Result<(usize, Vec<ApproachRow>, f64, f64)> {
    if orbit.len() < 2 {
        return Err(DiagnosticsError::TooShort { needed: 2, have: orbit.len() });
    }
    let start = orbit.len() - tail_len(orbit.len(), tail_fraction);
    let start = start.min(orbit.len() - 2);
    let mut rows = Vec::with_capacity(orbit.len() - start);
    let mut dist = Vec::with_capacity(orbit.len() - start);
    for (i, p) in orbit.points.iter().enumerate().skip(start) {
        let c = coords(p, x, i)?;
        dist.push(c.dist_sqr);
        rows.push(row(&c, i)?);
    }
    Ok((start, rows, dist[0].sqrt(), dist[dist.len() - 1].sqrt()))
}

fn sup(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

fn bounded(s: f64, cap: f64) -> bool {
    s.is_finite() && s < cap
}

/// Tail statistics and flags for an orbit approaching `x`.
pub fn approach_report(orbit: &Orbit, x: &BoundaryPoint, opts: &ApproachOptions) -> Result<ApproachReport> {
    let (tail_start, rows, d0, d1) = approach_tail(orbit, x, opts.tail_fraction)?;
    if !(d1 < d0) {
        return Err(DiagnosticsError::NotConverging { start: d0, end: d1 });
    }
    let pick = |f: fn(&ApproachRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let koranyi = pick(|r| r.koranyi_q);
    let special_ratio_tail = pick(|r| r.special_ratio);
    let nt_quotient_tail = pick(|r| r.nt_q);
    let nontangential_tail = pick(|r| r.nontangential_q);
    let tangency_angle_tail = pick(|r| r.tangency_angle);

    let koranyi_sup_tail = sup(&koranyi);
    let special_ratio_mean = special_ratio_tail.iter().sum::<f64>() / special_ratio_tail.len() as f64;
    let nt_quotient_sup = sup(&nt_quotient_tail);
    let nontangential_sup = sup(&nontangential_tail);
    let max_angle = tangency_angle_tail.iter().map(|t| t.abs()).fold(0.0, f64::max);

    let is_special = special_ratio_mean < opts.tol_ratio;
    let in_koranyi = bounded(koranyi_sup_tail, opts.m_cap);
    let flags = ApproachFlags {
        is_special,
        is_restricted: is_special && bounded(nt_quotient_sup, opts.m_cap),
        in_koranyi,
        is_nontangential: bounded(nontangential_sup, opts.m_cap),
    };
    Ok(ApproachReport {
        x: x.clone(),
        tail_start,
        koranyi_sup_tail,
        koranyi_m: in_koranyi.then_some(koranyi_sup_tail.max(1.0)),
        special_ratio_tail,
        nt_quotient_tail,
        nontangential_tail,
        tangency_angle_tail,
        special_ratio_mean,
        nt_quotient_sup,
        nontangential_sup,
        arg_margin: PI - 2.0 * max_angle,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaViolation {
    /// non-tangential but not restricted
    NontangentialNotRestricted,
    /// special and inside a Koranyi region but not restricted
    SpecialKoranyiNotRestricted,
    /// special and restricted but not inside a Koranyi region
    RestrictedNotKoranyi,
}

/// Implications between the approach flags that must hold on every report.
pub fn flag_logic_violations(flags: &ApproachFlags) -> Vec<LemmaViolation> {
    let mut out = Vec::new();
    if flags.is_nontangential && !flags.is_restricted {
        out.push(LemmaViolation::NontangentialNotRestricted);
    }
    if flags.is_special && flags.in_koranyi && !flags.is_restricted {
        out.push(LemmaViolation::SpecialKoranyiNotRestricted);
    }
    if flags.is_special && flags.is_restricted && !flags.in_koranyi {
        out.push(LemmaViolation::RestrictedNotKoranyi);
    }
    out
}

/// `(1 − ζₙ₊₁)/(1 − ζₙ)` along the orbit, `ζₙ = ⟨Zₙ, X⟩`. On Siegel and
/// half-plane orbits this is `(zₙ + 1)/(zₙ₊₁ + 1)`.
pub fn radial_quotient_series(orbit: &Orbit, x: &BoundaryPoint) -> Result<Vec<Complex64>> {
    let gaps: Vec<Complex64> =
        orbit.points.iter().enumerate().map(|(i, p)| coords(p, x, i).map(|c| c.one_minus_proj)).collect::<Result<_>>()?;
    Ok(gaps.windows(2).map(|w| w[1] / w[0]).collect())
}

// ---------------------------------------------------------------------------
// Theorem harness

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseFamily {
    SiegelTranslation,
    HeisenbergTranslation,
    Mixed,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCase {
    pub label: String,
    pub family: CaseFamily,
    pub spec: MapSpec,
    pub start: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessOptions {
    pub budgets: Budgets,
    pub approach: ApproachOptions,
    /// Restricted rows need the tail mean of `|qₙ − 1|` below this.
    pub radial_tol: f64,
    /// Restricted rows need an argument margin above this.
    pub arg_eps: f64,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions { budgets: Budgets::default(), approach: ApproachOptions::default(), radial_tol: 1e-2, arg_eps: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessRow {
    pub index: usize,
    pub label: String,
    pub family: CaseFamily,
    pub spec: MapSpec,
    pub start: Point,
    pub status: RowStatus,
    pub restricted: bool,
    pub special: bool,
    pub step_verdict: Option<StepVerdict>,
    pub final_step: Option<f64>,
    pub d_inf_estimate: Option<f64>,
    pub radial_quotient_final: Option<Complex64>,
    /// Tail mean of `|qₙ − 1|`.
    pub radial_tail_deviation: Option<f64>,
    pub arg_margin: Option<f64>,
    pub approach: Option<ApproachReport>,
    pub violations: Vec<LemmaViolation>,
    /// Reasons for a failed or skipped row.
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub restricted: usize,
    pub zero_step: usize,
    pub nonzero_step: usize,
    pub inconclusive: usize,
    pub theorem_violations: usize,
    pub lemma_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub rows: Vec<HarnessRow>,
    pub summary: HarnessSummary,
}

impl HarnessReport {
    /// True when no row failed or was skipped.
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.skipped == 0
    }
}

/// A second start near `p` for the classification cross-check.
fn companion_start(p: &Point) -> Point {
    match p {
        Point::Halfplane(h) => Point::halfplane(h.z() + 1.0).expect("shifted right stays inside"),
        Point::Siegel(s) => Point::siegel(s.z() + 1.0, s.w().to_vec()).expect("shifted right stays inside"),
        Point::Disk(d) => Point::disk(d.z() * 0.5).expect("scaled towards the centre"),
        Point::Ball(b) => {
            Point::ball(b.z1() * 0.5, b.w().iter().map(|w| w * 0.5).collect()).expect("scaled towards the centre")
        }
    }
}

fn blank_row(index: usize, case: &SuiteCase) -> HarnessRow {
    HarnessRow {
        index,
        label: case.label.clone(),
        family: case.family,
        spec: case.spec.clone(),
        start: case.start.clone(),
        status: RowStatus::Skipped,
        restricted: false,
        special: false,
        step_verdict: None,
        final_step: None,
        d_inf_estimate: None,
        radial_quotient_final: None,
        radial_tail_deviation: None,
        arg_margin: None,
        approach: None,
        violations: Vec::new(),
        reasons: Vec::new(),
    }
}

fn run_case(index: usize, case: &SuiteCase, opts: &HarnessOptions) -> HarnessRow {
    let mut row = blank_row(index, case);
    let report = classify(&case.spec, &[case.start.clone(), companion_start(&case.start)], &opts.budgets);
    let x = match (report.map_type, report.boundary_point()) {
        (MapType::Parabolic, Some(x)) => x.clone(),
        _ => {
            row.reasons.push(format!("classified {}: {}", report.map_type, report.notes.join("; ")));
            return row;
        }
    };
    match evaluate_case(case, &x, opts, &mut row) {
        Ok(()) => {
            row.status = if row.reasons.is_empty() { RowStatus::Pass } else { RowStatus::Fail };
        }
        Err(e) => {
            row.status = RowStatus::Fail;
            row.reasons.push(e.to_string());
        }
    }
    row
}

fn evaluate_case(case: &SuiteCase, x: &BoundaryPoint, opts: &HarnessOptions, row: &mut HarnessRow) -> Result<()> {
    let orbit = iterate(&case.spec, &case.start, opts.budgets.n_max, &opts.budgets.stop)?;
    let steps = step_series(&orbit, &opts.budgets.step)?;
    let approach = approach_report(&orbit, x, &opts.approach)?;
    let radial = radial_quotient_series(&orbit, x)?;

    let tail = &radial[approach.tail_start.min(radial.len() - 1)..];
    let deviation = tail.iter().map(|q| (q - 1.0).norm()).sum::<f64>() / tail.len() as f64;
    let restricted = approach.flags.is_restricted;
    let verdict = steps.verdict;

    row.restricted = restricted;
    row.special = approach.flags.is_special;
    row.step_verdict = Some(verdict);
    row.final_step = Some(steps.final_step());
    row.d_inf_estimate = Some(steps.d_inf_estimate);
    row.radial_quotient_final = radial.last().copied();
    row.radial_tail_deviation = Some(deviation);
    row.arg_margin = Some(approach.arg_margin);
    row.violations = flag_logic_violations(&approach.flags);

    if verdict == StepVerdict::Inconclusive {
        row.reasons.push("inconclusive step verdict".into());
    }
    if restricted && verdict != StepVerdict::ZeroStep {
        row.reasons.push(format!("restricted orbit with {verdict}"));
    }
    if verdict == StepVerdict::NonzeroStep && restricted {
        row.reasons.push("nonzero step on a restricted orbit".into());
    }
    if restricted && !(deviation < opts.radial_tol) {
        row.reasons.push(format!("radial quotient tail deviation {deviation:e}"));
    }
    if restricted && !(approach.arg_margin > opts.arg_eps) {
        row.reasons.push(format!("argument margin {:.6}", approach.arg_margin));
    }
    for v in &row.violations {
        row.reasons.push(format!("flag logic: {v:?}"));
    }
    row.approach = Some(approach);
    Ok(())
}

fn summarize(rows: &[HarnessRow]) -> HarnessSummary {
    let mut s = HarnessSummary { total: rows.len(), ..HarnessSummary::default() };
    for r in rows {
        match r.status {
            RowStatus::Pass => s.passed += 1,
            RowStatus::Fail => s.failed += 1,
            RowStatus::Skipped => s.skipped += 1,
        }
        s.restricted += r.restricted as usize;
        match r.step_verdict {
            Some(StepVerdict::ZeroStep) => s.zero_step += 1,
            Some(StepVerdict::NonzeroStep) => s.nonzero_step += 1,
            Some(StepVerdict::Inconclusive) => s.inconclusive += 1,
            None => {}
        }
        if r.restricted && r.step_verdict != Some(StepVerdict::ZeroStep) {
            s.theorem_violations += 1;
        }
        s.lemma_violations += r.violations.len();
    }
    s
}

/// Runs every case (in parallel) and reports rows in suite order.
pub fn theorem_harness(suite: &[SuiteCase], opts: &HarnessOptions) -> HarnessReport {
    let rows: Vec<HarnessRow> = suite.par_iter().enumerate().map(|(i, c)| run_case(i, c, opts)).collect();
    let summary = summarize(&rows);
    HarnessReport { rows, summary }
}

fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

fn siegel(z: Complex64, w: Vec<Complex64>) -> Point {
    Point::siegel(z, w).expect("suite start inside the Siegel domain")
}

/// The built-in suite: 20 Siegel translations by real `b ∈ [0.5, 2]` from
/// starts with `‖w₀‖ ∈ {0, 0.3, 0.6√Re z₀}`, 10 Heisenberg translations with
/// `‖a‖ ∈ [0.5, 2]` in `ℍ²` and `ℍ³`, and 5 compositions.
pub fn default_suite(seed: u64) -> Vec<SuiteCase> {
    let mut rng = sample::rng(seed);
    let c = Complex64::new;
    let mut suite = Vec::new();

    for i in 0..20 {
        let b = rng.gen_range(0.5..2.0);
        let z0 = c(rng.gen_range(1.0..3.0), rng.gen_range(-1.0..1.0));
        let radius = match i % 3 {
            0 => 0.0,
            1 => 0.3,
            _ => 0.6 * z0.re.sqrt(),
        };
        let w0 = unit_vector(&mut rng, 1).into_iter().map(|u| u * radius).collect();
        suite.push(SuiteCase {
            label: format!("siegel-{i:02} b={b:.4}"),
            family: CaseFamily::SiegelTranslation,
            spec: MapSpec::siegel_translation(c(b, 0.0)),
            start: siegel(z0, w0),
        });
    }

    for i in 0..10 {
        let dim = 2 + i % 2;
        let a_norm = rng.gen_range(0.5..2.0);
        let a: Vec<Complex64> = unit_vector(&mut rng, dim - 1).into_iter().map(|u| u * a_norm).collect();
        let b = rng.gen_range(-1.0..1.0);
        let rho = rng.gen_range(0.5..2.0);
        let w0: Vec<Complex64> =
            unit_vector(&mut rng, dim - 1).into_iter().map(|u| u * rng.gen_range(0.0..1.0)).collect();
        let wn: f64 = w0.iter().map(|x| x.norm_sqr()).sum();
        let z0 = c(rho + wn, rng.gen_range(-1.0..1.0));
        suite.push(SuiteCase {
            label: format!("heisenberg-{i:02} |a|={a_norm:.4}"),
            family: CaseFamily::HeisenbergTranslation,
            spec: MapSpec::heisenberg(a, b),
            start: siegel(z0, w0),
        });
    }

    let st = |b: Complex64| MapSpec::siegel_translation(b);
    let comp = |f: &MapSpec, g: &MapSpec| compose(f, g).expect("suite members share a model");
    let mixed = [
        ("siegel(1) . siegel(0.5+0.5i)", comp(&st(c(1.0, 0.0)), &st(c(0.5, 0.5)))),
        ("siegel(1) . heisenberg(0, 1.5)", comp(&st(c(1.0, 0.0)), &MapSpec::heisenberg(vec![c(0.0, 0.0)], 1.5))),
        (
            "heisenberg . heisenberg",
            comp(&MapSpec::heisenberg(vec![c(0.5, 0.5)], 0.25), &MapSpec::heisenberg(vec![c(0.25, -0.75)], -0.5)),
        ),
        ("heisenberg(a, 0) . siegel(i)", comp(&MapSpec::heisenberg(vec![c(0.6, 0.2)], 0.0), &st(c(0.0, 1.0)))),
        (
            "siegel(0.5) . siegel(0.75) . siegel(0.25i)",
            MapSpec::Composition { members: vec![st(c(0.5, 0.0)), st(c(0.75, 0.0)), st(c(0.0, 0.25))] },
        ),
    ];
    for (label, spec) in mixed {
        suite.push(SuiteCase {
            label: label.to_string(),
            family: CaseFamily::Mixed,
            spec,
            start: siegel(c(1.5, 0.25), vec![c(0.3, 0.0)]),
        });
    }
    suite
}

// ---------------------------------------------------------------------------
// Conjecture probe

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    Consistent,
    Discrepant,
}

impl std::fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProbeVerdict::Consistent => "CONSISTENT",
            ProbeVerdict::Discrepant => "DISCREPANT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub start: Point,
    pub verdict: StepVerdict,
    pub d_inf_estimate: f64,
    pub final_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub spec: MapSpec,
    pub map_type: MapType,
    pub rows: Vec<ProbeRow>,
    pub verdict: ProbeVerdict,
}

pub const PROBE_MIN_STARTS: usize = 5;

/// Five deterministic starts spread over the model.
pub fn probe_starts(model: Model, dim: usize) -> Vec<Point> {
    let c = Complex64::new;
    let k = dim.saturating_sub(1);
    let w = |s: Complex64| -> Vec<Complex64> { (0..k).map(|j| s * c(1.0, 0.5 * j as f64)).collect() };
    match model {
        Model::Halfplane => [c(1.0, 0.0), c(2.0, 1.0), c(0.5, -1.0), c(4.0, 3.0), c(0.25, 0.5)]
            .into_iter()
            .map(|z| Point::halfplane(z).expect("inside the half-plane"))
            .collect(),
        Model::Disk => [c(0.0, 0.0), c(0.3, 0.4), c(-0.5, 0.1), c(0.1, -0.7), c(0.8, 0.0)]
            .into_iter()
            .map(|z| Point::disk(z).expect("inside the disk"))
            .collect(),
        Model::Siegel => {
            let shifts = [c(0.0, 0.0), c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.5), c(0.1, 0.0)];
            [c(1.0, 0.0), c(2.0, 1.0), c(3.0, -2.0), c(1.5, 0.5), c(0.5, 4.0)]
                .into_iter()
                .zip(shifts)
                .map(|(z, s)| {
                    let w = w(s);
                    let wn: f64 = w.iter().map(|x| x.norm_sqr()).sum();
                    Point::siegel(z + wn, w).expect("inside the Siegel domain")
                })
                .collect()
        }
        Model::Ball => {
            let shifts = [c(0.0, 0.0), c(0.2, 0.1), c(-0.1, 0.2), c(0.3, -0.1), c(0.05, 0.0)];
            [c(0.0, 0.0), c(0.3, 0.2), c(-0.4, 0.0), c(0.1, -0.5), c(0.6, 0.0)]
                .into_iter()
                .zip(shifts)
                .map(|(z, s)| Point::ball(z, w(s)).expect("inside the ball"))
                .collect()
        }
    }
}

/// Step verdicts from several starts; agreement is CONSISTENT.
pub fn conjecture_probe(spec: &MapSpec, starts: &[Point], budgets: &Budgets) -> Result<ProbeReport> {
    if starts.len() < PROBE_MIN_STARTS {
        return Err(DiagnosticsError::TooFewStarts { needed: PROBE_MIN_STARTS, have: starts.len() });
    }
    let map_type = classify(spec, &starts[..2], budgets).map_type;
    let rows: Vec<ProbeRow> = starts
        .par_iter()
        .map(|s| -> Result<ProbeRow> {
            let orbit = iterate(spec, s, budgets.n_max, &budgets.stop)?;
            let steps = step_series(&orbit, &budgets.step)?;
            Ok(ProbeRow {
                start: s.clone(),
                verdict: steps.verdict,
                d_inf_estimate: steps.d_inf_estimate,
                final_step: steps.final_step(),
            })
        })
        .collect::<Result<_>>()?;
    let verdict = if rows.iter().all(|r| r.verdict == rows[0].verdict) {
        ProbeVerdict::Consistent
    } else {
        ProbeVerdict::Discrepant
    };
    Ok(ProbeReport { spec: spec.clone(), map_type, rows, verdict })
}
