//! Forward orbits and what can be read off them: the step series
//! `sₙ = d(zₙ, zₙ₊₁)`, the Denjoy-Wolff point, the boundary multiplier and
//! the elliptic / hyperbolic / parabolic trichotomy.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cayley_c, cayley_c_inv, pdist, BoundaryPoint, GeometryError, Model, Point};
use crate::maps::{MapError, MapSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("evaluation failed at step {index}: {source}")]
    Evaluation { index: usize, source: MapError },
    #[error("start point is in {found}, map acts on {expected}")]
    StartModel { expected: Model, found: Model },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("orbit too short: need at least {needed} points, have {have}")]
    TooShort { needed: usize, have: usize },
    #[error("need at least two starts, got {0}")]
    TooFewStarts(usize),
    #[error("orbit limits disagree by {spread:e} (tolerance {tol:e})")]
    Disagreement { spread: f64, tol: f64 },
    #[error("orbit has not settled: neither near the boundary nor at a fixed point")]
    NotConverged,
    #[error("multiplier is not defined for an interior Denjoy-Wolff point")]
    InteriorLimit,
}

pub type Result<T> = std::result::Result<T, DynamicsError>;

/// When to stop iterating before `n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StopPolicy {
    /// Unbounded models: stop once `|z|` exceeds this.
    pub max_magnitude: f64,
    /// Stop once the model functional (`Re z − ‖w‖²` or `1 − ‖Z‖²`) drops below this.
    pub min_margin: f64,
    /// Stop once consecutive points are this close in the pseudo-hyperbolic metric.
    pub fixed_point_tol: f64,
}

impl Default for StopPolicy {
    fn default() -> Self {
        StopPolicy { max_magnitude: 1e12, min_margin: 1e-12, fixed_point_tol: 1e-15 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIter,
    BoundaryProximity,
    InteriorFixedPoint,
    NumericFailure,
}

/// `points[0] = start`, `points[k + 1] = f(points[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub spec: MapSpec,
    pub points: Vec<Point>,
    pub stop_reason: StopReason,
}

impl Orbit {
    pub fn start(&self) -> &Point {
        &self.points[0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("orbit holds its start")
    }

    pub fn model(&self) -> Model {
        self.points[0].model()
    }
}

fn near_boundary(p: &Point, policy: &StopPolicy) -> bool {
    if p.model().is_unbounded() && p.first().norm() > policy.max_magnitude {
        return true;
    }
    p.margin() < policy.min_margin
}

/// Computes up to `n_max` forward iterates of `start`.
pub fn iterate(spec: &MapSpec, start: &Point, n_max: usize, policy: &StopPolicy) -> Result<Orbit> {
    let model = spec.model()?;
    if start.model() != model {
        return Err(DynamicsError::StartModel { expected: model, found: start.model() });
    }
    let mut points = Vec::with_capacity(n_max.min(1 << 20) + 1);
    points.push(start.clone());
    let mut stop_reason = StopReason::MaxIter;
    for index in 0..n_max {
        let cur = &points[index];
        let next = match spec.evaluate(cur) {
            Ok(p) => p,
            Err(MapError::Escaped { margin, .. }) if margin.is_nan() => {
                stop_reason = StopReason::NumericFailure;
                break;
            }
            Err(source) => return Err(DynamicsError::Evaluation { index, source }),
        };
        let step = pdist(cur, &next)?;
        let boundary = near_boundary(&next, policy);
        points.push(next);
        if boundary {
            stop_reason = StopReason::BoundaryProximity;
            break;
        }
        if step <= policy.fixed_point_tol {
            stop_reason = StopReason::InteriorFixedPoint;
            break;
        }
    }
    Ok(Orbit { spec: spec.clone(), points, stop_reason })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepVerdict {
    ZeroStep,
    NonzeroStep,
    Inconclusive,
}

impl std::fmt::Display for StepVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepVerdict::ZeroStep => "zero_step",
            StepVerdict::NonzeroStep => "nonzero_step",
            StepVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Finite-sample decision rule for the step limit `d∞`.
///
/// * zero step: tail mean `< tol_step` and the second-half mean is at most
///   half the first-half mean;
/// * non-zero step: tail mean `> 10·tol_step` and the half means differ by
///   less than `plateau_tol` relative;
/// * inconclusive otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepRule {
    pub tol_step: f64,
    pub tail_fraction: f64,
    pub plateau_tol: f64,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule { tol_step: 1e-3, tail_fraction: 0.1, plateau_tol: 1e-2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepEvidence {
    pub tail_window: usize,
    /// `1 − mean(second half)/mean(first half)`.
    pub decrease_rate: f64,
    pub first_half_mean: f64,
    pub second_half_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSeries {
    pub s: Vec<f64>,
    pub d_inf_estimate: f64,
    pub verdict: StepVerdict,
    pub evidence: StepEvidence,
    /// Largest `sₙ₊₁ − sₙ`; Schwarz–Pick keeps it at rounding level.
    pub max_increase: f64,
}

impl StepSeries {
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.max_increase <= slack
    }

    pub fn final_step(&self) -> f64 {
        *self.s.last().expect("non-empty step series")
    }
}

pub(crate) fn tail_len(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction).ceil() as usize).clamp(1, n.max(1))
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

pub fn step_values(orbit: &Orbit) -> Result<Vec<f64>> {
    orbit.points.windows(2).map(|w| pdist(&w[0], &w[1]).map_err(DynamicsError::from)).collect()
}

pub fn step_series(orbit: &Orbit, rule: &StepRule) -> Result<StepSeries> {
    if orbit.len() < 2 {
        return Err(DynamicsError::TooShort { needed: 2, have: orbit.len() });
    }
    let s = step_values(orbit)?;
    Ok(summarize_steps(s, rule))
}

pub(crate) fn summarize_steps(s: Vec<f64>, rule: &StepRule) -> StepSeries {
    let n = s.len();
    let tail = tail_len(n, rule.tail_fraction);
    let d_inf = mean(&s[n - tail..]);
    let (first, second) = s.split_at(n / 2);
    let (m1, m2) = (mean(first), mean(second));
    let decrease_rate = if m1 > 0.0 {
        1.0 - m2 / m1
    } else if m1 == 0.0 && m2 == 0.0 {
        1.0
    } else {
        f64::NAN
    };
    let rel_change = if m1 > 0.0 { (m2 - m1).abs() / m1 } else { f64::NAN };
    let verdict = if d_inf < rule.tol_step && decrease_rate >= 0.5 {
        StepVerdict::ZeroStep
    } else if d_inf > 10.0 * rule.tol_step && rel_change < rule.plateau_tol {
        StepVerdict::NonzeroStep
    } else {
        StepVerdict::Inconclusive
    };
    let max_increase = s.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    StepSeries {
        s,
        d_inf_estimate: d_inf,
        verdict,
        evidence: StepEvidence { tail_window: tail, decrease_rate, first_half_mean: m1, second_half_mean: m2 },
        max_increase: if n > 1 { max_increase } else { 0.0 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DwLocation {
    Interior,
    Boundary,
}

/// Denjoy-Wolff point; interior points are given in the ball frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DwPoint {
    Interior(Vec<Complex64>),
    Boundary(BoundaryPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DwEstimate {
    pub point: DwPoint,
    pub location: DwLocation,
    /// Largest Euclidean distance between orbit endpoints in the ball frame.
    pub spread: f64,
}

fn frame_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Orbit still heading for the boundary: the gap at the end is less than
/// half the gap a quarter of the way in.
fn drifting_outward(orbit: &Orbit) -> bool {
    let quarter = &orbit.points[orbit.len() / 4];
    orbit.last().gap() < 0.5 * quarter.gap()
}

fn locate(spec: &MapSpec, orbits: &[Orbit], tol: f64) -> Result<DwEstimate> {
    let finals: Vec<Vec<Complex64>> = orbits.iter().map(|o| o.last().ball_frame()).collect();
    let mut spread = 0.0f64;
    for i in 0..finals.len() {
        for j in i + 1..finals.len() {
            spread = spread.max(frame_distance(&finals[i], &finals[j]));
        }
    }
    if !(spread <= tol) {
        return Err(DynamicsError::Disagreement { spread, tol });
    }
    let last = orbits[0].last();
    let norm = (1.0 - last.gap()).max(0.0).sqrt();
    let dist_to_sphere = last.gap() / (1.0 + norm);
    if dist_to_sphere <= tol {
        let model = last.model();
        let point = if model.is_unbounded() && orbits.iter().all(|o| o.last().first().norm() > 1.0 / tol) {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::finite(finals[0].clone())?
        };
        return Ok(DwEstimate { point: DwPoint::Boundary(point), location: DwLocation::Boundary, spread });
    }
    let image = spec.evaluate(last)?;
    let euclid = frame_distance(&image.ball_frame(), &finals[0]);
    let hyper = pdist(last, &image)?;
    if euclid < tol && hyper < tol && !drifting_outward(&orbits[0]) {
        Ok(DwEstimate { point: DwPoint::Interior(finals[0].clone()), location: DwLocation::Interior, spread })
    } else {
        Err(DynamicsError::NotConverged)
    }
}

fn orbits_for(spec: &MapSpec, starts: &[Point], n_max: usize, policy: &StopPolicy) -> Result<Vec<Orbit>> {
    if starts.len() < 2 {
        return Err(DynamicsError::TooFewStarts(starts.len()));
    }
    starts.iter().map(|s| iterate(spec, s, n_max, policy)).collect()
}

/// Common limit of the orbits of `starts`.
pub fn estimate_denjoy_wolff(
    spec: &MapSpec,
    starts: &[Point],
    n_max: usize,
    tol_dw: f64,
    policy: &StopPolicy,
) -> Result<DwEstimate> {
    let orbits = orbits_for(spec, starts, n_max, policy)?;
    locate(spec, &orbits, tol_dw)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierEstimate {
    /// Estimate clipped to `(0, 1]`.
    pub c: f64,
    /// Running minimum before clipping.
    pub raw: f64,
    pub clipped: bool,
    pub tail_window: usize,
}

/// Running minimum over the orbit tail of
/// `(1 − ‖Zₙ₊₁‖)/(1 − ‖Zₙ‖) = [gap(Zₙ₊₁)/gap(Zₙ)]·(1 + ‖Zₙ‖)/(1 + ‖Zₙ₊₁‖)`,
/// with `gap = 1 − ‖·‖²` taken from [`Point::gap`].
pub fn estimate_multiplier(orbit: &Orbit, tail_fraction: f64) -> Result<MultiplierEstimate> {
    if orbit.stop_reason == StopReason::InteriorFixedPoint {
        return Err(DynamicsError::InteriorLimit);
    }
    if orbit.len() < 2 {
        return Err(DynamicsError::TooShort { needed: 2, have: orbit.len() });
    }
    let gaps: Vec<f64> = orbit.points.iter().map(Point::gap).collect();
    let ratios: Vec<f64> = gaps
        .windows(2)
        .map(|g| {
            let (n0, n1) = ((1.0 - g[0]).max(0.0).sqrt(), (1.0 - g[1]).max(0.0).sqrt());
            g[1] / g[0] * (1.0 + n0) / (1.0 + n1)
        })
        .collect();
    let tail = tail_len(ratios.len(), tail_fraction);
    let raw = ratios[ratios.len() - tail..].iter().copied().fold(f64::INFINITY, f64::min);
    let clipped = raw > 1.0;
    Ok(MultiplierEstimate { c: raw.min(1.0), raw, clipped, tail_window: tail })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapType {
    Elliptic,
    Hyperbolic,
    Parabolic,
    Inconclusive,
}

impl std::fmt::Display for MapType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MapType::Elliptic => "elliptic",
            MapType::Hyperbolic => "hyperbolic",
            MapType::Parabolic => "parabolic",
            MapType::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    pub n_max: usize,
    pub tol_dw: f64,
    pub tol_c: f64,
    /// Tail used for the multiplier running minimum.
    pub tail_fraction: f64,
    pub stop: StopPolicy,
    pub step: StepRule,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            n_max: 100_000,
            tol_dw: 1e-4,
            tol_c: 1e-3,
            tail_fraction: 0.1,
            stop: StopPolicy::default(),
            step: StepRule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub map_type: MapType,
    pub dw_point: Option<DwPoint>,
    pub dw_location: Option<DwLocation>,
    /// Boundary dilatation coefficient; `|f′(p)|` for elliptic maps.
    pub multiplier_c: Option<f64>,
    pub multiplier_clipped: bool,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    fn inconclusive(notes: Vec<String>) -> Self {
        ClassificationReport {
            map_type: MapType::Inconclusive,
            dw_point: None,
            dw_location: None,
            multiplier_c: None,
            multiplier_clipped: false,
            notes,
        }
    }

    /// The Denjoy-Wolff point when it lies on the boundary.
    pub fn boundary_point(&self) -> Option<&BoundaryPoint> {
        match &self.dw_point {
            Some(DwPoint::Boundary(b)) => Some(b),
            _ => None,
        }
    }
}

/// A few deterministic starts spread over the model.
pub fn default_starts(model: Model, dim: usize) -> Vec<Point> {
    let c = Complex64::new;
    let zeros = |k: usize| vec![c(0.0, 0.0); k];
    match model {
        Model::Disk => [c(0.0, 0.0), c(0.3, 0.4), c(-0.5, 0.1)]
            .into_iter()
            .map(|z| Point::disk(z).expect("inside disk"))
            .collect(),
        Model::Halfplane => [c(1.0, 0.0), c(2.0, 1.0), c(0.5, -1.0)]
            .into_iter()
            .map(|z| Point::halfplane(z).expect("inside half-plane"))
            .collect(),
        Model::Ball => {
            let mut w = zeros(dim - 1);
            if let Some(first) = w.first_mut() {
                *first = c(0.2, -0.1);
            }
            vec![
                Point::ball(c(0.0, 0.0), zeros(dim - 1)).expect("inside ball"),
                Point::ball(c(0.3, 0.2), w.clone()).expect("inside ball"),
                Point::ball(c(-0.4, 0.0), w.iter().map(|x| -x).collect()).expect("inside ball"),
            ]
        }
        Model::Siegel => {
            let mut w = zeros(dim - 1);
            if let Some(first) = w.first_mut() {
                *first = c(0.5, 0.25);
            }
            vec![
                Point::siegel(c(1.0, 0.0), zeros(dim - 1)).expect("inside Siegel domain"),
                Point::siegel(c(2.0, 1.0), w.clone()).expect("inside Siegel domain"),
                Point::siegel(c(3.0, -2.0), w.iter().map(|x| x * c(0.0, 1.0)).collect()).expect("inside Siegel domain"),
            ]
        }
    }
}

/// Frame map `u ↦ frame(f(frame⁻¹(u)))` for one-dimensional models.
fn frame_map(spec: &MapSpec, model: Model, u: Complex64) -> Option<Complex64> {
    let p = match model {
        Model::Disk => Point::disk(u).ok()?,
        Model::Halfplane => Point::halfplane(cayley_c_inv(u)).ok()?,
        _ => return None,
    };
    let q = spec.evaluate(&p).ok()?;
    Some(match q {
        Point::Disk(d) => d.z(),
        Point::Halfplane(h) => cayley_c(h.z()),
        _ => return None,
    })
}

fn frame_derivative(spec: &MapSpec, model: Model, u: Complex64) -> Option<Complex64> {
    let h = 1e-6 * (1.0 - u.norm()).max(1e-3);
    let fp = frame_map(spec, model, u + h)?;
    let fm = frame_map(spec, model, u - h)?;
    Some((fp - fm) / (2.0 * h))
}

/// Newton search for an interior fixed point of a one-dimensional map,
/// returning `(p, |f′(p)|)`.
fn interior_fixed_point(spec: &MapSpec, model: Model, guess: Complex64) -> Option<(Complex64, f64)> {
    let mut u = guess;
    for _ in 0..100 {
        let g = frame_map(spec, model, u)? - u;
        if g.norm() < 1e-13 {
            break;
        }
        let dg = frame_derivative(spec, model, u)? - 1.0;
        if dg.norm() < 1e-14 {
            return None;
        }
        u -= g / dg;
        if !(u.norm() < 1.0) {
            return None;
        }
    }
    let residual = (frame_map(spec, model, u)? - u).norm();
    if residual > 1e-10 {
        return None;
    }
    Some((u, frame_derivative(spec, model, u)?.norm()))
}

/// Elliptic / hyperbolic / parabolic verdict from the orbits of `starts`
/// (model defaults are used when fewer than two are given).
pub fn classify(spec: &MapSpec, starts: &[Point], budgets: &Budgets) -> ClassificationReport {
    let mut notes = Vec::new();
    let model = match spec.model() {
        Ok(m) => m,
        Err(e) => return ClassificationReport::inconclusive(vec![e.to_string()]),
    };
    let owned;
    let starts = if starts.len() >= 2 {
        starts
    } else {
        let dim = starts.first().map(Point::dim).or(spec.dimension()).unwrap_or(2);
        notes.push("fewer than two starts given; using model defaults".to_string());
        owned = default_starts(model, dim);
        &owned[..]
    };
    let orbits = match orbits_for(spec, starts, budgets.n_max, &budgets.stop) {
        Ok(o) => o,
        Err(e) => {
            notes.push(e.to_string());
            return ClassificationReport::inconclusive(notes);
        }
    };
    match locate(spec, &orbits, budgets.tol_dw) {
        Ok(est) if est.location == DwLocation::Interior => {
            let multiplier = match (&est.point, model) {
                (DwPoint::Interior(p), Model::Disk | Model::Halfplane) => {
                    frame_derivative(spec, model, p[0]).map(|d| d.norm())
                }
                _ => None,
            };
            ClassificationReport {
                map_type: MapType::Elliptic,
                dw_point: Some(est.point),
                dw_location: Some(DwLocation::Interior),
                multiplier_c: multiplier,
                multiplier_clipped: false,
                notes,
            }
        }
        Ok(est) => {
            let estimates: Vec<_> =
                orbits.iter().map(|o| estimate_multiplier(o, budgets.tail_fraction)).collect();
            let m = match &estimates[0] {
                Ok(m) => *m,
                Err(e) => {
                    notes.push(format!("multiplier: {e}"));
                    let mut r = ClassificationReport::inconclusive(notes);
                    r.dw_point = Some(est.point);
                    r.dw_location = Some(DwLocation::Boundary);
                    return r;
                }
            };
            for (k, other) in estimates.iter().enumerate().skip(1) {
                match other {
                    Ok(o) if (o.c - m.c).abs() > budgets.tol_c => {
                        notes.push(format!("start {k} gives multiplier {:.6} vs {:.6}", o.c, m.c))
                    }
                    Err(e) => notes.push(format!("start {k}: {e}")),
                    _ => {}
                }
            }
            if m.clipped {
                notes.push(format!("multiplier estimate {:.12} clipped to 1", m.raw));
            }
            let map_type = if m.c < 1.0 - budgets.tol_c {
                MapType::Hyperbolic
            } else if (m.c - 1.0).abs() <= budgets.tol_c {
                MapType::Parabolic
            } else {
                MapType::Inconclusive
            };
            ClassificationReport {
                map_type,
                dw_point: Some(est.point),
                dw_location: Some(DwLocation::Boundary),
                multiplier_c: Some(m.c),
                multiplier_clipped: m.clipped,
                notes,
            }
        }
        Err(DynamicsError::Disagreement { spread, tol }) => {
            notes.push(format!("orbit limits disagree by {spread:.3e} (tolerance {tol:.1e})"));
            let guess = {
                let pts = &orbits[0].points;
                pts.iter().map(|p| p.ball_frame()[0]).sum::<Complex64>() / pts.len() as f64
            };
            match interior_fixed_point(spec, model, guess) {
                Some((p, modulus)) if modulus <= 1.0 + 1e-9 => {
                    notes.push("interior fixed point found by Newton search; orbits rotate about it".into());
                    ClassificationReport {
                        map_type: MapType::Elliptic,
                        dw_point: Some(DwPoint::Interior(vec![p])),
                        dw_location: Some(DwLocation::Interior),
                        multiplier_c: Some(modulus),
                        multiplier_clipped: false,
                        notes,
                    }
                }
                _ => ClassificationReport::inconclusive(notes),
            }
        }
        Err(e) => {
            notes.push(e.to_string());
            ClassificationReport::inconclusive(notes)
        }
    }
}
