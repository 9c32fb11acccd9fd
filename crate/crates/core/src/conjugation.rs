//! Normalised iterates of parabolic self-maps of `ℍ` with Denjoy-Wolff
//! point at infinity.
//!
//! With `zₙ = xₙ + iyₙ = fₙ(basepoint)`:
//!
//! ```text
//! Pommerenke:        ψₙ(z) = (fₙ(z) − iyₙ)/xₙ,            ψ∘f = φ∘ψ,  φ(z) = z + ib
//! Baker–Pommerenke:  ψₙ(z) = (fₙ(z) − zₙ)/(zₙ₊₁ − zₙ),     ψ∘f = ψ + 1
//! ```
//!
//! Both are sampled on a grid at a list of checkpoints. At a finite
//! checkpoint `ψₙ∘f − ψₙ` is `(fₙ₊₁ − fₙ)/xₙ` (resp. `/(zₙ₊₁ − zₙ)`), a
//! function that flattens to a constant as `n` grows; the residual measures
//! how far it is from constant over the grid.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{classify, iterate, summarize_steps, step_values, Budgets, DynamicsError, MapType, StepVerdict};
use crate::geometry::{BoundaryPoint, Model, Point};
use crate::maps::{MapError, MapSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugationKind {
    Pommerenke,
    BakerPommerenke,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConjugationError {
    #[error("normalised iterates are defined for maps of the half-plane, not {0}")]
    WrongModel(Model),
    #[error("map is not parabolic with Denjoy-Wolff point at infinity: {0}")]
    NotParabolic(String),
    #[error("Baker-Pommerenke normalisation needs a zero-step orbit, step verdict is {0}")]
    NotZeroStep(StepVerdict),
    #[error("degenerate normalisation at n = {n}: {why}")]
    Degenerate { n: usize, why: &'static str },
    #[error("grid point {0} is outside the half-plane")]
    GridOutside(usize),
    #[error("no checkpoints given")]
    NoCheckpoints,
    #[error("basepoint orbit stopped after {have} steps, need {needed}")]
    OrbitStopped { have: usize, needed: usize },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Map(#[from] MapError),
}

pub type Result<T> = std::result::Result<T, ConjugationError>;

/// `nx × ny` lattice over `[x0, x1] × [y0, y1]`, row-major in `x`.
pub fn lattice(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Vec<Complex64> {
    let at = |lo: f64, hi: f64, k: usize, n: usize| if n <= 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            out.push(Complex64::new(at(x.0, x.1, i, nx), at(y.0, y.1, j, ny)));
        }
    }
    out
}

pub fn default_grid() -> Vec<Complex64> {
    lattice((1.0, 3.0), (-1.0, 1.0), 5, 5)
}

pub fn default_checkpoints() -> Vec<usize> {
    vec![100, 1_000, 10_000, 100_000]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConjugationOptions {
    pub basepoint: Complex64,
    pub grid: Vec<Complex64>,
    pub checkpoints: Vec<usize>,
    /// Budgets for the parabolicity and zero-step preconditions.
    pub budgets: Budgets,
}

impl Default for ConjugationOptions {
    fn default() -> Self {
        ConjugationOptions {
            basepoint: Complex64::new(1.0, 0.0),
            grid: default_grid(),
            checkpoints: default_checkpoints(),
            budgets: Budgets::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationResult {
    pub kind: ConjugationKind,
    pub basepoint: Complex64,
    pub grid: Vec<Complex64>,
    pub checkpoints: Vec<usize>,
    /// `psi_n[k][g]` is `ψ_{checkpoints[k]}(grid[g])`.
    pub psi_n: Vec<Vec<Complex64>>,
    /// `psi_of_image[k][g]` is `ψ_{checkpoints[k]}(f(grid[g]))`.
    pub psi_of_image: Vec<Vec<Complex64>>,
    /// Grid mean of `ψₙ∘f − ψₙ` at each checkpoint.
    pub translation: Vec<Complex64>,
    /// `Im` of the last translation; Pommerenke kind only.
    pub b_estimate: Option<f64>,
    pub residual_series: Vec<f64>,
}

impl ConjugationResult {
    /// `sup_grid |ψ_{n_k} − ψ_{n_{k−1}}|` for consecutive checkpoints.
    pub fn deltas(&self) -> Vec<f64> {
        self.psi_n
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
            .collect()
    }
}

struct Sampled {
    /// `fₙ(g)` and `fₙ(f(g))` at each checkpoint, indexed `[k][g]`.
    images: Vec<Vec<Complex64>>,
    images_of_f: Vec<Vec<Complex64>>,
    base: Vec<Complex64>,
}

fn sample_iterates(spec: &MapSpec, opts: &ConjugationOptions, checkpoints: &[usize], base: Vec<Complex64>) -> Result<Sampled> {
    let n_last = *checkpoints.last().expect("checked non-empty");
    let per_point: Vec<(Vec<Complex64>, Vec<Complex64>)> = opts
        .grid
        .par_iter()
        .map(|g| -> Result<_> {
            let mut cur = Point::halfplane(*g).map_err(MapError::from)?;
            let mut cur_f = spec.evaluate(&cur)?;
            let (mut a, mut b) = (Vec::new(), Vec::new());
            let mut next_cp = checkpoints.iter().peekable();
            for n in 0..=n_last {
                while next_cp.peek() == Some(&&n) {
                    a.push(cur.first());
                    b.push(cur_f.first());
                    next_cp.next();
                }
                if n == n_last {
                    break;
                }
                cur = spec.evaluate(&cur)?;
                cur_f = spec.evaluate(&cur_f)?;
            }
            Ok((a, b))
        })
        .collect::<Result<_>>()?;
    let k = checkpoints.len();
    let mut images = vec![Vec::with_capacity(opts.grid.len()); k];
    let mut images_of_f = vec![Vec::with_capacity(opts.grid.len()); k];
    for (a, b) in per_point {
        for i in 0..k {
            images[i].push(a[i]);
            images_of_f[i].push(b[i]);
        }
    }
    Ok(Sampled { images, images_of_f, base })
}

fn prepare(spec: &MapSpec, opts: &ConjugationOptions) -> Result<(Vec<usize>, Vec<Complex64>, StepVerdict)> {
    let model = spec.model()?;
    if model != Model::Halfplane {
        return Err(ConjugationError::WrongModel(model));
    }
    if let Some(i) = opts.grid.iter().position(|g| !(g.re > 0.0) || !g.im.is_finite()) {
        return Err(ConjugationError::GridOutside(i));
    }
    let mut checkpoints = opts.checkpoints.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let n_last = *checkpoints.last().ok_or(ConjugationError::NoCheckpoints)?;

    let start = Point::halfplane(opts.basepoint).map_err(MapError::from)?;
    let second = Point::halfplane(opts.basepoint + 1.0).map_err(MapError::from)?;
    let report = classify(spec, &[start.clone(), second], &opts.budgets);
    let at_infinity = matches!(report.boundary_point(), Some(BoundaryPoint::Infinity));
    if report.map_type != MapType::Parabolic || !at_infinity {
        let why = format!("type {}, notes: {}", report.map_type, report.notes.join("; "));
        return Err(ConjugationError::NotParabolic(why));
    }

    let needed = n_last + 1;
    let mut policy = opts.budgets.stop;
    policy.fixed_point_tol = 0.0;
    let orbit = iterate(spec, &start, needed.max(opts.budgets.n_max), &policy)?;
    if orbit.len() <= needed {
        return Err(ConjugationError::OrbitStopped { have: orbit.len() - 1, needed });
    }
    let verdict = summarize_steps(step_values(&orbit)?, &opts.budgets.step).verdict;
    let base = orbit.points[..=needed].iter().map(Point::first).collect();
    Ok((checkpoints, base, verdict))
}

fn finish(kind: ConjugationKind, opts: &ConjugationOptions, checkpoints: Vec<usize>, psi_n: Vec<Vec<Complex64>>, psi_of_image: Vec<Vec<Complex64>>) -> ConjugationResult {
    let mut translation = Vec::with_capacity(checkpoints.len());
    let mut residual_series = Vec::with_capacity(checkpoints.len());
    for (psi, psi_f) in psi_n.iter().zip(&psi_of_image) {
        let diffs: Vec<Complex64> = psi_f.iter().zip(psi).map(|(a, b)| a - b).collect();
        let tau = diffs.iter().sum::<Complex64>() / diffs.len() as f64;
        let target = match kind {
            ConjugationKind::Pommerenke => tau,
            ConjugationKind::BakerPommerenke => Complex64::new(1.0, 0.0),
        };
        residual_series.push(diffs.iter().map(|d| (d - target).norm()).fold(0.0, f64::max));
        translation.push(tau);
    }
    let b_estimate = match kind {
        ConjugationKind::Pommerenke => translation.last().map(|t| t.im),
        ConjugationKind::BakerPommerenke => None,
    };
    ConjugationResult {
        kind,
        basepoint: opts.basepoint,
        grid: opts.grid.clone(),
        checkpoints,
        psi_n,
        psi_of_image,
        translation,
        b_estimate,
        residual_series,
    }
}

/// Pommerenke normalisation `ψₙ(z) = (fₙ(z) − i yₙ)/xₙ`.
pub fn pommerenke_normalized(spec: &MapSpec, opts: &ConjugationOptions) -> Result<ConjugationResult> {
    let (checkpoints, base, _) = prepare(spec, opts)?;
    let sampled = sample_iterates(spec, opts, &checkpoints, base)?;
    let mut psi_n = Vec::new();
    let mut psi_of_image = Vec::new();
    for (k, &n) in checkpoints.iter().enumerate() {
        let zn = sampled.base[n];
        if !(zn.re > 0.0) {
            return Err(ConjugationError::Degenerate { n, why: "x_n must be positive" });
        }
        let shift = Complex64::new(0.0, zn.im);
        let norm = |v: &Complex64| (v - shift) / zn.re;
        psi_n.push(sampled.images[k].iter().map(norm).collect());
        psi_of_image.push(sampled.images_of_f[k].iter().map(norm).collect());
    }
    Ok(finish(ConjugationKind::Pommerenke, opts, checkpoints, psi_n, psi_of_image))
}

/// Baker–Pommerenke normalisation `ψₙ(z) = (fₙ(z) − zₙ)/(zₙ₊₁ − zₙ)`.
/// Refuses maps whose basepoint orbit is not judged zero-step.
pub fn baker_pommerenke_normalized(spec: &MapSpec, opts: &ConjugationOptions) -> Result<ConjugationResult> {
    let (checkpoints, base, verdict) = prepare(spec, opts)?;
    if verdict != StepVerdict::ZeroStep {
        return Err(ConjugationError::NotZeroStep(verdict));
    }
    let sampled = sample_iterates(spec, opts, &checkpoints, base)?;
    let mut psi_n = Vec::new();
    let mut psi_of_image = Vec::new();
    for (k, &n) in checkpoints.iter().enumerate() {
        let zn = sampled.base[n];
        let step = sampled.base[n + 1] - zn;
        if step.norm_sqr() == 0.0 {
            return Err(ConjugationError::Degenerate { n, why: "z_{n+1} = z_n" });
        }
        let norm = |v: &Complex64| (v - zn) / step;
        psi_n.push(sampled.images[k].iter().map(norm).collect());
        psi_of_image.push(sampled.images_of_f[k].iter().map(norm).collect());
    }
    Ok(finish(ConjugationKind::BakerPommerenke, opts, checkpoints, psi_n, psi_of_image))
}

/// Plain-text checkpoint table: residual, translation and grid deltas.
pub fn conjugation_report(result: &ConjugationResult) -> String {
    let mut out = String::new();
    let kind = match result.kind {
        ConjugationKind::Pommerenke => "pommerenke",
        ConjugationKind::BakerPommerenke => "baker_pommerenke",
    };
    let _ = writeln!(out, "kind: {kind}");
    let _ = writeln!(out, "basepoint: {} {}", result.basepoint.re, result.basepoint.im);
    let _ = writeln!(out, "grid points: {}", result.grid.len());
    if let Some(b) = result.b_estimate {
        let _ = writeln!(out, "b_estimate: {b:.12e}");
    }
    let _ = writeln!(out, "{:>10}  {:>22}  {:>22}  {:>22}  {:>22}", "n", "residual", "shift_re", "shift_im", "delta");
    let deltas = result.deltas();
    for (k, n) in result.checkpoints.iter().enumerate() {
        let delta = if k == 0 { "-".to_string() } else { format!("{:.12e}", deltas[k - 1]) };
        let t = result.translation[k];
        let _ = writeln!(
            out,
            "{:>10}  {:>22.12e}  {:>22.12e}  {:>22.12e}  {:>22}",
            n, result.residual_series[k], t.re, t.im, delta
        );
    }
    out
}
