//! Experiment configuration, read from a TOML document.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dwolff::conjugation::{lattice, ConjugationKind, ConjugationOptions};
use dwolff::diagnostics::{ApproachOptions, HarnessOptions, SuiteCase};
use dwolff::dynamics::{default_starts, Budgets};
use dwolff::geometry::{Model, Point};
use dwolff::maps::MapSpec;
use dwolff::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub starts: Vec<Point>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub approach: ApproachOptions,
    #[serde(default)]
    pub conjugation: ConjugationConfig,
    #[serde(default)]
    pub harness: HarnessConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub plot: PlotOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { re: [1.0, 3.0], im: [-1.0, 1.0], nx: 5, ny: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConjugationConfig {
    pub kind: ConjugationKind,
    pub basepoint: Complex64,
    pub checkpoints: Vec<usize>,
    pub grid: GridConfig,
}

impl Default for ConjugationConfig {
    fn default() -> Self {
        let d = ConjugationOptions::default();
        ConjugationConfig {
            kind: ConjugationKind::Pommerenke,
            basepoint: d.basepoint,
            checkpoints: d.checkpoints,
            grid: GridConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub radial_tol: f64,
    pub arg_eps: f64,
    /// Explicit cases; the built-in suite for `seed` when empty.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<SuiteCase>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        let d = HarnessOptions::default();
        HarnessConfig { radial_tol: d.radial_tol, arg_eps: d.arg_eps, cases: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotOptions {
    /// Side of the square canvas in pixels.
    pub size: u32,
    /// Marker radius in disk units.
    pub marker_radius: f64,
    /// Draw a marker every `stride` orbit points; 0 picks one giving about 200 markers.
    pub stride: usize,
    /// Fraction of the orbit drawn in the highlight colour.
    pub tail_highlight: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { size: 600, marker_radius: 0.012, stride: 0, tail_highlight: 0.1 }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).context("parsing config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).context("serializing config")
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.budgets;
        let positive = [
            ("budgets.tol_dw", b.tol_dw),
            ("budgets.tol_c", b.tol_c),
            ("budgets.tail_fraction", b.tail_fraction),
            ("budgets.step.tol_step", b.step.tol_step),
            ("budgets.step.tail_fraction", b.step.tail_fraction),
            ("budgets.step.plateau_tol", b.step.plateau_tol),
            ("budgets.stop.max_magnitude", b.stop.max_magnitude),
            ("budgets.stop.min_margin", b.stop.min_margin),
            ("budgets.stop.fixed_point_tol", b.stop.fixed_point_tol),
            ("approach.tail_fraction", self.approach.tail_fraction),
            ("approach.tol_ratio", self.approach.tol_ratio),
            ("approach.m_cap", self.approach.m_cap),
            ("harness.radial_tol", self.harness.radial_tol),
            ("harness.arg_eps", self.harness.arg_eps),
            ("plot.marker_radius", self.plot.marker_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                bail!("{name} must be positive, got {v}");
            }
        }
        for (name, v) in [
            ("budgets.tail_fraction", b.tail_fraction),
            ("budgets.step.tail_fraction", b.step.tail_fraction),
            ("approach.tail_fraction", self.approach.tail_fraction),
        ] {
            if v > 1.0 {
                bail!("{name} must not exceed 1, got {v}");
            }
        }
        if !(0.0..=1.0).contains(&self.plot.tail_highlight) {
            bail!("plot.tail_highlight must lie in [0, 1]");
        }
        if let Some(map) = &self.map {
            let model = map.model().context("map")?;
            for (i, s) in self.starts.iter().enumerate() {
                if s.model() != model {
                    bail!("start {i} is a {} point, map acts on {model}", s.model());
                }
            }
        }
        Ok(())
    }

    pub fn map(&self) -> Result<&MapSpec> {
        self.map.as_ref().context("config has no [map] section")
    }

    /// Configured starts, or the model defaults.
    pub fn starts(&self) -> Result<Vec<Point>> {
        if !self.starts.is_empty() {
            return Ok(self.starts.clone());
        }
        let map = self.map()?;
        let model = map.model()?;
        Ok(default_starts(model, default_dim(map, model)))
    }

    pub fn conjugation_options(&self) -> ConjugationOptions {
        let g = &self.conjugation.grid;
        ConjugationOptions {
            basepoint: self.conjugation.basepoint,
            grid: lattice((g.re[0], g.re[1]), (g.im[0], g.im[1]), g.nx, g.ny),
            checkpoints: self.conjugation.checkpoints.clone(),
            budgets: self.budgets,
        }
    }

    pub fn harness_options(&self) -> HarnessOptions {
        HarnessOptions {
            budgets: self.budgets,
            approach: self.approach,
            radial_tol: self.harness.radial_tol,
            arg_eps: self.harness.arg_eps,
        }
    }
}

pub fn default_dim(map: &MapSpec, model: Model) -> usize {
    match model {
        Model::Disk | Model::Halfplane => 1,
        Model::Ball | Model::Siegel => map.dimension().unwrap_or(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
seed = 7

[map]
family = "composition"

[[map.members]]
family = "siegel_translation"
b = [1.0, 0.0]

[[map.members]]
family = "heisenberg_translation"
a = [[0.5, 0.25]]
b = 0.5

[[starts]]
model = "siegel"
z = [1.0, 0.5]
w = [[0.25, 0.0]]

[budgets]
n_max = 500
tol_dw = 1e-3

[budgets.step]
tol_step = 2e-3

[conjugation]
kind = "baker_pommerenke"
checkpoints = [10, 100]

[plot]
stride = 3
"#;

    #[test]
    fn parse_round_trip() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.budgets.n_max, 500);
        assert_eq!(cfg.budgets.tol_c, Budgets::default().tol_c);
        assert_eq!(cfg.budgets.step.tol_step, 2e-3);
        assert_eq!(cfg.conjugation.kind, ConjugationKind::BakerPommerenke);
        assert_eq!(cfg.starts[0].dim(), 2);
        let text = cfg.to_toml().unwrap();
        let again = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_toml().unwrap(), text);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = SAMPLE.replace("tol_dw = 1e-3", "tol_dw = -1.0");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = SAMPLE.replace("model = \"siegel\"", "model = \"halfplane\"");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = SAMPLE.replace("seed = 7", "seed = 7\nunknown = 1");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn default_starts_follow_the_model() {
        let cfg = ExperimentConfig::from_toml("[map]\nfamily = \"halfplane_affine\"\nlambda = 2.0\nb = [0.0, 0.0]\n").unwrap();
        let starts = cfg.starts().unwrap();
        assert!(starts.len() >= 2);
        assert!(starts.iter().all(|s| s.model() == Model::Halfplane));
        assert!(ExperimentConfig::from_toml("").unwrap().map().is_err());
    }
}
