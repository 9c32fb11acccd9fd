//! Declarative holomorphic self-maps.
//!
//! A [`MapSpec`] names a family and its parameters; it never holds a
//! closure, so specs can be serialised, compared and replayed. Every
//! family lives natively in one model. [`MapSpec::Conjugated`] moves a map
//! to the other model of its pair through the fixed Cayley transforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    cayley_c, cayley_c_inv, inner, norm_sqr, GeometryError, Model, Point,
};
use crate::sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CayleyTag {
    /// Inner map on `ℍ`, evaluated on `𝔻`.
    HalfplaneToDisk,
    /// Inner map on `𝔻`, evaluated on `ℍ`.
    DiskToHalfplane,
    /// Inner map on `ℍᴺ`, evaluated on `𝔹ᴺ`.
    SiegelToBall,
    /// Inner map on `𝔹ᴺ`, evaluated on `ℍᴺ`.
    BallToSiegel,
}

impl CayleyTag {
    /// `(inner model, outer model)`.
    pub fn models(self) -> (Model, Model) {
        match self {
            CayleyTag::HalfplaneToDisk => (Model::Halfplane, Model::Disk),
            CayleyTag::DiskToHalfplane => (Model::Disk, Model::Halfplane),
            CayleyTag::SiegelToBall => (Model::Siegel, Model::Ball),
            CayleyTag::BallToSiegel => (Model::Ball, Model::Siegel),
        }
    }
}

/// A holomorphic self-map given by family and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MapSpec {
    Identity { model: Model },
    /// `z ↦ e^{iθ}(z − a)/(1 − āz)` on `𝔻`.
    DiskMoebius { a: Complex64, theta: f64 },
    /// `z ↦ λz + b` on `ℍ`.
    HalfplaneAffine { lambda: f64, b: Complex64 },
    /// `z ↦ z + b + c/(z + 1)` on `ℍ`.
    HalfplanePerturbed { b: Complex64, c: Complex64 },
    /// `(z, w) ↦ (z + b, w)` on `ℍᴺ`, any `N`.
    SiegelTranslation { b: Complex64 },
    /// `(z, w) ↦ (z + 2⟨w, a⟩ + ‖a‖² + ib, w + a)` on `ℍᴺ`, `N = 1 + a.len()`.
    HeisenbergTranslation { a: Vec<Complex64>, b: f64 },
    /// `members[0] ∘ members[1] ∘ …`; the last member is applied first.
    Composition { members: Vec<MapSpec> },
    Conjugated { inner: Box<MapSpec>, by: CayleyTag },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("map lives on {expected}, point is in {found}")]
    ModelMismatch { expected: Model, found: Model },
    #[error("cannot compose a map on {0} with a map on {1}")]
    CompositionMismatch(Model, Model),
    #[error("empty composition has no model")]
    EmptyComposition,
    #[error("conjugation by {by:?} expects an inner map on {expected}, found {found}")]
    ConjugationMismatch { by: CayleyTag, expected: Model, found: Model },
    #[error("dimension mismatch: map needs N = {expected}, point has N = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("image left the {model} domain (margin {margin:e})")]
    Escaped { model: Model, margin: f64 },
    #[error(transparent)]
    Geometry(GeometryError),
}

impl From<GeometryError> for MapError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::OutsideDomain { model, margin } => MapError::Escaped { model, margin },
            GeometryError::NonFinite { model } => MapError::Escaped { model, margin: f64::NAN },
            other => MapError::Geometry(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, MapError>;

impl MapSpec {
    pub fn siegel_translation(b: Complex64) -> Self {
        MapSpec::SiegelTranslation { b }
    }

    pub fn heisenberg(a: Vec<Complex64>, b: f64) -> Self {
        MapSpec::HeisenbergTranslation { a, b }
    }

    pub fn halfplane_affine(lambda: f64, b: Complex64) -> Self {
        MapSpec::HalfplaneAffine { lambda, b }
    }

    pub fn halfplane_perturbed(b: Complex64, c: Complex64) -> Self {
        MapSpec::HalfplanePerturbed { b, c }
    }

    pub fn disk_moebius(a: Complex64, theta: f64) -> Self {
        MapSpec::DiskMoebius { a, theta }
    }

    /// The model the map acts on, after checking that compositions and
    /// conjugations are consistent.
    pub fn model(&self) -> Result<Model> {
        match self {
            MapSpec::Identity { model } => Ok(*model),
            MapSpec::DiskMoebius { .. } => Ok(Model::Disk),
            MapSpec::HalfplaneAffine { .. } | MapSpec::HalfplanePerturbed { .. } => Ok(Model::Halfplane),
            MapSpec::SiegelTranslation { .. } | MapSpec::HeisenbergTranslation { .. } => Ok(Model::Siegel),
            MapSpec::Composition { members } => {
                let mut it = members.iter();
                let first = it.next().ok_or(MapError::EmptyComposition)?.model()?;
                for m in it {
                    let mm = m.model()?;
                    if mm != first {
                        return Err(MapError::CompositionMismatch(first, mm));
                    }
                }
                Ok(first)
            }
            MapSpec::Conjugated { inner, by } => {
                let (want, outer) = by.models();
                let found = inner.model()?;
                if found != want {
                    return Err(MapError::ConjugationMismatch { by: *by, expected: want, found });
                }
                Ok(outer)
            }
        }
    }

    /// Complex dimension `N` forced by the parameters, if any.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            MapSpec::DiskMoebius { .. } | MapSpec::HalfplaneAffine { .. } | MapSpec::HalfplanePerturbed { .. } => {
                Some(1)
            }
            MapSpec::HeisenbergTranslation { a, .. } => Some(a.len() + 1),
            MapSpec::Identity { model } => match model {
                Model::Disk | Model::Halfplane => Some(1),
                _ => None,
            },
            MapSpec::SiegelTranslation { .. } => None,
            MapSpec::Composition { members } => members.iter().find_map(|m| m.dimension()),
            MapSpec::Conjugated { inner, .. } => inner.dimension(),
        }
    }

    /// True when the map is a biholomorphism of its domain, decided from the
    /// parameters alone.
    pub fn is_automorphism(&self) -> bool {
        match self {
            MapSpec::Identity { .. } => true,
            MapSpec::DiskMoebius { a, .. } => a.norm_sqr() < 1.0,
            MapSpec::HalfplaneAffine { lambda, b } => *lambda > 0.0 && b.re == 0.0,
            MapSpec::HalfplanePerturbed { b, c } => b.re == 0.0 && c.norm_sqr() == 0.0,
            MapSpec::SiegelTranslation { b } => b.re == 0.0,
            MapSpec::HeisenbergTranslation { .. } => true,
            MapSpec::Composition { members } => members.iter().all(MapSpec::is_automorphism),
            MapSpec::Conjugated { inner, .. } => inner.is_automorphism(),
        }
    }

    pub fn evaluate(&self, p: &Point) -> Result<Point> {
        match self {
            MapSpec::Identity { model } => {
                expect_model(*model, p)?;
                Ok(p.clone())
            }
            MapSpec::DiskMoebius { a, theta } => {
                let Point::Disk(d) = p else { return Err(mismatch(Model::Disk, p)) };
                let z = d.z();
                let v = Complex64::from_polar(1.0, *theta) * (z - a) / (1.0 - a.conj() * z);
                Ok(Point::disk(v)?)
            }
            MapSpec::HalfplaneAffine { lambda, b } => {
                let Point::Halfplane(h) = p else { return Err(mismatch(Model::Halfplane, p)) };
                Ok(Point::halfplane(*lambda * h.z() + b)?)
            }
            MapSpec::HalfplanePerturbed { b, c } => {
                let Point::Halfplane(h) = p else { return Err(mismatch(Model::Halfplane, p)) };
                let z = h.z();
                Ok(Point::halfplane(z + b + c / (z + 1.0))?)
            }
            MapSpec::SiegelTranslation { b } => {
                let Point::Siegel(s) = p else { return Err(mismatch(Model::Siegel, p)) };
                Ok(Point::siegel(s.z() + b, s.w().to_vec())?)
            }
            MapSpec::HeisenbergTranslation { a, b } => {
                let Point::Siegel(s) = p else { return Err(mismatch(Model::Siegel, p)) };
                if s.w().len() != a.len() {
                    return Err(MapError::DimensionMismatch { expected: a.len() + 1, found: s.dim() });
                }
                let z = s.z() + 2.0 * inner(s.w(), a) + norm_sqr(a) + Complex64::new(0.0, *b);
                let w = s.w().iter().zip(a).map(|(x, y)| x + y).collect();
                Ok(Point::siegel(z, w)?)
            }
            MapSpec::Composition { members } => {
                if members.is_empty() {
                    return Err(MapError::EmptyComposition);
                }
                let mut cur = p.clone();
                for m in members.iter().rev() {
                    cur = m.evaluate(&cur)?;
                }
                Ok(cur)
            }
            MapSpec::Conjugated { inner, by } => {
                let (inner_model, outer_model) = by.models();
                expect_model(outer_model, p)?;
                let pulled = transform(p, inner_model)?;
                let image = inner.evaluate(&pulled)?;
                transform(&image, outer_model)
            }
        }
    }

    /// Parameter-level criterion guaranteeing the map sends its domain into
    /// itself. `Err` carries the reason the criterion does not apply.
    pub fn analytic_check(&self) -> std::result::Result<(), String> {
        match self {
            MapSpec::Identity { .. } => Ok(()),
            MapSpec::DiskMoebius { a, theta } => {
                if a.norm_sqr() < 1.0 && theta.is_finite() {
                    Ok(())
                } else {
                    Err(format!("disk Moebius needs |a| < 1, got |a| = {}", a.norm()))
                }
            }
            MapSpec::HalfplaneAffine { lambda, b } => {
                if !(*lambda > 0.0) {
                    Err(format!("affine map needs lambda > 0, got {lambda}"))
                } else if !(b.re >= 0.0) {
                    Err(format!("affine map needs Re b >= 0, got {}", b.re))
                } else {
                    Ok(())
                }
            }
            MapSpec::HalfplanePerturbed { b, c } => {
                // c/(z+1) ranges over c·D(1/2, 1/2), whose real part is at
                // least (Re c − |c|)/2.
                if !(b.re >= 0.0) || !(c.re >= 0.0) {
                    Err(format!("perturbed map needs Re b >= 0 and Re c >= 0, got {b} and {c}"))
                } else if b.re + 0.5 * (c.re - c.norm()) < 0.0 {
                    Err(format!("perturbed map needs Re b >= (|c| - Re c)/2, got Re b = {}", b.re))
                } else {
                    Ok(())
                }
            }
            MapSpec::SiegelTranslation { b } => {
                if b.re >= 0.0 {
                    Ok(())
                } else {
                    Err(format!("Siegel translation needs Re b >= 0, got {}", b.re))
                }
            }
            MapSpec::HeisenbergTranslation { a, b } => {
                if a.iter().all(|c| c.re.is_finite() && c.im.is_finite()) && b.is_finite() {
                    Ok(())
                } else {
                    Err("Heisenberg translation has non-finite parameters".into())
                }
            }
            MapSpec::Composition { members } => {
                self.model().map_err(|e| e.to_string())?;
                members.iter().try_for_each(MapSpec::analytic_check)
            }
            MapSpec::Conjugated { inner, .. } => {
                self.model().map_err(|e| e.to_string())?;
                inner.analytic_check()
            }
        }
    }
}

fn mismatch(expected: Model, p: &Point) -> MapError {
    MapError::ModelMismatch { expected, found: p.model() }
}

fn expect_model(expected: Model, p: &Point) -> Result<()> {
    if p.model() == expected {
        Ok(())
    } else {
        Err(mismatch(expected, p))
    }
}

/// Moves a point between the two models of a Cayley pair.
fn transform(p: &Point, target: Model) -> Result<Point> {
    let out = match (p, target) {
        (Point::Disk(d), Model::Halfplane) => {
            if d.z() == Complex64::new(1.0, 0.0) {
                return Err(MapError::Escaped { model: Model::Halfplane, margin: f64::INFINITY });
            }
            Point::halfplane(cayley_c_inv(d.z()))?
        }
        (Point::Halfplane(h), Model::Disk) => Point::disk(cayley_c(h.z()))?,
        (Point::Ball(b), Model::Siegel) => {
            let d = 1.0 - b.z1();
            Point::siegel((1.0 + b.z1()) / d, b.w().iter().map(|w| w / d).collect())?
        }
        (Point::Siegel(_), Model::Ball) => {
            let f = p.ball_frame();
            Point::ball(f[0], f[1..].to_vec())?
        }
        _ => return Err(MapError::ModelMismatch { expected: target, found: p.model() }),
    };
    Ok(out)
}

/// `f ∘ g`.
pub fn compose(f: &MapSpec, g: &MapSpec) -> Result<MapSpec> {
    let (mf, mg) = (f.model()?, g.model()?);
    if mf != mg {
        return Err(MapError::CompositionMismatch(mf, mg));
    }
    Ok(MapSpec::Composition { members: vec![f.clone(), g.clone()] })
}

pub fn evaluate(spec: &MapSpec, p: &Point) -> Result<Point> {
    spec.evaluate(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub analytic_ok: bool,
    pub sampled_ok: bool,
    /// Minimum over samples of the model functional at `f(p)`.
    pub worst_margin: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Checks the parameter criterion and probes `sample_count` random domain
/// points. Siegel maps without a forced dimension are sampled in `ℍ²`.
pub fn validate_self_map(spec: &MapSpec, sample_count: usize, seed: u64) -> ValidityReport {
    let mut notes = Vec::new();
    let analytic_ok = match spec.analytic_check() {
        Ok(()) => true,
        Err(why) => {
            notes.push(why);
            false
        }
    };
    let model = match spec.model() {
        Ok(m) => m,
        Err(e) => {
            notes.push(e.to_string());
            return ValidityReport { analytic_ok: false, sampled_ok: false, worst_margin: f64::NAN, samples: 0, notes };
        }
    };
    let dim = match model {
        Model::Disk | Model::Halfplane => 1,
        _ => spec.dimension().unwrap_or(2),
    };
    let mut rng = sample::rng(seed);
    let mut worst = f64::INFINITY;
    let mut sampled_ok = true;
    for _ in 0..sample_count {
        let p = sample::random_point(&mut rng, model, dim);
        match spec.evaluate(&p) {
            Ok(q) => worst = worst.min(q.margin()),
            Err(MapError::Escaped { margin, .. }) => {
                sampled_ok = false;
                worst = worst.min(if margin.is_nan() { f64::NEG_INFINITY } else { margin });
            }
            Err(e) => {
                sampled_ok = false;
                notes.push(e.to_string());
                break;
            }
        }
    }
    ValidityReport { analytic_ok, sampled_ok: sampled_ok && worst > 0.0, worst_margin: worst, samples: sample_count, notes }
}
