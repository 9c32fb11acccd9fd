//! Domain models, Cayley transforms and pseudo-hyperbolic metrics.
//!
//! Four models are supported: the unit disk `𝔻`, the right half-plane
//! `ℍ = {Re z > 0}`, the unit ball `𝔹ᴺ` and the Siegel half-plane
//! `ℍᴺ = {(z, w) : Re z > ‖w‖²}`. The Cayley transforms are fixed:
//!
//! ```text
//! C(z)      = (z − 1)/(z + 1)                 ℍ  → 𝔻,  ∞ ↦ 1
//! Ψ(z1, w)  = ((1 + z1)/(1 − z1), w/(1 − z1))  𝔹ᴺ → ℍᴺ, (1, 0) ↦ ∞
//! ```
//!
//! so that a Denjoy-Wolff point at infinity in the half-plane models is
//! always `e₁ = (1, 0, …)` in the ball frame.
//!
//! Quantities that measure distance to the boundary (`1 − ‖Z‖²`, the
//! Koranyi quotient, the special ratio, ...) are collected in
//! [`ApproachCoords`]. For points that live in a half-plane model they are
//! computed from the native coordinates through exact identities such as
//! `1 − |C(z)|² = 4 Re z / |z + 1|²`, never by subtracting magnitudes in
//! ball coordinates.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hermitian inner product `⟨u, v⟩ = Σ uᵢ v̄ᵢ`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|a| a.norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Disk,
    Halfplane,
    Ball,
    Siegel,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Model::Disk => "disk",
            Model::Halfplane => "halfplane",
            Model::Ball => "ball",
            Model::Siegel => "siegel",
        };
        f.write_str(s)
    }
}

impl Model {
    /// True for the unbounded models whose Denjoy-Wolff point sits at infinity.
    pub fn is_unbounded(self) -> bool {
        matches!(self, Model::Halfplane | Model::Siegel)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point outside the {model} domain (margin {margin:e})")]
    OutsideDomain { model: Model, margin: f64 },
    #[error("non-finite coordinate in {model} point")]
    NonFinite { model: Model },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("model mismatch: {0} vs {1}")]
    ModelMismatch(Model, Model),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

fn check_finite(model: Model, coords: &[Complex64]) -> Result<()> {
    if coords.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(GeometryError::NonFinite { model })
    }
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiskRaw", into = "DiskRaw")]
pub struct DiskPoint(Complex64);

#[derive(Serialize, Deserialize)]
struct DiskRaw {
    z: Complex64,
}

impl TryFrom<DiskRaw> for DiskPoint {
    type Error = GeometryError;
    fn try_from(raw: DiskRaw) -> Result<Self> {
        DiskPoint::new(raw.z)
    }
}

impl From<DiskPoint> for DiskRaw {
    fn from(p: DiskPoint) -> Self {
        DiskRaw { z: p.0 }
    }
}

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        check_finite(Model::Disk, &[z])?;
        let margin = 1.0 - z.norm_sqr();
        if margin > 0.0 {
            Ok(Self(z))
        } else {
            Err(GeometryError::OutsideDomain { model: Model::Disk, margin })
        }
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    /// `1 − |z|²`.
    pub fn gap(&self) -> f64 {
        1.0 - self.0.norm_sqr()
    }
}

/// A point of the right half-plane `Re z > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiskRaw", into = "DiskRaw")]
pub struct HalfPlanePoint(Complex64);

impl TryFrom<DiskRaw> for HalfPlanePoint {
    type Error = GeometryError;
    fn try_from(raw: DiskRaw) -> Result<Self> {
        HalfPlanePoint::new(raw.z)
    }
}

impl From<HalfPlanePoint> for DiskRaw {
    fn from(p: HalfPlanePoint) -> Self {
        DiskRaw { z: p.0 }
    }
}

impl HalfPlanePoint {
    pub fn new(z: Complex64) -> Result<Self> {
        check_finite(Model::Halfplane, &[z])?;
        if z.re > 0.0 {
            Ok(Self(z))
        } else {
            Err(GeometryError::OutsideDomain { model: Model::Halfplane, margin: z.re })
        }
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

#[derive(Serialize, Deserialize)]
struct SplitRaw {
    z: Complex64,
    #[serde(default)]
    w: Vec<Complex64>,
}

/// A point `Z = (z1, w)` of the unit ball `𝔹ᴺ`, `N = 1 + w.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplitRaw", into = "SplitRaw")]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl TryFrom<SplitRaw> for BallPoint {
    type Error = GeometryError;
    fn try_from(raw: SplitRaw) -> Result<Self> {
        BallPoint::new(raw.z, raw.w)
    }
}

impl From<BallPoint> for SplitRaw {
    fn from(p: BallPoint) -> Self {
        SplitRaw { z: p.coords[0], w: p.coords[1..].to_vec() }
    }
}

impl BallPoint {
    pub fn new(z1: Complex64, w: Vec<Complex64>) -> Result<Self> {
        let mut coords = Vec::with_capacity(w.len() + 1);
        coords.push(z1);
        coords.extend(w);
        Self::from_coords(coords)
    }

    pub fn from_coords(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(GeometryError::DimensionMismatch { expected: 1, found: 0 });
        }
        check_finite(Model::Ball, &coords)?;
        let margin = 1.0 - norm_sqr(&coords);
        if margin > 0.0 {
            Ok(Self { coords })
        } else {
            Err(GeometryError::OutsideDomain { model: Model::Ball, margin })
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn z1(&self) -> Complex64 {
        self.coords[0]
    }

    pub fn w(&self) -> &[Complex64] {
        &self.coords[1..]
    }

    /// `1 − ‖Z‖²`.
    pub fn gap(&self) -> f64 {
        1.0 - norm_sqr(&self.coords)
    }
}

/// A point `(z, w)` of the Siegel half-plane, `Re z > ‖w‖²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplitRaw", into = "SplitRaw")]
pub struct SiegelPoint {
    z: Complex64,
    w: Vec<Complex64>,
}

impl TryFrom<SplitRaw> for SiegelPoint {
    type Error = GeometryError;
    fn try_from(raw: SplitRaw) -> Result<Self> {
        SiegelPoint::new(raw.z, raw.w)
    }
}

impl From<SiegelPoint> for SplitRaw {
    fn from(p: SiegelPoint) -> Self {
        SplitRaw { z: p.z, w: p.w }
    }
}

impl SiegelPoint {
    pub fn new(z: Complex64, w: Vec<Complex64>) -> Result<Self> {
        check_finite(Model::Siegel, &[z])?;
        check_finite(Model::Siegel, &w)?;
        let margin = z.re - norm_sqr(&w);
        if margin > 0.0 {
            Ok(Self { z, w })
        } else {
            Err(GeometryError::OutsideDomain { model: Model::Siegel, margin })
        }
    }

    pub fn dim(&self) -> usize {
        self.w.len() + 1
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    /// The defining functional `Re z − ‖w‖²`.
    pub fn margin(&self) -> f64 {
        self.z.re - norm_sqr(&self.w)
    }
}

/// A point of any of the four models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Point {
    Disk(DiskPoint),
    Halfplane(HalfPlanePoint),
    Ball(BallPoint),
    Siegel(SiegelPoint),
}

impl Point {
    pub fn disk(z: Complex64) -> Result<Self> {
        DiskPoint::new(z).map(Point::Disk)
    }

    pub fn halfplane(z: Complex64) -> Result<Self> {
        HalfPlanePoint::new(z).map(Point::Halfplane)
    }

    pub fn ball(z1: Complex64, w: Vec<Complex64>) -> Result<Self> {
        BallPoint::new(z1, w).map(Point::Ball)
    }

    pub fn siegel(z: Complex64, w: Vec<Complex64>) -> Result<Self> {
        SiegelPoint::new(z, w).map(Point::Siegel)
    }

    pub fn model(&self) -> Model {
        match self {
            Point::Disk(_) => Model::Disk,
            Point::Halfplane(_) => Model::Halfplane,
            Point::Ball(_) => Model::Ball,
            Point::Siegel(_) => Model::Siegel,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::Disk(_) | Point::Halfplane(_) => 1,
            Point::Ball(p) => p.dim(),
            Point::Siegel(p) => p.dim(),
        }
    }

    /// Native coordinates, first coordinate first.
    pub fn coords(&self) -> Vec<Complex64> {
        match self {
            Point::Disk(p) => vec![p.z()],
            Point::Halfplane(p) => vec![p.z()],
            Point::Ball(p) => p.coords().to_vec(),
            Point::Siegel(p) => {
                let mut v = Vec::with_capacity(p.dim());
                v.push(p.z());
                v.extend_from_slice(p.w());
                v
            }
        }
    }

    /// The first native coordinate.
    pub fn first(&self) -> Complex64 {
        match self {
            Point::Disk(p) => p.z(),
            Point::Halfplane(p) => p.z(),
            Point::Ball(p) => p.z1(),
            Point::Siegel(p) => p.z(),
        }
    }

    /// Coordinates in the bounded (disk/ball) frame. Unbounded models go
    /// through the fixed Cayley transform; no domain check is applied to
    /// the result, which may round onto the boundary for far-out points.
    pub fn ball_frame(&self) -> Vec<Complex64> {
        match self {
            Point::Disk(p) => vec![p.z()],
            Point::Ball(p) => p.coords().to_vec(),
            Point::Halfplane(p) => vec![cayley_c(p.z())],
            Point::Siegel(p) => {
                let s = p.z() + 1.0;
                let mut v = Vec::with_capacity(p.dim());
                v.push(cayley_c(p.z()));
                v.extend(p.w().iter().map(|w| 2.0 * w / s));
                v
            }
        }
    }

    /// `1 − ‖Z‖²` of the ball-frame image, computed stably for the unbounded
    /// models as `4 (Re z − ‖w‖²) / |z + 1|²`.
    pub fn gap(&self) -> f64 {
        match self {
            Point::Disk(p) => p.gap(),
            Point::Ball(p) => p.gap(),
            Point::Halfplane(p) => 4.0 * p.z().re / (p.z() + 1.0).norm_sqr(),
            Point::Siegel(p) => 4.0 * p.margin() / (p.z() + 1.0).norm_sqr(),
        }
    }

    /// Value of the model-defining functional: `1 − ‖Z‖²` for the bounded
    /// models, `Re z − ‖w‖²` for the unbounded ones.
    pub fn margin(&self) -> f64 {
        match self {
            Point::Disk(p) => p.gap(),
            Point::Ball(p) => p.gap(),
            Point::Halfplane(p) => p.z().re,
            Point::Siegel(p) => p.margin(),
        }
    }
}

/// Boundary point of the ball frame, or the point at infinity of an
/// unbounded model (which corresponds to `e₁` in the ball frame).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPoint {
    Finite(Vec<Complex64>),
    Infinity,
}

impl BoundaryPoint {
    /// Builds a finite boundary point, renormalising to unit length.
    pub fn finite(v: Vec<Complex64>) -> Result<Self> {
        if v.is_empty() {
            return Err(GeometryError::DimensionMismatch { expected: 1, found: 0 });
        }
        check_finite(Model::Ball, &v)?;
        let n = norm_sqr(&v).sqrt();
        if n == 0.0 {
            return Err(GeometryError::Degenerate("zero vector has no boundary direction"));
        }
        Ok(BoundaryPoint::Finite(v.into_iter().map(|c| c / n).collect()))
    }

    /// `e₁ ∈ ∂𝔹ᴺ`.
    pub fn e1(dim: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim.max(1)];
        v[0] = Complex64::new(1.0, 0.0);
        BoundaryPoint::Finite(v)
    }

    /// Ball-frame unit vector; infinity maps to `e₁`.
    pub fn ball_frame(&self, dim: usize) -> Vec<Complex64> {
        match self {
            BoundaryPoint::Finite(v) => v.clone(),
            BoundaryPoint::Infinity => match BoundaryPoint::e1(dim) {
                BoundaryPoint::Finite(v) => v,
                BoundaryPoint::Infinity => unreachable!(),
            },
        }
    }

    pub fn is_e1(&self) -> bool {
        match self {
            BoundaryPoint::Infinity => true,
            BoundaryPoint::Finite(v) => v[0] == Complex64::new(1.0, 0.0) && v[1..].iter().all(|c| c.norm_sqr() == 0.0),
        }
    }
}

#[inline]
pub(crate) fn cayley_c(z: Complex64) -> Complex64 {
    (z - 1.0) / (z + 1.0)
}

#[inline]
pub(crate) fn cayley_c_inv(u: Complex64) -> Complex64 {
    (1.0 + u) / (1.0 - u)
}

pub fn cayley_halfplane_to_disk(p: &HalfPlanePoint) -> Result<DiskPoint> {
    DiskPoint::new(cayley_c(p.z()))
}

pub fn cayley_disk_to_halfplane(u: &DiskPoint) -> Result<HalfPlanePoint> {
    if u.z() == Complex64::new(1.0, 0.0) {
        return Err(GeometryError::Degenerate("disk point 1 maps to infinity"));
    }
    HalfPlanePoint::new(cayley_c_inv(u.z()))
}

pub fn cayley_ball_to_siegel(p: &BallPoint) -> Result<SiegelPoint> {
    let z1 = p.z1();
    let d = 1.0 - z1;
    if d.norm_sqr() == 0.0 {
        return Err(GeometryError::Degenerate("ball point with z1 = 1 maps to infinity"));
    }
    SiegelPoint::new((1.0 + z1) / d, p.w().iter().map(|w| w / d).collect())
}

pub fn cayley_siegel_to_ball(p: &SiegelPoint) -> Result<BallPoint> {
    let s = p.z() + 1.0;
    BallPoint::new(cayley_c(p.z()), p.w().iter().map(|w| 2.0 * w / s).collect())
}

/// `d(z, w) = |z − w| / |1 − z w̄|`.
pub fn pdist_disk(z: &DiskPoint, w: &DiskPoint) -> f64 {
    let (a, b) = (z.z(), w.z());
    (a - b).norm() / (1.0 - a * b.conj()).norm()
}

/// `d(z, w) = |z − w| / |z + w̄|`, the pullback of [`pdist_disk`] under `C`.
pub fn pdist_halfplane(z: &HalfPlanePoint, w: &HalfPlanePoint) -> f64 {
    let (a, b) = (z.z(), w.z());
    (a - b).norm() / (a + b.conj()).norm()
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch { expected: a, found: b })
    }
}

/// Pseudo-hyperbolic distance on `𝔹ᴺ`:
/// `d² = 1 − (1 − ‖Z‖²)(1 − ‖W‖²)/|1 − ⟨Z, W⟩|²`.
///
/// Evaluated in the cancellation-free form
/// `d² = ((1 − ‖Z‖²)‖D‖² + |⟨D, Z⟩|²) / |1 − ⟨Z, W⟩|²` with `D = W − Z`.
pub fn pdist_ball(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    check_dims(z.dim(), w.dim())?;
    let diff: Vec<Complex64> = w.coords().iter().zip(z.coords()).map(|(b, a)| b - a).collect();
    let num = z.gap() * norm_sqr(&diff) + inner(&diff, z.coords()).norm_sqr();
    let den = (1.0 - inner(z.coords(), w.coords())).norm_sqr();
    Ok((num / den).sqrt().min(1.0))
}

/// Pseudo-hyperbolic distance on `ℍᴺ`, the pullback of [`pdist_ball`]
/// under `Ψ`: `1 − d² = 4ρρ′/|A|²` with `ρ = Re z − ‖w‖²` and
/// `A = z + z̄′ − 2⟨w, w′⟩`.
///
/// Uses `|A|² − 4ρρ′ = (ρ − ρ′)² + ‖w − w′‖²(2(ρ + ρ′) + ‖w − w′‖²) + (Im A)²`,
/// a sum of non-negative terms.
pub fn pdist_siegel(p: &SiegelPoint, q: &SiegelPoint) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    let (rho_p, rho_q) = (p.margin(), q.margin());
    let a = p.z() + q.z().conj() - 2.0 * inner(p.w(), q.w());
    let dw: f64 = p.w().iter().zip(q.w()).map(|(x, y)| (x - y).norm_sqr()).sum();
    let num = (rho_p - rho_q).powi(2) + dw * (2.0 * (rho_p + rho_q) + dw) + a.im * a.im;
    Ok((num / a.norm_sqr()).sqrt().min(1.0))
}

/// Model-dispatching pseudo-hyperbolic distance.
pub fn pdist(a: &Point, b: &Point) -> Result<f64> {
    match (a, b) {
        (Point::Disk(x), Point::Disk(y)) => Ok(pdist_disk(x, y)),
        (Point::Halfplane(x), Point::Halfplane(y)) => Ok(pdist_halfplane(x, y)),
        (Point::Ball(x), Point::Ball(y)) => pdist_ball(x, y),
        (Point::Siegel(x), Point::Siegel(y)) => pdist_siegel(x, y),
        _ => Err(GeometryError::ModelMismatch(a.model(), b.model())),
    }
}

/// Boundary-approach quantities of a point relative to a boundary point
/// `X`, all in the ball frame. `ζ = ⟨Z, X⟩` is the projection coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproachCoords {
    /// `1 − ζ`.
    pub one_minus_proj: Complex64,
    /// `|ζ|`.
    pub proj_abs: f64,
    /// `1 − |ζ|²`.
    pub proj_gap: f64,
    /// `‖Z − ζX‖²`.
    pub orth_sqr: f64,
    /// `1 − ‖Z‖²`.
    pub gap: f64,
    /// `‖X − Z‖²`.
    pub dist_sqr: f64,
}

impl ApproachCoords {
    pub fn from_ball(z: &BallPoint, x: &BoundaryPoint) -> Result<Self> {
        let xv = match x {
            BoundaryPoint::Finite(v) => v.as_slice(),
            BoundaryPoint::Infinity => {
                return Err(GeometryError::Degenerate("ball points need a finite boundary vertex"))
            }
        };
        check_dims(xv.len(), z.dim())?;
        Ok(Self::from_frame(z.coords(), xv, z.gap()))
    }

    fn from_frame(z: &[Complex64], x: &[Complex64], gap: f64) -> Self {
        let zeta = inner(z, x);
        let orth_sqr: f64 = z.iter().zip(x).map(|(a, b)| (a - zeta * b).norm_sqr()).sum();
        let one_minus_proj = 1.0 - zeta;
        ApproachCoords {
            one_minus_proj,
            proj_abs: zeta.norm(),
            proj_gap: 1.0 - zeta.norm_sqr(),
            orth_sqr,
            gap,
            dist_sqr: one_minus_proj.norm_sqr() + orth_sqr,
        }
    }

    /// Coordinates of a Siegel point relative to `∞ ↔ e₁`, via
    /// `1 − z1 = 2/(z+1)`, `1 − |z1|² = 4 Re z/|z+1|²`, `‖w′‖² = 4‖w‖²/|z+1|²`.
    pub fn from_siegel(p: &SiegelPoint) -> Self {
        let s = p.z() + 1.0;
        let s2 = s.norm_sqr();
        let one_minus_proj = 2.0 / s;
        let wn = norm_sqr(p.w());
        ApproachCoords {
            one_minus_proj,
            proj_abs: (1.0 - one_minus_proj).norm(),
            proj_gap: 4.0 * p.z().re / s2,
            orth_sqr: 4.0 * wn / s2,
            gap: 4.0 * p.margin() / s2,
            dist_sqr: 4.0 * (1.0 + wn) / s2,
        }
    }

    /// Dispatches on the model. Unbounded models only admit `X = ∞`
    /// (or its ball-frame image `e₁`).
    pub fn from_point(p: &Point, x: &BoundaryPoint) -> Result<Self> {
        match p {
            Point::Ball(b) => Self::from_ball(b, x),
            Point::Disk(d) => {
                let b = BallPoint::from_coords(vec![d.z()])?;
                Self::from_ball(&b, x)
            }
            Point::Siegel(s) => {
                Self::require_infinity(x)?;
                Ok(Self::from_siegel(s))
            }
            Point::Halfplane(h) => {
                Self::require_infinity(x)?;
                let s = SiegelPoint { z: h.z(), w: Vec::new() };
                Ok(Self::from_siegel(&s))
            }
        }
    }

    fn require_infinity(x: &BoundaryPoint) -> Result<()> {
        if x.is_e1() {
            Ok(())
        } else {
            Err(GeometryError::Degenerate("half-plane models measure approach to infinity only"))
        }
    }

    fn norm(&self) -> f64 {
        (1.0 - self.gap).max(0.0).sqrt()
    }

    /// `|1 − ⟨Z,X⟩| / (1 − ‖Z‖)`.
    pub fn koranyi_quotient(&self) -> f64 {
        self.one_minus_proj.norm() * (1.0 + self.norm()) / self.gap
    }

    /// `‖Z − ⟨Z,X⟩X‖² / (1 − |⟨Z,X⟩|²)`.
    pub fn special_ratio(&self) -> f64 {
        self.orth_sqr / self.proj_gap
    }

    /// `|1 − ⟨Z,X⟩| / (1 − |⟨Z,X⟩|)`, the Stolz quotient of the projection.
    pub fn projection_nt_quotient(&self) -> Result<f64> {
        if self.one_minus_proj.norm_sqr() == 0.0 {
            return Err(GeometryError::Degenerate("projection coincides with the vertex"));
        }
        Ok(self.one_minus_proj.norm() * (1.0 + self.proj_abs) / self.proj_gap)
    }

    /// `‖X − Z‖ / (1 − ‖Z‖)`, the Stolz quotient of the point itself.
    pub fn nontangential_quotient(&self) -> f64 {
        self.dist_sqr.sqrt() * (1.0 + self.norm()) / self.gap
    }

    /// `Arg(1 − ⟨Z,X⟩) ∈ (−π, π]`.
    pub fn tangency_angle(&self) -> Result<f64> {
        if self.one_minus_proj.norm_sqr() == 0.0 {
            return Err(GeometryError::Degenerate("projection coincides with the vertex"));
        }
        Ok(self.one_minus_proj.arg())
    }
}

pub fn koranyi_quotient(z: &BallPoint, x: &BoundaryPoint) -> Result<f64> {
    ApproachCoords::from_ball(z, x).map(|c| c.koranyi_quotient())
}

pub fn special_ratio(z: &BallPoint, x: &BoundaryPoint) -> Result<f64> {
    ApproachCoords::from_ball(z, x).map(|c| c.special_ratio())
}

pub fn projection_nt_quotient(z: &BallPoint, x: &BoundaryPoint) -> Result<f64> {
    ApproachCoords::from_ball(z, x)?.projection_nt_quotient()
}

pub fn tangency_angle(z: &BallPoint, x: &BoundaryPoint) -> Result<f64> {
    ApproachCoords::from_ball(z, x)?.tangency_angle()
}
