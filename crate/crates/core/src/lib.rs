//! Iteration and boundary dynamics of holomorphic self-maps of the unit
//! disk, the unit ball and their half-plane models.
//!
//! * [`geometry`]: models, Cayley transforms, pseudo-hyperbolic metrics and
//!   boundary-approach quotients.
//! * [`maps`]: declarative map families, evaluation and validity checks.
//! * [`dynamics`]: orbits, step series, Denjoy-Wolff point, multiplier and
//!   classification.
//! * [`conjugation`]: Pommerenke and Baker–Pommerenke normalised iterates.
//! * [`diagnostics`]: Koranyi/special/restricted approach reports, the
//!   zero-step verification harness and the start-independence probe.

pub mod conjugation;
pub mod diagnostics;
pub mod dynamics;
pub mod geometry;
pub mod maps;
pub mod sample;

pub use num_complex::Complex64;
