//! Seeded random points in each model, shared by validity checks, the
//! default harness suite and the property tests.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::geometry::{Model, Point};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let n: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// A random point of `model` with `dim` complex coordinates.
///
/// Bounded models sample radii up to `0.999`; unbounded models sample the
/// margin `Re z − ‖w‖²` log-uniformly in `[e⁻³, e³]` and the imaginary
/// part uniformly in `[−10, 10]`.
pub fn random_point<R: Rng>(rng: &mut R, model: Model, dim: usize) -> Point {
    match model {
        Model::Disk => {
            let r = 0.999 * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            Point::disk(Complex64::from_polar(r, t)).expect("sampled inside the disk")
        }
        Model::Ball => {
            let r = 0.999 * rng.gen::<f64>().powf(1.0 / (2.0 * dim as f64));
            let v: Vec<Complex64> = unit_direction(rng, dim).into_iter().map(|c| c * r).collect();
            Point::ball(v[0], v[1..].to_vec()).expect("sampled inside the ball")
        }
        Model::Halfplane => {
            let re = rng.gen_range(-3.0f64..3.0).exp();
            let im = rng.gen_range(-10.0..10.0);
            Point::halfplane(Complex64::new(re, im)).expect("sampled inside the half-plane")
        }
        Model::Siegel => {
            let w: Vec<Complex64> = (1..dim)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let wn: f64 = w.iter().map(|c| c.norm_sqr()).sum();
            let re = wn + rng.gen_range(-3.0f64..3.0).exp();
            let im = rng.gen_range(-10.0..10.0);
            Point::siegel(Complex64::new(re, im), w).expect("sampled inside the Siegel domain")
        }
    }
}

/// A random Siegel point whose coordinates reach magnitude `scale`:
/// `Re z − ‖w‖²` log-uniform in `[1e-3, scale]`, `|Im z| ≤ scale`, `|wᵢ| ≲ √scale`.
pub fn random_siegel_wide<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Point {
    let ls = scale.ln();
    let wmag = rng.gen_range((-3f64).min(ls * 0.5)..ls * 0.5).exp();
    let w: Vec<Complex64> = if dim > 1 {
        unit_direction(rng, dim - 1).into_iter().map(|c| c * wmag).collect()
    } else {
        Vec::new()
    };
    let wn: f64 = w.iter().map(|c| c.norm_sqr()).sum();
    let rho = rng.gen_range(-3f64 * 10f64.ln()..ls).exp();
    let im = rng.gen_range(-scale..scale);
    Point::siegel(Complex64::new(wn + rho, im), w).expect("sampled inside the Siegel domain")
}
