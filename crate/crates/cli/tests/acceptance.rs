//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use dwolff::conjugation::{baker_pommerenke_normalized, pommerenke_normalized, ConjugationOptions};
use dwolff::diagnostics::{
    conjecture_probe, default_suite, flag_logic_violations, probe_starts, theorem_harness, CaseFamily,
    HarnessOptions, ProbeVerdict, RowStatus,
};
use dwolff::dynamics::{classify, iterate, step_series, Budgets, MapType, StepRule, StepVerdict, StopPolicy};
use dwolff::geometry::{
    cayley_halfplane_to_disk, cayley_siegel_to_ball, pdist, pdist_ball, pdist_disk, pdist_halfplane, pdist_siegel,
    BallPoint, Model, Point, SiegelPoint,
};
use dwolff::maps::{CayleyTag, MapSpec};
use dwolff::sample::{random_point, random_siegel_wide, rng};
use dwolff::Complex64;
use dwolff_cli::commands::plot_data;
use dwolff_cli::config::ExperimentConfig;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure!(e < limit, "{what} took {e:?}, limit {limit:?}");
    Ok(())
}

// ---------------------------------------------------------------------------
// 1. metrics

/// `d² = 1 − (1−‖Z‖²)(1−‖W‖²)/|1−⟨Z,W⟩|²` evaluated literally.
fn d2_textbook(z: &[Complex64], w: &[Complex64]) -> f64 {
    let nz: f64 = z.iter().map(|x| x.norm_sqr()).sum();
    let nw: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    let ip: Complex64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
    1.0 - (1.0 - nz) * (1.0 - nw) / (1.0 - ip).norm_sqr()
}

/// `d² = 1 − 4ρρ′/|z + z̄′ − 2⟨w,w′⟩|²` evaluated literally.
fn d2_siegel_textbook(p: &SiegelPoint, q: &SiegelPoint) -> f64 {
    let ip: Complex64 = p.w().iter().zip(q.w()).map(|(a, b)| a * b.conj()).sum();
    let a = p.z() + q.z().conj() - 2.0 * ip;
    1.0 - 4.0 * p.margin() * q.margin() / a.norm_sqr()
}

fn criterion_metrics() -> Outcome {
    let t = Instant::now();
    let mut r = rng(101);
    let n = 1000;
    let mut worst_planar = 0.0f64;
    let mut worst_siegel = 0.0f64;

    let disk: Vec<Point> = (0..=n).map(|_| random_point(&mut r, Model::Disk, 1)).collect();
    for pair in disk.windows(2) {
        let (Point::Disk(a), Point::Disk(b)) = (&pair[0], &pair[1]) else { unreachable!() };
        let dd = pdist_disk(a, b);
        let err = (dd * dd - d2_textbook(&[a.z()], &[b.z()])).abs();
        worst_planar = worst_planar.max(err).max((dd - pdist_disk(b, a)).abs());
        let ba = BallPoint::from_coords(vec![a.z()]).unwrap();
        let bb = BallPoint::from_coords(vec![b.z()]).unwrap();
        worst_planar = worst_planar.max((pdist_ball(&ba, &bb).unwrap() - dd).abs());
        // |1 − z̄w|² − (1 − |z|²)(1 − |w|²) = |z − w|²
        let (z, w) = (a.z(), b.z());
        let ident = (1.0 - z.conj() * w).norm_sqr() - (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) - (z - w).norm_sqr();
        worst_planar = worst_planar.max(ident.abs());
    }

    let hp: Vec<Point> = (0..=n).map(|_| random_point(&mut r, Model::Halfplane, 1)).collect();
    for pair in hp.windows(2) {
        let (Point::Halfplane(a), Point::Halfplane(b)) = (&pair[0], &pair[1]) else { unreachable!() };
        let direct = pdist_halfplane(a, b);
        let ua = cayley_halfplane_to_disk(a).unwrap();
        let ub = cayley_halfplane_to_disk(b).unwrap();
        worst_planar = worst_planar.max((direct - pdist_disk(&ua, &ub)).abs());
        let sa = SiegelPoint::new(a.z(), vec![]).unwrap();
        let sb = SiegelPoint::new(b.z(), vec![]).unwrap();
        worst_planar = worst_planar.max((pdist_siegel(&sa, &sb).unwrap() - direct).abs());
    }

    for dim in [2, 3] {
        let ball: Vec<Point> = (0..=n).map(|_| random_point(&mut r, Model::Ball, dim)).collect();
        for pair in ball.windows(2) {
            let (Point::Ball(a), Point::Ball(b)) = (&pair[0], &pair[1]) else { unreachable!() };
            let d = pdist_ball(a, b).unwrap();
            worst_planar = worst_planar.max((d * d - d2_textbook(a.coords(), b.coords())).abs());
            worst_planar = worst_planar.max((d - pdist_ball(b, a).unwrap()).abs());
        }

        let sg: Vec<Point> = (0..=n).map(|_| random_point(&mut r, Model::Siegel, dim)).collect();
        for pair in sg.windows(2) {
            let (Point::Siegel(a), Point::Siegel(b)) = (&pair[0], &pair[1]) else { unreachable!() };
            let direct = pdist_siegel(a, b).unwrap();
            let via = pdist_ball(&cayley_siegel_to_ball(a).unwrap(), &cayley_siegel_to_ball(b).unwrap()).unwrap();
            worst_siegel = worst_siegel.max((direct - via).abs());
            worst_siegel = worst_siegel.max((direct - pdist_siegel(b, a).unwrap()).abs());
        }

        // large coordinates: the cancellation-free form against the literal one
        for _ in 0..n {
            let p = random_siegel_wide(&mut r, dim, 1e6);
            let q = random_siegel_wide(&mut r, dim, 1e6);
            let (Point::Siegel(a), Point::Siegel(b)) = (&p, &q) else { unreachable!() };
            let d = pdist_siegel(a, b).unwrap();
            worst_siegel = worst_siegel.max((d * d - d2_siegel_textbook(a, b)).abs());
        }
    }
    ensure!(worst_planar <= 1e-12, "planar/ball deviation {worst_planar:e} > 1e-12");
    ensure!(worst_siegel <= 1e-10, "Siegel deviation {worst_siegel:e} > 1e-10");
    within(t, Duration::from_secs(5), "metric suite")?;
    Ok(format!("worst planar {worst_planar:.1e}, worst Siegel {worst_siegel:.1e}, {:?}", t.elapsed()))
}

// ---------------------------------------------------------------------------
// 2. Schwarz–Pick

fn random_spec<R: Rng>(r: &mut R, depth: usize) -> MapSpec {
    let cx = |r: &mut R, lo: f64, hi: f64| c(r.gen_range(lo..hi), r.gen_range(lo..hi));
    let pick = if depth == 0 { r.gen_range(0..8) } else { r.gen_range(0..6) };
    match pick {
        0 => {
            let a = Complex64::from_polar(r.gen_range(0.0..0.95), r.gen_range(-PI..PI));
            MapSpec::disk_moebius(a, r.gen_range(-PI..PI))
        }
        1 => {
            let re = if r.gen_bool(0.5) { 0.0 } else { r.gen_range(0.0..2.0) };
            MapSpec::halfplane_affine(r.gen_range(0.25..4.0), c(re, r.gen_range(-2.0..2.0)))
        }
        2 => loop {
            let f = MapSpec::halfplane_perturbed(c(r.gen_range(0.0..2.0), r.gen_range(-2.0..2.0)), cx(r, 0.0, 2.0));
            if f.analytic_check().is_ok() {
                break f;
            }
        },
        3 => {
            let re = if r.gen_bool(0.5) { 0.0 } else { r.gen_range(0.0..2.0) };
            MapSpec::siegel_translation(c(re, r.gen_range(-2.0..2.0)))
        }
        4 => MapSpec::heisenberg(vec![cx(r, -1.5, 1.5)], r.gen_range(-2.0..2.0)),
        5 => MapSpec::Identity { model: [Model::Disk, Model::Halfplane, Model::Siegel][r.gen_range(0..3)] },
        6 => {
            // two members of one family so the composition is well typed
            let a = random_spec(r, 1);
            let model = a.model().unwrap();
            let b = loop {
                let b = random_spec(r, 1);
                if b.model().unwrap() == model && b.dimension().unwrap_or(0) == a.dimension().unwrap_or(0) {
                    break b;
                }
            };
            MapSpec::Composition { members: vec![a, b] }
        }
        _ => loop {
            let inner = random_spec(r, 1);
            let tag = match inner.model().unwrap() {
                Model::Halfplane => CayleyTag::HalfplaneToDisk,
                Model::Disk => CayleyTag::DiskToHalfplane,
                Model::Siegel => CayleyTag::SiegelToBall,
                Model::Ball => CayleyTag::BallToSiegel,
            };
            break MapSpec::Conjugated { inner: Box::new(inner), by: tag };
        },
    }
}

fn criterion_schwarz_pick() -> Outcome {
    let t = Instant::now();
    let mut r = rng(202);
    let (mut worst_excess, mut worst_iso) = (f64::NEG_INFINITY, 0.0f64);
    let mut automorphisms = 0;
    for _ in 0..1000 {
        let f = random_spec(&mut r, 0);
        let model = f.model().unwrap();
        let dim = match model {
            Model::Disk | Model::Halfplane => 1,
            _ => f.dimension().unwrap_or(2),
        };
        let z = random_point(&mut r, model, dim);
        let w = random_point(&mut r, model, dim);
        let before = pdist(&z, &w).unwrap();
        let after = pdist(&f.evaluate(&z).unwrap(), &f.evaluate(&w).unwrap()).unwrap();
        worst_excess = worst_excess.max(after - before);
        if f.is_automorphism() {
            automorphisms += 1;
            worst_iso = worst_iso.max((after - before).abs());
        }
    }
    ensure!(worst_excess <= 1e-12, "contraction violated by {worst_excess:e}");
    ensure!(worst_iso <= 1e-12, "automorphism distortion {worst_iso:e}");
    ensure!(automorphisms >= 100, "only {automorphisms} automorphism samples");
    within(t, Duration::from_secs(10), "Schwarz-Pick suite")?;
    Ok(format!(
        "max excess {worst_excess:.1e}, automorphism distortion {worst_iso:.1e} over {automorphisms} samples"
    ))
}

// ---------------------------------------------------------------------------
// 3. step oracles

fn criterion_steps() -> Outcome {
    let hp = |z| Point::halfplane(z).unwrap();
    let rule = StepRule::default();
    let vertical = iterate(&MapSpec::halfplane_affine(1.0, c(0.0, 1.0)), &hp(c(1.0, 0.0)), 10_000, &StopPolicy::default())
        .map_err(|e| e.to_string())?;
    let s = step_series(&vertical, &rule).map_err(|e| e.to_string())?;
    let oracle = 1.0 / 5f64.sqrt();
    let worst_v = s.s.iter().map(|x| (x - oracle).abs()).fold(0.0, f64::max);
    ensure!(s.s.len() == 10_000, "vertical orbit stopped early");
    ensure!(worst_v <= 1e-10, "z+i deviates by {worst_v:e}");
    ensure!(s.verdict == StepVerdict::NonzeroStep, "z+i verdict {}", s.verdict);

    let horizontal =
        iterate(&MapSpec::halfplane_affine(1.0, c(1.0, 0.0)), &hp(c(1.0, 0.0)), 10_000, &StopPolicy::default())
            .map_err(|e| e.to_string())?;
    let s = step_series(&horizontal, &rule).map_err(|e| e.to_string())?;
    let worst_h = s.s.iter().enumerate().map(|(n, x)| (x - 1.0 / (2.0 * n as f64 + 3.0)).abs()).fold(0.0, f64::max);
    ensure!(worst_h <= 1e-10, "z+1 deviates by {worst_h:e}");
    ensure!(s.verdict == StepVerdict::ZeroStep, "z+1 verdict {}", s.verdict);
    Ok(format!("z+i max deviation {worst_v:.1e}, z+1 max deviation {worst_h:.1e}"))
}

// ---------------------------------------------------------------------------
// 4. classification

fn criterion_classification() -> Outcome {
    let t = Instant::now();
    let budgets = Budgets::default();
    let hp = |z| Point::halfplane(z).unwrap();
    let sg = |z, w| Point::siegel(z, w).unwrap();
    let hstarts = vec![hp(c(1.0, 0.0)), hp(c(2.0, 1.0))];
    let sstarts = vec![sg(c(1.0, 0.0), vec![c(0.3, 0.0)]), sg(c(2.0, 1.0), vec![c(0.0, 0.5)])];

    let r = classify(&MapSpec::halfplane_affine(2.0, c(0.0, 0.0)), &hstarts, &budgets);
    let mult = r.multiplier_c.unwrap_or(f64::NAN);
    ensure!(r.map_type == MapType::Hyperbolic, "2z classified {}", r.map_type);
    ensure!((mult - 0.5).abs() < 1e-6, "2z multiplier {mult}");

    let parabolic = [
        ("z+1", MapSpec::halfplane_affine(1.0, c(1.0, 0.0)), &hstarts),
        ("z+i", MapSpec::halfplane_affine(1.0, c(0.0, 1.0)), &hstarts),
        ("Siegel translation", MapSpec::siegel_translation(c(1.0, 0.0)), &sstarts),
        ("Heisenberg translation", MapSpec::heisenberg(vec![c(0.5, 0.5)], 0.5), &sstarts),
    ];
    let mut worst = 0.0f64;
    for (name, f, starts) in parabolic {
        let r = classify(&f, starts, &budgets);
        let m = r.multiplier_c.unwrap_or(f64::NAN);
        ensure!(r.map_type == MapType::Parabolic, "{name} classified {} ({:?})", r.map_type, r.notes);
        ensure!((m - 1.0).abs() < 1e-3, "{name} multiplier {m}");
        worst = worst.max((m - 1.0).abs());
    }

    let rot = MapSpec::disk_moebius(c(0.0, 0.0), 1.0);
    let dstarts = vec![Point::disk(c(0.3, 0.0)).unwrap(), Point::disk(c(-0.2, 0.5)).unwrap()];
    let r = classify(&rot, &dstarts, &budgets);
    ensure!(r.map_type == MapType::Elliptic, "rotation classified {}", r.map_type);
    within(t, Duration::from_secs(30), "classification suite")?;
    Ok(format!("2z c = {mult:.9}, parabolic max |c-1| = {worst:.1e}, {:?}", t.elapsed()))
}

// ---------------------------------------------------------------------------
// 5 and 6. conjugations

fn criterion_pommerenke() -> Outcome {
    let opts = ConjugationOptions::default();
    let mut worst = 0.0f64;
    for (name, f) in [
        ("z+i", MapSpec::halfplane_affine(1.0, c(0.0, 1.0))),
        ("z+1", MapSpec::halfplane_affine(1.0, c(1.0, 0.0))),
    ] {
        let res = pommerenke_normalized(&f, &opts).map_err(|e| format!("{name}: {e}"))?;
        let m = res.residual_series.iter().copied().fold(0.0, f64::max);
        ensure!(m < 1e-10, "{name} residual {m:e}");
        worst = worst.max(m);
    }
    let f = MapSpec::halfplane_perturbed(c(0.0, 1.0), c(1.0, 0.0));
    let res = pommerenke_normalized(&f, &ConjugationOptions { checkpoints: vec![100, 1_000, 10_000], ..opts })
        .map_err(|e| e.to_string())?;
    let rs = &res.residual_series;
    ensure!(rs.windows(2).all(|w| w[1] < w[0]), "perturbed residuals not decreasing: {rs:?}");
    ensure!(rs[rs.len() - 1] < 0.05, "perturbed final residual {:e}", rs[rs.len() - 1]);
    Ok(format!(
        "closed forms max {worst:.1e}; z+i+1/(z+1) residuals {:.1e} > {:.1e} > {:.1e}, b ≈ {:.6}",
        rs[0],
        rs[1],
        rs[2],
        res.b_estimate.unwrap_or(f64::NAN)
    ))
}

fn criterion_baker_pommerenke() -> Outcome {
    let opts = ConjugationOptions::default();
    let res = baker_pommerenke_normalized(&MapSpec::halfplane_affine(1.0, c(1.0, 0.0)), &opts)
        .map_err(|e| format!("z+1: {e}"))?;
    let m = res.residual_series.iter().copied().fold(0.0, f64::max);
    ensure!(m < 1e-12, "z+1 residual {m:e}");
    let f = MapSpec::halfplane_perturbed(c(1.0, 0.0), c(1.0, 0.0));
    let res = baker_pommerenke_normalized(&f, &opts).map_err(|e| e.to_string())?;
    let rs = &res.residual_series;
    ensure!(rs.windows(2).all(|w| w[1] < w[0]), "perturbed residuals not decreasing: {rs:?}");
    ensure!(rs[rs.len() - 1] < 0.05, "perturbed final residual {:e}", rs[rs.len() - 1]);
    Ok(format!("z+1 residual {m:.1e}; z+1+1/(z+1) residuals {:.1e} down to {:.1e}", rs[0], rs[rs.len() - 1]))
}

// ---------------------------------------------------------------------------
// 7 and 8. theorem harness and flag logic

fn criterion_harness(report: &dwolff::diagnostics::HarnessReport, elapsed: Duration) -> Outcome {
    let count = |f| report.rows.iter().filter(|r| r.family == f).count();
    ensure!(count(CaseFamily::SiegelTranslation) >= 20, "too few Siegel cases");
    ensure!(count(CaseFamily::HeisenbergTranslation) >= 10, "too few Heisenberg cases");
    ensure!(count(CaseFamily::Mixed) >= 5, "too few mixed cases");
    for r in &report.rows {
        ensure!(r.status == RowStatus::Pass, "{} {:?}: {:?}", r.label, r.status, r.reasons);
        if r.restricted {
            ensure!(r.step_verdict == Some(StepVerdict::ZeroStep), "{}: restricted with {:?}", r.label, r.step_verdict);
            let q = r.radial_quotient_final.ok_or("missing radial quotient")?;
            ensure!((q - 1.0).norm() < 1e-2, "{}: final radial quotient {q}", r.label);
            ensure!(r.radial_tail_deviation.unwrap_or(f64::NAN) < 1e-2, "{}: radial tail", r.label);
            ensure!(r.arg_margin.unwrap_or(f64::NAN) > 0.01, "{}: argument margin", r.label);
        }
        if r.family == CaseFamily::HeisenbergTranslation {
            ensure!(r.step_verdict == Some(StepVerdict::NonzeroStep), "{}: {:?}", r.label, r.step_verdict);
            ensure!(!r.restricted, "{}: Heisenberg row restricted", r.label);
        }
    }
    ensure!(report.summary.theorem_violations == 0, "theorem violations");
    ensure!(elapsed < Duration::from_secs(120), "harness took {elapsed:?}");
    let s = report.summary;
    Ok(format!(
        "{} rows, {} restricted (all zero_step), {} nonzero_step, 0 violations, {elapsed:?}",
        s.total, s.restricted, s.nonzero_step
    ))
}

fn criterion_flag_logic(report: &dwolff::diagnostics::HarnessReport) -> Outcome {
    let mut checked = 0;
    for r in &report.rows {
        let a = r.approach.as_ref().ok_or_else(|| format!("{}: no approach report", r.label))?;
        let v = flag_logic_violations(&a.flags);
        ensure!(v.is_empty(), "{}: {v:?}", r.label);
        checked += 1;
    }
    Ok(format!("{checked} approach reports, three implications hold on each"))
}

// ---------------------------------------------------------------------------
// 9. figures

fn plot_config(dir: &Path, b: Complex64, n_max: usize) -> String {
    format!(
        "[map]\nfamily = \"halfplane_affine\"\nlambda = 1.0\nb = [{}, {}]\n\n[[starts]]\nmodel = \"halfplane\"\nz = [1.0, 0.0]\n\n\
         [[starts]]\nmodel = \"halfplane\"\nz = [2.0, 1.0]\n\n[budgets]\nn_max = {n_max}\n\n[output]\ndir = {:?}\n",
        b.re,
        b.im,
        dir.display().to_string()
    )
}

fn run_plot(dir: &Path, cfg_text: &str) -> Result<Vec<u8>, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let cfg_path = dir.join("plot.toml");
    std::fs::write(&cfg_path, cfg_text).map_err(|e| e.to_string())?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dwolff_cli::run_with(
        ["dwolff", "plot", "--config", cfg_path.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    ensure!(code == 0, "plot exited {code}: {}", String::from_utf8_lossy(&err));
    std::fs::read(dir.join("plot.svg")).map_err(|e| e.to_string())
}

fn criterion_figures() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;

    let vdir = tmp.path().join("vertical");
    let vcfg = plot_config(&vdir, c(0.0, 1.0), 10_000);
    let data = plot_data(&ExperimentConfig::from_toml(&vcfg).map_err(|e| e.to_string())?).map_err(|e| format!("{:#}", e.error))?;
    ensure!(data.points.len() == 10_001, "vertical orbit has {} points", data.points.len());
    let (x, y) = *data.points.last().unwrap();
    let u = c(x, y);
    let edge = 1.0 - u.norm();
    let angle = (1.0 - u).arg();
    ensure!(edge.abs() < 0.05, "final point {edge:e} from the circle");
    ensure!((angle + FRAC_PI_2).abs() < 0.05, "angle of 1 - z_n is {angle}");
    ensure!(data.dw == Some((1.0, 0.0)), "Denjoy-Wolff marker at {:?}", data.dw);
    let svg1 = run_plot(&vdir, &vcfg)?;
    let svg2 = run_plot(&vdir, &vcfg)?;
    ensure!(svg1 == svg2, "vertical SVG differs between runs");
    let text = String::from_utf8_lossy(&svg1);
    for id in ["unit-circle", "orbit", "final", "dw-point", "start"] {
        ensure!(text.contains(&format!("id=\"{id}\"")), "SVG lacks {id}");
    }

    let hdir = tmp.path().join("horizontal");
    let hcfg = plot_config(&hdir, c(1.0, 0.0), 10_000);
    let data = plot_data(&ExperimentConfig::from_toml(&hcfg).map_err(|e| e.to_string())?).map_err(|e| format!("{:#}", e.error))?;
    let worst_im = data.points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    ensure!(worst_im < 1e-12, "radial orbit leaves the real axis by {worst_im:e}");
    ensure!(data.points.iter().all(|p| (0.0..1.0).contains(&p.0)), "radial orbit leaves [0, 1)");
    let svg1 = run_plot(&hdir, &hcfg)?;
    let svg2 = run_plot(&hdir, &hcfg)?;
    ensure!(svg1 == svg2, "horizontal SVG differs between runs");
    Ok(format!("z+i: angle {angle:.6} (target {:.6}), 1-|z| = {edge:.1e}; z+1: max |Im| = {worst_im:.1e}", -FRAC_PI_2))
}

// ---------------------------------------------------------------------------
// 10. conjecture probe

fn criterion_probe() -> Outcome {
    let budgets = Budgets::default();
    let families = [
        ("z+1", MapSpec::halfplane_affine(1.0, c(1.0, 0.0)), StepVerdict::ZeroStep),
        ("z+i", MapSpec::halfplane_affine(1.0, c(0.0, 1.0)), StepVerdict::NonzeroStep),
        ("z+1+1/(z+1)", MapSpec::halfplane_perturbed(c(1.0, 0.0), c(1.0, 0.0)), StepVerdict::ZeroStep),
        ("z+i+1/(z+1)", MapSpec::halfplane_perturbed(c(0.0, 1.0), c(1.0, 0.0)), StepVerdict::NonzeroStep),
        ("Siegel translation", MapSpec::siegel_translation(c(1.0, 0.0)), StepVerdict::ZeroStep),
        ("Heisenberg translation", MapSpec::heisenberg(vec![c(0.5, 0.5)], 0.5), StepVerdict::NonzeroStep),
    ];
    for (name, f, expected) in &families {
        let model = f.model().unwrap();
        let dim = if model == Model::Siegel { 2 } else { 1 };
        let r = conjecture_probe(f, &probe_starts(model, dim), &budgets).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.rows.len() == 5, "{name}: {} rows", r.rows.len());
        ensure!(r.verdict == ProbeVerdict::Consistent, "{name}: DISCREPANT {:?}", r.rows);
        ensure!(r.rows.iter().all(|row| row.verdict == *expected), "{name}: expected {expected}");
    }
    let comp = MapSpec::Composition {
        members: vec![MapSpec::siegel_translation(c(1.0, 0.0)), MapSpec::heisenberg(vec![c(0.5, 0.0)], 0.0)],
    };
    let r = conjecture_probe(&comp, &probe_starts(Model::Siegel, 2), &budgets).map_err(|e| e.to_string())?;
    ensure!(r.rows.len() == 5, "composition probe has {} rows", r.rows.len());
    Ok(format!("{} built-in families CONSISTENT; composition reported {} ({})", families.len(), r.verdict, r.rows[0].verdict))
}

// ---------------------------------------------------------------------------

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn main() {
    let t = Instant::now();
    // the suite runs once and feeds criteria 7 and 8
    let shared = {
        let t = Instant::now();
        let report = theorem_harness(&default_suite(0), &HarnessOptions::default());
        (report, t.elapsed())
    };

    let results: Vec<(&str, Outcome)> = vec![
        ("metric correctness", guarded(criterion_metrics)),
        ("Schwarz-Pick contraction", guarded(criterion_schwarz_pick)),
        ("step oracles", guarded(criterion_steps)),
        ("classification", guarded(criterion_classification)),
        ("Pommerenke conjugation", guarded(criterion_pommerenke)),
        ("Baker-Pommerenke Abel equation", guarded(criterion_baker_pommerenke)),
        ("main theorem harness", guarded(|| criterion_harness(&shared.0, shared.1))),
        ("lemma flag logic", guarded(|| criterion_flag_logic(&shared.0))),
        ("figure reproduction", guarded(criterion_figures)),
        ("conjecture probe", guarded(criterion_probe)),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:?}", results.len() - failed, results.len(), t.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
