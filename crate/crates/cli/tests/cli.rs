use std::path::{Path, PathBuf};

use dwolff_cli::config::ExperimentConfig;
use dwolff_cli::run_with;
use tempfile::TempDir;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["dwolff"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn shipped(name: &str, out: &Path, args: &[&str]) -> Run {
    let cfg = configs_dir().join(name);
    let mut full = vec![args[0], "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    full.extend_from_slice(&args[1..]);
    run(&full)
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("cfg.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&[]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["classify", "--n-max", "many"]).code, 1);
    let r = run(&["classify", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error:"));

    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "[budgets]\ntol_dw = -1.0\n");
    assert_eq!(run(&["classify", "--config", cfg.to_str().unwrap()]).code, 1);
    let cfg = write_config(&dir, "[mystery]\nx = 1\n");
    assert_eq!(run(&["classify", "--config", cfg.to_str().unwrap()]).code, 1);
}

#[test]
fn help_exits_0() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("harness"));
}

#[test]
fn inconclusive_exits_2() {
    let dir = TempDir::new().unwrap();
    let r = shipped("shift_horizontal.toml", dir.path(), &["classify", "--n-max", "10000"]);
    assert_eq!(r.code, 2, "{}", r.out);
    assert!(r.out.starts_with("inconclusive"));
}

#[test]
fn classify_summaries() {
    let dir = TempDir::new().unwrap();
    let r = shipped("dilation.toml", dir.path(), &["classify"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("hyperbolic, c≈0.500000"), "{}", r.out);
    assert!(r.out.contains("Denjoy-Wolff point: infinity"));
    assert!(dir.path().join("classify.toml").exists());

    let r = shipped("rotation.toml", dir.path(), &["classify"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("elliptic"), "{}", r.out);
    assert!(r.out.contains("(interior)"));

    let r = shipped("shift_vertical.toml", dir.path(), &["classify", "--n-max", "100000"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("parabolic, c≈"), "{}", r.out);
}

#[test]
fn vertical_steps_are_constant() {
    let dir = TempDir::new().unwrap();
    let r = shipped("shift_vertical.toml", dir.path(), &["steps"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("nonzero_step"));
    let text = read(dir.path(), "steps_0.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,s_n"));
    let mut count = 0;
    for (n, line) in lines.enumerate() {
        let (idx, s) = line.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), n);
        let s: f64 = s.parse().unwrap();
        assert!((s - 0.4472135955).abs() < 1e-10, "row {n}: {s}");
        count += 1;
    }
    assert_eq!(count, 10_000);
    assert!(read(dir.path(), "steps_summary.toml").contains("verdict = \"nonzero_step\""));
}

#[test]
fn orbit_first_row_is_the_start() {
    let dir = TempDir::new().unwrap();
    let r = shipped("siegel_translation.toml", dir.path(), &["orbit", "--n-max", "50"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let cfg = ExperimentConfig::load(&configs_dir().join("siegel_translation.toml")).unwrap();
    let start = cfg.starts().unwrap()[0].coords();
    let text = read(dir.path(), "orbit_0.csv");
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&header[..3], &["n", "re", "im"]);
    assert_eq!(header.len(), 1 + 2 * start.len());
    let row0: Vec<f64> = lines.next().unwrap().split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    let expected: Vec<f64> = start.iter().flat_map(|c| [c.re, c.im]).collect();
    assert_eq!(row0, expected);
    assert_eq!(text.lines().count(), 52);
}

#[test]
fn structured_orbit_output() {
    let dir = TempDir::new().unwrap();
    let r = shipped("shift_vertical.toml", dir.path(), &["orbit", "--n-max", "5", "--format", "structured"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(!dir.path().join("orbit_0.csv").exists());
    let doc: toml::Value = toml::from_str(&read(dir.path(), "orbit_0.toml")).unwrap();
    assert_eq!(doc["points"].as_array().unwrap().len(), 6);
}

#[test]
fn table_headers() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(shipped("shift_vertical.toml", d, &["approach"]).code, 0);
    let header = read(d, "approach_0.csv").lines().next().unwrap().to_string();
    for col in ["s_n", "koranyi_q", "special_ratio", "nt_q", "radial_q", "radial_q_im"] {
        assert!(header.split(',').any(|c| c == col), "{header}");
    }

    let r = shipped("shift_horizontal.toml", d, &["conjugate"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(read(d, "conjugation.csv").lines().next(), Some("n,re_g,im_g,re_psi,im_psi"));
    assert!(read(d, "conjugation_residuals.csv").starts_with("n,residual"));
    assert!(d.join("conjugation.txt").exists());
}

#[test]
fn conjugation_rejects_wrong_model() {
    let dir = TempDir::new().unwrap();
    let r = shipped("rotation.toml", dir.path(), &["conjugate"]);
    assert_eq!(r.code, 1, "{}", r.out);
}

#[test]
fn harness_passes() {
    let dir = TempDir::new().unwrap();
    let r = shipped("harness.toml", dir.path(), &["harness"]);
    assert_eq!(r.code, 0, "{}\n{}", r.out, r.err);
    let table = read(dir.path(), "harness.csv");
    assert_eq!(table.lines().count(), 36);
    assert!(read(dir.path(), "harness_summary.toml").contains("all_passed = true"));
}

#[test]
fn probe_writes_rows() {
    let dir = TempDir::new().unwrap();
    let r = shipped("probe_composition.toml", dir.path(), &["probe"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("CONSISTENT") || r.out.starts_with("DISCREPANT"));
    assert_eq!(read(dir.path(), "probe.csv").lines().count(), 6);
    assert!(dir.path().join("probe.toml").exists());
}

#[test]
fn plot_of_empty_orbit() {
    let dir = TempDir::new().unwrap();
    let r = shipped("shift_vertical.toml", dir.path(), &["plot", "--n-max", "0"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("start point only"));
    let svg = read(dir.path(), "plot.svg");
    assert!(svg.contains("id=\"unit-circle\""));
    assert!(svg.contains("id=\"start\""));
    assert!(!svg.contains("id=\"orbit\""));
    assert!(!svg.contains("id=\"dw-point\""));
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for cmd in ["orbit", "steps", "plot"] {
        assert_eq!(shipped("perturbed.toml", a.path(), &[cmd, "--n-max", "2000"]).code, 0);
        assert_eq!(shipped("perturbed.toml", b.path(), &[cmd, "--n-max", "2000"]).code, 0);
    }
    assert_eq!(shipped("shift_vertical.toml", a.path(), &["approach"]).code, 0);
    assert_eq!(shipped("shift_vertical.toml", b.path(), &["approach"]).code, 0);
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for n in names {
        assert_eq!(std::fs::read(a.path().join(&n)).unwrap(), std::fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn shipped_configs_round_trip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 10);
}
