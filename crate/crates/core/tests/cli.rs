//! The binary against the library and against committed golden outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cvrp::array::{synthesize_eirp, ElementModel};
use cvrp::diagnostics::{compare_sweeps, PlotSource};
use cvrp::io::{self, format_power, SynthesisMetadata};
use cvrp::mask::SphericalMask;
use cvrp::metrics::{self, PrpPreset};
use cvrp::remap::remap_to_standard;
use cvrp::rotate::rotate_about_y;
use cvrp::{Array, Direction, Pattern};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvrp")).args(args).output().unwrap()
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn isotropic() -> Pattern {
    io::read_pattern(fixture("isotropic_5deg.csv")).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn trp_prints_library_value() {
    let iso = fixture("isotropic_5deg.csv");
    let out = stdout_ok(&["trp", p(&iso)]);
    assert_eq!(out, format!("{}\n", format_power(metrics::trp(&isotropic()).unwrap())));
    assert_eq!(out, fs::read_to_string(fixture("golden/isotropic_trp.txt")).unwrap());
    let mw: f64 = out.split('(').nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((mw - 1.0).abs() < 1e-3);
}

#[test]
fn full_cap_equals_trp() {
    let iso = fixture("isotropic_5deg.csv");
    assert_eq!(stdout_ok(&["cvrp", p(&iso), "--cap", "180"]), stdout_ok(&["trp", p(&iso)]));
}

#[test]
fn prp_matches_library() {
    let iso = fixture("isotropic_5deg.csv");
    let pat = isotropic();
    for (name, preset) in [("uhrp", PrpPreset::Uhrp), ("n75prp", PrpPreset::N75prp), ("nhprp", PrpPreset::Nhprp)] {
        let expected = format!("{}\n", format_power(metrics::prp_preset(&pat, preset).unwrap()));
        assert_eq!(stdout_ok(&["prp", p(&iso), "--preset", name]), expected);
    }
    let band = stdout_ok(&["prp", p(&iso), "--theta1", "20", "--theta2", "75"]);
    assert_eq!(band, format!("{}\n", format_power(metrics::prp(&pat, 20.0, 75.0).unwrap())));
    assert_eq!(
        stdout_ok(&["prp", p(&iso), "--preset", "n75prp"]),
        fs::read_to_string(fixture("golden/isotropic_n75prp.txt")).unwrap()
    );
}

#[test]
fn cvrp_masks_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let remapped = dir.path().join("lobe.csv");
    stdout_ok(&["remap", p(&fixture("lobe_distributed_5deg.csv")), "-o", p(&remapped)]);
    let pat: Pattern = io::read_pattern(&remapped).unwrap();
    let cap = SphericalMask::cap(Direction::new(30.0, 0.0), 25.0).unwrap();
    assert_eq!(
        stdout_ok(&["cvrp", p(&remapped), "--cap", "25", "--center", "30,0"]),
        format!("{}\n", format_power(metrics::cvrp(&pat, &cap).unwrap()))
    );
    let window = SphericalMask::window(10.0, 50.0, 300.0, 420.0).unwrap();
    assert_eq!(
        stdout_ok(&["cvrp", p(&remapped), "--window", "10,50,300,420"]),
        format!("{}\n", format_power(metrics::cvrp(&pat, &window).unwrap()))
    );
    assert_eq!(
        stdout_ok(&["cvrp", p(&remapped), "--point", "32.5,7.5"]),
        format!("{}\n", format_power(metrics::cvrp_point(&pat, Direction::new(32.5, 7.5))))
    );
}

#[test]
fn sweep_matches_library_and_golden() {
    let iso = fixture("isotropic_5deg.csv");
    let out = stdout_ok(&["sweep", p(&iso), "--center", "0,0", "--fovs", "180,90,30,15,0"]);
    let s = metrics::cvrp_sweep(&isotropic(), Direction::boresight(), &[180.0, 90.0, 30.0, 15.0, 0.0]).unwrap();
    let mut expected = Vec::new();
    io::write_plot_csv_to(&s.plot_rows(), &io::sweep_metadata(&s), &mut expected).unwrap();
    assert_eq!(out.as_bytes(), expected.as_slice());
    assert_eq!(out, fs::read_to_string(fixture("golden/isotropic_sweep.csv")).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sweep.csv");
    stdout_ok(&["sweep", p(&iso), "--center", "0,0", "-o", p(&file)]);
    let text = fs::read_to_string(&file).unwrap();
    // 16 FoVs plus the column header and the label line
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn remap_fill_and_rotate_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("lobe_distributed_5deg.csv");
    let std_path = dir.path().join("std.csv");
    let filled = dir.path().join("filled.csv");
    let rotated = dir.path().join("rot.csv");
    stdout_ok(&["remap", p(&src), "-o", p(&std_path)]);
    stdout_ok(&["fill", p(&std_path), "-o", p(&filled), "--fill-dbm", "-20"]);
    stdout_ok(&["rotate", p(&filled), "--about-y", "-30", "-o", p(&rotated)]);

    let distributed: Pattern = io::read_pattern(&src).unwrap();
    let standard = remap_to_standard(&distributed).unwrap();
    let lib_filled = standard.fill_unmeasured(0.01).unwrap();
    let lib_rotated = rotate_about_y(&lib_filled, -30.0).unwrap();
    for (path, pattern) in [(&std_path, &standard), (&filled, &lib_filled), (&rotated, &lib_rotated)] {
        let mut expected = Vec::new();
        io::write_pattern_to(pattern, None, &mut expected).unwrap();
        assert_eq!(fs::read(path).unwrap(), expected, "{}", path.display());
    }
    assert_eq!(fs::read(&std_path).unwrap(), fs::read(fixture("golden/lobe_standard_5deg.csv")).unwrap());
}

#[test]
fn synth_matches_library_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        stdout_ok(&["synth", "--element", "huygens", "--beam", "1", "--fe", "14,7", "--trp-dbm", "3", "-o", p(out)]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let spec = Array::reference(ElementModel::Huygens).with_scan(-45.0).with_failed([7, 14]);
    let synth = synthesize_eirp(&spec, 10f64.powf(0.3)).unwrap();
    let meta = SynthesisMetadata {
        element: ElementModel::Huygens,
        scan_deg: -45.0,
        failed_elements: vec![7, 14],
        reference_trp_dbm: 3.0,
    };
    let mut expected = Vec::new();
    io::write_pattern_to(&synth.pattern, Some(&meta), &mut expected).unwrap();
    assert_eq!(fs::read(&a).unwrap(), expected);

    let (header, _): (_, Pattern) = io::read_pattern_with_header(&a).unwrap();
    assert_eq!(header.synthesis, Some(meta));
}

#[test]
fn diagnose_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    stdout_ok(&["repro-fig5", "--out-dir", p(dir.path())]);
    let r = dir.path().join("fig5_cosine_scan0.csv");
    let t = dir.path().join("fig5_cosine_scan-45.csv");
    let cmp = dir.path().join("cmp.csv");
    let out = stdout_ok(&["diagnose", "--ref", p(&r), "--test", p(&t), "--threshold-db", "0.25", "-o", p(&cmp)]);
    let c = compare_sweeps(&io::read_sweep::<f64>(&r).unwrap(), &io::read_sweep::<f64>(&t).unwrap(), 0.25).unwrap();
    let mut expected = Vec::new();
    io::write_plot_csv_to(&c.plot_rows(), &io::comparison_metadata(&c), &mut expected).unwrap();
    assert_eq!(fs::read(&cmp).unwrap(), expected);
    assert!(out.contains(&format!("max |delta|: {:.4} dB", c.max_abs_delta_db)));
    assert_eq!(out.contains("flagged: yes"), c.flagged);
}

#[test]
fn repro_fig6_shows_narrow_fov_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout_ok(&["repro-fig6", "--scan", "0", "--fe", "14,7", "--out-dir", p(dir.path())]);
    let cmp = dir.path().join("fig6_huygens_scan0_comparison.csv");
    assert!(dir.path().join("fig6_huygens_scan0_all-on.csv").exists());
    assert!(dir.path().join("fig6_huygens_scan0_fe7-14.csv").exists());
    let text = fs::read_to_string(&cmp).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    let delta = |fov: &str| -> f64 { rows.iter().find(|r| r[0] == fov).unwrap()[3].parse().unwrap() };
    assert!(delta("180").abs() < 0.1);
    assert!(delta("3").abs() > delta("180").abs());
    assert!(out.contains("flagged: yes"));
}

#[test]
fn usage_errors_exit_2_and_domain_errors_exit_1() {
    let iso = fixture("isotropic_5deg.csv");
    assert_eq!(run(&["trp"]).status.code(), Some(2));
    assert_eq!(run(&["cvrp", p(&iso), "--cap", "x"]).status.code(), Some(2));
    assert_eq!(run(&["cvrp", p(&iso)]).status.code(), Some(2));
    assert_eq!(run(&["cvrp", p(&iso), "--point", "200,0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["trp", "/nonexistent/file.csv"]).status.code(), Some(1));
    assert_eq!(run(&["prp", p(&iso), "--theta1", "90", "--theta2", "30"]).status.code(), Some(1));
    // distributed patterns must be remapped before integration
    let out = run(&["trp", p(&fixture("lobe_distributed_5deg.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("standard"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    let text = fs::read_to_string(&iso).unwrap().replacen("5,0,", "5,2.5,", 1);
    fs::write(&bad, text).unwrap();
    let out = run(&["trp", p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.csv:80:"), "{err}");
}
