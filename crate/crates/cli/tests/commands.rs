use std::path::{Path, PathBuf};
use std::process::Command;

use bisoliton::bjorling::BjorlingStrip;
use bisoliton::surface::BcSurface;
use bisoliton_cli::commands::bjorling::write_strip_csv;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    out: PathBuf,
    _dir: TempDir,
}

impl Run {
    fn file(&self, name: &str) -> String {
        std::fs::read_to_string(self.out.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
    }

    /// Rows of a CSV file as maps from column name to cell.
    fn csv(&self, name: &str) -> Vec<std::collections::HashMap<String, String>> {
        let mut rdr = csv::Reader::from_path(self.out.join(name)).unwrap();
        let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
        rdr.records()
            .map(|r| header.iter().cloned().zip(r.unwrap().iter().map(String::from)).collect())
            .collect()
    }

    fn check(&self, name: &str, check: &str) -> (f64, bool) {
        let row = self.csv(name).into_iter().find(|r| r["check"] == check).unwrap_or_else(|| panic!("no {check}"));
        (row["value"].parse().unwrap(), row["pass"] == "true")
    }
}

fn run_with(cmd: &str, config: &str, extra: &[&str], setup: impl FnOnce(&Path)) -> Run {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path());
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, config).unwrap();
    let out = dir.path().join("out");
    let res = Command::new(env!("CARGO_BIN_EXE_bisoliton"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    Run {
        code: res.status.code().unwrap_or(-1),
        stdout: String::from_utf8(res.stdout).unwrap(),
        stderr: String::from_utf8(res.stderr).unwrap(),
        out,
        _dir: dir,
    }
}

fn run(cmd: &str, config: &str, extra: &[&str]) -> Run {
    run_with(cmd, config, extra, |_| {})
}

const SURFACE: &str = r#"
[surface]
f = "r"
g = "s"
r = [-0.5, 0.5]
s = [-0.5, 0.5]
grid = [33, 33]
"#;

#[test]
fn surface_identity_mesh() {
    let r = run("surface", SURFACE, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let obj = r.file("surface.obj");
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 1089);
    assert_eq!(obj.lines().filter(|l| l.starts_with("vn ")).count(), 1089);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 32 * 32);
    let rows = r.csv("surface_report.csv");
    assert_eq!(rows.len(), 1089);
    assert!(rows.iter().all(|row| row["regular"] == "true"));
    let (h, ok) = r.check("surface_checks.csv", "max_abs_mean_curvature");
    assert!(ok && h < 1e-4, "{h:e}");
    // Ñ column against its closed form
    for row in rows.iter().step_by(37) {
        let (p, q): (f64, f64) = (row["r"].parse().unwrap(), row["s"].parse().unwrap());
        let n3: f64 = row["ntilde3"].parse().unwrap();
        assert!((n3 - (p * q - 1.0) / (1.0 + p * q)).abs() < 1e-15);
    }
}

#[test]
fn surface_drops_cells_on_fold() {
    let cfg = SURFACE.replace("f = \"r\"", "f = \"r^2\"").replace("[33, 33]", "[21, 21]");
    let r = run("surface", &cfg, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = r.csv("surface_report.csv");
    for row in &rows {
        let on_fold = row["r"].parse::<f64>().unwrap() == 0.0;
        assert_eq!(row["regular"] == "false", on_fold, "{row:?}");
    }
    // 20 × 20 cells, the two columns touching r = 0 removed
    let faces = r.file("surface.obj").lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(faces, 18 * 20);
}

fn diagonal_strip_file(dir: &Path, f: &str, g: &str) {
    let surf = BcSurface::parse(f, g).unwrap();
    let strip = BjorlingStrip::along_diagonal(&surf, -0.5, 0.5, 201).unwrap();
    write_strip_csv(&strip, &dir.join("strip.csv"), false).unwrap();
}

#[test]
fn bjorling_from_strip_file() {
    let r = run_with("bjorling", "[bjorling]\nstrip_file = \"strip.csv\"\n", &[], |d| diagonal_strip_file(d, "r", "s"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    for name in ["curve_residual", "normal_residual"] {
        let (v, ok) = r.check("bjorling_checks.csv", name);
        assert!(ok && v < 1e-5, "{name}: {v:e}");
    }
    let table = r.csv("fg_table.csv");
    assert_eq!(table.len(), 201);
    for row in &table {
        let fp: f64 = row["fprime"].parse().unwrap();
        let gp: f64 = row["gprime"].parse().unwrap();
        assert!((fp - 1.0).abs() < 1e-4 && (gp - 1.0).abs() < 1e-4, "{row:?}");
    }
    assert!(r.file("bjorling.obj").lines().any(|l| l.starts_with("f ")));
}

#[test]
fn horizontal_normal_is_rejected_by_name() {
    let text = "t,c1,c2,c3,n1,n2,n3\n0,0,0,0,0,0,-1\n0.5,0.5,0,0,0,1,0\n1,1,0,0,0,0,-1\n";
    let r = run_with("bjorling", "[bjorling]\nstrip_file = \"strip.csv\"\n", &[], |d| {
        std::fs::write(d.join("strip.csv"), text).unwrap()
    });
    assert_ne!(r.code, 0);
    assert!(r.stderr.contains("NormalThirdComponentZero"), "{}", r.stderr);
    assert!(r.stderr.contains("hint:"), "{}", r.stderr);
}

#[test]
fn inconsistent_strip_names_the_error() {
    // curve and normal of different surfaces
    let cfg = r#"
[bjorling.strip]
c = ["t", "t", "0"]
n = ["0", "0", "-1"]
interval = [-0.5, 0.5]
samples = 51
"#;
    let r = run("bjorling", cfg, &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error ["), "{}", r.stderr);
}

#[test]
fn bjorling_perturb_flag() {
    let cfg = "[bjorling.diagonal]\nf = \"sin(r)\"\ng = \"s\"\ninterval = [-0.5, 0.5]\n";
    let r = run("bjorling", cfg, &["--perturb", "J=1.0,1.5", "amp=0.05"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    let (agree, ok) = r.check("perturb_report.csv", "agreement_on_data_square");
    assert!(ok && agree < 1e-6);
    let (diff, ok) = r.check("perturb_report.csv", "difference_on_bump_midline");
    assert!(ok && diff > 1e-3, "{diff:e}");
    assert_ne!(r.file("bjorling.obj"), r.file("bjorling_perturbed.obj"));
    let bad = run("bjorling", cfg, &["--perturb", "J=0.0,1.5", "amp=0.05"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("IntervalOverlapsData"), "{}", bad.stderr);
}

const PLANE: &str = r#"
[bjorling_tms]
c = ["t", "0", "0"]
n = ["0", "1", "0"]
interval = [-1.0, 1.0]
t = [-0.5, 0.5]
s = [-0.5, 0.5]
grid = [9, 9]
density = 8
"#;

#[test]
fn tms_plane() {
    let r = run("bjorling-tms", PLANE, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for row in r.csv("tms_report.csv") {
        let v = |k: &str| row[k].parse::<f64>().unwrap();
        assert!((v("x") - v("s")).abs() < 1e-10 && v("y").abs() < 1e-10 && (v("z") - v("t")).abs() < 1e-10);
    }
    let (curve, ok) = r.check("tms_checks.csv", "curve_residual");
    assert!(ok && curve < 1e-10);
    let gale = r.csv("gale_report.csv");
    let x23 = gale.iter().find(|g| g["components"] == "X2_X3").unwrap();
    assert_eq!(x23["minors_nonvanishing"], "false");
    assert_eq!(x23["det_nonzero_and_diag_sign_constant"], "false");
    assert_eq!(x23["zero_diagonal_ambiguity"], "false");
    let x13 = gale.iter().find(|g| g["components"] == "X1_X3").unwrap();
    assert_eq!(x13["zero_diagonal_ambiguity"], "true");
    assert_eq!(r.csv("jacobian_X1_X3.csv").len(), 64);
    assert!(r.stdout.contains("spacelike"));
}

#[test]
fn tms_timelike_branch_and_bridge() {
    let cfg = r#"
[bjorling_tms]
c = ["cos(t)", "sin(t)", "2*t"]
n = ["cos(t)", "sin(t)", "0"]
interval = [-1.0, 1.0]
t = [-0.4, 0.4]
s = [-0.3, 0.3]
grid = [9, 9]
density = 8
to_b3 = true
components = [[0, 1]]
"#;
    let r = run("bjorling-tms", cfg, &[]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("timelike, w = t + k's"));
    // on the data line s = 0 the B3 surface is the bridged curve (sin t, 2t, cos t)
    for row in r.csv("tms_report.csv").iter().filter(|row| row["s"].parse::<f64>().unwrap() == 0.0) {
        let t: f64 = row["t"].parse().unwrap();
        let v = |k: &str| row[k].parse::<f64>().unwrap();
        assert!((v("x") - t.sin()).abs() < 1e-10 && (v("y") - 2.0 * t).abs() < 1e-10 && (v("z") - t.cos()).abs() < 1e-10);
    }
}

#[test]
fn tms_mixed_causal_character() {
    let cfg = PLANE.replace("c = [\"t\", \"0\", \"0\"]", "c = [\"t\", \"0\", \"t^2\"]");
    let r = run("bjorling-tms", &cfg, &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("MixedCausalCharacter"), "{}", r.stderr);
}

const VERIFY: &str = r#"
[verify]
f = "sin(r)"
g = "s + s^3/3"
r = [-1.0, 1.0]
s = [-1.0, 1.0]
grid = [15, 15]
random_points = 16
"#;

#[test]
fn verify_passes_and_negative_control_fails() {
    let r = run("verify", VERIFY, &[]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.csv("verify_report.csv").iter().all(|row| row["pass"] == "true"));

    let bad = run("verify", &format!("{VERIFY}debug_corrupt_normal = true\n"), &[]);
    assert_eq!(bad.code, 1);
    let (_, ok) = bad.check("verify_report.csv", "normal_formula");
    assert!(!ok);
    let (_, ok) = bad.check("verify_report.csv", "inversion");
    assert!(!ok);
}

#[test]
fn verify_with_born_infeld_check() {
    let cfg = "[verify]\nf = \"r\"\ng = \"s\"\nr = [-0.4, 0.4]\ns = [-0.4, 0.4]\ngrid = [9, 9]\nbi_pde = true\n";
    let r = run("verify", cfg, &[]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    let (res, ok) = r.check("verify_report.csv", "bi_pde_residual");
    assert!(ok && res < 1e-3);
}

#[test]
fn seed_selects_the_random_points() {
    let a = run("verify", VERIFY, &["--seed", "1"]);
    let b = run("verify", VERIFY, &["--seed", "1"]);
    let c = run("verify", VERIFY, &["--seed", "2"]);
    assert_eq!(a.file("verify_points.csv"), b.file("verify_points.csv"));
    assert_ne!(a.file("verify_points.csv"), c.file("verify_points.csv"));
}

#[test]
fn config_errors_are_located() {
    let r = run("surface", &format!("{SURFACE}colour = 3\n"), &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 8"), "{}", r.stderr);
    assert!(r.stderr.contains("colour"), "{}", r.stderr);

    let r = run("surface", &SURFACE.replace("[33, 33]", "[1, 33]"), &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("surface.grid"), "{}", r.stderr);

    let r = run("verify", SURFACE, &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("[verify]"), "{}", r.stderr);
}

#[test]
fn threshold_failure_exits_one() {
    let cfg = format!("{SURFACE}max_mean_curvature = 1e-30\n");
    let r = run("surface", &cfg, &[]);
    assert_eq!(r.code, 1);
    let (_, ok) = r.check("surface_checks.csv", "max_abs_mean_curvature");
    assert!(!ok);
}
