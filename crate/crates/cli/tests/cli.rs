use std::path::Path;
use std::process::{Command, Output};

fn sgsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgsim")).args(args).output().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn header_line(path: &Path, key: &str) -> Option<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .find_map(|l| l.strip_prefix(&format!("# {key} = ")).map(str::to_string))
}

#[test]
fn entropy_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = sgsim(&["entropy", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let path = dir.path().join("entropy.csv");
    let r = rows(&path);
    assert_eq!(r.len(), 400);
    assert_eq!(r[0][2], 0.0);
    for row in &r[390..] {
        assert!((row[2] - std::f64::consts::LN_2).abs() < 1e-3);
    }
    assert!(header_line(&path, "tool").unwrap().starts_with("sgsim "));
    assert_eq!(header_line(&path, "model").unwrap(), "nominal");

    let tau3 = 2.275_235_851_132_686e-7;
    let out = sgsim(&["entropy", "--t", &format!("0,{tau3}"), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let r = rows(&path);
    assert!((r[1][2] - 0.6239).abs() < 1e-3);
}

#[test]
fn density_peaks_and_normalization() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sgsim(&["density", "--points", "8001", "--out", dir.path().to_str().unwrap()]).status.success());
    let r = rows(&dir.path().join("density.csv"));
    let dx = r[1][0] - r[0][0];
    let total: f64 = r.iter().map(|row| row[3]).sum::<f64>() * dx;
    assert!((total - 1.0).abs() < 1e-6, "{total}");
    let peak = |col: usize| r.iter().max_by(|a, b| a[col].total_cmp(&b[col])).unwrap()[0];
    assert!((peak(1) + 1.31e-6).abs() < 0.01e-6, "{}", peak(1));
    assert!((peak(2) - 1.31e-6).abs() < 0.01e-6, "{}", peak(2));
}

#[test]
fn zero_force_gives_identical_branches() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("free.cfg");
    std::fs::write(&cfg, "mass_kg = 1.79e-25\nforce_N = 0\nsigma_m = 1e-6\n").unwrap();
    let out = sgsim(&["density", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for row in rows(&dir.path().join("density.csv")) {
        assert_eq!(row[1], row[2]);
    }
}

#[test]
fn wigner_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = sgsim(&["wigner", "--t", "1e-6", "--grid", "41x21", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let path = dir.path().join("wigner_1e-6.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\nq,p,W_pp,W_mm,Re_W_pm,Im_W_pm,W_n\n"));
    let r = rows(&path);
    assert_eq!(r.len(), 41 * 21);
    for row in &r {
        // W_x = (W++ + W−−)/2 + Re W+−
        let w = 0.5 * (row[2] + row[3]) + row[4];
        assert!((row[6] - w).abs() <= 1e-12 * row[2].abs().max(row[3].abs()).max(row[4].abs()).max(1.0));
    }
}

#[test]
fn info_bounded_by_entropy() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sgsim(&["info", "--points", "30", "--out", dir.path().to_str().unwrap()]).status.success());
    let r = rows(&dir.path().join("info.csv"));
    assert_eq!(r[0][1], 0.0);
    for row in &r {
        assert!(row[1] <= row[2] + 1e-9);
    }
    let screen = rows(&dir.path().join("screen.csv"));
    let total: f64 = screen.iter().map(|row| row[1] + row[2]).sum();
    assert!((total - 1.0).abs() < 1e-8);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(sgsim(&["entropy", "--nope"]).status.code(), Some(1));
    assert_eq!(sgsim(&["wigner", "--grid", "12by4", "--out", d]).status.code(), Some(1));
    assert_eq!(sgsim(&["--help"]).status.code(), Some(0));
    assert_eq!(sgsim(&["--version"]).status.code(), Some(0));
    assert_eq!(sgsim(&["entropy", "--config", "/definitely/missing.cfg"]).status.code(), Some(2));

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    assert_eq!(sgsim(&["entropy", "--out", blocker.join("sub").to_str().unwrap()]).status.code(), Some(2));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "mass_kg = heavy\n").unwrap();
    assert_eq!(sgsim(&["entropy", "--config", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_passes_and_coarse_dt_fails() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let ok = sgsim(&["verify", "--out", d]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    for row in rows(&dir.path().join("verify.csv")) {
        assert!(row[4] <= 1e-12);
    }
    let bad = sgsim(&["verify", "--coarse-dt", "--out", d]);
    assert_eq!(bad.status.code(), Some(3));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains("not converged") && err.contains("l2_err"), "{err}");
}

#[test]
fn rerun_reproduces_body() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let cfg = dir.path().join("mix.cfg");
    std::fs::write(&cfg, "mass_kg = 1.79e-25\nforce_N = 9.27e-22\nsigma_m = 1e-6\nc_plus_re = 0.6\nc_minus_im = 0.8\n")
        .unwrap();
    let out = sgsim(&["entropy", "--config", cfg.to_str().unwrap(), "--points", "25", "--out", a.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(header_line(&a.join("entropy.csv"), "model").unwrap(), "state");
    let re = sgsim(&["rerun", "--from", a.join("entropy.csv").to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(re.status.success());
    assert_eq!(std::fs::read(a.join("entropy.csv")).unwrap(), std::fs::read(b.join("entropy.csv")).unwrap());
}
