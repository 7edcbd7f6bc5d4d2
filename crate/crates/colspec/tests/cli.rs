//! End-to-end tests of the binary: exit codes, config plumbing, and
//! byte-level determinism of the CSV output.

use std::process::Command;

fn colspec() -> Command {
    Command::new(env!("CARGO_BIN_EXE_colspec"))
}

fn read(path: &std::path::Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn spectrum_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let status = colspec()
            .args(["spectrum", "--rel-tol", "1e-6", "--chi-grid", "0.02:20:25:log"])
            .arg("--output")
            .arg(path)
            .env("RAYON_NUM_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let (a, b) = (read(&a), read(&b));
    assert_eq!(a, b, "output depends on thread count");
    assert!(!a.contains('\r'), "CRLF in output");
    assert_eq!(a.lines().count(), 1 + 3 * 25);
    assert_eq!(a.lines().next().unwrap(), "chi,tau,chi2_fg,terms_used,est_rel_err");
}

#[test]
fn doubling_ndot0_doubles_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let run = |ndot0: &str, name: &str| {
        let path = dir.path().join(name);
        let status = colspec()
            .args(["spectrum", "--rel-tol", "1e-6", "--ndot0", ndot0])
            .args(["--tau-grid", "1.0", "--chi-grid", "0.5,1,2"])
            .arg("--output")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        read(&path)
    };
    let one = run("1.0", "one.csv");
    let two = run("2.0", "two.csv");
    for (r1, r2) in one.lines().skip(1).zip(two.lines().skip(1)) {
        let v1: f64 = r1.split(',').nth(2).unwrap().parse().unwrap();
        let v2: f64 = r2.split(',').nth(2).unwrap().parse().unwrap();
        assert!((v2 / v1 - 2.0).abs() < 1e-14, "{v1} -> {v2}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            "# density run\nalpha = 0.1\nbeta = 0.3\ntau_grid = 0.5,1.0\nrel_tol = 1e-6\noutput = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let status = colspec()
        .args(["density", "--config"])
        .arg(&cfg)
        .args(["--tau-grid", "0.25,0.75,1.25"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = read(&out);
    assert_eq!(text.lines().count(), 4, "flag override ignored:\n{text}");
    for line in text.lines().skip(1) {
        let spread: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(spread < 1e-5, "{line}");
    }
}

#[test]
fn usage_and_config_errors_exit_1() {
    let status = colspec().arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(1));
    let status = colspec()
        .args(["validate", "--xi", "0"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let status = colspec()
        .args(["spectrum", "--chi-grid", "3,1", "--output", "/dev/null"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn nonconvergence_exits_2_and_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    // the default rel_tol 1e-10 is unattainable at χ = χ0 within 200 terms
    let status = colspec()
        .args(["spectrum", "--tau-grid", "1.0", "--chi-grid", "0.1,1.0"])
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!out.exists(), "partial output left behind");
}

#[test]
fn malformed_source_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.csv");
    let out = dir.path().join("out.csv");
    // missing one grid point of the 2x2 rectangle
    std::fs::write(&src, "tau0,chi0,q\n0.5,0.1,1.0\n0.5,0.2,1.0\n1.0,0.1,1.0\n").unwrap();
    let status = colspec()
        .args(["convolve", "--rel-tol", "1e-6", "--tau-grid", "1.0", "--chi-grid", "1.0"])
        .arg("--source")
        .arg(&src)
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn convolve_single_cell_runs() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.csv");
    let out = dir.path().join("out.csv");
    std::fs::write(&src, "tau0,chi0,q\n0.5,0.1,1.0\n").unwrap();
    let status = colspec()
        .args(["convolve", "--rel-tol", "1e-6", "--tau-grid", "0.5,1.0", "--chi-grid", "0.5,2.0"])
        .arg("--source")
        .arg(&src)
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = read(&out);
    assert_eq!(text.lines().next().unwrap(), "tau,chi,f");
    assert_eq!(text.lines().count(), 5);
    for line in text.lines().skip(1) {
        let f: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(f.is_finite() && f > 0.0, "{line}");
    }
}

#[test]
fn validate_passes_on_defaults() {
    let output = colspec().arg("validate").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("validate: all checks passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn identity_csv_covers_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("id.csv");
    let status = colspec()
        .args(["identity", "--x0-grid", "0,1", "--x-grid", "0.5,2", "--a-grid", "0.125"])
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = read(&out);
    assert_eq!(text.lines().count(), 1 + 4);
    assert_eq!(
        text.lines().next().unwrap(),
        "x0,x,a,lhs,rhs,rel_diff,terms_used,accelerated"
    );
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",true"), "{line}");
    }
}
