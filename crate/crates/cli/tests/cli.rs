use std::path::Path;
use std::process::{Command, Output};

fn lowdiss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowdiss")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn bounds_at_maximum_power() {
    let o = lowdiss(&["bounds", "--p", "1", "--zeta", "1", "--eta-c", "0.6"]);
    assert!(o.status.success());
    assert!((value(&stdout(&o), "eta_upper") - 1.0 / 1.4).abs() < 1e-15);
}

#[test]
fn bounds_at_zero_power() {
    let o = lowdiss(&["bounds", "--p", "0", "--zeta", "0", "--eta-c", "0.5"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "eta_upper"), 1.0);
}

#[test]
fn domain_and_usage_errors_exit_with_2() {
    assert_eq!(
        lowdiss(&["bounds", "--p", "1.5", "--zeta", "1", "--eta-c", "0.6"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lowdiss(&["bounds", "--p", "abc", "--zeta", "1", "--eta-c", "0.6"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lowdiss(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bad_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[engine]\nmystery = 1\n").unwrap();
    let o = lowdiss(&["curves", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = lowdiss(&["curves", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not_a_dir");
    std::fs::write(&blocker, "").unwrap();
    let o = lowdiss(&["curves", "--output-dir", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

#[test]
fn outputs_follow_the_csv_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[sampling]\nn = 20\nseed = 4\n\n[scan]\npoints = 5\n\n[curves]\npoints = 11\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    for cmd in ["sample", "entropy-scan", "curves"] {
        let o = lowdiss(&[cmd, "--config", cfg, "--output-dir", out, "--threads", "2"]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(
        header(&dir.path().join("samples.csv")),
        "sample_id,mode,t_h,t_c,q_h,q_c,work,eta,power,p_norm,eta_norm,regime_flag"
    );
    assert_eq!(header(&dir.path().join("audit.csv")), "sample_id,bound_id,slack");
    assert_eq!(
        header(&dir.path().join("entropy.csv")),
        "beta,omega0,eps,gamma,t_f,s_irr_numeric,s_irr_high_t,s_irr_low_t"
    );
    assert_eq!(
        header(&dir.path().join("curves.csv")),
        "eta_c,zeta,p_norm,eta_upper,eta_lower,eq1_upper,eq14_lower"
    );
    let curves = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 5 * 11);
}

#[test]
fn sampling_is_reproducible_byte_for_byte() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (d, threads) in [(&a, "1"), (&b, "3")] {
        let o = lowdiss(&[
            "sample",
            "--n",
            "30",
            "--seed",
            "8",
            "--output-dir",
            d.path().to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert!(o.status.success());
    }
    for f in ["samples.csv", "audit.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn simulate_appends_rows_with_fresh_ids() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for t in ["80", "120"] {
        let o = lowdiss(&["simulate", "--t-h", t, "--output-dir", out]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(value(&text, "first_law_residual").abs() < 1e-12);
    }
    let csv = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    let ids: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, ["0", "1"]);
}

#[test]
fn mni_table_has_one_row_per_grid_point() {
    let o = lowdiss(&["mni-compare", "--points", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 16);
    for line in text.lines().skip(1) {
        let ratio: f64 = line.split('\t').nth(4).unwrap().parse().unwrap();
        assert!(ratio <= 1.0 + 1e-12);
    }
}
