use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn deconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deconv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_sample(dir: &Path, n: usize) -> String {
    // Deterministic, roughly bell-shaped values.
    let body: String = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            let v = ((u * 2.0 - 1.0) * 2.5).tanh() * 2.0 + (i as f64 * 1.7).sin() * 0.3;
            format!("{v}\n")
        })
        .collect();
    let path = dir.join("z.txt");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn selected_m(text: &str) -> usize {
    text.lines()
        .find_map(|l| l.strip_prefix("selected m = "))
        .and_then(|m| m.trim().parse().ok())
        .unwrap_or_else(|| panic!("no selected m in {text:?}"))
}

#[test]
fn help_lists_every_estimate_flag() {
    let out = deconv(&["estimate", "--help"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for flag in [
        "--data", "--noise", "--sigma", "--kn", "--m-cap", "--grid", "--out",
    ] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
}

#[test]
fn unknown_flags_and_bad_values_exit_2() {
    assert_eq!(deconv(&["simulate", "--bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), 50);
    let out = deconv(&["estimate", "--data", &data, "--noise", "cauchy"]);
    assert_eq!(out.status.code(), Some(2));
    let out = deconv(&[
        "estimate", "--data", &data, "--noise", "laplace", "--sigma", "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("-1"));
    let out = deconv(&[
        "estimate", "--data", &data, "--noise", "none", "--grid", "3:1:10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_errors_exit_3_and_name_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.txt");
    let out = deconv(&[
        "estimate",
        "--data",
        missing.to_str().unwrap(),
        "--noise",
        "none",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("absent.txt"));

    let header = dir.path().join("header.txt");
    fs::write(&header, "z\n0.1\n0.2\n").unwrap();
    let out = deconv(&[
        "estimate",
        "--data",
        header.to_str().unwrap(),
        "--noise",
        "none",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn numerical_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), 50);
    let out = deconv(&[
        "estimate", "--data", &data, "--noise", "gaussian", "--sigma", "30",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn estimate_without_noise_writes_curve_and_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), 200);
    let csv = dir.path().join("est.csv");
    let out = deconv(&[
        "estimate",
        "--data",
        &data,
        "--noise",
        "none",
        "--sigma",
        "0",
        "--grid",
        "-4:4:101",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(selected_m(&String::from_utf8_lossy(&out.stdout)) >= 1);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,ghat"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, g) = l.split_once(',').unwrap();
            (x.parse().unwrap(), g.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0].0, -4.0);
    assert_eq!(rows[100].0, 4.0);
    // The estimate integrates to roughly one over the data range.
    let mass: f64 = rows
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum();
    assert!((mass - 1.0).abs() < 0.1, "mass {mass}");
}

#[test]
fn estimate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), 120);
    let args = [
        "estimate", "--data", &data, "--noise", "laplace", "--sigma", "0.3",
    ];
    let a = deconv(&args);
    let b = deconv(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn simulate_single_replication_row() {
    let out = deconv(&[
        "simulate",
        "--density",
        "a",
        "--noise",
        "laplace",
        "--n",
        "100",
        "--s2n",
        "2",
        "--reps",
        "1",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "density,noise,assumed_noise,n,s2n,reps,seed,mean_ise,median_ise,sd_ise,modal_m"
    );
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(
        &fields[..7],
        &["a", "laplace", "laplace", "100", "2", "1", "3"]
    );
    // One replication: mean and median coincide, spread is zero.
    assert_eq!(fields[7], fields[8]);
    assert_eq!(fields[9], "0");
}

#[test]
fn simulate_files_match_across_runs_and_worker_caps() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_deconv"))
            .args([
                "simulate",
                "--density",
                "f",
                "--noise",
                "gaussian",
                "--n",
                "200",
                "--s2n",
                "10",
                "--reps",
                "24",
                "--seed",
                "9",
                "--out",
            ])
            .arg(&path)
            .env("DECONV_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        fs::read(path).unwrap()
    };
    let first = run("a.csv", "1");
    assert_eq!(first, run("b.csv", "1"));
    assert_eq!(first, run("c.csv", "4"));
}

#[test]
fn penalty_curve_without_noise_matches_formula() {
    let n = 250.0;
    let out = deconv(&[
        "penalty-curve",
        "--noise",
        "none",
        "--sigma",
        "0",
        "--n",
        "250",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,delta1,pen"));
    let mut count = 0;
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let l = f[0];
        let expected = 6.0 * std::f64::consts::PI * l * (1.0 + l.ln().powf(2.5) / l) / n;
        assert!(
            (f[2] - expected).abs() <= 1e-12 * expected,
            "m {l}: {} vs {expected}",
            f[2]
        );
        assert_eq!(f[1], l);
        count += 1;
    }
    assert!(count >= 8);
}

#[test]
fn score_curve_minimum_is_the_reported_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), 300);
    let out = deconv(&[
        "score-curve",
        "--data",
        &data,
        "--noise",
        "gaussian",
        "--sigma",
        "0.2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let m_hat = selected_m(&stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,contrast,pen,crit"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let best = rows.iter().min_by(|a, b| a[3].total_cmp(&b[3])).unwrap();
    assert_eq!(best[0] as usize, m_hat);
    for r in &rows {
        assert!((r[1] + r[2] - r[3]).abs() < 1e-12);
    }
}

#[test]
fn misspec_with_true_noise_is_exactly_one() {
    let out = deconv(&[
        "misspec",
        "--density",
        "b",
        "--noise",
        "laplace",
        "--assumed",
        "laplace",
        "--n",
        "150",
        "--s2n",
        "4",
        "--reps",
        "10",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.ends_with(",1"), "{row}");
}
