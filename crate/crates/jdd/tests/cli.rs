mod common;

use common::{data_lines, run, stdout, synthetic_mnist, write_csv};
use jdd_core::{critical_value, jdd_naive_oracle, KernelSpec, PairedSample, TestConfig};

fn cluster(m: usize, center: f64) -> PairedSample {
    let xs = (0..m)
        .map(|i| vec![center + 0.01 * i as f64, 0.3])
        .collect();
    let ys = (0..m).map(|i| vec![0.2 - 0.01 * i as f64]).collect();
    PairedSample::from_rows(xs, ys).unwrap()
}

#[test]
fn identical_samples_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_csv(dir.path(), "a.csv", &cluster(15, 0.0));
    let a = a.to_str().unwrap();
    let o = run(&["test", "--p", a, "--q", a, "--alpha", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("jdd             0\n"), "{text}");
    assert!(text.contains("accept"));
}

#[test]
fn planted_shift_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let m = 20;
    let k = KernelSpec::rbf(0.25).unwrap();
    let threshold = critical_value(&TestConfig::new(0.05, 1.0, m).unwrap());
    // Move the second cluster away until the oracle crosses the threshold.
    let p = cluster(m, 0.0);
    let mut shift = 0.0;
    let q = loop {
        shift += 0.05;
        let q = cluster(m, shift);
        if jdd_naive_oracle(&k, &k, &p, &q).unwrap().value > threshold {
            break q;
        }
        assert!(shift < 10.0);
    };
    let pa = write_csv(dir.path(), "p.csv", &p);
    let qa = write_csv(dir.path(), "q.csv", &q);
    let o = run(&[
        "test",
        "--p",
        pa.to_str().unwrap(),
        "--q",
        qa.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["report"]["reject"], true);
    assert_eq!(doc["report"]["config"]["m"], 20);
    assert_eq!(doc["report"]["kernel_x"]["kind"], "rbf");
    assert!(doc["report"]["jdd"]["value"].as_f64().unwrap() > threshold);
}

#[test]
fn linear_kernel_option() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_csv(dir.path(), "a.csv", &cluster(5, 0.0));
    let b = write_csv(dir.path(), "b.csv", &cluster(5, 0.5));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let o = run(&["test", "--p", a, "--q", b, "--kernel", "linear", "--json"]);
    assert!(matches!(o.status.code(), Some(0 | 3)));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["report"]["kernel_x"]["kind"], "explicit_linear");
    // A declared bound smaller than the data is refused.
    let o = run(&[
        "test", "--p", a, "--q", b, "--kernel", "linear", "--k", "0.01",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "a,b\n1,2\n").unwrap();
    let good = write_csv(dir.path(), "good.csv", &cluster(4, 0.0));
    let other = write_csv(dir.path(), "other.csv", &cluster(5, 0.0));
    let (bad, good, other) = (
        bad.to_str().unwrap(),
        good.to_str().unwrap(),
        other.to_str().unwrap(),
    );

    let o = run(&["test", "--p", bad, "--q", good]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["test", "--p", good, "--q", other]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("m = n"), "{err}");

    assert_eq!(
        run(&["test", "--p", good, "--q", good, "--alpha", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["test", "--p", "/nonexistent.csv", "--q", good])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn threshold_single_cell() {
    let o = run(&["threshold", "--alphas", "0.05", "--ms", "1000", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = data_lines(&stdout(&o));
    assert_eq!(lines[0], "alpha,m,critical_value");
    let want = critical_value(&TestConfig::new(0.05, 1.0, 1000).unwrap());
    assert_eq!(lines[1..], [format!("0.05,1000,{want}")]);
}

#[test]
fn threshold_curve_and_grid() {
    let o = run(&["threshold", "--alphas", "0.05", "--ms", "10:1000:10"]);
    let values: Vec<f64> = data_lines(&stdout(&o))[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 100);
    assert!(values.windows(2).all(|w| w[1] < w[0]));

    let o = run(&[
        "threshold",
        "--alphas",
        "0.01:0.96:0.05",
        "--ms",
        "50:1000:50",
    ]);
    let rows: Vec<(f64, usize, f64)> = data_lines(&stdout(&o))[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 400);
    for a in 0..20 {
        for m in 1..20 {
            assert!(rows[a * 20 + m].2 < rows[a * 20 + m - 1].2);
        }
    }
    for a in 1..20 {
        for m in 0..20 {
            assert!(rows[a * 20 + m].2 > rows[(a - 1) * 20 + m].2);
            assert!(rows[a * 20 + m].0 > rows[(a - 1) * 20 + m].0);
        }
    }
}

#[test]
fn threshold_bad_range_exits_with_two() {
    assert_eq!(
        run(&["threshold", "--alphas", "0.1:0.05:0.01", "--ms", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["threshold", "--alphas", "0.05", "--ms", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["threshold", "--alphas", "1.2", "--ms", "10"])
            .status
            .code(),
        Some(2)
    );
}

fn rate(o: &std::process::Output) -> f64 {
    let lines = data_lines(&stdout(o));
    let last = lines.last().unwrap();
    assert!(last.starts_with("rate,"));
    last.rsplit(',').next().unwrap().parse().unwrap()
}

#[test]
fn calibration() {
    let o = run(&[
        "calibrate",
        "--generator",
        "identical",
        "--m",
        "10",
        "--trials",
        "1",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rate(&o), 0.0);

    let args = |alpha: &'static str| {
        vec![
            "calibrate",
            "--generator",
            "gaussian",
            "--m",
            "100",
            "--alpha",
            alpha,
            "--trials",
            "200",
            "--seed",
            "11",
        ]
    };
    let low = run(&args("0.05"));
    assert_eq!(low.status.code(), Some(0));
    assert_eq!(data_lines(&stdout(&low)).len(), 202);
    assert!(rate(&low) <= 0.95);
    let high = run(&args("0.5"));
    assert!(rate(&high) <= rate(&low));

    let o = run(&[
        "calibrate",
        "--generator",
        "mnist",
        "--m",
        "10",
        "--trials",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rademacher_tight_case_and_rbf_jensen() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_csv(dir.path(), "one.csv", &cluster(1, 0.0));
    let o = run(&[
        "rademacher",
        "--p",
        one.to_str().unwrap(),
        "--trials",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines = data_lines(&stdout(&o));
    assert_eq!(
        lines[0],
        "m,mc_mean,mc_std_error,jensen_bound,k_over_sqrt_m"
    );
    assert_eq!(lines[1], "1,1,0,1,1");

    let many = write_csv(dir.path(), "many.csv", &cluster(49, 0.0));
    let o = run(&[
        "rademacher",
        "--p",
        many.to_str().unwrap(),
        "--trials",
        "300",
        "--seed",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let f: Vec<f64> = data_lines(&stdout(&o))[1]
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(f[0], 49.0);
    assert!((f[3] - 1.0 / 7.0).abs() <= 4.0 * f64::EPSILON);
    assert!(f[1] <= f[3] + 3.0 * f[2]);
}

#[test]
fn mnist_sweep_on_synthetic_digits() {
    let dir = tempfile::tempdir().unwrap();
    let (img, lab) = synthetic_mnist(dir.path());
    let args = [
        "mnist-sweep",
        "--images",
        img.to_str().unwrap(),
        "--labels",
        lab.to_str().unwrap(),
        "--m",
        "60",
        "--rho-min",
        "-45",
        "--rho-max",
        "45",
        "--rho-step",
        "15",
        "--seed",
        "4",
    ];
    let first = run(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let again = run(&args);
    assert_eq!(first.stdout, again.stdout);

    let text = stdout(&first);
    assert!(text.contains("# input: "));
    let rows: Vec<Vec<String>> = data_lines(&text)[1..]
        .iter()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    assert_eq!(rows.len(), 7);
    let jdd_at = |rho: &str| -> f64 {
        rows.iter().find(|r| r[0] == rho).unwrap()[1]
            .parse()
            .unwrap()
    };
    let zero = rows.iter().find(|r| r[0] == "0").unwrap();
    assert_eq!(zero[3], "false");
    assert!(jdd_at("45") > jdd_at("0"));
    assert!(jdd_at("-45") > jdd_at("0"));

    let missing = run(&["mnist-sweep", "--images", "/nope", "--labels", "/nope"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn mnist_sample_round_trips_through_test() {
    let dir = tempfile::tempdir().unwrap();
    let (img, lab) = synthetic_mnist(dir.path());
    let out = dir.path().join("s.csv");
    let o = run(&[
        "mnist-sample",
        "--images",
        img.to_str().unwrap(),
        "--labels",
        lab.to_str().unwrap(),
        "--digit",
        "7",
        "--m",
        "12",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let sample = jdd::sample_csv::load_sample(&out).unwrap();
    assert_eq!((sample.len(), sample.dim_x(), sample.dim_y()), (12, 28, 28));
    let o = run(&[
        "test",
        "--p",
        out.to_str().unwrap(),
        "--q",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
}
