use std::process::{Command, Output};

fn pswf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pswf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows (header and `#` footer dropped), split on commas.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn footer(o: &Output) -> String {
    stdout(o).lines().find(|l| l.starts_with('#')).expect("footer line").to_owned()
}

#[test]
fn eigen_legendre_limit() {
    let o = pswf(&["eigen", "--m", "0", "--n", "0", "--gamma", "0", "--method", "oracle"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().next().unwrap(), "method,lambda,sigma,alpha,diagnostic");
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "oracle");
    assert_eq!(r[0][1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn eigen_both_methods() {
    let o = pswf(&["eigen", "--m", "0", "--n", "2", "--gamma", "40", "--method", "both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&o);
    assert_eq!(r.len(), 2);
    let l: Vec<f64> = r.iter().map(|row| row[1].parse().unwrap()).collect();
    assert!((l[0] - l[1]).abs() < 5.0, "{l:?}");
    for row in &r {
        let diag: f64 = row[4].parse().unwrap();
        assert!(diag.abs() < 10.0);
    }
}

#[test]
fn eigen_rejects_m_above_n() {
    let o = pswf(&["eigen", "--m", "3", "--n", "2", "--gamma", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("m ≤ n violated"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn eval_odd_mode_vanishes_at_origin() {
    let o = pswf(&["eval", "--kind", "angular", "--m", "0", "--n", "1", "--gamma", "30", "--x", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&o);
    assert_eq!(r[0][1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(r[0][3], "0");
}

#[test]
fn eval_reflects_exactly() {
    let o = pswf(&["eval", "--kind", "angular", "--m", "1", "--n", "4", "--gamma", "30", "--x", "0.4", "-0.4", "0.98", "-0.98"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&o);
    // n − m odd: Ps(−x) = −Ps(x), bit for bit
    for pair in r.chunks(2) {
        let (a, b): (f64, f64) = (pair[0][1].parse().unwrap(), pair[1][1].parse().unwrap());
        assert_eq!(a, -b);
        assert_eq!(pair[0][4], pair[1][4]);
    }
}

#[test]
fn radial_domain_is_usage_error() {
    let o = pswf(&["eval", "--kind", "radial", "--m", "0", "--n", "1", "--gamma", "30", "--x", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("domain"), "{}", stderr(&o));
}

#[test]
fn malformed_grids() {
    for g in ["0:1", "0:1:0", "a:1:3", "0:1:2:3", "0:nan:3"] {
        let o = pswf(&["eval", "--kind", "angular", "--m", "0", "--n", "0", "--gamma", "20", "--grid", g]);
        assert_eq!(o.status.code(), Some(2), "grid {g}");
    }
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(pswf(&["eigen", "--m", "0"]).status.code(), Some(2));
    assert_eq!(pswf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pswf(&["--trunc", "zero", "eigen", "--m", "0", "--n", "0", "--gamma", "1"]).status.code(), Some(2));
    assert_eq!(pswf(&["--sigma0", "1.5", "eval", "--kind", "angular", "--m", "0", "--n", "0", "--gamma", "20", "--x", "0.1"]).status.code(), Some(2));
    assert!(pswf(&["--help"]).status.success());
}

#[test]
fn inadmissible_mode() {
    let o = pswf(&["eval", "--kind", "angular", "--m", "0", "--n", "40", "--gamma", "30", "--x", "0.1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("exceeds"), "{}", stderr(&o));
}

#[test]
fn compare_pipeline() {
    let o = pswf(&["compare", "--kind", "angular", "--m", "0", "--n", "2", "--gamma", "30", "--grid", "0:0.7:50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&o);
    assert_eq!(r.len(), 50);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "x,value,log_magnitude,sign,regime,err_estimate,oracle,abs_err,rel_err"
    );
    let worst = r.iter().map(|row| row[8].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst.is_finite() && worst < 0.1, "{worst}");
    let f = footer(&o);
    assert!(f.starts_with("# max_rel_err="), "{f}");
    let reported: f64 = f.split_whitespace().nth(1).unwrap().trim_start_matches("max_rel_err=").parse().unwrap();
    assert_eq!(reported, worst);
}

#[test]
fn compare_radial_jsonl() {
    let o = pswf(&[
        "--format", "jsonl", "compare", "--kind", "radial", "--m", "1", "--n", "2", "--gamma", "40", "--grid", "1.5:3:4", "--lg",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    for rec in &lines[..4] {
        assert_eq!(rec["regime"], "LG_RADIAL");
        let (err, est) = (rec["abs_err"].as_f64().unwrap(), rec["err_estimate"].as_f64().unwrap());
        assert!(err <= est);
    }
    assert!(lines[4]["summary"]["max_err_over_estimate"].as_f64().unwrap() <= 1.0);
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--kind", "angular", "--m", "2", "--n", "5", "--gamma", "50", "--grid", "-0.99:0.99:301"];
    let a = pswf(&args);
    let b = pswf(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    // rows come back in grid order
    let xs: Vec<f64> = rows(&a).iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn floats_round_trip() {
    let o = pswf(&["--format", "jsonl", "eval", "--kind", "angular", "--m", "0", "--n", "3", "--gamma", "40", "--x", "0.37"]);
    let csv = pswf(&["eval", "--kind", "angular", "--m", "0", "--n", "3", "--gamma", "40", "--x", "0.37"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    let from_csv: f64 = rows(&csv)[0][1].parse().unwrap();
    assert_eq!(rec["value"].as_f64().unwrap(), from_csv);
    let (v, l, s): (f64, f64, f64) = (from_csv, rows(&csv)[0][2].parse().unwrap(), rows(&csv)[0][3].parse().unwrap());
    assert!((v - s * l.exp()).abs() <= 1e-14 * v.abs());
}

#[test]
fn coeffs_at_zero_gamma() {
    let o = pswf(&["coeffs", "--m", "0", "--n", "2", "--gamma", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let nonzero: Vec<Vec<String>> =
        rows(&o).into_iter().filter(|r| r[2].parse::<f64>().unwrap() != 0.0).collect();
    assert_eq!(nonzero, vec![vec!["0".to_owned(), "2".to_owned(), "1.0".to_owned()]]);
    let f = footer(&o);
    assert!(f.contains("A=1.0") && f.contains("K=1.0"), "{f}");
}

#[test]
fn coeffs_stable_under_truncation_doubling() {
    let base = ["coeffs", "--m", "2", "--n", "4", "--gamma", "30"];
    let a = pswf(&[&["--trunc", "60"], &base[..]].concat());
    let b = pswf(&[&["--trunc", "120"], &base[..]].concat());
    assert!(a.status.success() && b.status.success());
    let (ra, rb) = (rows(&a), rows(&b));
    let peak = ra.iter().map(|r| r[2].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    for (x, y) in ra.iter().zip(&rb) {
        assert_eq!(x[0], y[0]);
        let (u, v): (f64, f64) = (x[2].parse().unwrap(), y[2].parse().unwrap());
        assert!((u - v).abs() <= 1e-10 * peak, "k = {}: {u} vs {v}", x[0]);
    }
}
