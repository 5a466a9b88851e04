//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use pswf::approx::{EvalOptions, Evaluator, RegimePartition};
use pswf::eigensystem::{action_j, eigenvalue_oracle, lambda_asymptotic, norm_h, ModeIndex, Truncation};
use pswf::oracle::Oracle;
use pswf::specfun::elliptic::elliptic_e;
use pswf::specfun::pcf::ParabolicCylinder;
use pswf::specfun::quad::tanh_sinh;
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = (bool, String);

const CORE_MODES: [(u32, u32); 4] = [(0, 0), (0, 2), (1, 3), (2, 5)];

fn mode(m: u32, n: u32) -> ModeIndex {
    ModeIndex::new(m, n).unwrap()
}

fn eigen_asymptote() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for &(m, n) in &CORE_MODES {
        let md = mode(m, n);
        let diag: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&g| eigenvalue_oracle(md, g, Truncation::Auto).unwrap() + g * g - (2.0 * (n - m) as f64 + 1.0) * g)
            .collect();
        let worst = diag.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let pass = worst <= 3.0 * diag[0].abs();
        ok &= pass;
        notes.push(format!("({m},{n}) {:.3}..{:.3}", diag[0], diag[3]));
    }
    (ok, notes.join(", "))
}

fn action_relation() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for &(m, n) in &CORE_MODES {
        let md = mode(m, n);
        let gap: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&g| (lambda_asymptotic(md, g).unwrap() - eigenvalue_oracle(md, g, Truncation::Auto).unwrap()).abs())
            .collect();
        let pass = gap.windows(2).all(|w| w[1] <= w[0]);
        ok &= pass;
        notes.push(format!("({m},{n}) {:.4}->{:.4}", gap[0], gap[3]));
    }
    (ok, notes.join(", "))
}

fn normalization() -> Outcome {
    let modes = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (1, 3), (2, 2), (2, 5), (3, 3), (3, 6)];
    let mut worst = 0.0f64;
    for &(m, n) in &modes {
        let md = mode(m, n);
        let o = Oracle::new(md, 20.0, 1.0).unwrap();
        let k = o.boundary_k().unwrap();
        // abscissas can round onto ±1, where only the limit is available
        let edge = if m == 0 { k * k } else { 0.0 };
        let sq = |x: f64| if x.abs() >= 1.0 { edge } else { o.angular(x).map(|s| s.value * s.value).unwrap_or(f64::NAN) };
        let q = tanh_sinh(|x, _, _| sq(x), -1.0, 1.0, 1e-13)
            .unwrap()
            .value;
        worst = worst.max((q / norm_h(md) - 1.0).abs());
    }
    (worst < 1e-8, format!("max relative deviation {worst:.2e} over 10 modes at γ = 20 (tol 1e-8)"))
}

fn parity() -> Outcome {
    let part = RegimePartition::default();
    let mut exact = true;
    let mut oracle_worst = 0.0f64;
    let mut count = 0;
    for &(m, n) in &[(0, 0), (0, 1), (1, 3), (2, 5), (3, 4)] {
        let md = mode(m, n);
        let o = Oracle::new(md, 40.0, 1.0).unwrap();
        let anchored = Evaluator::with_oracle(&o, part, EvalOptions::default()).unwrap();
        let fixed = Evaluator::with_oracle(&o, part, EvalOptions { fixed_n: true, ..Default::default() }).unwrap();
        let asy = Evaluator::new(
            md,
            40.0,
            part,
            EvalOptions { source: pswf::ConstantSource::Asymptotic, ..Default::default() },
        )
        .unwrap();
        let p = md.parity();
        for i in 0..40 {
            let x = 0.999 * i as f64 / 39.0;
            for ev in [&anchored, &fixed, &asy] {
                let a = ev.evaluate_angular(x).unwrap();
                let b = ev.evaluate_angular(-x).unwrap();
                exact &= b.value.to_bits() == (p * a.value).to_bits() || (a.value == 0.0 && b.value == 0.0);
                count += 1;
            }
            let a = o.angular(x).unwrap().value;
            let b = o.angular(-x).unwrap().value;
            let scale = a.abs().max(1e-300);
            oracle_worst = oracle_worst.max((b - p * a).abs() / scale);
        }
    }
    let ok = exact && oracle_worst < 1e-12;
    (ok, format!("{count} approximation pairs bit-exact: {exact}; oracle max deviation {oracle_worst:.1e}"))
}

fn richardson(f: impl Fn(f64) -> f64) -> f64 {
    let e = 2f64.powi(-20);
    let v = [f(e), f(2.0 * e), f(4.0 * e)];
    let r1 = 2.0 * v[0] - v[1];
    let r2 = 2.0 * v[1] - v[2];
    (4.0 * r1 - r2) / 3.0
}

fn boundary_constants() -> Outcome {
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for &(m, n) in &[(0, 0), (0, 3), (1, 2), (1, 3), (2, 5), (3, 3)] {
        let md = mode(m, n);
        let o = Oracle::new(md, 20.0, 1.1).unwrap();
        let k = o.boundary_k().unwrap();
        let half = m as f64 / 2.0;
        let left = richardson(|h| o.angular(1.0 - h).unwrap().value / h.powf(half));
        let right = richardson(|h| o.radial(1.0 + h).unwrap().value / h.powf(half));
        // radial side carries (−1)^m: no Ferrers sign on (1, ∞)
        let k_right = if m % 2 == 1 { -k } else { k };
        let d = ((left - k) / k).abs().max(((right - k_right) / k).abs());
        worst = worst.max(d);
        notes.push(format!("({m},{n}) {d:.1e}"));
    }
    (worst < 1e-6, format!("max relative gap {worst:.2e} (tol 1e-6); {}", notes.join(" ")))
}

struct ZoneErrors {
    pc: f64,
    pc_plain: f64,
    bessel_i: f64,
    bessel_j: f64,
}

fn zone_errors(m: u32, n: u32, g: f64) -> ZoneErrors {
    let part = RegimePartition::default();
    let o = Oracle::new(mode(m, n), g, 3.0).unwrap();
    let ev = Evaluator::with_oracle(&o, part, EvalOptions::default()).unwrap();
    let split = part.split();
    let mut z = ZoneErrors { pc: 0.0, pc_plain: 0.0, bessel_i: 0.0, bessel_j: 0.0 };
    for i in 0..100 {
        let x = split * i as f64 / 99.0;
        let r = ev.angular_pc(x).unwrap();
        let ov = o.angular(x).unwrap().value;
        z.pc = z.pc.max(r.relative_error(ov));
        if ov != 0.0 {
            z.pc_plain = z.pc_plain.max((r.value - ov).abs() / ov.abs());
        }
        let x = split + (1.0 - split) * i as f64 / 100.0;
        let r = ev.angular_bessel_i(x).unwrap();
        z.bessel_i = z.bessel_i.max(r.relative_error(o.angular(x).unwrap().value));
        let x = 1.0 + 2.0 * (i + 1) as f64 / 100.0;
        let r = ev.radial_bessel(x).unwrap();
        z.bessel_j = z.bessel_j.max(r.relative_error(o.radial(x).unwrap().value));
    }
    z
}

fn decay_check(errs: &[[f64; 3]], factor: f64) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (e, &(m, n)) in errs.iter().zip(CORE_MODES.iter()) {
        let (f1, f2) = (e[0] / e[1], e[1] / e[2]);
        ok &= f1 >= factor && f2 >= factor;
        notes.push(format!("({m},{n}) {:.2e}/{:.2e}/{:.2e} x{f1:.2},x{f2:.2}", e[0], e[1], e[2]));
    }
    (ok, notes.join("; "))
}

fn zone_accuracy() -> (Outcome, Outcome) {
    let mut pc = Vec::new();
    let mut pc_plain = Vec::new();
    let mut bi = Vec::new();
    let mut bj = Vec::new();
    for &(m, n) in &CORE_MODES {
        let z: Vec<ZoneErrors> = [30.0, 60.0, 120.0].iter().map(|&g| zone_errors(m, n, g)).collect();
        pc.push([z[0].pc, z[1].pc, z[2].pc]);
        pc_plain.push([z[0].pc_plain, z[1].pc_plain, z[2].pc_plain]);
        bi.push([z[0].bessel_i, z[1].bessel_i, z[2].bessel_i]);
        bj.push([z[0].bessel_j, z[1].bessel_j, z[2].bessel_j]);
    }
    let (ok6a, s6) = decay_check(&pc, 1.4);
    let (ok6b, s6p) = decay_check(&pc_plain, 1.4);
    let ok6 = ok6a && ok6b;
    let (ok7a, s7a) = decay_check(&bi, 1.8);
    let (ok7b, s7b) = decay_check(&bj, 1.8);
    (
        (ok6, format!("envelope-relative, γ = 30/60/120, need x1.4: {s6} | pointwise-relative: {s6p}")),
        (ok7a && ok7b, format!("need x1.8; Bessel-I relative: {s7a} | Bessel-J envelope-relative: {s7b}")),
    )
}

fn overlap() -> Outcome {
    let part = RegimePartition::default();
    let g = 60.0;
    let mut ok = true;
    let mut notes = Vec::new();
    for &(m, n) in &CORE_MODES {
        let o = Oracle::new(mode(m, n), g, 1.0).unwrap();
        let ev = Evaluator::with_oracle(&o, part, EvalOptions::default()).unwrap();
        let mut angular: f64 = 0.0;
        for x in [part.split() - 0.02, part.split() + 0.02] {
            let a = ev.angular_pc(x).unwrap();
            let b = ev.angular_bessel_i(x).unwrap();
            angular = angular.max((a.value - b.value).abs() / (a.err_estimate + b.err_estimate));
        }
        let mut radial: f64 = 0.0;
        for i in 0..60 {
            let x = 1.0 + part.delta + (4.0 - part.delta) * i as f64 / 59.0;
            let a = ev.radial_lg(x).unwrap();
            let b = ev.radial_bessel(x).unwrap();
            radial = radial.max((a.value - b.value).abs() / (a.err_estimate + b.err_estimate));
        }
        ok &= angular <= 1.0 && radial <= 1.0;
        notes.push(format!("({m},{n}) PC/I {angular:.3} LG/J {radial:.3}"));
    }
    (ok, format!("|difference| / (summed estimates) at γ = 60, need ≤ 1: {}", notes.join(", ")))
}

fn kernels() -> Outcome {
    let mut worst_e = 0.0f64;
    for &a in &[0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
        worst_e = worst_e.max((elliptic_e(a, 1.0).unwrap() - a).abs());
    }
    worst_e = worst_e.max((elliptic_e(1.0, 0.0).unwrap() - PI / 2.0).abs());
    let worst_j = action_j(0.0).unwrap().abs().max((action_j(1.0).unwrap() - 1.0).abs());
    let w0 = (2.0 / PI).sqrt();
    let mut worst_w = 0.0f64;
    for i in 0..=12 {
        let a = -300.0 * i as f64 / 12.0;
        let pc = ParabolicCylinder::new(a).unwrap();
        for j in 0..=16 {
            let t = -20.0 + 40.0 * j as f64 / 16.0;
            worst_w = worst_w.max((pc.eval(t).unwrap().wronskian() / w0 - 1.0).abs());
        }
    }
    let ok = worst_e < 1e-12 && worst_j < 1e-12 && worst_w < 1e-10;
    (ok, format!("E identities {worst_e:.1e}, J(0)/J(1) {worst_j:.1e} (tol 1e-12); Wronskian {worst_w:.1e} (tol 1e-10)"))
}

fn identity_v() -> Outcome {
    let mut worst = 0.0f64;
    for &(m, n) in &[(0, 0), (0, 1), (1, 2), (2, 5), (3, 3)] {
        let o = Oracle::new(mode(m, n), 15.0, 10.0).unwrap();
        let (_, spread) = o.v_spread(&[4.0, 6.0, 8.0]).unwrap();
        let (_, wide) = o.v_spread(&[1.5, 2.5, 4.0, 6.0, 8.0, 10.0]).unwrap();
        worst = worst.max(spread).max(wide);
    }
    (worst < 1e-9, format!("max probe-ratio spread {worst:.1e} over 5 modes at γ = 15, probes 1.5..10 (tol 1e-9)"))
}

/// y'' by a sixth-order central difference of the exact first derivative.
fn second_derivative(d1: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let c = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
    let mut s = 0.0;
    for (j, cj) in c.iter().enumerate() {
        let k = (j + 1) as f64;
        s += cj * (d1(x + k * h) - d1(x - k * h));
    }
    s / h
}

fn ode_residual() -> Outcome {
    let g = 20.0;
    let mut worst = 0.0f64;
    for &(m, n) in &[(0, 0), (0, 3), (1, 2), (2, 5), (3, 3)] {
        let o = Oracle::new(mode(m, n), g, 3.0).unwrap();
        let lam = o.lambda();
        let mf = m as f64;
        let mut check = |x: f64, angular: bool| {
            let eval = |t: f64| if angular { o.angular_with_derivative(t) } else { o.radial_with_derivative(t) };
            let (y, dy) = eval(x).unwrap();
            let y = y.value;
            let d2 = second_derivative(|t| eval(t).unwrap().1, x, 1e-3);
            let w = 1.0 - x * x;
            let terms = [w * d2, -2.0 * x * dy, (lam - mf * mf / w + g * g * w) * y];
            let scale = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
            worst = worst.max(terms.iter().sum::<f64>().abs() / scale);
        };
        for i in 0..20 {
            check(-0.95 + 1.9 * i as f64 / 19.0, true);
            check(1.1 + 1.8 * i as f64 / 19.0, false);
        }
    }
    (worst < 1e-6, format!("max relative residual {worst:.1e} at 20 angular + 20 radial points per mode (tol 1e-6)"))
}

fn main() {
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let (ok, s) = f();
        (ok, format!("{s} [{:.1}s]", t.elapsed().as_secs_f64()))
    };
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "eigenvalue asymptote", timed(&eigen_asymptote)));
    results.push((2, "action relation", timed(&action_relation)));
    results.push((3, "normalization", timed(&normalization)));
    results.push((4, "parity", timed(&parity)));
    results.push((5, "boundary constants", timed(&boundary_constants)));
    let t = Instant::now();
    let (c6, c7) = zone_accuracy();
    let secs = t.elapsed().as_secs_f64();
    results.push((6, "PC-zone accuracy", (c6.0, format!("{} [{secs:.1}s, shared with 7]", c6.1))));
    results.push((7, "Bessel-zone accuracy", c7));
    results.push((8, "overlap matching", timed(&overlap)));
    results.push((9, "kernel exactness", timed(&kernels)));
    results.push((10, "V identity", timed(&identity_v)));
    results.push((11, "ODE residual", timed(&ode_residual)));
    let mut failed = 0;
    for (i, name, (ok, detail)) in &results {
        println!("criterion {i:>2} {name}: {} | {detail}", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
