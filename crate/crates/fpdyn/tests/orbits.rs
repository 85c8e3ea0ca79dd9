use fpdyn::game::sigma;
use fpdyn::orbit::*;
use fpdyn::Error;

/// Digits printed with a trailing "..". Most are cut rather than rounded,
/// a few are rounded, so either reading is accepted.
fn truncate(x: f64, digits: i32) -> f64 {
    let k = 10f64.powi(digits);
    (x * k).trunc() / k
}

fn assert_digits(x: f64, printed: f64) {
    let rounded = (x * 1e3).round() / 1e3;
    let ok = (truncate(x, 3) - printed).abs() < 1e-12 || (rounded - printed).abs() < 1e-12;
    assert!(ok, "{x} does not read as {printed}");
}

#[test]
fn clockwise_section_at_zero_digits() {
    let o = clockwise_orbit(0.0).unwrap();
    for (x, p) in o.section_n.iter().zip([0.594, 0.129, 0.277]) {
        assert_digits(*x, p);
    }
    for (x, p) in o.section_m.iter().zip([0.405, 0.405, 0.188]) {
        assert_digits(*x, p);
    }
    assert!((o.durations.0 - 0.31767).abs() < 1e-5);
}

#[test]
fn anticlockwise_section_at_one_digits() {
    let o = anticlockwise_orbit(1.0).unwrap();
    assert_digits(o.root, 0.155);
    for (x, p) in o.section_n.iter().zip([0.844, 0.449, 0.706]) {
        assert_digits(*x, p);
    }
    for (x, p) in o.section_m.iter().zip([-0.311, 0.155, 0.155]) {
        assert_digits(*x, p);
    }
    assert!((o.durations.0 - 0.12060).abs() < 1e-4);
    assert!((o.durations.1 - 0.39493).abs() < 1e-5);
}

#[test]
fn spectrum_at_one_digits() {
    let r = stability_matrix(1.0).unwrap();
    for (z, p) in r.eigenvalues.iter().zip([0.532, -0.815, -0.184]) {
        assert!(z.im.abs() < 1e-12);
        assert_digits(z.re, p);
    }
    let o = anticlockwise_orbit(1.0).unwrap();
    assert!((r.eigenvalues[0].re - o.section_n[1] / o.section_n[0]).abs() < 1e-9);
    assert_eq!(r.classification, StabilityClass::Attracting);
}

#[test]
fn stability_classes() {
    assert_eq!(stability_matrix(0.95).unwrap().classification, StabilityClass::Attracting);
    let r = stability_matrix(0.8).unwrap();
    assert_eq!(r.classification, StabilityClass::SaddleType);
    assert!(r.eigenvalues.iter().any(|z| z.im.abs() < 1e-12 && z.re < -1.0));
    for b in [0.0, 0.2, 0.4, 0.6, -0.5, -0.9] {
        assert!(stability_matrix(b).unwrap().eigenvalues.iter().all(|z| z.norm() < 1.0), "beta {b}");
    }
}

#[test]
fn printed_matrix_matches_finite_differences() {
    // the perturbation machinery used for the clockwise orbit reproduces
    // the closed-form anticlockwise matrix
    for b in [0.7, 0.85, 1.0] {
        let spec = anticlockwise_orbit(b).unwrap();
        let numeric = numeric_stability_matrix(&spec, 1e-6).unwrap();
        let exact = anticlockwise_matrix(b, spec.section_n[0], spec.section_n[1]);
        for (r1, r2) in numeric.iter().zip(&exact) {
            for (x, y) in r1.iter().zip(r2) {
                assert!((x - y).abs() < 1e-7, "beta {b}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn spectrum_contains_n2_over_n1() {
    for k in 1..=20 {
        let b = sigma() + (1.0 - sigma()) * k as f64 / 20.0;
        let spec = anticlockwise_orbit(b).unwrap();
        let r = orbit_stability(&spec).unwrap();
        assert!((r.eigenvalues[0].re - spec.section_n[1] / spec.section_n[0]).abs() < 1e-9);
    }
}

#[test]
fn tau_search() {
    let tau = find_tau(tau_bracket(), 1e-6).unwrap();
    assert!((tau - 0.915).abs() <= 1e-3 && tau > 0.915);
    let coarse = find_tau(tau_bracket(), 1e-3).unwrap();
    assert_eq!(truncate(coarse, 3), truncate(tau, 3));
    assert!(matches!(find_tau((0.92, 0.99), 1e-6), Err(Error::Search(_))));
}

/// At τ the second iterate of the one-third map is the identity to second
/// order along the eigenline of −1.
#[test]
fn period_doubling_is_degenerate_at_tau() {
    let tau = find_tau(tau_bracket(), 1e-13).unwrap();
    let spec = anticlockwise_orbit(tau).unwrap();
    let k = anticlockwise_matrix(tau, spec.section_n[0], spec.section_n[1]);
    let row = |i: usize| -> Vec<f64> { (0..3).map(|j| k[i][j] + if i == j { 1.0 } else { 0.0 }).collect() };
    let (r0, r1) = (row(0), row(1));
    let w = [r0[1] * r1[2] - r0[2] * r1[1], r0[2] * r1[0] - r0[0] * r1[2], r0[0] * r1[1] - r0[1] * r1[0]];
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let w = w.map(|x| x / norm);
    let c = 10.0;
    for h in [4e-3, 2e-3, 1e-3, -1e-3, -2e-3] {
        let x = w.map(|t| t * h);
        let y = third_map(&spec, x).unwrap();
        let z = third_map(&spec, y).unwrap();
        let d = (0..3).map(|i| (z[i] - x[i]).abs()).fold(0.0, f64::max);
        assert!(d <= c * h.abs().powi(3), "h = {h}: |P2(x) - x| = {d:e}");
        // one iterate flips the sign, so the line is not fixed pointwise
        assert!((0..3).map(|i| (y[i] + x[i]).abs()).fold(0.0, f64::max) < 10.0 * h * h);
    }
}

#[test]
fn collapse_at_sigma() {
    let s = sigma();
    assert!(clockwise_orbit(s - 1e-3).unwrap().diameter < 1e-3);
    assert!(anticlockwise_orbit(s + 1e-3).unwrap().diameter < 1e-3);
    assert!(matches!(clockwise_orbit(s), Err(Error::Existence(_))));
    assert!(matches!(anticlockwise_orbit(s), Err(Error::Existence(_))));
    // both diameters shrink roughly linearly in |β − σ|
    let r = clockwise_orbit(s - 1e-2).unwrap().diameter / clockwise_orbit(s - 1e-3).unwrap().diameter;
    assert!((r - 10.0).abs() < 1.0);
}

#[test]
fn gap_map_values() {
    let s = sigma();
    assert!((j_map_f_prime0(s) - 1.0).abs() < 1e-14);
    assert!((j_fixed_point(1.0) - 0.25).abs() < 1e-15);
    assert!((j_map_f_prime0(0.8) - 4.68 / 3.36).abs() < 1e-12);
    assert_eq!(j_fixed_point(0.5), 0.0);
    let x = j_fixed_point(0.8);
    assert!((j_map_f(0.8, x) - x).abs() < 1e-15);
}

#[test]
fn j_orbit_ratios() {
    let j = j_orbit(1.0).unwrap();
    assert!((j.ratio_q - 1.0 / 3.0).abs() < 1e-9 && (j.ratio_r - 0.25).abs() < 1e-9);
    for b in [0.65, 0.8, 0.95] {
        let j = j_orbit(b).unwrap();
        let (q, r) = j_ratio_closed_forms(b);
        // independent evaluation of the closed forms
        let (q2, r2) = ((b * b + b - 1.0) / (2.0 * b + 1.0), (b * b + b - 1.0) / (1.0 + b).powi(2));
        assert!((q - q2).abs() < 1e-15 && (r - r2).abs() < 1e-15);
        assert!((j.ratio_q - q).abs() < 1e-9 && (j.ratio_r - r).abs() < 1e-9);
    }
    // small near σ, growing about linearly
    let d1 = j_orbit(sigma() + 1e-3).unwrap().ratio_q;
    let d2 = j_orbit(sigma() + 2e-3).unwrap().ratio_q;
    assert!(d1 < 2e-3 && (d2 / d1 - 2.0).abs() < 0.05);
    let segs = j_orbit_simulated(0.8, j_fixed_point(0.8), 3).unwrap();
    assert!(segs[5].end.dist(&j_section(0.8, j_fixed_point(0.8))) < 1e-9);
    assert!(matches!(j_orbit(0.6), Err(Error::Existence(_))));
}

#[test]
fn closure_under_the_simulator() {
    use fpdyn::flow::{simulate_v, SimConfig};
    use fpdyn::game::make_shapley;
    for (kind, b) in [(OrbitKind::Clockwise, 0.5), (OrbitKind::Clockwise, -0.7), (OrbitKind::Anticlockwise, 0.9)] {
        let spec = orbit(kind, b).unwrap();
        let g = make_shapley(b).unwrap();
        let v0 = spec.section_state();
        let cfg = SimConfig { equilibrium_radius: 0.0, ..SimConfig::default() }.with_max_events(12);
        let t = simulate_v(&g, &v0, &cfg).unwrap();
        assert!(t.segments[5].end.dist(&v0) < 1e-8);
        // durations repeat as (t1, t2)
        for (k, s) in t.segments.iter().enumerate() {
            let expect = if k % 2 == 0 { spec.durations.0 } else { spec.durations.1 };
            assert!((s.duration_s - expect).abs() < 1e-9);
        }
    }
}
