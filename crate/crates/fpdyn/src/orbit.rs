//! Symmetric periodic orbits of the Shapley family and their stability.
//!
//! Both symmetric orbits are fixed by a one-third map: two segments
//! followed by a cyclic relabelling of the strategies. Section states are
//! `vA = n`, `vB = m`.
//!
//! * clockwise (`β < σ`): B tied on {1,2}, A playing 1; the strategies
//!   shift forward by one every third of the orbit.
//! * anticlockwise (`β > σ`): B tied on {2,3}, A playing 1; the strategies
//!   shift backward by one.
//! * J-orbit Γ (`β > σ`): lies entirely on the spiralling tie pieces.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{self, Codim2Policy, FlowEngine, Motion, Segment, SimConfig};
use crate::game::{make_shapley, p_from_v, sigma, BimatrixGame, Player, StateV};
use crate::geometry::{tie_segment_endpoint, Pair};
use crate::linalg::Matrix;
use crate::poly::{eigenvalues3, Cubic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitKind {
    Clockwise,
    Anticlockwise,
    JOrbit,
}

impl OrbitKind {
    /// `k` such that after one third of the orbit `v_new[k] = v_section[k − shift]`.
    pub fn shift(self) -> usize {
        match self {
            OrbitKind::Clockwise | OrbitKind::JOrbit => 1,
            OrbitKind::Anticlockwise => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OrbitKind::Clockwise => "clockwise",
            OrbitKind::Anticlockwise => "anticlockwise",
            OrbitKind::JOrbit => "j",
        }
    }
}

/// Cubic whose root fixes the section of a symmetric orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicSpec {
    pub kind: OrbitKind,
    pub beta: f64,
}

impl CubicSpec {
    pub fn cubic(&self) -> Cubic {
        let b = self.beta;
        let (b2, b3) = (b * b, b * b * b);
        match self.kind {
            OrbitKind::Clockwise => Cubic([
                3.0 * b2 + 3.0 * b + 3.0,
                2.0 * b3 - 2.0 * b2 - 5.0 * b - 4.0,
                -b3 + 4.0 * b + 3.0,
                -1.0 - b,
            ]),
            _ => Cubic([
                3.0 * b2 + 3.0 * b + 3.0 * b3,
                -5.0 * b3 - 7.0 * b2 - 4.0 * b - 2.0,
                1.0 + b + 5.0 * b2 + 2.0 * b3,
                -b2,
            ]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbitSpec {
    pub kind: OrbitKind,
    pub beta: f64,
    /// ν (clockwise), μ (anticlockwise) or X* (J-orbit).
    pub root: f64,
    pub section_n: [f64; 3],
    pub section_m: [f64; 3],
    /// s-durations of the two segments of one third.
    pub durations: (f64, f64),
    /// The six segments of the full orbit.
    pub path: Vec<Segment>,
    /// Largest max-norm distance of the orbit from the equilibrium,
    /// measured on the mixed strategies of both players.
    pub diameter: f64,
}

impl PeriodicOrbitSpec {
    pub fn section_state(&self) -> StateV {
        StateV::new(self.section_n.to_vec(), self.section_m.to_vec())
    }
}

/// Undo the relabelling accumulated over one third: `out[k] = v[k + shift]`.
pub fn unpermute(v: &[f64], shift: usize) -> Vec<f64> {
    (0..3).map(|k| v[(k + shift) % 3]).collect()
}

/// [`unpermute`] applied to both players.
pub fn unpermute_state(v: &StateV, shift: usize) -> StateV {
    StateV::new(unpermute(&v.va, shift), unpermute(&v.vb, shift))
}

fn orbit_config() -> SimConfig {
    SimConfig { equilibrium_radius: 0.0, ..SimConfig::default() }.with_max_events(6)
}

fn orbit_path(game: &BimatrixGame, v0: &StateV) -> Result<Vec<Segment>> {
    let t = flow::simulate_v(game, v0, &orbit_config())?;
    if t.segments.len() != 6 {
        return Err(Error::Consistency(format!(
            "orbit path stopped after {} segments ({:?})",
            t.segments.len(),
            t.last_event()
        )));
    }
    Ok(t.segments)
}

fn diameter_of(game: &BimatrixGame, path: &[Segment]) -> Result<f64> {
    let third = 1.0 / 3.0;
    let mut d: f64 = 0.0;
    for seg in path {
        let p = p_from_v(game, &seg.start)?;
        for x in p.pa.as_slice().iter().chain(p.pb.as_slice()) {
            d = d.max((x - third).abs());
        }
    }
    Ok(d)
}

fn check_closure(kind: OrbitKind, v0: &StateV, path: &[Segment]) -> Result<()> {
    let third = &path[1].end;
    let back = unpermute_state(third, kind.shift());
    let r1 = back.dist(v0);
    let r2 = path[5].end.dist(v0);
    if r1 > 1e-9 || r2 > 1e-8 {
        return Err(Error::Consistency(format!(
            "{} orbit does not close (one third {r1:e}, full {r2:e})",
            kind.name()
        )));
    }
    Ok(())
}

fn check_durations(path: &[Segment], t: (f64, f64)) -> Result<()> {
    let (d1, d2) = (path[0].duration_s, path[1].duration_s);
    if (d1 - t.0).abs() > 1e-9 || (d2 - t.1).abs() > 1e-9 {
        return Err(Error::Consistency(format!(
            "simulated durations ({d1}, {d2}) differ from closed forms {t:?}"
        )));
    }
    Ok(())
}

/// Section values of the clockwise orbit from the root ν.
pub fn clockwise_section(beta: f64, nu: f64) -> ([f64; 3], [f64; 3]) {
    let b = beta;
    let (b2, b3) = (b * b, b * b * b);
    let d = 1.0 + b + b2;
    let nn = nu * nu;
    let n1 = nu;
    let n2 = -(-2.0 * b2 - b3 + 2.0 * nu * b3 - 3.0 * nu * b - 2.0 * nu + 3.0 * nn + 3.0 * nn * b2
        + 3.0 * nn * b)
        / d;
    let n3 = (2.0 * b + 1.0 + 2.0 * nu * b3 - nu * b2 - 4.0 * nu * b - 3.0 * nu + 3.0 * nn
        + 3.0 * nn * b2
        + 3.0 * nn * b)
        / d;
    let m1 = 1.0 - nu - nu * b;
    let m3 = -b + 2.0 * nu * b - 1.0 + 2.0 * nu;
    ([n1, n2, n3], [m1, m1, m3])
}

/// Section values of the anticlockwise orbit from the root μ.
pub fn anticlockwise_section(beta: f64, mu: f64) -> ([f64; 3], [f64; 3]) {
    let b = beta;
    let (b2, b3) = (b * b, b * b * b);
    let d = b + 1.0 + b2;
    let mm = mu * mu;
    let n1 = b - mu * b;
    let n2 = (2.0 * b2 + 1.0 - 3.0 * mu * b3 - 5.0 * mu * b2 - 2.0 * mu * b - 2.0 * mu
        + 3.0 * mm * b2
        + 3.0 * mm * b
        + 3.0 * mm * b3)
        / d;
    let n3 = -(b2 - b - 4.0 * mu * b3 - 6.0 * mu * b2 - 3.0 * mu * b - 2.0 * mu + 3.0 * mm * b2
        + 3.0 * mm * b
        + 3.0 * mm * b3)
        / d;
    ([n1, n2, n3], [1.0 - b - 2.0 * mu, mu, mu])
}

/// Closed-form s-durations of the two segments of a third.
pub fn clockwise_durations(beta: f64, n: [f64; 3], m: [f64; 3]) -> (f64, f64) {
    let t1 = (n[0] - n[1]) / (n[0] - n[1] + 1.0);
    let delta = (m[1] - m[2]) + (n[0] - n[1]);
    let t2 = delta / (delta + (1.0 + beta) * (1.0 + n[0] - n[1]));
    (t1, t2)
}

pub fn anticlockwise_durations(beta: f64, n: [f64; 3], m: [f64; 3]) -> (f64, f64) {
    let t1 = (n[0] - n[2]) / (n[0] - n[2] + beta);
    let delta = beta * (m[1] - m[0]) + (1.0 + beta) * (n[0] - n[2]);
    let t2 = delta / (delta + beta + n[0] - n[2]);
    (t1, t2)
}

/// The Shapley orbit: A copies B's previous strategy, B plays one ahead.
pub fn clockwise_orbit(beta: f64) -> Result<PeriodicOrbitSpec> {
    let game = make_shapley(beta)?;
    if beta >= sigma() {
        return Err(Error::Existence(format!(
            "the clockwise orbit no longer exists for beta = {beta} >= sigma"
        )));
    }
    let nu = CubicSpec { kind: OrbitKind::Clockwise, beta }.cubic().root_in(0.0, 1.0)?;
    let (n, m) = clockwise_section(beta, nu);
    if !(n[0] > n[1] && n[0] > n[2] && m[0] > m[2]) {
        return Err(Error::Consistency(format!("clockwise section {n:?} {m:?} violates its inequalities")));
    }
    let durations = clockwise_durations(beta, n, m);
    let v0 = StateV::new(n.to_vec(), m.to_vec());
    let path = orbit_path(&game, &v0)?;
    check_closure(OrbitKind::Clockwise, &v0, &path)?;
    check_durations(&path, durations)?;
    let diameter = diameter_of(&game, &path)?;
    Ok(PeriodicOrbitSpec {
        kind: OrbitKind::Clockwise,
        beta,
        root: nu,
        section_n: n,
        section_m: m,
        durations,
        path,
        diameter,
    })
}

fn anticlockwise_admissible(beta: f64, n: [f64; 3], m: [f64; 3]) -> bool {
    m[1] > m[0] && n[0] > n[1] && n[0] > n[2] && (n[0] - n[1]) * beta > n[0] - n[2]
}

/// The anti-Shapley orbit: both players move one strategy backward.
pub fn anticlockwise_orbit(beta: f64) -> Result<PeriodicOrbitSpec> {
    let game = make_shapley(beta)?;
    if beta <= sigma() {
        return Err(Error::Existence(format!(
            "the anticlockwise orbit exists only for beta > sigma, got {beta}"
        )));
    }
    let cubic = CubicSpec { kind: OrbitKind::Anticlockwise, beta }.cubic();
    let mut hi = 2.0;
    while cubic.eval(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut chosen = Vec::new();
    for (lo, up) in [(0.0, 1.0 / 3.0), (1.0 / 3.0, 1.0), (1.0, hi)] {
        if cubic.eval(lo).signum() == cubic.eval(up).signum() {
            continue;
        }
        let mu = cubic.root_in(lo, up)?;
        let (n, m) = anticlockwise_section(beta, mu);
        if anticlockwise_admissible(beta, n, m) {
            chosen.push((mu, n, m));
        }
    }
    let (mu, n, m) = match chosen.as_slice() {
        [one] => *one,
        [] => return Err(Error::Existence(format!("no admissible anticlockwise root at beta = {beta}"))),
        _ => return Err(Error::Consistency("several admissible anticlockwise roots".into())),
    };
    let durations = anticlockwise_durations(beta, n, m);
    let v0 = StateV::new(n.to_vec(), m.to_vec());
    let path = orbit_path(&game, &v0)?;
    check_closure(OrbitKind::Anticlockwise, &v0, &path)?;
    check_durations(&path, durations)?;
    let diameter = diameter_of(&game, &path)?;
    Ok(PeriodicOrbitSpec {
        kind: OrbitKind::Anticlockwise,
        beta,
        root: mu,
        section_n: n,
        section_m: m,
        durations,
        path,
        diameter,
    })
}

pub fn orbit(kind: OrbitKind, beta: f64) -> Result<PeriodicOrbitSpec> {
    match kind {
        OrbitKind::Clockwise => clockwise_orbit(beta),
        OrbitKind::Anticlockwise => anticlockwise_orbit(beta),
        OrbitKind::JOrbit => j_orbit(beta).map(|j| j.orbit),
    }
}

/// Section state displaced by `ε`, staying on the section.
pub fn perturbed_section(kind: OrbitKind, n: [f64; 3], m: [f64; 3], eps: [f64; 3]) -> StateV {
    let va = vec![n[0] + eps[0], n[1] + eps[1], n[2] - eps[0] - eps[1]];
    let vb = match kind {
        OrbitKind::Anticlockwise => vec![m[0] - 2.0 * eps[2], m[1] + eps[2], m[2] + eps[2]],
        _ => vec![m[0] + eps[2], m[1] + eps[2], m[2] - 2.0 * eps[2]],
    };
    StateV::new(va, vb)
}

fn section_eps(kind: OrbitKind, n: [f64; 3], m: [f64; 3], v: &StateV) -> [f64; 3] {
    let e3 = match kind {
        OrbitKind::Anticlockwise => (v.vb[0] - m[0]) / -2.0,
        _ => (v.vb[2] - m[2]) / -2.0,
    };
    [v.va[0] - n[0], v.va[1] - n[1], e3]
}

/// One-third map of a symmetric orbit in perturbation coordinates: run
/// two segments from the displaced section, undo the relabelling and read
/// off the new displacement.
pub fn third_map(spec: &PeriodicOrbitSpec, eps: [f64; 3]) -> Result<[f64; 3]> {
    let game = make_shapley(spec.beta)?;
    third_map_in(&game, spec, eps)
}

fn third_map_in(game: &BimatrixGame, spec: &PeriodicOrbitSpec, eps: [f64; 3]) -> Result<[f64; 3]> {
    let (n, m) = (spec.section_n, spec.section_m);
    let v0 = perturbed_section(spec.kind, n, m, eps);
    let cfg = SimConfig { equilibrium_radius: 0.0, ..SimConfig::default() }.with_max_events(2);
    let engine = FlowEngine::new(game, cfg)?;
    let mut v = v0;
    for k in 0..2 {
        let (seg, _) = engine
            .step(&v)?
            .map_err(|e| Error::Domain(format!("section map stopped at {e:?}")))?;
        let expected = spec.path[k].motion.region();
        if seg.motion.region() != expected {
            return Err(Error::Domain("perturbation left the orbit's itinerary".into()));
        }
        v = seg.end;
    }
    let back = StateV::new(unpermute(&v.va, spec.kind.shift()), unpermute(&v.vb, spec.kind.shift()));
    Ok(section_eps(spec.kind, n, m, &back))
}

/// Jacobian of [`third_map`] at the origin: central differences with step
/// `h` and one Richardson extrapolation.
pub fn numeric_stability_matrix(spec: &PeriodicOrbitSpec, h: f64) -> Result<Matrix> {
    let game = make_shapley(spec.beta)?;
    let diff = |k: usize, step: f64| -> Result<[f64; 3]> {
        let mut ep = [0.0; 3];
        let mut em = [0.0; 3];
        ep[k] = step;
        em[k] = -step;
        let (fp, fm) = (third_map_in(&game, spec, ep)?, third_map_in(&game, spec, em)?);
        Ok([0, 1, 2].map(|i| (fp[i] - fm[i]) / (2.0 * step)))
    };
    let mut jac = vec![vec![0.0; 3]; 3];
    for k in 0..3 {
        let d1 = diff(k, h)?;
        let d2 = diff(k, h / 2.0)?;
        for i in 0..3 {
            jac[i][k] = (4.0 * d2[i] - d1[i]) / 3.0;
        }
    }
    Ok(jac)
}

/// Closed-form linearization of the anticlockwise one-third map.
pub fn anticlockwise_matrix(beta: f64, n1: f64, n2: f64) -> Matrix {
    let b = beta;
    let f = n2 / (n1 * b);
    let r = (b - n1) * (2.0 + b) / b;
    let m = [
        [b * (3.0 + 2.0 * b) - 2.0 * n1 * (2.0 + b), b * (1.0 - n1 + b) - 2.0 * n1, 3.0 * b * b - 3.0 * n1 * b],
        [b - 2.0 * n2 * (2.0 + b), -n2 * (2.0 + b), -3.0 * n2 * b],
        [2.0 - 2.0 * r, 1.0 - r, 3.0 * n1 - 2.0 * b],
    ];
    m.iter().map(|row| row.iter().map(|x| f * x).collect()).collect()
}

/// The two eigenvalues of [`anticlockwise_matrix`] other than `n2/n1`,
/// the `−√Δ` root first.
pub fn anticlockwise_eigen_pair(beta: f64, n1: f64, n2: f64) -> [Complex64; 2] {
    let b = beta;
    let (b2, b3, b4) = (b * b, b * b * b, b * b * b * b);
    let delta = 10.0 * n1 * n2 * b + 4.0 * n1 * n2 - 4.0 * n2 * b2 - 4.0 * n2 * b3 - 8.0 * n1 * b3
        + 4.0 * b4
        + 4.0 * n2 * n2
        + 4.0 * n2 * n2 * b
        + 4.0 * n1 * n1 * b2
        + 4.0 * n1 * n1 * b
        + n2 * n2 * b2
        + 4.0 * n2 * b2 * n1
        - 8.0 * n1 * b2
        + n1 * n1
        - 4.0 * n2 * b
        - 8.0 * n1 * b
        + 4.0 * b2
        + 4.0 * b3;
    let base = -2.0 * n1 * b - n1 - 2.0 * n2 - n2 * b + 2.0 * b2;
    let root = Complex64::new(delta, 0.0).sqrt();
    let scale = n2 / (2.0 * n1 * b);
    [(base - root) * scale, (base + root) * scale]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityClass {
    Attracting,
    SaddleType,
    NonGeneric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub kind: OrbitKind,
    pub beta: f64,
    pub matrix: Matrix,
    pub eigenvalues: [Complex64; 3],
    pub classification: StabilityClass,
}

pub fn classify_spectrum(eigenvalues: &[Complex64]) -> StabilityClass {
    if eigenvalues.iter().any(|z| (z.norm() - 1.0).abs() < 1e-9) {
        StabilityClass::NonGeneric
    } else if eigenvalues.iter().all(|z| z.norm() < 1.0) {
        StabilityClass::Attracting
    } else {
        StabilityClass::SaddleType
    }
}

/// Return-map linearization of whichever symmetric orbit exists at `beta`:
/// closed form for the anticlockwise orbit, finite differences for the
/// clockwise one.
pub fn stability_matrix(beta: f64) -> Result<StabilityReport> {
    let kind = if beta < sigma() { OrbitKind::Clockwise } else { OrbitKind::Anticlockwise };
    orbit_stability(&orbit(kind, beta)?)
}

/// Return-map linearization of a constructed symmetric orbit.
pub fn orbit_stability(spec: &PeriodicOrbitSpec) -> Result<StabilityReport> {
    match spec.kind {
        OrbitKind::Anticlockwise => anticlockwise_report(spec),
        OrbitKind::Clockwise => {
            let matrix = numeric_stability_matrix(spec, 1e-6)?;
            let mut ev = eigenvalues3(&matrix)?;
            ev.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.im.total_cmp(&x.im)));
            let classification = classify_spectrum(&ev);
            Ok(StabilityReport { kind: spec.kind, beta: spec.beta, matrix, eigenvalues: ev, classification })
        }
        OrbitKind::JOrbit => Err(Error::Parameter("no return-map linearization is built for the J-orbit".into())),
    }
}

fn anticlockwise_report(spec: &PeriodicOrbitSpec) -> Result<StabilityReport> {
    let (beta, n1, n2) = (spec.beta, spec.section_n[0], spec.section_n[1]);
    let matrix = anticlockwise_matrix(beta, n1, n2);
    let ev = eigenvalues3(&matrix)?;
    let lead = n2 / n1;
    let first = (0..3)
        .min_by(|&i, &j| (ev[i] - lead).norm().total_cmp(&(ev[j] - lead).norm()))
        .unwrap();
    let mut rest: Vec<Complex64> = (0..3).filter(|&i| i != first).map(|i| ev[i]).collect();
    rest.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let closed = anticlockwise_eigen_pair(beta, n1, n2);
    let mut closed_sorted = closed.to_vec();
    closed_sorted.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let err = rest.iter().zip(&closed_sorted).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if (ev[first] - lead).norm() > 1e-9 || err > 1e-6 {
        return Err(Error::Consistency(format!(
            "anticlockwise spectrum {ev:?} disagrees with closed forms ({lead}, {closed:?})"
        )));
    }
    let eigenvalues = [ev[first], rest[0], rest[1]];
    Ok(StabilityReport {
        kind: OrbitKind::Anticlockwise,
        beta,
        matrix,
        classification: classify_spectrum(&eigenvalues),
        eigenvalues,
    })
}

/// Most negative real eigenvalue of the anticlockwise return map, plus one.
fn tau_gap(beta: f64) -> Result<f64> {
    let r = anticlockwise_report(&anticlockwise_orbit(beta)?)?;
    r.eigenvalues
        .iter()
        .filter(|z| z.im.abs() < 1e-12)
        .map(|z| z.re)
        .reduce(f64::min)
        .map(|x| x + 1.0)
        .ok_or_else(|| Error::Search(format!("no real eigenvalue at beta = {beta}")))
}

/// Default search interval for τ.
pub fn tau_bracket() -> (f64, f64) {
    (sigma() + 0.01, 0.99)
}

/// Parameter at which an eigenvalue of the anticlockwise return map
/// crosses −1, located by bisection until `|g(τ)| <= tol`.
pub fn find_tau(bracket: (f64, f64), tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let (mut glo, ghi) = (tau_gap(lo)?, tau_gap(hi)?);
    if glo.signum() == ghi.signum() {
        return Err(Error::Search(format!("no eigenvalue crossing -1 in ({lo}, {hi})")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = tau_gap(mid)?;
        if g.abs() <= tol || hi - lo < 1e-15 {
            return Ok(mid);
        }
        if g.signum() == glo.signum() {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gap recursion on the J-orbit: the gap `X = n2 − n1` after one third.
pub fn j_map_f(beta: f64, x: f64) -> f64 {
    let b = beta;
    let q = 1.0 - b + b * b;
    x * (1.0 + b) * (1.0 + 2.0 * b) * q / ((2.0 - b) * (3.0 * (1.0 + b).powi(2) * x + (2.0 + b) * q))
}

/// `F'(0) = (2β² + 3β + 1)/(4 − β²)`.
pub fn j_map_f_prime0(beta: f64) -> f64 {
    (2.0 * beta * beta + 3.0 * beta + 1.0) / (4.0 - beta * beta)
}

/// Positive fixed point of [`j_map_f`] for `β > σ`, zero otherwise.
pub fn j_fixed_point(beta: f64) -> f64 {
    if beta <= sigma() {
        return 0.0;
    }
    let b = beta;
    (1.0 + b * b - b) * (b * b + b - 1.0) / ((2.0 - b) * (1.0 + b).powi(2))
}

/// Closed-form durations of the two half-legs of Γ.
pub fn j_durations(beta: f64, x: f64) -> (f64, f64) {
    let b = beta;
    let t1 = x * (1.0 + b) / (x * (1.0 + b) + (1.0 - b + b * b));
    let t2 = t1 * (1.0 + 2.0 * b) / (t1 * (1.0 + 2.0 * b) + (2.0 + b));
    (t1, t2)
}

/// Starting state of a J-orbit third: A tied on {2,3} with gap `x` above
/// strategy 1, B indifferent between all three.
pub fn j_section(beta: f64, x: f64) -> StateV {
    let c = (1.0 + beta) / 3.0;
    StateV::new(vec![c - 2.0 * x / 3.0, c + x / 3.0, c + x / 3.0], vec![(1.0 - beta) / 3.0; 3])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JOrbit {
    pub orbit: PeriodicOrbitSpec,
    pub x_star: f64,
    /// `|E − f| / |Q − f|` along the first half-leg, against
    /// `(β² + β − 1)/(2β + 1)`.
    pub ratio_q: f64,
    /// `|f − E| / |R − E|` on the A-indifference line, against
    /// `(β² + β − 1)/(1 + β)²`.
    pub ratio_r: f64,
    /// Orbit states where one player is indifferent between all strategies.
    pub vertices: Vec<StateV>,
}

pub fn j_ratio_closed_forms(beta: f64) -> (f64, f64) {
    let b = beta;
    let num = b * b + b - 1.0;
    (num / (2.0 * b + 1.0), num / (1.0 + b).powi(2))
}

fn euclid(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// The periodic orbit Γ on the spiralling tie pieces, `β ∈ (σ, 1]`.
pub fn j_orbit(beta: f64) -> Result<JOrbit> {
    let game = make_shapley(beta)?;
    if beta <= sigma() {
        return Err(Error::Existence(format!(
            "the J-orbit collapses onto the equilibrium for beta = {beta} <= sigma"
        )));
    }
    let x_star = j_fixed_point(beta);
    let v0 = j_section(beta, x_star);
    let mut path = Vec::with_capacity(6);
    let mut v = v0.clone();
    for _ in 0..6 {
        let seg = flow::j_flow_step(beta, &v)?;
        v = seg.end.clone();
        path.push(seg);
    }
    check_closure(OrbitKind::JOrbit, &v0, &path)?;
    let durations = j_durations(beta, x_star);
    check_durations(&path, durations)?;
    let e = crate::game::equilibrium_utilities(&game)?;
    let f = &v0.va;
    let q = path[0].motion.targets(&game).va;
    let ratio_q = euclid(&e.va, f) / euclid(&q, f);
    let r_p = tie_segment_endpoint(&game, Player::A, Pair(1, 2))?;
    let r = crate::linalg::mat_vec(game.a(), &r_p);
    let ratio_r = euclid(f, &e.va) / euclid(&r, &e.va);
    let diameter = diameter_of(&game, &path)?;
    let vertices = path.iter().map(|s| s.start.clone()).collect();
    let orbit = PeriodicOrbitSpec {
        kind: OrbitKind::JOrbit,
        beta,
        root: x_star,
        section_n: [v0.va[0], v0.va[1], v0.va[2]],
        section_m: [v0.vb[0], v0.vb[1], v0.vb[2]],
        durations,
        path,
        diameter,
    };
    Ok(JOrbit { orbit, x_star, ratio_q, ratio_r, vertices })
}

/// Run the generic simulator along Γ from its section state; used to
/// confirm that the sliding rules reproduce the closed-form orbit.
pub fn j_orbit_simulated(beta: f64, x: f64, thirds: usize) -> Result<Vec<Segment>> {
    let game = make_shapley(beta)?;
    let cfg = SimConfig {
        equilibrium_radius: 0.0,
        codim2_policy: Codim2Policy::FollowJ,
        ..SimConfig::default()
    }
    .with_max_events(2 * thirds);
    let t = flow::simulate_v(&game, &j_section(beta, x), &cfg)?;
    if t.segments.iter().any(|s| !matches!(s.motion, Motion::Slide { .. })) {
        return Err(Error::Consistency("simulated flow left the tie pieces".into()));
    }
    Ok(t.segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_sign_pattern() {
        for k in 1..100 {
            let b = -1.0 + 2.0 * k as f64 / 100.0;
            let c = CubicSpec { kind: OrbitKind::Clockwise, beta: b }.cubic();
            assert!((c.eval(0.0) - (-1.0 - b)).abs() < 1e-15 && c.eval(0.0) < 0.0);
            assert!((c.eval(1.0) - (b.powi(3) + b * b + b + 1.0)).abs() < 1e-12 && c.eval(1.0) > 0.0);
            let a = CubicSpec { kind: OrbitKind::Anticlockwise, beta: b }.cubic();
            assert!(a.eval(0.0) <= 0.0);
            assert!((a.eval(1.0 / 3.0) - (2.0 / 9.0 * b.powi(3) + 1.0 / 9.0)).abs() < 1e-12);
            // the printed coefficients sum to −1 at Z = 1
            assert!((a.eval(1.0) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn existence_windows() {
        assert!(matches!(clockwise_orbit(0.7), Err(Error::Existence(_))));
        assert!(matches!(anticlockwise_orbit(0.5), Err(Error::Existence(_))));
        assert!(matches!(j_orbit(0.6), Err(Error::Existence(_))));
        assert!(matches!(stability_matrix(sigma()), Err(Error::Existence(_))));
    }

    #[test]
    fn f_map_values() {
        let s = sigma();
        assert!((j_map_f_prime0(s) - 1.0).abs() < 1e-15);
        assert!((j_fixed_point(1.0) - 0.25).abs() < 1e-15);
        assert!((j_map_f_prime0(0.8) - 4.68 / 3.36).abs() < 1e-14);
        for b in [0.7, 0.8, 0.9, 1.0] {
            let x = j_fixed_point(b);
            assert!((j_map_f(b, x) - x).abs() < 1e-15);
        }
        assert_eq!(j_fixed_point(0.5), 0.0);
    }

    #[test]
    fn tau_bracket_without_crossing() {
        assert!(matches!(find_tau((0.92, 0.99), 1e-6), Err(Error::Search(_))));
    }
}
