//! Runtime self-checks: every structural property the toolkit relies on,
//! evaluated on fixed seeds. Used by the `check` command.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::flow::{self, advance, EventKind, SimConfig};
use crate::game::{
    best_response_set, check_transversality, equilibrium_utilities, interior_equilibrium, make_shapley, p_from_v,
    sigma, utilities, zero_sum_certificate, StateP,
};
use crate::geometry::{classify_codim2, restricted_game, Codim2Case, RestrictedGame2x2};
use crate::orbit::{self, CubicSpec, OrbitKind};
use crate::return_map::{first_return, orbit_point_on_s1};
use crate::transition::{corner_types, diagram_for, pattern_match, validate_itinerary, CornerType, NamedPattern};

/// Classify a restricted game by integrating its 2x2 best-response flow
/// from a grid of starts for 50 time units. `None` when the outcome
/// fits no class.
///
/// Between switches each mixed strategy relaxes exponentially toward the
/// current pure best response, so the flow is advanced switch to switch.
pub fn brute_force_codim2(rg: &RestrictedGame2x2) -> Option<Codim2Case> {
    let (a, b) = (rg.asub, rg.bsub);
    // p: weight on A's first row, q: weight on B's first column
    let da = |q: f64| (a[0][0] - a[1][0]) * q + (a[0][1] - a[1][1]) * (1.0 - q);
    let db = |p: f64| (b[0][0] - b[0][1]) * p + (b[1][0] - b[1][1]) * (1.0 - p);
    let pick = |d: f64| if d > 0.0 { 1.0 } else { 0.0 };
    let qs = (a[1][1] - a[0][1]) / ((a[0][0] - a[1][0]) - (a[0][1] - a[1][1]));
    let ps = (b[1][1] - b[1][0]) / ((b[0][0] - b[0][1]) - (b[1][0] - b[1][1]));
    let interior = (qs > 0.0 && qs < 1.0 && ps > 0.0 && ps < 1.0).then_some((ps, qs));
    let tie = 1e-12;

    let mut corners = std::collections::BTreeSet::new();
    let (mut at_corner, mut grid_total, mut halved, mut total) = (0, 0, 0, 0);
    // a 10x10 grid, plus a ring around the interior equilibrium so both
    // sides of a saddle's stable line are sampled
    let mut starts: Vec<(f64, f64, bool)> = (0..100)
        .map(|k| (0.07 + 0.1 * (k / 10) as f64, 0.07 + 0.1 * (k % 10) as f64, false))
        .collect();
    if let Some((x, y)) = interior {
        for k in 0..8 {
            let th = std::f64::consts::PI * (k as f64 + 0.5) / 4.0;
            let c = |z: f64| z.clamp(1e-3, 1.0 - 1e-3);
            starts.push((c(x + 0.02 * th.cos()), c(y + 0.02 * th.sin()), true));
        }
    }
    for (p0, q0, ring) in starts {
        {
            let (mut p, mut q) = (p0, q0);
            let d0 = interior.map(|(x, y)| (p - x).abs().max((q - y).abs()));
            if !ring && d0.is_some_and(|d| d < 0.05) {
                continue;
            }
            total += 1;
            grid_total += usize::from(!ring);
            let mut t = 0.0;
            // spirals reach the equilibrium in finite time through infinitely
            // many switches; a few thousand are plenty to halve the distance
            for _ in 0..3000 {
                let (ea, eb) = (da(q), db(p));
                let (ta, tb) = match (ea.abs() < tie, eb.abs() < tie) {
                    (true, true) => break,
                    (false, false) => (pick(ea), pick(eb)),
                    (true, false) => {
                        let tb = pick(eb);
                        (pick(da(q + 1e-9 * (tb - q))), tb)
                    }
                    (false, true) => {
                        let ta = pick(ea);
                        (ta, pick(db(p + 1e-9 * (ta - p))))
                    }
                };
                let switch = |x: f64, target: f64, at: f64| {
                    let ahead = (at - x) * (target - x) > 0.0 && (target - at) * (target - x) > 0.0;
                    ahead.then(|| ((x - target) / (at - target)).ln())
                };
                let sa = switch(q, tb, qs);
                let sb = switch(p, ta, ps);
                let s = [sa, sb, Some(50.0 - t)].into_iter().flatten().fold(f64::INFINITY, f64::min).max(0.0);
                let e = (-s).exp();
                p = ta + (p - ta) * e;
                q = tb + (q - tb) * e;
                if sa == Some(s) {
                    q = qs;
                }
                if sb == Some(s) {
                    p = ps;
                }
                t += s;
                if t >= 50.0 {
                    break;
                }
            }
            // ring starts only contribute corners: one of them may hug a
            // saddle's stable line and leave too late
            if [p, q].iter().all(|x| x.min(1.0 - x) < 1e-3) {
                at_corner += usize::from(!ring);
                corners.insert((p.round() as u8, q.round() as u8));
            }
            if let (Some((x, y)), Some(d0)) = (interior, d0) {
                if (p - x).abs().max((q - y).abs()) <= 0.5 * d0 {
                    halved += 1;
                }
            }
        }
    }
    if at_corner == grid_total {
        Some(if corners.len() == 1 { Codim2Case::Crossing } else { Codim2Case::Saddle })
    } else if halved == total {
        Some(Codim2Case::SpiralStable)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult { name, passed, detail, seconds: t.elapsed().as_secs_f64() }
}

const BETAS: [f64; 7] = [-0.9, -0.5, 0.0, 0.3, 0.6, 0.8, 0.95];

/// Run the whole suite; `seed` fixes all random starts.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();

    out.push(check("utility sums", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for &beta in BETAS.iter().chain(&[1.0]) {
            let g = make_shapley(beta)?;
            for _ in 0..200 {
                let v = utilities(&g, &StateP::random(3, &mut rng))?;
                worst = worst.max((v.va.iter().sum::<f64>() - 1.0 - beta).abs());
                worst = worst.max((v.vb.iter().sum::<f64>() - 1.0 + beta).abs());
            }
        }
        Ok((worst <= 1e-10, format!("max deviation {worst:e}")))
    }));

    out.push(check("equilibrium at barycenter, round trip p -> v -> p", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut worst: f64 = 0.0;
        for &beta in BETAS.iter().chain(&[1.0]) {
            let g = make_shapley(beta)?;
            let e = interior_equilibrium(&g)?;
            for x in e.pa.as_slice().iter().chain(e.pb.as_slice()) {
                worst = worst.max((x - 1.0 / 3.0).abs());
            }
            for _ in 0..100 {
                let p = StateP::random(3, &mut rng);
                let back = p_from_v(&g, &utilities(&g, &p)?)?;
                for (x, y) in back.pa.as_slice().iter().chain(back.pb.as_slice()).zip(p.pa.as_slice().iter().chain(p.pb.as_slice())) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        Ok((worst <= 1e-10, format!("max error {worst:e}")))
    }));

    out.push(check("transversality holds exactly for beta != 0, 1", || {
        let ok = [-0.5, 0.3, 0.5, 0.9].iter().all(|&b| make_shapley(b).map(|g| check_transversality(&g).ok).unwrap_or(false))
            && !check_transversality(&make_shapley(0.0)?).ok
            && !check_transversality(&make_shapley(1.0)?).ok;
        Ok((ok, String::new()))
    }));

    out.push(check("zero-sum certificate vanishes only at sigma", || {
        let r = zero_sum_certificate(sigma());
        let off = [0.0, 0.5, 0.7, 1.0].iter().map(|&b| zero_sum_certificate(b)).fold(f64::INFINITY, f64::min);
        Ok((r < 1e-12 && off > 1e-3, format!("residual at sigma {r:e}")))
    }));

    out.push(check("trajectories: conservation, linear segments, exact events, valid itineraries", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let mut worst: f64 = 0.0;
        let mut bad = 0;
        for &beta in &BETAS {
            let g = make_shapley(beta)?;
            let d = diagram_for(beta);
            for _ in 0..30 {
                let t = flow::simulate(&g, &StateP::random(3, &mut rng), &SimConfig::default().with_max_events(200))?;
                for s in &t.segments {
                    let tgt = s.motion.targets(&g);
                    worst = worst.max(advance(&s.start, &tgt, s.duration_s).dist(&s.end));
                    worst = worst.max((s.end.va.iter().sum::<f64>() - 1.0 - beta).abs());
                    worst = worst.max((s.end.vb.iter().sum::<f64>() - 1.0 + beta).abs());
                }
                for ev in &t.events {
                    if let EventKind::SingleIndifference { player, pair } = ev.kind {
                        let v = ev.state.of(player);
                        worst = worst.max((v[pair.0] - v[pair.1]).abs());
                        let br = best_response_set(player, v, 1e-9);
                        if !br.indices.contains(&pair.0) || !br.indices.contains(&pair.1) {
                            bad += 1;
                        }
                    }
                }
                if validate_itinerary(&t.itinerary(), &d).is_err() {
                    bad += 1;
                }
            }
        }
        Ok((worst <= 1e-9 && bad == 0, format!("max error {worst:e}, {bad} bad events or itineraries")))
    }));

    out.push(check("corner types per regime", || {
        let count = |b: f64, t: CornerType| corner_types(b).iter().filter(|(_, c)| *c == t).count();
        let ok = count(-0.5, CornerType::Transversal) == 6
            && count(-0.5, CornerType::Saddle) == 3
            && count(0.5, CornerType::Spiral) == 6
            && count(0.5, CornerType::Transversal) == 3
            && count(0.0, CornerType::Degenerate) == 9;
        Ok((ok, String::new()))
    }));

    out.push(check("corner classification agrees with brute-force 2x2 flow", || {
        let mut disagreements = 0;
        let mut n = 0;
        for beta in [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9] {
            let g = make_shapley(beta)?;
            for pa in [(0, 1), (0, 2), (1, 2)] {
                for pb in [(0, 1), (0, 2), (1, 2)] {
                    let rg = restricted_game(&g, pa, pb)?;
                    n += 1;
                    if Some(classify_codim2(&rg)?) != brute_force_codim2(&rg) {
                        disagreements += 1;
                    }
                }
            }
        }
        Ok((disagreements == 0, format!("{disagreements} of {n} disagree")))
    }));

    out.push(check("cubic sign pattern", || {
        let ok = (1..100).all(|k| {
            let b = -1.0 + 0.02 * k as f64;
            let c = CubicSpec { kind: OrbitKind::Clockwise, beta: b }.cubic();
            let a = CubicSpec { kind: OrbitKind::Anticlockwise, beta: b }.cubic();
            // f(1/3) = (2β³ + 1)/9 is only positive above −2^(−1/3)
            let a_third = b <= -(0.5f64.cbrt()) || a.eval(1.0 / 3.0) > 0.0;
            c.eval(0.0) < 0.0 && c.eval(1.0) > 0.0 && a.eval(0.0) <= 0.0 && a_third && a.eval(1.0) < 0.0
        });
        Ok((ok, String::new()))
    }));

    out.push(check("symmetric orbits close under the simulator", || {
        let mut worst: f64 = 0.0;
        let cw = [-0.9, -0.5, 0.0, 0.3, 0.6];
        let acw = [0.65, 0.8, 0.95, 1.0];
        let cases = cw.iter().map(|&b| (OrbitKind::Clockwise, b)).chain(acw.iter().map(|&b| (OrbitKind::Anticlockwise, b)));
        for (kind, beta) in cases {
            let spec = orbit::orbit(kind, beta)?;
            let g = make_shapley(beta)?;
            let cfg = SimConfig { equilibrium_radius: 0.0, ..SimConfig::default() }.with_max_events(6);
            let v0 = spec.section_state();
            let t = flow::simulate_v(&g, &v0, &cfg)?;
            worst = worst.max(t.segments.last().map_or(f64::INFINITY, |s| s.end.dist(&v0)));
        }
        Ok((worst <= 1e-8, format!("max closure error {worst:e}")))
    }));

    out.push(check("orbits shrink to the equilibrium at sigma", || {
        let s = sigma();
        let dc = orbit::clockwise_orbit(s - 1e-3)?.diameter;
        let da = orbit::anticlockwise_orbit(s + 1e-3)?.diameter;
        Ok((dc < 1e-3 && da < 1e-3, format!("clockwise {dc:e}, anticlockwise {da:e}")))
    }));

    out.push(check("stability spectra", || {
        let mut ok = true;
        for b in [0.65, 0.8, 0.95, 1.0] {
            let spec = orbit::anticlockwise_orbit(b)?;
            let r = orbit::orbit_stability(&spec)?;
            ok &= (r.eigenvalues[0].re - spec.section_n[1] / spec.section_n[0]).abs() < 1e-9;
        }
        for b in [0.0, 0.2, 0.4, 0.6] {
            ok &= orbit::stability_matrix(b)?.eigenvalues.iter().all(|z| z.norm() < 1.0);
        }
        let tau = orbit::find_tau(orbit::tau_bracket(), 1e-6)?;
        ok &= (tau - 0.915).abs() <= 1e-3;
        Ok((ok, format!("tau = {tau:.6}")))
    }));

    out.push(check("J-orbit: closed-form step, ratios and simulated closure", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let beta = rng.random_range(sigma() + 0.01..1.0);
            let x = rng.random_range(0.0..0.2);
            let v = orbit::j_section(beta, x);
            let mut w = v.clone();
            for _ in 0..2 {
                w = flow::j_flow_step(beta, &w)?.end;
            }
            let fx = orbit::j_map_f(beta, x);
            worst = worst.max((orbit::j_section(beta, fx).dist(&orbit::unpermute_state(&w, 1))).abs());
        }
        let j1 = orbit::j_orbit(1.0)?;
        worst = worst.max((j1.ratio_q - 1.0 / 3.0).abs()).max((j1.ratio_r - 0.25).abs());
        let j8 = orbit::j_orbit(0.8)?;
        let segs = orbit::j_orbit_simulated(0.8, j8.x_star, 3)?;
        let v0 = orbit::j_section(0.8, j8.x_star);
        worst = worst.max(segs.last().map_or(f64::INFINITY, |s| s.end.dist(&v0)));
        Ok((worst <= 1e-9, format!("max error {worst:e}")))
    }));

    out.push(check("first-return map for beta <= 0", || {
        let mut worst: f64 = 0.0;
        for beta in [-0.5, 0.0] {
            let fr = first_return(beta, seed)?;
            worst = worst.max(fr.fit_residual).max(fr.fixed_state.dist(&orbit_point_on_s1(beta)?));
            let e = crate::return_map::equilibrium_on_s1(beta)?;
            let pe = fr.map.apply(&e)?;
            worst = worst.max(pe.iter().zip(&e).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        }
        Ok((worst < 1e-8, format!("max error {worst:e}")))
    }));

    out.push(check("long runs settle on the named patterns", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let mut ok = true;
        for (beta, pat) in [(-0.5, NamedPattern::Shapley), (0.95, NamedPattern::AntiShapley)] {
            let g = make_shapley(beta)?;
            for _ in 0..10 {
                let t = flow::simulate(&g, &StateP::random(3, &mut rng), &SimConfig::default().with_max_events(300))?;
                ok &= pattern_match(&t.itinerary(), pat, 5);
            }
        }
        Ok((ok, String::new()))
    }));

    out.push(check("equilibrium utilities", || {
        let g = make_shapley(0.3)?;
        let e = equilibrium_utilities(&g)?;
        let ok = e.va.iter().all(|x| (x - 1.3 / 3.0).abs() < 1e-12) && e.vb.iter().all(|x| (x - 0.7 / 3.0).abs() < 1e-12);
        Ok((ok, String::new()))
    }));

    out
}
