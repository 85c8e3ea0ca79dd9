use std::collections::BTreeSet;

use fpdyn::flow::{simulate, SimConfig};
use fpdyn::game::{make_shapley, StateP};
use fpdyn::geometry::RegionLabel;
use fpdyn::orbit::{j_fixed_point, j_orbit_simulated};
use fpdyn::transition::*;
use fpdyn::flow::ItineraryEntry;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn observed_arcs(beta: f64, starts: usize, events: usize, seed: u64) -> BTreeSet<(RegionLabel, RegionLabel)> {
    let g = make_shapley(beta).unwrap();
    let cfg = SimConfig::default().with_max_events(events);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    for _ in 0..starts {
        let t = simulate(&g, &StateP::random(3, &mut rng), &cfg).unwrap();
        let regions = t.regions();
        for w in regions.windows(2) {
            if w[0] != w[1] {
                seen.insert((w[0], w[1]));
            }
        }
    }
    seen
}

#[test]
fn literal_arcs_are_exactly_the_simulated_transitions() {
    for (beta, seed) in [(-0.5, 1), (-0.9, 2), (0.0, 3), (0.5, 4), (0.8, 5), (1.0, 6)] {
        let d = diagram_for(beta);
        let seen = observed_arcs(beta, 3000, 8, seed);
        let outside: Vec<_> = seen.difference(&d.arcs).collect();
        let unwitnessed: Vec<_> = d.arcs.difference(&seen).collect();
        assert!(outside.is_empty(), "beta {beta}: transitions outside the diagram {outside:?}");
        assert!(unwitnessed.is_empty(), "beta {beta}: arcs never observed {unwitnessed:?}");
    }
}

#[test]
fn long_itineraries_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for beta in [-0.95, -0.5, -0.2, 0.0, 0.3, 0.62, 0.7, 0.85, 0.92, 1.0] {
        let g = make_shapley(beta).unwrap();
        let d = diagram_for(beta);
        let cfg = SimConfig::default().with_max_events(400);
        for _ in 0..10 {
            let t = simulate(&g, &StateP::random(3, &mut rng), &cfg).unwrap();
            if let Err(v) = validate_itinerary(&t.itinerary(), &d) {
                panic!("beta {beta}: {v:?}");
            }
        }
    }
}

#[test]
fn sliding_orbit_on_j_validates() {
    let segs = j_orbit_simulated(0.8, j_fixed_point(0.8), 4).unwrap();
    let it: Vec<ItineraryEntry> = segs
        .iter()
        .map(|s| ItineraryEntry { motion: s.motion.clone(), duration_s: s.duration_s, duration_rho: s.duration_rho() })
        .collect();
    assert!(it.iter().all(|e| e.region().is_none()));
    validate_itinerary(&it, &diagram_for(0.8)).unwrap();
    // a slide that jumps between legs sharing no pair is rejected
    let mut bad = it.clone();
    bad.swap(1, 3);
    assert!(validate_itinerary(&bad, &diagram_for(0.8)).is_err());
}

#[test]
fn patterns_by_regime() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let run = |beta: f64, rng: &mut ChaCha8Rng| {
        let g = make_shapley(beta).unwrap();
        simulate(&g, &StateP::random(3, rng), &SimConfig::default().with_max_events(300)).unwrap().itinerary()
    };
    for beta in [-0.5, 0.0, 0.4] {
        let it = run(beta, &mut rng);
        assert!(pattern_match(&it, NamedPattern::Shapley, 3), "beta {beta}");
        assert!(!pattern_match(&it, NamedPattern::AntiShapley, 3));
    }
    let it = run(1.0, &mut rng);
    assert!(pattern_match(&it, NamedPattern::AntiShapley, 3));
}
