use fpdyn::flow::{advance, j_flow_step, simulate, EventKind, SimConfig};
use fpdyn::game::{
    best_response_set, interior_equilibrium, make_shapley, p_from_v, sigma, utilities, Player, SimplexPoint, StateP,
};
use fpdyn::geometry::{classify_codim2, Codim2Case, RestrictedGame2x2};
use fpdyn::invariants::brute_force_codim2;
use fpdyn::io::{fmt_sig, trajectory_csv};
use fpdyn::orbit::{j_map_f, j_section, unpermute_state};
use fpdyn::transition::{diagram_for, validate_itinerary};
use proptest::prelude::*;

fn beta() -> impl Strategy<Value = f64> {
    prop_oneof![(-0.999f64..1.0), Just(1.0), Just(0.0)]
}

fn simplex() -> impl Strategy<Value = SimplexPoint> {
    prop::array::uniform3(0.001f64..1.0).prop_map(|w| {
        let s: f64 = w.iter().sum();
        SimplexPoint::new(w.iter().map(|x| x / s).collect()).unwrap()
    })
}

fn state() -> impl Strategy<Value = StateP> {
    (simplex(), simplex()).prop_map(|(a, b)| StateP::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn utility_sums_are_constant(b in beta(), p in state()) {
        let v = utilities(&make_shapley(b).unwrap(), &p).unwrap();
        prop_assert!((v.va.iter().sum::<f64>() - (1.0 + b)).abs() <= 1e-10);
        prop_assert!((v.vb.iter().sum::<f64>() - (1.0 - b)).abs() <= 1e-10);
    }

    #[test]
    fn best_response_ignores_shift_and_scale(v in prop::array::uniform3(-2.0f64..2.0), c in -5.0f64..5.0, k in 0.1f64..10.0) {
        let w: Vec<f64> = v.iter().map(|x| k * x + c).collect();
        let br = best_response_set(Player::A, &v, 0.0);
        let bw = best_response_set(Player::B, &w, 0.0);
        prop_assert_eq!(br.indices, bw.indices);
    }

    #[test]
    fn equilibrium_is_the_barycenter(b in beta()) {
        let e = interior_equilibrium(&make_shapley(b).unwrap()).unwrap();
        for x in e.pa.as_slice().iter().chain(e.pb.as_slice()) {
            prop_assert!((x - 1.0 / 3.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn p_to_v_round_trip(b in beta(), p in state()) {
        let g = make_shapley(b).unwrap();
        let back = p_from_v(&g, &utilities(&g, &p).unwrap()).unwrap();
        for (x, y) in back.pa.as_slice().iter().chain(back.pb.as_slice()).zip(p.pa.as_slice().iter().chain(p.pb.as_slice())) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn simplex_samples_are_probability_vectors(seed in any::<u64>()) {
        use rand::SeedableRng;
        let p = SimplexPoint::random(3, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(p.as_slice().iter().all(|&x| x >= 0.0));
        prop_assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn fmt_sig_keeps_twelve_digits(x in -1e6f64..1e6) {
        let y: f64 = fmt_sig(x).parse().unwrap();
        prop_assert!((x - y).abs() <= 5e-12 * x.abs().max(1e-300));
    }

    #[test]
    fn codim2_sign_test_matches_integrated_flow(e in prop::array::uniform8(-2.0f64..2.0)) {
        let rg = RestrictedGame2x2 { asub: [[e[0], e[1]], [e[2], e[3]]], bsub: [[e[4], e[5]], [e[6], e[7]]], pair_a: (0, 1), pair_b: (0, 1) };
        let da = [e[0] - e[2], e[1] - e[3]];
        let db = [e[4] - e[5], e[6] - e[7]];
        prop_assume!(da.iter().chain(&db).all(|d| d.abs() > 0.05));
        let c = classify_codim2(&rg).unwrap();
        let oracle = brute_force_codim2(&rg);
        prop_assert_eq!(Some(c), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn trajectories_are_exact_and_valid(b in prop_oneof![(-0.95f64..-0.01), (0.01f64..1.0)], p in state()) {
        let g = make_shapley(b).unwrap();
        let t = simulate(&g, &p, &SimConfig::default().with_max_events(150)).unwrap();
        for s in &t.segments {
            // conservation
            prop_assert!((s.end.va.iter().sum::<f64>() - 1.0 - b).abs() <= 1e-9);
            prop_assert!((s.end.vb.iter().sum::<f64>() - 1.0 + b).abs() <= 1e-9);
            // straight toward the target: the midpoint in s is the chord midpoint
            let tgt = s.motion.targets(&g);
            let mid = advance(&s.start, &tgt, 0.5 * s.duration_s);
            for (m, (x, y)) in mid.va.iter().chain(&mid.vb).zip(s.start.va.iter().chain(&s.start.vb).zip(s.end.va.iter().chain(&s.end.vb))) {
                prop_assert!((m - 0.5 * (x + y)).abs() <= 1e-12);
            }
        }
        for ev in &t.events {
            if let EventKind::SingleIndifference { player, pair } = ev.kind {
                let v = ev.state.of(player);
                prop_assert!((v[pair.0] - v[pair.1]).abs() <= 1e-9);
                let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(top - v[pair.0] <= 1e-9);
            }
        }
        prop_assert!(validate_itinerary(&t.itinerary(), &diagram_for(b)).is_ok());
    }

    #[test]
    fn simulation_is_deterministic(b in -0.9f64..1.0, p in state()) {
        let g = make_shapley(b).unwrap();
        let cfg = SimConfig::default().with_max_events(60);
        let t1 = simulate(&g, &p, &cfg).unwrap();
        let t2 = simulate(&g, &p, &cfg).unwrap();
        prop_assert_eq!(trajectory_csv(&g, &t1), trajectory_csv(&g, &t2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Two closed-form J legs carry the section with gap X to the section
    /// with gap F(X), rotated by one strategy.
    #[test]
    fn j_third_is_the_gap_map(u in 0.001f64..1.0, x in 0.0f64..0.2) {
        let b = sigma() + u * (1.0 - sigma());
        let mut w = j_section(b, x);
        for _ in 0..2 {
            w = j_flow_step(b, &w).unwrap().end;
        }
        let expect = j_section(b, j_map_f(b, x));
        prop_assert!(unpermute_state(&w, 1).dist(&expect) <= 1e-12);
    }
}

#[test]
fn integrated_flow_oracle_on_textbook_games() {
    // sanity for the oracle itself on hand-picked games
    let cross = RestrictedGame2x2 { asub: [[2.0, 3.0], [1.0, 0.0]], bsub: [[1.0, 0.0], [0.0, 1.0]], pair_a: (0, 1), pair_b: (0, 1) };
    assert_eq!(brute_force_codim2(&cross), Some(Codim2Case::Crossing));
    let pennies = RestrictedGame2x2 { asub: [[1.0, -1.0], [-1.0, 1.0]], bsub: [[-1.0, 1.0], [1.0, -1.0]], pair_a: (0, 1), pair_b: (0, 1) };
    assert_eq!(brute_force_codim2(&pennies), Some(Codim2Case::SpiralStable));
    let coord = RestrictedGame2x2 { asub: [[1.0, 0.0], [0.0, 1.0]], bsub: [[1.0, 0.0], [0.0, 1.0]], pair_a: (0, 1), pair_b: (0, 1) };
    assert_eq!(brute_force_codim2(&coord), Some(Codim2Case::Saddle));
}
