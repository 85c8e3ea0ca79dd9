//! Allowed transitions between best-response regions, and checking
//! simulated itineraries against them.

use fpdyn::flow::{simulate, SimConfig};
use fpdyn::game::{make_shapley, StateP};
use fpdyn::transition::{diagram_for, validate_itinerary, NamedPattern};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fpdyn::Result<()> {
    for beta in [-0.5, 0.0, 0.5, 1.0] {
        let d = diagram_for(beta);
        let corners: Vec<String> = d.corner_types.iter().map(|(l, t)| format!("{l:?}:{t:?}")).collect();
        println!("beta {beta:4}  {:?}  {} arcs", d.regime, d.arcs.len());
        println!("    corners {}", corners.join(" "));
        if !d.ambiguous_faces.is_empty() {
            println!("    {} non-transversal faces", d.ambiguous_faces.len());
        }
        if !d.degenerate_arcs.is_empty() {
            println!("    {} blocked exits", d.degenerate_arcs.len());
        }
        for p in [NamedPattern::Shapley, NamedPattern::AntiShapley] {
            let s = p.sequence();
            let ok = (0..6).all(|k| d.has_arc(s[k], s[(k + 1) % 6]));
            println!("    {p:?} cycle realizable: {ok}");
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for beta in [-0.9, 0.3, 0.8, 0.95] {
        let g = make_shapley(beta)?;
        for _ in 0..50 {
            let t = simulate(&g, &StateP::random(3, &mut rng), &SimConfig::default().with_max_events(300))?;
            bad += validate_itinerary(&t.itinerary(), &diagram_for(beta)).is_err() as usize;
        }
    }
    println!("\n200 simulated itineraries, {bad} violations");
    println!("{}", serde_json::to_string(&diagram_for(-0.5)).unwrap());
    Ok(())
}
