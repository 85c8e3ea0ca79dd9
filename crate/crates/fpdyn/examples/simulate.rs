//! Simulate fictitious play from a seeded random start and print the
//! itinerary. Run with `cargo run --example simulate -- -0.5 7`.

use fpdyn::flow::{simulate, SimConfig};
use fpdyn::game::{make_shapley, StateP};
use fpdyn::io::trajectory_csv;
use fpdyn::transition::{pattern_match, NamedPattern};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fpdyn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let beta: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(-0.5);
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);

    let game = make_shapley(beta)?;
    let init = StateP::random(3, &mut ChaCha8Rng::seed_from_u64(seed));
    let traj = simulate(&game, &init, &SimConfig::default().with_max_events(300))?;

    println!("start pA={:?} pB={:?}", init.pa.as_slice(), init.pb.as_slice());
    for (k, e) in traj.itinerary().iter().take(12).enumerate() {
        println!("{k:3}  {:<24} s={:.6} rho={:.6}", e.motion.to_string(), e.duration_s, e.duration_rho);
    }
    println!("...");
    println!("{} segments, stopped by {}", traj.segments.len(), traj.last_event());
    let it = traj.itinerary();
    println!("Shapley pattern: {}", pattern_match(&it, NamedPattern::Shapley, 5));
    println!("anti-Shapley pattern: {}", pattern_match(&it, NamedPattern::AntiShapley, 5));

    let csv = trajectory_csv(&game, &traj);
    println!("\nfirst CSV rows:");
    for line in csv.lines().take(3) {
        println!("{line}");
    }
    Ok(())
}
