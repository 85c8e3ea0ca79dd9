//! The clockwise (Shapley) orbit: closed-form section values, durations,
//! and a check that the simulator closes it up.

use fpdyn::flow::{simulate_v, SimConfig};
use fpdyn::game::make_shapley;
use fpdyn::orbit::clockwise_orbit;

fn main() -> fpdyn::Result<()> {
    for beta in [-0.5, 0.0, 0.3, 0.6] {
        let o = clockwise_orbit(beta)?;
        println!(
            "beta {beta:5.2}  nu={:.6}  n={:.5?}  m={:.5?}  t=({:.5}, {:.5})  diameter={:.4e}",
            o.root, o.section_n, o.section_m, o.durations.0, o.durations.1, o.diameter
        );
        let game = make_shapley(beta)?;
        let cfg = SimConfig { equilibrium_radius: 0.0, ..SimConfig::default() }.with_max_events(6);
        let v0 = o.section_state();
        let t = simulate_v(&game, &v0, &cfg)?;
        println!("            simulated closure error {:.2e}", t.final_state().dist(&v0));
    }
    println!("beta 0.7: {}", clockwise_orbit(0.7).unwrap_err());
    Ok(())
}
