//! The anticlockwise (anti-Shapley) orbit, which only exists above the
//! golden-mean parameter.

use fpdyn::game::sigma;
use fpdyn::orbit::anticlockwise_orbit;

fn main() -> fpdyn::Result<()> {
    println!("sigma = {:.10}", sigma());
    for beta in [0.65, 0.8, 0.9, 1.0] {
        let o = anticlockwise_orbit(beta)?;
        println!(
            "beta {beta:4.2}  mu={:.6}  n={:.5?}  m={:.5?}  t=({:.5}, {:.5})",
            o.root, o.section_n, o.section_m, o.durations.0, o.durations.1
        );
    }
    if let Err(e) = anticlockwise_orbit(0.5) {
        println!("beta 0.5: {e}");
    }
    Ok(())
}
