//! At the golden-mean parameter the game is equivalent to a zero-sum game
//! and both symmetric orbits collapse onto the equilibrium.

use fpdyn::game::{sigma, zero_sum_certificate};
use fpdyn::orbit::{anticlockwise_orbit, clockwise_orbit, j_map_f_prime0};

fn main() -> fpdyn::Result<()> {
    let s = sigma();
    println!("sigma = {s:.12}, zero-sum residual {:.2e}", zero_sum_certificate(s));
    for d in [1e-1, 3e-2, 1e-2, 3e-3, 1e-3] {
        let cw = clockwise_orbit(s - d)?.diameter;
        let acw = anticlockwise_orbit(s + d)?.diameter;
        println!("|beta - sigma| = {d:.0e}:  clockwise {cw:.3e}  anticlockwise {acw:.3e}");
    }
    println!("F'(0) at sigma = {:.15}", j_map_f_prime0(s));
    Ok(())
}
