//! The orbit Γ that slides along the spiralling tie pieces for β > σ.

use fpdyn::flow::Motion;
use fpdyn::orbit::{j_fixed_point, j_map_f, j_orbit, j_orbit_simulated, j_ratio_closed_forms};

fn main() -> fpdyn::Result<()> {
    for beta in [0.62, 0.7, 0.8, 0.9, 1.0] {
        let j = j_orbit(beta)?;
        let (q, r) = j_ratio_closed_forms(beta);
        println!(
            "beta {beta:4.2}  X*={:.6}  ratios ({:.6}, {:.6})  closed forms ({q:.6}, {r:.6})",
            j.x_star, j.ratio_q, j.ratio_r
        );
    }

    // the gap recursion converges to X* from nearby starting gaps
    let beta = 0.8;
    let mut x = 0.01;
    for _ in 0..40 {
        x = j_map_f(beta, x);
    }
    println!("\nF iterated from 0.01 at beta 0.8: {x:.10} vs X* = {:.10}", j_fixed_point(beta));

    let segs = j_orbit_simulated(beta, j_fixed_point(beta), 3)?;
    for s in &segs {
        if let Motion::Slide { wa, wb, .. } = s.motion {
            println!("  {:<22} s={:.6} wA={wa:.4?} wB={wb:.4?}", s.motion.to_string(), s.duration_s);
        }
    }
    println!("closure error {:.2e}", segs[5].end.dist(&segs[0].start));
    Ok(())
}
