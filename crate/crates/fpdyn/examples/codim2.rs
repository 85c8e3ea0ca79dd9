//! Where both players tie, the restricted 2x2 game decides whether orbits
//! cross, spiral in and slide, or split.

use fpdyn::flow::resolve;
use fpdyn::game::{make_shapley, StateV};
use fpdyn::geometry::{classify_codim2, restricted_game};
use fpdyn::invariants::brute_force_codim2;

fn main() -> fpdyn::Result<()> {
    for beta in [-0.5, 0.5] {
        let g = make_shapley(beta)?;
        println!("beta {beta}");
        for pa in [(0, 1), (0, 2), (1, 2)] {
            for pb in [(0, 1), (0, 2), (1, 2)] {
                let rg = restricted_game(&g, pa, pb)?;
                let c = classify_codim2(&rg)?;
                println!(
                    "  A{{{},{}}} B{{{},{}}}  {c:?}  (integrated: {:?})",
                    pa.0 + 1,
                    pa.1 + 1,
                    pb.0 + 1,
                    pb.1 + 1,
                    brute_force_codim2(&rg)
                );
            }
        }
    }

    // on a non-transversal line at β = 0 the flow is not determined
    let g0 = make_shapley(0.0)?;
    let w = StateV::new(vec![0.2, 0.4, 0.4], vec![0.2, 0.4, 0.4]);
    println!("beta 0: {}", resolve(&g0, &w, 1e-9).unwrap_err());
    Ok(())
}
