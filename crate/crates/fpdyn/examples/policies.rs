//! What the simulator does at a saddle-type tie under each continuation
//! policy.

use fpdyn::flow::{resolve, simulate, Codim2Policy, Resolution, SimConfig};
use fpdyn::game::{interior_equilibrium, make_shapley, Player, SimplexPoint, StateP};
use fpdyn::geometry::{tie_segment_endpoint, Pair};

fn midpoint(e: &SimplexPoint, r: &[f64]) -> fpdyn::Result<SimplexPoint> {
    SimplexPoint::new(e.as_slice().iter().zip(r).map(|(x, y)| 0.5 * (x + y)).collect())
}

fn main() -> fpdyn::Result<()> {
    let g = make_shapley(-0.5)?;
    let e = interior_equilibrium(&g)?;
    // A indifferent between 2 and 3, B between 1 and 2: a T corner, saddle type for β < 0
    let pb = midpoint(&e.pb, &tie_segment_endpoint(&g, Player::A, Pair(1, 2))?)?;
    let pa = midpoint(&e.pa, &tie_segment_endpoint(&g, Player::B, Pair(0, 1))?)?;
    let init = StateP::new(pa, pb);
    let v = fpdyn::game::utilities(&g, &init)?;
    if let Resolution::Branches(b) = resolve(&g, &v, 1e-9)? {
        let names: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        println!("vA={:.4?} vB={:.4?} continues as any of {}", v.va, v.vb, names.join(", "));
    }
    for policy in [Codim2Policy::Abort, Codim2Policy::FollowJ, Codim2Policy::Perturb(1e-6)] {
        let cfg = SimConfig { codim2_policy: policy, ..SimConfig::default() }.with_max_events(12);
        match simulate(&g, &init, &cfg) {
            Ok(t) => {
                let regions: Vec<String> = t.regions().iter().map(|r| format!("({r})")).collect();
                println!("{policy:?}: stopped by {} after [{}]", t.last_event(), regions.join(" "));
            }
            Err(e) => println!("{policy:?}: {e}"),
        }
    }
    Ok(())
}
