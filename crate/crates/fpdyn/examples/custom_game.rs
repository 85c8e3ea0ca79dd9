//! Any nonsingular bimatrix game can be loaded from JSON; the same
//! simulator runs on it.

use fpdyn::flow::{simulate, SimConfig};
use fpdyn::game::{check_transversality, interior_equilibrium, GameSpec, SimplexPoint, StateP};

fn main() -> fpdyn::Result<()> {
    // a rock-paper-scissors variant with unequal stakes
    let spec = GameSpec::from_json(r#"{"A":[[0,-1,2],[2,0,-1],[-1,3,0]],"B":[[0,2,-1],[-1,0,3],[2,-1,0]]}"#)?;
    let game = spec.build()?;

    let e = interior_equilibrium(&game)?;
    println!("interior equilibrium: pA={:.4?} pB={:.4?}", e.pa.as_slice(), e.pb.as_slice());

    let report = check_transversality(&game);
    println!("transversal: {} ({} violations)", report.ok, report.violations.len());

    let init = StateP::new(SimplexPoint::new(vec![0.7, 0.2, 0.1])?, SimplexPoint::new(vec![0.1, 0.1, 0.8])?);
    let t = simulate(&game, &init, &SimConfig::default().with_max_events(40))?;
    let regions: Vec<String> = t.regions().iter().map(|r| format!("({r})")).collect();
    println!("regions: {}", regions.join(" "));
    println!("stopped by {}", t.last_event());

    let shapley = GameSpec::from_json(r#"{"family":"shapley","beta":0.25}"#)?.build()?;
    println!("family spec gives beta = {:?}", shapley.beta());
    Ok(())
}
