//! For β ≤ 0 the first-return map to a face of the clockwise cycle is a
//! composition of six projective maps; its interior fixed point is the
//! Shapley orbit and every start is attracted to it.

use fpdyn::return_map::{attraction_check, equilibrium_on_s1, first_return, orbit_point_on_s1, SectionId};

fn main() -> fpdyn::Result<()> {
    let beta = -0.5;
    let fr = first_return(beta, 1)?;
    for p in &fr.pieces {
        println!("S{} -> S{}  fit residual {:.1e}", p.from.0, p.to.0, p.residual);
    }
    println!("composed map:");
    for row in &fr.map.h {
        println!("  {:+.6?}", row);
    }
    let orbit = SectionId(1).coords(&orbit_point_on_s1(beta)?);
    println!("fixed point {:.9?}\norbit point {:.9?}", fr.fixed_point, orbit);
    let e = equilibrium_on_s1(beta)?;
    println!("P(E) = {:.9?}, E = {e:.9?}", fr.map.apply(&e)?);

    let report = attraction_check(beta, 200, 300, 3)?;
    println!("attraction: {:.1}% of 200 starts converged", 100.0 * report.converged_fraction);
    Ok(())
}
