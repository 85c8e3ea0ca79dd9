//! Linearized return maps of the symmetric orbits and their spectra.

use fpdyn::orbit::stability_matrix;

fn main() -> fpdyn::Result<()> {
    for beta in [0.0, 0.4, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0] {
        let r = stability_matrix(beta)?;
        let ev: Vec<String> = r
            .eigenvalues
            .iter()
            .map(|z| if z.im.abs() < 1e-12 { format!("{:+.4}", z.re) } else { format!("{:+.4}{:+.4}i", z.re, z.im) })
            .collect();
        println!("beta {beta:4.2}  {:<13}  [{}]  {:?}", r.kind.name(), ev.join(", "), r.classification);
    }

    let r = stability_matrix(1.0)?;
    println!("\nmatrix at beta = 1:");
    for row in &r.matrix {
        println!("  {:+.6?}", row);
    }
    Ok(())
}
