//! Locate the parameter where the anticlockwise orbit loses stability
//! through an eigenvalue crossing −1.

use fpdyn::orbit::{find_tau, stability_matrix, tau_bracket};

fn main() -> fpdyn::Result<()> {
    let t0 = std::time::Instant::now();
    let tau = find_tau(tau_bracket(), 1e-10)?;
    println!("tau = {tau:.9} ({:?})", t0.elapsed());
    for b in [tau - 1e-3, tau + 1e-3] {
        let lam = stability_matrix(b)?.eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        println!("  beta {b:.6}: most negative eigenvalue {lam:.6}");
    }
    println!("no crossing in (0.92, 0.99): {}", find_tau((0.92, 0.99), 1e-6).unwrap_err());
    Ok(())
}
