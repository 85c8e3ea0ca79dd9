//! Tabulate both symmetric orbits across β in parallel; rows stay in grid
//! order.

use fpdyn::io::{beta_grid, scan_csv, scan_row};
use fpdyn::orbit::OrbitKind;
use rayon::prelude::*;

fn main() {
    let rows: Vec<_> = beta_grid(-0.9, 1.0, 20)
        .par_iter()
        .flat_map_iter(|&b| [OrbitKind::Clockwise, OrbitKind::Anticlockwise].map(|k| scan_row(b, k)))
        .filter(|r| r.exists)
        .collect();
    print!("{}", scan_csv(&rows));
}
