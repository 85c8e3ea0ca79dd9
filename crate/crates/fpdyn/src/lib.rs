//! Exact simulation and bifurcation analysis of continuous-time fictitious
//! play (best-response dynamics) in the Shapley family of 3x3 games.
//!
//! ```text
//!     | 1 0 β |        | −β  1  0 |
//! A = | β 1 0 |    B = |  0 −β  1 |        −1 < β ≤ 1
//!     | 0 β 1 |        |  1  0 −β |
//! ```
//!
//! The flow is piecewise linear in utility coordinates, so trajectories are
//! computed segment by segment with closed-form event times. On top of the
//! simulator sit the closed-form symmetric periodic orbits, their return-map
//! linearizations, projective section maps, and the allowed-transition
//! diagrams between best-response regions.

pub mod cli;
pub mod error;
pub mod flow;
pub mod game;
pub mod invariants;
pub mod io;
pub mod geometry;
pub mod linalg;
pub mod orbit;
pub mod poly;
pub mod return_map;
pub mod transition;

pub use error::{Error, Result};
