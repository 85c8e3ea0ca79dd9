//! Indifference sets, codimension-two pieces and restricted 2x2 games.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{best_response_set, BestResponseSet, BimatrixGame, Player, StateV};
use crate::linalg;

/// Open region `S_ij`: A's strict best response `a`, B's strict best response `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RegionLabel {
    pub a: usize,
    pub b: usize,
}

impl RegionLabel {
    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a + 1, self.b + 1)
    }
}

/// Unordered pair of strategy indices, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pair(pub usize, pub usize);

impl Pair {
    pub fn new(i: usize, j: usize) -> Self {
        if i <= j {
            Pair(i, j)
        } else {
            Pair(j, i)
        }
    }
    pub fn contains(&self, k: usize) -> bool {
        self.0 == k || self.1 == k
    }
    pub fn as_array(&self) -> [usize; 2] {
        [self.0, self.1]
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0 + 1, self.1 + 1)
    }
}

/// A piece of the set where both players tie: the six spiralling pieces
/// `J1..J6` and the three crossing pieces `T1..T3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Leg {
    J(u8),
    T(u8),
}

/// `(B pair, A pair)` for J legs 1..6 in cyclic order.
pub const J_LEGS: [(Pair, Pair); 6] = [
    (Pair(0, 1), Pair(0, 2)),
    (Pair(0, 1), Pair(0, 1)),
    (Pair(1, 2), Pair(0, 1)),
    (Pair(1, 2), Pair(1, 2)),
    (Pair(0, 2), Pair(1, 2)),
    (Pair(0, 2), Pair(0, 2)),
];

/// `(B pair, A pair)` for T legs 1..3.
pub const T_LEGS: [(Pair, Pair); 3] = [
    (Pair(0, 1), Pair(1, 2)),
    (Pair(1, 2), Pair(0, 2)),
    (Pair(0, 2), Pair(0, 1)),
];

impl Leg {
    /// Leg containing the product piece `Z^B_{b_pair} x Z^A_{a_pair}`.
    pub fn of_pairs(a_pair: Pair, b_pair: Pair) -> Option<Leg> {
        if let Some(k) = J_LEGS.iter().position(|&(b, a)| a == a_pair && b == b_pair) {
            return Some(Leg::J(k as u8 + 1));
        }
        T_LEGS
            .iter()
            .position(|&(b, a)| a == a_pair && b == b_pair)
            .map(|k| Leg::T(k as u8 + 1))
    }

    /// `(A pair, B pair)` of this leg.
    pub fn pairs(&self) -> (Pair, Pair) {
        let (b, a) = match *self {
            Leg::J(k) => J_LEGS[k as usize - 1],
            Leg::T(k) => T_LEGS[k as usize - 1],
        };
        (a, b)
    }
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leg::J(k) => write!(f, "J{k}"),
            Leg::T(k) => write!(f, "T{k}"),
        }
    }
}

/// Which players tie, on what, when the state is not in an open region.
#[derive(Debug, Clone, PartialEq)]
pub struct TieReport {
    pub a: BestResponseSet,
    pub b: BestResponseSet,
    /// Set when both players tie on exactly two strategies.
    pub leg: Option<Leg>,
    /// Both players tie on all strategies.
    pub all_tie: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Location {
    Region(RegionLabel),
    Tie(TieReport),
}

pub fn region_of(state: &StateV, tol: f64) -> Location {
    let a = best_response_set(Player::A, &state.va, tol);
    let b = best_response_set(Player::B, &state.vb, tol);
    if a.is_strict() && b.is_strict() {
        return Location::Region(RegionLabel::new(a.indices[0], b.indices[0]));
    }
    let all_tie = a.indices.len() == state.va.len() && b.indices.len() == state.vb.len();
    let leg = if a.indices.len() == 2 && b.indices.len() == 2 {
        Leg::of_pairs(Pair::new(a.indices[0], a.indices[1]), Pair::new(b.indices[0], b.indices[1]))
    } else {
        None
    };
    Location::Tie(TieReport { a, b, leg, all_tie })
}

/// Leg on which the state lies, judged by the tie pattern of both players.
pub fn j_leg_of(state: &StateV, tol: f64) -> Option<Leg> {
    match region_of(state, tol) {
        Location::Tie(t) => t.leg,
        Location::Region(_) => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AnchorKind {
    /// Boundary end of the A-indifference segment `Z^A_{ij}` (lies in Σ_B).
    ZA,
    /// Boundary end of the B-indifference segment `Z^B_{kl}` (lies in Σ_A).
    ZB,
    /// Mixed strategy of A used while sliding with A tied on the pair.
    QA,
    /// Mixed strategy of B used while sliding with B tied on the pair.
    QB,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Anchor {
    pub kind: AnchorKind,
    pub pair: (usize, usize),
    /// Whose simplex the point lives in.
    pub simplex: Player,
    pub point: [f64; 3],
}

impl Anchor {
    pub fn name(&self) -> String {
        let k = match self.kind {
            AnchorKind::ZA => "ZA",
            AnchorKind::ZB => "ZB",
            AnchorKind::QA => "QA",
            AnchorKind::QB => "QB",
        };
        format!("{k}{}{}", self.pair.0 + 1, self.pair.1 + 1)
    }
}

fn rot(p: [f64; 3], k: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[(i + k) % 3] = p[i];
    }
    out
}

/// Closed-form endpoints of the indifference segments and the sliding
/// mixtures for the Shapley family, each with its two cyclic images.
///
/// `QA` points are omitted at `β = −1/2`, where they are undefined.
pub fn indifference_anchors(beta: f64) -> Result<Vec<Anchor>> {
    if !(beta > -1.0 && beta <= 1.0) {
        return Err(Error::Parameter(format!("beta = {beta} outside (-1, 1]")));
    }
    let za = [1.0 / (2.0 - beta), (1.0 - beta) / (2.0 - beta), 0.0];
    let zb = [(1.0 + beta) / (2.0 + beta), 1.0 / (2.0 + beta), 0.0];
    let qb = [beta / (1.0 + beta), 1.0 / (1.0 + beta), 0.0];
    let base: Vec<(AnchorKind, (usize, usize), Player, [f64; 3])> = {
        let mut v = vec![
            (AnchorKind::ZA, (0, 1), Player::B, za),
            (AnchorKind::ZB, (1, 2), Player::A, zb),
        ];
        let d = 1.0 + 2.0 * beta;
        if d.abs() > 1e-12 {
            v.push((AnchorKind::QA, (0, 1), Player::A, [beta / d, (1.0 + beta) / d, 0.0]));
        }
        v.push((AnchorKind::QB, (0, 2), Player::B, qb));
        v
    };
    let mut out = Vec::new();
    for (kind, pair, simplex, p) in base {
        for k in 0..3 {
            out.push(Anchor {
                kind,
                pair: ((pair.0 + k) % 3, (pair.1 + k) % 3),
                simplex,
                point: rot(p, k),
            });
        }
    }
    Ok(out)
}

/// Boundary end of the segment of the opponent's simplex on which `player`
/// is indifferent between the two strategies of `pair` and prefers them to
/// every other strategy. Works for any 3x3 game with an interior equilibrium.
pub fn tie_segment_endpoint(game: &BimatrixGame, player: Player, pair: Pair) -> Result<Vec<f64>> {
    let n = game.n();
    if n != 3 || pair.0 == pair.1 || pair.1 >= n {
        return Err(Error::Parameter("tie segments need a 3x3 game and a proper pair".into()));
    }
    // utility of strategy k at opponent mix p is <w_k, p>
    let w = |k: usize| -> Vec<f64> {
        match player {
            Player::A => game.a()[k].clone(),
            Player::B => game.b().iter().map(|r| r[k]).collect(),
        }
    };
    let (wi, wj) = (w(pair.0), w(pair.1));
    let other = (0..3).find(|k| !pair.contains(*k)).unwrap();
    let wo = w(other);
    for zero in 0..3 {
        let free: Vec<usize> = (0..3).filter(|&k| k != zero).collect();
        let m = vec![
            free.iter().map(|&k| wi[k] - wj[k]).collect::<Vec<_>>(),
            vec![1.0, 1.0],
        ];
        let Ok(x) = linalg::solve(&m, &[0.0, 1.0]) else { continue };
        if x.iter().any(|&t| t < -1e-12) {
            continue;
        }
        let mut p = vec![0.0; 3];
        p[free[0]] = x[0];
        p[free[1]] = x[1];
        let dot = |u: &[f64]| u.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>();
        if dot(&wi) >= dot(&wo) - 1e-12 {
            return Ok(p);
        }
    }
    Err(Error::Existence(format!("no boundary end for the {player} tie on {pair}")))
}

/// A's and B's payoffs restricted to A's tied pair (rows) and B's tied
/// pair (columns).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedGame2x2 {
    pub asub: [[f64; 2]; 2],
    pub bsub: [[f64; 2]; 2],
    pub pair_a: (usize, usize),
    pub pair_b: (usize, usize),
}

pub fn restricted_game(
    game: &BimatrixGame,
    pair_a: (usize, usize),
    pair_b: (usize, usize),
) -> Result<RestrictedGame2x2> {
    let n = game.n();
    for (i, j) in [pair_a, pair_b] {
        if i == j || i >= n || j >= n {
            return Err(Error::Parameter(format!("invalid index pair ({}, {})", i + 1, j + 1)));
        }
    }
    let ra = [pair_a.0, pair_a.1];
    let cb = [pair_b.0, pair_b.1];
    let sub = |m: &linalg::Matrix| {
        let mut s = [[0.0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                s[r][c] = m[ra[r]][cb[c]];
            }
        }
        s
    };
    Ok(RestrictedGame2x2 { asub: sub(game.a()), bsub: sub(game.b()), pair_a, pair_b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Codim2Case {
    /// No interior equilibrium: orbits pass straight through.
    Crossing,
    /// Interior equilibrium with orbits spiralling into it.
    SpiralStable,
    /// Interior equilibrium with two pure equilibria; non-unique continuation.
    Saddle,
}

/// Sign test on the payoff differences of a restricted game.
pub fn classify_codim2(rg: &RestrictedGame2x2) -> Result<Codim2Case> {
    let a = rg.asub;
    let b = rg.bsub;
    let da = [a[0][0] - a[1][0], a[0][1] - a[1][1]];
    let db = [b[0][0] - b[0][1], b[1][0] - b[1][1]];
    if da.iter().chain(&db).any(|&d| d.abs() <= 1e-12) {
        return Err(Error::Classification(format!(
            "payoff difference vanishes for A pair ({},{}) and B pair ({},{})",
            rg.pair_a.0 + 1,
            rg.pair_a.1 + 1,
            rg.pair_b.0 + 1,
            rg.pair_b.1 + 1
        )));
    }
    if da[0] * da[1] > 0.0 || db[0] * db[1] > 0.0 {
        return Ok(Codim2Case::Crossing);
    }
    Ok(if da[0] * db[0] > 0.0 { Codim2Case::Saddle } else { Codim2Case::SpiralStable })
}
