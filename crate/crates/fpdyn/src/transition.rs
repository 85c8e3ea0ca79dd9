//! Allowed region-to-region transitions per β regime, itinerary checks and
//! the two named strategy patterns.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::flow::{ItineraryEntry, Motion};
use crate::game::make_shapley;
use crate::geometry::{classify_codim2, restricted_game, Codim2Case, Leg, Pair, RegionLabel, J_LEGS, T_LEGS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BetaNegative,
    BetaZero,
    BetaPositive,
}

impl Regime {
    pub fn of(beta: f64) -> Regime {
        if beta < 0.0 {
            Regime::BetaNegative
        } else if beta == 0.0 {
            Regime::BetaZero
        } else {
            Regime::BetaPositive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerType {
    /// Orbits spiral into the corner and slide along it.
    Spiral,
    /// Orbits cross the corner diagonally.
    Transversal,
    /// Two continuations; orbits generically avoid it.
    Saddle,
    /// Some payoff difference vanishes.
    Degenerate,
}

impl From<Codim2Case> for CornerType {
    fn from(c: Codim2Case) -> Self {
        match c {
            Codim2Case::Crossing => CornerType::Transversal,
            Codim2Case::SpiralStable => CornerType::Spiral,
            Codim2Case::Saddle => CornerType::Saddle,
        }
    }
}

/// Ordered region pair, written `"i,j" -> "k,l"` with 1-based strategies.
pub type Arc = (RegionLabel, RegionLabel);

const fn r(a: usize, b: usize) -> RegionLabel {
    RegionLabel { a, b }
}

// 0-based (A strategy, B strategy) labels.
const ARCS_NEGATIVE: [Arc; 18] = [
    // the cycle
    (r(0, 1), r(1, 1)),
    (r(1, 1), r(1, 2)),
    (r(1, 2), r(2, 2)),
    (r(2, 2), r(2, 0)),
    (r(2, 0), r(0, 0)),
    (r(0, 0), r(0, 1)),
    // entries from the three off-cycle squares
    (r(0, 2), r(1, 2)),
    (r(0, 2), r(2, 2)),
    (r(0, 2), r(0, 0)),
    (r(0, 2), r(0, 1)),
    (r(1, 0), r(2, 0)),
    (r(1, 0), r(0, 0)),
    (r(1, 0), r(1, 1)),
    (r(1, 0), r(1, 2)),
    (r(2, 1), r(0, 1)),
    (r(2, 1), r(1, 1)),
    (r(2, 1), r(2, 2)),
    (r(2, 1), r(2, 0)),
];

const ARCS_ZERO: [Arc; 12] = [
    (r(0, 1), r(1, 1)),
    (r(1, 1), r(1, 2)),
    (r(1, 2), r(2, 2)),
    (r(2, 2), r(2, 0)),
    (r(2, 0), r(0, 0)),
    (r(0, 0), r(0, 1)),
    (r(0, 2), r(2, 2)),
    (r(0, 2), r(0, 1)),
    (r(1, 0), r(0, 0)),
    (r(1, 0), r(1, 2)),
    (r(2, 1), r(1, 1)),
    (r(2, 1), r(2, 0)),
];

const ARCS_POSITIVE: [Arc; 18] = [
    (r(0, 1), r(1, 1)),
    (r(1, 1), r(1, 2)),
    (r(1, 2), r(2, 2)),
    (r(2, 2), r(2, 0)),
    (r(2, 0), r(0, 0)),
    (r(0, 0), r(0, 1)),
    // anticlockwise cycle
    (r(0, 2), r(0, 1)),
    (r(0, 1), r(2, 1)),
    (r(2, 1), r(2, 0)),
    (r(2, 0), r(1, 0)),
    (r(1, 0), r(1, 2)),
    (r(1, 2), r(0, 2)),
    // shortcuts between the two cycles
    (r(1, 0), r(0, 0)),
    (r(2, 1), r(1, 1)),
    (r(0, 2), r(2, 2)),
    (r(0, 0), r(0, 2)),
    (r(1, 1), r(1, 0)),
    (r(2, 2), r(2, 1)),
];

/// A faces where A's tied strategies earn the same against B's strategy at
/// β = 1, so A cannot leave the square horizontally there.
const DEGENERATE_AT_ONE: [Arc; 3] = [(r(1, 0), r(0, 0)), (r(2, 1), r(1, 1)), (r(0, 2), r(2, 2))];

/// Faces between adjacent squares that are not crossed transversally at
/// β = 0 (unordered, stored low first).
const AMBIGUOUS_AT_ZERO: [Arc; 6] = [
    (r(1, 0), r(2, 0)),
    (r(0, 1), r(2, 1)),
    (r(0, 2), r(1, 2)),
    (r(0, 0), r(0, 2)),
    (r(1, 0), r(1, 1)),
    (r(2, 1), r(2, 2)),
];

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDiagram {
    pub beta: f64,
    pub regime: Regime,
    pub arcs: BTreeSet<Arc>,
    pub corner_types: Vec<(Leg, CornerType)>,
    pub ambiguous_faces: Vec<Arc>,
    pub degenerate_arcs: Vec<Arc>,
}

fn label(r: &RegionLabel) -> String {
    r.to_string()
}

impl Serialize for TransitionDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let pairs = |v: &mut dyn Iterator<Item = &Arc>| -> Vec<[String; 2]> {
            v.map(|(x, y)| [label(x), label(y)]).collect()
        };
        let corners: std::collections::BTreeMap<String, CornerType> = self
            .corner_types
            .iter()
            .map(|(leg, t)| (leg_name(*leg), *t))
            .collect();
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("regime", &self.regime)?;
        m.serialize_entry("beta", &self.beta)?;
        m.serialize_entry("arcs", &pairs(&mut self.arcs.iter()))?;
        m.serialize_entry("corner_types", &corners)?;
        m.serialize_entry("ambiguous_faces", &pairs(&mut self.ambiguous_faces.iter()))?;
        m.serialize_entry("degenerate_arcs", &pairs(&mut self.degenerate_arcs.iter()))?;
        m.end()
    }
}

pub fn leg_name(leg: Leg) -> String {
    match leg {
        Leg::J(k) => format!("J{k}"),
        Leg::T(k) => format!("T{k}"),
    }
}

/// The nine corner pieces with their type at `beta`.
pub fn corner_types(beta: f64) -> Vec<(Leg, CornerType)> {
    let Ok(game) = make_shapley(beta) else { return Vec::new() };
    let legs = J_LEGS
        .iter()
        .enumerate()
        .map(|(k, p)| (Leg::J(k as u8 + 1), *p))
        .chain(T_LEGS.iter().enumerate().map(|(k, p)| (Leg::T(k as u8 + 1), *p)));
    legs.map(|(leg, (pb, pa))| {
        let t = restricted_game(&game, (pa.0, pa.1), (pb.0, pb.1))
            .and_then(|rg| classify_codim2(&rg))
            .map_or(CornerType::Degenerate, CornerType::from);
        (leg, t)
    })
    .collect()
}

/// Diagram for the regime containing `beta`; β = 1 stays in the positive
/// regime with its degenerate exits flagged.
pub fn diagram_for(beta: f64) -> TransitionDiagram {
    let regime = Regime::of(beta);
    let mut arcs: BTreeSet<Arc> = match regime {
        Regime::BetaNegative => ARCS_NEGATIVE.iter().copied().collect(),
        Regime::BetaZero => ARCS_ZERO.iter().copied().collect(),
        Regime::BetaPositive => ARCS_POSITIVE.iter().copied().collect(),
    };
    let mut degenerate_arcs = Vec::new();
    if beta == 1.0 {
        for a in DEGENERATE_AT_ONE {
            arcs.remove(&a);
            degenerate_arcs.push(a);
        }
    }
    let ambiguous_faces = if regime == Regime::BetaZero { AMBIGUOUS_AT_ZERO.to_vec() } else { Vec::new() };
    TransitionDiagram { beta, regime, arcs, corner_types: corner_types(beta), ambiguous_faces, degenerate_arcs }
}

fn corner_pairs(leg: Leg) -> (Pair, Pair) {
    // legs store (B pair, A pair)
    let (pb, pa) = leg.pairs();
    (pa, pb)
}

fn touches(leg: Leg, region: RegionLabel) -> bool {
    let (pa, pb) = corner_pairs(leg);
    pa.contains(region.a) && pb.contains(region.b)
}

impl TransitionDiagram {
    pub fn corner_type(&self, leg: Leg) -> Option<CornerType> {
        self.corner_types.iter().find(|(l, _)| *l == leg).map(|(_, t)| *t)
    }

    pub fn has_arc(&self, from: RegionLabel, to: RegionLabel) -> bool {
        self.arcs.contains(&(from, to))
    }

    /// Whether `from → to` is allowed: an arc, or a diagonal step through a
    /// corner that orbits can cross.
    pub fn allows(&self, from: RegionLabel, to: RegionLabel) -> bool {
        if self.has_arc(from, to) {
            return true;
        }
        if from.a == to.a || from.b == to.b {
            return false;
        }
        Leg::of_pairs(Pair::new(from.a, to.a), Pair::new(from.b, to.b))
            .and_then(|leg| self.corner_type(leg))
            .is_some_and(|t| t != CornerType::Saddle)
    }

    fn step_ok(&self, prev: &Motion, next: &Motion) -> bool {
        match (prev.region(), next.region(), prev.leg(), next.leg()) {
            // a repeated region is one motion split in two, e.g. after a perturbed branch
            (Some(x), Some(y), _, _) => x == y || self.allows(x, y),
            (Some(x), None, _, Some(leg)) | (None, Some(x), Some(leg), _) => {
                touches(leg, x) && self.corner_type(leg) != Some(CornerType::Saddle)
            }
            (None, None, Some(l1), Some(l2)) => {
                let (a1, b1) = corner_pairs(l1);
                let (a2, b2) = corner_pairs(l2);
                a1 == a2 || b1 == b2
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Index of the entry that cannot follow its predecessor.
    pub index: usize,
    pub from: String,
    pub to: String,
}

/// First step of the itinerary the diagram does not allow.
pub fn validate_itinerary(itinerary: &[ItineraryEntry], diagram: &TransitionDiagram) -> Result<(), Violation> {
    for (i, w) in itinerary.windows(2).enumerate() {
        if !diagram.step_ok(&w[0].motion, &w[1].motion) {
            return Err(Violation { index: i + 1, from: w[0].motion.to_string(), to: w[1].motion.to_string() });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NamedPattern {
    Shapley,
    AntiShapley,
}

impl NamedPattern {
    /// Six regions in visiting order, 0-based.
    pub fn sequence(self) -> [RegionLabel; 6] {
        match self {
            NamedPattern::Shapley => [r(0, 1), r(1, 1), r(1, 2), r(2, 2), r(2, 0), r(0, 0)],
            NamedPattern::AntiShapley => [r(0, 2), r(0, 1), r(2, 1), r(2, 0), r(1, 0), r(1, 2)],
        }
    }
}

/// True when the last `6 · min_repeats` itinerary entries are pure and
/// follow the pattern, starting anywhere in it.
pub fn pattern_match(itinerary: &[ItineraryEntry], pattern: NamedPattern, min_repeats: usize) -> bool {
    let len = 6 * min_repeats.max(1);
    if itinerary.len() < len {
        return false;
    }
    let tail = &itinerary[itinerary.len() - len..];
    let Some(regions) = tail.iter().map(|e| e.region()).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let seq = pattern.sequence();
    let Some(offset) = seq.iter().position(|x| *x == regions[0]) else {
        return false;
    };
    regions.iter().enumerate().all(|(k, x)| *x == seq[(offset + k) % 6])
}
