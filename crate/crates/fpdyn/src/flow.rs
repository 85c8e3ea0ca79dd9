//! Exact event-driven integration of the best-response flow.
//!
//! The state lives in utility space. While A plays `a` and B plays `b`,
//! `vA` moves on a straight line toward column `b` of A and `vB` toward
//! row `a` of B, reaching them at `s = 1`:
//!
//! ```text
//! v(s) = (1 − s)·v + s·target,   ρ = −ln(1 − s)
//! ```
//!
//! Event times are solved in closed form; nothing is stepped. On a
//! spiralling codimension-two piece the flow continues by sliding along it,
//! both players mixing so that the other stays indifferent.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    best_response_set, equilibrium_utilities, p_from_v, utilities, BimatrixGame, Player, StateP,
    StateV,
};
use crate::geometry::{classify_codim2, restricted_game, Codim2Case, Leg, Pair, RegionLabel};

/// Rate comparisons closer than this count as equal.
const RATE_EPS: f64 = 1e-12;

/// How both players move during one segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Motion {
    /// A plays `a`, B plays `b`.
    Pure { a: usize, b: usize },
    /// Both players mix on a pair so that the opponent stays indifferent.
    Slide { a_pair: Pair, b_pair: Pair, wa: [f64; 2], wb: [f64; 2] },
}

impl Motion {
    pub fn region(&self) -> Option<RegionLabel> {
        match *self {
            Motion::Pure { a, b } => Some(RegionLabel::new(a, b)),
            Motion::Slide { .. } => None,
        }
    }

    /// Mixed strategies `(A, B)` driving this motion.
    pub fn mixes(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xa = vec![0.0; n];
        let mut xb = vec![0.0; n];
        match *self {
            Motion::Pure { a, b } => {
                xa[a] = 1.0;
                xb[b] = 1.0;
            }
            Motion::Slide { a_pair, b_pair, wa, wb } => {
                xa[a_pair.0] = wa[0];
                xa[a_pair.1] = wa[1];
                xb[b_pair.0] = wb[0];
                xb[b_pair.1] = wb[1];
            }
        }
        (xa, xb)
    }

    /// Utility-space target `(A·xB, xA·B)`.
    pub fn targets(&self, game: &BimatrixGame) -> StateV {
        let (xa, xb) = self.mixes(game.n());
        StateV::new(
            crate::linalg::mat_vec(game.a(), &xb),
            crate::linalg::vec_mat(&xa, game.b()),
        )
    }

    /// Strategies each player keeps at the top during the motion.
    fn active(&self, p: Player) -> Vec<usize> {
        match (self, p) {
            (Motion::Pure { a, .. }, Player::A) => vec![*a],
            (Motion::Pure { b, .. }, Player::B) => vec![*b],
            (Motion::Slide { a_pair, .. }, Player::A) => a_pair.as_array().to_vec(),
            (Motion::Slide { b_pair, .. }, Player::B) => b_pair.as_array().to_vec(),
        }
    }

    pub fn leg(&self) -> Option<Leg> {
        match *self {
            Motion::Slide { a_pair, b_pair, .. } => Leg::of_pairs(a_pair, b_pair),
            Motion::Pure { .. } => None,
        }
    }
}

impl fmt::Display for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Motion::Pure { a, b } => write!(f, "({},{})", a + 1, b + 1),
            Motion::Slide { a_pair, b_pair, .. } => write!(f, "slide[A{a_pair} B{b_pair}]"),
        }
    }
}

/// One straight piece of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub start: StateV,
    pub end: StateV,
    pub motion: Motion,
    pub duration_s: f64,
}

impl Segment {
    /// Column of A that `vA` moves toward (pure motion only).
    pub fn target_a_col(&self) -> Option<usize> {
        match self.motion {
            Motion::Pure { b, .. } => Some(b),
            _ => None,
        }
    }
    /// Row of B that `vB` moves toward (pure motion only).
    pub fn target_b_row(&self) -> Option<usize> {
        match self.motion {
            Motion::Pure { a, .. } => Some(a),
            _ => None,
        }
    }
    pub fn duration_rho(&self) -> f64 {
        s_to_rho(self.duration_s)
    }
    /// State at fraction `s` of the way from `start` toward the targets.
    pub fn at(&self, game: &BimatrixGame, s: f64) -> StateV {
        advance(&self.start, &self.motion.targets(game), s)
    }
}

/// A coordinate overtaking a player's current maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tie {
    pub player: Player,
    /// (currently maximal strategy, strategy that catches up)
    pub pair: (usize, usize),
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NextEvent {
    /// Segment length in s-time, in `(0, 1]`.
    pub s: f64,
    /// Ties within the simultaneity threshold of `s`; empty when none occurs.
    pub ties: Vec<Tie>,
}

impl NextEvent {
    pub fn truncated(&self) -> bool {
        self.ties.is_empty()
    }
}

/// `(1 − s)·v + s·target`.
pub fn advance(state: &StateV, targets: &StateV, s: f64) -> StateV {
    let lerp = |v: &[f64], t: &[f64]| -> Vec<f64> {
        v.iter().zip(t).map(|(x, y)| (1.0 - s) * x + s * y).collect()
    };
    StateV::new(lerp(&state.va, &targets.va), lerp(&state.vb, &targets.vb))
}

/// `ρ = −ln(1 − s)`; `s = 1` maps to infinity.
pub fn s_to_rho(s: f64) -> f64 {
    -(-s).ln_1p()
}

pub fn rho_to_s(rho: f64) -> f64 {
    -(-rho).exp_m1()
}

/// Time until the first coordinate catches up with a player's maximum.
///
/// The strategies the motion keeps on top must be best responses within
/// `tol`, otherwise the motion is inconsistent with the state.
pub fn time_to_next_event(
    game: &BimatrixGame,
    state: &StateV,
    motion: &Motion,
    tol: f64,
    simultaneity: f64,
) -> Result<NextEvent> {
    let targets = motion.targets(game);
    let mut ties = Vec::new();
    for player in [Player::A, Player::B] {
        let v = state.of(player);
        let t = targets.of(player);
        let active = motion.active(player);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if active.iter().any(|&k| v[k] < max - tol) {
            return Err(Error::Precondition(format!(
                "player {player} is not playing a best response in {v:?}"
            )));
        }
        let level = active.iter().map(|&k| v[k]).sum::<f64>() / active.len() as f64;
        let rate = active.iter().map(|&k| t[k]).sum::<f64>() / active.len() as f64;
        for c in (0..v.len()).filter(|c| !active.contains(c)) {
            let gap = level - v[c];
            let closing = t[c] - rate;
            if closing > RATE_EPS {
                if gap <= 0.0 {
                    return Err(Error::Precondition(format!(
                        "strategy {} of {player} already overtakes the maximum",
                        c + 1
                    )));
                }
                ties.push(Tie { player, pair: (active[0], c), s: gap / (gap + closing) });
            }
        }
    }
    let Some(s_min) = ties.iter().map(|t| t.s).reduce(f64::min) else {
        return Ok(NextEvent { s: 1.0, ties });
    };
    ties.retain(|t| t.s <= s_min + simultaneity);
    ties.sort_by(|x, y| x.s.total_cmp(&y.s));
    Ok(NextEvent { s: s_min, ties })
}

/// What happens at a state once the best responses are known.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    /// A unique forward motion.
    Move(Motion),
    /// Several admissible motions (saddle-type point); listed in order.
    Branches(Vec<Motion>),
}

fn rate_name(p: Player, pair: (usize, usize), line: usize) -> String {
    let other = match p {
        Player::A => "B",
        Player::B => "A",
    };
    format!(
        "Z^{p}_{{{},{}}} is not crossed transversally while {other} plays {}",
        pair.0 + 1,
        pair.1 + 1,
        line + 1
    )
}

/// Decide the forward motion from a state, using the payoffs restricted to
/// the tied strategies: a strict pure equilibrium of the restricted rate
/// game, or else the unique spiralling pair on which both players can slide.
pub fn resolve(game: &BimatrixGame, state: &StateV, tol: f64) -> Result<Resolution> {
    let sa = best_response_set(Player::A, &state.va, tol).indices;
    let sb = best_response_set(Player::B, &state.vb, tol).indices;
    let a = game.a();
    let b = game.b();
    let mut pure = Vec::new();
    let mut degenerate: Option<String> = None;
    for &i in &sa {
        for &j in &sb {
            let a_ok = sa.iter().filter(|&&k| k != i).all(|&k| {
                let d = a[i][j] - a[k][j];
                if d.abs() <= RATE_EPS {
                    degenerate.get_or_insert_with(|| rate_name(Player::A, (i, k), j));
                }
                d > RATE_EPS
            });
            let b_ok = sb.iter().filter(|&&k| k != j).all(|&k| {
                let d = b[i][j] - b[i][k];
                if d.abs() <= RATE_EPS {
                    degenerate.get_or_insert_with(|| rate_name(Player::B, (j, k), i));
                }
                d > RATE_EPS
            });
            if a_ok && b_ok {
                pure.push(Motion::Pure { a: i, b: j });
            }
        }
    }
    match pure.len() {
        1 => return Ok(Resolution::Move(pure.pop().unwrap())),
        0 => {}
        _ => return Ok(Resolution::Branches(pure)),
    }
    let mut slides = Vec::new();
    for (x, &a1) in sa.iter().enumerate() {
        for &a2 in &sa[x + 1..] {
            for (y, &b1) in sb.iter().enumerate() {
                for &b2 in &sb[y + 1..] {
                    if let Some(m) = slide_candidate(game, &sa, &sb, Pair(a1, a2), Pair(b1, b2)) {
                        slides.push(m);
                    }
                }
            }
        }
    }
    match slides.len() {
        1 => Ok(Resolution::Move(slides.pop().unwrap())),
        _ => {
            if let Some(msg) = degenerate {
                return Err(Error::Ambiguity(msg));
            }
            if slides.is_empty() {
                Err(Error::NonUnique(format!(
                    "no admissible motion with A tied on {sa:?} and B tied on {sb:?}"
                )))
            } else {
                Ok(Resolution::Branches(slides))
            }
        }
    }
}

fn slide_candidate(
    game: &BimatrixGame,
    sa: &[usize],
    sb: &[usize],
    pa: Pair,
    pb: Pair,
) -> Option<Motion> {
    let rg = restricted_game(game, (pa.0, pa.1), (pb.0, pb.1)).ok()?;
    if classify_codim2(&rg).ok()? != Codim2Case::SpiralStable {
        return None;
    }
    let (am, bm) = (rg.asub, rg.bsub);
    // B's weight on pb.0 making A indifferent between pa.0 and pa.1
    let wb0 = (am[1][1] - am[0][1]) / ((am[0][0] - am[1][0]) + (am[1][1] - am[0][1]));
    let wa0 = (bm[1][1] - bm[1][0]) / ((bm[0][0] - bm[0][1]) + (bm[1][1] - bm[1][0]));
    if !(wa0 > 0.0 && wa0 < 1.0 && wb0 > 0.0 && wb0 < 1.0) {
        return None;
    }
    let motion = Motion::Slide { a_pair: pa, b_pair: pb, wa: [wa0, 1.0 - wa0], wb: [wb0, 1.0 - wb0] };
    let t = motion.targets(game);
    let a_rate = t.va[pa.0];
    let b_rate = t.vb[pb.0];
    let dominant = sa.iter().filter(|&&k| !pa.contains(k)).all(|&k| a_rate - t.va[k] > RATE_EPS)
        && sb.iter().filter(|&&k| !pb.contains(k)).all(|&k| b_rate - t.vb[k] > RATE_EPS);
    dominant.then_some(motion)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Codim2Policy {
    /// Stop at any codimension-two point that is not a plain crossing.
    Abort,
    /// Slide along spiralling pieces, stop at saddle-type points.
    FollowJ,
    /// Like `FollowJ`, but at saddle-type points take the first admissible
    /// branch for at most `ε` of s-time and carry on.
    Perturb(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeScale {
    S,
    Rho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub tol_tie: f64,
    pub simultaneity: f64,
    pub max_events: usize,
    /// Total time budget in the unit given by `time_scale`.
    pub max_time: f64,
    pub time_scale: TimeScale,
    pub codim2_policy: Codim2Policy,
    /// Stop once within this max-norm utility distance of the equilibrium.
    pub equilibrium_radius: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            tol_tie: 1e-9,
            simultaneity: 1e-10,
            max_events: 1000,
            max_time: f64::INFINITY,
            time_scale: TimeScale::Rho,
            codim2_policy: Codim2Policy::FollowJ,
            equilibrium_radius: 1e-7,
        }
    }
}

impl SimConfig {
    pub fn with_max_events(mut self, n: usize) -> Self {
        self.max_events = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !pos(self.tol_tie) || !pos(self.simultaneity) || !(self.equilibrium_radius >= 0.0) {
            return Err(Error::Parameter("tolerances must be positive".into()));
        }
        if !(self.max_time > 0.0) {
            return Err(Error::Parameter("max_time must be positive".into()));
        }
        if let Codim2Policy::Perturb(eps) = self.codim2_policy {
            if !(eps > self.tol_tie) {
                return Err(Error::Parameter("perturbation must exceed the tie tolerance".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TruncationReason {
    /// The motion reaches its target without any tie (s = 1).
    NoTie,
    MaxEvents,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EventKind {
    Start,
    SingleIndifference { player: Player, pair: (usize, usize) },
    Codim2Hit { leg: Option<Leg>, case: Option<Codim2Case> },
    EquilibriumReached,
    DiscontinuityHit,
    Truncated(TruncationReason),
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::Start => f.write_str("start"),
            EventKind::SingleIndifference { player, pair } => {
                write!(f, "indifference_{player}_{}_{}", pair.0 + 1, pair.1 + 1)
            }
            EventKind::Codim2Hit { leg, case } => {
                let leg = leg.map_or("none".to_string(), |l| l.to_string());
                let case = match case {
                    Some(Codim2Case::Crossing) => "crossing",
                    Some(Codim2Case::SpiralStable) => "spiral",
                    Some(Codim2Case::Saddle) => "saddle",
                    None => "degenerate",
                };
                write!(f, "codim2_{leg}_{case}")
            }
            EventKind::EquilibriumReached => f.write_str("equilibrium"),
            EventKind::DiscontinuityHit => f.write_str("discontinuity"),
            EventKind::Truncated(r) => write!(
                f,
                "truncated_{}",
                match r {
                    TruncationReason::NoTie => "no_tie",
                    TruncationReason::MaxEvents => "max_events",
                    TruncationReason::MaxTime => "max_time",
                }
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub state: StateV,
    pub s_cum: f64,
    pub rho_cum: f64,
    /// Index of the segment that starts here, if any.
    pub next_segment: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub init: StateP,
    pub segments: Vec<Segment>,
    pub events: Vec<Event>,
}

/// One itinerary step: a region visited, or a slide along a tie piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItineraryEntry {
    pub motion: Motion,
    pub duration_s: f64,
    pub duration_rho: f64,
}

impl ItineraryEntry {
    pub fn region(&self) -> Option<RegionLabel> {
        self.motion.region()
    }
}

impl Trajectory {
    pub fn final_state(&self) -> &StateV {
        &self.events.last().expect("trajectory has a start event").state
    }

    pub fn last_event(&self) -> EventKind {
        self.events.last().expect("trajectory has a start event").kind
    }

    pub fn itinerary(&self) -> Vec<ItineraryEntry> {
        self.segments
            .iter()
            .map(|s| ItineraryEntry {
                motion: s.motion.clone(),
                duration_s: s.duration_s,
                duration_rho: s.duration_rho(),
            })
            .collect()
    }

    /// Regions visited, slides skipped.
    pub fn regions(&self) -> Vec<RegionLabel> {
        self.segments.iter().filter_map(|s| s.motion.region()).collect()
    }
}

/// Incremental simulator; [`simulate`] drives it to completion.
pub struct FlowEngine<'g> {
    game: &'g BimatrixGame,
    config: SimConfig,
    v_eq: Option<StateV>,
}

impl<'g> FlowEngine<'g> {
    pub fn new(game: &'g BimatrixGame, config: SimConfig) -> Result<Self> {
        config.validate()?;
        let v_eq = equilibrium_utilities(game).ok();
        Ok(Self { game, config, v_eq })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    fn near_equilibrium(&self, v: &StateV) -> bool {
        self.v_eq.as_ref().is_some_and(|e| v.dist(e) <= self.config.equilibrium_radius)
    }

    /// The next segment from `state` and the event that ends it, or `None`
    /// when the state is terminal (equilibrium or an unresolved branch
    /// point). Returns the terminal event kind in that case.
    pub fn step(&self, state: &StateV) -> Result<std::result::Result<(Segment, EventKind), EventKind>> {
        if self.near_equilibrium(state) {
            return Ok(Err(EventKind::EquilibriumReached));
        }
        let (motion, forced) = match resolve(self.game, state, self.config.tol_tie)? {
            Resolution::Move(m) => {
                if matches!(m, Motion::Slide { .. }) && self.config.codim2_policy == Codim2Policy::Abort {
                    return Ok(Err(EventKind::Codim2Hit {
                        leg: m.leg(),
                        case: Some(Codim2Case::SpiralStable),
                    }));
                }
                (m, None)
            }
            Resolution::Branches(mut bs) => match self.config.codim2_policy {
                Codim2Policy::Perturb(eps) => (bs.swap_remove(0), Some(eps)),
                _ => return Ok(Err(EventKind::DiscontinuityHit)),
            },
        };
        let start = match &motion {
            Motion::Slide { a_pair, b_pair, .. } => project_onto(state, *a_pair, *b_pair),
            Motion::Pure { .. } => state.clone(),
        };
        let next = time_to_next_event(
            self.game,
            &start,
            &motion,
            self.config.tol_tie,
            self.config.simultaneity,
        )?;
        let targets = motion.targets(self.game);
        if let Some(eps) = forced {
            let s = next.s.min(eps);
            let end = advance(&start, &targets, s);
            let seg = Segment { start, end, motion, duration_s: s };
            return Ok(Ok((seg, EventKind::DiscontinuityHit)));
        }
        let end = advance(&start, &targets, next.s);
        let kind = self.classify_event(&next, &end);
        Ok(Ok((Segment { start, end, motion, duration_s: next.s }, kind)))
    }

    fn classify_event(&self, next: &NextEvent, end: &StateV) -> EventKind {
        if next.truncated() {
            return EventKind::Truncated(TruncationReason::NoTie);
        }
        let a = next.ties.iter().find(|t| t.player == Player::A);
        let b = next.ties.iter().find(|t| t.player == Player::B);
        match (a, b) {
            (Some(_), Some(_)) => {
                let tol = self.config.tol_tie;
                let sa = best_response_set(Player::A, &end.va, tol).indices;
                let sb = best_response_set(Player::B, &end.vb, tol).indices;
                if sa.len() == 2 && sb.len() == 2 {
                    let leg = Leg::of_pairs(Pair::new(sa[0], sa[1]), Pair::new(sb[0], sb[1]));
                    let case = restricted_game(self.game, (sa[0], sa[1]), (sb[0], sb[1]))
                        .ok()
                        .and_then(|rg| classify_codim2(&rg).ok());
                    EventKind::Codim2Hit { leg, case }
                } else {
                    EventKind::Codim2Hit { leg: None, case: None }
                }
            }
            _ => {
                let t = next.ties[0];
                EventKind::SingleIndifference { player: t.player, pair: t.pair }
            }
        }
    }

    /// Run from a utility state.
    pub fn run(&self, init: StateP, v0: StateV) -> Result<Trajectory> {
        let cfg = &self.config;
        let mut segments = Vec::new();
        let mut events =
            vec![Event { kind: EventKind::Start, state: v0.clone(), s_cum: 0.0, rho_cum: 0.0, next_segment: None }];
        let mut v = v0;
        let (mut s_cum, mut rho_cum) = (0.0, 0.0);
        loop {
            if segments.len() >= cfg.max_events {
                break;
            }
            let (mut seg, mut kind) = match self.step(&v)? {
                Ok(x) => x,
                Err(terminal) => {
                    events.push(Event { kind: terminal, state: v.clone(), s_cum, rho_cum, next_segment: None });
                    break;
                }
            };
            let used = match cfg.time_scale {
                TimeScale::S => s_cum,
                TimeScale::Rho => rho_cum,
            };
            let remaining = cfg.max_time - used;
            let seg_len = match cfg.time_scale {
                TimeScale::S => seg.duration_s,
                TimeScale::Rho => seg.duration_rho(),
            };
            let mut out_of_time = false;
            if seg_len > remaining {
                let s = match cfg.time_scale {
                    TimeScale::S => remaining,
                    TimeScale::Rho => rho_to_s(remaining),
                };
                seg.end = seg.at(self.game, s);
                seg.duration_s = s;
                kind = EventKind::Truncated(TruncationReason::MaxTime);
                out_of_time = true;
            }
            s_cum += seg.duration_s;
            rho_cum += seg.duration_rho();
            v = seg.end.clone();
            events.last_mut().unwrap().next_segment = Some(segments.len());
            segments.push(seg);
            events.push(Event { kind, state: v.clone(), s_cum, rho_cum, next_segment: None });
            if out_of_time || kind == EventKind::Truncated(TruncationReason::NoTie) {
                break;
            }
        }
        if segments.len() >= cfg.max_events
            && !matches!(events.last().unwrap().kind, EventKind::Truncated(_))
        {
            events.push(Event {
                kind: EventKind::Truncated(TruncationReason::MaxEvents),
                state: v,
                s_cum,
                rho_cum,
                next_segment: None,
            });
        }
        Ok(Trajectory { init, segments, events })
    }
}

/// Snap the tied coordinates of each player to their common mean.
fn project_onto(state: &StateV, a_pair: Pair, b_pair: Pair) -> StateV {
    let mut s = state.clone();
    let ma = 0.5 * (s.va[a_pair.0] + s.va[a_pair.1]);
    s.va[a_pair.0] = ma;
    s.va[a_pair.1] = ma;
    let mb = 0.5 * (s.vb[b_pair.0] + s.vb[b_pair.1]);
    s.vb[b_pair.0] = mb;
    s.vb[b_pair.1] = mb;
    s
}

/// Simulate from a mixed-strategy state.
pub fn simulate(game: &BimatrixGame, init: &StateP, config: &SimConfig) -> Result<Trajectory> {
    let v0 = utilities(game, init)?;
    FlowEngine::new(game, config.clone())?.run(init.clone(), v0)
}

/// Simulate from a utility state (which must come from a simplex state).
pub fn simulate_v(game: &BimatrixGame, v0: &StateV, config: &SimConfig) -> Result<Trajectory> {
    let init = p_from_v(game, v0)?;
    FlowEngine::new(game, config.clone())?.run(init, v0.clone())
}

/// One sliding segment along a spiralling tie piece of the Shapley family.
///
/// Legs come in two kinds, related to the canonical ones below by the
/// cyclic relabelling of strategies:
///
/// * A tied on {2,3}, B tied on {1,3}: A mixes rows 2, 3 with weights
///   `((1+β)/(2+β), 1/(2+β))`, B mixes columns 1, 3 with `(1/(1+β), β/(1+β))`.
///   Ends when A is indifferent between all three.
/// * A tied on {1,3}, B tied on {1,3}: A mixes rows 1, 3 with
///   `((1+β)/(1+2β), β/(1+2β))`, B mixes columns 1, 3 with
///   `((1−β)/(2−β), 1/(2−β))`. Ends when B is indifferent between all three.
///
/// A state where one player ties on all three strategies starts the leg on
/// which the other player's tied pair continues.
pub fn j_flow_step(beta: f64, state: &StateV) -> Result<Segment> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Parameter(format!("sliding flow needs beta in (0, 1], got {beta}")));
    }
    let game = crate::game::make_shapley(beta)?;
    let tol = SimConfig::default().tol_tie;
    let sa = best_response_set(Player::A, &state.va, tol).indices;
    let sb = best_response_set(Player::B, &state.vb, tol).indices;
    if sa.len() == 3 && sb.len() == 3 {
        return Err(Error::NonUnique("the flow is not unique at the interior equilibrium".into()));
    }
    let pair_of = |s: &[usize]| (s.len() == 2).then(|| Pair::new(s[0], s[1]));
    // rotation k maps canonical index i to (i + k) mod 3
    let (first_half, k) = match (pair_of(&sa), pair_of(&sb)) {
        (Some(pa), None) if sb.len() == 3 => (true, rotation_to(Pair(1, 2), pa)),
        (None, Some(pb)) if sa.len() == 3 => (false, rotation_to(Pair(0, 2), pb)),
        (Some(pa), Some(pb)) => match Leg::of_pairs(pa, pb) {
            Some(Leg::J(j)) if j % 2 == 1 => (true, rotation_to(Pair(0, 2), pb)),
            Some(Leg::J(_)) => (false, rotation_to(Pair(0, 2), pb)),
            _ => return Err(Error::Domain("state is not on a spiralling tie piece".into())),
        },
        _ => return Err(Error::Domain("state is not on a spiralling tie piece".into())),
    };
    let b = beta;
    let (ca, wa, cb, wb) = if first_half {
        ([1, 2], [(1.0 + b) / (2.0 + b), 1.0 / (2.0 + b)], [0, 2], [1.0 / (1.0 + b), b / (1.0 + b)])
    } else {
        ([0, 2], [(1.0 + b) / (1.0 + 2.0 * b), b / (1.0 + 2.0 * b)], [0, 2], [(1.0 - b) / (2.0 - b), 1.0 / (2.0 - b)])
    };
    let r = |i: usize| (i + k) % 3;
    let a_pair = Pair::new(r(ca[0]), r(ca[1]));
    let b_pair = Pair::new(r(cb[0]), r(cb[1]));
    let wa = if a_pair.0 == r(ca[0]) { wa } else { [wa[1], wa[0]] };
    let wb = if b_pair.0 == r(cb[0]) { wb } else { [wb[1], wb[0]] };
    let motion = Motion::Slide { a_pair, b_pair, wa, wb };
    let start = project_onto(state, a_pair, b_pair);
    let targets = motion.targets(&game);
    // the sliding player's pair meets its remaining strategy
    let (v, t, pair) = if first_half { (&start.va, &targets.va, a_pair) } else { (&start.vb, &targets.vb, b_pair) };
    let other = (0..3).find(|&i| !pair.contains(i)).unwrap();
    let gap = v[pair.0] - v[other];
    let closing = (t[other] - t[pair.0]).max(0.0);
    if !(gap > 0.0) || closing == 0.0 {
        return Err(Error::Domain("state is not on a spiralling tie piece".into()));
    }
    let s = gap / (gap + closing);
    let end = advance(&start, &targets, s);
    Ok(Segment { start, end, motion, duration_s: s })
}

/// Cyclic shift taking pair `from` to pair `to`.
fn rotation_to(from: Pair, to: Pair) -> usize {
    (0..3).find(|&k| Pair::new((from.0 + k) % 3, (from.1 + k) % 3) == to).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{make_shapley, SimplexPoint};

    #[test]
    fn time_conversion() {
        assert_eq!(s_to_rho(0.0), 0.0);
        assert!((s_to_rho(0.31767) - 0.38225).abs() < 1e-5);
        assert!((rho_to_s(2f64.ln()) - 0.5).abs() < 1e-15);
        assert!(s_to_rho(1.0).is_infinite());
    }

    #[test]
    fn advance_endpoints() {
        let g = make_shapley(0.3).unwrap();
        let v = StateV::new(vec![0.5, 0.5, 0.3], vec![0.2, 0.3, 0.2]);
        let m = Motion::Pure { a: 1, b: 2 };
        let t = m.targets(&g);
        assert_eq!(advance(&v, &t, 0.0), v);
        assert_eq!(advance(&v, &t, 1.0), t);
        assert_eq!(t.va, g.a_col(2));
        assert_eq!(t.vb, g.b_row(1));
    }

    #[test]
    fn linear_tie_time() {
        // A plays 1 while coordinate 2 closes the gap g at unit rate
        let g = make_shapley(0.0).unwrap();
        let gap = 0.1;
        let v = StateV::new(vec![0.5, 0.5 - gap, 0.0], vec![0.0, 1.0, 0.0]);
        let m = Motion::Pure { a: 0, b: 1 };
        let e = time_to_next_event(&g, &v, &m, 1e-9, 1e-10).unwrap();
        // vA → (0,1,0): coordinate gap at target is 1
        assert!((e.s - gap / (gap + 1.0)).abs() < 1e-15);
        assert_eq!(e.ties[0].player, Player::A);
    }

    #[test]
    fn precondition() {
        let g = make_shapley(0.3).unwrap();
        let v = StateV::new(vec![0.2, 0.5, 0.6], vec![0.3, 0.2, 0.2]);
        let m = Motion::Pure { a: 0, b: 0 };
        assert!(matches!(time_to_next_event(&g, &v, &m, 1e-9, 1e-10), Err(Error::Precondition(_))));
    }

    #[test]
    fn start_at_equilibrium() {
        let g = make_shapley(0.4).unwrap();
        let e = crate::game::interior_equilibrium(&g).unwrap();
        let t = simulate(&g, &e, &SimConfig::default()).unwrap();
        assert!(t.segments.is_empty());
        assert_eq!(t.events.len(), 2);
        assert_eq!(t.last_event(), EventKind::EquilibriumReached);
    }

    #[test]
    fn beta_zero_non_transversal_is_ambiguous() {
        // A tied on {2,3} while B plays 1: both coordinates fall at the same rate
        let g = make_shapley(0.0).unwrap();
        let init = StateP::new(
            SimplexPoint::new(vec![0.2, 0.2, 0.6]).unwrap(),
            SimplexPoint::new(vec![0.2, 0.4, 0.4]).unwrap(),
        );
        let v = utilities(&g, &init).unwrap();
        assert_eq!(v.va[1], v.va[2]);
        match simulate(&g, &init, &SimConfig::default()) {
            Err(Error::Ambiguity(msg)) => assert!(msg.contains("Z^A_{2,3}"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn saddle_point_branches() {
        // tie on the T piece (A {2,3}, B {1,2}) at β < 0 has two exits
        let g = make_shapley(-0.5).unwrap();
        let v = StateV::new(vec![0.2, 0.4, 0.4], vec![0.3, 0.3, -0.1]);
        match resolve(&g, &v, 1e-9).unwrap() {
            Resolution::Branches(b) => assert_eq!(b.len(), 2),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn sliding_weights_on_j() {
        let beta = 0.8;
        let g = make_shapley(beta).unwrap();
        // A tied on {2,3}, B tied on all three: first half of a J visit
        let (x, c) = (0.05, (1.0 + beta) / 3.0);
        let v = StateV::new(vec![c - 2.0 * x / 3.0, c + x / 3.0, c + x / 3.0], vec![(1.0 - beta) / 3.0; 3]);
        let seg = j_flow_step(beta, &v).unwrap();
        let Motion::Slide { a_pair, b_pair, wa, wb } = seg.motion else { panic!() };
        assert_eq!((a_pair, b_pair), (Pair(1, 2), Pair(0, 2)));
        // B mixes columns 1 and 3 with weights 1/(1+β), β/(1+β)
        assert!((wb[0] - 1.0 / (1.0 + beta)).abs() < 1e-14);
        // A mixes rows 2 and 3 with weights (1+β)/(2+β), 1/(2+β)
        assert!((wa[0] - (1.0 + beta) / (2.0 + beta)).abs() < 1e-14);
        let t = seg.motion.targets(&g);
        let expect_b = [1.0 / (2.0 + beta), -beta * (1.0 + beta) / (2.0 + beta), 1.0 / (2.0 + beta)];
        for (p, q) in t.vb.iter().zip(expect_b) {
            assert!((p - q).abs() < 1e-14);
        }
        // ends with A indifferent between all three
        let e = &seg.end.va;
        assert!((e[0] - e[1]).abs() < 1e-12 && (e[1] - e[2]).abs() < 1e-12);
    }

    #[test]
    fn j_flow_errors() {
        let e = StateV::new(vec![0.6; 3], vec![0.2 / 3.0; 3]);
        assert!(matches!(j_flow_step(0.8, &e), Err(Error::NonUnique(_))));
        let off = StateV::new(vec![0.9, 0.5, 0.4], vec![0.2, 0.0, 0.0]);
        assert!(matches!(j_flow_step(0.8, &off), Err(Error::Domain(_))));
        assert!(matches!(j_flow_step(-0.2, &off), Err(Error::Parameter(_))));
    }
}
