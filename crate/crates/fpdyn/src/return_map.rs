//! Section-to-section maps of the clockwise cycle as projective maps.
//!
//! For `β ≤ 0` every orbit eventually follows the six-region cycle
//! `(1,2) → (2,2) → (2,3) → (3,3) → (3,1) → (1,1)`. The exit face of each
//! region is a section; flowing straight toward a fixed target from one
//! section to the next is a central projection, so each transition map is
//! projective in affine section coordinates. The maps are recovered from
//! the exact simulator by fitting on five points and verified on more.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{self, EventKind, FlowEngine, SimConfig};
use crate::game::{
    best_response_set, equilibrium_utilities, interior_equilibrium, make_shapley, utilities,
    BimatrixGame, Player, SimplexPoint, StateP, StateV,
};
use crate::geometry::{tie_segment_endpoint, Pair, RegionLabel};
use crate::linalg::{self, Matrix};
use crate::orbit::clockwise_orbit;
use crate::transition::{pattern_match, NamedPattern};

/// Homogeneous `(d+1) x (d+1)` matrix acting on `d`-dimensional points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectiveMap {
    pub h: Matrix,
}

impl ProjectiveMap {
    pub fn identity(d: usize) -> Self {
        Self { h: linalg::identity(d + 1) }
    }

    pub fn dim(&self) -> usize {
        self.h.len() - 1
    }

    /// Scale so the bottom-right entry is 1 (when it is nonzero).
    pub fn normalized(mut self) -> Self {
        let d = self.dim();
        let c = self.h[d][d];
        if c.abs() > 1e-300 {
            self.h.iter_mut().flatten().for_each(|x| *x /= c);
        }
        self
    }

    pub fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        if z.len() != d {
            return Err(Error::Structural("point dimension mismatch".into()));
        }
        let mut hz = z.to_vec();
        hz.push(1.0);
        let w = linalg::mat_vec(&self.h, &hz);
        if w[d].abs() < 1e-300 {
            return Err(Error::Domain("point maps to infinity".into()));
        }
        Ok(w[..d].iter().map(|x| x / w[d]).collect())
    }

    /// Last row as an affine function `z ↦ f·z + c`.
    pub fn denominator(&self) -> Vec<f64> {
        self.h[self.dim()].clone()
    }
}

/// `t2 ∘ t1`.
pub fn compose(t2: &ProjectiveMap, t1: &ProjectiveMap) -> ProjectiveMap {
    ProjectiveMap { h: linalg::mat_mul(&t2.h, &t1.h) }.normalized()
}

/// Homogeneous frame sending the basis to the first `d+1` points and
/// `(1,…,1)` to point `d+2`.
fn frame(points: &[Vec<f64>]) -> Result<Matrix> {
    let d = points[0].len();
    let hom: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(1.0);
            v
        })
        .collect();
    let cols = linalg::transpose(&hom[..=d].to_vec());
    let lambda = linalg::solve(&cols, &hom[d + 1])?;
    if lambda.iter().any(|l| l.abs() < 1e-12) {
        return Err(Error::Domain("points are not in general position".into()));
    }
    Ok(cols
        .iter()
        .map(|row| row.iter().zip(&lambda).map(|(x, l)| x * l).collect())
        .collect())
}

/// Exact projective map through `d + 2` point correspondences in general
/// position.
pub fn projective_from_points(src: &[Vec<f64>], dst: &[Vec<f64>]) -> Result<ProjectiveMap> {
    let d = src.first().map_or(0, |p| p.len());
    if d == 0 || src.len() != d + 2 || dst.len() != d + 2 {
        return Err(Error::Parameter("need d + 2 correspondences".into()));
    }
    let fs = frame(src)?;
    let fd = frame(dst)?;
    Ok(ProjectiveMap { h: linalg::mat_mul(&fd, &linalg::inverse(&fs)?) }.normalized())
}

/// Exit face of region `k` of the clockwise cycle into region `k + 1`.
///
/// Odd faces: A tied on `{i, i+1}` while B plays `i+1`; even faces: B tied
/// on `{i+1, i+2}` while A plays `i+1`, with `i = (k − 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SectionId(pub u8);

impl SectionId {
    pub fn all() -> [SectionId; 6] {
        [1, 2, 3, 4, 5, 6].map(SectionId)
    }

    pub fn next(self) -> SectionId {
        SectionId(self.0 % 6 + 1)
    }

    /// (tie player, tied pair, strategy of the other player)
    pub fn face(self) -> (Player, Pair, usize) {
        let i = ((self.0 - 1) / 2) as usize;
        if self.0 % 2 == 1 {
            (Player::A, Pair::new(i, (i + 1) % 3), (i + 1) % 3)
        } else {
            (Player::B, Pair::new((i + 1) % 3, (i + 2) % 3), (i + 1) % 3)
        }
    }

    /// Region entered through this face.
    pub fn region_after(self) -> RegionLabel {
        NamedPattern::Shapley.sequence()[self.0 as usize % 6]
    }

    /// Affine coordinates: the tied utility, then the opponent's first two
    /// utilities.
    pub fn coords(self, v: &StateV) -> [f64; 3] {
        let (p, pair, _) = self.face();
        let (x, y) = match p {
            Player::A => (&v.va, &v.vb),
            Player::B => (&v.vb, &v.va),
        };
        [0.5 * (x[pair.0] + x[pair.1]), y[0], y[1]]
    }

    /// Inverse of [`SectionId::coords`] for the Shapley game at `beta`.
    pub fn state(self, beta: f64, z: &[f64]) -> StateV {
        let (p, pair, _) = self.face();
        let (sx, sy) = match p {
            Player::A => (1.0 + beta, 1.0 - beta),
            Player::B => (1.0 - beta, 1.0 + beta),
        };
        let k = (0..3).find(|&k| !pair.contains(k)).unwrap();
        let mut x = vec![z[0]; 3];
        x[k] = sx - 2.0 * z[0];
        let y = vec![z[1], z[2], sy - z[1] - z[2]];
        match p {
            Player::A => StateV::new(x, y),
            Player::B => StateV::new(y, x),
        }
    }

    /// Random state on the face: the opponent's mixture on the tie segment
    /// from the equilibrium to its boundary end, the tie player's mixture
    /// uniform among those where the opponent's strategy is a clear best
    /// response.
    pub fn sample<R: Rng + ?Sized>(self, game: &BimatrixGame, rng: &mut R) -> Result<StateV> {
        let (p, pair, s) = self.face();
        let e = interior_equilibrium(game)?;
        let end = tie_segment_endpoint(game, p, pair)?;
        let u: f64 = rng.random_range(0.05..0.95);
        let e_opp = match p {
            Player::A => e.pb.as_slice().to_vec(),
            Player::B => e.pa.as_slice().to_vec(),
        };
        let on_tie: Vec<f64> = e_opp.iter().zip(&end).map(|(a, b)| a + u * (b - a)).collect();
        let on_tie = SimplexPoint::new(on_tie)?;
        for _ in 0..10_000 {
            let own = SimplexPoint::random(3, rng);
            let state = match p {
                Player::A => StateP::new(own, on_tie.clone()),
                Player::B => StateP::new(on_tie.clone(), own),
            };
            let v = utilities(game, &state)?;
            let br = best_response_set(p.other(), v.of(p.other()), 0.0);
            if br.indices == [s] && br.margin > 1e-3 {
                return Ok(v);
            }
        }
        Err(Error::Domain("could not sample the section face".into()))
    }
}

/// Flow one region from face `from` to the next face of the cycle.
pub fn hit_next(game: &BimatrixGame, from: SectionId, v: &StateV) -> Result<StateV> {
    let cfg = SimConfig { equilibrium_radius: 0.0, ..SimConfig::default() };
    let engine = FlowEngine::new(game, cfg)?;
    let (seg, kind) = engine
        .step(v)?
        .map_err(|k| Error::Domain(format!("no motion from the section ({k:?})")))?;
    let (p, pair, _) = from.next().face();
    let ok = matches!(kind, EventKind::SingleIndifference { player, pair: (a, b) }
        if player == p && Pair::new(a, b) == pair);
    if !ok || seg.motion.region() != Some(from.region_after()) {
        return Err(Error::Domain(format!("orbit from {from:?} did not reach the next face ({kind:?})")));
    }
    Ok(seg.end)
}

/// Fitted map from one face to the next, with its verification residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedMap {
    pub from: SectionId,
    pub to: SectionId,
    pub map: ProjectiveMap,
    pub residual: f64,
}

/// Fit the transition map between consecutive faces on five sampled
/// points and check it on twenty more.
pub fn projective_from_samples<R: Rng + ?Sized>(
    game: &BimatrixGame,
    from: SectionId,
    to: SectionId,
    rng: &mut R,
) -> Result<FittedMap> {
    let beta = game.beta().ok_or_else(|| Error::Parameter("section maps need a Shapley game".into()))?;
    if from == to {
        return Ok(FittedMap { from, to, map: ProjectiveMap::identity(3), residual: 0.0 });
    }
    if from.next() != to {
        return Err(Error::Parameter(format!("{to:?} does not follow {from:?} in the cycle")));
    }
    let pair = |rng: &mut R| -> Result<(Vec<f64>, Vec<f64>)> {
        let v = from.sample(game, rng)?;
        let w = hit_next(game, from, &v)?;
        Ok((from.coords(&v).to_vec(), to.coords(&w).to_vec()))
    };
    let mut last_err = None;
    for _ in 0..20 {
        let pts: Vec<_> = (0..5).map(|_| pair(rng)).collect::<Result<_>>()?;
        let (src, dst): (Vec<_>, Vec<_>) = pts.into_iter().unzip();
        let map = match projective_from_points(&src, &dst) {
            Ok(m) => m,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let mut residual: f64 = 0.0;
        for _ in 0..20 {
            let (x, y) = pair(rng)?;
            let fx = map.apply(&x)?;
            residual = fx.iter().zip(&y).fold(residual, |r, (a, b)| r.max((a - b).abs()));
        }
        if residual >= 1e-8 {
            return Err(Error::Model(format!(
                "section map {from:?} -> {to:?} is not projective (residual {residual:e})"
            )));
        }
        let _ = beta;
        return Ok(FittedMap { from, to, map, residual });
    }
    Err(last_err.unwrap_or_else(|| Error::Domain("sampling failed".into())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstReturn {
    pub beta: f64,
    /// Fitted maps S1→S2, …, S6→S1.
    pub pieces: Vec<FittedMap>,
    /// Their composition, the first-return map to S1.
    pub map: ProjectiveMap,
    /// Interior fixed point in S1 coordinates.
    pub fixed_point: [f64; 3],
    pub fixed_state: StateV,
    /// Largest fit residual over the six pieces.
    pub fit_residual: f64,
}

/// First-return map to face S1 for `β ≤ 0` and its interior fixed point.
pub fn first_return(beta: f64, seed: u64) -> Result<FirstReturn> {
    if !(beta > -1.0 && beta <= 0.0) {
        return Err(Error::Parameter(format!(
            "first-return maps are only built for beta in (-1, 0], got {beta}"
        )));
    }
    let game = make_shapley(beta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces = Vec::with_capacity(6);
    let mut map = ProjectiveMap::identity(3);
    for s in SectionId::all() {
        let f = projective_from_samples(&game, s, s.next(), &mut rng)?;
        map = compose(&f.map, &map);
        pieces.push(f);
    }
    let fit_residual = pieces.iter().map(|p| p.residual).fold(0.0, f64::max);
    let s1 = SectionId(1);
    let mut z = s1.coords(&s1.sample(&game, &mut rng)?).to_vec();
    for _ in 0..10_000 {
        let nz = map.apply(&z)?;
        let step = nz.iter().zip(&z).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        z = nz;
        if step < 1e-15 {
            break;
        }
    }
    let fixed_point = [z[0], z[1], z[2]];
    Ok(FirstReturn { beta, pieces, map, fixed_point, fixed_state: s1.state(beta, &z), fit_residual })
}

/// Clockwise orbit state on face S1.
pub fn orbit_point_on_s1(beta: f64) -> Result<StateV> {
    Ok(clockwise_orbit(beta)?.path[0].end.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointInfo {
    pub coords: [f64; 3],
    #[serde(rename = "vA")]
    pub va: Vec<f64>,
    #[serde(rename = "vB")]
    pub vb: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outlier {
    pub start: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractionReport {
    pub beta: f64,
    pub fixed_point: FixedPointInfo,
    pub converged_fraction: f64,
    pub outliers: Vec<Outlier>,
}

/// Simulate random starts and count those that end up on the clockwise
/// orbit: trailing itinerary the six-cycle, last crossing of S1 within
/// `1e-5` of the orbit point.
pub fn attraction_check(beta: f64, n_starts: usize, horizon: usize, seed: u64) -> Result<AttractionReport> {
    if !(beta > -1.0 && beta <= 0.0) {
        return Err(Error::Parameter(format!("attraction check needs beta in (-1, 0], got {beta}")));
    }
    let game = make_shapley(beta)?;
    let p = orbit_point_on_s1(beta)?;
    let s1 = SectionId(1);
    let cfg = SimConfig::default().with_max_events(horizon);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outliers = Vec::new();
    for idx in 0..n_starts {
        let init = StateP::random(3, &mut rng);
        let reason = match flow::simulate(&game, &init, &cfg) {
            Err(e) => Some(e.to_string()),
            Ok(t) => {
                let it = t.itinerary();
                let last_s1 = t
                    .segments
                    .iter()
                    .rev()
                    .find(|s| s.motion.region() == Some(RegionLabel::new(0, 1)) && s.duration_s < 1.0)
                    .map(|s| s.end.dist(&p));
                if !pattern_match(&it, NamedPattern::Shapley, 3) {
                    Some(format!("itinerary does not settle on the cycle ({:?})", t.last_event()))
                } else if !last_s1.is_some_and(|d| d < 1e-5) {
                    Some(format!("last crossing of S1 is {last_s1:?} away from the orbit"))
                } else {
                    None
                }
            }
        };
        if let Some(reason) = reason {
            outliers.push(Outlier { start: idx, reason });
        }
    }
    let converged_fraction = if n_starts == 0 { 1.0 } else { 1.0 - outliers.len() as f64 / n_starts as f64 };
    Ok(AttractionReport {
        beta,
        fixed_point: FixedPointInfo { coords: s1.coords(&p), va: p.va.clone(), vb: p.vb.clone() },
        converged_fraction,
        outliers,
    })
}

/// Equilibrium in S1 coordinates.
pub fn equilibrium_on_s1(beta: f64) -> Result<[f64; 3]> {
    Ok(SectionId(1).coords(&equilibrium_utilities(&make_shapley(beta)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_follow_the_cycle() {
        let cycle = NamedPattern::Shapley.sequence();
        for (k, s) in SectionId::all().iter().enumerate() {
            assert_eq!(s.region_after(), cycle[(k + 1) % 6], "{s:?}");
        }
    }

    #[test]
    fn coords_round_trip() {
        let g = make_shapley(-0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in SectionId::all() {
            let v = s.sample(&g, &mut rng).unwrap();
            assert!(s.state(-0.4, &s.coords(&v)).dist(&v) < 1e-14);
        }
    }

    #[test]
    fn identity_pair() {
        let g = make_shapley(-0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = projective_from_samples(&g, SectionId(2), SectionId(2), &mut rng).unwrap();
        assert_eq!(f.map, ProjectiveMap::identity(3));
        assert!(projective_from_samples(&g, SectionId(2), SectionId(4), &mut rng).is_err());
    }

    #[test]
    fn unsupported_beta() {
        assert!(matches!(first_return(0.3, 1), Err(Error::Parameter(_))));
    }
}
