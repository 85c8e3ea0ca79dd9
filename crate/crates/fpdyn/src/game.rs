//! Bimatrix games, mixed-strategy states, utilities and best responses.
//!
//! Indices are 0-based throughout the API; anything printed for people
//! (CSV, JSON, `Display`) is 1-based.

use std::fmt;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// The golden mean `(√5 − 1)/2`.
pub fn sigma() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

/// A pair of nonsingular `n x n` payoff matrices. `a` pays the row player
/// A, `b` pays the column player B.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    a: Matrix,
    b: Matrix,
    a_inv: Matrix,
    b_inv: Matrix,
    /// 1.0 when the stored inverse is that of `M + J` rather than `M`.
    a_shift: f64,
    b_shift: f64,
    beta: Option<f64>,
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        let n = a.len();
        if n < 2 {
            return Err(Error::Structural("games need at least two strategies".into()));
        }
        if !linalg::is_square(&a) || !linalg::is_square(&b) || b.len() != n {
            return Err(Error::Structural("payoff matrices must both be n x n".into()));
        }
        if a.iter().chain(&b).flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("payoff entries must be finite".into()));
        }
        let a_inv = linalg::inverse(&a)
            .map_err(|_| Error::Structural("payoff matrix A is singular".into()))?;
        let b_inv = linalg::inverse(&b)
            .map_err(|_| Error::Structural("payoff matrix B is singular".into()))?;
        Ok(Self { a, b, a_inv, b_inv, a_shift: 0.0, b_shift: 0.0, beta: None })
    }

    /// Like [`BimatrixGame::new`] but a singular matrix `M` is accepted when
    /// `M + J` is invertible (`J` all ones). Since probabilities sum to one,
    /// `(M + J)·p = M·p + 1`, so utilities still determine the state.
    fn new_on_simplex(a: Matrix, b: Matrix) -> Result<Self> {
        let shifted_inverse = |m: &Matrix, name: &str| -> Result<(Matrix, f64)> {
            if let Ok(inv) = linalg::inverse(m) {
                return Ok((inv, 0.0));
            }
            let mj: Matrix = m.iter().map(|r| r.iter().map(|x| x + 1.0).collect()).collect();
            linalg::inverse(&mj)
                .map(|inv| (inv, 1.0))
                .map_err(|_| Error::Structural(format!("payoff matrix {name} is singular on the simplex")))
        };
        let (a_inv, a_shift) = shifted_inverse(&a, "A")?;
        let (b_inv, b_shift) = shifted_inverse(&b, "B")?;
        Ok(Self { a, b, a_inv, b_inv, a_shift, b_shift, beta: None })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
    pub fn a(&self) -> &Matrix {
        &self.a
    }
    pub fn b(&self) -> &Matrix {
        &self.b
    }
    /// The Shapley parameter, if the game was built by [`make_shapley`].
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }
    /// Column `j` of A: the target of `vA` while B plays `j`.
    pub fn a_col(&self, j: usize) -> Vec<f64> {
        self.a.iter().map(|r| r[j]).collect()
    }
    /// Row `i` of B: the target of `vB` while A plays `i`.
    pub fn b_row(&self, i: usize) -> Vec<f64> {
        self.b[i].clone()
    }
    pub(crate) fn a_inv(&self) -> &Matrix {
        &self.a_inv
    }
    pub(crate) fn b_inv(&self) -> &Matrix {
        &self.b_inv
    }
}

/// The one-parameter Shapley family, `β ∈ (−1, 1]`.
///
/// ```text
///     | 1 0 β |        | −β  1  0 |
/// A = | β 1 0 |    B = |  0 −β  1 |
///     | 0 β 1 |        |  1  0 −β |
/// ```
pub fn make_shapley(beta: f64) -> Result<BimatrixGame> {
    if !(beta > -1.0 && beta <= 1.0) {
        return Err(Error::Parameter(format!("beta = {beta} outside (-1, 1]")));
    }
    let a = vec![vec![1.0, 0.0, beta], vec![beta, 1.0, 0.0], vec![0.0, beta, 1.0]];
    let b = vec![vec![-beta, 1.0, 0.0], vec![0.0, -beta, 1.0], vec![1.0, 0.0, -beta]];
    // det B = 1 − β³ vanishes at β = 1; the family endpoint is still valid
    let mut g = BimatrixGame::new_on_simplex(a, b)?;
    g.beta = Some(beta);
    Ok(g)
}

/// A probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Accepts components `>= -1e-12` summing to 1 within `1e-10`, then
    /// clips and renormalizes.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parameter("empty probability vector".into()));
        }
        if components.iter().any(|&x| !(x >= -1e-12)) {
            return Err(Error::Domain(format!("negative component in {components:?}")));
        }
        let sum: f64 = components.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("components sum to {sum}, not 1")));
        }
        Ok(Self::renormalized(components))
    }

    fn renormalized(mut c: Vec<f64>) -> Self {
        c.iter_mut().for_each(|x| *x = x.max(0.0));
        let s: f64 = c.iter().sum();
        c.iter_mut().for_each(|x| *x /= s);
        SimplexPoint(c)
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        SimplexPoint((0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
    }

    pub fn barycenter(n: usize) -> Self {
        SimplexPoint(vec![1.0 / n as f64; n])
    }

    /// Uniform sample via normalized exponential variates.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        Self::renormalized(e)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Mixed-strategy state `(pA, pB)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateP {
    #[serde(rename = "pA")]
    pub pa: SimplexPoint,
    #[serde(rename = "pB")]
    pub pb: SimplexPoint,
}

impl StateP {
    pub fn new(pa: SimplexPoint, pb: SimplexPoint) -> Self {
        Self { pa, pb }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let pa = SimplexPoint::random(n, rng);
        let pb = SimplexPoint::random(n, rng);
        Self { pa, pb }
    }
}

/// Utility-space state: `vA = A·pB` (column) and `vB = pA·B` (row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateV {
    #[serde(rename = "vA")]
    pub va: Vec<f64>,
    #[serde(rename = "vB")]
    pub vb: Vec<f64>,
}

impl StateV {
    pub fn new(va: Vec<f64>, vb: Vec<f64>) -> Self {
        Self { va, vb }
    }

    pub fn of(&self, p: Player) -> &[f64] {
        match p {
            Player::A => &self.va,
            Player::B => &self.vb,
        }
    }

    /// Max-norm distance over both utility vectors.
    pub fn dist(&self, other: &StateV) -> f64 {
        self.va
            .iter()
            .zip(&other.va)
            .chain(self.vb.iter().zip(&other.vb))
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

pub fn utilities(game: &BimatrixGame, state: &StateP) -> Result<StateV> {
    let n = game.n();
    if state.pa.len() != n || state.pb.len() != n {
        return Err(Error::Structural(format!(
            "state dimensions ({}, {}) do not match game size {n}",
            state.pa.len(),
            state.pb.len()
        )));
    }
    Ok(StateV {
        va: linalg::mat_vec(game.a(), state.pb.as_slice()),
        vb: linalg::vec_mat(state.pa.as_slice(), game.b()),
    })
}

/// Alias of [`utilities`].
pub fn v_from_p(game: &BimatrixGame, state: &StateP) -> Result<StateV> {
    utilities(game, state)
}

/// Inverts [`utilities`]: `pB = A⁻¹ vA`, `pA = vB B⁻¹`.
pub fn p_from_v(game: &BimatrixGame, state: &StateV) -> Result<StateP> {
    let n = game.n();
    if state.va.len() != n || state.vb.len() != n {
        return Err(Error::Structural("utility vector length mismatch".into()));
    }
    let va: Vec<f64> = state.va.iter().map(|x| x + game.a_shift).collect();
    let vb: Vec<f64> = state.vb.iter().map(|x| x + game.b_shift).collect();
    let pb = linalg::mat_vec(game.a_inv(), &va);
    let pa = linalg::vec_mat(&vb, game.b_inv());
    let check = |p: Vec<f64>, who: &str| -> Result<SimplexPoint> {
        let sum: f64 = p.iter().sum();
        if p.iter().any(|&x| x < -1e-8) || (sum - 1.0).abs() > 1e-8 {
            return Err(Error::Domain(format!("{who} = {p:?} is not a probability vector")));
        }
        Ok(SimplexPoint::renormalized(p))
    };
    Ok(StateP { pa: check(pa, "pA")?, pb: check(pb, "pB")? })
}

/// Argmax set of one player's utility vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseSet {
    pub player: Player,
    pub indices: Vec<usize>,
    /// Gap between best and second-best utility; zero for ties.
    pub margin: f64,
}

impl BestResponseSet {
    pub fn is_strict(&self) -> bool {
        self.indices.len() == 1
    }
}

/// `{ i : v_i >= max(v) − tol }` together with the margin.
pub fn best_response_set(player: Player, v: &[f64], tol: f64) -> BestResponseSet {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let indices: Vec<usize> = (0..v.len()).filter(|&i| v[i] >= max - tol).collect();
    let margin = if indices.len() > 1 {
        0.0
    } else {
        let second = (0..v.len())
            .filter(|&i| i != indices[0])
            .map(|i| v[i])
            .fold(f64::NEG_INFINITY, f64::max);
        max - second
    };
    BestResponseSet { player, indices, margin }
}

/// The interior point where every pure strategy of each player earns the
/// same: `EB ∝ A⁻¹·1`, `EA ∝ 1·B⁻¹` (with `M + J` in place of a singular
/// Shapley matrix, which yields the same point).
pub fn interior_equilibrium(game: &BimatrixGame) -> Result<StateP> {
    let ones = vec![1.0; game.n()];
    let norm = |v: Vec<f64>| -> Result<SimplexPoint> {
        let s: f64 = v.iter().sum();
        if s == 0.0 || v.iter().any(|&x| x / s <= 0.0) {
            return Err(Error::NoInteriorEquilibrium { unnormalized: v });
        }
        Ok(SimplexPoint(v.iter().map(|x| x / s).collect()))
    };
    let eb = norm(linalg::mat_vec(game.a_inv(), &ones))?;
    let ea = norm(linalg::vec_mat(&ones, game.b_inv()))?;
    Ok(StateP { pa: ea, pb: eb })
}

/// Utilities at the interior equilibrium.
pub fn equilibrium_utilities(game: &BimatrixGame) -> Result<StateV> {
    utilities(game, &interior_equilibrium(game)?)
}

/// A pair of equal entries inside one column of A or one row of B.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalityViolation {
    /// `A` means a column of A, `B` a row of B.
    pub matrix: Player,
    pub line: usize,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransversalityReport {
    pub ok: bool,
    pub violations: Vec<TransversalityViolation>,
}

/// Sufficient condition for every indifference plane to be crossed
/// transversally: entries pairwise distinct within each column of A and
/// each row of B.
pub fn check_transversality(game: &BimatrixGame) -> TransversalityReport {
    let n = game.n();
    let mut violations = Vec::new();
    for line in 0..n {
        for i in 0..n {
            for k in i + 1..n {
                if (game.a[i][line] - game.a[k][line]).abs() <= 1e-12 {
                    violations.push(TransversalityViolation { matrix: Player::A, line, pair: (i, k) });
                }
            }
        }
    }
    for line in 0..n {
        for i in 0..n {
            for k in i + 1..n {
                if (game.b[line][i] - game.b[line][k]).abs() <= 1e-12 {
                    violations.push(TransversalityViolation { matrix: Player::B, line, pair: (i, k) });
                }
            }
        }
    }
    TransversalityReport { ok: violations.is_empty(), violations }
}

/// Max-norm of `A + σ(B − J)` for the Shapley game at `beta`; zero exactly
/// when the game is equivalent to a zero-sum game.
pub fn zero_sum_certificate(beta: f64) -> f64 {
    let s = sigma();
    let a = [[1.0, 0.0, beta], [beta, 1.0, 0.0], [0.0, beta, 1.0]];
    let b = [[-beta, 1.0, 0.0], [0.0, -beta, 1.0], [1.0, 0.0, -beta]];
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            r = r.max((a[i][j] + s * (b[i][j] - 1.0)).abs());
        }
    }
    r
}

/// Game description accepted on the command line and in files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameSpec {
    Family { family: String, beta: f64 },
    Matrices {
        #[serde(rename = "A")]
        a: Matrix,
        #[serde(rename = "B")]
        b: Matrix,
    },
}

impl GameSpec {
    pub fn build(&self) -> Result<BimatrixGame> {
        match self {
            GameSpec::Family { family, beta } if family == "shapley" => make_shapley(*beta),
            GameSpec::Family { family, .. } => {
                Err(Error::Parameter(format!("unknown game family {family:?}")))
            }
            GameSpec::Matrices { a, b } => BimatrixGame::new(a.clone(), b.clone()),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parameter(format!("bad game spec: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapley_entries() {
        let g = make_shapley(0.5).unwrap();
        assert_eq!(g.a()[0][2], 0.5);
        assert_eq!(g.b()[0][0], -0.5);
        assert_eq!(g.b()[0][1], 1.0);
        let g0 = make_shapley(0.0).unwrap();
        assert_eq!(g0.a(), &linalg::identity(3));
        assert_eq!(g0.b(), &vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]);
        let g1 = make_shapley(1.0).unwrap();
        for j in 0..3 {
            assert_eq!(g1.a_col(j).iter().sum::<f64>(), 2.0);
            assert_eq!(g1.b_row(j).iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn beta_range() {
        assert!(matches!(make_shapley(-1.0), Err(Error::Parameter(_))));
        assert!(matches!(make_shapley(1.2), Err(Error::Parameter(_))));
        assert!(matches!(make_shapley(f64::NAN), Err(Error::Parameter(_))));
    }

    #[test]
    fn utilities_examples() {
        let g = make_shapley(0.0).unwrap();
        let s = StateP::new(SimplexPoint::barycenter(3), SimplexPoint::vertex(3, 0));
        assert_eq!(utilities(&g, &s).unwrap().va, vec![1.0, 0.0, 0.0]);
        let g = make_shapley(1.0).unwrap();
        let s = StateP::new(SimplexPoint::vertex(3, 0), SimplexPoint::barycenter(3));
        assert_eq!(utilities(&g, &s).unwrap().vb, vec![-1.0, 1.0, 0.0]);
        let bad = StateP::new(SimplexPoint::barycenter(2), SimplexPoint::barycenter(3));
        assert!(matches!(utilities(&g, &bad), Err(Error::Structural(_))));
    }

    #[test]
    fn best_response_examples() {
        let r = best_response_set(Player::A, &[0.5, 0.3, 0.2], 1e-9);
        assert_eq!(r.indices, vec![0]);
        assert!((r.margin - 0.2).abs() < 1e-15);
        let r = best_response_set(Player::A, &[0.4, 0.4, 0.2], 1e-9);
        assert_eq!((r.indices, r.margin), (vec![0, 1], 0.0));
        let r = best_response_set(Player::A, &[0.4, 0.4 - 1e-12, 0.2], 1e-9);
        assert_eq!(r.indices, vec![0, 1]);
    }

    #[test]
    fn equilibrium_and_domain_errors() {
        let g = make_shapley(0.5).unwrap();
        let e = interior_equilibrium(&g).unwrap();
        for p in [&e.pa, &e.pb] {
            for x in p.as_slice() {
                assert!((x - 1.0 / 3.0).abs() < 1e-14);
            }
        }
        let v = equilibrium_utilities(&g).unwrap();
        assert!(v.va.iter().all(|x| (x - 0.5).abs() < 1e-14));
        // row 1 strictly dominates row 2 for A
        let dom = BimatrixGame::new(
            vec![vec![2.0, 3.0], vec![1.0, 0.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        match interior_equilibrium(&dom) {
            Err(Error::NoInteriorEquilibrium { unnormalized }) => {
                assert!((unnormalized[0] - 1.0).abs() < 1e-12);
                assert!((unnormalized[1] + 1.0 / 3.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let singular = BimatrixGame::new(
            vec![vec![2.0, 2.0], vec![1.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        );
        assert!(matches!(singular, Err(Error::Structural(_))));
    }

    #[test]
    fn p_from_v_domain() {
        let g = make_shapley(0.0).unwrap();
        let v = StateV::new(vec![2.0, 0.0, 0.0], vec![1.0 / 3.0; 3]);
        assert!(matches!(p_from_v(&g, &v), Err(Error::Domain(_))));
        let e = equilibrium_utilities(&g).unwrap();
        let p = p_from_v(&g, &e).unwrap();
        assert!(p.pa.as_slice().iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-14));
    }

    #[test]
    fn transversality() {
        assert!(check_transversality(&make_shapley(0.5).unwrap()).ok);
        let r0 = check_transversality(&make_shapley(0.0).unwrap());
        assert!(!r0.ok);
        assert!(r0
            .violations
            .iter()
            .any(|v| v.matrix == Player::A && v.line == 0 && v.pair == (1, 2)));
        let r1 = check_transversality(&make_shapley(1.0).unwrap());
        assert!(!r1.ok);
        assert!(r1.violations.iter().all(|v| v.matrix == Player::A));
        assert!(r1.violations.iter().any(|v| v.line == 0 && v.pair == (0, 1)));
    }

    #[test]
    fn zero_sum() {
        let s = sigma();
        assert!(zero_sum_certificate(s) <= 1e-12);
        let r0 = zero_sum_certificate(0.0);
        assert!(r0 > 0.3 && (r0 - s).abs() < 1e-15);
        for b in [s - 0.01, s + 0.01] {
            let r = zero_sum_certificate(b);
            assert!(r > 0.0 && r < 0.05);
        }
    }

    #[test]
    fn game_spec_json() {
        let g = GameSpec::from_json(r#"{"family":"shapley","beta":0.25}"#).unwrap().build().unwrap();
        assert_eq!(g.beta(), Some(0.25));
        let g = GameSpec::from_json(r#"{"A":[[1,0],[0,1]],"B":[[0,1],[1,0]]}"#).unwrap().build().unwrap();
        assert_eq!(g.n(), 2);
        assert!(GameSpec::from_json(r#"{"family":"rps","beta":0.1}"#).unwrap().build().is_err());
        assert!(GameSpec::from_json(r#"{"beta":0.1}"#).is_err());
    }
}
