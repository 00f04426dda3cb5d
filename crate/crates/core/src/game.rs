//! Matrix-game fundamentals: payoffs, the minmax value, best responses and
//! the structure of the minmax strategy set.
//!
//! Throughout, the optimizer picks rows and the learner picks columns. For a
//! zero-sum game the learner's matrix is `B = −A`, so the learner's best
//! responses are the columns minimizing `xᵀ·A·e_j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpSolution, Relation};
use crate::matrix::{Matrix, SimplexVector};

/// Default tolerance for best-response membership and minmax feasibility.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Largest column count accepted by the exact support enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Slack granted to LP constraints that pin a payoff to the game value.
const VALUE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Optimizer,
    Learner,
}

/// Optimizer payoff `a` and learner payoff `b`, both `n × m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    a: Matrix,
    b: Matrix,
    zero_sum: bool,
}

impl BimatrixGame {
    /// Zero-sum game; `b` is materialized as `−a` entrywise.
    pub fn zero_sum(a: Matrix) -> Self {
        let b = a.neg();
        BimatrixGame {
            a,
            b,
            zero_sum: true,
        }
    }

    /// General-sum game. The zero-sum flag is set only when `b = −a` holds exactly.
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if a.rows() != b.rows() {
            return Err(Error::dim("learner matrix rows", a.rows(), b.rows()));
        }
        if a.cols() != b.cols() {
            return Err(Error::dim("learner matrix cols", a.cols(), b.cols()));
        }
        let zero_sum = (0..a.rows()).all(|i| (0..a.cols()).all(|j| a[(i, j)] + b[(i, j)] == 0.0));
        Ok(BimatrixGame { a, b, zero_sum })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    /// Number of optimizer actions.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Number of learner actions.
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub(crate) fn check_optimizer_dim(&self, x: &SimplexVector) -> Result<()> {
        if x.dim() != self.n() {
            return Err(Error::dim("optimizer strategy (n)", self.n(), x.dim()));
        }
        Ok(())
    }

    pub(crate) fn check_learner_dim(&self, y: &SimplexVector) -> Result<()> {
        if y.dim() != self.m() {
            return Err(Error::dim("learner strategy (m)", self.m(), y.dim()));
        }
        Ok(())
    }
}

/// `xᵀ·A·y` for the optimizer or `xᵀ·B·y` for the learner.
pub fn expected_payoff(x: &SimplexVector, game: &BimatrixGame, y: &SimplexVector, side: Side) -> Result<f64> {
    game.check_optimizer_dim(x)?;
    game.check_learner_dim(y)?;
    let m = match side {
        Side::Optimizer => game.a(),
        Side::Learner => game.b(),
    };
    Ok(m.left_mul(x.weights()).iter().zip(y.weights()).map(|(p, q)| p * q).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameValueResult {
    pub value: f64,
    pub optimizer_strategy: SimplexVector,
    pub learner_strategy: SimplexVector,
    pub certificate_gap: f64,
}

/// Minmax value of the zero-sum game with optimizer matrix `a`, solved as a
/// pair of linear programs (one per player).
pub fn game_value(a: &Matrix) -> Result<GameValueResult> {
    let (n, m) = (a.rows(), a.cols());
    let shift = a.min_entry();

    // Row player: max v s.t. Σ_i x_i (A_ij − shift) ≥ v, Σ x = 1.
    let mut row = LinearProgram::maximize(unit(n + 1, n));
    for j in 0..m {
        let mut c: Vec<f64> = (0..n).map(|i| a[(i, j)] - shift).collect();
        c.push(-1.0);
        row.constrain(c, Relation::Ge, 0.0);
    }
    row.constrain(simplex_row(n, 1), Relation::Eq, 1.0);
    let row_sol = row.solve()?;

    // Column player: min w s.t. Σ_j (A_ij − shift) y_j ≤ w, Σ y = 1.
    let mut col = LinearProgram::maximize({
        let mut c = vec![0.0; m + 1];
        c[m] = -1.0;
        c
    });
    for i in 0..n {
        let mut c: Vec<f64> = (0..m).map(|j| a[(i, j)] - shift).collect();
        c.push(-1.0);
        col.constrain(c, Relation::Le, 0.0);
    }
    col.constrain(simplex_row(m, 1), Relation::Eq, 1.0);
    let col_sol = col.solve()?;

    let x = SimplexVector::normalized(row_sol.x[..n].to_vec())?;
    let y = SimplexVector::normalized(col_sol.x[..m].to_vec())?;
    let lo = min_of(&a.left_mul(x.weights()));
    let hi = max_of(&a.right_mul(y.weights()));
    let value = row_sol.x[n] + shift;
    Ok(GameValueResult {
        value,
        optimizer_strategy: x,
        learner_strategy: y,
        certificate_gap: (hi - lo).max(0.0),
    })
}

/// Learner best responses to `x`: `{ j : xᵀ·B·e_j ≥ max_k xᵀ·B·e_k − tol }`.
pub fn best_response_set(x: &SimplexVector, game: &BimatrixGame, tol: f64) -> Result<Vec<usize>> {
    game.check_optimizer_dim(x)?;
    if !(tol >= 0.0) {
        return Err(Error::Invalid(format!("tolerance must be non-negative, got {tol}")));
    }
    let scores = game.b().left_mul(x.weights());
    let best = max_of(&scores);
    Ok((0..scores.len()).filter(|&j| scores[j] >= best - tol).collect())
}

/// A minmax strategy with the fewest best responses, and that count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinBestResponse {
    pub strategy: SimplexVector,
    pub k: usize,
}

pub fn min_br_minmax(a: &Matrix, tol: f64) -> Result<MinBestResponse> {
    min_br_minmax_capped(a, tol, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates candidate best-response supports `S` by increasing size and
/// accepts the first one for which some minmax strategy keeps every column
/// outside `S` strictly (by more than `tol`) above the value.
pub fn min_br_minmax_capped(a: &Matrix, tol: f64, cap: usize) -> Result<MinBestResponse> {
    let m = a.cols();
    check_cap(m, cap)?;
    let gv = game_value(a)?;
    let headroom = a.max_entry() - a.min_entry() + 1.0;
    for size in 1..m {
        for support in Combinations::new(m, size) {
            if let Some(x) = margin_lp(a, gv.value, &support, headroom, tol)? {
                return Ok(MinBestResponse { strategy: x, k: size });
            }
        }
    }
    Ok(MinBestResponse {
        strategy: gv.optimizer_strategy,
        k: m,
    })
}

fn margin_lp(a: &Matrix, value: f64, support: &[usize], headroom: f64, tol: f64) -> Result<Option<SimplexVector>> {
    let (n, m) = (a.rows(), a.cols());
    let mut inside = vec![false; m];
    support.iter().for_each(|&j| inside[j] = true);
    let build = |slack: f64| {
        let mut lp = LinearProgram::maximize(unit(n + 1, n));
        for j in 0..m {
            // Columns outside the support must clear the value by the margin.
            let mut c: Vec<f64> = (0..n).map(|i| a[(i, j)]).collect();
            c.push(if inside[j] { 0.0 } else { -1.0 });
            lp.constrain(c, Relation::Ge, value - slack);
        }
        lp.constrain(simplex_row(n, 1), Relation::Eq, 1.0);
        lp.constrain(unit(n + 1, n), Relation::Le, headroom);
        lp
    };
    match solve_pinned(build)? {
        Some(sol) if sol.objective > tol => Ok(Some(SimplexVector::normalized(sol.x[..n].to_vec())?)),
        _ => Ok(None),
    }
}

/// Solves an LP whose rows pin payoffs to the (numerically computed) game
/// value, first exactly and, if that is infeasible, with [`VALUE_SLACK`].
fn solve_pinned(build: impl Fn(f64) -> LinearProgram) -> Result<Option<LpSolution>> {
    for slack in [0.0, VALUE_SLACK] {
        match build(slack).solve() {
            Ok(sol) => return Ok(Some(sol)),
            Err(Error::Lp("is infeasible")) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Evidence that a game satisfies the no-pure assumption: a minmax `x` whose
/// best responses `i1`, `i2` differ on the supported row `k_action`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoPureWitness {
    pub x: SimplexVector,
    pub i1: usize,
    pub i2: usize,
    pub k_action: usize,
}

/// Searches for a [`NoPureWitness`]. For every column pair `(i1, i2)` and row
/// `k` on which they differ by more than `tol`, an LP maximizes `x_k` over
/// minmax strategies that keep both columns at the value; a positive optimum
/// is a witness.
pub fn check_assumption_no_pure(a: &Matrix, tol: f64) -> Result<Option<NoPureWitness>> {
    check_assumption_no_pure_capped(a, tol, DEFAULT_ENUMERATION_CAP)
}

pub fn check_assumption_no_pure_capped(a: &Matrix, tol: f64, cap: usize) -> Result<Option<NoPureWitness>> {
    let (n, m) = (a.rows(), a.cols());
    check_cap(m, cap)?;
    let value = game_value(a)?.value;
    for i1 in 0..m {
        for i2 in i1 + 1..m {
            for k in 0..n {
                if (a[(k, i1)] - a[(k, i2)]).abs() <= tol {
                    continue;
                }
                let build = |slack: f64| {
                    let mut lp = LinearProgram::maximize(unit(n, k));
                    for j in 0..m {
                        let c: Vec<f64> = (0..n).map(|i| a[(i, j)]).collect();
                        if j == i1 || j == i2 {
                            lp.constrain(c.clone(), Relation::Le, value + slack);
                        }
                        lp.constrain(c, Relation::Ge, value - slack);
                    }
                    lp.constrain(simplex_row(n, 0), Relation::Eq, 1.0);
                    lp
                };
                if let Some(sol) = solve_pinned(build)? {
                    if sol.objective > tol {
                        return Ok(Some(NoPureWitness {
                            x: SimplexVector::normalized(sol.x)?,
                            i1,
                            i2,
                            k_action: k,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Whether `x` guarantees at least `value − tol` against every column.
pub fn is_minmax(a: &Matrix, x: &SimplexVector, value: f64, tol: f64) -> bool {
    min_of(&a.left_mul(x.weights())) >= value - tol
}

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::ResourceCap(format!(
            "instance too large for exact min-BR search ({m} columns, cap {cap})"
        )));
    }
    Ok(())
}

/// Row of ones over the first `n` variables followed by `extra` zeros.
fn simplex_row(n: usize, extra: usize) -> Vec<f64> {
    let mut r = vec![1.0; n];
    r.resize(n + extra, 0.0);
    r
}

fn unit(len: usize, at: usize) -> Vec<f64> {
    let mut r = vec![0.0; len];
    r[at] = 1.0;
    r
}

pub(crate) fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

pub(crate) fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp() -> Matrix {
        Matrix::from_rows([[1.0, -1.0], [-1.0, 1.0]]).unwrap()
    }

    fn sv(w: &[f64]) -> SimplexVector {
        SimplexVector::new(w.to_vec()).unwrap()
    }

    /// Closed form for 2×2 games without a saddle point.
    fn two_by_two_value(a: &Matrix) -> (f64, f64) {
        let (p, q, r, s) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
        let d = p - q - r + s;
        ((p * s - q * r) / d, (s - r) / d)
    }

    #[test]
    fn payoff_examples() {
        let g = BimatrixGame::zero_sum(mp());
        let v = expected_payoff(&sv(&[1.0, 0.0]), &g, &sv(&[1.0, 0.0]), Side::Optimizer).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(expected_payoff(&sv(&[1.0, 0.0]), &g, &sv(&[1.0, 0.0]), Side::Learner).unwrap(), -1.0);
        let u = SimplexVector::uniform(2);
        assert_eq!(expected_payoff(&u, &g, &u, Side::Optimizer).unwrap(), 0.0);

        let g = BimatrixGame::zero_sum(Matrix::from_rows([[2.0, 0.0], [0.0, 1.0]]).unwrap());
        let v = expected_payoff(&sv(&[1.0 / 3.0, 2.0 / 3.0]), &g, &sv(&[1.0, 0.0]), Side::Optimizer).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn payoff_dimension_error_names_side() {
        let g = BimatrixGame::zero_sum(mp());
        let err = expected_payoff(&SimplexVector::uniform(3), &g, &SimplexVector::uniform(2), Side::Optimizer)
            .unwrap_err();
        assert!(err.to_string().contains("optimizer strategy (n)"), "{err}");
        let err = expected_payoff(&SimplexVector::uniform(2), &g, &SimplexVector::uniform(5), Side::Optimizer)
            .unwrap_err();
        assert!(err.to_string().contains("learner strategy (m)"), "{err}");
    }

    #[test]
    fn general_sum_flag() {
        let a = mp();
        assert!(BimatrixGame::new(a.clone(), a.neg()).unwrap().is_zero_sum());
        assert!(!BimatrixGame::new(a.clone(), a.clone()).unwrap().is_zero_sum());
        assert!(BimatrixGame::new(a, Matrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn value_of_matching_pennies() {
        let r = game_value(&mp()).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert!((r.optimizer_strategy.weights()[0] - 0.5).abs() < 1e-12);
        assert!(r.certificate_gap <= 1e-8);
    }

    #[test]
    fn value_of_zero_game() {
        for (n, m) in [(1, 1), (3, 2), (4, 5)] {
            let r = game_value(&Matrix::zeros(n, m)).unwrap();
            assert_eq!(r.value, 0.0);
            assert!(r.certificate_gap <= 1e-8);
        }
    }

    #[test]
    fn value_matches_two_by_two_formula() {
        let a = Matrix::from_rows([[2.0, 0.0], [0.0, 1.0]]).unwrap();
        let (v, p) = two_by_two_value(&a);
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        let r = game_value(&a).unwrap();
        assert!((r.value - v).abs() < 1e-12);
        assert!((r.optimizer_strategy.weights()[0] - p).abs() < 1e-12);
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn best_responses() {
        let g = BimatrixGame::zero_sum(mp());
        assert_eq!(best_response_set(&SimplexVector::uniform(2), &g, DEFAULT_TOL).unwrap(), vec![0, 1]);
        // Pure row whose learner payoff is strictly maximized at one column.
        let b = Matrix::from_rows([[0.0, 3.0, 1.0], [5.0, 0.0, 0.0]]).unwrap();
        let g = BimatrixGame::new(Matrix::zeros(2, 3), b).unwrap();
        assert_eq!(best_response_set(&SimplexVector::pure(2, 0), &g, 0.0).unwrap(), vec![1]);
        assert!(best_response_set(&SimplexVector::uniform(3), &g, 0.0).is_err());
        assert!(best_response_set(&SimplexVector::uniform(2), &g, -1.0).is_err());
    }

    #[test]
    fn min_br_examples() {
        let r = min_br_minmax(&mp(), DEFAULT_TOL).unwrap();
        assert_eq!(r.k, 2);
        let r = min_br_minmax(&Matrix::zeros(2, 4), DEFAULT_TOL).unwrap();
        assert_eq!(r.k, 4);
        let err = min_br_minmax(&Matrix::zeros(2, 21), DEFAULT_TOL).unwrap_err();
        assert!(err.to_string().contains("instance too large for exact min-BR search"));
    }

    #[test]
    fn no_pure_examples() {
        let w = check_assumption_no_pure(&mp(), DEFAULT_TOL).unwrap().unwrap();
        assert_eq!((w.i1, w.i2, w.k_action), (0, 1, 0));
        assert!((w.x.weights()[0] - 0.5).abs() < 1e-9);

        assert_eq!(check_assumption_no_pure(&Matrix::zeros(3, 3), DEFAULT_TOL).unwrap(), None);
        let a = Matrix::from_rows([[1.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(check_assumption_no_pure(&a, DEFAULT_TOL).unwrap(), None);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 3).count(), 1);
    }
}
