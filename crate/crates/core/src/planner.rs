//! Offline planning for the optimizer in zero-sum games.
//!
//! Against the replicator dynamics the optimizer's continuous-time reward has
//! a closed form that depends on its plan only through the time-average
//! `x̄`:
//!
//! ```text
//! R = [lse(η·h0) − lse(η·(h0 − T·Aᵀx̄))] / η
//! ```
//!
//! so the best plan is constant and found by minimizing the log-sum-exp term
//! over the simplex.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frank_wolfe::{self, FwOptions, LseObjective, StepRule};
use crate::game::{self, BimatrixGame, NoPureWitness};
use crate::learners::{Schedule, ScheduleMode};
use crate::matrix::{Matrix, SimplexVector};
use crate::softmax::{log_sum_exp, softmax};

/// Hard ceiling on Frank–Wolfe iterations.
pub const MAX_FW_ITERATIONS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannerResult {
    pub x_star: SimplexVector,
    pub r_star: f64,
    /// Certified bound on `R* − r_star`.
    pub epsilon: f64,
    pub iterations: u64,
}

fn require_zero_sum(game: &BimatrixGame) -> Result<()> {
    if !game.is_zero_sum() {
        return Err(Error::Precondition("closed form valid only for B = −A".into()));
    }
    Ok(())
}

/// Closed-form continuous reward of `schedule` against the replicator.
pub fn reward_cont(schedule: &Schedule, h0: &[f64], horizon: f64, game: &BimatrixGame, eta: f64) -> Result<f64> {
    require_zero_sum(game)?;
    if schedule.mode() != ScheduleMode::Continuous {
        return Err(Error::Precondition("closed-form reward needs a continuous schedule".into()));
    }
    schedule.check_horizon(horizon)?;
    if h0.len() != game.m() {
        return Err(Error::dim("initial history (m)", game.m(), h0.len()));
    }
    if let Some(n) = schedule.optimizer_dim() {
        if n != game.n() {
            return Err(Error::dim("schedule strategy", game.n(), n));
        }
    }
    if schedule.segments().is_empty() {
        return Ok(0.0);
    }
    // T·x̄ is the integral itself.
    let integral = schedule.integral_until(horizon);
    Ok(closed_form(game.a(), h0, &integral, eta))
}

/// Reward of holding `x` constant for `horizon` time units.
pub fn reward_constant(a: &Matrix, h0: &[f64], x: &SimplexVector, horizon: f64, eta: f64) -> f64 {
    let integral: Vec<f64> = x.weights().iter().map(|w| w * horizon).collect();
    closed_form(a, h0, &integral, eta)
}

fn closed_form(a: &Matrix, h0: &[f64], integral: &[f64], eta: f64) -> f64 {
    let start: Vec<f64> = h0.iter().map(|h| eta * h).collect();
    let ax = a.left_mul(integral);
    let end: Vec<f64> = h0.iter().zip(&ax).map(|(h, v)| eta * (h - v)).collect();
    (log_sum_exp(&start) - log_sum_exp(&end)) / eta
}

/// Frank–Wolfe iterations suggested by the `2βR²/(s+1)` rate after
/// normalizing the objective: `⌈2/(ε·η)⌉`.
pub fn nominal_iterations(epsilon: f64, eta: f64) -> u64 {
    (2.0 / (epsilon * eta)).ceil() as u64
}

#[derive(Debug, Clone)]
pub struct PlannerOptions {
    pub rule: StepRule,
    pub warm_start: Option<SimplexVector>,
    pub max_iter: u64,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions {
            rule: StepRule::AwayStep,
            warm_start: None,
            max_iter: MAX_FW_ITERATIONS,
        }
    }
}

/// ε-optimal constant strategy against the replicator, certified by the
/// Frank–Wolfe duality gap (`gap ≤ ε·η` implies reward within `ε`).
pub fn optimize_continuous(a: &Matrix, h0: &[f64], horizon: f64, eta: f64, epsilon: f64) -> Result<PlannerResult> {
    optimize_continuous_with(a, h0, horizon, eta, epsilon, &PlannerOptions::default())
}

pub fn optimize_continuous_with(
    a: &Matrix,
    h0: &[f64],
    horizon: f64,
    eta: f64,
    epsilon: f64,
    opts: &PlannerOptions,
) -> Result<PlannerResult> {
    if !(epsilon > 0.0) {
        return Err(Error::Invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(eta > 0.0) || !(horizon >= 0.0) {
        return Err(Error::Invalid("eta must be positive and the horizon non-negative".into()));
    }
    let obj = LseObjective::new(a, h0, horizon, eta)?;
    let fw = frank_wolfe::minimize(
        &obj,
        &FwOptions {
            rule: opts.rule,
            gap_tol: epsilon * eta,
            max_iter: opts.max_iter,
            start: opts.warm_start.clone(),
            log: false,
        },
    )?;
    if !fw.converged {
        return Err(Error::ResourceCap(format!(
            "Frank–Wolfe hit its {} iteration cap with gap {:.3e} above {:.3e}",
            opts.max_iter,
            fw.gap,
            epsilon * eta
        )));
    }
    let r_star = reward_constant(a, h0, &fw.x, horizon, eta);
    Ok(PlannerResult {
        x_star: fw.x,
        r_star,
        epsilon: fw.gap / eta,
        iterations: fw.iterations.max(1),
    })
}

/// `(Val·T, Val·T + ln(m)/η)`.
pub fn reward_bounds(a: &Matrix, horizon: f64, eta: f64) -> Result<(f64, f64)> {
    let v = game::game_value(a)?.value;
    Ok((v * horizon, v * horizon + (a.cols() as f64).ln() / eta))
}

/// `Val·T + ln(m/k)/η`, the large-`ηT` reference line; `k` is the fewest best
/// responses among minmax strategies. Not a hard bound at finite `ηT`.
pub fn asymptotic_lower_bound(a: &Matrix, horizon: f64, eta: f64) -> Result<f64> {
    let v = game::game_value(a)?.value;
    let k = game::min_br_minmax(a, game::DEFAULT_TOL)?.k;
    Ok(v * horizon + (a.cols() as f64 / k as f64).ln() / eta)
}

/// Two strategies averaging to a minmax strategy, played on odd and even
/// rounds respectively.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternatingPlan {
    pub x_odd: SimplexVector,
    pub x_even: SimplexVector,
    pub base: SimplexVector,
    pub delta: f64,
    pub i1: usize,
    pub i2: usize,
}

/// Splits the no-pure witness `x` along `e_k − x`:
/// `x′ = x + δ·(e_k − x)`, `x″ = x − δ·(e_k − x)` with
/// `δ = min(1, x_k/(1 − x_k))`, the largest perturbation keeping both on the
/// simplex.
pub fn alternating_plan(a: &Matrix, tol: f64) -> Result<AlternatingPlan> {
    let w = game::check_assumption_no_pure(a, tol)?
        .ok_or_else(|| Error::Precondition("game does not satisfy the no-pure assumption".into()))?;
    plan_from_witness(a, &w)
}

pub fn plan_from_witness(a: &Matrix, w: &NoPureWitness) -> Result<AlternatingPlan> {
    let x = w.x.weights();
    let k = w.k_action;
    let xk = x[k];
    if xk >= 1.0 {
        return Err(Error::Precondition("witness strategy is pure; no split exists".into()));
    }
    let delta = (xk / (1.0 - xk)).min(1.0);
    let dir: Vec<f64> = (0..x.len())
        .map(|i| if i == k { 1.0 } else { 0.0 } - x[i])
        .collect();
    let plus: Vec<f64> = x.iter().zip(&dir).map(|(v, d)| (v + delta * d).max(0.0)).collect();
    let minus: Vec<f64> = x.iter().zip(&dir).map(|(v, d)| (v - delta * d).max(0.0)).collect();
    let mut x_odd = SimplexVector::normalized(plus)?;
    let mut x_even = SimplexVector::normalized(minus)?;
    let spread = |s: &SimplexVector| {
        let u = a.left_mul(s.weights());
        u[w.i1] - u[w.i2]
    };
    if spread(&x_odd) < 0.0 {
        std::mem::swap(&mut x_odd, &mut x_even);
    }
    if !(spread(&x_odd) > 0.0 && spread(&x_even) < 0.0) {
        return Err(Error::Precondition("witness does not separate its two best responses".into()));
    }
    Ok(AlternatingPlan {
        x_odd,
        x_even,
        base: w.x.clone(),
        delta,
        i1: w.i1,
        i2: w.i2,
    })
}

impl AlternatingPlan {
    /// Discrete schedule of `rounds` rounds; an odd final round plays `base`.
    pub fn schedule(&self, rounds: u64) -> Result<Schedule> {
        let mut strategies = Vec::with_capacity(rounds as usize);
        for t in 1..=rounds {
            strategies.push(if t == rounds && rounds % 2 == 1 {
                self.base.clone()
            } else if t % 2 == 1 {
                self.x_odd.clone()
            } else {
                self.x_even.clone()
            });
        }
        Schedule::from_rounds(strategies)
    }
}

/// Empirical `(total − T·Val)/(η·T)` of a plan's discrete total.
pub fn measured_gain_constant(total: f64, value: f64, horizon: f64, eta: f64) -> f64 {
    (total - horizon * value) / (eta * horizon)
}

/// Finite-difference residual of the value function `V(h, τ) = R*(h, τ)` in
/// the Hamilton–Jacobi–Bellman equation
/// `∂V/∂τ = max_x xᵀ·A·(softmax(η·h) − ∇_h V)`, with `τ` the time remaining.
///
/// `V` is evaluated by the planner to accuracy `fd_step²`; derivatives use
/// central differences of width `fd_step`.
pub fn hjb_residual(h: &[f64], t: f64, a: &Matrix, eta: f64, fd_step: f64) -> Result<f64> {
    if !(fd_step > 0.0) {
        return Err(Error::Invalid(format!("finite-difference step must be positive, got {fd_step}")));
    }
    if t <= fd_step {
        return Err(Error::Invalid(format!("time {t} must exceed the finite-difference step")));
    }
    let m = a.cols();
    if h.len() != m {
        return Err(Error::dim("history (m)", m, h.len()));
    }
    let center = optimize_continuous(a, h, t, eta, fd_step * fd_step)?;
    let opts = PlannerOptions {
        warm_start: Some(center.x_star.clone()),
        ..PlannerOptions::default()
    };
    let value = |hh: &[f64], tt: f64| -> Result<f64> {
        Ok(optimize_continuous_with(a, hh, tt, eta, fd_step * fd_step, &opts)?.r_star)
    };
    let dv_dt = (value(h, t + fd_step)? - value(h, t - fd_step)?) / (2.0 * fd_step);
    let mut grad = vec![0.0; m];
    for i in 0..m {
        let mut up = h.to_vec();
        let mut dn = h.to_vec();
        up[i] += fd_step;
        dn[i] -= fd_step;
        grad[i] = (value(&up, t)? - value(&dn, t)?) / (2.0 * fd_step);
    }
    let z: Vec<f64> = h.iter().map(|v| eta * v).collect();
    let p = softmax(&z);
    let dir: Vec<f64> = p.iter().zip(&grad).map(|(p, g)| p - g).collect();
    let best = game::max_of(&a.right_mul(&dir));
    Ok((dv_dt - best).abs())
}
