//! Learner algorithms (Multiplicative Weights, Replicator Dynamics,
//! Best-Response) and a round-by-round simulator.
//!
//! All three learners track the same statistic: the cumulative reward
//! `h_j` each pure action would have earned against the optimizer's past
//! play. MWU and the replicator play `softmax(η·h)`, best-response plays the
//! lexicographically first maximizer of `h`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Side};
use crate::matrix::SimplexVector;
use crate::softmax::{log_sum_exp, softmax};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Mwu,
    Replicator,
    BestResponse,
}

/// Learner state: history `h`, step size and clock. Updates return a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    h: Vec<f64>,
    eta: f64,
    kind: LearnerKind,
    round: u64,
    time: f64,
}

impl LearnerState {
    pub fn new(kind: LearnerKind, eta: f64, h0: Vec<f64>) -> Result<Self> {
        if h0.is_empty() {
            return Err(Error::Invalid("learner needs at least one action".into()));
        }
        if h0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("historical rewards must be finite".into()));
        }
        if kind != LearnerKind::BestResponse {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::Invalid(format!("step size must be positive, got {eta}")));
            }
            if eta > 0.5 {
                log::warn!("step size {eta} exceeds 1/2, outside the usual MWU regime");
            }
        }
        Ok(LearnerState {
            h: h0,
            eta,
            kind,
            round: 0,
            time: 0.0,
        })
    }

    pub fn zeros(kind: LearnerKind, eta: f64, m: usize) -> Result<Self> {
        LearnerState::new(kind, eta, vec![0.0; m])
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kind(&self) -> LearnerKind {
        self.kind
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// The mixed strategy this learner commits to given its current history.
    pub fn strategy(&self) -> SimplexVector {
        match self.kind {
            LearnerKind::Mwu | LearnerKind::Replicator => softmax_strategy(&self.h, self.eta),
            LearnerKind::BestResponse => SimplexVector::pure(self.h.len(), first_argmax(&self.h)),
        }
    }

    /// Accumulates `duration · Bᵀ·x` into the history (continuous clock).
    pub fn advance(&self, x: &SimplexVector, game: &BimatrixGame, duration: f64) -> Result<Self> {
        check_history_dim(&self.h, game)?;
        game.check_optimizer_dim(x)?;
        let gain = game.b().left_mul(x.weights());
        let mut next = self.clone();
        next.h.iter_mut().zip(&gain).for_each(|(h, g)| *h += duration * g);
        next.time += duration;
        Ok(next)
    }
}

fn softmax_strategy(h: &[f64], eta: f64) -> SimplexVector {
    let z: Vec<f64> = h.iter().map(|v| eta * v).collect();
    SimplexVector::from_raw(softmax(&z))
}

fn first_argmax(h: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in h.iter().enumerate().skip(1) {
        if v > h[best] {
            best = j;
        }
    }
    best
}

fn check_history_dim(h: &[f64], game: &BimatrixGame) -> Result<()> {
    if h.len() != game.m() {
        return Err(Error::dim("learner history (m)", game.m(), h.len()));
    }
    Ok(())
}

/// MWU strategy `y_i = exp(η·h_i) / Σ_j exp(η·h_j)`.
pub fn mwu_strategy(state: &LearnerState) -> Result<SimplexVector> {
    if state.kind != LearnerKind::Mwu {
        return Err(Error::Precondition(format!("mwu_strategy called on a {:?} learner", state.kind)));
    }
    Ok(softmax_strategy(&state.h, state.eta))
}

/// One discrete round: `h ← h + Bᵀ·x`, round counter incremented.
pub fn learner_update(state: &LearnerState, x: &SimplexVector, game: &BimatrixGame) -> Result<LearnerState> {
    check_history_dim(&state.h, game)?;
    game.check_optimizer_dim(x)?;
    let gain = game.b().left_mul(x.weights());
    let mut next = state.clone();
    next.h.iter_mut().zip(&gain).for_each(|(h, g)| *h += g);
    next.round += 1;
    Ok(next)
}

/// Lexicographically first maximizer of `h` under exact comparison.
pub fn br_action(state: &LearnerState) -> Result<usize> {
    if state.kind != LearnerKind::BestResponse {
        return Err(Error::Precondition(format!("br_action called on a {:?} learner", state.kind)));
    }
    Ok(first_argmax(&state.h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    Discrete,
    Continuous,
}

/// A piece of an optimizer plan: `count` rounds or `duration` time units of `strategy`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub length: f64,
    pub strategy: SimplexVector,
}

/// The optimizer's piecewise-constant plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    mode: ScheduleMode,
    segments: Vec<Segment>,
}

impl Schedule {
    pub fn discrete(segments: Vec<(u64, SimplexVector)>) -> Result<Self> {
        let n = segments.first().map(|s| s.1.dim());
        let mut out = Vec::with_capacity(segments.len());
        for (count, strategy) in segments {
            if count == 0 {
                return Err(Error::Invalid("discrete segment count must be positive".into()));
            }
            check_segment_dim(n, &strategy)?;
            out.push(Segment {
                length: count as f64,
                strategy,
            });
        }
        Ok(Schedule {
            mode: ScheduleMode::Discrete,
            segments: out,
        })
    }

    pub fn continuous(segments: Vec<(f64, SimplexVector)>) -> Result<Self> {
        let n = segments.first().map(|s| s.1.dim());
        let mut out = Vec::with_capacity(segments.len());
        for (duration, strategy) in segments {
            if !(duration > 0.0 && duration.is_finite()) {
                return Err(Error::Invalid(format!("segment duration must be positive, got {duration}")));
            }
            check_segment_dim(n, &strategy)?;
            out.push(Segment {
                length: duration,
                strategy,
            });
        }
        Ok(Schedule {
            mode: ScheduleMode::Continuous,
            segments: out,
        })
    }

    /// Repeats `x` for `rounds` rounds (discrete) or `rounds` time (continuous).
    pub fn constant(mode: ScheduleMode, x: SimplexVector, horizon: f64) -> Result<Self> {
        if horizon == 0.0 {
            return Ok(Schedule { mode, segments: vec![] });
        }
        match mode {
            ScheduleMode::Discrete => Schedule::discrete(vec![(integral_count(horizon)?, x)]),
            ScheduleMode::Continuous => Schedule::continuous(vec![(horizon, x)]),
        }
    }

    /// Discrete schedule playing `strategies[t]` in round `t + 1`; runs of equal
    /// strategies are merged.
    pub fn from_rounds(strategies: Vec<SimplexVector>) -> Result<Self> {
        let mut segs: Vec<(u64, SimplexVector)> = Vec::new();
        for s in strategies {
            match segs.last_mut() {
                Some((c, prev)) if *prev == s => *c += 1,
                _ => segs.push((1, s)),
            }
        }
        Schedule::discrete(segs)
    }

    pub fn mode(&self) -> ScheduleMode {
        self.mode
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Total duration (continuous) or number of rounds (discrete).
    pub fn horizon(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn optimizer_dim(&self) -> Option<usize> {
        self.segments.first().map(|s| s.strategy.dim())
    }

    pub fn check_horizon(&self, horizon: f64) -> Result<()> {
        let total = self.horizon();
        if (total - horizon).abs() > 1e-9 * horizon.abs().max(1.0) {
            return Err(Error::Invalid(format!("schedule covers {total}, declared horizon is {horizon}")));
        }
        Ok(())
    }

    /// `∫₀ᵗ x(s) ds`, exact for a piecewise-constant plan.
    pub fn integral_until(&self, t: f64) -> Vec<f64> {
        let n = self.optimizer_dim().unwrap_or(0);
        let mut acc = vec![0.0; n];
        let mut left = t;
        for seg in &self.segments {
            if left <= 0.0 {
                break;
            }
            let d = seg.length.min(left);
            acc.iter_mut().zip(seg.strategy.weights()).for_each(|(a, w)| *a += d * w);
            left -= d;
        }
        acc
    }

    /// Time-average strategy `(1/T)·∫₀ᵀ x(s) ds`.
    pub fn time_average(&self) -> Option<SimplexVector> {
        let total = self.horizon();
        if total <= 0.0 {
            return None;
        }
        let acc = self.integral_until(total);
        SimplexVector::normalized(acc).ok()
    }

    /// Per-round strategies of a discrete schedule.
    pub fn rounds(&self) -> impl Iterator<Item = &SimplexVector> {
        self.segments
            .iter()
            .flat_map(|s| std::iter::repeat_n(&s.strategy, s.length as usize))
    }
}

fn integral_count(v: f64) -> Result<u64> {
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::Invalid(format!("discrete horizon must be a whole number, got {v}")));
    }
    Ok(v as u64)
}

fn check_segment_dim(n: Option<usize>, s: &SimplexVector) -> Result<()> {
    match n {
        Some(n) if n != s.dim() => Err(Error::dim("schedule strategy", n, s.dim())),
        _ => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
struct SegmentRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    duration: Option<f64>,
    strategy: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    mode: ScheduleMode,
    segments: Vec<SegmentRepr>,
}

impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let segments = self
            .segments
            .iter()
            .map(|seg| SegmentRepr {
                count: (self.mode == ScheduleMode::Discrete).then_some(seg.length as u64),
                duration: (self.mode == ScheduleMode::Continuous).then_some(seg.length),
                strategy: seg.strategy.weights().to_vec(),
            })
            .collect();
        ScheduleRepr {
            mode: self.mode,
            segments,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ScheduleRepr::deserialize(d)?;
        let mut segs = Vec::with_capacity(r.segments.len());
        for seg in r.segments {
            let x = SimplexVector::new(seg.strategy).map_err(D::Error::custom)?;
            let len = match (r.mode, seg.count, seg.duration) {
                (ScheduleMode::Discrete, Some(c), None) => c as f64,
                (ScheduleMode::Continuous, None, Some(d)) => d,
                (ScheduleMode::Discrete, _, _) => return Err(D::Error::custom("discrete segments need exactly a \"count\"")),
                (ScheduleMode::Continuous, _, _) => {
                    return Err(D::Error::custom("continuous segments need exactly a \"duration\""))
                }
            };
            segs.push((len, x));
        }
        match r.mode {
            ScheduleMode::Discrete => Schedule::discrete(segs.into_iter().map(|(l, x)| (l as u64, x)).collect()),
            ScheduleMode::Continuous => Schedule::continuous(segs),
        }
        .map_err(D::Error::custom)
    }
}

/// Replicator strategy at time `t`: `softmax(η·(h0 + Bᵀ·∫₀ᵗ x(s) ds))`.
pub fn replicator_strategy(
    h0: &[f64],
    schedule: &Schedule,
    t: f64,
    eta: f64,
    game: &BimatrixGame,
) -> Result<SimplexVector> {
    if schedule.mode() != ScheduleMode::Continuous {
        return Err(Error::Precondition("replicator dynamics need a continuous schedule".into()));
    }
    check_history_dim(h0, game)?;
    if let Some(n) = schedule.optimizer_dim() {
        if n != game.n() {
            return Err(Error::dim("schedule strategy", game.n(), n));
        }
    }
    let horizon = schedule.horizon();
    if !(0.0..=horizon).contains(&t) {
        return Err(Error::Invalid(format!("time {t} outside [0, {horizon}]")));
    }
    let integral = if schedule.segments().is_empty() {
        vec![0.0; game.n()]
    } else {
        schedule.integral_until(t)
    };
    let gain = game.b().left_mul(&integral);
    let h: Vec<f64> = h0.iter().zip(&gain).map(|(a, b)| a + b).collect();
    Ok(softmax_strategy(&h, eta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    /// Round index (discrete) or segment end time (continuous).
    pub t: f64,
    pub optimizer_strategy: Vec<f64>,
    pub learner_strategy: Vec<f64>,
    pub optimizer_reward: f64,
    pub learner_reward: f64,
    pub h_after: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub rounds: Vec<RoundRecord>,
    pub optimizer_total: f64,
    pub learner_total: f64,
}

impl Trajectory {
    fn from_rounds(rounds: Vec<RoundRecord>) -> Self {
        let optimizer_total = rounds.iter().map(|r| r.optimizer_reward).sum();
        let learner_total = rounds.iter().map(|r| r.learner_reward).sum();
        Trajectory {
            rounds,
            optimizer_total,
            learner_total,
        }
    }
}

/// Plays `schedule` against a learner. In a discrete round the learner
/// commits to its strategy from history through the previous round, then
/// observes `x(t)`. Continuous schedules run the replicator dynamics one
/// segment at a time.
pub fn simulate(
    game: &BimatrixGame,
    schedule: &Schedule,
    kind: LearnerKind,
    eta: f64,
    h0: Option<&[f64]>,
) -> Result<Trajectory> {
    let h0 = h0.map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; game.m()]);
    check_history_dim(&h0, game)?;
    if let Some(n) = schedule.optimizer_dim() {
        if n != game.n() {
            return Err(Error::dim("schedule strategy", game.n(), n));
        }
    }
    let mut state = LearnerState::new(kind, eta, h0)?;
    match (kind, schedule.mode()) {
        (LearnerKind::Mwu | LearnerKind::BestResponse, ScheduleMode::Discrete) => {
            let mut rounds = Vec::with_capacity(schedule.horizon() as usize);
            for x in schedule.rounds() {
                let y = state.strategy();
                let opt = crate::game::expected_payoff(x, game, &y, Side::Optimizer)?;
                let lrn = crate::game::expected_payoff(x, game, &y, Side::Learner)?;
                state = learner_update(&state, x, game)?;
                rounds.push(RoundRecord {
                    t: state.round() as f64,
                    optimizer_strategy: x.weights().to_vec(),
                    learner_strategy: y.into_inner(),
                    optimizer_reward: opt,
                    learner_reward: lrn,
                    h_after: state.h().to_vec(),
                });
            }
            Ok(Trajectory::from_rounds(rounds))
        }
        (LearnerKind::Replicator, ScheduleMode::Continuous) => {
            let mut rounds = Vec::with_capacity(schedule.segments().len());
            for seg in schedule.segments() {
                let y = state.strategy();
                let (opt, lrn) = segment_rewards(game, state.h(), eta, &seg.strategy, seg.length);
                state = state.advance(&seg.strategy, game, seg.length)?;
                rounds.push(RoundRecord {
                    t: state.time(),
                    optimizer_strategy: seg.strategy.weights().to_vec(),
                    learner_strategy: y.into_inner(),
                    optimizer_reward: opt,
                    learner_reward: lrn,
                    h_after: state.h().to_vec(),
                });
            }
            Ok(Trajectory::from_rounds(rounds))
        }
        (k, m) => Err(Error::Precondition(format!("{k:?} learner cannot follow a {m:?} schedule"))),
    }
}

/// Rewards accrued while `x` is held for `d` time units against the replicator
/// starting from history `h`.
///
/// The learner's reward `∫ p(s)ᵀ·Bᵀx ds` is the exact increment of
/// `lse(η·(h + s·Bᵀx))/η`. The optimizer's equals the negation in zero-sum
/// games and is integrated numerically otherwise.
fn segment_rewards(game: &BimatrixGame, h: &[f64], eta: f64, x: &SimplexVector, d: f64) -> (f64, f64) {
    let bx = game.b().left_mul(x.weights());
    let start: Vec<f64> = h.iter().map(|v| eta * v).collect();
    let end: Vec<f64> = h.iter().zip(&bx).map(|(v, g)| eta * (v + d * g)).collect();
    let learner = (log_sum_exp(&end) - log_sum_exp(&start)) / eta;
    if game.is_zero_sum() {
        return (0.0 - learner, learner);
    }
    let ax = game.a().left_mul(x.weights());
    let rate = |s: f64| {
        let z: Vec<f64> = h.iter().zip(&bx).map(|(v, g)| eta * (v + s * g)).collect();
        softmax(&z).iter().zip(&ax).map(|(p, a)| p * a).sum::<f64>()
    };
    (adaptive_simpson(&rate, 0.0, d, 1e-12, 48), learner)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn go(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    go(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn mp() -> BimatrixGame {
        BimatrixGame::zero_sum(Matrix::from_rows([[1.0, -1.0], [-1.0, 1.0]]).unwrap())
    }

    #[test]
    fn mwu_uniform_and_closed_form() {
        let s = LearnerState::zeros(LearnerKind::Mwu, 0.3, 4).unwrap();
        assert_eq!(mwu_strategy(&s).unwrap().weights(), &[0.25; 4]);

        let eta = 0.37;
        let s = LearnerState::new(LearnerKind::Mwu, eta, vec![1.0, -1.0]).unwrap();
        let y = mwu_strategy(&s).unwrap();
        let z = eta.exp() + (-eta).exp();
        assert!((y.weights()[0] - eta.exp() / z).abs() < 1e-15);
        assert!((y.weights()[1] - (-eta).exp() / z).abs() < 1e-15);
    }

    #[test]
    fn mwu_rejects_wrong_kind_and_bad_eta() {
        let s = LearnerState::zeros(LearnerKind::BestResponse, 0.0, 2).unwrap();
        assert!(mwu_strategy(&s).is_err());
        assert!(LearnerState::zeros(LearnerKind::Mwu, 0.0, 2).is_err());
        assert!(LearnerState::zeros(LearnerKind::Mwu, f64::NAN, 2).is_err());
        let s = LearnerState::zeros(LearnerKind::Mwu, 0.1, 2).unwrap();
        assert!(br_action(&s).is_err());
    }

    #[test]
    fn update_adds_learner_row() {
        let g = mp();
        let s = LearnerState::zeros(LearnerKind::Mwu, 0.1, 2).unwrap();
        let s = learner_update(&s, &SimplexVector::pure(2, 0), &g).unwrap();
        assert_eq!(s.h(), &[-1.0, 1.0]);
        assert_eq!(s.round(), 1);
        assert!(learner_update(&s, &SimplexVector::uniform(3), &g).is_err());

        // Identical rows: any mixture adds that row.
        let b = Matrix::from_rows([[0.5, -2.0, 3.0], [0.5, -2.0, 3.0]]).unwrap();
        let g = BimatrixGame::new(Matrix::zeros(2, 3), b).unwrap();
        let s = LearnerState::new(LearnerKind::Mwu, 0.1, vec![1.0, 1.0, 1.0]).unwrap();
        let s = learner_update(&s, &SimplexVector::new(vec![0.3, 0.7]).unwrap(), &g).unwrap();
        for (got, want) in s.h().iter().zip([1.5, -1.0, 4.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn br_ties_go_to_first_index() {
        let s = LearnerState::zeros(LearnerKind::BestResponse, 0.0, 5).unwrap();
        assert_eq!(br_action(&s).unwrap(), 0);
        let s = LearnerState::new(LearnerKind::BestResponse, 0.0, vec![0.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(br_action(&s).unwrap(), 1);
    }

    #[test]
    fn schedule_json() {
        let json = r#"{"mode":"discrete","segments":[{"count":2,"strategy":[1,0]},{"count":1,"strategy":[0.5,0.5]}]}"#;
        let s: Schedule = serde_json::from_str(json).unwrap();
        assert_eq!(s.horizon(), 3.0);
        assert_eq!(s.rounds().count(), 3);
        let back: Schedule = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);

        let bad = r#"{"mode":"discrete","segments":[{"duration":2,"strategy":[1,0]}]}"#;
        assert!(serde_json::from_str::<Schedule>(bad).is_err());
        let bad = r#"{"mode":"continuous","segments":[{"duration":1,"strategy":[1,0]},{"duration":1,"strategy":[1]}]}"#;
        assert!(serde_json::from_str::<Schedule>(bad).is_err());
        assert!(s.check_horizon(3.0).is_ok());
        assert!(s.check_horizon(4.0).is_err());
    }

    #[test]
    fn replicator_at_zero_is_uniform_and_rejects_out_of_range() {
        let g = mp();
        let s = Schedule::continuous(vec![(2.0, SimplexVector::pure(2, 0))]).unwrap();
        let y = replicator_strategy(&[0.0, 0.0], &s, 0.0, 0.5, &g).unwrap();
        assert_eq!(y.weights(), &[0.5, 0.5]);
        assert!(replicator_strategy(&[0.0, 0.0], &s, 2.5, 0.5, &g).is_err());
        assert!(replicator_strategy(&[0.0, 0.0], &s, -0.1, 0.5, &g).is_err());
    }

    #[test]
    fn replicator_constant_segment_exponent() {
        let g = mp();
        let x = SimplexVector::new(vec![0.8, 0.2]).unwrap();
        let (eta, t) = (0.7, 1.3);
        let h0 = [0.2, -0.4];
        let s = Schedule::continuous(vec![(3.0, x.clone())]).unwrap();
        let y = replicator_strategy(&h0, &s, t, eta, &g).unwrap();
        let bx = g.b().left_mul(x.weights());
        let z: Vec<f64> = (0..2).map(|i| eta * (h0[i] + t * bx[i])).collect();
        let want = softmax(&z);
        for (a, b) in y.weights().iter().zip(&want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_simulation() {
        let g = mp();
        let s = Schedule::discrete(vec![]).unwrap();
        let tr = simulate(&g, &s, LearnerKind::Mwu, 0.1, None).unwrap();
        assert!(tr.rounds.is_empty());
        assert_eq!(tr.optimizer_total, 0.0);
    }

    #[test]
    fn simulate_rejects_mismatched_modes() {
        let g = mp();
        let d = Schedule::discrete(vec![(1, SimplexVector::uniform(2))]).unwrap();
        let c = Schedule::continuous(vec![(1.0, SimplexVector::uniform(2))]).unwrap();
        assert!(simulate(&g, &d, LearnerKind::Replicator, 0.1, None).is_err());
        assert!(simulate(&g, &c, LearnerKind::Mwu, 0.1, None).is_err());
        let wrong = Schedule::discrete(vec![(1, SimplexVector::uniform(3))]).unwrap();
        assert!(simulate(&g, &wrong, LearnerKind::Mwu, 0.1, None).is_err());
    }

    #[test]
    fn general_sum_segment_quadrature_matches_fine_riemann_sum() {
        let a = Matrix::from_rows([[1.0, 0.0, 2.0], [0.5, 1.5, -1.0]]).unwrap();
        let b = Matrix::from_rows([[0.0, 1.0, -0.5], [1.0, -1.0, 0.2]]).unwrap();
        let g = BimatrixGame::new(a.clone(), b.clone()).unwrap();
        let x = SimplexVector::new(vec![0.3, 0.7]).unwrap();
        let (eta, d) = (0.9, 2.0);
        let h = [0.1, 0.0, -0.2];
        let (opt, _) = segment_rewards(&g, &h, eta, &x, d);
        // Midpoint rule oracle on a fine grid.
        let steps = 200_000;
        let dt = d / steps as f64;
        let (ax, bx) = (a.left_mul(x.weights()), b.left_mul(x.weights()));
        let mut acc = 0.0;
        for k in 0..steps {
            let s = (k as f64 + 0.5) * dt;
            let z: Vec<f64> = (0..3).map(|i| eta * (h[i] + s * bx[i])).collect();
            let p = softmax(&z);
            acc += dt * p.iter().zip(&ax).map(|(p, a)| p * a).sum::<f64>();
        }
        assert!((opt - acc).abs() < 1e-9, "{opt} vs {acc}");
    }
}
