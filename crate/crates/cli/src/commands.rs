use std::path::Path;

use serde::Serialize;
use strategizer_core::battery::{self, BatteryConfig, CriterionOutcome};
use strategizer_core::game::{self, BimatrixGame};
use strategizer_core::io::{self, AssumptionStatus, Claim, OcdpSource, PlannerReport, WitnessFile, WitnessReport};
use strategizer_core::learners::{simulate as run_schedule, LearnerKind, Schedule, ScheduleMode, Trajectory};
use strategizer_core::ocdp::{self, DirectedGraph, InstanceFile, OcdpInstance};
use strategizer_core::{planner, Error, SimplexVector};

use crate::output::{emit, read, to_json, write_atomic, CliError};

fn load_game(path: &Path) -> Result<BimatrixGame, CliError> {
    Ok(io::parse_game(&read(path)?)?)
}

fn load_h0(path: Option<&Path>, m: usize) -> Result<Vec<f64>, CliError> {
    let h0 = match path {
        Some(p) => io::parse_vector(&read(p)?)?,
        None => vec![0.0; m],
    };
    if h0.len() != m {
        return Err(Error::Invalid(format!("initial history has {} entries, the game has {m} learner actions", h0.len())).into());
    }
    Ok(h0)
}

fn require_zero_sum(g: &BimatrixGame, command: &str) -> Result<(), CliError> {
    if !g.is_zero_sum() {
        return Err(Error::Precondition(format!(
            "{command} needs a zero-sum game (B = −A); use `strategizer simulate` for general-sum play"
        ))
        .into());
    }
    Ok(())
}

pub fn value(path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let g = load_game(path)?;
    emit(&game::game_value(g.a())?, out)
}

pub fn plan(path: &Path, eta: f64, horizon: f64, eps: f64, h0: Option<&Path>, out: Option<&Path>) -> Result<(), CliError> {
    let g = load_game(path)?;
    require_zero_sum(&g, "plan")?;
    check_positive("eta", eta)?;
    check_positive("T", horizon)?;
    check_positive("eps", eps)?;
    let a = g.a();
    let h0 = load_h0(h0, g.m())?;
    let value = game::game_value(a)?.value;
    let r = planner::optimize_continuous(a, &h0, horizon, eta, eps)?;
    let witness = game::check_assumption_no_pure(a, game::DEFAULT_TOL)?;
    let report = PlannerReport {
        value,
        x_star: r.x_star,
        r_star: r.r_star,
        epsilon: r.epsilon,
        bounds: planner::reward_bounds(a, horizon, eta)?,
        k: game::min_br_minmax(a, game::DEFAULT_TOL)?.k,
        asymptotic_bound: planner::asymptotic_lower_bound(a, horizon, eta)?,
        assumption1: AssumptionStatus {
            holds: witness.is_some(),
            witness: witness.as_ref().map(WitnessReport::from),
        },
    };
    emit(&report, out)
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

pub struct SimulateArgs<'a> {
    pub game: &'a Path,
    pub learner: LearnerKind,
    pub schedule: &'a str,
    pub eta: f64,
    pub horizon: Option<f64>,
    pub eps: f64,
    pub h0: Option<&'a Path>,
    pub out_dir: &'a Path,
    pub stem: &'a str,
}

/// Same pieces held for the same lengths, as a continuous plan.
fn as_continuous(s: &Schedule) -> Result<Schedule, Error> {
    Schedule::continuous(s.segments().iter().map(|seg| (seg.length, seg.strategy.clone())).collect())
}

fn builtin_schedule(
    name: &str,
    g: &BimatrixGame,
    mode: ScheduleMode,
    horizon: f64,
    args: &SimulateArgs<'_>,
    h0: &[f64],
) -> Result<Option<Schedule>, CliError> {
    let n = g.n();
    let constant = |x: SimplexVector| Schedule::constant(mode, x, horizon);
    let schedule = match name {
        "uniform" => constant(SimplexVector::uniform(n))?,
        "constant-xstar" => {
            require_zero_sum(g, "constant-xstar")?;
            if horizon == 0.0 {
                constant(SimplexVector::uniform(n))?
            } else {
                constant(planner::optimize_continuous(g.a(), h0, horizon, args.eta, args.eps)?.x_star)?
            }
        }
        "alternating" => {
            let plan = planner::alternating_plan(g.a(), game::DEFAULT_TOL)?;
            if horizon.fract() != 0.0 {
                return Err(CliError::Usage(format!("alternating needs a whole number of rounds, got {horizon}")));
            }
            let discrete = plan.schedule(horizon as u64)?;
            match mode {
                ScheduleMode::Discrete => discrete,
                ScheduleMode::Continuous => as_continuous(&discrete)?,
            }
        }
        other => match other.strip_prefix("pure:") {
            Some(i) => {
                let i: usize = i
                    .parse()
                    .ok()
                    .filter(|&i| (1..=n).contains(&i))
                    .ok_or_else(|| CliError::Usage(format!("pure:<i> needs 1 ≤ i ≤ {n}, got {other:?}")))?;
                constant(SimplexVector::pure(n, i - 1))?
            }
            None => return Ok(None),
        },
    };
    Ok(Some(schedule))
}

#[derive(Serialize)]
struct TrajectoryFile<'a> {
    learner: LearnerKind,
    eta: f64,
    horizon: f64,
    schedule: &'a Schedule,
    trajectory: &'a Trajectory,
}

#[derive(Serialize)]
struct ZeroSumComparison {
    reward_cont: f64,
    bounds: (f64, f64),
}

#[derive(Serialize)]
struct SimulateSummary {
    optimizer_total: f64,
    learner_total: f64,
    rounds: usize,
    zero_sum: Option<ZeroSumComparison>,
    csv: String,
    json: String,
}

pub fn simulate(args: &SimulateArgs<'_>) -> Result<(), CliError> {
    let g = load_game(args.game)?;
    let h0 = load_h0(args.h0, g.m())?;
    if args.learner != LearnerKind::BestResponse {
        check_positive("eta", args.eta)?;
    }
    let mode = match args.learner {
        LearnerKind::Replicator => ScheduleMode::Continuous,
        _ => ScheduleMode::Discrete,
    };
    let schedule = match args.horizon {
        Some(t) if t >= 0.0 => builtin_schedule(args.schedule, &g, mode, t, args, &h0)?,
        Some(t) => return Err(CliError::Usage(format!("--T must be non-negative, got {t}"))),
        None => None,
    };
    let schedule = match schedule {
        Some(s) => s,
        None => {
            let path = Path::new(args.schedule);
            if !path.exists() && args.horizon.is_none() && is_builtin(args.schedule) {
                return Err(CliError::Usage(format!("built-in schedule {:?} needs --T", args.schedule)));
            }
            let text = read(path)?;
            let s: Schedule = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            if let Some(t) = args.horizon {
                s.check_horizon(t)?;
            }
            s
        }
    };
    let horizon = schedule.horizon();
    let traj = run_schedule(&g, &schedule, args.learner, args.eta, Some(&h0))?;
    let csv_path = args.out_dir.join(format!("{}.csv", args.stem));
    let json_path = args.out_dir.join(format!("{}.json", args.stem));
    write_atomic(&csv_path, &io::trajectory_csv(&traj, g.m()))?;
    write_atomic(
        &json_path,
        &to_json(&TrajectoryFile {
            learner: args.learner,
            eta: args.eta,
            horizon,
            schedule: &schedule,
            trajectory: &traj,
        }),
    )?;
    let zero_sum = if g.is_zero_sum() && args.learner != LearnerKind::BestResponse {
        let cont = match schedule.mode() {
            ScheduleMode::Continuous => schedule.clone(),
            ScheduleMode::Discrete => as_continuous(&schedule)?,
        };
        Some(ZeroSumComparison {
            reward_cont: planner::reward_cont(&cont, &h0, horizon, &g, args.eta)?,
            bounds: planner::reward_bounds(g.a(), horizon, args.eta)?,
        })
    } else {
        None
    };
    emit(
        &SimulateSummary {
            optimizer_total: traj.optimizer_total,
            learner_total: traj.learner_total,
            rounds: traj.rounds.len(),
            zero_sum,
            csv: csv_path.display().to_string(),
            json: json_path.display().to_string(),
        },
        None,
    )
}

fn is_builtin(name: &str) -> bool {
    matches!(name, "uniform" | "constant-xstar" | "alternating") || name.starts_with("pure:")
}

fn load_graph(path: &Path) -> Result<DirectedGraph, CliError> {
    Ok(DirectedGraph::parse(&read(path)?)?)
}

#[derive(Serialize)]
struct ReduceSummary {
    n_vertices: usize,
    n_edges: usize,
    n_actions_opt: usize,
    n_actions_learner: usize,
    k: u64,
    #[serde(rename = "T")]
    horizon: u64,
    files: Vec<String>,
}

pub fn reduce(path: &Path, normalize: bool, out_dir: &Path) -> Result<(), CliError> {
    let g = load_graph(path)?;
    let inst = ocdp::reduce_hamiltonian(&g)?;
    let mut files = Vec::new();
    let raw = out_dir.join("instance.json");
    write_atomic(&raw, &to_json(&InstanceFile::from(&inst)))?;
    files.push(raw.display().to_string());
    if normalize {
        let norm = out_dir.join("instance_normalized.json");
        write_atomic(&norm, &to_json(&InstanceFile::from(&ocdp::normalize_payoffs(&inst)?)))?;
        files.push(norm.display().to_string());
    }
    emit(
        &ReduceSummary {
            n_vertices: g.n_vertices(),
            n_edges: g.edges().len(),
            n_actions_opt: inst.n_actions_opt(),
            n_actions_learner: inst.n_actions_learner(),
            k: inst.k(),
            horizon: inst.horizon(),
            files,
        },
        None,
    )
}

#[derive(Serialize)]
struct Verdict {
    ok: bool,
    reason: Option<String>,
    reward: Option<f64>,
    k: u64,
    sequence: Option<Vec<usize>>,
    learner: Option<Vec<String>>,
    cycle: Option<Vec<usize>>,
}

fn one_indexed(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

pub fn verify(graph: &Path, witness: &Path) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let claim = io::parse_claim(&read(witness)?)?;
    let inst = ocdp::reduce_hamiltonian(&g)?;
    let verdict = match claim {
        Claim::Cycle(c) => {
            let v = ocdp::verify_cycle(&g, &c)?;
            let learner = match &v.sequence {
                Some(s) => Some(labels(&inst, &ocdp::play_ocdp(&inst, s)?.learner_actions)),
                None => None,
            };
            Verdict {
                ok: v.ok,
                reason: v.reason.map(|r| r.as_str().to_string()),
                reward: v.reward,
                k: inst.k(),
                sequence: v.sequence.as_deref().map(one_indexed),
                learner,
                cycle: v.ok.then(|| rotated_cycle(&c, g.n_vertices())),
            }
        }
        Claim::Sequence(s) => {
            let p = ocdp::play_ocdp(&inst, &s)?;
            let (cycle, reason) = if p.total_reward >= inst.k() as f64 {
                match ocdp::extract_cycle(&inst, &p, &g)? {
                    Some(c) => (Some(one_indexed(&c)), None),
                    None => (None, Some("witness edges do not form a Hamiltonian cycle".to_string())),
                }
            } else {
                (None, Some("reward below k".to_string()))
            };
            Verdict {
                ok: cycle.is_some(),
                reason,
                reward: Some(p.total_reward),
                k: inst.k(),
                sequence: Some(one_indexed(&s)),
                learner: Some(labels(&inst, &p.learner_actions)),
                cycle,
            }
        }
    };
    emit(&verdict, None)
}

/// Cycle from vertex 1, 1-indexed, without the closing repeat.
fn rotated_cycle(c: &[usize], n: usize) -> Vec<usize> {
    let mut c = c.to_vec();
    if c.len() == n + 1 && c.first() == c.last() {
        c.pop();
    }
    if let Some(p) = c.iter().position(|&v| v == 0) {
        c.rotate_left(p);
    }
    one_indexed(&c)
}

fn labels(inst: &OcdpInstance, actions: &[usize]) -> Vec<String> {
    actions.iter().map(|&j| inst.labels().columns[j].clone()).collect()
}

#[derive(Serialize)]
struct BruteSummary {
    max_reward: f64,
    sequence: Vec<usize>,
    learner: Vec<String>,
    k: u64,
    answer: &'static str,
    sequences: u64,
}

pub fn brute(source: &Path, cap: u64, out: Option<&Path>) -> Result<(), CliError> {
    let (inst, graph) = match io::parse_ocdp_source(&read(source)?)? {
        OcdpSource::Graph(g) => (ocdp::reduce_hamiltonian(&g)?, Some(g)),
        OcdpSource::Instance(i) => {
            let g = DirectedGraph::new(i.n_vertices(), i.edges().to_vec())?;
            (i, Some(g))
        }
    };
    let best = ocdp::brute_force_ocdp(&inst, cap)?;
    let playout = ocdp::play_ocdp(&inst, &best.sequence)?;
    if let Some(p) = out {
        let cycle = match (&graph, best.reaches_k) {
            (Some(g), true) => ocdp::extract_cycle(&inst, &playout, g)?,
            _ => None,
        };
        write_atomic(p, &to_json(&WitnessFile::new(&inst, &playout, cycle.as_deref())))?;
    }
    emit(
        &BruteSummary {
            max_reward: best.reward,
            sequence: one_indexed(&best.sequence),
            learner: labels(&inst, &playout.learner_actions),
            k: inst.k(),
            answer: if best.reaches_k { "YES" } else { "NO" },
            sequences: best.sequences_total,
        },
        None,
    )
}

pub fn battery(seed: u64, count: usize, only: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    let cfg = BatteryConfig { seed, game_count: count };
    let outcomes: Vec<CriterionOutcome> = if only.is_empty() {
        battery::run_all(&cfg)
    } else {
        only.iter()
            .map(|&id| battery::run_criterion(id, &cfg).ok_or_else(|| CliError::Usage(format!("no criterion {id}"))))
            .collect::<Result<_, _>>()?
    };
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    if let Some(p) = out {
        write_atomic(p, &to_json(&outcomes))?;
    }
    if failed > 0 {
        return Err(CliError::BatteryFailed(failed));
    }
    Ok(())
}
