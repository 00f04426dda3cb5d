//! Text formats shared by the library and the command-line tool.
//!
//! Parsing is pure; callers own the file system.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, NoPureWitness};
use crate::learners::Trajectory;
use crate::matrix::{Matrix, SimplexVector};
use crate::ocdp::{DirectedGraph, OcdpInstance, OcdpPlayout};

#[derive(Deserialize)]
#[serde(untagged)]
enum GameRepr {
    Pair { a: Matrix, b: Matrix },
    Single(Matrix),
}

/// Reads a game from JSON (`{"rows","cols","data"}` or `{"a": …, "b": …}`) or
/// from plain text: rows of whitespace-separated decimals, with an optional
/// second block for `B` after a blank line. A lone `A` is zero-sum.
pub fn parse_game(text: &str) -> Result<BimatrixGame> {
    if text.trim_start().starts_with('{') {
        let repr: GameRepr = serde_json::from_str(text).map_err(json_err)?;
        return match repr {
            GameRepr::Pair { a, b } => BimatrixGame::new(a, b),
            GameRepr::Single(a) => Ok(BimatrixGame::zero_sum(a)),
        };
    }
    let mut blocks: Vec<Vec<(usize, Vec<f64>)>> = vec![Vec::new()];
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            if !blocks.last().expect("non-empty").is_empty() {
                blocks.push(Vec::new());
            }
            continue;
        }
        let mut row = Vec::new();
        let mut from = 0;
        for tok in line.split_whitespace() {
            let col = line[from..].find(tok).map_or(from, |p| p + from);
            from = col + tok.len();
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                column: col + 1,
                message: format!("expected a decimal number, found {tok:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: ln + 1,
                    column: col + 1,
                    message: "entries must be finite".into(),
                });
            }
            row.push(v);
        }
        let block = blocks.last_mut().expect("non-empty");
        if let Some((_, first)) = block.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: ln + 1,
                    column: 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        block.push((ln + 1, row));
    }
    blocks.retain(|b| !b.is_empty());
    let to_matrix = |b: &[(usize, Vec<f64>)]| Matrix::from_rows(b.iter().map(|(_, r)| r));
    match blocks.as_slice() {
        [] => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty matrix file".into(),
        }),
        [a] => Ok(BimatrixGame::zero_sum(to_matrix(a)?)),
        [a, b] => BimatrixGame::new(to_matrix(a)?, to_matrix(b)?),
        [_, _, extra, ..] => Err(Error::Parse {
            line: extra[0].0,
            column: 1,
            message: "at most two matrix blocks (A, then B) are allowed".into(),
        }),
    }
}

/// Reads an initial history or any bare vector: a JSON array or whitespace-separated decimals.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(json_err);
    }
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut from = 0;
        for tok in line.split_whitespace() {
            let col = line[from..].find(tok).map_or(from, |p| p + from);
            from = col + tok.len();
            out.push(tok.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                column: col + 1,
                message: format!("expected a decimal number, found {tok:?}"),
            })?);
        }
    }
    Ok(out)
}

pub(crate) fn json_err(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// CSV with header `t,opt_reward,learner_reward,opt_total,y_1..y_m`.
pub fn trajectory_csv(traj: &Trajectory, m: usize) -> String {
    let mut s = String::from("t,opt_reward,learner_reward,opt_total");
    for j in 1..=m {
        s.push_str(&format!(",y_{j}"));
    }
    s.push('\n');
    let mut total = 0.0;
    for r in &traj.rounds {
        total += r.optimizer_reward;
        s.push_str(&format!("{},{},{},{}", r.t, r.optimizer_reward, r.learner_reward, total));
        for y in &r.learner_strategy {
            s.push_str(&format!(",{y}"));
        }
        s.push('\n');
    }
    s
}

/// Planner report written by `plan`.
#[derive(Debug, Clone, Serialize)]
pub struct PlannerReport {
    pub value: f64,
    pub x_star: SimplexVector,
    pub r_star: f64,
    pub epsilon: f64,
    pub bounds: (f64, f64),
    pub k: usize,
    pub asymptotic_bound: f64,
    pub assumption1: AssumptionStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionStatus {
    pub holds: bool,
    /// 1-indexed columns `i1`, `i2` and row `k`.
    pub witness: Option<WitnessReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub x: SimplexVector,
    pub i1: usize,
    pub i2: usize,
    pub k: usize,
}

impl From<&NoPureWitness> for WitnessReport {
    fn from(w: &NoPureWitness) -> Self {
        WitnessReport {
            x: w.x.clone(),
            i1: w.i1 + 1,
            i2: w.i2 + 1,
            k: w.k_action + 1,
        }
    }
}

/// OCDP witness export; edges and vertices 1-indexed.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessFile {
    pub sequence: Vec<usize>,
    pub learner: Vec<String>,
    pub reward: f64,
    pub cycle: Option<Vec<usize>>,
}

impl WitnessFile {
    pub fn new(inst: &OcdpInstance, playout: &OcdpPlayout, cycle: Option<&[usize]>) -> Self {
        WitnessFile {
            sequence: playout.sequence.iter().map(|e| e + 1).collect(),
            learner: playout
                .learner_actions
                .iter()
                .map(|&j| inst.labels().columns[j].clone())
                .collect(),
            reward: playout.total_reward,
            cycle: cycle.map(|c| c.iter().map(|v| v + 1).collect()),
        }
    }
}

/// A claimed certificate for `verify`, 0-indexed once parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    Cycle(Vec<usize>),
    Sequence(Vec<usize>),
}

#[derive(Deserialize)]
struct ClaimRepr {
    #[serde(default)]
    cycle: Option<Vec<usize>>,
    #[serde(default)]
    sequence: Option<Vec<usize>>,
}

/// Reads a witness: JSON with a `cycle` (vertices) or `sequence` (edge ids)
/// array, or a text line `cycle 1 5 2 4 3` / `sequence 1 2 4 6 7 1`.
/// Ids are 1-indexed. A JSON file holding both prefers the cycle.
pub fn parse_claim(text: &str) -> Result<Claim> {
    let (kind, ids) = if text.trim_start().starts_with('{') {
        let r: ClaimRepr = serde_json::from_str(text).map_err(json_err)?;
        match (r.cycle, r.sequence) {
            (Some(c), _) => ("cycle", c),
            (None, Some(s)) => ("sequence", s),
            (None, None) => {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: "witness needs a \"cycle\" or \"sequence\" array".into(),
                })
            }
        }
    } else {
        let line_no = text.lines().position(|l| !l.trim().is_empty()).unwrap_or(0);
        let line = text.lines().nth(line_no).unwrap_or("");
        let mut toks = line.split_whitespace();
        let kind = match toks.next() {
            Some("cycle") => "cycle",
            Some("sequence") => "sequence",
            _ => {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: 1,
                    message: "expected \"cycle\" or \"sequence\" followed by ids".into(),
                })
            }
        };
        let ids = toks
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    column: line.find(t).unwrap_or(0) + 1,
                    message: format!("expected a positive id, found {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        (kind, ids)
    };
    if ids.contains(&0) {
        return Err(Error::Invalid("witness ids are 1-indexed".into()));
    }
    let ids = ids.into_iter().map(|v| v - 1).collect();
    Ok(if kind == "cycle" { Claim::Cycle(ids) } else { Claim::Sequence(ids) })
}

/// Either a graph (edge list or DOT) or an exported instance JSON.
pub enum OcdpSource {
    Graph(DirectedGraph),
    Instance(OcdpInstance),
}

pub fn parse_ocdp_source(text: &str) -> Result<OcdpSource> {
    if text.trim_start().starts_with('{') {
        let f: crate::ocdp::InstanceFile = serde_json::from_str(text).map_err(json_err)?;
        return Ok(OcdpSource::Instance(OcdpInstance::try_from(f)?));
    }
    DirectedGraph::parse(text).map(OcdpSource::Graph)
}
