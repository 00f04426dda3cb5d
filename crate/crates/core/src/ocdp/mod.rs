//! Optimal control against a best-responding learner with pure optimizer
//! actions (OCDP), and the reduction from directed Hamiltonian cycle.
//!
//! Each edge `e_i = (v_j, u)` becomes an optimizer action. The learner has
//! one action `v_j` per vertex and one "in" action `v_in_j` per vertex. The
//! optimizer earns 1 exactly when the learner sits on the tail of the edge it
//! plays. The learner's payoffs steer its best response along the edge just
//! played, and the `v_in` columns absorb the learner once a vertex is
//! revisited before the cycle closes.
//!
//! Learner payoffs are kept as integer numerators over a common denominator
//! (20 before normalization, 160 after) so history comparisons and ties are
//! exact.

mod brute;
mod graph;

pub use brute::{brute_force_ocdp, BruteForceResult, DEFAULT_BRUTE_CAP};
pub use graph::DirectedGraph;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Learner payoffs of the reduction, in twentieths.
const OUT_OF_FIRST: i64 = -2; // −0.1
const OUT_OF_OTHER: i64 = -80; // −4
const INTO: i64 = 20; // 1
const LEAVE_MARK: i64 = 17; // 0.85
const RAW_DEN: i64 = 20;

/// Normalization `b ↦ (b + 4)/8`: numerator `b20 + 80` over 160.
const NORM_SHIFT: i64 = 80;
const NORM_DEN: i64 = 160;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OcdpInstance {
    a: Matrix,
    b_num: Vec<Vec<i64>>,
    b_den: i64,
    k: u64,
    horizon: u64,
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    labels: Labels,
    normalized: bool,
}

impl OcdpInstance {
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// Learner payoffs as reals.
    pub fn b(&self) -> Matrix {
        let den = self.b_den as f64;
        Matrix::from_rows(self.b_num.iter().map(|r| r.iter().map(|&v| v as f64 / den).collect::<Vec<_>>()))
            .expect("instance matrices are non-empty")
    }

    /// Learner payoffs as `(numerators, denominator)`.
    pub fn b_exact(&self) -> (&[Vec<i64>], i64) {
        (&self.b_num, self.b_den)
    }

    pub fn n_actions_opt(&self) -> usize {
        self.a.rows()
    }

    pub fn n_actions_learner(&self) -> usize {
        self.a.cols()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Edge `(from, to)` behind each optimizer action, 0-indexed.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

fn vertex_label(j: usize, n: usize) -> String {
    if j < n {
        format!("v_{}", j + 1)
    } else {
        format!("v_in_{}", j - n + 1)
    }
}

/// Builds the OCDP instance for `g` with `k = T = n + 1`.
pub fn reduce_hamiltonian(g: &DirectedGraph) -> Result<OcdpInstance> {
    if g.edges().is_empty() {
        return Err(Error::Invalid("empty graph: the reduction needs at least one edge".into()));
    }
    let n = g.n_vertices();
    let mut a = vec![vec![0.0; 2 * n]; g.edges().len()];
    let mut b = vec![vec![0i64; 2 * n]; g.edges().len()];
    for (i, &(from, to)) in g.edges().iter().enumerate() {
        a[i][from] = 1.0;
        b[i][from] = if from == 0 { OUT_OF_FIRST } else { OUT_OF_OTHER };
        b[i][to] = INTO;
        b[i][n + from] = LEAVE_MARK;
    }
    let labels = Labels {
        rows: g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| format!("e_{}=({},{})", i + 1, u + 1, v + 1))
            .collect(),
        columns: (0..2 * n).map(|j| vertex_label(j, n)).collect(),
    };
    Ok(OcdpInstance {
        a: Matrix::from_rows(a)?,
        b_num: b,
        b_den: RAW_DEN,
        k: n as u64 + 1,
        horizon: n as u64 + 1,
        n_vertices: n,
        edges: g.edges().to_vec(),
        labels,
        normalized: false,
    })
}

/// Maps learner payoffs through `b ↦ (b + 4)/8` into `[0, 1]`.
pub fn normalize_payoffs(inst: &OcdpInstance) -> Result<OcdpInstance> {
    if inst.normalized {
        return Err(Error::Precondition("instance is already normalized".into()));
    }
    let mut out = inst.clone();
    out.b_num = inst
        .b_num
        .iter()
        .map(|r| r.iter().map(|&v| v + NORM_SHIFT).collect())
        .collect();
    out.b_den = NORM_DEN;
    out.normalized = true;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OcdpPlayout {
    pub sequence: Vec<usize>,
    pub learner_actions: Vec<usize>,
    /// Learner history after each round.
    pub history_trace: Vec<Vec<f64>>,
    pub total_reward: f64,
}

/// First maximizer of an exact history vector.
pub(crate) fn first_argmax(h: &[i64]) -> usize {
    let mut best = 0;
    for (j, &v) in h.iter().enumerate().skip(1) {
        if v > h[best] {
            best = j;
        }
    }
    best
}

/// Plays `sequence` against the best-response learner from an all-zero history.
pub fn play_ocdp(inst: &OcdpInstance, sequence: &[usize]) -> Result<OcdpPlayout> {
    if sequence.len() as u64 != inst.horizon {
        return Err(Error::dim("action sequence length (T)", inst.horizon as usize, sequence.len()));
    }
    if let Some(&bad) = sequence.iter().find(|&&e| e >= inst.n_actions_opt()) {
        return Err(Error::Invalid(format!(
            "action {} outside 1..={}",
            bad + 1,
            inst.n_actions_opt()
        )));
    }
    let den = inst.b_den as f64;
    let mut h = vec![0i64; inst.n_actions_learner()];
    let mut learner_actions = Vec::with_capacity(sequence.len());
    let mut history_trace = Vec::with_capacity(sequence.len());
    let mut total = 0.0;
    for &e in sequence {
        let j = first_argmax(&h);
        learner_actions.push(j);
        total += inst.a[(e, j)];
        h.iter_mut().zip(&inst.b_num[e]).for_each(|(h, b)| *h += b);
        history_trace.push(h.iter().map(|&v| v as f64 / den).collect());
    }
    Ok(OcdpPlayout {
        sequence: sequence.to_vec(),
        learner_actions,
        history_trace,
        total_reward: total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleReason {
    NotSpanning,
    RepeatedVertex,
    MissingEdge,
    RewardShortfall,
}

impl CycleReason {
    pub fn as_str(self) -> &'static str {
        match self {
            CycleReason::NotSpanning => "not spanning",
            CycleReason::RepeatedVertex => "repeated vertex",
            CycleReason::MissingEdge => "missing edge",
            CycleReason::RewardShortfall => "reward shortfall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleVerdict {
    pub ok: bool,
    pub reason: Option<CycleReason>,
    /// Edge actions `p_1, …, p_n, p_1` when the cycle is valid.
    pub sequence: Option<Vec<usize>>,
    pub reward: Option<f64>,
}

impl CycleVerdict {
    fn fail(reason: CycleReason) -> Self {
        CycleVerdict {
            ok: false,
            reason: Some(reason),
            sequence: None,
            reward: None,
        }
    }
}

/// Checks that `cycle` (0-indexed vertices, optionally closed by repeating the
/// first) is a Hamiltonian cycle, rotates it to start at vertex 0, and replays
/// the induced edge sequence on the reduced instance.
pub fn verify_cycle(g: &DirectedGraph, cycle: &[usize]) -> Result<CycleVerdict> {
    let n = g.n_vertices();
    let mut c = cycle.to_vec();
    if c.len() == n + 1 && c.first() == c.last() {
        c.pop();
    }
    if c.iter().any(|&v| v >= n) {
        return Err(Error::Invalid(format!("cycle mentions a vertex outside 1..={n}")));
    }
    let mut seen = vec![false; n];
    for &v in &c {
        if std::mem::replace(&mut seen[v], true) {
            return Ok(CycleVerdict::fail(CycleReason::RepeatedVertex));
        }
    }
    if c.len() != n {
        return Ok(CycleVerdict::fail(CycleReason::NotSpanning));
    }
    let start = c.iter().position(|&v| v == 0).expect("spanning cycle contains vertex 0");
    c.rotate_left(start);
    let mut seq = Vec::with_capacity(n + 1);
    for i in 0..n {
        match g.edge_index(c[i], c[(i + 1) % n]) {
            Some(e) => seq.push(e),
            None => return Ok(CycleVerdict::fail(CycleReason::MissingEdge)),
        }
    }
    seq.push(seq[0]);
    let inst = reduce_hamiltonian(g)?;
    let reward = play_ocdp(&inst, &seq)?.total_reward;
    let ok = reward == (n + 1) as f64;
    Ok(CycleVerdict {
        ok,
        reason: (!ok).then_some(CycleReason::RewardShortfall),
        sequence: Some(seq),
        reward: Some(reward),
    })
}

/// Reads a Hamiltonian cycle from `v_1` off a reward-`k` play-out.
///
/// Returns `None` if the first `n` edges do not form such a cycle, which the
/// reduction rules out for genuine witnesses.
pub fn extract_cycle(inst: &OcdpInstance, playout: &OcdpPlayout, g: &DirectedGraph) -> Result<Option<Vec<usize>>> {
    if playout.total_reward < inst.k as f64 {
        return Err(Error::Precondition("sequence is not a witness".into()));
    }
    let n = g.n_vertices();
    if playout.sequence.len() < n {
        return Err(Error::dim("witness length", n, playout.sequence.len()));
    }
    let edges: Vec<(usize, usize)> = playout.sequence[..n]
        .iter()
        .map(|&e| {
            g.edges()
                .get(e)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("action {} is not an edge of the graph", e + 1)))
        })
        .collect::<Result<_>>()?;
    let cycle: Vec<usize> = edges.iter().map(|e| e.0).collect();
    let chained = edges.windows(2).all(|w| w[0].1 == w[1].0);
    let closes = edges.first().map(|e| e.0) == Some(0) && edges.last().map(|e| e.1) == Some(0);
    let mut seen = vec![false; n];
    let distinct = cycle.iter().all(|&v| !std::mem::replace(&mut seen[v], true));
    Ok((chained && closes && distinct).then_some(cycle))
}

/// JSON layout for instance export.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub a: Matrix,
    pub b: Matrix,
    pub n_actions_opt: usize,
    pub n_actions_learner: usize,
    pub k: u64,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub normalized: bool,
    pub edges: Vec<(usize, usize)>,
    pub labels: Labels,
}

impl From<&OcdpInstance> for InstanceFile {
    fn from(inst: &OcdpInstance) -> Self {
        InstanceFile {
            a: inst.a.clone(),
            b: inst.b(),
            n_actions_opt: inst.n_actions_opt(),
            n_actions_learner: inst.n_actions_learner(),
            k: inst.k,
            horizon: inst.horizon,
            normalized: inst.normalized,
            edges: inst.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect(),
            labels: inst.labels.clone(),
        }
    }
}

impl TryFrom<InstanceFile> for OcdpInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let den = if f.normalized { NORM_DEN } else { RAW_DEN };
        if f.a.rows() != f.b.rows() || f.a.cols() != f.b.cols() {
            return Err(Error::Invalid("instance matrices differ in shape".into()));
        }
        if f.a.rows() != f.n_actions_opt || f.a.cols() != f.n_actions_learner {
            return Err(Error::Invalid("instance action counts disagree with its matrices".into()));
        }
        if !f.a.cols().is_multiple_of(2) {
            return Err(Error::Invalid("learner action count must be even".into()));
        }
        let mut b_num = Vec::with_capacity(f.b.rows());
        for i in 0..f.b.rows() {
            let mut row = Vec::with_capacity(f.b.cols());
            for j in 0..f.b.cols() {
                let scaled = f.b[(i, j)] * den as f64;
                let r = scaled.round();
                if (scaled - r).abs() > 1e-6 {
                    return Err(Error::Invalid(format!(
                        "learner payoff {} at ({}, {}) is not a multiple of 1/{den}",
                        f.b[(i, j)],
                        i + 1,
                        j + 1
                    )));
                }
                row.push(r as i64);
            }
            b_num.push(row);
        }
        let n_vertices = f.a.cols() / 2;
        let edges = f
            .edges
            .iter()
            .map(|&(u, v)| {
                if u == 0 || v == 0 || u > n_vertices || v > n_vertices {
                    Err(Error::Invalid(format!("edge ({u}, {v}) out of range")))
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if edges.len() != f.a.rows() {
            return Err(Error::Invalid("one edge per optimizer action expected".into()));
        }
        Ok(OcdpInstance {
            a: f.a,
            b_num,
            b_den: den,
            k: f.k,
            horizon: f.horizon,
            n_vertices,
            edges,
            labels: f.labels,
            normalized: f.normalized,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The five-vertex example: e1=(1,5) e2=(5,2) e3=(1,2) e4=(2,4) e5=(4,1) e6=(4,3) e7=(3,1).
    pub(crate) fn example_graph() -> DirectedGraph {
        DirectedGraph::from_one_indexed(5, &[(1, 5), (5, 2), (1, 2), (2, 4), (4, 1), (4, 3), (3, 1)]).unwrap()
    }

    #[test]
    fn two_cycle_reduction() {
        let g = DirectedGraph::from_one_indexed(2, &[(1, 2), (2, 1)]).unwrap();
        let inst = reduce_hamiltonian(&g).unwrap();
        assert_eq!(inst.a().to_rows(), vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]]);
        assert_eq!((inst.k(), inst.horizon()), (3, 3));
        assert_eq!(inst.b().to_rows(), vec![vec![-0.1, 1.0, 0.85, 0.0], vec![1.0, -4.0, 0.0, 0.85]]);
        assert_eq!(inst.labels().columns, vec!["v_1", "v_2", "v_in_1", "v_in_2"]);
    }

    #[test]
    fn empty_graph_rejected() {
        let g = DirectedGraph::new(3, vec![]).unwrap();
        assert!(reduce_hamiltonian(&g).is_err());
    }

    #[test]
    fn normalization_values() {
        let g = DirectedGraph::from_one_indexed(3, &[(1, 2), (2, 3)]).unwrap();
        let inst = normalize_payoffs(&reduce_hamiltonian(&g).unwrap()).unwrap();
        let b = inst.b();
        // Row e1 = (1,2): v_1 −0.1 → 0.4875, v_2 1 → 0.625, v_in_1 0.85 → 0.60625, rest 0 → 0.5.
        assert_eq!(b.row(0), &[0.4875, 0.625, 0.5, 0.60625, 0.5, 0.5]);
        // Row e2 = (2,3): v_2 −4 → 0.
        assert_eq!(b[(1, 1)], 0.0);
        assert!(normalize_payoffs(&inst).is_err());
        assert!(b.min_entry() >= 0.0 && b.max_entry() <= 1.0);
    }

    #[test]
    fn playout_rejects_bad_input() {
        let inst = reduce_hamiltonian(&example_graph()).unwrap();
        assert!(play_ocdp(&inst, &[0, 1, 2]).is_err());
        assert!(play_ocdp(&inst, &[0, 1, 2, 3, 4, 9]).is_err());
    }

    #[test]
    fn edge_three_first() {
        let inst = reduce_hamiltonian(&example_graph()).unwrap();
        // e3 = (1,2) first: reward 1, then the learner moves to v_2.
        let p = play_ocdp(&inst, &[2, 3, 5, 6, 4, 0]).unwrap();
        assert_eq!(inst.a()[(2, p.learner_actions[0])], 1.0);
        assert_eq!(p.learner_actions[1], 1);
    }

    #[test]
    fn verify_reasons() {
        let g = example_graph();
        let v = verify_cycle(&g, &[0, 4, 1, 3]).unwrap();
        assert_eq!(v.reason, Some(CycleReason::NotSpanning));
        let v = verify_cycle(&g, &[0, 4, 1, 3, 1]).unwrap();
        assert_eq!(v.reason, Some(CycleReason::RepeatedVertex));
        let v = verify_cycle(&g, &[0, 1, 4, 3, 2]).unwrap();
        assert_eq!(v.reason, Some(CycleReason::MissingEdge));
        assert!(verify_cycle(&g, &[0, 9]).is_err());
    }

    #[test]
    fn instance_file_round_trip() {
        for normalize in [false, true] {
            let mut inst = reduce_hamiltonian(&example_graph()).unwrap();
            if normalize {
                inst = normalize_payoffs(&inst).unwrap();
            }
            let json = serde_json::to_string(&InstanceFile::from(&inst)).unwrap();
            let back: InstanceFile = serde_json::from_str(&json).unwrap();
            assert_eq!(OcdpInstance::try_from(back).unwrap(), inst);
        }
    }
}
