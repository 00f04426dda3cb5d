use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{first_argmax, OcdpInstance};
use crate::error::{Error, Result};

/// Default limit on the number of action sequences `|E|^T`.
pub const DEFAULT_BRUTE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    /// Best sequence; ties go to the lexicographically smallest one.
    pub sequence: Vec<usize>,
    pub reward: f64,
    pub sequences_total: u64,
    pub reaches_k: bool,
}

/// Exhaustive search for the reward-maximizing optimizer sequence.
///
/// Rewards are integers, so a branch is pruned once its current reward plus
/// the remaining rounds cannot beat the best found.
pub fn brute_force_ocdp(inst: &OcdpInstance, cap: u64) -> Result<BruteForceResult> {
    let e = inst.n_actions_opt() as u64;
    let t = inst.horizon();
    let total = u32::try_from(t)
        .ok()
        .and_then(|t| e.checked_pow(t))
        .filter(|&c| c <= cap)
        .ok_or_else(|| {
            let exact = u32::try_from(t)
                .ok()
                .and_then(|t| e.checked_pow(t))
                .map_or_else(|| format!("{e}^{t}"), |c| c.to_string());
            Error::ResourceCap(format!(
                "brute force would enumerate {exact} sequences, above the cap of {cap}"
            ))
        })?;
    let a = inst.a();
    let (b, _) = inst.b_exact();
    let rewards: Vec<Vec<u64>> = (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| u64::from(a[(i, j)] > 0.0)).collect())
        .collect();
    let global = AtomicU64::new(0);
    let branches: Vec<(u64, Vec<usize>)> = (0..a.rows())
        .into_par_iter()
        .map(|first| {
            let mut search = Search {
                rewards: &rewards,
                b,
                horizon: t as usize,
                global: &global,
                best: None,
                path: vec![first],
            };
            let mut h = vec![0i64; a.cols()];
            let r = search.rewards[first][first_argmax(&h)];
            h.iter_mut().zip(&b[first]).for_each(|(h, d)| *h += d);
            search.descend(&mut h, r);
            search.best.unwrap_or((0, Vec::new()))
        })
        .collect();
    // Lowest branch index wins ties, matching a sequential search.
    let (reward, sequence) = branches
        .into_iter()
        .filter(|(_, s)| !s.is_empty())
        .fold(None::<(u64, Vec<usize>)>, |acc, cand| match acc {
            Some(best) if best.0 >= cand.0 => Some(best),
            _ => Some(cand),
        })
        .expect("at least one branch records a sequence");
    Ok(BruteForceResult {
        reaches_k: reward >= inst.k(),
        sequence,
        reward: reward as f64,
        sequences_total: total,
    })
}

struct Search<'a> {
    rewards: &'a [Vec<u64>],
    b: &'a [Vec<i64>],
    horizon: usize,
    global: &'a AtomicU64,
    best: Option<(u64, Vec<usize>)>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, h: &mut [i64], reward: u64) {
        let remaining = (self.horizon - self.path.len()) as u64;
        let local = self.best.as_ref().map(|b| b.0);
        // Strict on the shared bound so equal-reward branches still report.
        if reward + remaining < self.global.load(Ordering::Relaxed) {
            return;
        }
        if local.is_some_and(|l| reward + remaining <= l) {
            return;
        }
        if remaining == 0 {
            self.best = Some((reward, self.path.clone()));
            self.global.fetch_max(reward, Ordering::Relaxed);
            return;
        }
        let j = first_argmax(h);
        for i in 0..self.rewards.len() {
            h.iter_mut().zip(&self.b[i]).for_each(|(h, d)| *h += d);
            self.path.push(i);
            self.descend(h, reward + self.rewards[i][j]);
            self.path.pop();
            h.iter_mut().zip(&self.b[i]).for_each(|(h, d)| *h -= d);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ocdp::{play_ocdp, reduce_hamiltonian, DirectedGraph};

    #[test]
    fn finds_witness_on_triangle() {
        let g = DirectedGraph::from_one_indexed(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let inst = reduce_hamiltonian(&g).unwrap();
        let r = brute_force_ocdp(&inst, DEFAULT_BRUTE_CAP).unwrap();
        assert!(r.reaches_k);
        assert_eq!(r.sequence, vec![0, 1, 2, 0]);
        assert_eq!(r.sequences_total, 81);
        assert_eq!(play_ocdp(&inst, &r.sequence).unwrap().total_reward, r.reward);
    }

    #[test]
    fn path_graph_falls_short() {
        let g = DirectedGraph::from_one_indexed(3, &[(1, 2), (2, 3)]).unwrap();
        let inst = reduce_hamiltonian(&g).unwrap();
        let r = brute_force_ocdp(&inst, DEFAULT_BRUTE_CAP).unwrap();
        assert!(!r.reaches_k);
        assert!(r.reward < 4.0);
    }

    #[test]
    fn cap_reports_exact_count() {
        let g = DirectedGraph::from_one_indexed(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let inst = reduce_hamiltonian(&g).unwrap();
        match brute_force_ocdp(&inst, 80) {
            Err(Error::ResourceCap(msg)) => assert!(msg.contains("81"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
