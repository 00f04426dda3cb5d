//! Worked examples: the value-one asymptotic game and the five-vertex reduction.

use strategizer_core::battery::{asymptotic_example_game, example_graph};
use strategizer_core::game::{self, BimatrixGame, DEFAULT_TOL};
use strategizer_core::ocdp::{self, CycleReason, DirectedGraph};
use strategizer_core::planner;
use strategizer_core::SimplexVector;

#[test]
fn asymptotic_game_value_and_best_responses() {
    let a = asymptotic_example_game(3);
    let v = game::game_value(&a).unwrap();
    assert!((v.value - 1.0).abs() < 1e-9);
    let x = SimplexVector::new(vec![0.0, 0.0, 0.5, 0.5, 0.0]).unwrap();
    assert_eq!(a.left_mul(x.weights()), vec![1.5, 1.5, 3.0, 2.5, 1.5, 1.0]);
    let g = BimatrixGame::zero_sum(a.clone());
    assert_eq!(game::best_response_set(&x, &g, DEFAULT_TOL).unwrap(), vec![5]);
    assert!(game::is_minmax(&a, &x, 1.0, 1e-9));
    assert_eq!(game::min_br_minmax(&a, DEFAULT_TOL).unwrap().k, 1);
}

#[test]
fn asymptotic_game_reward_approaches_t_plus_log_six() {
    let a = asymptotic_example_game(3);
    let x = SimplexVector::new(vec![0.0, 0.0, 0.5, 0.5, 0.0]).unwrap();
    for t in [50.0, 200.0] {
        let r = planner::reward_constant(&a, &[0.0; 6], &x, t, 1.0);
        assert!((r - (t + 6f64.ln())).abs() < 0.01, "T = {t}: {r}");
        let opt = planner::optimize_continuous(&a, &[0.0; 6], t, 1.0, 1e-6).unwrap();
        assert!(opt.r_star >= r - 1e-6);
        assert!(opt.r_star <= t + 6f64.ln() + 1e-6);
    }
    let lower = planner::asymptotic_lower_bound(&a, 200.0, 1.0).unwrap();
    assert!((lower - (200.0 + 6f64.ln())).abs() < 1e-6);
}

#[test]
fn verify_rotated_cycle() {
    let g = example_graph();
    // 1→5→2→4→3→1 listed from vertex 4.
    let v = ocdp::verify_cycle(&g, &[3, 2, 0, 4, 1]).unwrap();
    assert!(v.ok);
    assert_eq!(v.sequence.unwrap(), vec![0, 1, 3, 5, 6, 0]);
    assert_eq!(v.reward, Some(6.0));
    let closed = ocdp::verify_cycle(&g, &[0, 4, 1, 3, 2, 0]).unwrap();
    assert!(closed.ok);
    assert_eq!(ocdp::verify_cycle(&g, &[0, 4, 1]).unwrap().reason, Some(CycleReason::NotSpanning));
}

#[test]
fn extract_cycle_examples() {
    let g = example_graph();
    let inst = ocdp::reduce_hamiltonian(&g).unwrap();
    let best = ocdp::brute_force_ocdp(&inst, ocdp::DEFAULT_BRUTE_CAP).unwrap();
    assert_eq!(best.reward, 6.0);
    let p = ocdp::play_ocdp(&inst, &best.sequence).unwrap();
    assert_eq!(ocdp::extract_cycle(&inst, &p, &g).unwrap(), Some(vec![0, 4, 1, 3, 2]));

    let two = DirectedGraph::from_one_indexed(2, &[(1, 2), (2, 1)]).unwrap();
    let inst2 = ocdp::reduce_hamiltonian(&two).unwrap();
    let p2 = ocdp::play_ocdp(&inst2, &[0, 1, 0]).unwrap();
    assert_eq!(p2.total_reward, 3.0);
    assert_eq!(ocdp::extract_cycle(&inst2, &p2, &two).unwrap(), Some(vec![0, 1]));

    // e1, e2, e4, e6 then e5 back to v1 early: reward 5 at most.
    let short = ocdp::play_ocdp(&inst, &[0, 1, 3, 4, 0, 0]).unwrap();
    assert!(short.total_reward < 6.0);
    assert!(ocdp::extract_cycle(&inst, &short, &g).is_err());
}

#[test]
fn deleting_e2_removes_every_witness() {
    let g = example_graph().without_edge(1).unwrap();
    let inst = ocdp::reduce_hamiltonian(&g).unwrap();
    let best = ocdp::brute_force_ocdp(&inst, ocdp::DEFAULT_BRUTE_CAP).unwrap();
    assert_eq!(best.sequences_total, 6u64.pow(6));
    assert!(best.reward <= 5.0);
    assert!(!best.reaches_k);
}

#[test]
fn repeated_non_tail_action_earns_nothing_first() {
    let g = example_graph();
    let inst = ocdp::reduce_hamiltonian(&g).unwrap();
    // e2 = (5,2) does not leave v1, where the learner opens.
    let p = ocdp::play_ocdp(&inst, &[1; 6]).unwrap();
    assert_eq!(p.learner_actions[0], 0);
    assert_eq!(inst.a()[(1, 0)], 0.0);
}
