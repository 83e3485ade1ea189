mod common;

use std::time::Duration;

use common::{fill_setups, instance, machine, op, random_instance, Shape};
use opsched::generator::{generate, GenParams, GenRng};
use opsched::milp::evaluate_schedule;
use opsched::solvers::{brute_force, greedy_result, solve_exact, solve_greedy, ExactOptions, Status};
use opsched::{big_m_constants, check_schedule, makespan, FixedStart, Instance, OpPair, Schedule};

fn assert_clean(inst: &Instance, s: &Schedule) {
    let report = check_schedule(inst, s);
    assert!(report.is_empty(), "{report:?}");
    let bigm = big_m_constants(inst);
    let ev = evaluate_schedule(inst, s, &bigm).unwrap();
    assert!(ev.is_feasible(), "{:?}", ev.violations);
    assert!(makespan(s) <= bigm.m2);
}

#[test]
fn brute_single_op_prefers_fast_machine() {
    let mut inst = instance(vec![machine(1, &[]), machine(2, &[])], vec![op(1, 1, &[(1, 5), (2, 9)])], vec![]);
    fill_setups(&mut inst, 1, 0);
    let r = brute_force(&inst).unwrap();
    assert_eq!(r.status, Status::Optimal);
    assert_eq!(r.makespan, Some(6));
    assert_eq!(r.schedule.as_ref().unwrap().get(1).unwrap().machine, 1);
}

#[test]
fn brute_parallel_ops() {
    let mut inst = instance(
        vec![machine(1, &[]), machine(2, &[])],
        vec![op(1, 1, &[(1, 5), (2, 5)]), op(2, 2, &[(1, 5), (2, 5)])],
        vec![],
    );
    fill_setups(&mut inst, 0, 0);
    assert_eq!(brute_force(&inst).unwrap().makespan, Some(5));
}

#[test]
fn brute_chain_with_setups() {
    let mut inst = instance(vec![machine(1, &[])], vec![op(1, 1, &[(1, 3)]), op(2, 1, &[(1, 4)])], vec![(1, 2)]);
    fill_setups(&mut inst, 1, 2);
    assert_eq!(brute_force(&inst).unwrap().makespan, Some(10));
}

#[test]
fn single_op_greedy_matches_brute() {
    let mut inst = instance(vec![machine(1, &[(2, 4)]), machine(2, &[])], vec![op(1, 1, &[(1, 5), (2, 9)])], vec![]);
    fill_setups(&mut inst, 1, 0);
    let g = solve_greedy(&inst).unwrap();
    let b = brute_force(&inst).unwrap();
    assert_eq!(Some(&g), b.schedule.as_ref());
}

fn small_batch(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = GenRng::new(seed);
    (0..count)
        .map(|_| random_instance(&mut rng, Shape { max_ops: 6, ..Shape::default() }))
        .collect()
}

#[test]
fn exact_matches_brute_force() {
    let mut optimal = 0;
    for inst in small_batch(2024, 80) {
        let b = brute_force(&inst).unwrap();
        let e = solve_exact(&inst, &ExactOptions::default()).unwrap();
        if b.status == Status::Infeasible {
            assert_eq!(e.status, Status::Infeasible, "{}", inst.to_json_pretty());
            continue;
        }
        assert_eq!(e.status, Status::Optimal);
        assert_eq!(e.makespan, b.makespan, "{}", inst.to_json_pretty());
        assert_eq!(e.lower_bound, e.makespan.unwrap());
        assert_clean(&inst, e.schedule.as_ref().unwrap());
        assert_clean(&inst, b.schedule.as_ref().unwrap());
        optimal += 1;
    }
    assert!(optimal >= 50, "{optimal}");
}

#[test]
fn exact_matches_brute_on_generated_instances() {
    let mut n = 0;
    for seed in 0..60 {
        let params = GenParams { n: 2, o_min: 1, o_max: 3, m_min: 1, m_max: 2, q: 1, seed };
        let inst = generate(&params).unwrap();
        if inst.operations.len() > 6 {
            continue;
        }
        let b = brute_force(&inst).unwrap();
        let e = solve_exact(&inst, &ExactOptions::default()).unwrap();
        assert_eq!(e.status, Status::Optimal);
        assert_eq!(e.makespan, b.makespan);
        n += 1;
    }
    assert!(n >= 50);
}

#[test]
fn greedy_is_never_better_than_exact() {
    for inst in small_batch(77, 60) {
        let e = solve_exact(&inst, &ExactOptions::default()).unwrap();
        let Ok(g) = solve_greedy(&inst) else { continue };
        assert_clean(&inst, &g);
        if let Some(opt) = e.makespan {
            assert!(makespan(&g) >= opt);
        }
    }
}

#[test]
fn greedy_result_reports_feasible() {
    let inst = &small_batch(5, 1)[0];
    let r = greedy_result(inst).unwrap();
    assert_eq!(r.status, Status::Feasible);
    assert_eq!(r.makespan, Some(makespan(r.schedule.as_ref().unwrap())));
}

#[test]
fn zero_time_limit_returns_greedy_incumbent() {
    for inst in small_batch(8, 10) {
        let Ok(g) = solve_greedy(&inst) else { continue };
        let opts = ExactOptions { time_limit: Some(Duration::ZERO), node_limit: None };
        let r = solve_exact(&inst, &opts).unwrap();
        assert_eq!(r.status, Status::Limit);
        assert_eq!(r.schedule.as_ref(), Some(&g));
        assert!(r.lower_bound <= r.makespan.unwrap());
    }
}

#[test]
fn node_limit_stops_search() {
    let params = GenParams { n: 4, o_min: 4, o_max: 6, m_min: 2, m_max: 3, q: 1, seed: 3 };
    let inst = generate(&params).unwrap();
    let r = solve_exact(&inst, &ExactOptions { time_limit: None, node_limit: Some(5) }).unwrap();
    assert_eq!(r.status, Status::Limit);
    assert!(r.nodes <= 5);
    assert!(r.lower_bound <= r.makespan.unwrap());
    let gap = r.gap.unwrap();
    assert!((0.0..=1.0).contains(&gap));
    assert_clean(&inst, r.schedule.as_ref().unwrap());
}

#[test]
fn colliding_fixed_operations_are_infeasible() {
    let mut inst = instance(vec![machine(1, &[])], vec![op(1, 1, &[(1, 5)]), op(2, 2, &[(1, 5)])], vec![]);
    fill_setups(&mut inst, 0, 0);
    inst.operations[0].fixed = Some(FixedStart { machine: 1, start: 3 });
    inst.operations[1].fixed = Some(FixedStart { machine: 1, start: 5 });
    let r = solve_exact(&inst, &ExactOptions::default()).unwrap();
    assert_eq!(r.status, Status::Infeasible);
    assert!(r.schedule.is_none());
    assert_eq!(brute_force(&inst).unwrap().status, Status::Infeasible);
    assert!(solve_greedy(&inst).is_err());
}

#[test]
fn fixed_operation_forces_gap() {
    let mut inst = instance(vec![machine(1, &[])], vec![op(1, 1, &[(1, 4)]), op(2, 2, &[(1, 2)])], vec![]);
    fill_setups(&mut inst, 0, 1);
    inst.operations[1].fixed = Some(FixedStart { machine: 1, start: 3 });
    inst.machines[0].setup_between.insert(OpPair(2, 1), 0);
    // Op 1 cannot fit before 3 with its setup, so it follows op 2.
    let r = solve_exact(&inst, &ExactOptions::default()).unwrap();
    assert_eq!(r.makespan, Some(9));
    assert_eq!(brute_force(&inst).unwrap().makespan, Some(9));
}

#[test]
fn progress_is_monotone() {
    for seed in 0..10 {
        let params = GenParams { n: 3, o_min: 2, o_max: 4, m_min: 2, m_max: 3, q: 1, seed };
        let inst = generate(&params).unwrap();
        let r = solve_exact(&inst, &ExactOptions { time_limit: None, node_limit: Some(20_000) }).unwrap();
        assert!(!r.progress.is_empty());
        for w in r.progress.windows(2) {
            assert!(w[0].nodes <= w[1].nodes);
            assert!(w[0].lower_bound <= w[1].lower_bound);
            match (w[0].incumbent, w[1].incumbent) {
                (Some(a), Some(b)) => assert!(b <= a),
                (Some(_), None) => panic!("incumbent lost"),
                _ => {}
            }
        }
        let last = r.progress.last().unwrap();
        assert_eq!(last.incumbent, r.makespan);
    }
}

#[test]
fn solver_json_has_contract_fields() {
    let inst = &small_batch(11, 1)[0];
    let r = solve_exact(inst, &ExactOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json_pretty()).unwrap();
    for key in ["status", "makespan", "lower_bound", "gap", "nodes", "wall_ms", "schedule"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn generated_medium_instance_greedy_is_clean() {
    let params = GenParams { n: 10, o_min: 5, o_max: 10, m_min: 3, m_max: 6, q: 3, seed: 12 };
    let inst = generate(&params).unwrap();
    let s = solve_greedy(&inst).unwrap();
    assert_clean(&inst, &s);
}
