//! Small worked examples for the reduction, the solver's building blocks and
//! the end-to-end entry points. Toy instances are referred to by case label.

mod common;

use common::{golden_dir, load_case, GoldenCase};
use invspan::family::{FamilyDescriptor, Oracle};
use invspan::feasibility::{compute_m_values, feasibility_witness};
use invspan::model::{build_deviation, is_feasible_deviation, Instance};
use invspan::rational::{rat, ExtRational, Rational};
use invspan::reduce::{
    all_subproblems, candidate_intervals, interval_pairs, lift_solution, normalize_bounds_and_order, Interval,
};
use invspan::solver::{
    classify, initialize, iterate_case, solve, solve_multi, CaseLabel, FEval, SizeClass, SolveOptions, SolveOutcome,
    Status, Step,
};
use num_traits::Zero;

const NEG: ExtRational = ExtRational::NegInf;
const POS: ExtRational = ExtRational::PosInf;

fn fin(v: i64) -> ExtRational {
    ExtRational::Finite(rat(v))
}

fn case(name: &str) -> GoldenCase {
    load_case(&golden_dir().join(format!("{name}.json")))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn run(inst: &Instance) -> SolveOutcome {
    solve_multi(inst, &inst.family, &SolveOptions::default()).unwrap()
}

#[test]
fn unbounded_instance_keeps_bounds_and_has_one_cell() {
    let inst = case("case_1_1").instance;
    let norm = normalize_bounds_and_order(&inst);
    assert_eq!(norm.order, vec![0, 1, 2, 3]);
    assert_eq!(norm.inst.lower, inst.lower);
    assert_eq!(norm.inst.upper, inst.upper);
    let (deltas, sums) = candidate_intervals(&norm);
    assert_eq!(deltas, vec![Interval::new(NEG, POS)]);
    assert_eq!(sums, vec![Interval::new(NEG, POS)]);

    let subs = all_subproblems(&inst).unwrap();
    assert_eq!(subs.len(), 1);
    let sub = &subs[0];
    assert!(sub.s0.iter().all(|&z| !z));
    assert_eq!((&sub.l_in, &sub.u_in, &sub.l_out, &sub.u_out), (&NEG, &POS, &NEG, &POS));
    assert_eq!(sub.costs, inst.costs);
}

#[test]
fn off_fstar_order_follows_scaled_lower_bounds() {
    let mut inst = case("case_2_1_1").instance;
    inst.family = FamilyDescriptor::Explicit(vec![vec![0], vec![1], vec![2]]);
    inst.fstar = vec![0];
    inst.lower = vec![fin(0), fin(-2), fin(-1)];
    let norm = normalize_bounds_and_order(&inst);
    assert_eq!(norm.order, vec![0, 2, 1]);
}

#[test]
fn delta_cells_from_off_fstar_lower_bounds() {
    // F* = {s1}; off F* ℓ = (0, −1), u = (2, 2); unit weights.
    let inst = Instance {
        ids: vec!["s1".into(), "s2".into(), "s3".into()],
        family: FamilyDescriptor::Explicit(vec![vec![0], vec![1], vec![2]]),
        fstar: vec![0],
        costs: vec![ints(&[1, 0, 0])],
        weights: ints(&[1, 1, 1]),
        lower: vec![NEG, fin(0), fin(-1)],
        upper: vec![POS, fin(2), fin(2)],
    };
    let (deltas, _) = candidate_intervals(&normalize_bounds_and_order(&inst));
    assert_eq!(
        deltas,
        vec![Interval::new(fin(0), fin(2)), Interval::new(fin(-1), fin(0))]
    );
}

#[test]
fn case_2_1_2_1_bounds_give_a_single_cell() {
    let g = case("case_2_1_2_1");
    let norm = normalize_bounds_and_order(&g.instance);
    let pairs = interval_pairs(&norm);
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].delta_interval, Interval::new(NEG, fin(0)));
    assert_eq!(pairs[0].sum_interval, Interval::new(NEG, fin(0)));
    let subs = all_subproblems(&g.instance).unwrap();
    assert_eq!(subs.len(), 1);
    let sub = &subs[0];
    assert!(sub.s0.iter().all(|&z| !z));
    assert_eq!(
        (&sub.l_in, &sub.u_in, &sub.l_out, &sub.u_out),
        (&NEG, &fin(0), &NEG, &fin(0))
    );
}

#[test]
fn frozen_element_shifts_its_cost_and_lifts_back() {
    // s3 sits off F* with ℓ = 1, above every F* upper bound, so it is pinned at 1.
    let inst = Instance {
        ids: vec!["s1".into(), "s2".into(), "s3".into()],
        family: FamilyDescriptor::Explicit(vec![vec![0, 1], vec![2]]),
        fstar: vec![0, 1],
        costs: vec![ints(&[1, 1, 5])],
        weights: ints(&[1, 1, 1]),
        lower: vec![NEG, NEG, fin(1)],
        upper: vec![fin(0), fin(0), POS],
    };
    let subs = all_subproblems(&inst).unwrap();
    assert!(!subs.is_empty());
    for sub in &subs {
        assert!(sub.s0[2]);
        assert_eq!(sub.fixed[2], Some(rat(1)));
        assert_eq!(sub.costs[0][2], rat(4));
        let p = lift_solution(sub, &rat(0), &rat(0)).unwrap();
        assert_eq!(p.values[2], rat(1));
    }
    let out = run(&inst);
    assert_eq!(out.status, Status::Optimal);
    assert_eq!(out.deviation.unwrap().values[2], rat(1));
}

#[test]
fn case_3_1_1_lifts_to_its_final_vector() {
    let g = case("case_3_1_1");
    let sub = g.speclu();
    let p = lift_solution(&sub, &rat(1), &rat(0)).unwrap();
    assert_eq!(p.values, ints(&[1, 1, 0, 0, 0, 0]));
}

#[test]
fn size_classes() {
    let sub = case("case_2_1_1").speclu();
    assert_eq!(classify(&[2], &sub), SizeClass::Small);
    assert_eq!(classify(&[0, 1], &sub), SizeClass::Equal);
    let sub = case("case_4_1_1").speclu();
    assert_eq!(classify(&[2, 3, 4], &sub), SizeClass::Large);
}

#[test]
fn update_values_on_toy_cases() {
    let sub = case("case_1_1").speclu();
    let ev = FEval::new(&sub);
    assert_eq!(ev.f1(&sub.costs[0], &[2, 3]).unwrap(), rat(1));

    let sub = case("case_2_1_1").speclu();
    let ev = FEval::new(&sub);
    assert_eq!(ev.f3(&sub.costs[0], &[2]).unwrap(), rat(2));

    // Second iteration of case 3.1.1: costs after (d, D) = (0, −2).
    let sub = case("case_3_1_1").speclu();
    let ev = FEval::new(&sub);
    let c = ints(&[3, 3, 2, 2, 2, 2]);
    assert_eq!(ev.f7(&c, &[5], &c, &[2, 3, 4]).unwrap(), rat(1));
    assert_eq!(ev.f8(&c, &[5], &c, &[2, 3, 4]).unwrap(), rat(2));
}

#[test]
fn initial_points() {
    let sub = case("case_1_1").speclu();
    let s = initialize(&sub).unwrap();
    assert_eq!((s.d, s.big_d), (rat(0), rat(0)));

    let sub = case("case_2_1_2_1").speclu();
    let s = initialize(&sub).unwrap();
    assert_eq!((s.d, s.big_d), (rat(0), rat(0)));

    let mut sub = case("case_1_1").speclu();
    sub.l_in = fin(3);
    sub.u_out = fin(1);
    let s = initialize(&sub).unwrap();
    assert_eq!((s.d.clone(), s.big_d.clone()), (rat(2), rat(1)));
    assert!(sub.l_in.le_rat(&(&s.d + &s.big_d)));
}

fn first_step(name: &str) -> Step {
    let sub = case(name).speclu();
    let state = initialize(&sub).unwrap();
    let fi = case(name).instance.family.min_cost(&state.costs[0]).unwrap();
    iterate_case(&state, &fi, &sub, 0).unwrap()
}

#[test]
fn dispatch_on_toy_cases() {
    match first_step("case_1_1") {
        Step::Move {
            label,
            delta,
            big_delta,
            ..
        } => {
            assert_eq!((label, delta, big_delta), (CaseLabel::C1_1, rat(1), rat(0)));
        }
        s => panic!("{s:?}"),
    }
    match first_step("case_4_2_1") {
        Step::Move {
            label,
            delta,
            big_delta,
            ..
        } => {
            assert_eq!((label, delta, big_delta), (CaseLabel::C4_2_1, rat(2), rat(-2)));
        }
        s => panic!("{s:?}"),
    }
    assert_eq!(first_step("case_1_2_2"), Step::Infeasible(CaseLabel::C1_2_2));
}

#[test]
fn deviation_feasibility_examples() {
    let g = case("case_1_1");
    let i = &g.instance;
    let p = build_deviation(&rat(1), &rat(0), &i.fstar_mask(), &i.weights, &i.lower, &i.upper);
    assert!(is_feasible_deviation(i, &p.values, &i.family).unwrap());

    let g = case("case_1_2_2");
    let i = &g.instance;
    assert!(!is_feasible_deviation(i, &vec![Rational::zero(); 4], &i.family).unwrap());

    let mut i = case("case_1_1").instance;
    i.lower[3] = fin(1);
    assert!(!is_feasible_deviation(&i, &p.values, &i.family).unwrap());
}

#[test]
fn witness_examples() {
    let g = case("case_1_2_2");
    let sub = g.speclu();
    let members = g.members();
    let m = compute_m_values(&sub, &members);
    assert_eq!(m.m1, fin(-1));
    let w = feasibility_witness(&sub, &members, &g.instance.family).unwrap();
    assert!(w.deviation.iter().all(Zero::is_zero));
    assert!(!w.feasible);

    let fam = vec![g.instance.fstar.clone()];
    let w = feasibility_witness(&sub, &fam, &FamilyDescriptor::Explicit(fam.clone())).unwrap();
    assert!(w.feasible);
}

#[test]
fn end_to_end_toy_cases() {
    let out = run(&case("case_1_1").instance);
    assert_eq!(out.status, Status::Optimal);
    assert_eq!(out.span, Some(rat(1)));

    let out = run(&case("case_1_2_2").instance);
    assert_eq!(out.status, Status::Infeasible);
    assert!(out.span.is_none());

    // Zero box with F* already optimal.
    let mut inst = case("case_1_2_2").instance;
    inst.costs = vec![ints(&[0, 0, 1, 1])];
    let out = run(&inst);
    assert_eq!(out.span, Some(rat(0)));
    assert!(out.deviation.unwrap().values.iter().all(Zero::is_zero));

    let mut inst = case("case_1_1").instance;
    inst.family = FamilyDescriptor::Explicit(vec![inst.fstar.clone()]);
    assert_eq!(run(&inst).span, Some(rat(0)));
}

#[test]
fn repeated_cost_vector_changes_nothing() {
    for name in ["case_3_1_1", "case_4_2_1", "case_1_2_2"] {
        let inst = case(name).instance;
        let once = solve(&inst, &inst.family, &SolveOptions::default()).unwrap();
        let mut twice = inst.clone();
        twice.costs.push(inst.costs[0].clone());
        let both = run(&twice);
        assert_eq!((once.status, once.span), (both.status, both.span), "{name}");
        assert_eq!(once.deviation, both.deviation, "{name}");
    }
}

#[test]
fn single_cost_entry_point_rejects_several_costs() {
    let mut inst = case("case_1_1").instance;
    inst.costs.push(inst.costs[0].clone());
    assert!(solve(&inst, &inst.family, &SolveOptions::default()).is_err());
}
