use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::ffun::FEval;
use super::{BadSet, CaseLabel, SolveTrace, TraceStep};
use crate::error::{internal, Error, Result};
use crate::family::{set_cost, Oracle, OracleResult};
use crate::model::modified_costs;
use crate::rational::{ExtRational, Rational};
use crate::reduce::SpecLu;
use crate::sets::ElemSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeClass {
    Small,
    Equal,
    Large,
}

pub fn classify(f: &[usize], sub: &SpecLu) -> SizeClass {
    match sub.mu(f).cmp(&sub.mu(&sub.fstar)) {
        Ordering::Less => SizeClass::Small,
        Ordering::Equal => SizeClass::Equal,
        Ordering::Greater => SizeClass::Large,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub i: u64,
    pub d: Rational,
    pub big_d: Rational,
    pub x: Option<BadSet>,
    pub y: Option<BadSet>,
    pub z: Option<BadSet>,
    /// `cʲ − p^{d,D}` for every cost index.
    pub costs: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Move {
        label: CaseLabel,
        delta: Rational,
        big_delta: Rational,
        x: Option<BadSet>,
        y: Option<BadSet>,
        z: Option<BadSet>,
    },
    Infeasible(CaseLabel),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpecResult {
    Optimal { d: Rational, big_d: Rational },
    Infeasible(CaseLabel),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecOutcome {
    pub result: SpecResult,
    pub trace: SolveTrace,
}

fn current_costs(sub: &SpecLu, d: &Rational, big_d: &Rational) -> Vec<Vec<Rational>> {
    let p = sub.deviation(d, big_d);
    sub.costs.iter().map(|c| modified_costs(c, &p)).collect()
}

pub fn initialize(sub: &SpecLu) -> Result<SolverState> {
    let gap = sub.l_in.sub(&sub.u_out)?;
    let d0 = match gap {
        ExtRational::Finite(v) if v.is_positive() => v,
        ExtRational::PosInf => return Err(internal("unbounded initial step")),
        _ => Rational::zero(),
    };
    let big_d0 = match (&sub.u_out, &sub.l_in) {
        (ExtRational::Finite(u), _) => u.clone(),
        (_, ExtRational::Finite(l)) => l.clone(),
        _ => Rational::zero(),
    };
    let state = SolverState {
        i: 0,
        costs: current_costs(sub, &d0, &big_d0),
        d: d0,
        big_d: big_d0,
        x: None,
        y: None,
        z: None,
    };
    check_corridor(sub, &state.d, &state.big_d)?;
    Ok(state)
}

fn check_corridor(sub: &SpecLu, d: &Rational, big_d: &Rational) -> Result<()> {
    let sum = d + big_d;
    if sub.l_in.le_rat(&sum) && sub.u_in.ge_rat(&sum) && sub.l_out.le_rat(big_d) && sub.u_out.ge_rat(big_d) {
        Ok(())
    } else {
        Err(internal(format!("corridor left at d = {d}, D = {big_d}")))
    }
}

fn bad(f: &ElemSet, j: usize) -> Option<BadSet> {
    Some(BadSet { set: f.clone(), j })
}

/// One pass of the case analysis for the bad set `fi` found under cost `j`.
pub fn iterate_case(state: &SolverState, fi: &OracleResult, sub: &SpecLu, j: usize) -> Result<Step> {
    use CaseLabel::*;
    let ev = FEval::new(sub);
    let c = &state.costs[j];
    let f = &fi.set;
    let (d, bd) = (&state.d, &state.big_d);

    let mv = |label, delta: Rational, big_delta: Rational, x, y, z| {
        Ok(Step::Move {
            label,
            delta,
            big_delta,
            x,
            y,
            z,
        })
    };
    // raise F* to the upper bound and solve for Δ
    let via_f4 = || -> Result<Option<(Rational, Rational)>> {
        if !ev.sticks_out(f) {
            return Ok(None);
        }
        let f4 = ev.f4(c, d, bd, f)?;
        if sub.l_out.le_rat(&(bd + &f4)) {
            Ok(Some((ev.f5(c, d, bd, f)?, f4)))
        } else {
            Ok(None)
        }
    };
    // drop the rest to the lower bound and solve for δ
    let via_f9 = || -> Result<Option<(Rational, Rational)>> {
        if !ev.misses_star(f) {
            return Ok(None);
        }
        let f9 = ev.f9(c, bd, f)?;
        let room = sub.u_in.sub(&sub.l_out)?;
        if room.ge_rat(&(d + &f9)) {
            Ok(Some((f9, sub.l_out.expect_finite("lout")? - bd)))
        } else {
            Ok(None)
        }
    };
    // pin the rest to the upper bound
    let via_f6 = || -> Result<Option<(Rational, Rational)>> {
        let f6 = ev.f6(c, bd, f)?;
        let room = sub.u_in.sub(&sub.u_out)?;
        if room.ge_rat(&(d + &f6)) {
            Ok(Some((f6, sub.u_out.expect_finite("uout")? - bd)))
        } else {
            Ok(None)
        }
    };

    match ev.mu(f).cmp(ev.mu_star()) {
        Ordering::Equal => {
            if ev.same_projection(f) {
                return Ok(Step::Infeasible(C1Degenerate));
            }
            let (x, y, z) = (None, bad(f, j), None);
            let f1 = ev.f1(c, f)?;
            if sub.u_in.ge_rat(&(d + bd + &f1)) {
                return mv(C1_1, f1, Rational::zero(), x, y, z);
            }
            let f2 = ev.f2(c, d, bd, f)?;
            if sub.l_out.le_rat(&(bd + &f2)) {
                mv(C1_2_1, f1, f2, x, y, z)
            } else {
                Ok(Step::Infeasible(C1_2_2))
            }
        }
        Ordering::Less => match &state.z {
            None => {
                let (x, y, z) = (bad(f, j), state.y.clone(), None);
                let f3 = ev.f3(c, f)?;
                if sub.u_out.ge_rat(&(bd + &f3)) {
                    if sub.u_in.ge_rat(&(d + bd + &f3)) {
                        return mv(C2_1_1, Rational::zero(), f3, x, y, z);
                    }
                    match via_f4()? {
                        Some((a, b)) => mv(C2_1_2_1, a, b, x, y, z),
                        None => Ok(Step::Infeasible(C2_1_2_2)),
                    }
                } else {
                    if let Some((a, b)) = via_f6()? {
                        return mv(C2_2_1, a, b, x, y, z);
                    }
                    match via_f4()? {
                        Some((a, b)) => mv(C2_2_2_1, a, b, x, y, z),
                        None => Ok(Step::Infeasible(C2_2_2_2)),
                    }
                }
            }
            Some(zb) => {
                let cz = &state.costs[zb.j];
                let f8 = ev.f8(c, f, cz, &zb.set)?;
                let y = state.y.clone();
                if sub.u_out.ge_rat(&(bd + &f8)) {
                    let f7 = ev.f7(c, f, cz, &zb.set)?;
                    if sub.u_in.ge_rat(&(d + bd + &f7 + &f8)) {
                        return mv(C3_1_1, f7, f8, bad(f, j), y, state.z.clone());
                    }
                    match via_f4()? {
                        Some((a, b)) => mv(C3_1_2_1, a, b, bad(f, j), y, None),
                        None => Ok(Step::Infeasible(C3_1_2_2)),
                    }
                } else {
                    if let Some((a, b)) = via_f6()? {
                        return mv(C3_2_1, a, b, bad(f, j), y, None);
                    }
                    match via_f4()? {
                        Some((a, b)) => mv(C3_2_2_1, a, b, bad(f, j), y, None),
                        None => Ok(Step::Infeasible(C3_2_2_2)),
                    }
                }
            }
        },
        Ordering::Greater => match &state.x {
            None => {
                let (x, y, z) = (None, state.y.clone(), bad(f, j));
                let f3 = ev.f3(c, f)?;
                if sub.l_in.le_rat(&(d + bd + &f3)) {
                    if sub.l_out.le_rat(&(bd + &f3)) {
                        return mv(C4_1_1, Rational::zero(), f3, x, y, z);
                    }
                    match via_f9()? {
                        Some((a, b)) => mv(C4_1_2_1, a, b, x, y, z),
                        None => Ok(Step::Infeasible(C4_1_2_2)),
                    }
                } else {
                    let f10 = ev.f10(c, d, bd, f)?;
                    if sub.l_out.le_rat(&(bd + &f10)) {
                        return mv(C4_2_1, ev.f11(c, d, bd, f)?, f10, x, y, z);
                    }
                    match via_f9()? {
                        Some((a, b)) => mv(C4_2_2_1, a, b, x, y, z),
                        None => Ok(Step::Infeasible(C4_2_2_2)),
                    }
                }
            }
            Some(xb) => {
                let cx = &state.costs[xb.j];
                let f7 = ev.f7(cx, &xb.set, c, f)?;
                let f12 = ev.f12(cx, &xb.set, c, f)?;
                let y = state.y.clone();
                if sub.l_in.le_rat(&(d + bd + &f7 + &f12)) {
                    if sub.l_out.le_rat(&(bd + &f12)) {
                        return mv(C5_1_1, f7, f12, state.x.clone(), y, bad(f, j));
                    }
                    match via_f9()? {
                        Some((a, b)) => mv(C5_1_2_1, a, b, None, y, bad(f, j)),
                        None => Ok(Step::Infeasible(C5_1_2_2)),
                    }
                } else {
                    let f10 = ev.f10(c, d, bd, f)?;
                    if sub.l_out.le_rat(&(bd + &f10)) {
                        return mv(C5_2_1, ev.f11(c, d, bd, f)?, f10, None, y, bad(f, j));
                    }
                    match via_f9()? {
                        Some((a, b)) => mv(C5_2_2_1, a, b, None, y, bad(f, j)),
                        None => Ok(Step::Infeasible(C5_2_2_2)),
                    }
                }
            }
        },
    }
}

/// Per-step checks: the eliminated sets are now tied with F*, the corridor
/// holds, pinned cases sit on their bound and the sign pattern of δ, Δ is right.
fn check_step(
    sub: &SpecLu,
    next: &SolverState,
    label: CaseLabel,
    delta: &Rational,
    big_delta: &Rational,
    tied: &[(&ElemSet, usize)],
) -> Result<()> {
    use CaseLabel::*;
    for (set, j) in tied {
        let c = &next.costs[*j];
        if set_cost(c, &sub.fstar) != set_cost(c, set) {
            return Err(internal(format!("case {label}: eliminated set is not tied with F*")));
        }
    }
    check_corridor(sub, &next.d, &next.big_d)?;
    let sum = &next.d + &next.big_d;
    if matches!(label, C2_1_2_1 | C2_2_2_1 | C3_1_2_1 | C3_2_2_1) && sub.u_in.cmp_rat(&sum) != Ordering::Equal {
        return Err(internal(format!("case {label}: d + D is not at uin")));
    }
    if matches!(label, C4_2_1 | C5_2_1) && sub.l_in.cmp_rat(&sum) != Ordering::Equal {
        return Err(internal(format!("case {label}: d + D is not at lin")));
    }
    if delta.is_negative() {
        return Err(internal(format!("case {label}: negative delta {delta}")));
    }
    let flat = matches!(label, C2_1_1 | C4_1_1);
    if flat != delta.is_zero() {
        return Err(internal(format!(
            "case {label}: delta {delta} has the wrong sign pattern"
        )));
    }
    if label == C2_1_1 && !big_delta.is_positive() {
        return Err(internal("case 2.1.1: Delta must be positive"));
    }
    if label == C4_1_1 && !big_delta.is_negative() {
        return Err(internal("case 4.1.1: Delta must be negative"));
    }
    Ok(())
}

/// Runs the elimination loop. With several cost vectors each round scans
/// them in order and handles the first one under which F* is beaten.
pub fn solve_speclu(sub: &SpecLu, oracle: &dyn Oracle, cap: u64) -> Result<SpecOutcome> {
    let mut state = initialize(sub)?;
    let mut trace = SolveTrace {
        d0: state.d.clone(),
        big_d0: state.big_d.clone(),
        ..SolveTrace::default()
    };
    loop {
        let mut found = None;
        for (j, c) in state.costs.iter().enumerate() {
            let r = oracle.min_cost(c)?;
            trace.oracle_calls += 1;
            if set_cost(c, &sub.fstar) > r.cost {
                found = Some((j, r));
                break;
            }
        }
        let Some((j, fi)) = found else {
            return Ok(SpecOutcome {
                result: SpecResult::Optimal {
                    d: state.d,
                    big_d: state.big_d,
                },
                trace,
            });
        };
        if trace.iterations >= cap {
            return Err(Error::IterationCap(cap));
        }
        trace.iterations += 1;
        match iterate_case(&state, &fi, sub, j)? {
            Step::Infeasible(label) => {
                trace.verdict = Some((label, j, fi.set));
                return Ok(SpecOutcome {
                    result: SpecResult::Infeasible(label),
                    trace,
                });
            }
            Step::Move {
                label,
                delta,
                big_delta,
                x,
                y,
                z,
            } => {
                let d = &state.d + &delta;
                let big_d = &state.big_d + &big_delta;
                let next = SolverState {
                    i: state.i + 1,
                    costs: current_costs(sub, &d, &big_d),
                    d,
                    big_d,
                    x,
                    y,
                    z,
                };
                let mut tied = vec![(&fi.set, j)];
                if label == CaseLabel::C3_1_1 {
                    let zb = state.z.as_ref().ok_or_else(|| internal("3.1.1 without Z"))?;
                    tied.push((&zb.set, zb.j));
                }
                if label == CaseLabel::C5_1_1 {
                    let xb = state.x.as_ref().ok_or_else(|| internal("5.1.1 without X"))?;
                    tied.push((&xb.set, xb.j));
                }
                check_step(sub, &next, label, &delta, &big_delta, &tied)?;
                trace.steps.push(TraceStep {
                    i: state.i,
                    label,
                    j,
                    set: fi.set.clone(),
                    delta,
                    big_delta,
                    d: next.d.clone(),
                    big_d: next.big_d.clone(),
                    x: next.x.clone(),
                    y: next.y.clone(),
                    z: next.z.clone(),
                });
                state = next;
            }
        }
    }
}
