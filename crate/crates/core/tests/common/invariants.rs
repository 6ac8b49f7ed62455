//! Trace checks recomputed from the subproblem data alone.

use std::collections::BTreeSet;

use invspan::family::set_cost;
use invspan::model::modified_costs;
use invspan::rational::{ExtRational, Rational};
use invspan::reduce::SpecLu;
use invspan::sets::{intersection, ElemSet};
use invspan::solver::{BadSet, CaseLabel, SolveTrace};
use num_traits::{Signed, Zero};

fn corridor(sub: &SpecLu, d: &Rational, big_d: &Rational) -> bool {
    let sum = d + big_d;
    sub.l_in.le_rat(&sum) && sub.u_in.ge_rat(&sum) && sub.l_out.le_rat(big_d) && sub.u_out.ge_rat(big_d)
}

fn costs_at(sub: &SpecLu, j: usize, d: &Rational, big_d: &Rational) -> Vec<Rational> {
    modified_costs(&sub.costs[j], &sub.deviation(d, big_d))
}

fn mu_star(sub: &SpecLu, f: &ElemSet) -> Rational {
    sub.mu(&intersection(f, &sub.fstar))
}

/// Per-step assertions, plus the progress properties when there is a single
/// cost vector. Returns the first violation.
pub fn check_trace(sub: &SpecLu, trace: &SolveTrace) -> Result<(), String> {
    use CaseLabel::*;
    let (mut d, mut big_d) = (trace.d0.clone(), trace.big_d0.clone());
    if !corridor(sub, &d, &big_d) {
        return Err(format!("initial state ({d}, {big_d}) outside the corridor"));
    }
    let mf = sub.mu(&sub.fstar);
    let mut prev_x: Option<BadSet> = None;
    let mut prev_z: Option<BadSet> = None;
    let mut equal_steps: Vec<Rational> = Vec::new();
    let mut small_tuples = BTreeSet::new();
    let mut large_tuples = BTreeSet::new();
    // (μ(F), μ(F∩F*)) of the previous step when it was small (resp. large) with Z (resp. X) unset.
    let mut prev_small_free: Option<(Rational, Rational)> = None;
    let mut prev_large_free: Option<(Rational, Rational)> = None;

    for st in &trace.steps {
        let at = format!("step {} ({})", st.i, st.label);
        let before = costs_at(sub, st.j, &d, &big_d);
        if set_cost(&before, &st.set) >= set_cost(&before, &sub.fstar) {
            return Err(format!("{at}: the eliminated set was not cheaper than F*"));
        }
        if d.clone() + &st.delta != st.d || big_d.clone() + &st.big_delta != st.big_d {
            return Err(format!("{at}: accumulated values do not add up"));
        }
        d = st.d.clone();
        big_d = st.big_d.clone();
        let after = costs_at(sub, st.j, &d, &big_d);
        if set_cost(&after, &sub.fstar) != set_cost(&after, &st.set) {
            return Err(format!("{at}: c(F*) != c(F_i) after the step"));
        }
        if !corridor(sub, &d, &big_d) {
            return Err(format!("{at}: ({d}, {big_d}) outside the corridor"));
        }
        let sum = &d + &big_d;
        if matches!(st.label, C2_1_2_1 | C2_2_2_1 | C3_1_2_1 | C3_2_2_1) && sub.u_in != ExtRational::Finite(sum.clone())
        {
            return Err(format!("{at}: d + D = {sum} is not uin"));
        }
        if matches!(st.label, C4_2_1 | C5_2_1) && sub.l_in != ExtRational::Finite(sum.clone()) {
            return Err(format!("{at}: d + D = {sum} is not lin"));
        }
        if st.delta.is_negative() {
            return Err(format!("{at}: negative delta"));
        }
        let flat = matches!(st.label, C2_1_1 | C4_1_1);
        if flat != st.delta.is_zero() {
            return Err(format!("{at}: delta = {} breaks the zero pattern", st.delta));
        }
        if st.label == C2_1_1 && !st.big_delta.is_positive() {
            return Err(format!("{at}: Delta not positive"));
        }
        if st.label == C4_1_1 && !st.big_delta.is_negative() {
            return Err(format!("{at}: Delta not negative"));
        }

        if sub.k() == 1 {
            let mu_f = sub.mu(&st.set);
            let mu_fs = mu_star(sub, &st.set);
            if matches!(st.label, C1_1 | C1_2_1) {
                if equal_steps.last().is_some_and(|last| *last >= mu_fs) {
                    return Err(format!("{at}: μ(Y ∩ F*) did not increase across equal-size steps"));
                }
                equal_steps.push(mu_fs.clone());
            }
            let small = mu_f < mf;
            let large = mu_f > mf;
            if small {
                if let Some(z) = &prev_z {
                    let t = (mu_f.clone(), sub.mu(&z.set), mu_fs.clone(), mu_star(sub, &z.set));
                    if !small_tuples.insert(t) {
                        return Err(format!("{at}: repeated small/large tuple"));
                    }
                }
            }
            if large {
                if let Some(x) = &prev_x {
                    let t = (sub.mu(&x.set), mu_f.clone(), mu_star(sub, &x.set), mu_fs.clone());
                    if !large_tuples.insert(t) {
                        return Err(format!("{at}: repeated large/small tuple"));
                    }
                }
            }
            let small_free = small && prev_z.is_none();
            let large_free = large && prev_x.is_none();
            if small_free {
                if let Some((m, ms)) = &prev_small_free {
                    if *m == mu_f && *ms >= mu_fs {
                        return Err(format!("{at}: consecutive small steps made no progress"));
                    }
                }
            }
            if large_free {
                if let Some((m, ms)) = &prev_large_free {
                    if *m == mu_f && *ms >= mu_fs {
                        return Err(format!("{at}: consecutive large steps made no progress"));
                    }
                }
            }
            prev_small_free = small_free.then(|| (mu_f.clone(), mu_fs.clone()));
            prev_large_free = large_free.then_some((mu_f, mu_fs));
        }
        prev_x = st.x.clone();
        prev_z = st.z.clone();
    }
    Ok(())
}

/// F* is a minimum-cost member under every cost vector at `(d, D)`.
pub fn fstar_optimal(sub: &SpecLu, members: &[ElemSet], d: &Rational, big_d: &Rational) -> bool {
    (0..sub.k()).all(|j| {
        let c = costs_at(sub, j, d, big_d);
        let star = set_cost(&c, &sub.fstar);
        members.iter().all(|f| set_cost(&c, f) >= star)
    })
}
