//! Feasibility of a uniform-box subproblem through the four extremal ratios
//! m1..m4. Enumerative; meant for verification rather than the solve path.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::family::{set_cost, Oracle};
use crate::model::modified_costs;
use crate::rational::{ExtRational, Rational};
use crate::reduce::SpecLu;
use crate::sets::{difference, ElemSet};
use crate::solver::FEval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MValues {
    pub m1: ExtRational,
    pub m2: ExtRational,
    pub m3: ExtRational,
    pub m4: ExtRational,
}

impl MValues {
    /// Finite value, or 0 for an infinite one.
    pub fn primed(v: &ExtRational) -> Rational {
        v.as_finite().cloned().unwrap_or_else(Rational::zero)
    }
}

/// Which candidate the witness uses, by finiteness of `uin` and `ℓout`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityWitness {
    pub case: WitnessCase,
    /// Candidate `(δ, Δ)`.
    pub delta: Rational,
    pub big_delta: Rational,
    /// Candidate vector, clamped to the subproblem bounds.
    pub deviation: Vec<Rational>,
    pub feasible: bool,
}

// `b·m` with the convention that an infinite bound times zero measure vanishes.
fn bound_times(b: &ExtRational, m: &Rational) -> ExtRational {
    if m.is_zero() {
        ExtRational::Finite(Rational::zero())
    } else {
        b.scale(m)
    }
}

/// Extremal ratios over `members`, taken over every cost vector of `sub`.
pub fn compute_m_values(sub: &SpecLu, members: &[ElemSet]) -> MValues {
    let ev = FEval::new(sub);
    let mut m1 = ExtRational::PosInf;
    let mut m2 = ExtRational::NegInf;
    let mut m3 = ExtRational::PosInf;
    let mut m4 = ExtRational::NegInf;
    for c in &sub.costs {
        let c_star = set_cost(c, &sub.fstar);
        for f in members {
            let out = sub.mu(&difference(f, &sub.fstar));
            let inn = sub.mu(&difference(&sub.fstar, f));
            let cf = set_cost(c, f);
            if ev.sticks_out(f) && out.is_positive() {
                let base = &cf - &c_star;
                let v1 = bound_times(&sub.u_in, &inn).add_rat(&base).div_pos(&out);
                m1 = m1.min(v1);
                m3 = m3.min(ExtRational::Finite(&base / &out));
            }
            if ev.misses_star(f) && inn.is_positive() {
                let base = &c_star - &cf;
                let v2 = bound_times(&sub.l_out, &out).add_rat(&base).div_pos(&inn);
                m2 = m2.max(v2);
                m4 = m4.max(ExtRational::Finite(&base / &inn));
            }
        }
    }
    MValues { m1, m2, m3, m4 }
}

/// Builds the witness candidate and tests it with one oracle call per cost.
pub fn feasibility_witness(sub: &SpecLu, members: &[ElemSet], oracle: &dyn Oracle) -> Result<FeasibilityWitness> {
    let (case, delta, big_delta) = match (sub.u_in.as_finite(), sub.l_out.as_finite()) {
        (Some(uin), Some(lout)) => (WitnessCase::A, uin - lout, lout.clone()),
        (Some(uin), None) => {
            let m = compute_m_values(sub, members);
            let m1 = MValues::primed(&m.m1);
            (WitnessCase::B, uin - &m1, m1)
        }
        (None, Some(lout)) => {
            let m = compute_m_values(sub, members);
            let m2 = MValues::primed(&m.m2);
            (WitnessCase::C, &m2 - lout, lout.clone())
        }
        (None, None) => {
            // Both sides are free here, so F* never needs to move down nor the
            // rest up. Taking (m4' − m3', m3') as is fails once m3' > 0 > m4'.
            let m = compute_m_values(sub, members);
            let m3 = MValues::primed(&m.m3).min(Rational::zero());
            let m4 = MValues::primed(&m.m4).max(Rational::zero());
            (WitnessCase::D, &m4 - &m3, m3)
        }
    };
    let deviation = sub.deviation(&delta, &big_delta);
    let mut feasible = true;
    for c in &sub.costs {
        let cp = modified_costs(c, &deviation);
        let best = oracle.min_cost(&cp)?;
        if set_cost(&cp, &sub.fstar) > best.cost {
            feasible = false;
            break;
        }
    }
    Ok(FeasibilityWitness {
        case,
        delta,
        big_delta,
        deviation,
        feasible,
    })
}
