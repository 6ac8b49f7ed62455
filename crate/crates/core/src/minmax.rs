//! Closed-form optimum for unbounded instances: `max{0, ω1, ω2}` together with
//! the special-form vector that attains it.

use num_traits::Zero;

use crate::error::{internal, Error, Result};
use crate::family::set_cost;
use crate::model::{build_deviation, cost_gap, DeviationVector, Instance};
use crate::rational::{ExtRational, Rational};
use crate::sets::{difference, ElemSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega1Witness {
    pub j: usize,
    pub set: ElemSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega2Witness {
    pub j_small: usize,
    pub small: ElemSet,
    pub j_large: usize,
    pub large: ElemSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinMaxCertificate {
    pub omega1: ExtRational,
    pub omega2: ExtRational,
    pub value: Rational,
    pub omega1_witness: Option<Omega1Witness>,
    pub omega2_witness: Option<Omega2Witness>,
    pub d: Rational,
    pub big_d: Rational,
    pub deviation: DeviationVector,
}

fn size(inv_w: &[Rational], set: &[usize]) -> Rational {
    set_cost(inv_w, set)
}

/// Evaluates both maxima by enumeration over `members` (which must contain F*).
pub fn certificate(inst: &Instance, members: &[ElemSet]) -> Result<MinMaxCertificate> {
    inst.validate()?;
    if !inst.is_unconstrained() {
        return Err(Error::Constrained);
    }
    let inv_w = inst.inv_weights();
    let fstar = &inst.fstar;
    let s_star = size(&inv_w, fstar);
    let star_minus = |f: &[usize]| size(&inv_w, &difference(fstar, f));

    let mut omega1 = ExtRational::NegInf;
    let mut w1 = None;
    let mut small = Vec::new();
    let mut large = Vec::new();
    for f in members {
        let sf = size(&inv_w, f);
        if sf < s_star {
            small.push((f, &s_star - &sf));
        } else if sf > s_star {
            large.push((f, &s_star - &sf));
        } else if f != fstar {
            for (j, c) in inst.costs.iter().enumerate() {
                let v = (set_cost(c, fstar) - set_cost(c, f)) / star_minus(f);
                if omega1.cmp_rat(&v).is_lt() {
                    omega1 = ExtRational::Finite(v);
                    w1 = Some(Omega1Witness { j, set: f.clone() });
                }
            }
        }
    }

    // Per-set ratios reused by the double loop: gap/size-difference and the
    // F*-only measure over the same difference.
    let ratio = |c: &[Rational], f: &[usize], diff: &Rational| -> (Rational, Rational) {
        ((set_cost(c, fstar) - set_cost(c, f)) / diff, star_minus(f) / diff)
    };
    let mut omega2 = ExtRational::NegInf;
    let mut w2 = None;
    for (j1, c1) in inst.costs.iter().enumerate() {
        for (fs, ds) in &small {
            let (gs, ms) = ratio(c1, fs, ds);
            for (j2, c2) in inst.costs.iter().enumerate() {
                for (fl, dl) in &large {
                    let (gl, ml) = ratio(c2, fl, dl);
                    let den = &ms - &ml;
                    if den.is_zero() {
                        return Err(internal("zero denominator in the paired ratio"));
                    }
                    let v = (&gs - &gl) / den;
                    if omega2.cmp_rat(&v).is_lt() {
                        omega2 = ExtRational::Finite(v);
                        w2 = Some(Omega2Witness {
                            j_small: j1,
                            small: (*fs).clone(),
                            j_large: j2,
                            large: (*fl).clone(),
                        });
                    }
                }
            }
        }
    }

    let zero = ExtRational::Finite(Rational::zero());
    let value = zero.max(omega1.clone()).max(omega2.clone());
    let d = value
        .as_finite()
        .cloned()
        .ok_or_else(|| internal("infinite min-max value"))?;

    let shift = |c: &[Rational], f: &[usize], diff: &Rational| {
        (set_cost(c, fstar) - set_cost(c, f) - &d * star_minus(f)) / diff
    };
    let big_d = if !small.is_empty() {
        let mut best: Option<Rational> = None;
        for c in &inst.costs {
            for (f, diff) in &small {
                let v = shift(c, f, diff);
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        best.unwrap_or_else(Rational::zero)
    } else if !large.is_empty() {
        let mut best: Option<Rational> = None;
        for c in &inst.costs {
            for (f, diff) in &large {
                let v = shift(c, f, diff);
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best.unwrap_or_else(Rational::zero)
    } else {
        Rational::zero()
    };

    let deviation = build_deviation(&d, &big_d, &inst.fstar_mask(), &inst.weights, &inst.lower, &inst.upper);
    for c in &inst.costs {
        for f in members {
            if cost_gap(c, &deviation.values, fstar, f) > Rational::zero() {
                return Err(internal("min-max witness vector is not feasible"));
            }
        }
    }
    Ok(MinMaxCertificate {
        omega1,
        omega2,
        value: d.clone(),
        omega1_witness: w1,
        omega2_witness: w2,
        d,
        big_d,
        deviation,
    })
}
