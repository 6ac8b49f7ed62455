//! Splitting a bounded instance into uniform-box subproblems and lifting back.
//!
//! With `x = Δ` and `y = δ+Δ`, an element of F* gets `clamp(y/w)` and any other
//! element gets `clamp(x/w)`. Between consecutive clamp breakpoints each
//! coordinate is either pinned to a bound or linear in `x` or `y`, so every
//! pair of cells becomes a subproblem with a frozen set `S0` and uniform
//! bounds on the rest.

use num_traits::Zero;

use crate::error::{internal, Result};
use crate::model::{DeviationVector, Instance};
use crate::rational::{clamp, ExtRational, Rational};
use crate::sets::{mask, ElemSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: ExtRational,
    pub hi: ExtRational,
}

impl Interval {
    pub fn new(lo: ExtRational, hi: ExtRational) -> Self {
        Interval { lo, hi }
    }
}

/// A cell for `Δ` paired with a cell for `δ+Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPair {
    pub delta_interval: Interval,
    pub sum_interval: Interval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    /// Instance with ℓ on F* raised and u off F* lowered to the values any
    /// optimal special-form vector respects anyway.
    pub inst: Instance,
    /// F* by decreasing w·u, then the rest by decreasing w·ℓ.
    pub order: Vec<usize>,
    /// max over S of w·ℓ.
    pub l_star: ExtRational,
    /// min over S of w·u.
    pub u_circ: ExtRational,
}

/// Subproblem with frozen set `S0` and uniform scaled bounds elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecLu {
    pub fstar: ElemSet,
    pub in_fstar: Vec<bool>,
    pub s0: Vec<bool>,
    pub weights: Vec<Rational>,
    pub inv_w: Vec<Rational>,
    pub l_in: ExtRational,
    pub u_in: ExtRational,
    pub l_out: ExtRational,
    pub u_out: ExtRational,
    /// Costs with frozen deviations already subtracted.
    pub costs: Vec<Vec<Rational>>,
    /// Deviation of each frozen element in the parent instance.
    pub fixed: Vec<Option<Rational>>,
    pub base_lower: Vec<ExtRational>,
    pub base_upper: Vec<ExtRational>,
    pub interval: Option<IntervalPair>,
}

fn weighted(b: &ExtRational, w: &Rational) -> ExtRational {
    b.scale(w)
}

pub fn normalize_bounds_and_order(inst: &Instance) -> Normalized {
    let n = inst.n();
    let in_f = inst.fstar_mask();
    let wl: Vec<ExtRational> = (0..n).map(|s| weighted(&inst.lower[s], &inst.weights[s])).collect();
    let wu: Vec<ExtRational> = (0..n).map(|s| weighted(&inst.upper[s], &inst.weights[s])).collect();
    let l_star = wl.iter().max().cloned().unwrap_or(ExtRational::NegInf);
    let u_circ = wu.iter().min().cloned().unwrap_or(ExtRational::PosInf);
    let mut out = inst.clone();
    for s in 0..n {
        let w = &inst.weights[s];
        if in_f[s] {
            let raised = l_star.div_pos(w).min(inst.upper[s].clone());
            out.lower[s] = raised.max(inst.lower[s].clone());
        } else {
            let lowered = u_circ.div_pos(w).max(inst.lower[s].clone());
            out.upper[s] = lowered.min(inst.upper[s].clone());
        }
    }
    let mut star: Vec<usize> = (0..n).filter(|&s| in_f[s]).collect();
    let mut rest: Vec<usize> = (0..n).filter(|&s| !in_f[s]).collect();
    star.sort_by(|&a, &b| wu[b].cmp(&wu[a]).then(a.cmp(&b)));
    rest.sort_by(|&a, &b| wl[b].cmp(&wl[a]).then(a.cmp(&b)));
    star.extend(rest);
    Normalized {
        inst: out,
        order: star,
        l_star,
        u_circ,
    }
}

/// Cells for `Δ` and for `δ+Δ`.
///
/// `δ+Δ` ranges over `[L*, ∞)` cut at every F* breakpoint w·u above `L*`;
/// past the largest finite one nothing moves, so that tail is dropped.
/// `Δ` ranges over `(−∞, U°]` cut at every off-F* breakpoint w·ℓ below `U°`;
/// below the smallest one nothing moves either.
pub fn candidate_intervals(norm: &Normalized) -> (Vec<Interval>, Vec<Interval>) {
    let inst = &norm.inst;
    let in_f = inst.fstar_mask();
    let n = inst.n();

    let mut sums = Vec::new();
    if inst.fstar.is_empty() {
        sums.push(Interval::new(norm.l_star.clone(), ExtRational::PosInf));
    } else {
        let mut b: Vec<ExtRational> = (0..n)
            .filter(|&s| in_f[s])
            .map(|s| weighted(&inst.upper[s], &inst.weights[s]))
            .filter(|v| *v > norm.l_star)
            .collect();
        b.sort();
        b.dedup();
        if b.is_empty() {
            sums.push(Interval::new(norm.l_star.clone(), norm.l_star.clone()));
        } else {
            let mut lo = norm.l_star.clone();
            for hi in b {
                sums.push(Interval::new(lo, hi.clone()));
                lo = hi;
            }
        }
    }

    let mut deltas = Vec::new();
    if inst.fstar.len() == n {
        deltas.push(Interval::new(ExtRational::NegInf, norm.u_circ.clone()));
    } else {
        let mut a: Vec<ExtRational> = (0..n)
            .filter(|&s| !in_f[s])
            .map(|s| weighted(&inst.lower[s], &inst.weights[s]))
            .filter(|v| *v < norm.u_circ)
            .collect();
        a.sort();
        a.dedup();
        if a.is_empty() {
            deltas.push(Interval::new(norm.u_circ.clone(), norm.u_circ.clone()));
        } else {
            let mut hi = norm.u_circ.clone();
            for lo in a.into_iter().rev() {
                deltas.push(Interval::new(lo.clone(), hi));
                hi = lo;
            }
        }
    }
    (deltas, sums)
}

pub fn interval_pairs(norm: &Normalized) -> Vec<IntervalPair> {
    let (deltas, sums) = candidate_intervals(norm);
    let mut out = Vec::with_capacity(deltas.len() * sums.len());
    for d in &deltas {
        for s in &sums {
            out.push(IntervalPair {
                delta_interval: d.clone(),
                sum_interval: s.clone(),
            });
        }
    }
    out
}

/// Every non-empty subproblem of `inst`, built on the rescaled weights the
/// solver uses, in interval-pair order.
pub fn all_subproblems(inst: &Instance) -> Result<Vec<SpecLu>> {
    let (work, _) = inst.rescaled();
    let norm = normalize_bounds_and_order(&work);
    let mut out = Vec::new();
    for pair in interval_pairs(&norm) {
        if let Some(sub) = build_subproblem(&norm, &pair)? {
            out.push(sub);
        }
    }
    Ok(out)
}

/// Freezes the elements whose clamp is decided by `pair` and shifts their
/// deviation into the costs. `None` when the cell admits no `x ≤ y`.
pub fn build_subproblem(norm: &Normalized, pair: &IntervalPair) -> Result<Option<SpecLu>> {
    let inst = &norm.inst;
    let n = inst.n();
    let in_f = inst.fstar_mask();
    let (xl, xh) = (&pair.delta_interval.lo, &pair.delta_interval.hi);
    let (yl, yh) = (&pair.sum_interval.lo, &pair.sum_interval.hi);

    // x ≤ y, so x never exceeds yh and y never drops below xl
    let u_out = xh.clone().min(yh.clone());
    let l_in = yl.clone().max(xl.clone());
    if *xl > u_out || l_in > *yh {
        return Ok(None);
    }

    let mut fixed: Vec<Option<Rational>> = vec![None; n];
    for s in 0..n {
        let w = &inst.weights[s];
        if in_f[s] {
            if weighted(&inst.upper[s], w) <= *yl {
                fixed[s] = Some(inst.upper[s].expect_finite("frozen upper bound")?.clone());
            } else if weighted(&inst.upper[s], w) < *yh || weighted(&inst.lower[s], w) > l_in {
                return Err(internal("F* element straddles a sum cell"));
            }
        } else if weighted(&inst.lower[s], w) >= *xh {
            fixed[s] = Some(inst.lower[s].expect_finite("frozen lower bound")?.clone());
        } else if weighted(&inst.lower[s], w) > *xl || weighted(&inst.upper[s], w) < u_out {
            return Err(internal("element straddles a delta cell"));
        }
    }
    let s0: Vec<bool> = fixed.iter().map(Option::is_some).collect();
    let costs = inst
        .costs
        .iter()
        .map(|c| {
            c.iter()
                .zip(&fixed)
                .map(|(ci, f)| match f {
                    Some(v) => ci - v,
                    None => ci.clone(),
                })
                .collect()
        })
        .collect();
    let sub = SpecLu {
        fstar: inst.fstar.clone(),
        in_fstar: in_f,
        s0,
        weights: inst.weights.clone(),
        inv_w: inst.inv_weights(),
        l_in,
        u_in: yh.clone(),
        l_out: xl.clone(),
        u_out,
        costs,
        fixed,
        base_lower: inst.lower.clone(),
        base_upper: inst.upper.clone(),
        interval: Some(pair.clone()),
    };
    sub.check_box()?;
    Ok(Some(sub))
}

impl SpecLu {
    /// A stand-alone subproblem: `S0` elements have `ℓ = u = 0`, F*∖S0 has
    /// `[ℓin/w, uin/w]`, everything else `[ℓout/w, uout/w]`.
    #[allow(clippy::too_many_arguments)]
    pub fn direct(
        fstar: ElemSet,
        s0: ElemSet,
        weights: Vec<Rational>,
        costs: Vec<Vec<Rational>>,
        l_in: ExtRational,
        u_in: ExtRational,
        l_out: ExtRational,
        u_out: ExtRational,
    ) -> Result<SpecLu> {
        let n = weights.len();
        let in_fstar = mask(&fstar, n);
        let s0 = mask(&s0, n);
        let inv_w = weights.iter().map(|w| w.recip()).collect();
        let mut sub = SpecLu {
            fstar,
            in_fstar,
            fixed: s0.iter().map(|&z| z.then(Rational::zero)).collect(),
            s0,
            weights,
            inv_w,
            l_in,
            u_in,
            l_out,
            u_out,
            costs,
            base_lower: Vec::new(),
            base_upper: Vec::new(),
            interval: None,
        };
        let (lo, hi): (Vec<_>, Vec<_>) = (0..n).map(|s| sub.bounds_of(s)).unzip();
        sub.base_lower = lo;
        sub.base_upper = hi;
        sub.check_box()?;
        Ok(sub)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn k(&self) -> usize {
        self.costs.len()
    }

    /// Box ordering the solver relies on.
    pub fn check_box(&self) -> Result<()> {
        let ok = self.l_in <= self.u_in
            && self.l_out <= self.u_out
            && self.l_out <= self.l_in
            && self.u_out <= self.u_in
            && self.l_in != ExtRational::PosInf
            && self.u_out != ExtRational::NegInf;
        if ok {
            Ok(())
        } else {
            Err(internal(format!(
                "box violated: in [{}, {}], out [{}, {}]",
                self.l_in, self.u_in, self.l_out, self.u_out
            )))
        }
    }

    pub fn mu(&self, set: &[usize]) -> Rational {
        crate::model::mu(set, &self.s0, &self.inv_w)
    }

    /// Bounds of element `s` inside the subproblem.
    pub fn bounds_of(&self, s: usize) -> (ExtRational, ExtRational) {
        let w = &self.weights[s];
        if self.s0[s] {
            (
                ExtRational::Finite(Rational::zero()),
                ExtRational::Finite(Rational::zero()),
            )
        } else if self.in_fstar[s] {
            (self.l_in.div_pos(w), self.u_in.div_pos(w))
        } else {
            (self.l_out.div_pos(w), self.u_out.div_pos(w))
        }
    }

    /// Special-form deviation under the subproblem's own bounds.
    pub fn deviation(&self, d: &Rational, big_d: &Rational) -> Vec<Rational> {
        let sum = d + big_d;
        (0..self.n())
            .map(|s| {
                let (lo, hi) = self.bounds_of(s);
                let base = if self.in_fstar[s] { &sum } else { big_d };
                clamp(base / &self.weights[s], &lo, &hi)
            })
            .collect()
    }

    pub fn within_bounds(&self, p: &[Rational]) -> bool {
        p.iter().enumerate().all(|(s, v)| {
            let (lo, hi) = self.bounds_of(s);
            lo.le_rat(v) && hi.ge_rat(v)
        })
    }
}

/// Deviation in the parent instance for the subproblem solution `(d, D)`.
pub fn lift_solution(sub: &SpecLu, d: &Rational, big_d: &Rational) -> Result<DeviationVector> {
    let inner = sub.deviation(d, big_d);
    let values: Vec<Rational> = inner
        .into_iter()
        .zip(&sub.fixed)
        .map(|(v, f)| f.clone().unwrap_or(v))
        .collect();
    for (s, v) in values.iter().enumerate() {
        if !sub.base_lower[s].le_rat(v) || !sub.base_upper[s].ge_rat(v) {
            return Err(internal(format!("lifted deviation leaves the bounds of element {s}")));
        }
    }
    Ok(DeviationVector {
        values,
        special_form: Some((d.clone(), big_d.clone())),
    })
}
