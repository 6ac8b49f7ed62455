//! Brute-force checks that share nothing with the elimination loop: a full LP
//! over the whole deviation vector, and small LPs over clamped special-form
//! vectors, one per cell between clamp breakpoints.

mod simplex;
mod twovar;

pub use simplex::{Cmp, Constraint, LinearProgram, LpResult};
pub use twovar::{HalfPlane, TwoVarLp};

use num_traits::{One, Zero};

use crate::error::{internal, Error, Result};
use crate::family::set_cost;
use crate::model::{build_deviation, cost_gap, weighted_span, Instance};
use crate::rational::{ExtRational, Rational};
use crate::reduce::SpecLu;
use crate::sets::{difference, ElemSet};
use crate::solver::{SolveOutcome, Status};

/// Largest ground set the full LP accepts.
pub const FULL_LP_MAX_N: usize = 16;
/// Largest number of set constraints (members × costs) the full LP accepts.
pub const FULL_LP_MAX_ROWS: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum FullResult {
    Optimal { span: Rational, p: Vec<Rational> },
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReducedResult {
    /// `delta = y − x` and `big_delta = x`.
    Optimal {
        span: Rational,
        delta: Rational,
        big_delta: Rational,
    },
    Infeasible,
}

impl FullResult {
    pub fn span(&self) -> Option<&Rational> {
        match self {
            FullResult::Optimal { span, .. } => Some(span),
            FullResult::Infeasible => None,
        }
    }
}

impl ReducedResult {
    pub fn span(&self) -> Option<&Rational> {
        match self {
            ReducedResult::Optimal { span, .. } => Some(span),
            ReducedResult::Infeasible => None,
        }
    }
}

/// LP in `p(s)`, `t_max`, `t_min`: minimise `t_max − t_min`.
pub fn lp_span_full(inst: &Instance, members: &[ElemSet]) -> Result<FullResult> {
    let n = inst.n();
    if n > FULL_LP_MAX_N || members.len() * inst.k() > FULL_LP_MAX_ROWS {
        return Err(Error::TooLarge(format!(
            "full LP limited to {FULL_LP_MAX_N} elements and {FULL_LP_MAX_ROWS} set rows"
        )));
    }
    let (t_max, t_min) = (n, n + 1);
    let mut lp = LinearProgram::new(n + 2);
    lp.objective[t_max] = Rational::one();
    lp.objective[t_min] = -Rational::one();
    for c in &inst.costs {
        let c_star = set_cost(c, &inst.fstar);
        for f in members {
            if *f == inst.fstar {
                continue;
            }
            let mut terms = Vec::new();
            for s in difference(&inst.fstar, f) {
                terms.push((s, Rational::one()));
            }
            for s in difference(f, &inst.fstar) {
                terms.push((s, -Rational::one()));
            }
            lp.add_sparse(&terms, Cmp::Ge, &c_star - set_cost(c, f));
        }
    }
    for s in 0..n {
        let w = inst.weights[s].clone();
        lp.add_sparse(&[(s, w.clone()), (t_max, -Rational::one())], Cmp::Le, Rational::zero());
        lp.add_sparse(&[(s, w), (t_min, -Rational::one())], Cmp::Ge, Rational::zero());
        if let Some(l) = inst.lower[s].as_finite() {
            lp.add_sparse(&[(s, Rational::one())], Cmp::Ge, l.clone());
        }
        if let Some(u) = inst.upper[s].as_finite() {
            lp.add_sparse(&[(s, Rational::one())], Cmp::Le, u.clone());
        }
    }
    match lp.solve() {
        LpResult::Infeasible => Ok(FullResult::Infeasible),
        LpResult::Unbounded => Err(internal("span LP reported unbounded")),
        LpResult::Optimal { point, .. } => {
            let p: Vec<Rational> = point[..n].to_vec();
            // The reported span is that of p itself, not of the slack t variables.
            let span = weighted_span(&p, &inst.weights)?;
            Ok(FullResult::Optimal { span, p })
        }
    }
}

/// Affine form `α + β·x + γ·y` of one clamped coordinate inside a cell.
#[derive(Clone, Debug)]
struct Affine {
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
}

fn breakpoints(inst: &Instance, on_star: bool) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::new();
    for s in 0..inst.n() {
        if inst.fstar_mask()[s] != on_star {
            continue;
        }
        for e in [&inst.lower[s], &inst.upper[s]] {
            if let Some(v) = e.as_finite() {
                b.push(v * &inst.weights[s]);
            }
        }
    }
    b.sort();
    b.dedup();
    b
}

/// Closed cells `[b_i, b_{i+1}]` covering the line, with the two unbounded ends.
fn cells(points: &[Rational]) -> Vec<(ExtRational, ExtRational)> {
    let mut out = Vec::with_capacity(points.len() + 1);
    let mut lo = ExtRational::NegInf;
    for p in points {
        out.push((lo, ExtRational::Finite(p.clone())));
        lo = ExtRational::Finite(p.clone());
    }
    out.push((lo, ExtRational::PosInf));
    out
}

// Clamp of `v/w` to `[l, u]` as an affine function of `v` on a cell `[lo, hi]`.
fn piece(w: &Rational, l: &ExtRational, u: &ExtRational, lo: &ExtRational, hi: &ExtRational) -> (Rational, Rational) {
    if let Some(lf) = l.as_finite() {
        if *hi <= ExtRational::Finite(lf * w) {
            return (lf.clone(), Rational::zero());
        }
    }
    if let Some(uf) = u.as_finite() {
        if *lo >= ExtRational::Finite(uf * w) {
            return (uf.clone(), Rational::zero());
        }
    }
    (Rational::zero(), w.recip())
}

fn push_bounds(lp: &mut TwoVarLp, lo: &ExtRational, hi: &ExtRational, a: Rational, b: Rational) {
    // lo ≤ a·x + b·δ ≤ hi
    if let Some(h) = hi.as_finite() {
        lp.push(a.clone(), b.clone(), h.clone());
    }
    if let Some(l) = lo.as_finite() {
        lp.push(-a, -b, -l.clone());
    }
}

/// Two-variable LP over special-form vectors in `(x, y) = (Δ, δ+Δ)`.
pub fn lp_span_reduced(inst: &Instance, members: &[ElemSet]) -> Result<ReducedResult> {
    inst.validate()?;
    let n = inst.n();
    let in_star = inst.fstar_mask();
    let x_cells = cells(&breakpoints(inst, false));
    let y_cells = cells(&breakpoints(inst, true));
    let mut best: Option<(Rational, Rational, Rational)> = None;
    for (xlo, xhi) in &x_cells {
        for (ylo, yhi) in &y_cells {
            if yhi < xlo {
                continue;
            }
            let forms: Vec<Affine> = (0..n)
                .map(|s| {
                    let w = &inst.weights[s];
                    if in_star[s] {
                        let (a, g) = piece(w, &inst.lower[s], &inst.upper[s], ylo, yhi);
                        Affine {
                            alpha: a,
                            beta: Rational::zero(),
                            gamma: g,
                        }
                    } else {
                        let (a, b) = piece(w, &inst.lower[s], &inst.upper[s], xlo, xhi);
                        Affine {
                            alpha: a,
                            beta: b,
                            gamma: Rational::zero(),
                        }
                    }
                })
                .collect();
            // Variables x, y and t, where t bounds every pairwise gap between the
            // weighted values w·p(s), each of which is x, y or a constant here.
            let (vx, vy, vt) = (0, 1, 2);
            let mut lp = LinearProgram::new(3);
            lp.objective[vt] = Rational::one();
            lp.add_sparse(
                &[(vy, Rational::one()), (vx, -Rational::one())],
                Cmp::Ge,
                Rational::zero(),
            );
            for (v, lo, hi) in [(vx, xlo, xhi), (vy, ylo, yhi)] {
                if let Some(h) = hi.as_finite() {
                    lp.add_sparse(&[(v, Rational::one())], Cmp::Le, h.clone());
                }
                if let Some(l) = lo.as_finite() {
                    lp.add_sparse(&[(v, Rational::one())], Cmp::Ge, l.clone());
                }
            }
            // Linear forms (constant, x coefficient, y coefficient) of w·p(s).
            let mut values: Vec<(Rational, Rational, Rational)> = Vec::new();
            let mut consts: Vec<Rational> = Vec::new();
            for (s, a) in forms.iter().enumerate() {
                let w = &inst.weights[s];
                if a.beta.is_zero() && a.gamma.is_zero() {
                    consts.push(w * &a.alpha);
                } else {
                    let v = (Rational::zero(), w * &a.beta, w * &a.gamma);
                    if !values.contains(&v) {
                        values.push(v);
                    }
                }
            }
            if let (Some(lo), Some(hi)) = (consts.iter().min(), consts.iter().max()) {
                values.push((lo.clone(), Rational::zero(), Rational::zero()));
                if hi != lo {
                    values.push((hi.clone(), Rational::zero(), Rational::zero()));
                }
            }
            for a in &values {
                for b in &values {
                    if a == b {
                        continue;
                    }
                    // a − b ≤ t
                    lp.add_sparse(
                        &[(vx, &a.1 - &b.1), (vy, &a.2 - &b.2), (vt, -Rational::one())],
                        Cmp::Le,
                        &b.0 - &a.0,
                    );
                }
            }
            lp.add_sparse(&[(vt, Rational::one())], Cmp::Ge, Rational::zero());
            for c in &inst.costs {
                for f in members {
                    if *f == inst.fstar {
                        continue;
                    }
                    // gap = Σ_{F*∖F}(c − p) − Σ_{F∖F*}(c − p) ≤ 0
                    let mut k = Rational::zero();
                    let mut bx = Rational::zero();
                    let mut by = Rational::zero();
                    for (set, sign) in [(difference(&inst.fstar, f), 1), (difference(f, &inst.fstar), -1)] {
                        for s in set {
                            let a = &forms[s];
                            let (ck, cx, cy) = (&c[s] - &a.alpha, -&a.beta, -&a.gamma);
                            if sign > 0 {
                                k += ck;
                                bx += cx;
                                by += cy;
                            } else {
                                k -= ck;
                                bx -= cx;
                                by -= cy;
                            }
                        }
                    }
                    lp.add_sparse(&[(vx, bx), (vy, by)], Cmp::Le, -k);
                }
            }
            match lp.solve() {
                LpResult::Optimal { value, point } => {
                    if best.as_ref().is_none_or(|(bt, _, _)| value < *bt) {
                        best = Some((value, point[vx].clone(), point[vy].clone()));
                    }
                }
                LpResult::Infeasible => {}
                LpResult::Unbounded => return Err(internal("cell LP reported unbounded")),
            }
        }
    }
    match best {
        None => Ok(ReducedResult::Infeasible),
        Some((span, x, y)) => {
            let delta = &y - &x;
            let p = build_deviation(&delta, &x, &in_star, &inst.weights, &inst.lower, &inst.upper);
            for c in &inst.costs {
                for f in members {
                    if cost_gap(c, &p.values, &inst.fstar, f) > Rational::zero() {
                        return Err(internal("cell LP optimum is not feasible"));
                    }
                }
            }
            if weighted_span(&p.values, &inst.weights)? != span {
                return Err(internal("cell LP span differs from the rebuilt vector"));
            }
            Ok(ReducedResult::Optimal {
                span,
                delta,
                big_delta: x,
            })
        }
    }
}

/// Minimum `d` over `(d, D)` in a uniform box such that the unclamped special
/// form is feasible. `None` when no such pair exists.
pub fn lp_speclu(sub: &SpecLu, members: &[ElemSet]) -> Option<(Rational, Rational)> {
    let mut lp = TwoVarLp::default();
    lp.push(Rational::zero(), -Rational::one(), Rational::zero());
    push_bounds(&mut lp, &sub.l_out, &sub.u_out, Rational::one(), Rational::zero());
    push_bounds(&mut lp, &sub.l_in, &sub.u_in, Rational::one(), Rational::one());
    for c in &sub.costs {
        for f in members {
            // gap = c(F*) − c(F) − y·μ(F*∖F) + x·μ(F∖F*) with y = x + δ
            let k = set_cost(c, &sub.fstar) - set_cost(c, f);
            let a = sub.mu(&difference(&sub.fstar, f));
            let b = sub.mu(&difference(f, &sub.fstar));
            lp.push(&b - &a, -a, -k);
        }
    }
    lp.minimise_delta()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub solver_status: Status,
    pub solver_span: Option<Rational>,
    pub reduced: ReducedResult,
    pub full: Option<FullResult>,
    /// Whether the solver's vector satisfies bounds and optimality by enumeration.
    pub solver_vector_feasible: Option<bool>,
    pub mismatches: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares a solver outcome against the reduced LP and, if `full`, the full LP.
pub fn cross_check(inst: &Instance, outcome: &SolveOutcome, members: &[ElemSet], full: bool) -> Result<Report> {
    let reduced = lp_span_reduced(inst, members)?;
    let full = if full { Some(lp_span_full(inst, members)?) } else { None };
    let mut mismatches = Vec::new();
    let solver_span = outcome.span.clone();
    let mut compare = |name: &str, other: Option<&Rational>| match (&solver_span, other) {
        (Some(a), Some(b)) if a != b => mismatches.push(format!("span {a} differs from {name} optimum {b}")),
        (Some(_), None) => mismatches.push(format!("solver optimal but {name} infeasible")),
        (None, Some(b)) => mismatches.push(format!("solver infeasible but {name} optimum is {b}")),
        _ => {}
    };
    compare("reduced LP", reduced.span());
    if let Some(f) = &full {
        compare("full LP", f.span());
    }
    let solver_vector_feasible = outcome.deviation.as_ref().map(|p| {
        inst.within_bounds(&p.values)
            && inst.costs.iter().all(|c| {
                members
                    .iter()
                    .all(|f| cost_gap(c, &p.values, &inst.fstar, f) <= Rational::zero())
            })
    });
    if solver_vector_feasible == Some(false) {
        mismatches.push("solver deviation vector is not feasible".into());
    }
    if let (Some(p), Some(s)) = (&outcome.deviation, &solver_span) {
        let actual = weighted_span(&p.values, &inst.weights)?;
        if actual != *s {
            mismatches.push(format!("reported span {s} but the vector has span {actual}"));
        }
    }
    if outcome.status == Status::Optimal && solver_span.is_none() {
        mismatches.push("optimal status without a span".into());
    }
    Ok(Report {
        solver_status: outcome.status,
        solver_span,
        reduced,
        full,
        solver_vector_feasible,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyDescriptor;
    use crate::rational::rat;

    fn inst(lo: ExtRational, hi: ExtRational) -> (Instance, Vec<ElemSet>) {
        let sets = vec![vec![0, 1], vec![2, 3]];
        (
            Instance {
                ids: vec!["a".into(), "b".into(), "c".into(), "d".into()],
                family: FamilyDescriptor::Explicit(sets.clone()),
                fstar: vec![0, 1],
                costs: vec![vec![rat(1), rat(1), rat(0), rat(0)]],
                weights: vec![rat(1); 4],
                lower: vec![lo; 4],
                upper: vec![hi; 4],
            },
            sets,
        )
    }

    #[test]
    fn equal_size_pair_has_span_one() {
        let (i, fam) = inst(ExtRational::NegInf, ExtRational::PosInf);
        assert_eq!(lp_span_full(&i, &fam).unwrap().span(), Some(&rat(1)));
        assert_eq!(lp_span_reduced(&i, &fam).unwrap().span(), Some(&rat(1)));
    }

    #[test]
    fn zero_box_is_infeasible() {
        let z = ExtRational::Finite(rat(0));
        let (i, fam) = inst(z.clone(), z);
        assert_eq!(lp_span_full(&i, &fam).unwrap(), FullResult::Infeasible);
        assert_eq!(lp_span_reduced(&i, &fam).unwrap(), ReducedResult::Infeasible);
    }

    #[test]
    fn lone_member_is_free() {
        let (mut i, _) = inst(ExtRational::NegInf, ExtRational::PosInf);
        let fam = vec![vec![0, 1]];
        i.family = FamilyDescriptor::Explicit(fam.clone());
        assert_eq!(lp_span_full(&i, &fam).unwrap().span(), Some(&rat(0)));
        assert_eq!(lp_span_reduced(&i, &fam).unwrap().span(), Some(&rat(0)));
    }
}
