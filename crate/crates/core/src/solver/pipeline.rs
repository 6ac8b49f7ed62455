use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::speclu::{solve_speclu, SpecOutcome, SpecResult};
use super::SolveTrace;
use crate::error::{internal, Error, Result};
use crate::family::{CountingOracle, Oracle};
use crate::model::{is_feasible_deviation, DeviationVector, Instance};
use crate::rational::Rational;
use crate::reduce::{build_subproblem, interval_pairs, lift_solution, normalize_bounds_and_order, IntervalPair};

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Iteration limit per subproblem; `None` uses [`default_cap`].
    pub cap: Option<u64>,
    /// Worker threads for independent subproblems (0 or 1 means serial).
    pub parallel: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubReport {
    pub pair: IntervalPair,
    /// `None` when the cell is empty and was skipped.
    pub outcome: Option<SpecOutcome>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub status: Status,
    /// `(δ, Δ)` in the caller's weight scale.
    pub delta: Option<Rational>,
    pub big_delta: Option<Rational>,
    pub deviation: Option<DeviationVector>,
    pub span: Option<Rational>,
    /// Trace of the winning subproblem, or of the last one tried when infeasible.
    /// Its values are in the rescaled weight scale.
    pub trace: SolveTrace,
    pub subproblems: Vec<SubReport>,
    pub iterations: u64,
    pub oracle_calls: u64,
    /// Factor applied to the weights internally.
    pub scale: Rational,
}

/// `64·‖w‖₋₁⁶ + 64`, saturated to `u64`.
pub fn default_cap(inst: &Instance) -> u64 {
    let norm = inst.inv_weight_norm();
    let v: BigInt = norm.ceil().to_integer();
    let big: BigInt = num_traits::pow(v, 6) * 64 + 64;
    big.to_u64().unwrap_or(u64::MAX)
}

pub fn solve(inst: &Instance, oracle: &dyn Oracle, opts: &SolveOptions) -> Result<SolveOutcome> {
    if inst.k() != 1 {
        return Err(Error::Invalid(format!(
            "single-cost solve got {} cost vectors; use solve_multi",
            inst.k()
        )));
    }
    run(inst, oracle, opts)
}

pub fn solve_multi(inst: &Instance, oracle: &dyn Oracle, opts: &SolveOptions) -> Result<SolveOutcome> {
    run(inst, oracle, opts)
}

// A subproblem's outcome and the subproblem itself; both `None` for an empty cell.
type Solved = (Option<SpecOutcome>, Option<crate::reduce::SpecLu>);

fn run(inst: &Instance, oracle: &dyn Oracle, opts: &SolveOptions) -> Result<SolveOutcome> {
    inst.validate()?;
    let (work, scale) = inst.rescaled();
    let cap = opts.cap.unwrap_or_else(|| default_cap(inst));
    let counter = CountingOracle::new(oracle);
    let norm = normalize_bounds_and_order(&work);
    let pairs = interval_pairs(&norm);

    let solve_one = |idx: usize| -> Result<Solved> {
        match build_subproblem(&norm, &pairs[idx])? {
            None => Ok((None, None)),
            Some(sub) => {
                let out = solve_speclu(&sub, &counter, cap)?;
                Ok((Some(out), Some(sub)))
            }
        }
    };

    let mut results: Vec<Option<Result<Solved>>> = (0..pairs.len()).map(|_| None).collect();
    let workers = opts.parallel.max(1).min(pairs.len().max(1));
    if workers <= 1 {
        for (idx, slot) in results.iter_mut().enumerate() {
            *slot = Some(solve_one(idx));
        }
    } else {
        let next = AtomicUsize::new(0);
        let shared = Mutex::new(&mut results);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= pairs.len() {
                        break;
                    }
                    let r = solve_one(idx);
                    shared.lock().expect("result lock")[idx] = Some(r);
                });
            }
        });
    }

    let mut subproblems = Vec::with_capacity(pairs.len());
    let mut best: Option<(Rational, Rational, usize)> = None;
    let mut subs = Vec::with_capacity(pairs.len());
    let mut iterations = 0;
    for (idx, r) in results.into_iter().enumerate() {
        let (outcome, sub) = r.ok_or_else(|| internal("missing subproblem result"))??;
        if let Some(o) = &outcome {
            iterations += o.trace.iterations;
            if let SpecResult::Optimal { d, big_d } = &o.result {
                if best.as_ref().is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d.clone(), big_d.clone(), idx));
                }
            }
        }
        subs.push(sub);
        subproblems.push(SubReport {
            pair: pairs[idx].clone(),
            outcome,
        });
    }

    let Some((d, big_d, idx)) = best else {
        let trace = subproblems
            .iter()
            .rev()
            .find_map(|s| s.outcome.as_ref().map(|o| o.trace.clone()))
            .unwrap_or_default();
        return Ok(SolveOutcome {
            status: Status::Infeasible,
            delta: None,
            big_delta: None,
            deviation: None,
            span: None,
            trace,
            subproblems,
            iterations,
            oracle_calls: counter.calls(),
            scale,
        });
    };

    let sub = subs[idx]
        .as_ref()
        .ok_or_else(|| internal("winning subproblem missing"))?;
    let mut p = lift_solution(sub, &d, &big_d)?;
    let delta = &d / &scale;
    let big_delta = &big_d / &scale;
    p.special_form = Some((delta.clone(), big_delta.clone()));
    let span = p.span(&inst.weights)?;
    if span != delta {
        return Err(internal(format!(
            "span {span} of the lifted vector differs from d = {delta}"
        )));
    }
    if !is_feasible_deviation(inst, &p.values, &counter)? {
        return Err(internal("lifted deviation is not feasible"));
    }
    let trace = subproblems[idx]
        .outcome
        .as_ref()
        .map(|o| o.trace.clone())
        .unwrap_or_default();
    Ok(SolveOutcome {
        status: Status::Optimal,
        delta: Some(delta),
        big_delta: Some(big_delta),
        deviation: Some(p),
        span: Some(span),
        trace,
        subproblems,
        iterations,
        oracle_calls: counter.calls(),
        scale,
    })
}
