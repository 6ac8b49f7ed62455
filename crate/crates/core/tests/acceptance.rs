//! One line per acceptance criterion, printed in order. Runs without the
//! libtest harness; the process exits non-zero if any criterion fails.

mod common;

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::invariants::check_trace;
use common::{golden_cases, load_multi_cost, replay_case};
use invspan::family::FamilyDescriptor;
use invspan::feasibility::feasibility_witness;
use invspan::gen::{generate, generate_speclu, BoundStyle, FamilyStyle, GenOptions};
use invspan::minmax::certificate;
use invspan::model::{modified_costs, Instance};
use invspan::rational::{fmt_rational, rat, ExtRational, Rational};
use invspan::reduce::{all_subproblems, SpecLu};
use invspan::solver::{default_cap, solve_multi, SolveOptions, SolveOutcome, SpecOutcome, Status};
use invspan::verify::{lp_span_full, lp_span_reduced, ReducedResult};

/// Per-subproblem record for the oracle-call log.
struct Run {
    criterion: u8,
    instance: String,
    sub: usize,
    iterations: u64,
    oracle_calls: u64,
    cap: u64,
}

#[derive(Default)]
struct Audit {
    solves: usize,
    violations: Vec<String>,
    over_cap: Vec<String>,
    runs: Vec<Run>,
}

impl Audit {
    fn record(&mut self, criterion: u8, name: &str, idx: usize, sub: &SpecLu, out: &SpecOutcome, cap: u64) {
        self.solves += 1;
        if let Err(e) = check_trace(sub, &out.trace) {
            self.violations.push(format!("{name} sub {idx}: {e}"));
        }
        if out.trace.iterations > cap {
            self.over_cap
                .push(format!("{name} sub {idx}: {} > {cap}", out.trace.iterations));
        }
        self.runs.push(Run {
            criterion,
            instance: name.to_string(),
            sub: idx,
            iterations: out.trace.iterations,
            oracle_calls: out.trace.oracle_calls,
            cap,
        });
    }

    /// Audits every subproblem the pipeline actually solved.
    fn pipeline(&mut self, criterion: u8, name: &str, inst: &Instance, out: &SolveOutcome) -> Result<(), String> {
        let subs = all_subproblems(inst).map_err(|e| format!("{name}: {e}"))?;
        let solved: Vec<&SpecOutcome> = out.subproblems.iter().filter_map(|r| r.outcome.as_ref()).collect();
        if subs.len() != solved.len() {
            return Err(format!(
                "{name}: {} subproblems built, {} solved",
                subs.len(),
                solved.len()
            ));
        }
        let cap = default_cap(inst);
        for (idx, (sub, o)) in subs.iter().zip(solved).enumerate() {
            self.record(criterion, name, idx, sub, o, cap);
        }
        Ok(())
    }
}

fn solve(inst: &Instance) -> Result<SolveOutcome, String> {
    solve_multi(inst, &inst.family, &SolveOptions::default()).map_err(|e| e.to_string())
}

fn c1(audit: &mut Audit) -> Result<String, String> {
    let cases = golden_cases();
    if cases.len() != 35 {
        return Err(format!("expected 35 toy panels, found {}", cases.len()));
    }
    let mut steps = 0;
    for g in &cases {
        let out = replay_case(g)?;
        steps += out.trace.steps.len();
        audit.record(1, &g.name, 0, &g.speclu(), &out, default_cap(&g.instance));
    }
    Ok(format!("{} panels, {steps} steps replayed exactly", cases.len()))
}

fn c2(audit: &mut Audit) -> Result<String, String> {
    let (inst, expected) = load_multi_cost();
    let out = solve(&inst)?;
    audit.pipeline(2, "multi_cost", &inst, &out)?;
    if (out.delta.as_ref(), out.big_delta.as_ref()) != (Some(&rat(1)), Some(&rat(0))) {
        return Err(format!("(δ, Δ) = ({:?}, {:?})", out.delta, out.big_delta));
    }
    let p = out.deviation.ok_or("no deviation vector")?;
    for (j, c) in inst.costs.iter().enumerate() {
        let got: Vec<String> = modified_costs(c, &p.values).iter().map(fmt_rational).collect();
        let want: Vec<String> = expected.modified.iter().map(|pair| pair[j].clone()).collect();
        if got != want {
            return Err(format!("cost vector {j}: {got:?}, expected {want:?}"));
        }
    }
    Ok("(δ, Δ) = (1, 0), modified costs match".into())
}

fn c3(audit: &mut Audit) -> Result<String, String> {
    let styles = [BoundStyle::Unbounded, BoundStyle::Box, BoundStyle::SpecLuLike];
    let (mut full_checked, mut infeasible) = (0, 0);
    for seed in 0..500u64 {
        let opts = GenOptions {
            seed,
            n: 2 + (seed % 5) as usize,
            family_size: 2 + (seed % 19) as usize,
            weight_denoms: vec![1, 2, 3],
            bound_style: styles[(seed % 3) as usize],
            k: 1 + usize::from(seed % 4 == 3),
            ..GenOptions::default()
        };
        let inst = generate(&opts).map_err(|e| e.to_string())?;
        let name = format!("random seed {seed}");
        let members = inst.family.enumerate(20).map_err(|e| e.to_string())?;
        let out = solve(&inst).map_err(|e| format!("{name}: {e}"))?;
        audit.pipeline(3, &name, &inst, &out)?;
        let reduced = lp_span_reduced(&inst, &members).map_err(|e| e.to_string())?;
        let lp_status = if reduced.span().is_some() {
            Status::Optimal
        } else {
            Status::Infeasible
        };
        if out.status != lp_status || out.span.as_ref() != reduced.span() {
            return Err(format!(
                "{name}: solver {:?} {:?}, reduced LP {reduced:?}",
                out.status, out.span
            ));
        }
        if out.status == Status::Infeasible {
            infeasible += 1;
        }
        if inst.n() <= 5 {
            let full = lp_span_full(&inst, &members).map_err(|e| e.to_string())?;
            if out.span.as_ref() != full.span() {
                return Err(format!("{name}: solver {:?}, full LP {full:?}", out.span));
            }
            full_checked += 1;
        }
    }
    Ok(format!(
        "500 instances ({infeasible} infeasible), {full_checked} also against the full LP"
    ))
}

fn c4(audit: &mut Audit) -> Result<String, String> {
    let mut positive = 0;
    for seed in 0..200u64 {
        let opts = GenOptions {
            seed: 10_000 + seed,
            n: 2 + (seed % 5) as usize,
            family_size: 2 + (seed % 12) as usize,
            weight_denoms: vec![1, 2, 3],
            k: 1 + (seed % 3) as usize,
            ..GenOptions::default()
        };
        let inst = generate(&opts).map_err(|e| e.to_string())?;
        let name = format!("unconstrained seed {}", opts.seed);
        let members = inst.family.enumerate(1000).map_err(|e| e.to_string())?;
        let cert = certificate(&inst, &members).map_err(|e| format!("{name}: {e}"))?;
        let mut value = Rational::from_integer(0.into());
        for w in [&cert.omega1, &cert.omega2] {
            if let ExtRational::Finite(v) = w {
                value = value.max(v.clone());
            }
        }
        let out = solve(&inst).map_err(|e| format!("{name}: {e}"))?;
        audit.pipeline(4, &name, &inst, &out)?;
        if out.span.as_ref() != Some(&value) || cert.value != value {
            return Err(format!("{name}: solver {:?}, max{{0, ω1, ω2}} = {value}", out.span));
        }
        if value > Rational::from_integer(0.into()) {
            positive += 1;
        }
    }
    Ok(format!("200 instances, {positive} with a positive optimum"))
}

fn c5(audit: &mut Audit) -> Result<String, String> {
    let mut feasible = 0;
    for seed in 0..200u64 {
        let opts = GenOptions {
            seed: 20_000 + seed,
            n: 2 + (seed % 5) as usize,
            family_size: 2 + (seed % 12) as usize,
            weight_denoms: vec![1, 2, 3],
            k: 1 + usize::from(seed % 5 == 4),
            ..GenOptions::default()
        };
        let (inst, sub) = generate_speclu(&opts).map_err(|e| e.to_string())?;
        let name = format!("box seed {}", opts.seed);
        let members = inst.family.enumerate(1000).map_err(|e| e.to_string())?;
        let witness = feasibility_witness(&sub, &members, &inst.family).map_err(|e| e.to_string())?;
        let reduced = lp_span_reduced(&inst, &members).map_err(|e| e.to_string())?;
        let lp_feasible = !matches!(reduced, ReducedResult::Infeasible);
        if witness.feasible != lp_feasible {
            return Err(format!(
                "{name}: witness {:?} says {}, LP says {lp_feasible}",
                witness.case, witness.feasible
            ));
        }
        let out = solve(&inst).map_err(|e| format!("{name}: {e}"))?;
        audit.pipeline(5, &name, &inst, &out)?;
        if (out.status == Status::Optimal) != lp_feasible {
            return Err(format!("{name}: solver {:?}, LP feasible {lp_feasible}", out.status));
        }
        feasible += usize::from(lp_feasible);
    }
    Ok(format!("200 instances, {feasible} feasible"))
}

fn c6(audit: &Audit) -> Result<String, String> {
    match audit.violations.first() {
        None => Ok(format!("{} subproblem solves, no violations", audit.solves)),
        Some(first) => Err(format!("{} violations, first: {first}", audit.violations.len())),
    }
}

fn c7(audit: &Audit) -> Result<String, String> {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_oracle_calls.csv");
    let mut csv = String::from("criterion,instance,subproblem,iterations,oracle_calls,cap\n");
    for r in &audit.runs {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.criterion, r.instance, r.sub, r.iterations, r.oracle_calls, r.cap
        );
    }
    std::fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(first) = audit.over_cap.first() {
        return Err(format!("{} solves over the cap, first: {first}", audit.over_cap.len()));
    }
    let calls: Vec<u64> = audit.runs.iter().map(|r| r.oracle_calls).collect();
    let total: u64 = calls.iter().sum();
    let max_calls = calls.iter().max().copied().unwrap_or(0);
    let max_iter = audit.runs.iter().map(|r| r.iterations).max().unwrap_or(0);
    Ok(format!(
        "all {} solves within the cap; iterations max {max_iter}; oracle calls mean {:.2}, max {max_calls}; log at {}",
        audit.runs.len(),
        total as f64 / calls.len().max(1) as f64,
        path.display()
    ))
}

fn c8(audit: &mut Audit) -> Result<String, String> {
    let styles = [BoundStyle::Unbounded, BoundStyle::Box, BoundStyle::SpecLuLike];
    let mut count = 0;
    for (family, sizes) in [
        (FamilyStyle::SpanningTrees, 3..=8usize),
        (FamilyStyle::DagPaths, 2..=8usize),
    ] {
        for seed in 0..60u64 {
            let n = sizes.clone().nth(seed as usize % sizes.clone().count()).unwrap();
            let opts = GenOptions {
                seed: 30_000 + seed,
                n,
                weight_denoms: vec![1, 2, 3],
                bound_style: styles[(seed % 3) as usize],
                family_style: family,
                k: 1 + usize::from(seed % 4 == 3),
                ..GenOptions::default()
            };
            let inst = generate(&opts).map_err(|e| e.to_string())?;
            let name = format!("{family:?} seed {}", opts.seed);
            if let FamilyDescriptor::SpanningTrees(g) = &inst.family {
                if g.vertices.len() > 6 {
                    return Err(format!("{name}: {} vertices", g.vertices.len()));
                }
            }
            let mut explicit = inst.clone();
            explicit.family = FamilyDescriptor::Explicit(inst.family.enumerate(100_000).map_err(|e| e.to_string())?);
            let a = solve(&inst).map_err(|e| format!("{name}: {e}"))?;
            let b = solve(&explicit).map_err(|e| format!("{name} (explicit): {e}"))?;
            audit.pipeline(8, &name, &inst, &a)?;
            if a.status != b.status || a.span != b.span {
                return Err(format!(
                    "{name}: graph {:?} {:?}, explicit {:?} {:?}",
                    a.status, a.span, b.status, b.span
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} graph instances match their explicit re-encoding"))
}

fn run(
    n: u8,
    title: &str,
    budget: Duration,
    lines: &mut Vec<(u8, bool, String)>,
    f: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let took = start.elapsed();
    let result = match result {
        Ok(msg) if took > budget => Err(format!("{msg}; took {took:.2?}, budget {budget:?}")),
        r => r,
    };
    let (ok, msg) = match result {
        Ok(msg) => (true, msg),
        Err(msg) => (false, msg),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    lines.push((n, ok, format!("criterion {n} {tag}  {title}: {msg} ({took:.2?})")));
}

fn main() {
    let mut audit = Audit::default();
    let mut lines = Vec::new();
    let s = Duration::from_secs;
    run(1, "toy cases", s(1), &mut lines, || c1(&mut audit));
    run(2, "two-cost example", Duration::from_millis(100), &mut lines, || {
        c2(&mut audit)
    });
    run(3, "solver against the LPs", s(300), &mut lines, || c3(&mut audit));
    run(4, "min-max formula", s(120), &mut lines, || c4(&mut audit));
    run(5, "feasibility witness", s(120), &mut lines, || c5(&mut audit));
    run(8, "graph oracles", s(60), &mut lines, || c8(&mut audit));
    run(6, "iteration invariants", s(5), &mut lines, || c6(&audit));
    run(7, "iteration cap and oracle calls", s(5), &mut lines, || c7(&audit));
    // 6 and 7 summarise the audits collected while 1–5 and 8 ran.
    lines.sort_by_key(|l| l.0);
    for (_, _, line) in &lines {
        println!("{line}");
    }
    if lines.iter().any(|l| !l.1) {
        std::process::exit(1);
    }
}
