//! The `invspan` command line: solve, verify, minmax and gen.
//!
//! Exit codes: 0 success (optimal, or every check passed), 1 error,
//! 2 infeasible instance, 3 a verification check failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::DEFAULT_ENUM_CAP;
use crate::feasibility::feasibility_witness;
use crate::gen::{generate, BoundStyle, FamilyStyle, GenOptions};
use crate::io::{CertificateFile, InstanceFile, SolutionFile};
use crate::minmax::certificate;
use crate::model::{cost_gap, weighted_span, Instance};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::reduce::all_subproblems;
use crate::sets::ElemSet;
use crate::solver::{default_cap, solve, solve_multi, solve_speclu, SolveOptions, SolveOutcome, SpecResult, Status};
use crate::verify::{cross_check, lp_speclu, FULL_LP_MAX_N, FULL_LP_MAX_ROWS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "invspan",
    version,
    about = "Inverse optimization under the weighted span objective"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print the solution as JSON.
    Solve(SolveArgs),
    /// Cross-check the solver against the brute-force LPs.
    Verify(VerifyArgs),
    /// Print the min-max certificate of an unconstrained instance.
    Minmax { instance: PathBuf },
    /// Print a seeded random instance.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Allow several cost vectors.
    #[arg(long)]
    multi: bool,
    /// Include the iteration trace of the winning subproblem.
    #[arg(long)]
    trace: bool,
    /// Iteration cap per subproblem.
    #[arg(long)]
    cap: Option<u64>,
    /// Worker threads for independent subproblems.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// An instance file, or a directory of them.
    path: PathBuf,
    /// Compare against the LP over the whole deviation vector.
    #[arg(long)]
    full: bool,
    /// Compare against the per-cell special-form LPs.
    #[arg(long)]
    reduced: bool,
    /// Check the feasibility witness of every subproblem.
    #[arg(long)]
    feasibility: bool,
    /// A solution file to check against the instance.
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    family_size: usize,
    /// Comma-separated choices for 1/w.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    weight_denoms: Vec<u64>,
    /// unbounded, box or speclu-like.
    #[arg(long, default_value = "unbounded")]
    bounds: BoundStyle,
    /// explicit, spanning-trees or dag-paths.
    #[arg(long, default_value = "explicit")]
    family: FamilyStyle,
    /// Number of cost vectors.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    cost_max: i64,
}

/// Runs the command line on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Minmax { instance } => cmd_minmax(&instance, out),
        Command::Gen(a) => cmd_gen(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Reads an instance file. A document with an `instance` key (as in the test
/// fixtures) is unwrapped first.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    let ctx = |e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Invalid(m) => Error::Invalid(format!("{}: {m}", path.display())),
        other => other,
    };
    let doc: Value = serde_json::from_str(&text).map_err(|e| ctx(Error::Parse(e.to_string())))?;
    let file: InstanceFile = match doc.get("instance") {
        Some(inner) if doc.get("elements").is_none() => {
            serde_json::from_value(inner.clone()).map_err(|e| ctx(Error::Parse(e.to_string())))?
        }
        _ => InstanceFile::parse(&text).map_err(ctx)?,
    };
    file.to_instance().map_err(ctx)
}

fn emit(out: &mut dyn Write, v: &impl serde::Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out, "{s}").map_err(|e| Error::Internal(e.to_string()))
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let opts = SolveOptions {
        cap: a.cap,
        parallel: a.parallel,
    };
    let outcome = if a.multi {
        solve_multi(&inst, &inst.family, &opts)?
    } else {
        solve(&inst, &inst.family, &opts)?
    };
    emit(out, &SolutionFile::from_outcome(&inst, &outcome, a.trace))?;
    Ok(match outcome.status {
        Status::Optimal => EXIT_OK,
        Status::Infeasible => EXIT_INFEASIBLE,
    })
}

fn cmd_minmax(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(path)?;
    let members = inst.family.enumerate(DEFAULT_ENUM_CAP)?;
    let cert = certificate(&inst, &members)?;
    emit(out, &CertificateFile::from_certificate(&cert, &inst.ids))?;
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = generate(&GenOptions {
        seed: a.seed,
        n: a.n,
        family_size: a.family_size,
        weight_denoms: a.weight_denoms.clone(),
        bound_style: a.bounds,
        family_style: a.family,
        k: a.k,
        cost_max: a.cost_max,
    })?;
    emit(out, &InstanceFile::from_instance(&inst))?;
    Ok(EXIT_OK)
}

/// Which checks `verify` runs.
#[derive(Clone, Copy, Debug)]
pub struct Checks {
    pub full: bool,
    pub reduced: bool,
    pub feasibility: bool,
}

impl Checks {
    pub const ALL: Checks = Checks {
        full: true,
        reduced: true,
        feasibility: true,
    };
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let checks = if a.full || a.reduced || a.feasibility {
        Checks {
            full: a.full,
            reduced: a.reduced,
            feasibility: a.feasibility,
        }
    } else {
        Checks::ALL
    };
    let files = if a.path.is_dir() {
        if a.solution.is_some() {
            return Err(Error::Invalid("--solution needs a single instance file".into()));
        }
        let mut v: Vec<PathBuf> = std::fs::read_dir(&a.path)
            .map_err(|e| Error::Parse(format!("{}: {e}", a.path.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    } else {
        vec![a.path.clone()]
    };
    let solution = match &a.solution {
        Some(p) => Some(SolutionFile::parse(&read(p)?)?),
        None => None,
    };
    let mut reports = Vec::new();
    let mut all_ok = true;
    for f in &files {
        let inst = load_instance(f)?;
        let (report, ok) = verify_instance(&inst, checks, solution.as_ref())?;
        all_ok &= ok;
        let mut report = report;
        report["file"] = json!(f.display().to_string());
        reports.push(report);
    }
    emit(out, &json!({ "ok": all_ok, "instances": reports }))?;
    Ok(if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Runs the requested checks on one instance. Returns a JSON report and
/// whether everything passed.
pub fn verify_instance(inst: &Instance, checks: Checks, solution: Option<&SolutionFile>) -> Result<(Value, bool)> {
    let members = inst.family.enumerate(DEFAULT_ENUM_CAP)?;
    let outcome = solve_multi(inst, &inst.family, &SolveOptions::default())?;
    let mut mismatches: Vec<String> = Vec::new();
    let mut results = serde_json::Map::new();

    if checks.reduced || checks.full {
        let fits = inst.n() <= FULL_LP_MAX_N && members.len() * inst.k() <= FULL_LP_MAX_ROWS;
        let run_full = checks.full && fits;
        if checks.full && !fits {
            if !checks.reduced {
                return Err(Error::TooLarge(format!(
                    "full LP limited to {FULL_LP_MAX_N} elements and {FULL_LP_MAX_ROWS} set rows"
                )));
            }
            results.insert("full".into(), json!("skipped: instance too large"));
        }
        let report = cross_check(inst, &outcome, &members, run_full)?;
        results.insert("reduced".into(), json!(report.reduced.span().map(fmt_rational)));
        if let Some(f) = &report.full {
            results.insert("full".into(), json!(f.span().map(fmt_rational)));
        }
        mismatches.extend(report.mismatches);
    }

    if checks.feasibility {
        let cap = default_cap(inst);
        let subs = all_subproblems(inst)?;
        let mut agree = 0usize;
        for (i, sub) in subs.iter().enumerate() {
            let witness = feasibility_witness(sub, &members, &inst.family)?;
            let lp = lp_speclu(sub, &members).is_some();
            let solver = matches!(solve_speclu(sub, &inst.family, cap)?.result, SpecResult::Optimal { .. });
            if witness.feasible == lp && lp == solver {
                agree += 1;
            } else {
                mismatches.push(format!(
                    "subproblem {i}: witness {} / LP {} / solver {}",
                    witness.feasible, lp, solver
                ));
            }
        }
        results.insert(
            "feasibility".into(),
            json!(format!("{agree}/{} subproblems agree", subs.len())),
        );
    }

    if let Some(sol) = solution {
        mismatches.extend(check_solution(inst, &members, &outcome, sol)?);
    }

    let ok = mismatches.is_empty();
    let report = json!({
        "status": match outcome.status { Status::Optimal => "optimal", Status::Infeasible => "infeasible" },
        "span": outcome.span.as_ref().map(fmt_rational),
        "checks": results,
        "mismatches": mismatches,
    });
    Ok((report, ok))
}

/// Problems with a claimed solution, judged against the instance and the
/// solver's own optimum.
pub fn check_solution(
    inst: &Instance,
    members: &[ElemSet],
    outcome: &SolveOutcome,
    sol: &SolutionFile,
) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let want = match outcome.status {
        Status::Optimal => "optimal",
        Status::Infeasible => "infeasible",
    };
    if sol.status != want {
        bad.push(format!("solution says {:?}, solver says {want:?}", sol.status));
        return Ok(bad);
    }
    if outcome.status == Status::Infeasible {
        return Ok(bad);
    }
    let claimed = match &sol.span {
        Some(s) => parse_rational(s)?,
        None => {
            bad.push("optimal solution without a span".into());
            return Ok(bad);
        }
    };
    if Some(&claimed) != outcome.span.as_ref() {
        bad.push(format!(
            "claimed span {} but the optimum is {}",
            fmt_rational(&claimed),
            outcome.span.as_ref().map(fmt_rational).unwrap_or_default()
        ));
    }
    let Some(p) = sol.deviation_values(inst)? else {
        bad.push("optimal solution without a deviation vector".into());
        return Ok(bad);
    };
    if !inst.within_bounds(&p) {
        bad.push("deviation vector violates the bounds".into());
    }
    for (j, c) in inst.costs.iter().enumerate() {
        if let Some(f) = members
            .iter()
            .find(|f| cost_gap(c, &p, &inst.fstar, f) > Rational::zero())
        {
            let names: Vec<&str> = f.iter().map(|&i| inst.ids[i].as_str()).collect();
            bad.push(format!("under cost {j} the set {names:?} beats the input solution"));
        }
    }
    let actual = weighted_span(&p, &inst.weights)?;
    if actual != claimed {
        bad.push(format!(
            "deviation vector has span {} but {} is claimed",
            fmt_rational(&actual),
            fmt_rational(&claimed)
        ));
    }
    Ok(bad)
}
