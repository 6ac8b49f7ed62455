#![allow(dead_code)]

pub mod invariants;

use std::path::PathBuf;

use invspan::io::InstanceFile;
use invspan::model::modified_costs;
use invspan::model::Instance;
use invspan::rational::{fmt_rational, parse_rational, ExtRational};
use invspan::reduce::SpecLu;
use invspan::sets::ElemSet;
use invspan::solver::{solve_speclu, SpecOutcome, SpecResult};
use invspan::verify::lp_speclu;
use serde_json::Value;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct GoldenCase {
    pub name: String,
    pub instance: Instance,
    pub l_in: ExtRational,
    pub u_in: ExtRational,
    pub l_out: ExtRational,
    pub u_out: ExtRational,
    pub initial: (String, String),
    /// (label, δ, Δ) per step.
    pub steps: Vec<(String, String, String)>,
    pub infeasible_label: Option<String>,
    pub cost_rows: Vec<Vec<String>>,
}

fn s(v: &Value) -> String {
    v.as_str().expect("string field").to_string()
}

fn ext(v: &Value) -> ExtRational {
    ExtRational::parse(v.as_str().expect("bound")).expect("bound parses")
}

impl GoldenCase {
    pub fn members(&self) -> Vec<ElemSet> {
        self.instance.family.enumerate(1000).unwrap()
    }

    /// The uniform-box subproblem of a toy case (unit weights, no frozen set).
    pub fn speclu(&self) -> SpecLu {
        let i = &self.instance;
        SpecLu::direct(
            i.fstar.clone(),
            vec![],
            i.weights.clone(),
            i.costs.clone(),
            self.l_in.clone(),
            self.u_in.clone(),
            self.l_out.clone(),
            self.u_out.clone(),
        )
        .unwrap()
    }
}

pub fn load_case(path: &std::path::Path) -> GoldenCase {
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let inst_file: InstanceFile = serde_json::from_value(doc["instance"].clone()).unwrap();
    let instance = inst_file.to_instance().unwrap();
    let b = &doc["box"];
    let e = &doc["expected"];
    GoldenCase {
        name: s(&doc["name"]),
        instance,
        l_in: ext(&b["l_in"]),
        u_in: ext(&b["u_in"]),
        l_out: ext(&b["l_out"]),
        u_out: ext(&b["u_out"]),
        initial: (s(&e["initial"]["delta"]), s(&e["initial"]["Delta"])),
        steps: e["steps"]
            .as_array()
            .unwrap()
            .iter()
            .map(|st| (s(&st["label"]), s(&st["delta"]), s(&st["Delta"])))
            .collect(),
        infeasible_label: e["infeasible_label"].as_str().map(str::to_string),
        cost_rows: e["cost_rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r.as_array().unwrap().iter().map(s).collect())
            .collect(),
    }
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("case_"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_case(p)).collect()
}

pub struct MultiExpected {
    /// (δ, Δ) for each cost vector alone.
    pub single: Vec<(String, String)>,
    /// Per element, the modified cost under each cost vector.
    pub modified: Vec<Vec<String>>,
}

pub fn load_multi_cost() -> (Instance, MultiExpected) {
    let path = golden_dir().join("multi_cost.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let inst_file: InstanceFile = serde_json::from_value(doc["instance"].clone()).unwrap();
    let e = &doc["expected"];
    assert_eq!(parse_rational(&s(&e["delta"])).unwrap(), parse_rational("1").unwrap());
    let single = e["single"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (s(&v["delta"]), s(&v["Delta"])))
        .collect();
    let modified = e["modified_costs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(s).collect())
        .collect();
    (inst_file.to_instance().unwrap(), MultiExpected { single, modified })
}

/// Replays one toy case: initial point, every step, cost rows after each step,
/// the verdict, and the optimum against the two-variable LP.
pub fn replay_case(g: &GoldenCase) -> Result<SpecOutcome, String> {
    let sub = g.speclu();
    let out = solve_speclu(&sub, &g.instance.family, 1000).map_err(|e| format!("{}: {e}", g.name))?;
    let t = &out.trace;
    let initial = (fmt_rational(&t.d0), fmt_rational(&t.big_d0));
    if initial != g.initial {
        return Err(format!(
            "{}: initial step {initial:?}, expected {:?}",
            g.name, g.initial
        ));
    }
    let got: Vec<(String, String, String)> = t
        .steps
        .iter()
        .map(|s| (s.label.to_string(), fmt_rational(&s.delta), fmt_rational(&s.big_delta)))
        .collect();
    if got != g.steps {
        return Err(format!("{}: steps {got:?}, expected {:?}", g.name, g.steps));
    }

    let c = &sub.costs[0];
    let mut rows = vec![modified_costs(c, &sub.deviation(&t.d0, &t.big_d0))];
    for s in &t.steps {
        rows.push(modified_costs(c, &sub.deviation(&s.d, &s.big_d)));
    }
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
    if rows != g.cost_rows {
        return Err(format!("{}: cost rows {rows:?}, expected {:?}", g.name, g.cost_rows));
    }

    let lp = lp_speclu(&sub, &g.members());
    match (&out.result, &g.infeasible_label, lp) {
        (SpecResult::Optimal { d, .. }, None, Some((lp_d, _))) if *d == lp_d => {}
        (SpecResult::Infeasible(label), Some(want), None) if label.as_str() == want => {}
        (r, want, lp) => {
            return Err(format!("{}: got {r:?}, expected verdict {want:?}, LP {lp:?}", g.name));
        }
    }
    Ok(out)
}
