//! JSON files for instances, solutions and certificates. Rationals travel as
//! strings; maps are keyed by element id and serialized in sorted key order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilyDescriptor, Graph};
use crate::minmax::MinMaxCertificate;
use crate::model::Instance;
use crate::rational::{fmt_rational, parse_rational, ExtRational, Rational};
use crate::sets::{normalize, ElemSet};
use crate::solver::{BadSet, SolveOutcome, SolveTrace, Status};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    /// Element id → endpoints (tail, head for directed graphs).
    pub edges: BTreeMap<String, [String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyFile {
    Explicit {
        sets: Vec<Vec<String>>,
    },
    SpanningTrees {
        graph: GraphFile,
    },
    DagStPaths {
        graph: GraphFile,
        source: String,
        sink: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub elements: Vec<String>,
    pub weights: BTreeMap<String, String>,
    pub costs: Vec<BTreeMap<String, String>>,
    pub family: FamilyFile,
    pub input_solution: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<BTreeMap<String, String>>,
}

struct Ids<'a> {
    ids: &'a [String],
    index: HashMap<&'a str, usize>,
}

impl<'a> Ids<'a> {
    fn new(ids: &'a [String]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate element id {id:?}")));
            }
        }
        Ok(Ids { ids, index })
    }

    fn get(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown element id {id:?}")))
    }

    fn set(&self, list: &[String]) -> Result<ElemSet> {
        let v = list.iter().map(|s| self.get(s)).collect::<Result<Vec<_>>>()?;
        let sorted = normalize(v.clone());
        if sorted.len() != v.len() {
            return Err(Error::Invalid("element listed twice in a set".into()));
        }
        Ok(sorted)
    }

    /// Every id must appear exactly once.
    fn full_map(&self, what: &str, m: &BTreeMap<String, String>) -> Result<Vec<Rational>> {
        let mut out: Vec<Option<Rational>> = vec![None; self.ids.len()];
        for (k, v) in m {
            let i = self.get(k)?;
            out[i] = Some(parse_rational(v).map_err(|e| Error::Parse(format!("{what}[{k}]: {e}")))?);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("{what} missing for {:?}", self.ids[i]))))
            .collect()
    }

    fn bound_map(
        &self,
        what: &str,
        m: Option<&BTreeMap<String, String>>,
        default: ExtRational,
    ) -> Result<Vec<ExtRational>> {
        let mut out = vec![default; self.ids.len()];
        if let Some(m) = m {
            for (k, v) in m {
                let i = self.get(k)?;
                out[i] = ExtRational::parse(v).map_err(|e| Error::Parse(format!("{what}[{k}]: {e}")))?;
            }
        }
        Ok(out)
    }
}

fn graph_from_file(g: &GraphFile, ids: &Ids<'_>) -> Result<Graph> {
    let mut vidx = HashMap::new();
    for (i, v) in g.vertices.iter().enumerate() {
        if vidx.insert(v.as_str(), i).is_some() {
            return Err(Error::Invalid(format!("duplicate vertex {v:?}")));
        }
    }
    let vertex = |v: &str| {
        vidx.get(v)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown vertex {v:?}")))
    };
    let mut edges = vec![None; ids.ids.len()];
    for (e, [a, b]) in &g.edges {
        edges[ids.get(e)?] = Some((vertex(a)?, vertex(b)?));
    }
    Ok(Graph {
        vertices: g.vertices.clone(),
        edges,
    })
}

fn graph_to_file(g: &Graph, ids: &[String]) -> GraphFile {
    let edges = g
        .edges
        .iter()
        .enumerate()
        .filter_map(|(e, x)| x.map(|(u, v)| (ids[e].clone(), [g.vertices[u].clone(), g.vertices[v].clone()])))
        .collect();
    GraphFile {
        vertices: g.vertices.clone(),
        edges,
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Builds and validates the instance.
    pub fn to_instance(&self) -> Result<Instance> {
        let ids = Ids::new(&self.elements)?;
        let weights = ids.full_map("weights", &self.weights)?;
        let costs = self
            .costs
            .iter()
            .enumerate()
            .map(|(j, c)| ids.full_map(&format!("costs[{j}]"), c))
            .collect::<Result<Vec<_>>>()?;
        let family = match &self.family {
            FamilyFile::Explicit { sets } => {
                FamilyDescriptor::Explicit(sets.iter().map(|s| ids.set(s)).collect::<Result<Vec<_>>>()?)
            }
            FamilyFile::SpanningTrees { graph } => FamilyDescriptor::SpanningTrees(graph_from_file(graph, &ids)?),
            FamilyFile::DagStPaths { graph, source, sink } => {
                let g = graph_from_file(graph, &ids)?;
                let find = |v: &str| {
                    g.vertices
                        .iter()
                        .position(|x| x == v)
                        .ok_or_else(|| Error::Invalid(format!("unknown vertex {v:?}")))
                };
                FamilyDescriptor::DagPaths {
                    source: find(source)?,
                    sink: find(sink)?,
                    graph: g,
                }
            }
        };
        let inst = Instance {
            ids: self.elements.clone(),
            family,
            fstar: ids.set(&self.input_solution)?,
            costs,
            weights,
            lower: ids.bound_map("lower", self.lower.as_ref(), ExtRational::NegInf)?,
            upper: ids.bound_map("upper", self.upper.as_ref(), ExtRational::PosInf)?,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_instance(inst: &Instance) -> InstanceFile {
        let ids = &inst.ids;
        let map = |v: &[Rational]| -> BTreeMap<String, String> {
            ids.iter().cloned().zip(v.iter().map(fmt_rational)).collect()
        };
        let bound = |v: &[ExtRational], inf: ExtRational| -> Option<BTreeMap<String, String>> {
            if v.iter().all(|b| *b == inf) {
                None
            } else {
                Some(ids.iter().cloned().zip(v.iter().map(|b| b.to_string())).collect())
            }
        };
        let names = |s: &[usize]| s.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>();
        let family = match &inst.family {
            FamilyDescriptor::Explicit(sets) => FamilyFile::Explicit {
                sets: sets.iter().map(|s| names(s)).collect(),
            },
            FamilyDescriptor::SpanningTrees(g) => FamilyFile::SpanningTrees {
                graph: graph_to_file(g, ids),
            },
            FamilyDescriptor::DagPaths { graph, source, sink } => FamilyFile::DagStPaths {
                graph: graph_to_file(graph, ids),
                source: graph.vertices[*source].clone(),
                sink: graph.vertices[*sink].clone(),
            },
        };
        InstanceFile {
            elements: ids.clone(),
            weights: map(&inst.weights),
            costs: inst.costs.iter().map(|c| map(c)).collect(),
            family,
            input_solution: names(&inst.fstar),
            lower: bound(&inst.lower, ExtRational::NegInf),
            upper: bound(&inst.upper, ExtRational::PosInf),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BadSetFile {
    pub set: Vec<String>,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub i: u64,
    pub label: String,
    pub j: usize,
    pub set: Vec<String>,
    pub delta: String,
    #[serde(rename = "Delta")]
    pub big_delta: String,
    pub d: String,
    #[serde(rename = "D")]
    pub big_d: String,
    #[serde(rename = "X")]
    pub x: Option<BadSetFile>,
    #[serde(rename = "Y")]
    pub y: Option<BadSetFile>,
    #[serde(rename = "Z")]
    pub z: Option<BadSetFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictFile {
    pub label: String,
    pub j: usize,
    pub set: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub d0: String,
    #[serde(rename = "D0")]
    pub big_d0: String,
    pub steps: Vec<StepFile>,
    pub verdict: Option<VerdictFile>,
    pub iterations: u64,
    pub oracle_calls: u64,
}

impl TraceFile {
    pub fn from_trace(t: &SolveTrace, ids: &[String]) -> TraceFile {
        let names = |s: &[usize]| s.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>();
        let bad = |b: &Option<BadSet>| {
            b.as_ref().map(|b| BadSetFile {
                set: names(&b.set),
                j: b.j,
            })
        };
        TraceFile {
            d0: fmt_rational(&t.d0),
            big_d0: fmt_rational(&t.big_d0),
            steps: t
                .steps
                .iter()
                .map(|s| StepFile {
                    i: s.i,
                    label: s.label.to_string(),
                    j: s.j,
                    set: names(&s.set),
                    delta: fmt_rational(&s.delta),
                    big_delta: fmt_rational(&s.big_delta),
                    d: fmt_rational(&s.d),
                    big_d: fmt_rational(&s.big_d),
                    x: bad(&s.x),
                    y: bad(&s.y),
                    z: bad(&s.z),
                })
                .collect(),
            verdict: t.verdict.as_ref().map(|(l, j, s)| VerdictFile {
                label: l.to_string(),
                j: *j,
                set: names(s),
            }),
            iterations: t.iterations,
            oracle_calls: t.oracle_calls,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Omega1File {
    pub j: usize,
    pub set: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Omega2File {
    pub j_small: usize,
    pub small: Vec<String>,
    pub j_large: usize,
    pub large: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub omega1: String,
    pub omega2: String,
    pub value: String,
    pub d: String,
    #[serde(rename = "D")]
    pub big_d: String,
    pub omega1_witness: Option<Omega1File>,
    pub omega2_witness: Option<Omega2File>,
    pub deviation: BTreeMap<String, String>,
}

impl CertificateFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_certificate(c: &MinMaxCertificate, ids: &[String]) -> CertificateFile {
        let names = |s: &[usize]| s.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>();
        CertificateFile {
            omega1: c.omega1.to_string(),
            omega2: c.omega2.to_string(),
            value: fmt_rational(&c.value),
            d: fmt_rational(&c.d),
            big_d: fmt_rational(&c.big_d),
            omega1_witness: c.omega1_witness.as_ref().map(|w| Omega1File {
                j: w.j,
                set: names(&w.set),
            }),
            omega2_witness: c.omega2_witness.as_ref().map(|w| Omega2File {
                j_small: w.j_small,
                small: names(&w.small),
                j_large: w.j_large,
                large: names(&w.large),
            }),
            deviation: deviation_map(ids, &c.deviation.values),
        }
    }
}

fn deviation_map(ids: &[String], p: &[Rational]) -> BTreeMap<String, String> {
    ids.iter().cloned().zip(p.iter().map(fmt_rational)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, rename = "Delta", skip_serializing_if = "Option::is_none")]
    pub big_delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<BTreeMap<String, String>>,
    pub iterations: u64,
    pub oracle_calls: u64,
    /// Factor the weights were multiplied by; trace values live in that scale.
    pub weight_scale: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
}

impl SolutionFile {
    pub fn from_outcome(inst: &Instance, out: &SolveOutcome, with_trace: bool) -> SolutionFile {
        SolutionFile {
            status: match out.status {
                Status::Optimal => "optimal".into(),
                Status::Infeasible => "infeasible".into(),
            },
            span: out.span.as_ref().map(fmt_rational),
            delta: out.delta.as_ref().map(fmt_rational),
            big_delta: out.big_delta.as_ref().map(fmt_rational),
            deviation: out.deviation.as_ref().map(|p| deviation_map(&inst.ids, &p.values)),
            iterations: out.iterations,
            oracle_calls: out.oracle_calls,
            weight_scale: fmt_rational(&out.scale),
            trace: with_trace.then(|| TraceFile::from_trace(&out.trace, &inst.ids)),
            certificate: None,
        }
    }

    pub fn parse(text: &str) -> Result<SolutionFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    /// Deviation vector in element order, if present.
    pub fn deviation_values(&self, inst: &Instance) -> Result<Option<Vec<Rational>>> {
        let Some(m) = &self.deviation else {
            return Ok(None);
        };
        let ids = Ids::new(&inst.ids)?;
        ids.full_map("deviation", m).map(Some)
    }
}
