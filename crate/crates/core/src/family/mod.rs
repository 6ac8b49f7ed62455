//! Feasible-solution families and their minimum-cost oracles.

mod graph;

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Zero;

pub use graph::Graph;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sets::{normalize, ElemSet};

pub const DEFAULT_ENUM_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyDescriptor {
    /// Sets listed one by one.
    Explicit(Vec<ElemSet>),
    /// Spanning trees of an undirected graph whose edges are elements.
    SpanningTrees(Graph),
    /// Source-sink paths of a directed acyclic graph whose edges are elements.
    DagPaths { graph: Graph, source: usize, sink: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub set: ElemSet,
    pub cost: Rational,
}

/// Minimum-cost oracle over a fixed family.
///
/// Ties are broken towards the lexicographically smallest sorted index list.
pub trait Oracle: Sync {
    fn min_cost(&self, costs: &[Rational]) -> Result<OracleResult>;
}

pub fn set_cost(costs: &[Rational], set: &[usize]) -> Rational {
    set.iter().fold(Rational::zero(), |acc, &i| acc + &costs[i])
}

impl FamilyDescriptor {
    /// Structural checks against a ground set of `n` elements.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            FamilyDescriptor::Explicit(sets) => {
                if sets.is_empty() {
                    return Err(Error::NoFeasibleSolution);
                }
                let mut seen = std::collections::BTreeSet::new();
                for s in sets {
                    if s.iter().any(|&i| i >= n) {
                        return Err(Error::Invalid("family set outside ground set".into()));
                    }
                    if normalize(s.clone()) != *s {
                        return Err(Error::Invalid("family set not sorted or has repeats".into()));
                    }
                    if !seen.insert(s.clone()) {
                        return Err(Error::Invalid("duplicate family set".into()));
                    }
                }
                Ok(())
            }
            FamilyDescriptor::SpanningTrees(g) => {
                g.check_edges(n)?;
                if !g.is_connected() {
                    return Err(Error::NoFeasibleSolution);
                }
                Ok(())
            }
            FamilyDescriptor::DagPaths { graph, source, sink } => {
                graph.check_edges(n)?;
                let nv = graph.vertices.len();
                if *source >= nv || *sink >= nv {
                    return Err(Error::Invalid("source or sink not a vertex".into()));
                }
                if source == sink {
                    return Err(Error::Invalid("source equals sink".into()));
                }
                let order = graph
                    .topo_order()
                    .ok_or_else(|| Error::Invalid("graph has a directed cycle".into()))?;
                if !graph.reaches(&order, *source, *sink) {
                    return Err(Error::NoFeasibleSolution);
                }
                Ok(())
            }
        }
    }

    pub fn min_cost_member(&self, costs: &[Rational]) -> Result<OracleResult> {
        let set = match self {
            FamilyDescriptor::Explicit(sets) => {
                let mut best: Option<(Rational, &ElemSet)> = None;
                for s in sets {
                    let c = set_cost(costs, s);
                    let better = match &best {
                        None => true,
                        Some((bc, bs)) => c < *bc || (c == *bc && s < *bs),
                    };
                    if better {
                        best = Some((c, s));
                    }
                }
                best.ok_or(Error::NoFeasibleSolution)?.1.clone()
            }
            FamilyDescriptor::SpanningTrees(g) => g.min_spanning_tree(costs)?,
            FamilyDescriptor::DagPaths { graph, source, sink } => graph.min_path(costs, *source, *sink)?,
        };
        let cost = set_cost(costs, &set);
        Ok(OracleResult { set, cost })
    }

    /// All members in ascending lexicographic order.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<ElemSet>> {
        let mut out = match self {
            FamilyDescriptor::Explicit(sets) => {
                if sets.len() > cap {
                    return Err(Error::FamilyTooLarge(cap));
                }
                return Ok(sets.clone());
            }
            FamilyDescriptor::SpanningTrees(g) => g.all_spanning_trees(cap)?,
            FamilyDescriptor::DagPaths { graph, source, sink } => graph.all_paths(*source, *sink, cap)?,
        };
        out.sort();
        Ok(out)
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        match self {
            FamilyDescriptor::Explicit(sets) => sets.iter().any(|s| s.as_slice() == set),
            FamilyDescriptor::SpanningTrees(g) => g.is_spanning_tree(set),
            FamilyDescriptor::DagPaths { graph, source, sink } => graph.is_path(set, *source, *sink),
        }
    }
}

impl Oracle for FamilyDescriptor {
    fn min_cost(&self, costs: &[Rational]) -> Result<OracleResult> {
        self.min_cost_member(costs)
    }
}

/// Oracle wrapper that counts calls.
pub struct CountingOracle<'a> {
    inner: &'a dyn Oracle,
    calls: AtomicU64,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn Oracle) -> Self {
        CountingOracle {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl Oracle for CountingOracle<'_> {
    fn min_cost(&self, costs: &[Rational]) -> Result<OracleResult> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.min_cost(costs)
    }
}
