use num_traits::Zero;

use super::set_cost;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sets::ElemSet;

/// Graph whose edges are ground-set elements: `edges[e]` is the endpoint pair of
/// element `e`, or `None` if that element is not an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub edges: Vec<Option<(usize, usize)>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

impl Graph {
    pub(crate) fn check_edges(&self, n: usize) -> Result<()> {
        if self.edges.len() != n {
            return Err(Error::Invalid("edge table does not match ground set".into()));
        }
        let nv = self.vertices.len();
        for &(u, v) in self.edges.iter().flatten() {
            if u >= nv || v >= nv {
                return Err(Error::Invalid("edge endpoint is not a vertex".into()));
            }
        }
        Ok(())
    }

    fn edge_list(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, x)| x.map(|(u, v)| (e, u, v)))
    }

    pub(crate) fn is_connected(&self) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return false;
        }
        let mut uf = UnionFind::new(nv);
        let mut comps = nv;
        for (_, u, v) in self.edge_list() {
            if uf.union(u, v) {
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Kruskal over (cost, index) order. On a matroid this yields the
    /// lexicographically smallest index list among all minimum-cost bases.
    pub(crate) fn min_spanning_tree(&self, costs: &[Rational]) -> Result<ElemSet> {
        let mut order: Vec<(usize, usize, usize)> = self.edge_list().filter(|&(_, u, v)| u != v).collect();
        order.sort_by(|a, b| costs[a.0].cmp(&costs[b.0]).then(a.0.cmp(&b.0)));
        let nv = self.vertices.len();
        let mut uf = UnionFind::new(nv);
        let mut tree = Vec::with_capacity(nv.saturating_sub(1));
        for (e, u, v) in order {
            if uf.union(u, v) {
                tree.push(e);
            }
        }
        if nv == 0 || tree.len() + 1 != nv {
            return Err(Error::NoFeasibleSolution);
        }
        tree.sort_unstable();
        Ok(tree)
    }

    pub(crate) fn is_spanning_tree(&self, set: &[usize]) -> bool {
        let nv = self.vertices.len();
        if nv == 0 || set.len() + 1 != nv {
            return false;
        }
        let mut uf = UnionFind::new(nv);
        set.iter().all(|&e| match self.edges.get(e).copied().flatten() {
            Some((u, v)) => uf.union(u, v),
            None => false,
        })
    }

    pub(crate) fn all_spanning_trees(&self, cap: usize) -> Result<Vec<ElemSet>> {
        let nv = self.vertices.len();
        let edges: Vec<(usize, usize, usize)> = self.edge_list().filter(|&(_, u, v)| u != v).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        let comp: Vec<usize> = (0..nv).collect();
        fn rec(
            edges: &[(usize, usize, usize)],
            i: usize,
            need: usize,
            comp: &[usize],
            chosen: &mut Vec<usize>,
            out: &mut Vec<ElemSet>,
            cap: usize,
        ) -> Result<()> {
            if need == 0 {
                if out.len() >= cap {
                    return Err(Error::FamilyTooLarge(cap));
                }
                out.push(chosen.clone());
                return Ok(());
            }
            if edges.len() - i < need {
                return Ok(());
            }
            let (e, u, v) = edges[i];
            let (cu, cv) = (comp[u], comp[v]);
            if cu != cv {
                let merged: Vec<usize> = comp.iter().map(|&c| if c == cu { cv } else { c }).collect();
                chosen.push(e);
                rec(edges, i + 1, need - 1, &merged, chosen, out, cap)?;
                chosen.pop();
            }
            rec(edges, i + 1, need, comp, chosen, out, cap)
        }
        if nv == 0 {
            return Err(Error::NoFeasibleSolution);
        }
        rec(&edges, 0, nv - 1, &comp, &mut chosen, &mut out, cap)?;
        Ok(out)
    }

    /// Kahn's algorithm; `None` if there is a directed cycle.
    pub(crate) fn topo_order(&self) -> Option<Vec<usize>> {
        let nv = self.vertices.len();
        let mut indeg = vec![0usize; nv];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (_, u, v) in self.edge_list() {
            indeg[v] += 1;
            out[u].push(v);
        }
        let mut queue: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        queue.reverse();
        let mut order = Vec::with_capacity(nv);
        while let Some(v) = queue.pop() {
            order.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        (order.len() == nv).then_some(order)
    }

    pub(crate) fn reaches(&self, order: &[usize], from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        seen[from] = true;
        for &v in order {
            if !seen[v] {
                continue;
            }
            for (_, a, b) in self.edge_list() {
                if a == v {
                    seen[b] = true;
                }
            }
        }
        seen[to]
    }

    /// Cheapest path from `from` to `to` over edges accepted by `allowed`.
    fn segment_min(
        &self,
        order: &[usize],
        costs: &[Rational],
        allowed: &dyn Fn(usize) -> bool,
        from: usize,
        to: usize,
    ) -> Option<Rational> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.vertices.len()];
        dist[from] = Some(Rational::zero());
        for &v in order {
            let Some(dv) = dist[v].clone() else { continue };
            for (e, a, b) in self.edge_list() {
                if a != v || !allowed(e) {
                    continue;
                }
                let cand = &dv + &costs[e];
                if dist[b].as_ref().is_none_or(|db| &cand < db) {
                    dist[b] = Some(cand);
                }
            }
        }
        dist[to].take()
    }

    /// Cheapest source-sink path using only `allowed` edges plus every edge of `must`.
    fn constrained_min(
        &self,
        order: &[usize],
        costs: &[Rational],
        allowed: &dyn Fn(usize) -> bool,
        must: &[usize],
        source: usize,
        sink: usize,
    ) -> Option<Rational> {
        let pos = positions(order);
        let mut must: Vec<(usize, usize, usize)> = must
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e].expect("must edge exists");
                (e, u, v)
            })
            .collect();
        must.sort_by_key(|&(_, u, _)| pos[u]);
        let free = |e: usize| allowed(e) && !must.iter().any(|m| m.0 == e);
        let mut total = Rational::zero();
        let mut at = source;
        for &(e, u, v) in &must {
            total += self.segment_min(order, costs, &free, at, u)?;
            total += &costs[e];
            at = v;
        }
        total += self.segment_min(order, costs, &free, at, sink)?;
        Some(total)
    }

    pub(crate) fn is_path(&self, set: &[usize], source: usize, sink: usize) -> bool {
        let Some(order) = self.topo_order() else {
            return false;
        };
        let pos = positions(&order);
        let mut arcs = Vec::with_capacity(set.len());
        for &e in set {
            match self.edges.get(e).copied().flatten() {
                Some(uv) => arcs.push(uv),
                None => return false,
            }
        }
        arcs.sort_by_key(|&(u, _)| pos[u]);
        let mut at = source;
        for (u, v) in arcs {
            if u != at {
                return false;
            }
            at = v;
        }
        at == sink && !set.is_empty()
    }

    /// Minimum-cost path, ties broken towards the lexicographically smallest
    /// sorted edge list. Edges are fixed greedily by index: at each round the
    /// smallest admissible next index is kept if some optimal path still uses it.
    pub(crate) fn min_path(&self, costs: &[Rational], source: usize, sink: usize) -> Result<ElemSet> {
        let order = self
            .topo_order()
            .ok_or_else(|| Error::Invalid("graph has a directed cycle".into()))?;
        let opt = self
            .constrained_min(&order, costs, &|_| true, &[], source, sink)
            .ok_or(Error::NoFeasibleSolution)?;
        let m = self.edges.len();
        let mut chosen: Vec<usize> = Vec::new();
        let mut floor = 0usize;
        loop {
            if !chosen.is_empty() && self.is_path(&chosen, source, sink) && set_cost(costs, &chosen) == opt {
                return Ok(chosen);
            }
            let mut next = None;
            for e in floor..m {
                if self.edges[e].is_none() {
                    continue;
                }
                let mut must = chosen.clone();
                must.push(e);
                let val = self.constrained_min(&order, costs, &|f| f > e, &must, source, sink);
                if val.as_ref() == Some(&opt) {
                    next = Some(e);
                    break;
                }
            }
            let e = next.ok_or_else(|| crate::error::internal("path tie-break lost the optimum"))?;
            chosen.push(e);
            floor = e + 1;
        }
    }

    pub(crate) fn all_paths(&self, source: usize, sink: usize, cap: usize) -> Result<Vec<ElemSet>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn dfs(
            g: &Graph,
            at: usize,
            sink: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<ElemSet>,
            cap: usize,
        ) -> Result<()> {
            if at == sink {
                if out.len() >= cap {
                    return Err(Error::FamilyTooLarge(cap));
                }
                let mut p = stack.clone();
                p.sort_unstable();
                out.push(p);
                return Ok(());
            }
            for (e, a, b) in g.edge_list() {
                if a == at {
                    stack.push(e);
                    dfs(g, b, sink, stack, out, cap)?;
                    stack.pop();
                }
            }
            Ok(())
        }
        dfs(self, source, sink, &mut stack, &mut out, cap)?;
        Ok(out)
    }
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}
