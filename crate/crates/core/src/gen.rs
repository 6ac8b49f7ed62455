//! Seeded random instances for fuzzing and the `gen` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{FamilyDescriptor, Graph, Oracle};
use crate::model::Instance;
use crate::rational::{frac, rat, ExtRational, Rational};
use crate::reduce::SpecLu;
use crate::sets::{normalize, ElemSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStyle {
    Unbounded,
    /// Independent random bounds per element, some sides infinite.
    Box,
    /// A frozen set plus uniform scaled bounds on F* and off F*.
    SpecLuLike,
}

impl std::str::FromStr for BoundStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unbounded" => Ok(BoundStyle::Unbounded),
            "box" => Ok(BoundStyle::Box),
            "speclu-like" | "speclu" => Ok(BoundStyle::SpecLuLike),
            _ => Err(Error::Invalid(format!("unknown bound style {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyStyle {
    Explicit,
    SpanningTrees,
    DagPaths,
}

impl std::str::FromStr for FamilyStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(FamilyStyle::Explicit),
            "spanning-trees" | "mst" => Ok(FamilyStyle::SpanningTrees),
            "dag-paths" | "dag" => Ok(FamilyStyle::DagPaths),
            _ => Err(Error::Invalid(format!("unknown family style {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub seed: u64,
    /// Ground set size (number of edges for graph families).
    pub n: usize,
    /// Number of members, explicit families only.
    pub family_size: usize,
    /// Each `1/w(s)` is drawn from this list.
    pub weight_denoms: Vec<u64>,
    pub bound_style: BoundStyle,
    pub family_style: FamilyStyle,
    /// Number of cost vectors.
    pub k: usize,
    /// Costs are integers in `[-cost_max, cost_max]`.
    pub cost_max: i64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            seed: 0,
            n: 5,
            family_size: 6,
            weight_denoms: vec![1],
            bound_style: BoundStyle::Unbounded,
            family_style: FamilyStyle::Explicit,
            k: 1,
            cost_max: 4,
        }
    }
}

fn check(opts: &GenOptions) -> Result<()> {
    if opts.n < 2 {
        return Err(Error::Invalid("gen needs n ≥ 2".into()));
    }
    if opts.k == 0 {
        return Err(Error::Invalid("gen needs at least one cost vector".into()));
    }
    if opts.weight_denoms.is_empty() || opts.weight_denoms.contains(&0) {
        return Err(Error::Invalid("weight denominators must be positive".into()));
    }
    if opts.family_style == FamilyStyle::Explicit && opts.family_size == 0 {
        return Err(Error::Invalid("family size must be positive".into()));
    }
    Ok(())
}

/// Random instance; the same options always give the same instance.
pub fn generate(opts: &GenOptions) -> Result<Instance> {
    Ok(generate_with_box(opts)?.0)
}

/// Like [`generate`] with the speclu-like style, also returning the box.
pub fn generate_speclu(opts: &GenOptions) -> Result<(Instance, SpecLu)> {
    let opts = GenOptions {
        bound_style: BoundStyle::SpecLuLike,
        ..opts.clone()
    };
    let (inst, sub) = generate_with_box(&opts)?;
    Ok((inst, sub.expect("speclu-like style builds a box")))
}

fn generate_with_box(opts: &GenOptions) -> Result<(Instance, Option<SpecLu>)> {
    check(opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = opts.n;
    let prefix = if opts.family_style == FamilyStyle::Explicit {
        "s"
    } else {
        "e"
    };
    let ids: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    let weights: Vec<Rational> = (0..n)
        .map(|_| frac(1, *opts.weight_denoms.choose(&mut rng).unwrap() as i64))
        .collect();
    let costs: Vec<Vec<Rational>> = (0..opts.k)
        .map(|_| {
            (0..n)
                .map(|_| rat(rng.gen_range(-opts.cost_max..=opts.cost_max)))
                .collect()
        })
        .collect();
    let (family, fstar) = match opts.family_style {
        FamilyStyle::Explicit => explicit_family(&mut rng, n, opts.family_size),
        FamilyStyle::SpanningTrees => graph_family(&mut rng, n, false)?,
        FamilyStyle::DagPaths => graph_family(&mut rng, n, true)?,
    };
    let mut inst = Instance {
        ids,
        family,
        fstar,
        costs,
        weights,
        lower: vec![ExtRational::NegInf; n],
        upper: vec![ExtRational::PosInf; n],
    };
    let mut sub = None;
    match opts.bound_style {
        BoundStyle::Unbounded => {}
        BoundStyle::Box => {
            for s in 0..n {
                let mut lo = bound_value(&mut rng, ExtRational::NegInf);
                let mut hi = bound_value(&mut rng, ExtRational::PosInf);
                if let (Some(a), Some(b)) = (lo.as_finite(), hi.as_finite()) {
                    if a > b {
                        (lo, hi) = (ExtRational::finite(b.clone()), ExtRational::finite(a.clone()));
                    }
                }
                inst.lower[s] = lo;
                inst.upper[s] = hi;
            }
        }
        BoundStyle::SpecLuLike => {
            let s0: ElemSet = (0..n).filter(|_| rng.gen_ratio(1, 6)).collect();
            let (l_in, u_in, l_out, u_out) = speclu_box(&mut rng);
            let built = SpecLu::direct(
                inst.fstar.clone(),
                s0,
                inst.weights.clone(),
                inst.costs.clone(),
                l_in,
                u_in,
                l_out,
                u_out,
            )?;
            inst.lower = built.base_lower.clone();
            inst.upper = built.base_upper.clone();
            sub = Some(built);
        }
    }
    inst.validate()?;
    Ok((inst, sub))
}

// A half-integer in [-3, 3], or `inf` with probability 1/4.
fn bound_value(rng: &mut ChaCha8Rng, inf: ExtRational) -> ExtRational {
    if rng.gen_ratio(1, 4) {
        inf
    } else {
        ExtRational::finite(frac(rng.gen_range(-6..=6), 2))
    }
}

// ℓout ≤ ℓin ≤ uin, ℓout ≤ uout ≤ uin.
fn speclu_box(rng: &mut ChaCha8Rng) -> (ExtRational, ExtRational, ExtRational, ExtRational) {
    use ExtRational::*;
    let r = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| rat(rng.gen_range(lo..=hi));
    let l_out = if rng.gen_ratio(1, 3) {
        NegInf
    } else {
        Finite(r(rng, -4, 0))
    };
    let l_in = match &l_out {
        NegInf if rng.gen_bool(0.5) => NegInf,
        NegInf => Finite(r(rng, -4, 0)),
        l => l.add_rat(&r(rng, 0, 3)),
    };
    let u_out = if rng.gen_ratio(1, 3) {
        PosInf
    } else {
        let v = Finite(r(rng, -2, 3));
        if v < l_out {
            l_out.clone()
        } else {
            v
        }
    };
    let u_in = match &u_out {
        PosInf => PosInf,
        _ if rng.gen_ratio(1, 3) => PosInf,
        u => {
            let base = if l_in > *u { l_in.clone() } else { u.clone() };
            base.add_rat(&r(rng, 0, 2))
        }
    };
    (l_in, u_in, l_out, u_out)
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> ElemSet {
    loop {
        let s: ElemSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn explicit_family(rng: &mut ChaCha8Rng, n: usize, size: usize) -> (FamilyDescriptor, ElemSet) {
    let fstar = random_subset(rng, n);
    let mut sets = vec![fstar.clone()];
    let mut attempts = 0;
    while sets.len() < size && attempts < 64 * size {
        attempts += 1;
        let s = random_subset(rng, n);
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    sets.shuffle(rng);
    (FamilyDescriptor::Explicit(sets), fstar)
}

// Edges are the elements. F* is the optimum under random integer costs.
fn graph_family(rng: &mut ChaCha8Rng, n: usize, dag: bool) -> Result<(FamilyDescriptor, ElemSet)> {
    let nv = (n / 2 + 2).clamp(2, n + 1);
    let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(n);
    if dag {
        // The chain v1 → v2 → … guarantees a source-sink path.
        for v in 1..nv {
            edges.push(Some((v - 1, v)));
        }
        while edges.len() < n {
            let a = rng.gen_range(0..nv - 1);
            let b = rng.gen_range(a + 1..nv);
            edges.push(Some((a, b)));
        }
    } else {
        let mut order: Vec<usize> = (0..nv).collect();
        order.shuffle(rng);
        for i in 1..nv {
            let j = rng.gen_range(0..i);
            edges.push(Some((order[j], order[i])));
        }
        while edges.len() < n {
            let a = rng.gen_range(0..nv);
            let mut b = rng.gen_range(0..nv - 1);
            if b >= a {
                b += 1;
            }
            edges.push(Some((a, b)));
        }
    }
    edges.shuffle(rng);
    let graph = Graph { vertices, edges };
    let family = if dag {
        FamilyDescriptor::DagPaths {
            graph,
            source: 0,
            sink: nv - 1,
        }
    } else {
        FamilyDescriptor::SpanningTrees(graph)
    };
    let c: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..=9))).collect();
    let fstar = normalize(family.min_cost(&c)?.set);
    Ok((family, fstar))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let opts = GenOptions {
            seed: 1,
            n: 4,
            ..GenOptions::default()
        };
        assert_eq!(generate(&opts).unwrap(), generate(&opts).unwrap());
        let other = GenOptions {
            seed: 2,
            ..opts.clone()
        };
        assert_ne!(generate(&opts).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn fstar_is_a_member() {
        for style in [FamilyStyle::Explicit, FamilyStyle::SpanningTrees, FamilyStyle::DagPaths] {
            for seed in 0..20 {
                let opts = GenOptions {
                    seed,
                    n: 6,
                    family_style: style,
                    bound_style: BoundStyle::Box,
                    ..GenOptions::default()
                };
                let inst = generate(&opts).unwrap();
                assert!(inst.family.contains(&inst.fstar), "{style:?} seed {seed}");
            }
        }
    }

    #[test]
    fn unbounded_style_has_no_bounds() {
        let inst = generate(&GenOptions::default()).unwrap();
        assert!(inst.lower.iter().all(|b| *b == ExtRational::NegInf));
        assert!(inst.upper.iter().all(|b| *b == ExtRational::PosInf));
    }

    #[test]
    fn speclu_box_is_ordered() {
        for seed in 0..50 {
            let (_, sub) = generate_speclu(&GenOptions {
                seed,
                weight_denoms: vec![1, 2, 3],
                ..GenOptions::default()
            })
            .unwrap();
            sub.check_box().unwrap();
        }
    }

    #[test]
    fn rejects_tiny_ground_set() {
        assert!(generate(&GenOptions {
            n: 1,
            ..GenOptions::default()
        })
        .is_err());
    }
}
