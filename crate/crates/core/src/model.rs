//! Instances, deviation vectors, the weighted span and the μ measure.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{set_cost, FamilyDescriptor, Oracle};
use crate::rational::{clamp, denom_lcm_numer_gcd, ExtRational, Rational};
use crate::sets::{difference, mask, normalize, ElemSet};

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub ids: Vec<String>,
    pub family: FamilyDescriptor,
    pub fstar: ElemSet,
    /// One cost vector per cost function, indexed by element.
    pub costs: Vec<Vec<Rational>>,
    pub weights: Vec<Rational>,
    pub lower: Vec<ExtRational>,
    pub upper: Vec<ExtRational>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn k(&self) -> usize {
        self.costs.len()
    }

    pub fn fstar_mask(&self) -> Vec<bool> {
        mask(&self.fstar, self.n())
    }

    pub fn inv_weights(&self) -> Vec<Rational> {
        self.weights.iter().map(|w| w.recip()).collect()
    }

    pub fn is_unconstrained(&self) -> bool {
        self.lower.iter().all(|l| *l == ExtRational::NegInf) && self.upper.iter().all(|u| *u == ExtRational::PosInf)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        if self.costs.is_empty() {
            return Err(Error::Invalid("at least one cost vector is required".into()));
        }
        if self.costs.iter().any(|c| c.len() != n)
            || self.weights.len() != n
            || self.lower.len() != n
            || self.upper.len() != n
        {
            return Err(Error::Invalid("vector length differs from ground set size".into()));
        }
        for s in 0..n {
            if !self.weights[s].is_positive() {
                return Err(Error::Invalid(format!("weight of {} is not positive", self.ids[s])));
            }
            if self.lower[s] == ExtRational::PosInf || self.upper[s] == ExtRational::NegInf {
                return Err(Error::Invalid(format!(
                    "bound of {} is the wrong infinity",
                    self.ids[s]
                )));
            }
            if self.lower[s] > self.upper[s] {
                return Err(Error::Invalid(format!(
                    "lower bound exceeds upper bound for {}",
                    self.ids[s]
                )));
            }
        }
        if normalize(self.fstar.clone()) != self.fstar || self.fstar.iter().any(|&i| i >= n) {
            return Err(Error::Invalid(
                "input solution is not a sorted subset of the ground set".into(),
            ));
        }
        self.family.validate(n)?;
        if !self.family.contains(&self.fstar) {
            return Err(Error::Invalid("input solution is not a member of the family".into()));
        }
        Ok(())
    }

    /// Factor `λ` such that every `1/(λ·w(s))` is a positive integer and the
    /// integers are coprime.
    pub fn weight_scale(&self) -> Rational {
        let inv = self.inv_weights();
        let (l, g) = denom_lcm_numer_gcd(&inv);
        // 1/(λw) = (l/g)·(1/w)
        Rational::new(g, l)
    }

    /// Copy with weights multiplied by [`Instance::weight_scale`].
    pub fn rescaled(&self) -> (Instance, Rational) {
        let lambda = self.weight_scale();
        let mut out = self.clone();
        for w in &mut out.weights {
            *w *= &lambda;
        }
        (out, lambda)
    }

    /// ‖w‖₋₁ under canonical rescaling.
    pub fn inv_weight_norm(&self) -> Rational {
        let (r, _) = self.rescaled();
        r.inv_weights().iter().fold(Rational::zero(), |a, x| a + x)
    }

    /// Special-form deviation clamped to this instance's bounds.
    pub fn deviation(&self, delta: &Rational, big_delta: &Rational) -> DeviationVector {
        build_deviation(
            delta,
            big_delta,
            &self.fstar_mask(),
            &self.weights,
            &self.lower,
            &self.upper,
        )
    }

    pub fn within_bounds(&self, p: &[Rational]) -> bool {
        p.iter()
            .enumerate()
            .all(|(s, v)| self.lower[s].le_rat(v) && self.upper[s].ge_rat(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationVector {
    pub values: Vec<Rational>,
    /// `(δ, Δ)` when the vector was built from the special form.
    pub special_form: Option<(Rational, Rational)>,
}

impl DeviationVector {
    pub fn zero(n: usize) -> Self {
        DeviationVector {
            values: vec![Rational::zero(); n],
            special_form: None,
        }
    }

    pub fn span(&self, w: &[Rational]) -> Result<Rational> {
        weighted_span(&self.values, w)
    }
}

pub fn weighted_span(p: &[Rational], w: &[Rational]) -> Result<Rational> {
    let mut it = p.iter().zip(w).map(|(a, b)| a * b);
    let first = it.next().ok_or(Error::EmptyInstance)?;
    let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), x| {
        if x < lo {
            (x, hi)
        } else if x > hi {
            (lo, x)
        } else {
            (lo, hi)
        }
    });
    Ok(hi - lo)
}

/// μ(X) = (1/w)(X ∖ S0).
pub fn mu(x: &[usize], s0: &[bool], inv_w: &[Rational]) -> Rational {
    x.iter()
        .filter(|&&s| !s0[s])
        .fold(Rational::zero(), |acc, &s| acc + &inv_w[s])
}

/// p(s) = clamp((δ+Δ)/w(s)) on F*, clamp(Δ/w(s)) elsewhere.
pub fn build_deviation(
    delta: &Rational,
    big_delta: &Rational,
    in_fstar: &[bool],
    w: &[Rational],
    lower: &[ExtRational],
    upper: &[ExtRational],
) -> DeviationVector {
    let sum = delta + big_delta;
    let values = (0..w.len())
        .map(|s| {
            let base = if in_fstar[s] { &sum } else { big_delta };
            clamp(base / &w[s], &lower[s], &upper[s])
        })
        .collect();
    DeviationVector {
        values,
        special_form: Some((delta.clone(), big_delta.clone())),
    }
}

/// (c−p)(F*) − (c−p)(F); F* beats F iff this is ≤ 0.
pub fn cost_gap(c: &[Rational], p: &[Rational], fstar: &[usize], f: &[usize]) -> Rational {
    let only_star = difference(fstar, f);
    let only_f = difference(f, fstar);
    let side = |set: &[usize]| set.iter().fold(Rational::zero(), |acc, &s| acc + &c[s] - &p[s]);
    side(&only_star) - side(&only_f)
}

pub fn modified_costs(c: &[Rational], p: &[Rational]) -> Vec<Rational> {
    c.iter().zip(p).map(|(a, b)| a - b).collect()
}

/// Bounds hold and F* is optimal under every `cʲ − p`.
pub fn is_feasible_deviation(inst: &Instance, p: &[Rational], oracle: &dyn Oracle) -> Result<bool> {
    if p.len() != inst.n() || !inst.within_bounds(p) {
        return Ok(false);
    }
    for c in &inst.costs {
        let cp = modified_costs(c, p);
        let best = oracle.min_cost(&cp)?;
        if set_cost(&cp, &inst.fstar) > best.cost {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    #[test]
    fn span_examples() {
        assert_eq!(weighted_span(&vec![rat(0); 3], &vec![rat(1); 3]).unwrap(), rat(0));
        assert_eq!(
            weighted_span(&[frac(1, 2), rat(-1)], &[rat(2), rat(1)]).unwrap(),
            rat(2)
        );
        assert_eq!(weighted_span(&[], &[]), Err(Error::EmptyInstance));
    }

    #[test]
    fn mu_examples() {
        let inv = vec![rat(2), rat(3)];
        assert_eq!(mu(&[], &[false, false], &inv), rat(0));
        assert_eq!(mu(&[0, 1], &[false, true], &inv), rat(2));
    }

    #[test]
    fn deviation_examples() {
        let w = vec![rat(1); 4];
        let inf = (vec![ExtRational::NegInf; 4], vec![ExtRational::PosInf; 4]);
        let p = build_deviation(&rat(1), &rat(0), &[true, true, false, false], &w, &inf.0, &inf.1);
        assert_eq!(p.values, vec![rat(1), rat(1), rat(0), rat(0)]);
        let z = vec![ExtRational::Finite(rat(0)); 4];
        let p = build_deviation(&rat(5), &rat(-5), &[true, true, false, false], &w, &z, &z);
        assert_eq!(p.values, vec![rat(0); 4]);
    }

    #[test]
    fn gap_example() {
        let c = vec![rat(1), rat(1), rat(0), rat(0)];
        assert_eq!(cost_gap(&c, &vec![rat(0); 4], &[0, 1], &[2, 3]), rat(2));
        assert_eq!(cost_gap(&c, &vec![rat(0); 4], &[0, 1], &[0, 1]), rat(0));
    }
}
