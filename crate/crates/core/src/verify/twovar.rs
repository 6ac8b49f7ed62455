//! Minimising `δ` over half-planes in `(x, δ)` by eliminating `x`.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// `a·x + b·δ ≤ c`
#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct TwoVarLp {
    pub rows: Vec<HalfPlane>,
}

// x ≤ c − b·δ (or ≥, depending on the list it sits in)
struct XBound {
    c: Rational,
    b: Rational,
}

impl XBound {
    fn at(&self, delta: &Rational) -> Rational {
        &self.c - &self.b * delta
    }
}

impl TwoVarLp {
    pub fn push(&mut self, a: Rational, b: Rational, c: Rational) {
        self.rows.push(HalfPlane { a, b, c });
    }

    /// Smallest feasible `δ` and some `x` attaining it, or `None` if the region
    /// is empty or `δ` is unbounded below.
    pub fn minimise_delta(&self) -> Option<(Rational, Rational)> {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        let mut uppers = Vec::new();
        let mut lowers = Vec::new();
        let raise = |lo: &mut Option<Rational>, v: Rational| {
            if lo.as_ref().is_none_or(|l| v > *l) {
                *lo = Some(v);
            }
        };
        let lower_hi = |hi: &mut Option<Rational>, v: Rational| {
            if hi.as_ref().is_none_or(|h| v < *h) {
                *hi = Some(v);
            }
        };
        for r in &self.rows {
            if r.a.is_zero() {
                if r.b.is_zero() {
                    if r.c.is_negative() {
                        return None;
                    }
                } else if r.b.is_positive() {
                    lower_hi(&mut hi, &r.c / &r.b);
                } else {
                    raise(&mut lo, &r.c / &r.b);
                }
            } else {
                let xb = XBound {
                    c: &r.c / &r.a,
                    b: &r.b / &r.a,
                };
                if r.a.is_positive() {
                    uppers.push(xb);
                } else {
                    lowers.push(xb);
                }
            }
        }
        for l in &lowers {
            for u in &uppers {
                // l.c − l.b·δ ≤ u.c − u.b·δ  ⇔  (u.b − l.b)·δ ≤ u.c − l.c
                let coef = &u.b - &l.b;
                let rhs = &u.c - &l.c;
                if coef.is_zero() {
                    if rhs.is_negative() {
                        return None;
                    }
                } else if coef.is_positive() {
                    lower_hi(&mut hi, rhs / coef);
                } else {
                    raise(&mut lo, rhs / coef);
                }
            }
        }
        let delta = lo?;
        if hi.as_ref().is_some_and(|h| *h < delta) {
            return None;
        }
        let x_lo = lowers.iter().map(|l| l.at(&delta)).max();
        let x_hi = uppers.iter().map(|u| u.at(&delta)).min();
        let x = match (x_lo, x_hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => Rational::zero(),
        };
        Some((delta, x))
    }
}
