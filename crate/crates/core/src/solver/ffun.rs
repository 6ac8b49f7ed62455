//! The twelve update functions. Each returns a "degenerate pair" error when its
//! denominator would vanish, so a caller never divides by zero silently.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::set_cost;
use crate::rational::Rational;
use crate::reduce::SpecLu;
use crate::sets::{difference, is_subset};

/// Evaluates the update functions against one subproblem.
pub struct FEval<'a> {
    pub sub: &'a SpecLu,
    mu_star: Rational,
    star_free: Vec<usize>,
}

impl<'a> FEval<'a> {
    pub fn new(sub: &'a SpecLu) -> Self {
        let star_free = sub.fstar.iter().copied().filter(|&s| !sub.s0[s]).collect();
        FEval {
            mu_star: sub.mu(&sub.fstar),
            sub,
            star_free,
        }
    }

    pub fn mu_star(&self) -> &Rational {
        &self.mu_star
    }

    pub fn mu(&self, f: &[usize]) -> Rational {
        self.sub.mu(f)
    }

    fn free(&self, f: &[usize]) -> Vec<usize> {
        f.iter().copied().filter(|&s| !self.sub.s0[s]).collect()
    }

    /// F ∖ S0 ⊄ F* ∖ S0
    pub fn sticks_out(&self, f: &[usize]) -> bool {
        !is_subset(&self.free(f), &self.star_free)
    }

    /// F* ∖ S0 ⊄ F ∖ S0
    pub fn misses_star(&self, f: &[usize]) -> bool {
        !is_subset(&self.star_free, &self.free(f))
    }

    pub fn same_projection(&self, f: &[usize]) -> bool {
        self.free(f) == self.star_free
    }

    /// c(F*) − c(F)
    pub fn gap(&self, c: &[Rational], f: &[usize]) -> Rational {
        set_cost(c, &self.sub.fstar) - set_cost(c, f)
    }

    fn star_minus(&self, f: &[usize]) -> Rational {
        self.mu(&difference(&self.sub.fstar, f))
    }

    fn minus_star(&self, f: &[usize]) -> Rational {
        self.mu(&difference(f, &self.sub.fstar))
    }

    fn size_diff(&self, f: &[usize]) -> Rational {
        &self.mu_star - self.mu(f)
    }

    fn u_in(&self) -> Result<&Rational> {
        self.sub.u_in.expect_finite("uin")
    }
    fn u_out(&self) -> Result<&Rational> {
        self.sub.u_out.expect_finite("uout")
    }
    fn l_in(&self) -> Result<&Rational> {
        self.sub.l_in.expect_finite("lin")
    }
    fn l_out(&self) -> Result<&Rational> {
        self.sub.l_out.expect_finite("lout")
    }

    fn nonzero(v: Rational, what: &'static str) -> Result<Rational> {
        if v.is_zero() {
            Err(Error::DegeneratePair(what))
        } else {
            Ok(v)
        }
    }

    pub fn f1(&self, c: &[Rational], f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.star_minus(f), "f1: F* \\ F'' has measure zero")?;
        Ok(self.gap(c, f) / den)
    }

    pub fn f2(&self, c: &[Rational], d: &Rational, big_d: &Rational, f: &[usize]) -> Result<Rational> {
        Ok(self.u_in()? - d - big_d - self.f1(c, f)?)
    }

    pub fn f3(&self, c: &[Rational], f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.size_diff(f), "f3: equal measure")?;
        Ok(self.gap(c, f) / den)
    }

    pub fn f4(&self, c: &[Rational], d: &Rational, big_d: &Rational, f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.minus_star(f), "f4: F' \\ F* has measure zero")?;
        let slack = self.u_in()? - d - big_d;
        Ok((-self.gap(c, f) + slack * self.star_minus(f)) / den)
    }

    pub fn f5(&self, c: &[Rational], d: &Rational, big_d: &Rational, f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.minus_star(f), "f5: F' \\ F* has measure zero")?;
        let slack = self.u_in()? - d - big_d;
        Ok((self.gap(c, f) - slack * self.size_diff(f)) / den)
    }

    pub fn f6(&self, c: &[Rational], big_d: &Rational, f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.star_minus(f), "f6: F* \\ F' has measure zero")?;
        let slack = self.u_out()? - big_d;
        Ok((self.gap(c, f) - slack * self.size_diff(f)) / den)
    }

    /// Mixed form: the small set `fs` is priced by `cs`, the large set `fl` by `cl`.
    pub fn f7(&self, cs: &[Rational], fs: &[usize], cl: &[Rational], fl: &[usize]) -> Result<Rational> {
        let ds = Self::nonzero(self.size_diff(fs), "f7: small set has equal measure")?;
        let dl = Self::nonzero(self.size_diff(fl), "f7: large set has equal measure")?;
        let num = self.gap(cs, fs) / &ds - self.gap(cl, fl) / &dl;
        let den = self.star_minus(fs) / &ds - self.star_minus(fl) / &dl;
        let den = Self::nonzero(den, "f7: zero denominator")?;
        Ok(num / den)
    }

    pub fn f8(&self, cs: &[Rational], fs: &[usize], cl: &[Rational], fl: &[usize]) -> Result<Rational> {
        let f7 = self.f7(cs, fs, cl, fl)?;
        let den = Self::nonzero(self.size_diff(fs), "f8: equal measure")?;
        Ok((self.gap(cs, fs) - f7 * self.star_minus(fs)) / den)
    }

    pub fn f9(&self, c: &[Rational], big_d: &Rational, f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.star_minus(f), "f9: F* \\ F''' has measure zero")?;
        let slack = self.l_out()? - big_d;
        Ok((self.gap(c, f) - slack * self.size_diff(f)) / den)
    }

    pub fn f10(&self, c: &[Rational], d: &Rational, big_d: &Rational, f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.minus_star(f), "f10: F''' \\ F* has measure zero")?;
        let slack = self.l_in()? - d - big_d;
        Ok((-self.gap(c, f) + slack * self.star_minus(f)) / den)
    }

    pub fn f11(&self, c: &[Rational], d: &Rational, big_d: &Rational, f: &[usize]) -> Result<Rational> {
        let den = Self::nonzero(self.minus_star(f), "f11: F''' \\ F* has measure zero")?;
        let slack = self.l_in()? - d - big_d;
        Ok((self.gap(c, f) - slack * self.size_diff(f)) / den)
    }

    pub fn f12(&self, cs: &[Rational], fs: &[usize], cl: &[Rational], fl: &[usize]) -> Result<Rational> {
        let f7 = self.f7(cs, fs, cl, fl)?;
        let den = Self::nonzero(self.size_diff(fl), "f12: equal measure")?;
        Ok((self.gap(cl, fl) - f7 * self.star_minus(fl)) / den)
    }
}

/// Arguments for [`eval_f`]. `f` is the primary set; `g` and `c2` are the
/// large set and its costs for the paired functions 7, 8 and 12.
pub struct FArgs<'a> {
    pub c: &'a [Rational],
    pub d: &'a Rational,
    pub big_d: &'a Rational,
    pub f: &'a [usize],
    pub g: Option<&'a [usize]>,
    pub c2: Option<&'a [Rational]>,
}

pub fn eval_f(k: u8, sub: &SpecLu, a: &FArgs<'_>) -> Result<Rational> {
    let ev = FEval::new(sub);
    let pair = || -> Result<(&[usize], &[Rational])> {
        let g = a.g.ok_or(Error::DegeneratePair("paired function needs a large set"))?;
        Ok((g, a.c2.unwrap_or(a.c)))
    };
    match k {
        1 => ev.f1(a.c, a.f),
        2 => ev.f2(a.c, a.d, a.big_d, a.f),
        3 => ev.f3(a.c, a.f),
        4 => ev.f4(a.c, a.d, a.big_d, a.f),
        5 => ev.f5(a.c, a.d, a.big_d, a.f),
        6 => ev.f6(a.c, a.big_d, a.f),
        7 => {
            let (g, c2) = pair()?;
            ev.f7(a.c, a.f, c2, g)
        }
        8 => {
            let (g, c2) = pair()?;
            ev.f8(a.c, a.f, c2, g)
        }
        9 => ev.f9(a.c, a.big_d, a.f),
        10 => ev.f10(a.c, a.d, a.big_d, a.f),
        11 => ev.f11(a.c, a.d, a.big_d, a.f),
        12 => {
            let (g, c2) = pair()?;
            ev.f12(a.c, a.f, c2, g)
        }
        _ => Err(Error::Invalid(format!("no update function f{k}"))),
    }
}
