//! Exact rationals and their extension by ±∞.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{internal, Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-7/4"`, `"+2"` or a decimal such as `"1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_int(n).ok_or_else(bad)?;
        let d = parse_int(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        let whole = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(ip_digits).ok_or_else(bad)?
        };
        let frac_num = BigInt::from_str(fp).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rational::new(whole * &scale + frac_num, scale);
        return Ok(if neg { -mag } else { mag });
    }
    parse_int(t).map(Rational::from_integer).ok_or_else(bad)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational, or one of the two infinities.
///
/// The derived order puts `NegInf` below every finite value and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRational {
    pub fn finite(r: Rational) -> Self {
        ExtRational::Finite(r)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// The finite value, or an internal error naming `what`.
    pub fn expect_finite(&self, what: &str) -> Result<&Rational> {
        self.as_finite()
            .ok_or_else(|| internal(format!("{what} must be finite here")))
    }

    pub fn cmp_rat(&self, r: &Rational) -> Ordering {
        match self {
            ExtRational::NegInf => Ordering::Less,
            ExtRational::Finite(v) => v.cmp(r),
            ExtRational::PosInf => Ordering::Greater,
        }
    }

    /// `self <= r`
    pub fn le_rat(&self, r: &Rational) -> bool {
        self.cmp_rat(r) != Ordering::Greater
    }

    /// `self >= r`
    pub fn ge_rat(&self, r: &Rational) -> bool {
        self.cmp_rat(r) != Ordering::Less
    }

    pub fn add_rat(&self, r: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v + r),
            inf => inf.clone(),
        }
    }

    /// `self - other`; forming ∞ − ∞ is an error.
    pub fn sub(&self, other: &ExtRational) -> Result<ExtRational> {
        use ExtRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a - b)),
            (PosInf, NegInf) | (PosInf, Finite(_)) | (Finite(_), NegInf) => Ok(PosInf),
            (NegInf, PosInf) | (NegInf, Finite(_)) | (Finite(_), PosInf) => Ok(NegInf),
            _ => Err(internal("infinity minus infinity")),
        }
    }

    /// Multiplication by a strictly positive rational.
    pub fn scale(&self, k: &Rational) -> ExtRational {
        debug_assert!(k.is_positive());
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v * k),
            inf => inf.clone(),
        }
    }

    /// Division by a strictly positive rational.
    pub fn div_pos(&self, k: &Rational) -> ExtRational {
        debug_assert!(k.is_positive());
        match self {
            ExtRational::Finite(v) => ExtRational::Finite(v / k),
            inf => inf.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<ExtRational> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtRational::PosInf),
            "-inf" => Ok(ExtRational::NegInf),
            t => parse_rational(t).map(ExtRational::Finite),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::PosInf => f.write_str("inf"),
            ExtRational::Finite(r) => f.write_str(&fmt_rational(r)),
        }
    }
}

/// Clamps `v` into `[lo, hi]`. Requires `lo <= hi`.
pub fn clamp(v: Rational, lo: &ExtRational, hi: &ExtRational) -> Rational {
    if let ExtRational::Finite(l) = lo {
        if &v < l {
            return l.clone();
        }
    }
    if let ExtRational::Finite(h) = hi {
        if &v > h {
            return h.clone();
        }
    }
    v
}

/// Least common multiple of the denominators and gcd of the numerators of `xs`.
pub(crate) fn denom_lcm_numer_gcd(xs: &[Rational]) -> (BigInt, BigInt) {
    use num_integer::Integer;
    let mut l = BigInt::one();
    let mut g = BigInt::zero();
    for x in xs {
        l = l.lcm(x.denom());
        g = g.gcd(x.numer());
    }
    (l, g)
}
