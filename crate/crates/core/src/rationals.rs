//! Exact slope arithmetic and negative continued fractions.
//!
//! Every operation here is exact. Slopes carry arbitrary-precision
//! numerators and denominators so long sweeps never overflow.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced slope `p/q`, with `1/0` standing for the meridian-like slope at infinity.
///
/// The representation is canonical: `gcd(|p|, |q|) = 1` and either `q > 0`
/// or `(p, q) = (1, 0)`. Two slopes are equal exactly when they name the
/// same rational (or both are `1/0`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Reduces and canonicalizes `p/q`. Fails only for `0/0`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(Error::ZeroSlope);
        }
        if q.is_zero() {
            return Ok(Self::infinity());
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(Self { p, q })
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self { p: n.into(), q: BigInt::one() }
    }

    /// The slope `1/0`.
    pub fn infinity() -> Self {
        Self { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        // BigRational is already reduced with a positive denominator.
        Self { p: r.numer().clone(), q: r.denom().clone() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_one()
    }

    /// The rational value, or `None` for `1/0`.
    pub fn to_ratio(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new_raw(self.p.clone(), self.q.clone()))
        }
    }

    /// Smallest integer `>= p/q`. `None` for `1/0`.
    pub fn ceil(&self) -> Option<BigInt> {
        if self.is_infinity() {
            None
        } else {
            Some(self.p.div_ceil(&self.q))
        }
    }

    /// `self + n` for an integer `n`; `1/0` is fixed.
    pub fn add_integer(&self, n: &BigInt) -> Self {
        if self.is_infinity() {
            return self.clone();
        }
        Self { p: &self.p + n * &self.q, q: self.q.clone() }
    }

    pub fn is_positive(&self) -> bool {
        !self.is_infinity() && self.p.is_positive()
    }

    /// Compares against a rational value; `1/0` is treated as larger than everything.
    pub fn cmp_ratio(&self, r: &BigRational) -> Ordering {
        match self.to_ratio() {
            None => Ordering::Greater,
            Some(v) => v.cmp(r),
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by value, with `1/0` above every finite slope.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.p * &other.q).cmp(&(&other.p * &self.q)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Accepts `p/q`, a bare integer `n`, or the pair form `(p,q)`.
impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("cannot read slope {s:?}; expected p/q or (p,q)"));
        let (ps, qs) = if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            inner.split_once(',').ok_or_else(bad)?
        } else if let Some(pair) = t.split_once('/') {
            pair
        } else {
            (t, "1")
        };
        let p: BigInt = ps.trim().parse().map_err(|_| bad())?;
        let q: BigInt = qs.trim().parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A negative continued fraction `[a_1, ..., a_l]^- = a_1 - 1/(a_2 - 1/(... - 1/a_l))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NegCf(Vec<BigInt>);

impl NegCf {
    /// Wraps a coefficient list. Every coefficient must be at least 2,
    /// except that the final one may be 1.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyContinuedFraction);
        }
        let two = BigInt::from(2);
        let last = coeffs.len() - 1;
        for (i, a) in coeffs.iter().enumerate() {
            let floor = if i == last { BigInt::one() } else { two.clone() };
            if *a < floor {
                return Err(Error::MalformedContinuedFraction(format!(
                    "coefficient {a} at position {i} is below {floor}"
                )));
            }
        }
        Ok(Self(coeffs))
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for NegCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]^-", parts.join(","))
    }
}

/// Unique expansion of `r > 1` with every coefficient at least 2.
pub fn neg_cf_expand(r: &Slope) -> Result<NegCf> {
    if r.is_infinity() || r.p() <= r.q() {
        return Err(Error::NotGreaterThanOne(r.clone()));
    }
    let (mut p, mut q) = (r.p().clone(), r.q().clone());
    let mut coeffs = Vec::new();
    while !q.is_zero() {
        let a = p.div_ceil(&q);
        let rest = &a * &q - &p;
        coeffs.push(a);
        p = q;
        q = rest;
    }
    Ok(NegCf(coeffs))
}

/// Evaluates right to left.
pub fn neg_cf_eval(cf: &NegCf) -> Slope {
    let mut it = cf.0.iter().rev();
    // NegCf is never empty and every tail value is >= 1, so no zero division.
    let mut p = it.next().cloned().unwrap_or_else(BigInt::one);
    let mut q = BigInt::one();
    for a in it {
        let np = a * &p - &q;
        q = p;
        p = np;
    }
    Slope::new(p, q).expect("tail values of a negative continued fraction are positive")
}

/// Drops trailing 1s: `[.., a, 2, .., 2, 1]^- = [.., a - 1]^-`.
fn collapse(mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    while coeffs.len() >= 2 && coeffs.last().is_some_and(|a| a.is_one()) {
        coeffs.pop();
        if let Some(last) = coeffs.last_mut() {
            *last -= 1;
        }
    }
    coeffs
}

/// The two slopes that sit in a surgery triad with `r`.
///
/// For `r = [a_1, ..., a_l]^-` with `l >= 2` these are
/// `[a_1, ..., a_{l-1}]^-` and `[a_1, ..., a_l - 1]^-` (collapsed), and `r`
/// is their mediant.
pub fn triad_partners(r: &Slope) -> Result<(Slope, Slope)> {
    let cf = neg_cf_expand(r)?;
    let l = cf.len();
    if l < 2 {
        return Err(Error::IntegerSlope(r.clone()));
    }
    let head = NegCf(cf.0[..l - 1].to_vec());
    let mut dec = cf.0.clone();
    dec[l - 1] -= 1;
    let dec = NegCf(collapse(dec));
    Ok((neg_cf_eval(&head), neg_cf_eval(&dec)))
}

/// Minimal geometric intersection number `|p1 q2 - p2 q1|`.
pub fn distance(s1: &Slope, s2: &Slope) -> BigInt {
    (s1.p() * s2.q() - s2.p() * s1.q()).abs()
}
