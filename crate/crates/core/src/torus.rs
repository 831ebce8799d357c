//! Surgeries on positive torus knots: Seifert invariants of every filling and
//! the closed-form quasi-alternating threshold.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rationals::Slope;

/// The positive `(a, b)` torus knot with `a > b >= 2` coprime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TorusKnot {
    a: i64,
    b: i64,
}

impl TorusKnot {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a > b && b >= 2 && a.gcd(&b) == 1 {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidTorusKnot { a, b })
        }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn genus(&self) -> i64 {
        (self.a - 1) * (self.b - 1) / 2
    }

    /// `ab`, the slope of the cabling annulus.
    pub fn ab(&self) -> i64 {
        self.a * self.b
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.a, self.b)
    }
}

/// Integers `(c, d)` with `ac + bd = -1`, normalized to `a > d > 0` and `b > -c > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MoserParams {
    pub c: i64,
    pub d: i64,
}

/// An exceptional fiber `(alpha, beta)` in Regina's notation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Fiber {
    pub alpha: BigInt,
    pub beta: BigInt,
}

impl Fiber {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Self {
        Self { alpha: alpha.into(), beta: beta.into() }
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurgeryResult {
    /// A lens space; only `|H_1| = |p|` is recorded.
    LensSpace { order: BigInt },
    /// `L(a,b) # L(b,a)`, reached exactly at slope `ab`.
    ConnectedSumOfLens { first: (i64, i64), second: (i64, i64) },
    /// `SFS[S2: (a,d) (b,c) (abq-p, q)]`.
    SmallSfs { fibers: [Fiber; 3] },
}

impl fmt::Display for SurgeryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurgeryResult::LensSpace { order } => write!(f, "lens space with |H1| = {order}"),
            SurgeryResult::ConnectedSumOfLens { first, second } => {
                write!(f, "L({},{}) # L({},{})", first.0, first.1, second.0, second.1)
            }
            SurgeryResult::SmallSfs { fibers } => {
                write!(f, "SFS[S2: {} {} {}]", fibers[0], fibers[1], fibers[2])
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QaThreshold {
    pub m: i64,
    pub n: i64,
    pub threshold: BigRational,
}

pub fn moser_params(k: &TorusKnot) -> MoserParams {
    let (a, b) = (k.a, k.b);
    // Solve a*x + b*y = 1, then (c, d) = (-x, -y) and shift d into (0, a).
    let eg = a.extended_gcd(&b);
    let d0 = -eg.y;
    let d = d0.rem_euclid(a);
    let c = (-1 - b * d) / a;
    debug_assert_eq!(a * c + b * d, -1);
    debug_assert!(a > d && d > 0 && b > -c && -c > 0);
    MoserParams { c, d }
}

pub fn moser_surgery(k: &TorusKnot, r: &Slope) -> Result<SurgeryResult> {
    if r.is_infinity() {
        return Err(Error::InfiniteSlope);
    }
    let (p, q) = (r.p(), r.q());
    let ab = BigInt::from(k.ab());
    let third = &ab * q - p;
    if third == BigInt::from(0) {
        return Ok(SurgeryResult::ConnectedSumOfLens { first: (k.a, k.b), second: (k.b, k.a) });
    }
    if third.abs() <= BigInt::from(1) {
        return Ok(SurgeryResult::LensSpace { order: p.abs() });
    }
    let MoserParams { c, d } = moser_params(k);
    Ok(SurgeryResult::SmallSfs {
        fibers: [Fiber::new(k.a, d), Fiber::new(k.b, c), Fiber::new(third, q.clone())],
    })
}

pub fn qa_threshold(k: &TorusKnot) -> QaThreshold {
    let (a, b) = (k.a, k.b);
    // m = b^{-1} mod a, then n from bm + an = ab + 1.
    let inv = b.extended_gcd(&a).x.rem_euclid(a);
    let m = if inv == 0 { a } else { inv };
    let n = (a * b + 1 - b * m) / a;
    debug_assert_eq!(b * m + a * n, a * b + 1);
    let ratio = |x: i64, y: i64| BigRational::new(x.into(), y.into());
    let max = std::cmp::max(ratio(a, m), ratio(b, n));
    QaThreshold { m, n, threshold: ratio(a * b, 1) - max }
}

/// Strictly above the threshold. Negative and zero slopes are never QA.
pub fn is_qa_slope(k: &TorusKnot, r: &Slope) -> Result<bool> {
    let t = qa_threshold(k).threshold;
    match r.to_ratio() {
        None => Err(Error::InfiniteSlope),
        Some(v) => Ok(v > t),
    }
}

/// `2g - 1`, the bottom of the L-space interval.
pub fn lspace_slope_min(k: &TorusKnot) -> Slope {
    Slope::integer(2 * k.genus() - 1)
}
