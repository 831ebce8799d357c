//! Montesinos links, their standard form, and Issa's quasi-alternating test.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rationals::Slope;
use crate::torus::{self, Fiber, SurgeryResult, TorusKnot};

/// A rational tangle `alpha/beta` with `alpha >= 2` and `gcd(alpha, beta) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Tangle {
    pub alpha: BigInt,
    pub beta: BigInt,
}

impl Tangle {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Result<Self> {
        let (alpha, beta) = (alpha.into(), beta.into());
        let bad = |reason| Error::InvalidFiber { alpha: alpha.to_string(), beta: beta.to_string(), reason };
        if alpha < BigInt::from(2) {
            return Err(bad("alpha must be at least 2"));
        }
        if beta.is_zero() {
            return Err(bad("beta must be nonzero"));
        }
        if !alpha.gcd(&beta).is_one() {
            return Err(bad("alpha and beta must be coprime"));
        }
        Ok(Self { alpha, beta })
    }

    /// `beta / alpha`, the quantity Issa's criterion sums.
    pub fn inverse_fraction(&self) -> BigRational {
        BigRational::new(self.beta.clone(), self.alpha.clone())
    }

    fn is_standard(&self) -> bool {
        self.beta.is_positive() && self.beta < self.alpha
    }
}

/// `M(e; alpha_1/beta_1, ..., alpha_n/beta_n)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MontesinosLink {
    pub e: BigInt,
    pub tangles: Vec<Tangle>,
}

impl MontesinosLink {
    pub fn new(e: impl Into<BigInt>, tangles: Vec<Tangle>) -> Self {
        Self { e: e.into(), tangles }
    }

    /// Every tangle fraction exceeds 1.
    pub fn is_standard_form(&self) -> bool {
        self.tangles.iter().all(Tangle::is_standard)
    }

    /// `e - sum(beta_i / alpha_i)`, preserved by normalization.
    pub fn euler_number(&self) -> BigRational {
        self.tangles
            .iter()
            .fold(BigRational::from_integer(self.e.clone()), |acc, t| acc - t.inverse_fraction())
    }
}

impl fmt::Display for MontesinosLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({}", self.e)?;
        for (i, t) in self.tangles.iter().enumerate() {
            let sep = if i == 0 { ";" } else { "," };
            write!(f, "{sep} {}/{}", t.alpha, t.beta)?;
        }
        write!(f, ")")
    }
}

/// Reads either `SFS[S2:(a1,b1)(a2,b2)...]` (giving `M(0; ...)`) or
/// `M(e; a1/b1, a2/b2, ...)`.
impl FromStr for MontesinosLink {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = compact.strip_prefix("SFS[").and_then(|b| b.strip_suffix(']')) {
            let body = body
                .strip_prefix("S2:")
                .ok_or_else(|| Error::Parse(format!("expected base S2 in {s:?}")))?;
            let mut fibers = Vec::new();
            for chunk in body.split(')').filter(|c| !c.is_empty()) {
                let inner = chunk
                    .strip_prefix('(')
                    .ok_or_else(|| Error::Parse(format!("bad fiber {chunk:?} in {s:?}")))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad fiber {inner:?}")))?;
                fibers.push(Fiber::new(parse_int(a)?, parse_int(b)?));
            }
            return sfs_to_montesinos(&fibers);
        }
        let body = compact
            .strip_prefix("M(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected SFS[S2:...] or M(e; ...), got {s:?}")))?;
        let (e, rest) = body.split_once(';').unwrap_or((body, ""));
        let e = parse_int(e)?;
        let mut tangles = Vec::new();
        for item in rest.split(',').filter(|c| !c.is_empty()) {
            let (a, b) = item.split_once('/').unwrap_or((item, "1"));
            let b = b.trim_start_matches('(').trim_end_matches(')');
            tangles.push(Tangle::new(parse_int(a)?, parse_int(b)?)?);
        }
        Ok(MontesinosLink::new(e, tangles))
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// The Montesinos link `M(0; alpha_1/beta_1, ...)` double-branched-covered by
/// `SFS[S2: (alpha_1,beta_1) ...]`. A fiber with negative `alpha` is read as
/// `(-alpha, -beta)`.
pub fn sfs_to_montesinos(fibers: &[Fiber]) -> Result<MontesinosLink> {
    let tangles = fibers
        .iter()
        .map(|f| {
            if f.alpha.is_negative() {
                Tangle::new(-&f.alpha, -&f.beta)
            } else {
                Tangle::new(f.alpha.clone(), f.beta.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MontesinosLink::new(0, tangles))
}

/// Moves every `beta_i` into `(0, alpha_i)`, paying for each shift by `alpha_i` with `e`.
pub fn normalize(link: &MontesinosLink) -> MontesinosLink {
    let mut e = link.e.clone();
    let tangles = link
        .tangles
        .iter()
        .map(|t| {
            let reduced = t.beta.mod_floor(&t.alpha);
            let shifts = (&t.beta - &reduced) / &t.alpha;
            e -= shifts;
            Tangle { alpha: t.alpha.clone(), beta: reduced }
        })
        .collect();
    MontesinosLink { e, tangles }
}

/// Issa's classification for standard-form links. Links with at most two
/// tangles are two-bridge and always quasi-alternating.
pub fn issa_qa(link: &MontesinosLink) -> Result<bool> {
    if !link.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let n = link.tangles.len();
    if n <= 2 {
        return Ok(true);
    }
    let e = &link.e;
    let n_minus_one = BigInt::from(n - 1);
    let one = BigRational::one();
    let fracs: Vec<BigRational> = link.tangles.iter().map(Tangle::inverse_fraction).collect();
    let some_pair = |pred: &dyn Fn(&BigRational) -> bool| {
        (0..n).any(|i| (i + 1..n).any(|j| pred(&(&fracs[i] + &fracs[j]))))
    };
    Ok(*e < BigInt::one()
        || (e.is_one() && some_pair(&|s| *s > one))
        || *e > n_minus_one
        || (*e == n_minus_one && some_pair(&|s| *s < one)))
}

/// Decides whether `K(r)` is quasi-alternating by the Seifert-fibered route:
/// large slopes are handled directly, slopes below `2g - 1` are not L-space
/// slopes, and the rest go through Moser's description and Issa's test.
pub fn qa_slope_via_pipeline(k: &TorusKnot, r: &Slope) -> Result<bool> {
    let v = r.to_ratio().ok_or(Error::InfiniteSlope)?;
    if v >= BigRational::from_integer(BigInt::from(k.ab() - 1)) {
        return Ok(true);
    }
    if v < BigRational::from_integer(BigInt::from(2 * k.genus() - 1)) {
        return Ok(false);
    }
    match torus::moser_surgery(k, r)? {
        SurgeryResult::LensSpace { .. } | SurgeryResult::ConnectedSumOfLens { .. } => Ok(true),
        SurgeryResult::SmallSfs { fibers } => issa_qa(&normalize(&sfs_to_montesinos(&fibers)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: i64, ts: &[(i64, i64)]) -> MontesinosLink {
        MontesinosLink::new(e, ts.iter().map(|&(a, b)| Tangle::new(a, b).unwrap()).collect())
    }

    #[test]
    fn sfs_examples() {
        let f = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| Fiber::new(a, b)).collect::<Vec<_>>();
        assert_eq!(sfs_to_montesinos(&f(&[(2, 1), (5, 2), (7, -4)])).unwrap(), m(0, &[(2, 1), (5, 2), (7, -4)]));
        assert_eq!(sfs_to_montesinos(&f(&[(3, 1), (2, -1), (3, 2)])).unwrap(), m(0, &[(3, 1), (2, -1), (3, 2)]));
        assert_eq!(sfs_to_montesinos(&f(&[(2, 1), (2, 1), (2, 1)])).unwrap(), m(0, &[(2, 1), (2, 1), (2, 1)]));
        assert_eq!(sfs_to_montesinos(&f(&[(-5, 3)])).unwrap(), m(0, &[(5, -3)]));
        assert!(sfs_to_montesinos(&f(&[(1, 1), (2, 1)])).is_err());
        assert!(sfs_to_montesinos(&f(&[(4, 2)])).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&m(0, &[(3, 1), (2, -1), (3, 2)])), m(1, &[(3, 1), (2, 1), (3, 2)]));
        assert_eq!(normalize(&m(0, &[(2, 1), (5, 2), (7, -4)])), m(1, &[(2, 1), (5, 2), (7, 3)]));
        assert_eq!(normalize(&m(5, &[(2, 1)])), m(5, &[(2, 1)]));
        assert_eq!(normalize(&m(0, &[(3, 7)])), m(-2, &[(3, 1)]));
    }

    #[test]
    fn issa_examples() {
        assert!(!issa_qa(&m(1, &[(2, 1), (5, 2), (7, 3)])).unwrap());
        assert!(issa_qa(&m(1, &[(3, 1), (2, 1), (3, 2)])).unwrap());
        assert!(issa_qa(&m(0, &[(2, 1), (2, 1), (2, 1)])).unwrap());
        assert!(issa_qa(&m(3, &[(2, 1), (2, 1), (2, 1)])).unwrap());
        assert!(!issa_qa(&m(2, &[(2, 1), (2, 1), (2, 1)])).unwrap());
        assert!(issa_qa(&m(2, &[(3, 1), (3, 1), (2, 1)])).unwrap());
        assert_eq!(issa_qa(&m(0, &[(2, -1), (3, 1), (3, 1)])), Err(Error::NotStandardForm));
    }

    #[test]
    fn two_bridge_short_circuit() {
        assert!(issa_qa(&m(1, &[(5, 2), (7, 3)])).unwrap());
        assert!(issa_qa(&m(7, &[(5, 2)])).unwrap());
    }

    #[test]
    fn parse_both_syntaxes() {
        let a: MontesinosLink = "SFS[S2:(2,1)(5,2)(7,-4)]".parse().unwrap();
        assert_eq!(a, m(0, &[(2, 1), (5, 2), (7, -4)]));
        let b: MontesinosLink = "SFS [S2: (2,1) (5,2) (8,-5)]".parse().unwrap();
        assert_eq!(b, m(0, &[(2, 1), (5, 2), (8, -5)]));
        let c: MontesinosLink = "M(1; 3/1, 2/(-1), 3/2)".parse().unwrap();
        assert_eq!(c, m(1, &[(3, 1), (2, -1), (3, 2)]));
        assert!("Q(1;2)".parse::<MontesinosLink>().is_err());
    }

    #[test]
    fn pipeline_examples() {
        let t53 = TorusKnot::new(5, 3).unwrap();
        let t32 = TorusKnot::new(3, 2).unwrap();
        assert!(qa_slope_via_pipeline(&t53, &Slope::integer(13)).unwrap());
        assert!(!qa_slope_via_pipeline(&t53, &Slope::new(25, 2).unwrap()).unwrap());
        assert!(qa_slope_via_pipeline(&t32, &Slope::new(9, 2).unwrap()).unwrap());
        assert!(qa_slope_via_pipeline(&t32, &Slope::infinity()).is_err());
    }
}
