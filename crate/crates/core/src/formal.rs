//! Propagation of formal L-space surgery slopes through surgery triads.
//!
//! A derivation is a list of [`TriadWitness`]es. Each one names a target
//! slope and the two triad members it is built from; parents must be the
//! seed, a lens space, or an earlier target. [`propagate`] only ever builds
//! derivations. It never decides that a slope is *not* a formal L-space.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rationals::{distance, triad_partners, Slope};
use crate::torus::{self, TorusKnot};

/// The hypothesis that `K(seed)` is a formal L-space.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormalSeed {
    PositiveSlope(Slope),
    PositiveInteger(BigInt),
}

impl FormalSeed {
    pub fn slope(&self) -> Slope {
        match self {
            FormalSeed::PositiveSlope(s) => s.clone(),
            FormalSeed::PositiveInteger(n) => Slope::integer(n.clone()),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            FormalSeed::PositiveSlope(s) => s.is_positive(),
            FormalSeed::PositiveInteger(n) => n.is_positive(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSeed(format!("seed must be positive, got {}", self.slope())))
        }
    }
}

/// One of the two parents of a triad.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Parent {
    /// `K(slope)` for the same knot.
    Surgery(Slope),
    /// The lens space `U(x)`, surgery on the unknot; `|H_1| = |numerator|`.
    Lens { lens: Slope },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriadRule {
    /// `K(p/q)`, `U(q/r')` and `K((p+q)/q)` with `p/q = n - r'/q`.
    IntegerStep,
    /// `K(p0/q0)`, `K(p1/q1)` and their mediant from the continued fraction.
    CfStep,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TriadWitness {
    pub target: Slope,
    pub parents: (Parent, Slope),
    pub rule: TriadRule,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Derivation {
    pub witnesses: Vec<TriadWitness>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn targets(&self) -> impl Iterator<Item = &Slope> {
        self.witnesses.iter().map(|w| &w.target)
    }
}

/// `NotDerivable` means only that these rules do not reach the query from the seed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Propagation {
    Derived(Derivation),
    NotDerivable,
}

impl Propagation {
    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            Propagation::Derived(d) => Some(d),
            Propagation::NotDerivable => None,
        }
    }
}

/// The lens space `U(q/r')` completing the integer-step triad at `p/q`,
/// where `p/q = n - r'/q` with `0 <= r' < q`.
pub fn integer_step_lens(s: &Slope) -> Slope {
    let n = s.ceil().expect("finite slope");
    let r = &n * s.q() - s.p();
    Slope::new(s.q().clone(), r).expect("q >= 1")
}

fn integer_step(from: &Slope) -> TriadWitness {
    TriadWitness {
        target: from.add_integer(&BigInt::one()),
        parents: (Parent::Lens { lens: integer_step_lens(from) }, from.clone()),
        rule: TriadRule::IntegerStep,
    }
}

/// Integer steps from `from` up to `to` (which must differ by a nonnegative integer).
fn push_integer_chain(out: &mut Vec<TriadWitness>, known: &mut HashSet<Slope>, from: &Slope, to: &Slope) {
    let mut cur = from.clone();
    while cur < *to {
        let w = integer_step(&cur);
        cur = w.target.clone();
        known.insert(cur.clone());
        out.push(w);
    }
}

/// Builds the continued-fraction induction for `query >= seed`, where `seed >= 2`
/// is an integer already in `known`.
fn derive_from_integer(seed: &BigInt, query: &Slope, out: &mut Vec<TriadWitness>, known: &mut HashSet<Slope>) {
    // Explicit stack: (slope, children already scheduled).
    let mut stack: Vec<(Slope, bool)> = vec![(query.clone(), false)];
    while let Some((s, expanded)) = stack.pop() {
        if known.contains(&s) {
            continue;
        }
        if s.is_integer() {
            // Integers between the seed and s are derived in increasing order.
            let start = known
                .iter()
                .filter(|k| k.is_integer() && **k <= s && k.p() >= seed)
                .max()
                .cloned()
                .unwrap_or_else(|| Slope::integer(seed.clone()));
            push_integer_chain(out, known, &start, &s);
            continue;
        }
        let (s0, s1) = triad_partners(&s).expect("non-integer slope above 1");
        if expanded {
            out.push(TriadWitness {
                target: s.clone(),
                parents: (Parent::Surgery(s0), s1),
                rule: TriadRule::CfStep,
            });
            known.insert(s);
        } else {
            stack.push((s, true));
            stack.push((s1, false));
            stack.push((s0, false));
        }
    }
}

/// Searches for a derivation of `K(query)` from the seed.
///
/// Integer seeds `n >= 2` reach every `query >= n`. A seed of 1 reaches the
/// integers `>= 1` and, through 2, every non-integer `query >= 2`. A slope
/// seed `r` reaches exactly `r + k` for integers `k >= 0`.
pub fn propagate(seed: &FormalSeed, query: &Slope) -> Result<Propagation> {
    if query.is_infinity() {
        return Err(Error::InfiniteSlope);
    }
    seed.validate()?;
    let seed_slope = seed.slope();
    if *query < seed_slope {
        return Ok(Propagation::NotDerivable);
    }
    let mut out = Vec::new();
    let mut known = HashSet::from([seed_slope.clone()]);
    match seed {
        FormalSeed::PositiveSlope(r) => {
            if query.q() != r.q() {
                return Ok(Propagation::NotDerivable);
            }
            push_integer_chain(&mut out, &mut known, r, query);
        }
        FormalSeed::PositiveInteger(n) => {
            if query.is_integer() {
                push_integer_chain(&mut out, &mut known, &seed_slope, query);
            } else if n.is_one() {
                let two = Slope::integer(2);
                if *query < two {
                    return Ok(Propagation::NotDerivable);
                }
                push_integer_chain(&mut out, &mut known, &seed_slope, &two);
                derive_from_integer(&BigInt::from(2), query, &mut out, &mut known);
            } else {
                derive_from_integer(n, query, &mut out, &mut known);
            }
        }
    }
    Ok(Propagation::Derived(Derivation { witnesses: out }))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationFailure {
    pub index: usize,
    pub reason: String,
}

impl fmt::Display for DerivationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "witness {}: {}", self.index, self.reason)
    }
}

fn check_witness(w: &TriadWitness, known: &HashSet<Slope>) -> std::result::Result<(), String> {
    let t = &w.target;
    let (first, second) = &w.parents;
    if !t.is_positive() || !second.is_positive() {
        return Err(format!("slopes must be positive (target {t}, parent {second})"));
    }
    if !known.contains(second) {
        return Err(format!("parent {second} has not been derived"));
    }
    let one = BigInt::one();
    match (w.rule, first) {
        (TriadRule::IntegerStep, Parent::Lens { lens }) => {
            if *t != second.add_integer(&one) {
                return Err(format!("{t} is not {second} + 1"));
            }
            if *lens != integer_step_lens(second) {
                return Err(format!("lens U({lens}) does not close the triad at {second}"));
            }
            // |H1(K((p+q)/q))| = |H1(K(p/q))| + |H1(U(q/r'))|.
            if t.p().abs() != second.p().abs() + lens.p().abs() {
                return Err("first homology orders do not add".into());
            }
        }
        (TriadRule::CfStep, Parent::Surgery(s0)) => {
            let s1 = second;
            if !s0.is_positive() {
                return Err(format!("parent {s0} must be positive"));
            }
            if !known.contains(s0) {
                return Err(format!("parent {s0} has not been derived"));
            }
            if *t.p() != s0.p() + s1.p() || *t.q() != s0.q() + s1.q() {
                return Err(format!("{t} is not the mediant of {s0} and {s1}"));
            }
            for (x, y) in [(s0, s1), (s0, t), (s1, t)] {
                if distance(x, y) != one {
                    return Err(format!("{x} and {y} are not at distance one"));
                }
            }
            if t.p().abs() != s0.p().abs() + s1.p().abs() {
                return Err("first homology orders do not add".into());
            }
        }
        (rule, _) => return Err(format!("parents do not match rule {rule:?}")),
    }
    Ok(())
}

/// Re-checks every triad in order against the seed.
pub fn check_derivation(d: &Derivation, seed: &FormalSeed) -> std::result::Result<(), DerivationFailure> {
    seed.validate().map_err(|e| DerivationFailure { index: 0, reason: e.to_string() })?;
    let mut known = HashSet::from([seed.slope()]);
    for (index, w) in d.witnesses.iter().enumerate() {
        check_witness(w, &known).map_err(|reason| DerivationFailure { index, reason })?;
        known.insert(w.target.clone());
    }
    Ok(())
}

pub fn verify_derivation(d: &Derivation, seed: &FormalSeed) -> bool {
    check_derivation(d, seed).is_ok()
}

/// Largest `g >= 0` with `2g <= N - sqrt(N)`, `N = ceil(r)`.
pub fn greene_max_genus(r: &Slope) -> Result<BigInt> {
    if !r.is_positive() {
        return Err(Error::NonPositiveSlope(r.to_string()));
    }
    let n = r.ceil().expect("finite");
    // 2g <= N - sqrt(N)  <=>  N - 2g >= 0 and (N - 2g)^2 >= N, so
    // N - 2g >= ceil(sqrt(N)).
    let root = n.sqrt();
    let ceil_root = if &root * &root == n { root } else { root + 1 };
    Ok((n - ceil_root) / 2)
}

/// `B(g) = 2g + (sqrt(1 + 8g) - 1) / 2`, kept exact as the pair `(g, 1 + 8g)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FormalSlopeBound {
    pub genus: BigInt,
    pub radicand: BigInt,
}

impl FormalSlopeBound {
    /// The exact value when `1 + 8g` is a perfect square.
    pub fn exact(&self) -> Option<BigRational> {
        let root = self.radicand.sqrt();
        if &root * &root != self.radicand {
            return None;
        }
        Some(BigRational::from_integer(&self.genus * 2) + BigRational::new(root - 1, BigInt::from(2)))
    }

    /// Orders `x` against `B(g)` exactly.
    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        // x - B = (t - sqrt(D)) / 2 with t = 2x - 4g + 1.
        let t = x * BigInt::from(2) - BigRational::from_integer(&self.genus * 4 - 1);
        if !t.is_positive() {
            return Ordering::Less;
        }
        let (u, v) = (t.numer(), t.denom());
        (u * u).cmp(&(&self.radicand * v * v))
    }

    pub fn approx(&self) -> f64 {
        let g = self.genus.to_f64().unwrap_or(f64::INFINITY);
        let d = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        2.0 * g + (d.sqrt() - 1.0) / 2.0
    }
}

impl fmt::Display for FormalSlopeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{} + (sqrt({}) - 1)/2", &self.genus * 2, self.radicand),
        }
    }
}

/// Every positive formal L-space slope exceeds this bound.
pub fn min_formal_slope_bound(genus: impl Into<BigInt>) -> Result<FormalSlopeBound> {
    let genus = genus.into();
    if genus.is_negative() {
        return Err(Error::Parse(format!("genus must be nonnegative, got {genus}")));
    }
    let radicand = &genus * 8 + 1;
    Ok(FormalSlopeBound { genus, radicand })
}

/// For positive torus knots the formal L-space slopes are the QA slopes.
pub fn formal_slopes_torus(k: &TorusKnot, r: &Slope) -> Result<bool> {
    torus::is_qa_slope(k, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn int_seed(n: i64) -> FormalSeed {
        FormalSeed::PositiveInteger(n.into())
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn lens_for_integer_step_is_the_sphere_at_integers() {
        assert_eq!(integer_step_lens(&s(4, 1)), Slope::infinity());
        assert_eq!(integer_step_lens(&s(7, 3)), s(3, 2));
        assert_eq!(integer_step_lens(&s(5, 3)), s(3, 1));
    }

    #[test]
    fn seed_two_derives_twelve_fifths() {
        let d = propagate(&int_seed(2), &s(12, 5)).unwrap();
        let d = d.derivation().unwrap();
        assert!(verify_derivation(d, &int_seed(2)));
        assert_eq!(d.witnesses.last().unwrap().target, s(12, 5));
        // 12/5 = [3,2,3]^-; its partners are [3,2]^- = 5/2 and [3,2,2]^- = 7/3.
        let last = d.witnesses.last().unwrap();
        assert_eq!(last.parents, (Parent::Surgery(s(5, 2)), s(7, 3)));
    }

    #[test]
    fn below_seed_is_not_derivable() {
        assert_eq!(propagate(&int_seed(2), &s(3, 2)).unwrap(), Propagation::NotDerivable);
        assert_eq!(propagate(&int_seed(2), &s(5, 3)).unwrap(), Propagation::NotDerivable);
        assert_eq!(propagate(&int_seed(1), &s(5, 3)).unwrap(), Propagation::NotDerivable);
    }

    #[test]
    fn query_equal_to_seed_is_empty() {
        let seed = FormalSeed::PositiveSlope(s(7, 2));
        let d = propagate(&seed, &s(7, 2)).unwrap();
        assert_eq!(d, Propagation::Derived(Derivation::default()));
        assert!(verify_derivation(&Derivation::default(), &seed));
    }

    #[test]
    fn slope_seed_only_moves_by_integers() {
        let seed = FormalSeed::PositiveSlope(s(7, 2));
        let d = propagate(&seed, &s(13, 2)).unwrap();
        let d = d.derivation().unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.witnesses.iter().all(|w| w.rule == TriadRule::IntegerStep));
        assert!(verify_derivation(d, &seed));
        assert_eq!(propagate(&seed, &s(9, 4)).unwrap(), Propagation::NotDerivable);
        assert_eq!(propagate(&seed, &s(11, 3)).unwrap(), Propagation::NotDerivable);
    }

    #[test]
    fn seed_one_goes_through_two() {
        let d = propagate(&int_seed(1), &s(7, 3)).unwrap();
        let d = d.derivation().unwrap();
        assert_eq!(d.witnesses[0].target, s(2, 1));
        assert!(verify_derivation(d, &int_seed(1)));
        assert!(propagate(&int_seed(1), &s(5, 1)).unwrap().derivation().is_some());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(propagate(&int_seed(2), &Slope::infinity()).is_err());
        assert!(propagate(&int_seed(0), &s(3, 1)).is_err());
        assert!(propagate(&FormalSeed::PositiveSlope(s(-1, 2)), &s(3, 1)).is_err());
    }

    #[test]
    fn tampered_parent_fails() {
        let d = propagate(&int_seed(2), &s(7, 3)).unwrap().derivation().unwrap().clone();
        assert!(verify_derivation(&d, &int_seed(2)));
        let forged = Derivation {
            witnesses: vec![
                integer_step(&s(2, 1)),
                TriadWitness { target: s(5, 3), parents: (Parent::Surgery(s(3, 1)), s(3, 2)), rule: TriadRule::CfStep },
            ],
        };
        let err = check_derivation(&forged, &int_seed(2)).unwrap_err();
        assert_eq!(err.index, 1);
        let mut bad = d.clone();
        let last = bad.witnesses.len() - 1;
        bad.witnesses[last].parents.1 = s(4, 1);
        assert!(!verify_derivation(&bad, &int_seed(2)));
        // Witnesses out of order reference underived parents.
        let mut reversed = d;
        reversed.witnesses.reverse();
        assert!(!verify_derivation(&reversed, &int_seed(2)));
    }

    #[test]
    fn derivation_json_shape() {
        let d = propagate(&int_seed(2), &s(5, 2)).unwrap().derivation().unwrap().clone();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"[{"target":"3/1","parents":[{"lens":"1/0"},"2/1"],"rule":"integer_step"},{"target":"5/2","parents":["3/1","2/1"],"rule":"cf_step"}]"#
        );
        let back: Derivation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn greene_examples() {
        assert_eq!(greene_max_genus(&s(4, 1)).unwrap(), 1.into());
        assert_eq!(greene_max_genus(&s(1, 1)).unwrap(), 0.into());
        assert_eq!(greene_max_genus(&s(25, 3)).unwrap(), 3.into());
        assert_eq!(greene_max_genus(&s(1, 3)).unwrap(), 0.into());
        assert!(greene_max_genus(&s(0, 1)).is_err());
    }

    #[test]
    fn greene_matches_definition() {
        for n in 1i64..2000 {
            let g = greene_max_genus(&s(n, 1)).unwrap().to_i64().unwrap();
            let ok = |g: i64| n >= 2 * g && (n - 2 * g) * (n - 2 * g) >= n;
            assert!(ok(g) && !ok(g + 1), "N={n} g={g}");
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(min_formal_slope_bound(0).unwrap().exact(), Some(rat(0, 1)));
        assert_eq!(min_formal_slope_bound(1).unwrap().exact(), Some(rat(3, 1)));
        assert_eq!(min_formal_slope_bound(3).unwrap().exact(), Some(rat(8, 1)));
        assert_eq!(min_formal_slope_bound(2).unwrap().exact(), None);
    }

    #[test]
    fn bound_comparator() {
        let b1 = min_formal_slope_bound(1).unwrap();
        assert_eq!(b1.cmp_rational(&rat(3, 1)), Ordering::Equal);
        assert_eq!(b1.cmp_rational(&rat(301, 100)), Ordering::Greater);
        assert_eq!(b1.cmp_rational(&rat(-5, 1)), Ordering::Less);
        // B(2) = 4 + (sqrt(17) - 1)/2 ~ 5.5616
        let b2 = min_formal_slope_bound(2).unwrap();
        assert_eq!(b2.cmp_rational(&rat(5561, 1000)), Ordering::Less);
        assert_eq!(b2.cmp_rational(&rat(5562, 1000)), Ordering::Greater);
        let b0 = min_formal_slope_bound(0).unwrap();
        assert_eq!(b0.cmp_rational(&rat(0, 1)), Ordering::Equal);
        assert_eq!(b0.cmp_rational(&rat(1, 100)), Ordering::Greater);
    }

    #[test]
    fn torus_delegate() {
        let t32 = TorusKnot::new(3, 2).unwrap();
        assert!(formal_slopes_torus(&t32, &s(9, 2)).unwrap());
        assert!(!formal_slopes_torus(&t32, &s(4, 1)).unwrap());
        assert!(formal_slopes_torus(&TorusKnot::new(5, 3).unwrap(), &s(13, 1)).unwrap());
    }
}
