use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use qaslopes::formal::{greene_max_genus, min_formal_slope_bound, propagate, verify_derivation, Derivation, FormalSeed, Propagation};
use qaslopes::montesinos::{issa_qa, normalize, MontesinosLink, Tangle};
use qaslopes::rationals::{distance, neg_cf_eval, neg_cf_expand, triad_partners, Slope};
use qaslopes::torus::{is_qa_slope, lspace_slope_min, moser_surgery, SurgeryResult, TorusKnot};

/// Reduced `p/q > 1` with `q <= 200`.
fn slope_above_one() -> impl Strategy<Value = Slope> {
    (1i64..=200, 1i64..=4000).prop_filter_map("reduced, above 1", |(q, k)| {
        let p = q + k;
        (p.gcd(&q) == 1).then(|| Slope::new(p, q).unwrap())
    })
}

fn torus_knot() -> impl Strategy<Value = TorusKnot> {
    (3i64..=12, 2i64..=11).prop_filter_map("coprime, a > b", |(a, b)| TorusKnot::new(a, b).ok())
}

fn euler(l: &MontesinosLink) -> BigRational {
    l.tangles.iter().fold(BigRational::from_integer(l.e.clone()), |acc, t| acc - t.inverse_fraction())
}

fn montesinos(max_beta: i64) -> impl Strategy<Value = MontesinosLink> {
    let tangle = (2i64..=50, -max_beta..=max_beta).prop_filter_map("valid tangle", |(a, b)| Tangle::new(a, b).ok());
    (-5i64..=8, prop::collection::vec(tangle, 1..=6)).prop_map(|(e, ts)| MontesinosLink::new(e, ts))
}

proptest! {
    #[test]
    fn continued_fraction_round_trip(s in slope_above_one()) {
        let cf = neg_cf_expand(&s).unwrap();
        prop_assert_eq!(neg_cf_eval(&cf), s.clone());
        prop_assert_eq!(&cf.coeffs()[0], &s.ceil().unwrap());
        prop_assert!(cf.coeffs().iter().all(|a| *a >= BigInt::from(2)));
    }

    #[test]
    fn partners_are_sandwiching_mediants(s in slope_above_one()) {
        prop_assume!(!s.is_integer());
        let (s0, s1) = triad_partners(&s).unwrap();
        prop_assert_eq!(s.p(), &(s0.p() + s1.p()));
        prop_assert_eq!(s.q(), &(s0.q() + s1.q()));
        let one = BigInt::one();
        prop_assert_eq!(distance(&s0, &s1), one.clone());
        prop_assert_eq!(distance(&s0, &s), one.clone());
        prop_assert_eq!(distance(&s1, &s), one);
        prop_assert!(s0.clone().min(s1.clone()) < s && s < s0.max(s1));
    }

    #[test]
    fn qa_slopes_are_lspace_slopes(k in torus_knot(), q in 1i64..=12, off in -30i64..=30, frac in 0i64..12) {
        let p = (k.ab() + off) * q + frac % q;
        prop_assume!(p.gcd(&q) == 1);
        let s = Slope::new(p, q).unwrap();
        if is_qa_slope(&k, &s).unwrap() {
            prop_assert!(s >= lspace_slope_min(&k));
        }
        prop_assert!(is_qa_slope(&k, &Slope::integer(k.ab() - 1)).unwrap());
    }

    #[test]
    fn seifert_fibers_are_coprime(k in torus_knot(), q in 1i64..=12, p in -400i64..=400) {
        prop_assume!(p.gcd(&q) == 1);
        if let SurgeryResult::SmallSfs { fibers } = moser_surgery(&k, &Slope::new(p, q).unwrap()).unwrap() {
            prop_assert!(fibers[0].alpha.gcd(&fibers[1].alpha).is_one());
            prop_assert!(fibers[2].alpha.gcd(&fibers[2].beta).is_one());
            prop_assert_eq!(&fibers[2].alpha, &(BigInt::from(k.ab() * q) - p));
        }
    }

    #[test]
    fn normalize_keeps_euler_number(l in montesinos(500)) {
        let n = normalize(&l);
        prop_assert_eq!(euler(&n), euler(&l));
        prop_assert!(n.is_standard_form());
        prop_assert_eq!(normalize(&n), n);
    }

    #[test]
    fn issa_verdict_is_mirror_symmetric(l in montesinos(500)) {
        let n = normalize(&l);
        let count = BigInt::from(n.tangles.len());
        let mirrored = MontesinosLink::new(
            &count - &n.e,
            n.tangles.iter().map(|t| Tangle::new(t.alpha.clone(), &t.alpha - &t.beta).unwrap()).collect(),
        );
        prop_assert_eq!(issa_qa(&n).unwrap(), issa_qa(&mirrored).unwrap());
    }

    #[test]
    fn greene_genus_is_monotone(p in 1i64..5000, q in 1i64..50, step in 0i64..500) {
        prop_assume!(p.gcd(&q) == 1);
        let r = Slope::new(p, q).unwrap();
        let r2 = Slope::new(p + step * q, q).unwrap();
        prop_assert!(greene_max_genus(&r).unwrap() <= greene_max_genus(&r2).unwrap());
    }

    #[test]
    fn formal_bound_is_increasing(g in 0i64..100_000) {
        let b = min_formal_slope_bound(g).unwrap();
        let b2 = min_formal_slope_bound(g + 1).unwrap();
        // An integer c with B(g) <= c < B(g + 1).
        let c = BigRational::from_integer(BigInt::from(b.approx().ceil() as i64));
        prop_assert!(b.cmp_rational(&c).is_ge());
        prop_assert!(b2.cmp_rational(&c).is_lt());
    }

    #[test]
    fn derivations_survive_json(n in 2i64..=6, q in 1i64..=25, k in 0i64..200) {
        let p = n * q + k;
        prop_assume!(p.gcd(&q) == 1);
        let seed = FormalSeed::PositiveInteger(n.into());
        let Propagation::Derived(d) = propagate(&seed, &Slope::new(p, q).unwrap()).unwrap() else {
            return Err(TestCaseError::fail("not derived"));
        };
        let back: Derivation = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert!(verify_derivation(&back, &seed));
        if let Some(last) = back.targets().last() {
            prop_assert_eq!(last, &Slope::new(p, q).unwrap());
        }
    }

    #[test]
    fn tampered_derivations_fail(n in 2i64..=4, q in 2i64..=15, k in 1i64..60, which in 0usize..64) {
        let p = n * q + k;
        prop_assume!(p.gcd(&q) == 1);
        let seed = FormalSeed::PositiveInteger(n.into());
        let Propagation::Derived(mut d) = propagate(&seed, &Slope::new(p, q).unwrap()).unwrap() else {
            return Err(TestCaseError::fail("not derived"));
        };
        prop_assume!(!d.is_empty());
        let i = which % d.len();
        let w = &mut d.witnesses[i];
        w.target = w.target.add_integer(&BigInt::one());
        prop_assert!(!verify_derivation(&d, &seed));
    }
}

#[test]
fn slopes_below_the_seed_are_not_derived() {
    let seed = FormalSeed::PositiveInteger(2.into());
    assert_eq!(propagate(&seed, &Slope::new(5, 3).unwrap()).unwrap(), Propagation::NotDerivable);
    let d = propagate(&seed, &Slope::new(12, 5).unwrap()).unwrap();
    assert!(verify_derivation(d.derivation().unwrap(), &seed));
}
