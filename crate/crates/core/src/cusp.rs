//! Slope lengths on a cusp torus and finite lists of short slopes.
//!
//! Slopes are listed once each, as `p/q` with `q > 0` or as `1/0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rationals::Slope;

/// Translations of the two basis slopes in a Euclidean structure on the cusp torus.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CuspShape {
    mu: Complex64,
    lambda: Complex64,
}

impl CuspShape {
    pub fn new(mu: Complex64, lambda: Complex64) -> Result<Self> {
        let finite = [mu.re, mu.im, lambda.re, lambda.im].iter().all(|x| x.is_finite());
        let area = (mu.conj() * lambda).im.abs();
        if !finite || area <= 0.0 {
            return Err(Error::DegenerateCusp(format!("mu = {mu}, lambda = {lambda} span zero area")));
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `|Im(conj(mu) lambda)|`.
    pub fn area(&self) -> f64 {
        (self.mu.conj() * self.lambda).im.abs()
    }

    /// `|p mu + q lambda|`.
    pub fn length(&self, s: &Slope) -> f64 {
        let (p, q) = slope_f64(s);
        (self.mu * p + self.lambda * q).norm()
    }

    pub fn normalized_length(&self, s: &Slope) -> f64 {
        self.length(s) / self.area().sqrt()
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.mu * t, self.lambda * t)
    }
}

fn slope_f64(s: &Slope) -> (f64, f64) {
    (s.p().to_f64().expect("finite"), s.q().to_f64().expect("finite"))
}

pub fn normalized_length(c: &CuspShape, s: &Slope) -> f64 {
    c.normalized_length(s)
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ShortSlope {
    pub p: i64,
    pub q: i64,
    pub length: f64,
}

impl ShortSlope {
    pub fn slope(&self) -> Slope {
        Slope::new(self.p, self.q).expect("canonical pair")
    }
}

/// `max(10.1, sqrt(2 pi / systole + 58))`.
pub fn fps_bound(systole: f64) -> Result<f64> {
    if !systole.is_finite() || systole <= 0.0 {
        return Err(Error::Parse(format!("systole must be positive and finite, got {systole}")));
    }
    Ok((2.0 * std::f64::consts::PI / systole + 58.0).sqrt().max(10.1))
}

/// Canonical primitive pairs `(p, q)` with `|p| <= p_max`, `0 <= q <= q_max`.
fn primitive_pairs(p_max: i64, q_max: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=q_max).flat_map(move |q| {
        (-p_max..=p_max).filter(move |&p| if q == 0 { p == 1 } else { p.gcd(&q) == 1 })
            .map(move |p| (p, q))
    })
}

fn sort_slopes(v: &mut [ShortSlope]) {
    v.sort_by(|a, b| {
        a.length
            .partial_cmp(&b.length)
            .unwrap_or(Ordering::Equal)
            .then_with(|| (a.p.abs(), a.q).cmp(&(b.p.abs(), b.q)))
            .then_with(|| a.p.cmp(&b.p))
    });
}

/// Slopes with `|p mu + q lambda| / scale <= bound`, scanning the region the
/// dual basis allows: with `r = bound * scale`, `|p| <= r |lambda| / area` and
/// `|q| <= r |mu| / area`.
fn slopes_within(c: &CuspShape, bound: f64, scale: f64) -> Vec<ShortSlope> {
    let area = c.area();
    let r = bound * scale;
    let p_max = (r * c.lambda.norm() / area).floor() as i64 + 1;
    let q_max = (r * c.mu.norm() / area).floor() as i64 + 1;
    let mut out: Vec<ShortSlope> = primitive_pairs(p_max, q_max)
        .filter_map(|(p, q)| {
            let length = (c.mu * p as f64 + c.lambda * q as f64).norm() / scale;
            (length <= bound).then_some(ShortSlope { p, q, length })
        })
        .collect();
    sort_slopes(&mut out);
    out
}

/// Every slope of normalized length at most `bound`, shortest first.
pub fn short_slopes(c: &CuspShape, bound: f64) -> Vec<ShortSlope> {
    slopes_within(c, bound, c.area().sqrt())
}

/// Slopes of length at most 6. A cusp of area below `area_lower_bound` is
/// first scaled up to that area, so shape data normalized to area 1 can be
/// used directly.
pub fn six_theorem_slopes(c: &CuspShape, area_lower_bound: f64) -> Vec<ShortSlope> {
    let area = c.area();
    let c = if area < area_lower_bound {
        c.scaled((area_lower_bound / area).sqrt()).expect("positive scale keeps the cusp valid")
    } else {
        *c
    };
    slopes_within(&c, 6.0, 1.0)
}

/// A cusp with Gaussian-rational translations, for exact length comparisons.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactCuspShape {
    mu: (BigRational, BigRational),
    lambda: (BigRational, BigRational),
    area: BigRational,
}

impl ExactCuspShape {
    pub fn new(mu: (BigRational, BigRational), lambda: (BigRational, BigRational)) -> Result<Self> {
        let area = (&mu.0 * &lambda.1 - &mu.1 * &lambda.0).abs();
        if area.is_zero() {
            return Err(Error::DegenerateCusp("mu and lambda are parallel".into()));
        }
        Ok(Self { mu, lambda, area })
    }

    pub fn area(&self) -> &BigRational {
        &self.area
    }

    /// `|p mu + q lambda|^2`.
    pub fn length_squared(&self, p: &BigInt, q: &BigInt) -> BigRational {
        let p = BigRational::from_integer(p.clone());
        let q = BigRational::from_integer(q.clone());
        let re = &p * &self.mu.0 + &q * &self.lambda.0;
        let im = &p * &self.mu.1 + &q * &self.lambda.1;
        &re * &re + &im * &im
    }

    pub fn to_float(&self) -> CuspShape {
        let f = |x: &BigRational| x.to_f64().expect("finite");
        CuspShape::new(
            Complex64::new(f(&self.mu.0), f(&self.mu.1)),
            Complex64::new(f(&self.lambda.0), f(&self.lambda.1)),
        )
        .expect("nonzero exact area")
    }

    /// Slopes with `L(r)^2 <= bound_squared`, decided exactly.
    pub fn short_slopes(&self, bound_squared: &BigRational) -> Vec<ShortSlope> {
        // |p| <= B |lambda| / sqrt(area), so p^2 <= B^2 |lambda|^2 / area.
        let norm2 = |v: &(BigRational, BigRational)| &v.0 * &v.0 + &v.1 * &v.1;
        let limit = |v: &(BigRational, BigRational)| {
            let r = bound_squared * norm2(v) / &self.area;
            let f = r.to_f64().expect("finite").sqrt().floor() as i64;
            // f64 only seeds the search; adjust to the exact integer square root bound.
            let mut m = f.max(0);
            while BigRational::from_integer(BigInt::from((m + 1) * (m + 1))) <= r {
                m += 1;
            }
            while m > 0 && BigRational::from_integer(BigInt::from(m * m)) > r {
                m -= 1;
            }
            m
        };
        let (p_max, q_max) = (limit(&self.lambda), limit(&self.mu));
        let scale = self.area.to_f64().expect("finite").sqrt();
        let rhs = bound_squared * &self.area;
        let mut out: Vec<ShortSlope> = primitive_pairs(p_max, q_max)
            .filter_map(|(p, q)| {
                let l2 = self.length_squared(&BigInt::from(p), &BigInt::from(q));
                (l2 <= rhs).then(|| ShortSlope { p, q, length: l2.to_f64().expect("finite").sqrt() / scale })
            })
            .collect();
        sort_slopes(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> CuspShape {
        CuspShape::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)).unwrap()
    }

    fn pairs(v: &[ShortSlope]) -> Vec<(i64, i64)> {
        v.iter().map(|s| (s.p, s.q)).collect()
    }

    #[test]
    fn lengths() {
        let c = square();
        assert_eq!(c.normalized_length(&Slope::new(3, 4).unwrap()), 5.0);
        assert_eq!(c.normalized_length(&Slope::infinity()), 1.0);
        let c2 = CuspShape::new(Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(c2.normalized_length(&Slope::new(3, 4).unwrap()), 5.0);
        assert!(CuspShape::new(Complex64::new(1.0, 1.0), Complex64::new(2.0, 2.0)).is_err());
    }

    #[test]
    fn fps_examples() {
        assert_eq!(fps_bound(std::f64::consts::PI / 21.0).unwrap(), 10.1);
        let v = fps_bound(2.0 * std::f64::consts::PI / 66.0).unwrap();
        assert!((v - 124f64.sqrt()).abs() <= 1e-12 * 124f64.sqrt());
        assert_eq!(fps_bound(1e300).unwrap(), 10.1);
        assert!(fps_bound(0.0).is_err());
        assert!(fps_bound(-1.0).is_err());
    }

    #[test]
    fn square_cusp_lists() {
        let c = square();
        assert_eq!(pairs(&short_slopes(&c, 1.0)), vec![(0, 1), (1, 0)]);
        // 2/1 and 1/2 have length sqrt(5) > 2.
        assert_eq!(pairs(&short_slopes(&c, 2.0)), vec![(0, 1), (1, 0), (-1, 1), (1, 1)]);
        let mut brute = 0;
        for q in 0..=6i64 {
            for p in -6..=6i64 {
                let canonical = if q == 0 { p == 1 } else { p.gcd(&q) == 1 };
                if canonical && p * p + q * q <= 36 {
                    brute += 1;
                }
            }
        }
        assert_eq!(short_slopes(&c, 6.0).len(), brute);
    }

    #[test]
    fn six_theorem_boundary() {
        let c = CuspShape::new(Complex64::new(6.1, 0.0), Complex64::new(0.0, 40.0)).unwrap();
        assert!(!pairs(&six_theorem_slopes(&c, 1.0)).contains(&(1, 0)));
        let c = CuspShape::new(Complex64::new(6.0, 0.0), Complex64::new(0.0, 40.0)).unwrap();
        assert!(pairs(&six_theorem_slopes(&c, 1.0)).contains(&(1, 0)));
        // Shape data of area 1/4 is scaled up to area 1 first.
        let small = CuspShape::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)).unwrap();
        assert_eq!(pairs(&six_theorem_slopes(&small, 1.0)), pairs(&six_theorem_slopes(&square(), 1.0)));
    }

    #[test]
    fn exact_mode_matches_float_on_square() {
        let r = |n: i64| BigRational::from_integer(n.into());
        let e = ExactCuspShape::new((r(1), r(0)), (r(0), r(1))).unwrap();
        // Bound exactly sqrt(5) keeps 2/1 and 1/2.
        let exact = e.short_slopes(&r(5));
        assert!(pairs(&exact).contains(&(2, 1)));
        assert_eq!(pairs(&exact).len(), 8);
        assert_eq!(pairs(&e.short_slopes(&r(36))), pairs(&six_theorem_slopes(&square(), 1.0)));
    }
}
