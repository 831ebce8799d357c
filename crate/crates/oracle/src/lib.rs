//! Slow, independent reference computations used only by tests and sweeps.
//!
//! Nothing here depends on the main library.

use std::collections::{BTreeSet, HashMap};

/// An element `a + b z + c z^2 + d z^3` of `Z[z]`, `z = exp(i pi / 4)`.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
struct Cyclo8([i128; 4]);

impl Cyclo8 {
    /// Adds `z^k`.
    fn add_power(&mut self, k: i64) {
        let k = k.rem_euclid(8) as usize;
        if k < 4 {
            self.0[k] += 1;
        } else {
            self.0[k - 4] -= 1;
        }
    }

    /// `|x|^2 = r + s sqrt(2)`; returns `(r, s)`.
    fn norm_squared(&self) -> (i128, i128) {
        let [a, b, c, d] = self.0;
        (a * a + b * b + c * c + d * d, a * b + b * c + c * d - a * d)
    }
}

fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
    let p = *parent.entry(x).or_insert(x);
    if p == x {
        return x;
    }
    let r = find(parent, p);
    parent.insert(x, r);
    r
}

/// Determinant from the Kauffman bracket at `A = exp(i pi / 4)`.
///
/// The loop value `-A^2 - A^-2` vanishes there, so only states with a single
/// loop contribute. Each crossing `X(i,j,k,l)` is resolved as
/// `A <(i,j),(k,l)> + A^-1 <(i,l),(j,k)>`.
pub fn bracket_determinant(crossings: &[[u32; 4]], free_loops: u32) -> u64 {
    let n = crossings.len();
    if n == 0 {
        return u64::from(free_loops <= 1);
    }
    if free_loops > 0 {
        return 0;
    }
    assert!(n < 30, "state sum over 2^{n} states is too large");
    let mut total = Cyclo8::default();
    for state in 0u64..(1 << n) {
        let mut parent: HashMap<u32, u32> = HashMap::new();
        let mut exponent = 0i64;
        for (c, x) in crossings.iter().enumerate() {
            let pairs = if state >> c & 1 == 0 {
                exponent += 1;
                [(x[0], x[1]), (x[2], x[3])]
            } else {
                exponent -= 1;
                [(x[0], x[3]), (x[1], x[2])]
            };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent.insert(ra, rb);
                }
            }
        }
        let labels: Vec<u32> = parent.keys().copied().collect();
        let loops: BTreeSet<u32> = labels.into_iter().map(|l| find(&mut parent, l)).collect();
        if loops.len() == 1 {
            total.add_power(exponent);
        }
    }
    let (r, s) = total.norm_squared();
    assert_eq!(s, 0, "bracket value is not a unit times an integer");
    let root = (r as f64).sqrt().round() as i128;
    assert_eq!(root * root, r, "squared norm {r} is not a perfect square");
    root as u64
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Least set of slopes `p/q` (as reduced pairs, `q >= 1`) containing `n`,
/// closed under `s -> s + 1` and under taking the mediant of two members at
/// distance one, restricted to `q <= max_q` and `p/q <= max_value`.
pub fn triad_closure(n: i64, max_q: i64, max_value: i64) -> BTreeSet<(i64, i64)> {
    let in_box = |p: i64, q: i64| q <= max_q && p <= max_value * q;
    let mut set: BTreeSet<(i64, i64)> = BTreeSet::new();
    if in_box(n, 1) {
        set.insert((n, 1));
    }
    loop {
        let members: Vec<(i64, i64)> = set.iter().copied().collect();
        let mut fresh = Vec::new();
        for &(p, q) in &members {
            if in_box(p + q, q) && !set.contains(&(p + q, q)) {
                fresh.push((p + q, q));
            }
        }
        for (i, &(p0, q0)) in members.iter().enumerate() {
            for &(p1, q1) in &members[i + 1..] {
                if (p0 * q1 - p1 * q0).abs() != 1 {
                    continue;
                }
                let (p, q) = (p0 + p1, q0 + q1);
                debug_assert_eq!(gcd(p, q), 1);
                if in_box(p, q) && !set.contains(&(p, q)) {
                    fresh.push((p, q));
                }
            }
        }
        if fresh.is_empty() {
            return set;
        }
        set.extend(fresh);
    }
}

/// Every canonical slope (`q > 0`, or `1/0`) in the rectangle
/// `|p|, |q| <= ceil(bound (|mu| + |lambda|) / sqrt(area))` whose normalized
/// length is at most `bound`.
pub fn short_slopes_rectangle(mu: (f64, f64), lambda: (f64, f64), bound: f64) -> Vec<(i64, i64)> {
    let area = (mu.0 * lambda.1 - mu.1 * lambda.0).abs();
    let norm = |v: (f64, f64)| v.0.hypot(v.1);
    let r = (bound * (norm(mu) + norm(lambda)) / area.sqrt()).ceil() as i64;
    let mut out = Vec::new();
    for q in 0..=r {
        for p in -r..=r {
            if gcd(p, q) != 1 || (q == 0 && p != 1) {
                continue;
            }
            let v = (p as f64 * mu.0 + q as f64 * lambda.0, p as f64 * mu.1 + q as f64 * lambda.1);
            if norm(v) / area.sqrt() <= bound {
                out.push((p, q));
            }
        }
    }
    out.sort_unstable();
    out
}
