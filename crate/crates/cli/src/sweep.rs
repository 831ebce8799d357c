//! Batch checks against independent oracles. Each suite produces one report
//! row per case; rows are sorted before they are written, so reports do not
//! depend on scheduling.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use qaslopes::cusp::{short_slopes, CuspShape};
use qaslopes::diagram::determinant;
use qaslopes::fixtures;
use qaslopes::formal::{propagate, verify_derivation, FormalSeed, Propagation};
use qaslopes::montesinos::{issa_qa, normalize, qa_slope_via_pipeline, sfs_to_montesinos};
use qaslopes::rationals::Slope;
use qaslopes::torus::{is_qa_slope, Fiber, TorusKnot};
use qaslopes_oracle::{bracket_determinant, short_slopes_rectangle, triad_closure};

use crate::{CliResult, Report, EXIT_NEGATIVE, EXIT_OK};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    /// Closed-form QA threshold vs the Moser/Issa pipeline on torus knots.
    #[value(name = "thm61-oracle")]
    ThresholdOracle,
    /// Propagated formal slopes vs the brute-force triad fixed point.
    TriadClosure,
    /// The eight non-QA Seifert fibered rows.
    #[value(name = "table8")]
    SeifertRows,
    /// Goeritz determinant vs the bracket at a primitive 8th root of unity.
    DetOracle,
    /// Short-slope lists vs a rectangle scan on random cusps.
    ShortSlopesBruteforce,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ThresholdOracle => "thm61-oracle",
            Suite::TriadClosure => "triad-closure",
            Suite::SeifertRows => "table8",
            Suite::DetOracle => "det-oracle",
            Suite::ShortSlopesBruteforce => "short-slopes-bruteforce",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Largest `a` for torus knots T(a,b).
    #[arg(long, default_value_t = 12)]
    pub amax: i64,
    /// Largest slope denominator.
    #[arg(long, default_value_t = 12)]
    pub qmax: i64,
    /// Slopes within this distance of `ab` (thm61-oracle) or up to this value (triad-closure).
    #[arg(long, default_value_t = 30)]
    pub window: i64,
    /// Largest integer seed for triad-closure.
    #[arg(long, default_value_t = 3)]
    pub nmax: i64,
    #[arg(long, default_value_t = 10)]
    pub max_crossings: usize,
    /// Random cusps for short-slopes-bruteforce.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// CSV report path; defaults to `<suite>-report.csv`.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ReportRow {
    pub suite: &'static str,
    pub case: String,
    pub checks: u64,
    pub verdict: &'static str,
    pub detail: String,
    /// Wall time; not part of any comparison.
    pub elapsed_ms: u128,
}

fn row(suite: Suite, case: String, start: Instant, checks: u64, mismatch: Option<String>) -> ReportRow {
    ReportRow {
        suite: suite.name(),
        case,
        checks,
        verdict: if mismatch.is_some() { "mismatch" } else { "ok" },
        detail: mismatch.unwrap_or_default(),
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn torus_knots(amax: i64) -> Vec<TorusKnot> {
    (3..=amax).flat_map(|a| (2..a).filter(move |&b| a.gcd(&b) == 1).map(move |b| TorusKnot::new(a, b).expect("valid"))).collect()
}

fn threshold_oracle(args: &SweepArgs) -> Vec<ReportRow> {
    torus_knots(args.amax)
        .par_iter()
        .map(|k| {
            let start = Instant::now();
            let ab = k.ab();
            let mut checks = 0;
            let mut mismatch = None;
            'outer: for q in 1..=args.qmax {
                for p in (ab - args.window) * q..=(ab + args.window) * q {
                    if p.gcd(&q) != 1 {
                        continue;
                    }
                    let s = Slope::new(p, q).expect("reduced");
                    checks += 1;
                    let closed = is_qa_slope(k, &s);
                    let pipeline = qa_slope_via_pipeline(k, &s);
                    if closed != pipeline {
                        mismatch = Some(format!("{s}: closed form {closed:?}, pipeline {pipeline:?}"));
                        break 'outer;
                    }
                }
            }
            row(Suite::ThresholdOracle, k.to_string(), start, checks, mismatch)
        })
        .collect()
}

fn triad(args: &SweepArgs) -> Vec<ReportRow> {
    (2..=args.nmax.max(2))
        .into_par_iter()
        .map(|n| {
            let start = Instant::now();
            let seed = FormalSeed::PositiveInteger(n.into());
            let mut ours = BTreeSet::new();
            let mut mismatch = None;
            for q in 1..=args.qmax {
                for p in 1..=args.window * q {
                    if p.gcd(&q) != 1 {
                        continue;
                    }
                    let s = Slope::new(p, q).expect("reduced");
                    match propagate(&seed, &s) {
                        Ok(Propagation::Derived(d)) => {
                            if !verify_derivation(&d, &seed) && mismatch.is_none() {
                                mismatch = Some(format!("{s}: derivation does not verify"));
                            }
                            ours.insert((p, q));
                        }
                        Ok(Propagation::NotDerivable) => {}
                        Err(e) => mismatch = mismatch.or(Some(format!("{s}: {e}"))),
                    }
                }
            }
            let closure = triad_closure(n, args.qmax, args.window);
            if mismatch.is_none() && ours != closure {
                let diff: Vec<_> = ours.symmetric_difference(&closure).take(5).collect();
                mismatch = Some(format!("derivable set differs from the fixed point: {diff:?}"));
            }
            row(Suite::TriadClosure, format!("seed {n}"), start, ours.len() as u64, mismatch)
        })
        .collect()
}

fn seifert_rows() -> Vec<ReportRow> {
    fixtures::NON_QA_SEIFERT_ROWS
        .iter()
        .map(|r| {
            let start = Instant::now();
            let fibers: Vec<Fiber> = r.iter().map(|&(a, b)| Fiber::new(a, b)).collect();
            let case = format!("SFS[S2: {} {} {}]", fibers[0], fibers[1], fibers[2]);
            let verdict = sfs_to_montesinos(&fibers).and_then(|l| issa_qa(&normalize(&l)));
            let mismatch = match verdict {
                Ok(false) => None,
                Ok(true) => Some("reported quasi-alternating".to_string()),
                Err(e) => Some(e.to_string()),
            };
            row(Suite::SeifertRows, case, start, 1, mismatch)
        })
        .collect()
}

fn det_oracle(args: &SweepArgs) -> Vec<ReportRow> {
    fixtures::diagrams()
        .into_par_iter()
        .filter(|f| f.pd.len() <= args.max_crossings)
        .map(|f| {
            let start = Instant::now();
            let mismatch = match f.diagram() {
                Ok(d) => {
                    let (g, b) = (determinant(&d), bracket_determinant(d.crossings(), d.free_loops()));
                    (g != b || g != f.det).then(|| format!("Goeritz {g}, bracket {b}, table {}", f.det))
                }
                Err(e) => Some(e.to_string()),
            };
            row(Suite::DetOracle, f.name.clone(), start, 1, mismatch)
        })
        .collect()
}

fn random_cusps(seed: u64, count: usize) -> Vec<CuspShape> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mu = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let lambda = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        match CuspShape::new(mu, lambda) {
            Ok(c) if c.area() >= 0.25 * mu.norm() * lambda.norm() => out.push(c),
            _ => {}
        }
    }
    out
}

fn short_slopes_brute(args: &SweepArgs) -> Vec<ReportRow> {
    random_cusps(args.seed, args.cases)
        .into_par_iter()
        .enumerate()
        .map(|(i, c)| {
            let start = Instant::now();
            let (mu, lambda) = (c.mu(), c.lambda());
            let mut checks = 0;
            let mut mismatch = None;
            for bound in [2.0, 6.0, 10.1] {
                let mut ours: Vec<(i64, i64)> = short_slopes(&c, bound).iter().map(|s| (s.p, s.q)).collect();
                ours.sort_unstable();
                let brute = short_slopes_rectangle((mu.re, mu.im), (lambda.re, lambda.im), bound);
                checks += brute.len() as u64;
                if ours != brute && mismatch.is_none() {
                    mismatch = Some(format!("bound {bound}: {} vs {} slopes", ours.len(), brute.len()));
                }
            }
            row(Suite::ShortSlopesBruteforce, format!("cusp {i:03} mu {mu} lambda {lambda}"), start, checks, mismatch)
        })
        .collect()
}

pub fn sweep_rows(args: &SweepArgs) -> Vec<ReportRow> {
    let mut rows = match args.suite {
        Suite::ThresholdOracle => threshold_oracle(args),
        Suite::TriadClosure => triad(args),
        Suite::SeifertRows => seifert_rows(),
        Suite::DetOracle => det_oracle(args),
        Suite::ShortSlopesBruteforce => short_slopes_brute(args),
    };
    rows.sort_by(|a, b| a.case.cmp(&b.case));
    rows
}

pub(crate) fn run_sweep(args: &SweepArgs) -> CliResult<Report> {
    let rows = sweep_rows(args);
    let path = args.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}-report.csv", args.suite.name())));
    let mut w = csv::Writer::from_path(&path)?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    let mismatches: Vec<&ReportRow> = rows.iter().filter(|r| r.verdict != "ok").collect();
    let checks: u64 = rows.iter().map(|r| r.checks).sum();
    let json = json!({
        "suite": args.suite.name(),
        "cases": rows.len(),
        "checks": checks,
        "mismatches": mismatches.len(),
        "report": path.display().to_string(),
    });
    let mut text = format!(
        "{}: {} cases, {checks} checks, {} mismatches\nreport written to {}\n",
        args.suite.name(),
        rows.len(),
        mismatches.len(),
        path.display()
    );
    for r in &mismatches {
        text.push_str(&format!("  {}: {}\n", r.case, r.detail));
    }
    let code = if mismatches.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report::new(code, json, text))
}
