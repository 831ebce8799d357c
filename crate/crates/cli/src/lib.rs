//! The `qaslopes` command line. [`run`] parses arguments, dispatches, and
//! returns the process exit code: 0 for success or a positive verdict, 2 for
//! Unknown or a negative verdict, 1 for usage and data errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use qaslopes::certify::{certify, check_certificate, load_assumptions, load_database, Certificate, CertifyOutcome, QaDatabase, SearchLimits};
use qaslopes::cusp::{fps_bound, short_slopes, CuspShape};
use qaslopes::diagram::{determinant, parse_pd};
use qaslopes::formal::{check_derivation, formal_slopes_torus, propagate, Derivation, FormalSeed, Propagation};
use qaslopes::montesinos::{issa_qa, normalize, MontesinosLink};
use qaslopes::rationals::Slope;
use qaslopes::torus::{is_qa_slope, lspace_slope_min, moser_params, moser_surgery, qa_threshold, TorusKnot};

pub mod sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

/// Environment variable naming the default database for `certify-qa`.
pub const DB_ENV: &str = "QA_SLOPES_DB";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qaslopes::Error),
    #[error(transparent)]
    Diagram(#[from] qaslopes::diagram::DiagramError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
    #[error("report: {0}")]
    Report(#[from] csv::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "qaslopes", version, about = "Quasi-alternating, formal L-space and short surgery slopes")]
pub struct Cli {
    /// Print JSON (sorted keys) instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// QA threshold of T(a,b), and the verdict for one slope if given.
    TorusQa {
        a: i64,
        b: i64,
        #[arg(allow_hyphen_values = true)]
        slope: Option<String>,
    },
    /// Moser's description of p/q surgery on T(a,b).
    Moser {
        a: i64,
        b: i64,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Issa's test on `SFS[S2:(a1,b1)(a2,b2)...]` or `M(e; a1/b1, ...)`.
    MontesinosQa { spec: String },
    /// Derive a formal L-space slope from a seed by triads.
    FormalPropagate {
        #[arg(long)]
        seed: String,
        #[arg(long)]
        query: String,
        #[arg(long, value_name = "PATH")]
        emit_derivation: Option<PathBuf>,
    },
    /// Re-check a derivation file against a seed.
    VerifyDerivation {
        #[arg(long)]
        seed: String,
        #[arg(long, value_name = "PATH")]
        derivation: PathBuf,
    },
    /// Search for a quasi-alternating certificate by smoothing crossings.
    CertifyQa {
        /// File holding `PD[X(...),...]` or JSON.
        #[arg(long, value_name = "PATH")]
        pd: PathBuf,
        /// CSV or JSON database; defaults to $QA_SLOPES_DB, else empty.
        #[arg(long, value_name = "PATH")]
        db: Option<PathBuf>,
        /// JSON list of diagrams taken as quasi-alternating.
        #[arg(long, value_name = "PATH")]
        assume: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the certificate JSON here.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    VerifyCertificate {
        #[arg(long, value_name = "PATH")]
        certificate: PathBuf,
        #[arg(long, value_name = "PATH")]
        db: Option<PathBuf>,
    },
    /// Slopes of normalized length at most a bound.
    ShortSlopes {
        /// Translation of the meridian, `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Translation of the longitude, `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, conflicts_with = "systole", required_unless_present = "systole")]
        bound: Option<f64>,
        /// Use the bound for a filling with this systole.
        #[arg(long)]
        systole: Option<f64>,
    },
    /// Run a batch check and write a CSV report.
    Sweep(sweep::SweepArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct LimitArgs {
    #[arg(long, default_value_t = SearchLimits::default().max_depth)]
    pub max_depth: usize,
    #[arg(long, default_value_t = SearchLimits::default().max_nodes)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = SearchLimits::default().max_crossings)]
    pub max_crossings: usize,
}

impl From<LimitArgs> for SearchLimits {
    fn from(l: LimitArgs) -> Self {
        SearchLimits { max_depth: l.max_depth, max_nodes: l.max_nodes, max_crossings: l.max_crossings }
    }
}

/// What a command produced: text, JSON, and the exit code.
pub struct Report {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn new(code: i32, json: Value, text: String) -> Self {
        Self { code, json, text }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let written = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("JSON values serialize"))
            } else {
                write!(out, "{}", report.text)
            };
            match written {
                Ok(()) => report.code,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(command: &Command) -> CliResult<Report> {
    match command {
        Command::TorusQa { a, b, slope } => torus_qa(*a, *b, slope.as_deref()),
        Command::Moser { a, b, slope } => moser(*a, *b, slope),
        Command::MontesinosQa { spec } => montesinos_qa(spec),
        Command::FormalPropagate { seed, query, emit_derivation } => formal_propagate(seed, query, emit_derivation.as_deref()),
        Command::VerifyDerivation { seed, derivation } => verify_derivation_file(seed, derivation),
        Command::CertifyQa { pd, db, assume, limits, certificate } => {
            certify_qa(pd, db.as_deref(), assume.as_deref(), (*limits).into(), certificate.as_deref())
        }
        Command::VerifyCertificate { certificate, db } => verify_certificate_file(certificate, db.as_deref()),
        Command::ShortSlopes { mu, lambda, bound, systole } => short_slopes_cmd(mu, lambda, *bound, *systole),
        Command::Sweep(args) => sweep::run_sweep(args),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn verdict_code(positive: bool) -> i32 {
    if positive {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn qa_word(qa: bool) -> &'static str {
    if qa {
        "quasi-alternating"
    } else {
        "not quasi-alternating"
    }
}

fn torus_qa(a: i64, b: i64, slope: Option<&str>) -> CliResult<Report> {
    let k = TorusKnot::new(a, b)?;
    let t = qa_threshold(&k);
    let lmin = lspace_slope_min(&k);
    let mut json = json!({
        "knot": k.to_string(),
        "a": a,
        "b": b,
        "m": t.m,
        "n": t.n,
        "threshold": t.threshold.to_string(),
        "genus": k.genus(),
        "lspace_min": lmin.to_string(),
    });
    let mut text = format!("{k}\nthreshold  {}  (m = {}, n = {})\ngenus      {}\nL-space    p/q >= {}\n", t.threshold, t.m, t.n, k.genus(), lmin);
    let mut code = EXIT_OK;
    if let Some(s) = slope {
        let s: Slope = s.parse()?;
        let qa = is_qa_slope(&k, &s)?;
        let lspace = s.to_ratio().is_some_and(|v| v >= lmin.to_ratio().expect("finite"));
        let formal = formal_slopes_torus(&k, &s)?;
        json["slope"] = json!(s.to_string());
        json["quasi_alternating"] = json!(qa);
        json["lspace"] = json!(lspace);
        json["formal_lspace"] = json!(formal);
        text.push_str(&format!("{k}({s})  {}\n", qa_word(qa)));
        code = verdict_code(qa);
    }
    Ok(Report::new(code, json, text))
}

fn moser(a: i64, b: i64, slope: &str) -> CliResult<Report> {
    let k = TorusKnot::new(a, b)?;
    let s: Slope = slope.parse()?;
    let result = moser_surgery(&k, &s)?;
    let params = moser_params(&k);
    let json = json!({
        "knot": k.to_string(),
        "slope": s.to_string(),
        "c": params.c,
        "d": params.d,
        "result": serde_json::to_value(&result).expect("surgery result serializes"),
        "description": result.to_string(),
    });
    let text = format!("{k}({s}) = {result}\n");
    Ok(Report::new(EXIT_OK, json, text))
}

fn montesinos_qa(spec: &str) -> CliResult<Report> {
    let link: MontesinosLink = spec.parse()?;
    let n = normalize(&link);
    let qa = issa_qa(&n)?;
    let json = json!({
        "input": spec,
        "link": link.to_string(),
        "normalized": n.to_string(),
        "quasi_alternating": qa,
    });
    let text = format!("{link}\nnormalized  {n}\n{}\n", qa_word(qa));
    Ok(Report::new(verdict_code(qa), json, text))
}

/// An integer seed is `PositiveInteger`, anything else `PositiveSlope`.
pub fn parse_seed(text: &str) -> CliResult<FormalSeed> {
    let s: Slope = text.parse()?;
    Ok(if s.is_integer() { FormalSeed::PositiveInteger(s.p().clone()) } else { FormalSeed::PositiveSlope(s) })
}

fn formal_propagate(seed: &str, query: &str, emit: Option<&Path>) -> CliResult<Report> {
    let seed = parse_seed(seed)?;
    let q: Slope = query.parse()?;
    let outcome = propagate(&seed, &q)?;
    let mut json = json!({
        "seed": seed.slope().to_string(),
        "query": q.to_string(),
        "derived": outcome.derivation().is_some(),
    });
    let text = match &outcome {
        Propagation::Derived(d) => {
            json["steps"] = json!(d.len());
            json["derivation"] = serde_json::to_value(d).expect("derivation serializes");
            if let Some(path) = emit {
                write_file(path, &(serde_json::to_string_pretty(d).expect("derivation serializes") + "\n"))?;
                json["derivation_path"] = json!(path.display().to_string());
            }
            let mut t = format!("{q} is a formal L-space slope given seed {} ({} triad steps)\n", seed.slope(), d.len());
            for w in &d.witnesses {
                t.push_str(&format!("  {}  {:?}\n", w.target, w.rule));
            }
            t
        }
        Propagation::NotDerivable => format!("{q} is not derivable from seed {}\n", seed.slope()),
    };
    Ok(Report::new(verdict_code(outcome.derivation().is_some()), json, text))
}

fn verify_derivation_file(seed: &str, path: &Path) -> CliResult<Report> {
    let seed = parse_seed(seed)?;
    let d: Derivation = serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let result = check_derivation(&d, &seed);
    let json = json!({
        "seed": seed.slope().to_string(),
        "steps": d.len(),
        "valid": result.is_ok(),
        "failure": result.as_ref().err().map(|f| f.to_string()),
    });
    let text = match &result {
        Ok(()) => format!("valid derivation ({} steps)\n", d.len()),
        Err(f) => format!("invalid derivation: {f}\n"),
    };
    Ok(Report::new(verdict_code(result.is_ok()), json, text))
}

fn database(path: Option<&Path>) -> CliResult<QaDatabase> {
    let env = std::env::var_os(DB_ENV).map(PathBuf::from);
    match path.map(Path::to_path_buf).or(env) {
        Some(p) => {
            if !p.exists() {
                return Err(CliError::Input(format!("database {} does not exist", p.display())));
            }
            Ok(load_database(&p)?)
        }
        None => Ok(QaDatabase::new()),
    }
}

fn certify_qa(pd: &Path, db: Option<&Path>, assume: Option<&Path>, limits: SearchLimits, out: Option<&Path>) -> CliResult<Report> {
    let d = parse_pd(&read(pd)?)?;
    let db = database(db)?;
    let assumptions = match assume {
        Some(p) => load_assumptions(p)?,
        None => Vec::new(),
    };
    let det = determinant(&d);
    let outcome = certify(&d, &db, &assumptions, limits)?;
    let mut json = json!({ "det": det, "crossings": d.crossing_count() });
    let (code, text) = match &outcome {
        CertifyOutcome::CertifiedQa(cert) => {
            json["verdict"] = json!("QA");
            json["certificate"] = serde_json::to_value(cert).expect("certificate serializes");
            json["nodes"] = json!(cert.root.node_count());
            if let Some(path) = out {
                write_file(path, &(cert.to_json() + "\n"))?;
                json["certificate_path"] = json!(path.display().to_string());
            }
            (EXIT_OK, format!("quasi-alternating (det {det})\n{cert}"))
        }
        CertifyOutcome::Unknown(reason) => {
            json["verdict"] = json!("Unknown");
            json["reason"] = serde_json::to_value(reason).expect("reason serializes");
            (EXIT_NEGATIVE, format!("unknown (det {det}): {reason}\n"))
        }
    };
    Ok(Report::new(code, json, text))
}

fn verify_certificate_file(path: &Path, db: Option<&Path>) -> CliResult<Report> {
    let cert = Certificate::from_json(&read(path)?)?;
    let db = database(db)?;
    let result = check_certificate(&cert, &db);
    let json = match &result {
        Ok(r) => json!({ "valid": true, "det": cert.root.det, "database_hits": r.database_hits, "assumptions": r.assumptions }),
        Err(f) => json!({ "valid": false, "det": cert.root.det, "failure": f.to_string() }),
    };
    let text = match &result {
        Ok(r) if r.assumptions.is_empty() => "valid certificate\n".to_string(),
        Ok(r) => format!("valid certificate, assuming {}\n", r.assumptions.join(", ")),
        Err(f) => format!("invalid certificate: {f}\n"),
    };
    Ok(Report::new(verdict_code(result.is_ok()), json, text))
}

/// `re,im` or a bare real number.
pub fn parse_complex(text: &str) -> CliResult<Complex64> {
    let bad = || CliError::Input(format!("cannot read complex number {text:?}; expected re,im"));
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    let (re, im) = t.split_once(',').unwrap_or((t, "0"));
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

fn short_slopes_cmd(mu: &str, lambda: &str, bound: Option<f64>, systole: Option<f64>) -> CliResult<Report> {
    let c = CuspShape::new(parse_complex(mu)?, parse_complex(lambda)?)?;
    let bound = match (bound, systole) {
        (Some(b), _) if b.is_finite() && b > 0.0 => b,
        (Some(b), _) => return Err(CliError::Input(format!("bound must be positive, got {b}"))),
        (None, Some(s)) => fps_bound(s)?,
        (None, None) => unreachable!("clap requires one of --bound and --systole"),
    };
    let list = short_slopes(&c, bound);
    let json = json!({
        "bound": bound,
        "area": c.area(),
        "slopes": serde_json::to_value(&list).expect("slopes serialize"),
    });
    let mut text = format!("{} slopes with normalized length <= {bound}\n", list.len());
    for s in &list {
        text.push_str(&format!("{:>8}  {:.6}\n", format!("{}/{}", s.p, s.q), s.length));
    }
    Ok(Report::new(EXIT_OK, json, text))
}
