//! Python module `qaslopes`. Slopes cross the boundary as strings (`"p/q"`,
//! `"n"` or `"(p,q)"`), big integers as Python ints, and certificates and
//! derivations as JSON text.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qaslopes_core::certify::{self, CertifyOutcome, SearchLimits};
use qaslopes_core::diagram::{self, Resolution, SmoothingSite};
use qaslopes_core::formal::{self, Derivation, FormalSeed, Propagation};
use qaslopes_core::rationals::{self, Slope};
use qaslopes_core::{cusp, fixtures, montesinos, torus};

create_exception!(qaslopes, QaSlopesError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    QaSlopesError::new_err(e.to_string())
}

fn slope(text: &str) -> PyResult<Slope> {
    text.parse().map_err(err)
}

fn seed(text: &str) -> PyResult<FormalSeed> {
    let s = slope(text)?;
    Ok(if s.is_integer() { FormalSeed::PositiveInteger(s.p().clone()) } else { FormalSeed::PositiveSlope(s) })
}

#[pyclass(name = "TorusKnot", module = "qaslopes", frozen)]
struct PyTorusKnot(torus::TorusKnot);

#[pymethods]
impl PyTorusKnot {
    #[new]
    fn new(a: i64, b: i64) -> PyResult<Self> {
        torus::TorusKnot::new(a, b).map(Self).map_err(err)
    }

    #[getter]
    fn a(&self) -> i64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> i64 {
        self.0.b()
    }

    #[getter]
    fn genus(&self) -> i64 {
        self.0.genus()
    }

    /// `(threshold, m, n)`; slopes strictly above the threshold are quasi-alternating.
    fn qa_threshold(&self) -> (String, i64, i64) {
        let t = torus::qa_threshold(&self.0);
        (t.threshold.to_string(), t.m, t.n)
    }

    fn is_qa_slope(&self, s: &str) -> PyResult<bool> {
        torus::is_qa_slope(&self.0, &slope(s)?).map_err(err)
    }

    fn qa_slope_via_pipeline(&self, s: &str) -> PyResult<bool> {
        montesinos::qa_slope_via_pipeline(&self.0, &slope(s)?).map_err(err)
    }

    /// Moser's description of the surgery, as text.
    fn moser_surgery(&self, s: &str) -> PyResult<String> {
        torus::moser_surgery(&self.0, &slope(s)?).map(|r| r.to_string()).map_err(err)
    }

    fn lspace_slope_min(&self) -> String {
        torus::lspace_slope_min(&self.0).to_string()
    }

    fn __repr__(&self) -> String {
        format!("TorusKnot({}, {})", self.0.a(), self.0.b())
    }
}

/// Negative continued fraction coefficients of a slope greater than 1.
#[pyfunction]
fn neg_cf_expand(s: &str) -> PyResult<Vec<BigInt>> {
    rationals::neg_cf_expand(&slope(s)?).map(|cf| cf.coeffs().to_vec()).map_err(err)
}

#[pyfunction]
fn triad_partners(s: &str) -> PyResult<(String, String)> {
    let (a, b) = rationals::triad_partners(&slope(s)?).map_err(err)?;
    Ok((a.to_string(), b.to_string()))
}

#[pyfunction]
fn distance(s1: &str, s2: &str) -> PyResult<BigInt> {
    Ok(rationals::distance(&slope(s1)?, &slope(s2)?))
}

/// `(normalized form, verdict)` for `SFS[S2:...]` or `M(e; ...)` input.
#[pyfunction]
fn montesinos_qa(spec: &str) -> PyResult<(String, bool)> {
    let link: montesinos::MontesinosLink = spec.parse().map_err(err)?;
    let n = montesinos::normalize(&link);
    let qa = montesinos::issa_qa(&n).map_err(err)?;
    Ok((n.to_string(), qa))
}

/// Derivation JSON, or `None` when the triad rules do not reach the query.
#[pyfunction]
fn propagate(seed_slope: &str, query: &str) -> PyResult<Option<String>> {
    match formal::propagate(&seed(seed_slope)?, &slope(query)?).map_err(err)? {
        Propagation::Derived(d) => Ok(Some(serde_json::to_string(&d).map_err(err)?)),
        Propagation::NotDerivable => Ok(None),
    }
}

#[pyfunction]
fn verify_derivation(derivation_json: &str, seed_slope: &str) -> PyResult<bool> {
    let d: Derivation = serde_json::from_str(derivation_json).map_err(err)?;
    Ok(formal::verify_derivation(&d, &seed(seed_slope)?))
}

/// The lower bound on positive formal L-space slopes for a genus, as a float.
#[pyfunction]
fn min_formal_slope_bound(genus: i64) -> PyResult<f64> {
    formal::min_formal_slope_bound(genus).map(|b| b.approx()).map_err(err)
}

#[pyclass(name = "LinkDiagram", module = "qaslopes", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLinkDiagram(diagram::LinkDiagram);

#[pymethods]
impl PyLinkDiagram {
    /// `PD[X(...),...]` text or JSON.
    #[new]
    fn new(pd: &str) -> PyResult<Self> {
        diagram::parse_pd(pd).map(Self).map_err(err)
    }

    fn determinant(&self) -> u64 {
        diagram::determinant(&self.0)
    }

    #[getter]
    fn crossing_count(&self) -> usize {
        self.0.crossing_count()
    }

    #[getter]
    fn crossings(&self) -> Vec<[u32; 4]> {
        self.0.crossings().to_vec()
    }

    #[getter]
    fn components(&self) -> usize {
        self.0.components()
    }

    fn is_alternating(&self) -> bool {
        self.0.is_alternating()
    }

    fn canonical_key(&self) -> String {
        diagram::canonical_form(&self.0).as_str().to_string()
    }

    fn mirror(&self) -> Self {
        Self(self.0.mirror())
    }

    fn reduce(&self) -> Self {
        Self(diagram::reduce(&self.0))
    }

    /// Resolution 0 joins arms 0-1 and 2-3, resolution 1 joins 0-3 and 1-2.
    fn smooth(&self, crossing: usize, resolution: u8) -> PyResult<Self> {
        let resolution = match resolution {
            0 => Resolution::Zero,
            1 => Resolution::One,
            r => return Err(err(format!("resolution must be 0 or 1, got {r}"))),
        };
        diagram::smooth(&self.0, SmoothingSite { crossing, resolution }).map(Self).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("LinkDiagram({:?})", self.0.to_string())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "QaDatabase", module = "qaslopes", frozen)]
struct PyQaDatabase(certify::QaDatabase);

#[pymethods]
impl PyQaDatabase {
    #[new]
    #[pyo3(signature = (csv_text = ""))]
    fn new(csv_text: &str) -> PyResult<Self> {
        certify::QaDatabase::from_csv_str(csv_text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        certify::QaDatabase::from_json_str(text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        certify::load_database(path).map(Self).map_err(err)
    }

    /// The bundled entries for the 12-crossing smoothings of the 13-crossing fixtures.
    #[staticmethod]
    fn seed() -> Self {
        Self(fixtures::seed_database())
    }

    fn names(&self) -> Vec<String> {
        self.0.entries().iter().map(|e| e.record.name.clone()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// `("QA", certificate_json)` or `("Unknown", reason)`.
#[pyfunction]
#[pyo3(signature = (d, db = None, max_depth = 16, max_nodes = 100_000, max_crossings = 20))]
fn certify_qa(
    py: Python<'_>,
    d: &PyLinkDiagram,
    db: Option<&PyQaDatabase>,
    max_depth: usize,
    max_nodes: usize,
    max_crossings: usize,
) -> PyResult<(String, String)> {
    let empty = certify::QaDatabase::new();
    let db = db.map_or(&empty, |x| &x.0);
    let limits = SearchLimits { max_depth, max_nodes, max_crossings };
    let diagram = d.0.clone();
    let outcome = py.detach(|| certify::certify(&diagram, db, &[], limits)).map_err(err)?;
    Ok(match outcome {
        CertifyOutcome::CertifiedQa(c) => ("QA".into(), c.to_json()),
        CertifyOutcome::Unknown(r) => ("Unknown".into(), r.to_string()),
    })
}

#[pyfunction]
#[pyo3(signature = (certificate_json, db = None))]
fn verify_certificate(certificate_json: &str, db: Option<&PyQaDatabase>) -> PyResult<bool> {
    let cert = certify::Certificate::from_json(certificate_json).map_err(err)?;
    let empty = certify::QaDatabase::new();
    Ok(certify::verify_certificate(&cert, db.map_or(&empty, |x| &x.0)))
}

/// `[(p, q, normalized_length), ...]`, shortest first.
#[pyfunction]
fn short_slopes(mu: Complex64, lam: Complex64, bound: f64) -> PyResult<Vec<(i64, i64, f64)>> {
    let c = cusp::CuspShape::new(mu, lam).map_err(err)?;
    Ok(cusp::short_slopes(&c, bound).into_iter().map(|s| (s.p, s.q, s.length)).collect())
}

#[pyfunction]
fn normalized_length(mu: Complex64, lam: Complex64, s: &str) -> PyResult<f64> {
    let c = cusp::CuspShape::new(mu, lam).map_err(err)?;
    Ok(c.normalized_length(&slope(s)?))
}

#[pyfunction]
fn fps_bound(systole: f64) -> PyResult<f64> {
    cusp::fps_bound(systole).map_err(err)
}

#[pymodule]
fn qaslopes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QaSlopesError", m.py().get_type::<QaSlopesError>())?;
    m.add_class::<PyTorusKnot>()?;
    m.add_class::<PyLinkDiagram>()?;
    m.add_class::<PyQaDatabase>()?;
    m.add_function(wrap_pyfunction!(neg_cf_expand, m)?)?;
    m.add_function(wrap_pyfunction!(triad_partners, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(montesinos_qa, m)?)?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_derivation, m)?)?;
    m.add_function(wrap_pyfunction!(min_formal_slope_bound, m)?)?;
    m.add_function(wrap_pyfunction!(certify_qa, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(short_slopes, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_length, m)?)?;
    m.add_function(wrap_pyfunction!(fps_bound, m)?)?;
    Ok(())
}
