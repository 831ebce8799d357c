//! Quasi-alternating surgery slopes on torus knots, formal L-space slopes,
//! and the diagram machinery behind quasi-alternating certificates.
//!
//! All slope arithmetic is exact. Floating point appears only in [`cusp`].

pub mod certify;
pub mod cusp;
pub mod diagram;
pub mod error;
pub mod fixtures;
pub mod formal;
pub mod montesinos;
pub mod rationals;
pub mod torus;

pub use certify::{certify, crossing_order, load_database, verify_certificate, Certificate, CertifyOutcome, QaDatabase, SearchLimits};
pub use cusp::{fps_bound, normalized_length, short_slopes, six_theorem_slopes, CuspShape, ExactCuspShape};
pub use diagram::{canonical_form, determinant, parse_pd, reduce, smooth, DiagramKey, LinkDiagram, PdCode};
pub use error::{Error, Result};
pub use formal::{check_derivation, formal_slopes_torus, min_formal_slope_bound, propagate, verify_derivation, Derivation, FormalSeed, Propagation};
pub use montesinos::{issa_qa, normalize, qa_slope_via_pipeline, sfs_to_montesinos, MontesinosLink, Tangle};
pub use rationals::{distance, neg_cf_eval, neg_cf_expand, triad_partners, NegCf, Slope};
pub use torus::{is_qa_slope, lspace_slope_min, moser_params, moser_surgery, qa_threshold, Fiber, MoserParams, QaThreshold, SurgeryResult, TorusKnot};
