//! Bundled test diagrams: prime knots through 10 crossings and links through
//! 8 crossings, with their determinants and alternation flags as tabulated.

use serde::Deserialize;

use crate::diagram::{DiagramError, LinkDiagram, PdCode};

#[derive(Clone, Debug, Deserialize)]
pub struct FixtureDiagram {
    pub name: String,
    pub pd: Vec<[u32; 4]>,
    pub det: u64,
    pub alternating: bool,
}

impl FixtureDiagram {
    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        LinkDiagram::from_pd(&PdCode { crossings: self.pd.clone(), free_loops: 0 })
    }
}

#[derive(Deserialize)]
struct FixtureFile {
    diagrams: Vec<FixtureDiagram>,
}

const DIAGRAMS_JSON: &str = include_str!("../fixtures/diagrams.json");

pub fn diagrams() -> Vec<FixtureDiagram> {
    serde_json::from_str::<FixtureFile>(DIAGRAMS_JSON).expect("bundled fixture file parses").diagrams
}

/// A 13-crossing knot with one crossing whose smoothings are a tabulated
/// quasi-alternating 12-crossing knot and a determinant-6 link.
#[derive(Clone, Debug, Deserialize)]
pub struct SmoothingInstance {
    pub name: String,
    pub pd: Vec<[u32; 4]>,
    pub det: u64,
    pub split: [u64; 2],
    /// Name of the database entry for the large smoothing.
    pub seed: String,
}

impl SmoothingInstance {
    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        LinkDiagram::from_pd(&PdCode { crossings: self.pd.clone(), free_loops: 0 })
    }
}

#[derive(Deserialize)]
struct InstanceFile {
    instances: Vec<SmoothingInstance>,
}

pub fn thirteen_crossing_instances() -> Vec<SmoothingInstance> {
    serde_json::from_str::<InstanceFile>(include_str!("../fixtures/thm51.json"))
        .expect("bundled fixture file parses")
        .instances
}

/// CSV text of the seed database for [`thirteen_crossing_instances`].
pub const SEED_DATABASE_CSV: &str = include_str!("../fixtures/qa_seed.csv");

pub fn seed_database() -> crate::certify::QaDatabase {
    crate::certify::QaDatabase::from_csv_str(SEED_DATABASE_CSV).expect("bundled database validates")
}

/// Small Seifert fibered surgeries on torus knots whose branching sets are
/// not quasi-alternating, written `SFS[S2: (a1,b1) (a2,b2) (a3,b3)]`.
pub const NON_QA_SEIFERT_ROWS: [[(i64, i64); 3]; 8] = [
    [(2, 1), (5, 2), (7, -4)],
    [(2, 1), (5, 2), (8, -5)],
    [(2, 1), (7, 2), (8, -5)],
    [(3, 1), (5, 3), (7, -5)],
    [(2, 1), (8, 3), (9, -7)],
    [(2, 1), (5, 2), (12, -7)],
    [(2, 1), (7, 3), (11, -7)],
    [(2, 1), (8, 3), (9, -5)],
];
