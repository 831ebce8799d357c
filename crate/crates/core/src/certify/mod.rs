//! Recursive quasi-alternating certification by determinant-additive smoothings.
//!
//! Every node of a search works on the diagram spelled by its canonical key,
//! so crossing indices stored in a certificate refer to that diagram.

mod database;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{canonical_form, determinant, parse_pd, reduce, smooth, DiagramKey, LinkDiagram, Resolution, SmoothingSite};
use crate::error::Result;

pub use database::{load_assumptions, load_database, parse_assumptions, Assumption, DbEntry, DbRecord, DbVerdict, QaDatabase};
use database::lookup_keys;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub max_nodes: usize,
    pub max_crossings: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_depth: 16, max_nodes: 100_000, max_crossings: 20 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum NodeVerdict {
    #[serde(rename = "QA")]
    Qa,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    Unknot,
    AlternatingNonSplit,
    DatabaseHit { name: String },
    Assumption { name: String },
    Smoothing { site: usize, child0: Box<CertNode>, child1: Box<CertNode> },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertNode {
    pub key: DiagramKey,
    pub det: u64,
    pub verdict: NodeVerdict,
    pub justification: Justification,
}

impl CertNode {
    pub fn children(&self) -> Option<(&CertNode, &CertNode)> {
        match &self.justification {
            Justification::Smoothing { child0, child1, .. } => Some((child0, child1)),
            _ => None,
        }
    }

    pub fn leaves(&self) -> Vec<&CertNode> {
        match self.children() {
            Some((a, b)) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
            None => vec![self],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().map_or(0, |(a, b)| a.node_count() + b.node_count())
    }

    pub fn depth(&self) -> usize {
        self.children().map_or(0, |(a, b)| 1 + a.depth().max(b.depth()))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate {
    pub root: CertNode,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Certificate {
    /// Indented tree, one node per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(n: &CertNode, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{:indent$}det {} ", "", n.det)?;
            match &n.justification {
                Justification::Unknot => writeln!(f, "unknot")?,
                Justification::AlternatingNonSplit => writeln!(f, "alternating, non-split  {}", n.key)?,
                Justification::DatabaseHit { name } => writeln!(f, "database {name}  {}", n.key)?,
                Justification::Assumption { name } => writeln!(f, "assumed {name}  {}", n.key)?,
                Justification::Smoothing { site, child0, child1 } => {
                    writeln!(f, "= {} + {} at crossing {site}  {}", child0.det, child1.det, n.key)?;
                    walk(child0, indent + 2, f)?;
                    walk(child1, indent + 2, f)?;
                }
            }
            Ok(())
        }
        walk(&self.root, 0, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnknownReason {
    /// No crossing splits the determinant into two positive parts.
    NoAdditiveCrossing { key: DiagramKey, det: u64 },
    /// A database entry marks the diagram as not quasi-alternating.
    KnownNonQa { name: String },
    DepthLimit { depth: usize },
    NodeLimit { nodes: usize },
    CrossingLimit { crossings: usize },
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::NoAdditiveCrossing { key, det } => {
                write!(f, "no crossing of {key} (det {det}) has smoothings with positive determinants adding to det")
            }
            UnknownReason::KnownNonQa { name } => write!(f, "matches non-quasi-alternating entry {name}"),
            UnknownReason::DepthLimit { depth } => write!(f, "depth limit {depth} reached"),
            UnknownReason::NodeLimit { nodes } => write!(f, "node limit {nodes} reached"),
            UnknownReason::CrossingLimit { crossings } => write!(f, "diagram has more than {crossings} crossings"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CertifyOutcome {
    CertifiedQa(Certificate),
    /// Never a negative verdict.
    Unknown(UnknownReason),
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifyOutcome::CertifiedQa(c) => Some(c),
            CertifyOutcome::Unknown(_) => None,
        }
    }
}

/// A crossing whose two smoothings have positive determinants summing to the parent's.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AdditiveCrossing {
    pub crossing: usize,
    pub dets: [u64; 2],
    /// Crossing numbers of the reduced smoothings.
    pub crossings: [usize; 2],
}

impl AdditiveCrossing {
    pub fn sites(&self) -> [SmoothingSite; 2] {
        Resolution::BOTH.map(|resolution| SmoothingSite { crossing: self.crossing, resolution })
    }
}

fn additive_children(d: &LinkDiagram, det: u64) -> Vec<(AdditiveCrossing, [LinkDiagram; 2])> {
    let mut out = Vec::new();
    for c in 0..d.crossing_count() {
        let kids = Resolution::BOTH.map(|resolution| {
            reduce(&smooth(d, SmoothingSite { crossing: c, resolution }).expect("crossing index in range"))
        });
        let dets = [determinant(&kids[0]), determinant(&kids[1])];
        if dets[0] >= 1 && dets[1] >= 1 && dets[0] + dets[1] == det {
            let crossings = [kids[0].crossing_count(), kids[1].crossing_count()];
            out.push((AdditiveCrossing { crossing: c, dets, crossings }, kids));
        }
    }
    out.sort_by_key(|(a, _)| (a.crossings[0] + a.crossings[1], a.crossing));
    out
}

/// Crossings passing the determinant filter, fewest reduced child crossings first.
pub fn crossing_order(d: &LinkDiagram) -> Vec<AdditiveCrossing> {
    additive_children(d, determinant(d)).into_iter().map(|(a, _)| a).collect()
}

/// Leaf rule shared by the search and the verifier.
fn is_alternating_leaf(d: &LinkDiagram, det: u64) -> bool {
    d.crossing_count() >= 1 && d.free_loops() == 0 && d.piece_count() == 1 && d.is_alternating() && det >= 1
}

enum Memo {
    Qa(CertNode),
    /// Failed with this much depth still available.
    Unknown(usize),
}

struct Search<'a> {
    db: &'a QaDatabase,
    assumed: HashMap<DiagramKey, String>,
    limits: SearchLimits,
    memo: HashMap<DiagramKey, Memo>,
    nodes: usize,
    first_failure: Option<UnknownReason>,
}

struct Abort(UnknownReason);

impl Search<'_> {
    fn fail(&mut self, reason: UnknownReason) -> std::result::Result<Option<CertNode>, Abort> {
        self.first_failure.get_or_insert(reason);
        Ok(None)
    }

    /// A reduced diagram that is a leaf without further search.
    fn closes_at_once(&self, d: &LinkDiagram) -> bool {
        if d.is_trivial_unknot() || is_alternating_leaf(d, determinant(d)) {
            return true;
        }
        let keys = [canonical_form(d), canonical_form(&d.mirror())];
        keys.iter().any(|k| self.assumed.contains_key(k) || self.db.lookup(k).is_some_and(|r| r.verdict == DbVerdict::Qa))
    }

    fn visit(&mut self, d: &LinkDiagram, depth: usize) -> std::result::Result<Option<CertNode>, Abort> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Abort(UnknownReason::NodeLimit { nodes: self.limits.max_nodes }));
        }
        let key = canonical_form(&reduce(d));
        let remaining = self.limits.max_depth.saturating_sub(depth);
        match self.memo.get(&key) {
            Some(Memo::Qa(node)) => return Ok(Some(node.clone())),
            Some(Memo::Unknown(r)) if *r >= remaining => return Ok(None),
            _ => {}
        }
        let d = key.diagram().expect("canonical keys parse");
        let det = determinant(&d);
        let leaf = |justification| CertNode { key: key.clone(), det, verdict: NodeVerdict::Qa, justification };

        let found = if d.is_trivial_unknot() {
            Some(leaf(Justification::Unknot))
        } else if is_alternating_leaf(&d, det) {
            Some(leaf(Justification::AlternatingNonSplit))
        } else {
            let keys = [key.clone(), canonical_form(&d.mirror())];
            if let Some(name) = keys.iter().find_map(|k| self.assumed.get(k)) {
                Some(leaf(Justification::Assumption { name: name.clone() }))
            } else if let Some(rec) = keys.iter().find_map(|k| self.db.lookup(k)) {
                match rec.verdict {
                    DbVerdict::Qa => Some(leaf(Justification::DatabaseHit { name: rec.name.clone() })),
                    DbVerdict::Nqa => {
                        let name = rec.name.clone();
                        self.memo.insert(key, Memo::Unknown(usize::MAX));
                        return self.fail(UnknownReason::KnownNonQa { name });
                    }
                }
            } else {
                None
            }
        };
        if let Some(node) = found {
            self.memo.insert(key, Memo::Qa(node.clone()));
            return Ok(Some(node));
        }

        if d.crossing_count() > self.limits.max_crossings {
            self.memo.insert(key, Memo::Unknown(usize::MAX));
            return self.fail(UnknownReason::CrossingLimit { crossings: self.limits.max_crossings });
        }
        if remaining == 0 {
            self.memo.insert(key, Memo::Unknown(0));
            return self.fail(UnknownReason::DepthLimit { depth: self.limits.max_depth });
        }
        let mut candidates = additive_children(&d, det);
        // Stable: crossings with children that close at once go first.
        candidates.sort_by_key(|(_, kids)| std::cmp::Reverse(kids.iter().filter(|k| self.closes_at_once(k)).count()));
        if candidates.is_empty() {
            self.memo.insert(key.clone(), Memo::Unknown(usize::MAX));
            return self.fail(UnknownReason::NoAdditiveCrossing { key, det });
        }
        for (choice, [k0, k1]) in candidates {
            let Some(c0) = self.visit(&k0, depth + 1)? else { continue };
            let Some(c1) = self.visit(&k1, depth + 1)? else { continue };
            let node = CertNode {
                key: key.clone(),
                det,
                verdict: NodeVerdict::Qa,
                justification: Justification::Smoothing {
                    site: choice.crossing,
                    child0: Box::new(c0),
                    child1: Box::new(c1),
                },
            };
            self.memo.insert(key, Memo::Qa(node.clone()));
            return Ok(Some(node));
        }
        self.memo.insert(key, Memo::Unknown(remaining));
        Ok(None)
    }
}

/// Searches for a quasi-alternating certificate for `d`.
pub fn certify(d: &LinkDiagram, db: &QaDatabase, assumptions: &[Assumption], limits: SearchLimits) -> Result<CertifyOutcome> {
    let mut assumed = HashMap::new();
    for a in assumptions {
        let [k, _] = lookup_keys(&parse_pd(&a.pd)?);
        assumed.insert(k, a.name.clone());
    }
    let mut search = Search { db, assumed, limits, memo: HashMap::new(), nodes: 0, first_failure: None };
    Ok(match search.visit(d, 0) {
        Ok(Some(root)) => CertifyOutcome::CertifiedQa(Certificate { root }),
        Ok(None) => CertifyOutcome::Unknown(search.first_failure.expect("failed searches record a reason")),
        Err(Abort(reason)) => CertifyOutcome::Unknown(reason),
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyFailure {
    pub key: DiagramKey,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.reason)
    }
}

/// What a successful check relied on beyond its own arithmetic.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VerifyReport {
    pub assumptions: Vec<String>,
    pub database_hits: Vec<String>,
}

/// Recomputes every node from its key alone.
pub fn check_certificate(cert: &Certificate, db: &QaDatabase) -> std::result::Result<VerifyReport, VerifyFailure> {
    let mut report = VerifyReport::default();
    check_node(&cert.root, db, &mut report)?;
    Ok(report)
}

fn check_node(n: &CertNode, db: &QaDatabase, report: &mut VerifyReport) -> std::result::Result<(), VerifyFailure> {
    let fail = |reason: String| VerifyFailure { key: n.key.clone(), reason };
    let d = parse_pd(n.key.as_str()).map_err(|e| fail(format!("key does not parse: {e}")))?;
    if canonical_form(&d) != n.key {
        return Err(fail("key is not in canonical form".into()));
    }
    let det = determinant(&d);
    if det != n.det {
        return Err(fail(format!("stored det {} but the diagram has det {det}", n.det)));
    }
    if n.verdict != NodeVerdict::Qa {
        return Err(fail("node is not marked QA".into()));
    }
    match &n.justification {
        Justification::Unknot => {
            if !d.is_trivial_unknot() {
                return Err(fail("not the crossingless unknot".into()));
            }
        }
        Justification::AlternatingNonSplit => {
            if !is_alternating_leaf(&d, det) {
                return Err(fail("not a connected alternating diagram".into()));
            }
        }
        Justification::DatabaseHit { name } => {
            let entry = db.by_name(name).ok_or_else(|| fail(format!("no database entry named {name}")))?;
            if entry.record.verdict != DbVerdict::Qa {
                return Err(fail(format!("database entry {name} is not QA")));
            }
            let keys = lookup_keys(&d);
            if !entry.keys.iter().any(|k| keys.contains(k)) {
                return Err(fail(format!("diagram does not match database entry {name}")));
            }
            report.database_hits.push(name.clone());
        }
        Justification::Assumption { name } => report.assumptions.push(name.clone()),
        Justification::Smoothing { site, child0, child1 } => {
            if *site >= d.crossing_count() {
                return Err(fail(format!("crossing {site} out of range")));
            }
            for (child, resolution) in [(child0, Resolution::Zero), (child1, Resolution::One)] {
                let s = smooth(&d, SmoothingSite { crossing: *site, resolution }).map_err(|e| fail(e.to_string()))?;
                if canonical_form(&reduce(&s)) != child.key {
                    return Err(fail(format!("smoothing {resolution:?} at crossing {site} does not give {}", child.key)));
                }
            }
            if child0.det < 1 || child1.det < 1 || child0.det + child1.det != det {
                return Err(fail(format!("{det} != {} + {}", child0.det, child1.det)));
            }
            check_node(child0, db, report)?;
            check_node(child1, db, report)?;
        }
    }
    Ok(())
}

pub fn verify_certificate(cert: &Certificate, db: &QaDatabase) -> bool {
    check_certificate(cert, db).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]";

    fn trefoil_cert() -> Certificate {
        let d = parse_pd(TREFOIL).unwrap();
        match certify(&d, &QaDatabase::new(), &[], SearchLimits::default()).unwrap() {
            CertifyOutcome::CertifiedQa(c) => c,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trefoil_is_an_alternating_leaf() {
        let c = trefoil_cert();
        assert_eq!(c.root.det, 3);
        assert_eq!(c.root.justification, Justification::AlternatingNonSplit);
        assert!(verify_certificate(&c, &QaDatabase::new()));
    }

    #[test]
    fn trefoil_crossing_order() {
        let t = parse_pd(TREFOIL).unwrap();
        let order = crossing_order(&t);
        assert_eq!(order.len(), 3);
        for a in &order {
            let mut dets = a.dets;
            dets.sort();
            assert_eq!(dets, [1, 2]);
        }
        let hopf = parse_pd("PD[X(1,4,2,3), X(3,2,4,1)]").unwrap();
        assert!(crossing_order(&hopf).iter().all(|a| a.dets == [1, 1]));
        assert_eq!(crossing_order(&hopf).len(), 2);
        let split = parse_pd("PD[X(1,4,2,3), X(3,2,4,1)] + U1").unwrap();
        assert!(crossing_order(&split).is_empty());
    }

    /// Root node forced through a smoothing by hand, as the search would build it
    /// for a diagram whose root is not a leaf.
    fn manual_trefoil_smoothing() -> Certificate {
        let key = canonical_form(&parse_pd(TREFOIL).unwrap());
        let d = key.diagram().unwrap();
        let kids = Resolution::BOTH.map(|r| reduce(&smooth(&d, SmoothingSite { crossing: 0, resolution: r }).unwrap()));
        let node = |k: &LinkDiagram| {
            let det = determinant(k);
            let justification =
                if k.is_trivial_unknot() { Justification::Unknot } else { Justification::AlternatingNonSplit };
            CertNode { key: canonical_form(k), det, verdict: NodeVerdict::Qa, justification }
        };
        Certificate {
            root: CertNode {
                key,
                det: 3,
                verdict: NodeVerdict::Qa,
                justification: Justification::Smoothing {
                    site: 0,
                    child0: Box::new(node(&kids[0])),
                    child1: Box::new(node(&kids[1])),
                },
            },
        }
    }

    #[test]
    fn verification_catches_edits() {
        let db = QaDatabase::new();
        let good = manual_trefoil_smoothing();
        assert!(verify_certificate(&good, &db), "{:?}", check_certificate(&good, &db));
        let mut dets: Vec<u64> = good.root.leaves().iter().map(|l| l.det).collect();
        dets.sort();
        assert_eq!(dets, vec![1, 2]);

        let mut bad = good.clone();
        if let Justification::Smoothing { child0, child1, .. } = &mut bad.root.justification {
            let c = if child0.det == 2 { child0 } else { child1 };
            c.det = 3;
        }
        assert!(!verify_certificate(&bad, &db));

        let mut ghost = good.clone();
        if let Justification::Smoothing { child0, .. } = &mut ghost.root.justification {
            child0.justification = Justification::DatabaseHit { name: "missing".into() };
        }
        assert!(!verify_certificate(&ghost, &db));
    }

    #[test]
    fn json_round_trip() {
        let c = manual_trefoil_smoothing();
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
        assert!(c.to_string().contains("= "));
    }

    #[test]
    fn split_diagram_is_unknown() {
        let d = parse_pd("PD[X(1,4,2,3), X(3,2,4,1)] + U1").unwrap();
        let out = certify(&d, &QaDatabase::new(), &[], SearchLimits::default()).unwrap();
        assert!(matches!(out, CertifyOutcome::Unknown(UnknownReason::NoAdditiveCrossing { det: 0, .. })));
    }
}
