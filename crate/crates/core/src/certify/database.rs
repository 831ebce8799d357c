use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagram::{canonical_form, determinant, parse_pd, reduce, DiagramKey, LinkDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum DbVerdict {
    #[serde(rename = "QA")]
    Qa,
    #[serde(rename = "NQA")]
    Nqa,
}

/// One row of a database file.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DbRecord {
    pub name: String,
    pub verdict: DbVerdict,
    pub det: u64,
    /// PD text, `PD[X(...),...]` or JSON.
    pub pd: String,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Debug)]
pub struct DbEntry {
    pub record: DbRecord,
    /// Key of the reduced diagram and of its mirror image.
    pub keys: [DiagramKey; 2],
}

/// Known quasi-alternating and known non-quasi-alternating diagrams, looked up
/// by canonical key. Mirror images are matched too.
#[derive(Clone, Debug, Default)]
pub struct QaDatabase {
    entries: Vec<DbEntry>,
    by_key: HashMap<DiagramKey, usize>,
}

/// Key of the reduced diagram and of the reduced mirror.
pub(crate) fn lookup_keys(d: &LinkDiagram) -> [DiagramKey; 2] {
    let r = reduce(d);
    [canonical_form(&r), canonical_form(&r.mirror())]
}

impl QaDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates determinants and verdict consistency.
    pub fn from_records(records: impl IntoIterator<Item = DbRecord>) -> Result<Self> {
        let mut db = Self::new();
        for r in records {
            db.insert(r)?;
        }
        Ok(db)
    }

    pub fn insert(&mut self, record: DbRecord) -> Result<()> {
        let d = parse_pd(&record.pd).map_err(|e| Error::Database(format!("entry {}: {e}", record.name)))?;
        let computed = determinant(&d);
        if computed != record.det {
            return Err(Error::DeterminantMismatch { name: record.name, stored: record.det, computed });
        }
        let keys = lookup_keys(&d);
        for k in &keys {
            if let Some(&i) = self.by_key.get(k) {
                let other = &self.entries[i].record;
                if other.verdict != record.verdict {
                    return Err(Error::ConflictingVerdicts { first: other.name.clone(), second: record.name });
                }
            }
        }
        let index = self.entries.len();
        for k in &keys {
            self.by_key.entry(k.clone()).or_insert(index);
        }
        self.entries.push(DbEntry { record, keys });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[DbEntry] {
        &self.entries
    }

    pub fn lookup(&self, key: &DiagramKey) -> Option<&DbRecord> {
        self.by_key.get(key).map(|&i| &self.entries[i].record)
    }

    pub fn by_name(&self, name: &str) -> Option<&DbEntry> {
        self.entries.iter().find(|e| e.record.name == name)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::new());
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let records = reader
            .deserialize::<DbRecord>()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Database(e.to_string()))?;
        Self::from_records(records)
    }

    /// A list of records, or `{"entries": [...]}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::new());
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum File {
            List(Vec<JsonRecord>),
            Wrapped { entries: Vec<JsonRecord> },
        }
        let file: File = serde_json::from_str(text).map_err(|e| Error::Database(e.to_string()))?;
        let (File::List(v) | File::Wrapped { entries: v }) = file;
        Self::from_records(v.into_iter().map(JsonRecord::into_record))
    }
}

/// JSON rows may give `pd` as text or as a list of 4-tuples.
#[derive(Deserialize)]
struct JsonRecord {
    name: String,
    verdict: DbVerdict,
    det: u64,
    pd: serde_json::Value,
    #[serde(default)]
    source: String,
}

impl JsonRecord {
    fn into_record(self) -> DbRecord {
        let pd = match self.pd {
            serde_json::Value::String(s) => s,
            other => other.to_string(),
        };
        DbRecord { name: self.name, verdict: self.verdict, det: self.det, pd, source: self.source }
    }
}

/// Reads a CSV (`name,verdict,det,pd,source`) or JSON database; the format is
/// chosen by extension, defaulting to CSV.
pub fn load_database(path: impl AsRef<Path>) -> Result<QaDatabase> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        QaDatabase::from_json_str(&text)
    } else {
        QaDatabase::from_csv_str(&text)
    }
}

/// A caller-asserted quasi-alternating diagram.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub pd: String,
}

/// A JSON list of `{"name", "pd"}` objects (`pd` as text or 4-tuples).
pub fn parse_assumptions(text: &str) -> Result<Vec<Assumption>> {
    #[derive(Deserialize)]
    struct Raw {
        name: String,
        pd: serde_json::Value,
    }
    let raw: Vec<Raw> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("assumptions: {e}")))?;
    raw.into_iter()
        .map(|r| {
            let pd = match r.pd {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            parse_pd(&pd).map_err(|e| Error::Parse(format!("assumption {}: {e}", r.name)))?;
            Ok(Assumption { name: r.name, pd })
        })
        .collect()
}

pub fn load_assumptions(path: impl AsRef<Path>) -> Result<Vec<Assumption>> {
    parse_assumptions(&std::fs::read_to_string(path)?)
}
