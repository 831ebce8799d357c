use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{parse_pd, write_pd, DiagramError, LinkDiagram};

/// A relabeling-invariant name for a diagram, itself a valid PD string.
///
/// Two diagrams share a key exactly when they differ by renumbering arcs,
/// reordering crossings, rotating crossing tuples by two, and permuting
/// split pieces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagramKey(String);

impl DiagramKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        parse_pd(&self.0)
    }
}

impl fmt::Display for DiagramKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for DiagramKey {
    type Err = DiagramError;

    /// Parses any PD text and canonicalizes it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(canonical_form(&parse_pd(s)?))
    }
}

fn normalize_tuple(x: [u32; 4]) -> [u32; 4] {
    let r = [x[2], x[3], x[0], x[1]];
    x.min(r)
}

/// Labels a piece by breadth-first search from one arm.
fn encode_from(d: &LinkDiagram, start: (usize, usize)) -> Vec<[u32; 4]> {
    let mut entry: HashMap<usize, usize> = HashMap::new();
    let mut labels: HashMap<u32, u32> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    entry.insert(start.0, start.1);
    let mut out = Vec::new();
    while let Some((c, e)) = queue.pop_front() {
        let x = d.crossings()[c];
        for k in 0..4 {
            let arm = (e + k) % 4;
            let next = labels.len() as u32 + 1;
            labels.entry(x[arm]).or_insert(next);
            let (pc, pa) = d.partner((c, arm));
            if let std::collections::hash_map::Entry::Vacant(v) = entry.entry(pc) {
                v.insert(pa);
                queue.push_back((pc, pa));
            }
        }
        out.push(normalize_tuple(x.map(|l| labels[&l])));
    }
    out.sort_unstable();
    out
}

pub fn canonical_form(d: &LinkDiagram) -> DiagramKey {
    let mut best: Vec<Option<Vec<[u32; 4]>>> = vec![None; d.piece_count()];
    for c in 0..d.crossing_count() {
        let piece = d.piece_of(c);
        for i in 0..4 {
            let enc = encode_from(d, (c, i));
            let slot = &mut best[piece];
            if slot.as_ref().is_none_or(|b| enc < *b) {
                *slot = Some(enc);
            }
        }
    }
    let mut pieces: Vec<Vec<[u32; 4]>> = best.into_iter().flatten().collect();
    pieces.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut crossings = Vec::with_capacity(d.crossing_count());
    let mut offset = 0;
    for p in pieces {
        for x in &p {
            crossings.push(x.map(|l| l + offset));
        }
        offset += 2 * p.len() as u32;
    }
    let mut s = String::new();
    write_pd(&mut s, &crossings, d.free_loops()).expect("writing to a String");
    DiagramKey(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeling_and_reordering_invariance() {
        let a = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        // Labels l -> 7 - l, crossings listed in reverse.
        let b = parse_pd("PD[X(2,5,1,4), X(4,1,3,6), X(6,3,5,2)]").unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let rot = parse_pd("PD[X(2,5,1,4), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&rot));
    }

    #[test]
    fn key_round_trips() {
        let a = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3), X(7,10,8,9), X(9,8,10,7)] + U1").unwrap();
        let k = canonical_form(&a);
        let back = k.diagram().unwrap();
        assert_eq!(canonical_form(&back), k);
        assert_eq!(back.components(), a.components());
        assert_eq!(k.as_str().parse::<DiagramKey>().unwrap(), k);
    }

    #[test]
    fn mirror_differs() {
        let a = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        let m = parse_pd("PD[X(4,2,5,1), X(6,4,1,3), X(2,6,3,5)]").unwrap();
        assert_ne!(canonical_form(&a), canonical_form(&m));
    }

    #[test]
    fn unknot_key() {
        assert_eq!(canonical_form(&parse_pd("PD[]").unwrap()).as_str(), "PD[] + U1");
    }
}
