//! Planar-diagram (PD) codes and the combinatorics built on them.
//!
//! A crossing `X(a,b,c,d)` lists its four arc labels counterclockwise,
//! starting at an under-strand arm. Positions 0 and 2 are always the
//! under-strand and positions 1 and 3 the over-strand. Strand orientation is
//! never used, so rotating a tuple by two positions gives the same crossing.
//! Crossingless components are tracked by a separate free-loop counter.

mod canonical;
mod goeritz;
mod moves;
mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::{canonical_form, DiagramKey};
pub use goeritz::{determinant, goeritz_matrix, integer_determinant, Color};
pub use moves::{reduce, smooth, Resolution, SmoothingSite};
pub use parse::parse_pd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("PD syntax: {0}")]
    Syntax(String),
    #[error("arc label {label} occurs {count} times; every label must occur exactly twice")]
    LabelMultiplicity { label: u32, count: usize },
    #[error("arc labels must be positive")]
    NonPositiveLabel,
    #[error("diagram is not planar: {0}")]
    NonPlanar(String),
    #[error("a diagram needs at least one crossing or one free loop")]
    Empty,
    #[error("crossing index {index} out of range for a diagram with {crossings} crossings")]
    InvalidSite { index: usize, crossings: usize },
}

/// A position on a crossing: `(crossing index, arm 0..4)`.
pub(crate) type Arm = (usize, usize);

/// A validated link diagram.
///
/// Faces are stored as corners: corner `(c, i)` is the region between arm
/// `i` and arm `i + 1` of crossing `c`.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    free_loops: u32,
    partner: Vec<[Arm; 4]>,
    corner_face: Vec<[usize; 4]>,
    face_count: usize,
    face_color: Vec<u8>,
    piece_of: Vec<usize>,
    pieces: usize,
    components: usize,
}

/// The plain data of a diagram, used for JSON input and output.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
    #[serde(default)]
    pub free_loops: u32,
}

impl LinkDiagram {
    /// Validates the arc structure and computes faces, coloring and components.
    ///
    /// A code with no crossings and no free loops is read as the unknot.
    pub fn new(crossings: Vec<[u32; 4]>, free_loops: u32) -> Result<Self, DiagramError> {
        let free_loops = if crossings.is_empty() && free_loops == 0 { 1 } else { free_loops };
        let mut ends: HashMap<u32, Vec<Arm>> = HashMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (i, &label) in x.iter().enumerate() {
                if label == 0 {
                    return Err(DiagramError::NonPositiveLabel);
                }
                ends.entry(label).or_default().push((c, i));
            }
        }
        let mut labels: Vec<_> = ends.iter().collect();
        labels.sort();
        for (&label, arms) in labels {
            if arms.len() != 2 {
                return Err(DiagramError::LabelMultiplicity { label, count: arms.len() });
            }
        }
        let mut partner = vec![[(0, 0); 4]; crossings.len()];
        for arms in ends.values() {
            let (a, b) = (arms[0], arms[1]);
            partner[a.0][a.1] = b;
            partner[b.0][b.1] = a;
        }

        // Crossings joined by arcs form the connected pieces.
        let n = crossings.len();
        let mut uf = UnionFind::new(n);
        for (c, row) in partner.iter().enumerate() {
            for &(d, _) in row {
                uf.union(c, d);
            }
        }
        let (piece_of, pieces) = uf.classes();

        // Faces: from corner (c, i) leave along arm i + 1 and take the corner
        // on the right at the far end.
        const UNSET: usize = usize::MAX;
        let mut corner_face = vec![[UNSET; 4]; n];
        let mut face_count = 0;
        let mut faces_per_piece = vec![0usize; pieces];
        for c in 0..n {
            for i in 0..4 {
                if corner_face[c][i] != UNSET {
                    continue;
                }
                let (mut cc, mut ci) = (c, i);
                while corner_face[cc][ci] == UNSET {
                    corner_face[cc][ci] = face_count;
                    (cc, ci) = partner[cc][(ci + 1) % 4];
                }
                if (cc, ci) != (c, i) {
                    return Err(DiagramError::NonPlanar("face traversal did not close".into()));
                }
                faces_per_piece[piece_of[c]] += 1;
                face_count += 1;
            }
        }
        let mut crossings_per_piece = vec![0usize; pieces];
        for c in 0..n {
            crossings_per_piece[piece_of[c]] += 1;
        }
        for (piece, (&v, &f)) in crossings_per_piece.iter().zip(&faces_per_piece).enumerate() {
            // V - E + F = 2 with E = 2V.
            if f != v + 2 {
                return Err(DiagramError::NonPlanar(format!(
                    "piece {piece} has {v} crossings and {f} faces; expected {} faces",
                    v + 2
                )));
            }
        }

        // Corner (c, i) gets color (i + flip[c]) mod 2; all corners of a face agree.
        let mut flip = vec![u8::MAX; n];
        for root in 0..n {
            if flip[root] != u8::MAX {
                continue;
            }
            flip[root] = 0;
            let mut stack = vec![root];
            while let Some(c) = stack.pop() {
                for i in 0..4 {
                    let (d, j) = partner[c][(i + 1) % 4];
                    let want = ((i + j) as u8 + flip[c]) % 2;
                    if flip[d] == u8::MAX {
                        flip[d] = want;
                        stack.push(d);
                    } else if flip[d] != want {
                        return Err(DiagramError::NonPlanar("no checkerboard coloring".into()));
                    }
                }
            }
        }
        let mut face_color = vec![0u8; face_count];
        for c in 0..n {
            for i in 0..4 {
                face_color[corner_face[c][i]] = (i as u8 + flip[c]) % 2;
            }
        }

        let mut strands = UnionFind::new(4 * n);
        for c in 0..n {
            for i in 0..4 {
                let (d, j) = partner[c][i];
                strands.union(4 * c + i, 4 * d + j);
            }
            strands.union(4 * c, 4 * c + 2);
            strands.union(4 * c + 1, 4 * c + 3);
        }
        let components = strands.classes().1 + free_loops as usize;

        Ok(Self {
            crossings,
            free_loops,
            partner,
            corner_face,
            face_count,
            face_color,
            piece_of,
            pieces,
            components,
        })
    }

    pub fn from_pd(pd: &PdCode) -> Result<Self, DiagramError> {
        Self::new(pd.crossings.clone(), pd.free_loops)
    }

    pub fn to_pd(&self) -> PdCode {
        PdCode { crossings: self.crossings.clone(), free_loops: self.free_loops }
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// Connected pieces of the crossing graph (free loops not included).
    pub fn piece_count(&self) -> usize {
        self.pieces
    }

    /// Split as drawn: more than one piece, counting free loops as pieces.
    pub fn is_diagrammatically_split(&self) -> bool {
        self.pieces + self.free_loops as usize > 1
    }

    /// The 0-crossing, 1-loop diagram.
    pub fn is_trivial_unknot(&self) -> bool {
        self.crossings.is_empty() && self.free_loops == 1
    }

    pub fn face_of_corner(&self, crossing: usize, corner: usize) -> usize {
        self.corner_face[crossing][corner]
    }

    pub fn face_color(&self, face: usize) -> u8 {
        self.face_color[face]
    }

    pub(crate) fn partner(&self, arm: Arm) -> Arm {
        self.partner[arm.0][arm.1]
    }

    pub(crate) fn piece_of(&self, crossing: usize) -> usize {
        self.piece_of[crossing]
    }

    /// Every arc runs from an over-arm to an under-arm.
    pub fn is_alternating(&self) -> bool {
        (0..self.crossings.len()).all(|c| {
            (0..4).all(|i| {
                let (_, j) = self.partner[c][i];
                i % 2 != j % 2
            })
        })
    }

    /// The same projection with every crossing switched.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self.crossings.iter().map(|x| [x[1], x[2], x[3], x[0]]).collect();
        LinkDiagram::new(crossings, self.free_loops).expect("switching crossings keeps the projection")
    }

    /// `V - E + F` summed over pieces divided by the piece count; always 2
    /// for a validated diagram with crossings.
    pub fn euler_characteristic_per_piece(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.pieces];
        let mut f = vec![0i64; self.pieces];
        for c in 0..self.crossings.len() {
            v[self.piece_of[c]] += 1;
        }
        let mut seen = vec![false; self.face_count];
        for c in 0..self.crossings.len() {
            for i in 0..4 {
                let face = self.corner_face[c][i];
                if !seen[face] {
                    seen[face] = true;
                    f[self.piece_of[c]] += 1;
                }
            }
        }
        v.iter().zip(&f).map(|(&v, &f)| v - 2 * v + f).collect()
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pd(f, &self.crossings, self.free_loops)
    }
}

pub(crate) fn write_pd(f: &mut impl fmt::Write, crossings: &[[u32; 4]], free_loops: u32) -> fmt::Result {
    write!(f, "PD[")?;
    for (i, x) in crossings.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "X({},{},{},{})", x[0], x[1], x[2], x[3])?;
    }
    write!(f, "]")?;
    if free_loops > 0 {
        write!(f, " + U{free_loops}")?;
    }
    Ok(())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Dense class index per element, and the number of classes.
    pub(crate) fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = index.len();
            out.push(*index.entry(r).or_insert(next));
        }
        let count = index.len();
        (out, count)
    }
}
