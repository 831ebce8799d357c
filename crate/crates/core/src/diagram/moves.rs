use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{DiagramError, LinkDiagram};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Resolution {
    /// Joins arms 0-1 and 2-3.
    #[serde(rename = "0")]
    Zero,
    /// Joins arms 0-3 and 1-2.
    #[serde(rename = "1")]
    One,
}

impl Resolution {
    pub const BOTH: [Resolution; 2] = [Resolution::Zero, Resolution::One];
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SmoothingSite {
    pub crossing: usize,
    pub resolution: Resolution,
}

/// Deletes `removed` crossings and glues arc labels pairwise along `joins`.
/// Glued classes that no longer touch a crossing become free loops. Labels
/// are renumbered `1..` in order of appearance.
fn contract(d: &LinkDiagram, removed: &[usize], joins: &[(u32, u32)]) -> Result<LinkDiagram, DiagramError> {
    let mut parent: HashMap<u32, u32> = HashMap::new();
    fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
        let mut r = x;
        while let Some(&p) = parent.get(&r) {
            if p == r {
                break;
            }
            r = p;
        }
        parent.insert(x, r);
        r
    }
    for &(a, b) in joins {
        parent.entry(a).or_insert(a);
        parent.entry(b).or_insert(b);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
        }
    }
    let removed: HashSet<usize> = removed.iter().copied().collect();
    let mut kept: Vec<[u32; 4]> = d
        .crossings()
        .iter()
        .enumerate()
        .filter(|(c, _)| !removed.contains(c))
        .map(|(_, x)| *x)
        .collect();
    for x in &mut kept {
        for l in x.iter_mut() {
            if parent.contains_key(l) {
                *l = find(&mut parent, *l);
            }
        }
    }
    let present: HashSet<u32> = kept.iter().flatten().copied().collect();
    let join_labels: Vec<u32> = joins.iter().flat_map(|&(a, b)| [a, b]).collect();
    let roots: HashSet<u32> = join_labels.iter().map(|&l| find(&mut parent, l)).collect();
    let new_loops = roots.iter().filter(|r| !present.contains(r)).count() as u32;

    let mut renumber: HashMap<u32, u32> = HashMap::new();
    for x in &mut kept {
        for l in x.iter_mut() {
            let next = renumber.len() as u32 + 1;
            *l = *renumber.entry(*l).or_insert(next);
        }
    }
    LinkDiagram::new(kept, d.free_loops() + new_loops)
}

/// Replaces one crossing by its `0` or `1` smoothing.
pub fn smooth(d: &LinkDiagram, site: SmoothingSite) -> Result<LinkDiagram, DiagramError> {
    let n = d.crossing_count();
    if site.crossing >= n {
        return Err(DiagramError::InvalidSite { index: site.crossing, crossings: n });
    }
    let x = d.crossings()[site.crossing];
    let joins = match site.resolution {
        Resolution::Zero => [(x[0], x[1]), (x[2], x[3])],
        Resolution::One => [(x[0], x[3]), (x[1], x[2])],
    };
    contract(d, &[site.crossing], &joins)
}

fn reidemeister_one(d: &LinkDiagram) -> Option<(Vec<usize>, Vec<(u32, u32)>)> {
    for (c, x) in d.crossings().iter().enumerate() {
        for i in 0..4 {
            if x[i] == x[(i + 1) % 4] {
                return Some((vec![c], vec![(x[(i + 2) % 4], x[(i + 3) % 4])]));
            }
        }
    }
    None
}

fn reidemeister_two(d: &LinkDiagram) -> Option<(Vec<usize>, Vec<(u32, u32)>)> {
    let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d.face_count()];
    for c in 0..d.crossing_count() {
        for i in 0..4 {
            corners[d.face_of_corner(c, i)].push((c, i));
        }
    }
    for face in corners.iter().filter(|f| f.len() == 2) {
        let (c1, i1) = face[0];
        let (c2, i2) = d.partner((c1, (i1 + 1) % 4));
        if c1 == c2 {
            continue;
        }
        // The bigon edge leaving c1 along arm i1+1 reaches c2 at arm i2; the
        // same strand is over (or under) at both ends exactly when the parities match.
        if (i1 + 1) % 2 != i2 % 2 {
            continue;
        }
        let (x1, x2) = (d.crossings()[c1], d.crossings()[c2]);
        let joins = vec![(x1[(i1 + 3) % 4], x2[(i2 + 2) % 4]), (x1[(i1 + 2) % 4], x2[(i2 + 3) % 4])];
        return Some((vec![c1, c2], joins));
    }
    None
}

/// Removes kinks (Reidemeister I) and non-alternating bigons (Reidemeister II)
/// until neither applies.
pub fn reduce(d: &LinkDiagram) -> LinkDiagram {
    let mut cur = d.clone();
    loop {
        let Some((removed, joins)) = reidemeister_one(&cur).or_else(|| reidemeister_two(&cur)) else {
            return cur;
        };
        cur = contract(&cur, &removed, &joins).expect("Reidemeister moves preserve planarity");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{determinant, parse_pd};

    const TREFOIL: &str = "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]";
    const HOPF: &str = "PD[X(1,4,2,3), X(3,2,4,1)]";

    fn site(crossing: usize, resolution: Resolution) -> SmoothingSite {
        SmoothingSite { crossing, resolution }
    }

    #[test]
    fn hopf_smoothings_are_unknots() {
        let h = parse_pd(HOPF).unwrap();
        for c in 0..2 {
            for r in Resolution::BOTH {
                let s = smooth(&h, site(c, r)).unwrap();
                assert_eq!(s.components(), 1);
                assert_eq!(determinant(&s), 1);
                assert!(reduce(&s).is_trivial_unknot());
            }
        }
    }

    #[test]
    fn trefoil_smoothings_split_three_as_two_plus_one() {
        let t = parse_pd(TREFOIL).unwrap();
        for c in 0..3 {
            let mut dets: Vec<u64> = Resolution::BOTH.iter().map(|&r| determinant(&smooth(&t, site(c, r)).unwrap())).collect();
            dets.sort();
            assert_eq!(dets, vec![1, 2]);
        }
    }

    #[test]
    fn smoothing_needs_a_crossing() {
        let u = parse_pd("PD[]").unwrap();
        assert_eq!(
            smooth(&u, site(0, Resolution::Zero)).unwrap_err(),
            DiagramError::InvalidSite { index: 0, crossings: 0 }
        );
    }

    #[test]
    fn kink_removal() {
        let u = parse_pd("PD[X(1,1,2,2)]").unwrap();
        let r = reduce(&u);
        assert!(r.is_trivial_unknot());
        // A kink on the trefoil is removed and leaves a 3-crossing diagram.
        let k = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,7,3), X(7,8,8,6)]").unwrap();
        let r = reduce(&k);
        assert_eq!(r.crossing_count(), 3);
        assert_eq!(determinant(&r), 3);
    }

    #[test]
    fn bigon_removal() {
        // One strand laid over another strand twice: a 2-crossing unknot.
        let d = parse_pd("PD[X(1,3,2,4), X(2,3,1,4)]");
        let d = match d {
            Ok(d) => d,
            Err(_) => parse_pd("PD[X(4,2,1,1), X(2,4,3,3)]").unwrap(),
        };
        let r = reduce(&d);
        assert_eq!(r.crossing_count(), 0);
        assert_eq!(determinant(&r), determinant(&d));
    }

    #[test]
    fn reduced_trefoil_unchanged() {
        let t = parse_pd(TREFOIL).unwrap();
        assert_eq!(reduce(&t).to_pd(), t.to_pd());
    }
}
