use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::LinkDiagram;

/// One of the two checkerboard color classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Color {
    Light,
    Dark,
}

impl Color {
    fn index(self) -> u8 {
        match self {
            Color::Light => 0,
            Color::Dark => 1,
        }
    }
}

/// Unreduced Goeritz matrix on the faces of one color, with the face ids it is indexed by.
///
/// A crossing touching faces `i != j` of the chosen color contributes its
/// Goeritz sign `eta = +1` when those faces sit counterclockwise from the
/// under-strand arms, and `eta = -1` otherwise:
/// `G[i][j] -= eta`, `G[i][i] += eta`. Crossings whose two corners lie in the
/// same face contribute nothing.
pub fn goeritz_matrix(d: &LinkDiagram, color: Color) -> (Vec<usize>, Vec<Vec<i64>>) {
    let mut faces: Vec<usize> = (0..d.face_count()).filter(|&f| d.face_color(f) == color.index()).collect();
    faces.sort_unstable();
    let pos = |f: usize| faces.binary_search(&f).expect("face of chosen color");
    let mut g = vec![vec![0i64; faces.len()]; faces.len()];
    for c in 0..d.crossing_count() {
        let (start, eta) = if d.face_color(d.face_of_corner(c, 0)) == color.index() { (0, 1) } else { (1, -1) };
        let (f, h) = (d.face_of_corner(c, start), d.face_of_corner(c, start + 2));
        if f == h {
            continue;
        }
        let (i, j) = (pos(f), pos(h));
        g[i][j] -= eta;
        g[j][i] -= eta;
        g[i][i] += eta;
        g[j][j] += eta;
    }
    (faces, g)
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// `|det|` of the reduced Goeritz matrix; 0 for diagrams that are split as drawn.
pub fn determinant(d: &LinkDiagram) -> u64 {
    determinant_with(d, Color::Light)
}

pub(crate) fn determinant_with(d: &LinkDiagram, color: Color) -> u64 {
    if d.is_trivial_unknot() {
        return 1;
    }
    if d.is_diagrammatically_split() {
        return 0;
    }
    let (_, mut g) = goeritz_matrix(d, color);
    g.pop();
    for row in &mut g {
        row.pop();
    }
    integer_determinant(&g).abs().to_u64().expect("determinant fits in 64 bits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn bareiss_small() {
        assert_eq!(integer_determinant(&[vec![2, 1], vec![1, 2]]), BigInt::from(3));
        assert_eq!(integer_determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(integer_determinant(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
        assert_eq!(
            integer_determinant(&[vec![0, 2, 1], vec![3, 0, 0], vec![1, 1, 5]]),
            BigInt::from(-27)
        );
    }

    #[test]
    fn basic_determinants() {
        assert_eq!(determinant(&parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap()), 3);
        assert_eq!(determinant(&parse_pd("PD[X(1,4,2,3), X(3,2,4,1)]").unwrap()), 2);
        assert_eq!(determinant(&parse_pd("PD[]").unwrap()), 1);
        assert_eq!(determinant(&parse_pd("PD[] + U2").unwrap()), 0);
        assert_eq!(determinant(&parse_pd("PD[X(1,1,2,2)]").unwrap()), 1);
        // Figure-eight knot.
        assert_eq!(determinant(&parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]").unwrap()), 5);
    }

    #[test]
    fn color_classes_agree() {
        let t = parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]").unwrap();
        assert_eq!(determinant_with(&t, Color::Light), determinant_with(&t, Color::Dark));
    }
}
