use qaslopes::diagram::{determinant, goeritz_matrix, Color};
use qaslopes::fixtures;
use qaslopes_oracle::bracket_determinant;

#[test]
fn goeritz_matches_bracket_and_tables() {
    let all = fixtures::diagrams();
    assert!(all.len() > 250);
    for f in &all {
        let d = f.diagram().unwrap_or_else(|e| panic!("{}: {e}", f.name));
        let g = determinant(&d);
        let b = bracket_determinant(d.crossings(), d.free_loops());
        assert_eq!(g, b, "{}: Goeritz {g}, bracket {b}", f.name);
        assert_eq!(g, f.det, "{}: tabulated {}", f.name, f.det);
        assert_eq!(d.is_alternating(), f.alternating, "{}", f.name);
    }
}

#[test]
fn goeritz_matrices_are_symmetric_with_zero_row_sums() {
    for f in fixtures::diagrams().iter().take(60) {
        let d = f.diagram().unwrap();
        for color in [Color::Light, Color::Dark] {
            let (_, g) = goeritz_matrix(&d, color);
            for (i, row) in g.iter().enumerate() {
                assert_eq!(row.iter().sum::<i64>(), 0, "{}", f.name);
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, g[j][i]);
                }
            }
        }
    }
}
