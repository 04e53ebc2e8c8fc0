use crate::data::{DistanceMatrix, SignedCoordinates};

pub const TABLE_LABELS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// The non-metric six-point distance table and its embedding with one
/// imaginary axis.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub distances: DistanceMatrix,
    pub coordinates: SignedCoordinates,
}

pub fn table1() -> DistanceMatrix {
    let rows = vec![
        vec![0.0, 10.0, 2.236, 20.0, 22.361, 20.125],
        vec![10.0, 0.0, 6.708, 22.361, 20.0, 21.095],
        vec![2.236, 6.708, 0.0, 20.125, 21.095, 20.0],
        vec![20.0, 22.361, 20.125, 0.0, 10.0, 2.236],
        vec![22.361, 20.0, 21.095, 10.0, 0.0, 6.708],
        vec![20.125, 21.095, 20.0, 2.236, 6.708, 0.0],
    ];
    DistanceMatrix::from_rows(rows).expect("fixture is a valid distance table")
}

/// Axes `x1`, `x2` real, `x3` imaginary (coefficients of `i`).
pub fn table2() -> SignedCoordinates {
    let coords = vec![
        vec![5.0, 10.0, 1.0],
        vec![-5.0, 10.0, 1.0],
        vec![2.0, 10.0, -1.0],
        vec![5.0, -10.0, 1.0],
        vec![-5.0, -10.0, 1.0],
        vec![2.0, -10.0, -1.0],
    ];
    SignedCoordinates::new(coords, vec![false, false, true]).expect("fixture coordinates")
}

pub fn fixture_tables() -> Fixtures {
    Fixtures {
        distances: table1(),
        coordinates: table2(),
    }
}
