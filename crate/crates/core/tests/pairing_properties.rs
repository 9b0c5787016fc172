use chen_core::cobar::{pairing_with_integrals, GeometricRealization};
use chen_core::numerics::{SolverOptions, C};

#[test]
fn torus_length_one_is_identity() {
    let t = GeometricRealization::flat_torus().unwrap();
    let r = pairing_with_integrals(&t, 1, 1e8, &SolverOptions::default()).unwrap();
    assert_eq!(r.expected_size, 2);
    assert!(r.square);
    let mut sorted = r.matrix.clone();
    sorted.sort_by(|a, b| b[0].norm().partial_cmp(&a[0].norm()).unwrap());
    for (i, row) in sorted.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let e = if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
            assert!((x - e).norm() < 1e-10, "{:?}", r.matrix);
        }
    }
}

#[test]
fn torus_length_two_is_nonsingular() {
    let t = GeometricRealization::flat_torus().unwrap();
    let r = pairing_with_integrals(&t, 2, 1e8, &SolverOptions::default()).unwrap();
    assert_eq!(r.expected_size, 5);
    assert!(r.nonsingular, "{r:?}");
}

#[test]
fn punctured_plane_length_two_is_nonsingular() {
    let p = GeometricRealization::punctured_plane().unwrap();
    let r = pairing_with_integrals(&p, 2, 1e8, &SolverOptions::default()).unwrap();
    assert_eq!(r.expected_size, 6);
    assert!(r.nonsingular, "{:?} cond {}", r.rows, r.condition_number);
}
