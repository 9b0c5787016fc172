use chen_core::cobar::presentation_fixture;
use chen_core::dga::{
    cohomology, exterior_model, sphere_model, torus_model, truncated_polynomial, wedge_of_circles,
    DgaModel,
};
use chen_core::exact_seq::{
    build_sequence_at, check_exactness, connecting_map, pi1_sequence_check, pi3_sequence_check,
    QMatrix,
};
use chen_core::linalg::QVec;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_formal_model(rng: &mut ChaCha8Rng) -> DgaModel {
    let mut m = DgaModel::ground_field();
    let odd: Vec<(String, u32)> = (0..rng.random_range(0..=3))
        .map(|i| (format!("u{i}"), [1, 1, 3, 5][rng.random_range(0..4)]))
        .collect();
    if !odd.is_empty() {
        let refs: Vec<(&str, u32)> = odd.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        m = m.tensor(&exterior_model(&refs).unwrap());
    }
    for i in 0..rng.random_range(0..=2) {
        let deg = [2, 4][rng.random_range(0..2)];
        let p = truncated_polynomial(&format!("p{i}"), deg, rng.random_range(1..=3)).unwrap();
        m = m.tensor(&p);
    }
    m.truncate_above(6)
}

fn models() -> Vec<(String, DgaModel)> {
    let s2 = sphere_model(2).unwrap();
    vec![
        ("S2".into(), s2.clone()),
        ("S3".into(), sphere_model(3).unwrap()),
        ("S4".into(), sphere_model(4).unwrap()),
        ("T1".into(), torus_model(1).unwrap()),
        ("T2".into(), torus_model(2).unwrap()),
        ("S2xS2".into(), s2.tensor(&s2)),
    ]
}

fn cup_as_matrix(m: &DgaModel, k: usize) -> QMatrix {
    let ring = cohomology(m);
    let columns = ring
        .cup_matrix(k)
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect::<QVec>()
        })
        .collect();
    QMatrix { rows: ring.rank(k), columns }
}

#[test]
fn exact_on_builtin_models() {
    for (name, m) in models() {
        for k in 2..=m.max_degree() + 1 {
            let seq = build_sequence_at(&m, k).unwrap();
            let report = check_exactness(&seq);
            assert!(report.is_exact(), "{name} k={k}: {:?}", report.first_failure());
        }
    }
}

#[test]
fn exact_on_random_formal_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..20 {
        let m = random_formal_model(&mut rng);
        assert!(m.validate().is_valid());
        for k in 2..=m.max_degree().max(2) {
            let report = check_exactness(&build_sequence_at(&m, k).unwrap());
            assert!(report.is_exact(), "case {case} k={k}: {:?}", report.first_failure());
        }
    }
}

#[test]
fn connecting_map_is_cup_product() {
    for (name, m) in models() {
        for k in 2..=m.max_degree() {
            let seq = build_sequence_at(&m, k).unwrap();
            let connecting = connecting_map(&m, k).unwrap();
            assert_eq!(connecting, cup_as_matrix(&m, k as usize), "{name} k={k}");
            assert_eq!(seq.maps[2], connecting, "{name} k={k}");
        }
    }
}

#[test]
fn torus_two_is_exact_at_two() {
    let seq = build_sequence_at(&torus_model(2).unwrap(), 2).unwrap();
    assert!(check_exactness(&seq).is_exact());
    assert_eq!(seq.dims[0], 4);
}

#[test]
fn pi1_from_sequence_matches_group_ring() {
    let cases = [
        (torus_model(1).unwrap(), "torus", 5),
        (wedge_of_circles(2).unwrap(), "wedge2", 6),
        (wedge_of_circles(1).unwrap(), "circle", 2),
    ];
    for (m, fixture, expected) in cases {
        let check = pi1_sequence_check(&m, &presentation_fixture(fixture).unwrap()).unwrap();
        assert_eq!(check.from_sequence, expected, "{fixture}");
        assert!(check.agrees(), "{fixture}: {:?}", check);
        let h0 = build_sequence_at(&m, 2).unwrap().dims[1];
        assert_eq!(h0, expected, "{fixture}");
    }
}

#[test]
fn pi3_from_sequence_matches_homotopy() {
    let s2 = sphere_model(2).unwrap();
    for (m, expected) in [(s2.clone(), 1), (sphere_model(3).unwrap(), 1), (s2.tensor(&s2), 2)] {
        let check = pi3_sequence_check(&m).unwrap();
        assert_eq!(check.from_sequence, expected);
        assert!(check.agrees(), "{:?}", check);
    }
    assert!(pi3_sequence_check(&torus_model(1).unwrap()).is_err());
}
