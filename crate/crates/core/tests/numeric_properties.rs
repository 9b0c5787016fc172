use std::f64::consts::PI;

use chen_core::numerics::{
    iterated_integral, pairing_determinant, pi1_pairing_matrix, punctured_plane_loops, signature, transport,
    words_up_to, Connection, GroupRingElement, OneForm, PiecewisePath, Segment, SolverOptions, C,
};
use chen_core::suites::{exponential_corpus, numeric_hopf_corpus};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn forms(src: &[&str]) -> Vec<OneForm> {
    src.iter().map(|s| OneForm::parse(s).unwrap()).collect()
}

fn tight() -> SolverOptions {
    SolverOptions { tol: 1e-12, ..Default::default() }
}

#[test]
fn reparametrization_invariance() {
    let alphabet = forms(&["dlog(z1)", "rat(1,1-z1)*dz1", "rat(z1,1)*dzb1"]);
    let (a, b) = (c(0.3, 0.4), c(2.0, -0.7));
    let line = PiecewisePath::line(&[a], &[b]).unwrap();
    // same image, t ↦ t²
    let quad = PiecewisePath::new(vec![Segment::Poly { coeffs: vec![vec![a], vec![c(0.0, 0.0)], vec![b - a]] }]).unwrap();
    let words = words_up_to(3, 3, false);
    let s1 = signature(&alphabet, &words, &line, &tight()).unwrap();
    let s2 = signature(&alphabet, &words, &quad, &tight()).unwrap();
    let s3 = signature(&alphabet, &words, &line.refined(0.37), &tight()).unwrap();
    for i in 0..words.len() {
        assert!((s1.values[i] - s2.values[i]).norm() < 1e-9, "{:?}", words[i]);
        assert!((s1.values[i] - s3.values[i]).norm() < 1e-9, "{:?}", words[i]);
    }
}

#[test]
fn homotopy_invariance_of_holomorphic_words() {
    let alphabet = forms(&["dlog(z1)", "rat(1,1-z1)*dz1", "rat(z1,1)*dzb1"]);
    let (a, b) = (c(0.5, 0.0), c(2.0, 1.0));
    let direct = PiecewisePath::line(&[a], &[b]).unwrap();
    let detour = PiecewisePath::polyline(&[vec![a], vec![c(1.5, 1.5)], vec![b]]).unwrap();
    let words = words_up_to(3, 2, false);
    let s1 = signature(&alphabet, &words, &direct, &tight()).unwrap();
    let s2 = signature(&alphabet, &words, &detour, &tight()).unwrap();
    for (i, w) in words.iter().enumerate() {
        let gap = (s1.values[i] - s2.values[i]).norm();
        if w.contains(&2) {
            if w == &vec![2] {
                assert!(gap > 1e-3, "z dz̄ is not closed");
            }
        } else {
            assert!(gap < 1e-9, "{w:?}: {gap}");
        }
    }
    // a clockwise loop around 1 picks up 2πi from dz/(1−z)
    let below = PiecewisePath::polyline(&[vec![a], vec![c(1.5, -1.0)], vec![b]]).unwrap();
    let s3 = signature(&alphabet, &[vec![1]], &below, &tight()).unwrap();
    assert!((s1.values[1] - s3.values[0] - c(0.0, 2.0 * PI)).norm() < 1e-9);
}

#[test]
fn transport_properties() {
    let conn = Connection::parse(
        &[vec!["0", "dlog(z1)", "0"], vec!["0", "0", "rat(1,1-z1)*dz1"], vec!["0", "0", "0"]],
        true,
    )
    .unwrap();
    assert!(conn.is_strictly_upper_triangular());
    let still = PiecewisePath::constant(&[c(0.5, 0.5)]).unwrap();
    let t = transport(&conn, &still, &tight()).unwrap().matrix;
    for i in 0..3 {
        for j in 0..3 {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((t[i][j] - c(e, 0.0)).norm() < 1e-14);
        }
    }
    let path = PiecewisePath::polyline(&[vec![c(0.5, 0.0)], vec![c(0.5, 1.0)], vec![c(2.0, 0.5)]]).unwrap();
    let t = transport(&conn, &path, &tight()).unwrap();
    let word = forms(&["dlog(z1)", "rat(1,1-z1)*dz1"]);
    let ii = iterated_integral(&word, &path, &tight()).unwrap();
    assert!((t.matrix[0][2] - ii.value).norm() < 1e-10);
    let l0 = iterated_integral(&word[..1], &path, &tight()).unwrap();
    assert!((t.matrix[0][1] - l0.value).norm() < 1e-10);
}

#[test]
fn fifty_random_hopf_cases() {
    let o = numeric_hopf_corpus(11, 50, &SolverOptions { tol: 1e-11, ..Default::default() }).unwrap();
    assert!(o.shuffle_max < 1e-8, "{}", o.shuffle_max);
    assert!(o.coproduct_max < 1e-8, "{}", o.coproduct_max);
    assert!(o.antipode_max < 1e-8, "{}", o.antipode_max);
    assert!(o.transport_max < 1e-7, "{}", o.transport_max);
}

#[test]
fn short_words_kill_third_power_of_augmentation_ideal() {
    let alphabet = forms(&["dlog(z1)", "rat(1,1-z1)*dz1"]);
    let loops = punctured_plane_loops();
    let rows = words_up_to(2, 2, true);
    let elems: Vec<GroupRingElement> = [[0, 0, 0], [0, 1, 0], [1, 0, 1], [1, 1, 0]]
        .iter()
        .map(|m| GroupRingElement::augmentation_monomial(m))
        .chain([GroupRingElement::word(&[1, 2, -1, -2]).sub(&GroupRingElement::one()).mul(
            &GroupRingElement::generator(1).sub(&GroupRingElement::one()),
        )])
        .collect();
    let m = pi1_pairing_matrix(&alphabet, &loops, &rows, &elems, false, &tight()).unwrap();
    for row in &m.entries {
        for x in row {
            assert!(x.norm() < 1e-6, "{x}");
        }
    }
}

#[test]
fn seven_by_seven_pairing_is_unimodular() {
    let alphabet = forms(&["dlog(z1)", "rat(1,1-z1)*dz1"]);
    let rows = words_up_to(2, 2, true);
    let elems: Vec<GroupRingElement> = words_up_to(2, 2, true).iter().map(|m| GroupRingElement::augmentation_monomial(m)).collect();
    let m = pi1_pairing_matrix(&alphabet, &punctured_plane_loops(), &rows, &elems, false, &tight()).unwrap();
    let lengths: Vec<usize> = rows.iter().map(Vec::len).collect();
    let d = pairing_determinant(&m.entries, &lengths, c(0.0, 2.0 * PI)).unwrap();
    assert!((d.abs_determinant - 1.0).abs() < 1e-8, "{}", d.abs_determinant);
    assert!(d.condition_number < 10.0);
}

#[test]
fn exponential_patterns() {
    let e = exponential_corpus(3, &tight()).unwrap();
    assert_eq!(e.patterns, 10);
    assert!(e.max_series_gap < 1e-8, "{}", e.max_series_gap);
    assert!(e.exp_identity_gap < 1e-10, "{}", e.exp_identity_gap);
}

#[test]
fn path_json_round_trip() {
    let text = r#"{"segments":[
        {"type":"line","from":[0.5,0],"to":[0.5,1]},
        {"type":"arc","center":[0,0],"radius":1.118033988749895,"angle_from":1.1071487177940904,"angle_to":2.0}]}"#;
    let p = PiecewisePath::from_json(text).unwrap();
    let back = PiecewisePath::from_json(&serde_json::to_string(&p.to_document()).unwrap()).unwrap();
    assert_eq!(p, back);
    assert!(PiecewisePath::from_json(r#"{"segments":[{"type":"line","from":[0,0],"to":[1]}]}"#).is_err());
    assert!(PiecewisePath::from_json(
        r#"{"segments":[{"type":"line","from":[0,0],"to":[1,0]},{"type":"line","from":[2,0],"to":[3,0]}]}"#
    )
    .is_err());
}
