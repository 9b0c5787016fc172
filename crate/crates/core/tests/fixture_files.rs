use std::f64::consts::PI;

use chen_core::currents::{crossings, delta_iterated_integral, Arrangement, PLPath};
use chen_core::numerics::{iterated_integral, OneForm, PiecewisePath, SolverOptions, C};

const ARRANGEMENT: &str = include_str!("../fixtures/arrangements/three_lines.json");
const STAIRCASE: &str = include_str!("../fixtures/paths/staircase.json");
const LOOP0: &str = include_str!("../fixtures/paths/loop_around_zero.json");
const LOOP1: &str = include_str!("../fixtures/paths/loop_around_one.json");

#[test]
fn staircase_crosses_in_order() {
    let arr = Arrangement::from_json(ARRANGEMENT).unwrap();
    let path = PLPath::from_json(STAIRCASE).unwrap();
    let cs = crossings(&path, &arr).unwrap();
    assert_eq!(cs.iter().map(|c| c.hyperplane).collect::<Vec<_>>(), vec![0, 1, 2]);
    assert!(cs.iter().all(|c| c.sign == 1));
    assert_eq!(delta_iterated_integral(&[0, 1], &path, &arr).unwrap(), 1);
    assert_eq!(delta_iterated_integral(&[1, 0], &path, &arr).unwrap(), 0);
    assert_eq!(delta_iterated_integral(&[0, 1, 2], &path, &arr).unwrap(), 1);
    assert_eq!(delta_iterated_integral(&[2, 1, 0], &path.reversed(), &arr).unwrap(), -1);
}

#[test]
fn loops_pick_up_residues() {
    let tau = C::new(0.0, 2.0 * PI);
    let dlog = OneForm::parse("dlog(z1)").unwrap();
    let other = OneForm::parse("rat(1,1-z1)*dz1").unwrap();
    let opts = SolverOptions::default();
    let l0 = PiecewisePath::from_json(LOOP0).unwrap();
    let l1 = PiecewisePath::from_json(LOOP1).unwrap();
    assert!((iterated_integral(&[dlog.clone()], &l0, &opts).unwrap().value - tau).norm() < 1e-10);
    assert!((iterated_integral(&[other.clone()], &l1, &opts).unwrap().value + tau).norm() < 1e-10);
    assert!(iterated_integral(&[other], &l0, &opts).unwrap().value.norm() < 1e-10);
    assert!(iterated_integral(&[dlog], &l1, &opts).unwrap().value.norm() < 1e-10);
}
