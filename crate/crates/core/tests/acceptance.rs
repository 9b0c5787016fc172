use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use chen_core::cobar::{bar_cobar_rank_compare, fixture, fixture_names, group_ring_oracle, h0_algebra, presentation_fixture};
use chen_core::currents::{oracle_identities, random_cases};
use chen_core::exact_seq::{build_sequence_at, check_exactness};
use chen_core::numerics::{
    pairing_determinant, pi1_pairing_matrix, punctured_plane_loops, words_up_to, GroupRingElement, OneForm,
    SolverOptions, C,
};
use chen_core::special::{li_k, mpl11_integral, mpl11_series, zeta, Method, Mpl11Config};
use chen_core::sphere::sphere_report;
use chen_core::suites::{exactness_models, exponential_corpus, numeric_hopf_corpus};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sphere_ranks() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=5u32 {
        let r = sphere_report(n, 4, None).unwrap();
        for (j, k) in r.ranks.iter().enumerate() {
            let expected = usize::from(j % (n as usize - 1) == 0);
            if *k != expected {
                bad.push(format!("n={n} j={j} rank {k}"));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "ranks 1 exactly at m(n-1), m <= 4".into() } else { bad.join(", ") })
}

fn sphere_ring() -> Outcome {
    let r3 = sphere_report(3, 4, None).unwrap();
    let powers: Vec<_> = (2..=4).map(|m| r3.power(m).map(str::to_string)).collect();
    let r2 = sphere_report(2, 4, None).unwrap();
    let pass = powers == [Some("2".into()), Some("6".into()), Some("24".into())]
        && r2.product(1, 1) == Some("0")
        && r2.product(2, 2) == Some("2");
    outcome(pass, format!("n=3 theta1^m coefficients {powers:?}; n=2 theta1^2 {:?}, theta2^2 {:?}", r2.product(1, 1), r2.product(2, 2)))
}

fn homotopy() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=5u32 {
        let r = sphere_report(n, 4, None).unwrap();
        for (j, k) in &r.homotopy {
            let expected = usize::from(*j == n || (n % 2 == 0 && *j == 2 * n - 1));
            if *k != expected {
                bad.push(format!("n={n} pi_{j} rank {k}"));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "pi_n and pi_(2n-1) for even n, within 2..2n+1".into() } else { bad.join(", ") })
}

fn punctured_forms() -> Vec<OneForm> {
    vec![OneForm::parse("dlog(z1)").unwrap(), OneForm::parse("rat(1,1-z1)*dz1").unwrap()]
}

fn pi1_pairing() -> Outcome {
    let opts = SolverOptions::default();
    let rows = words_up_to(2, 2, true);
    let one = GroupRingElement::one();
    let mut cols = vec![one.clone(), GroupRingElement::generator(0), GroupRingElement::generator(1)];
    for m in words_up_to(2, 2, false).into_iter().filter(|m| m.len() == 2) {
        cols.push(GroupRingElement::augmentation_monomial(&m));
    }
    let m = pi1_pairing_matrix(&punctured_forms(), &punctured_plane_loops(), &rows, &cols, false, &opts).unwrap();
    let lengths: Vec<usize> = rows.iter().map(Vec::len).collect();
    let det = pairing_determinant(&m.entries, &lengths, C::new(0.0, 2.0 * PI)).unwrap();
    let mut j3: Vec<GroupRingElement> = words_up_to(2, 3, false)
        .into_iter()
        .filter(|m| m.len() == 3)
        .map(|m| GroupRingElement::augmentation_monomial(&m))
        .collect();
    let g = |i| GroupRingElement::generator(i).sub(&one);
    let comm = GroupRingElement::word(&[1, 2, -1, -2]).sub(&one);
    j3.push(comm.mul(&g(0)));
    j3.push(g(1).mul(&comm));
    let z = pi1_pairing_matrix(&punctured_forms(), &punctured_plane_loops(), &rows, &j3, false, &opts).unwrap();
    let worst = z.entries.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    outcome(
        det.abs_determinant > 1e-6 && worst < 1e-6,
        format!("7x7 |det| {:.6e}, cond {:.3}, max J^3 pairing {:.2e} over {} elements", det.abs_determinant, det.condition_number, worst, j3.len()),
    )
}

fn commutator() -> Outcome {
    let comm = GroupRingElement::word(&[1, 2, -1, -2]);
    let m = pi1_pairing_matrix(&punctured_forms(), &punctured_plane_loops(), &[vec![0, 1]], &[comm], false, &SolverOptions::default())
        .unwrap();
    // bilinear expansion: the commutator sees only ∫a·∫b − ∫b·∫a = (2πi)(−2πi) − 0
    let expected = 4.0 * PI * PI;
    let rel = (m.entries[0][0] - C::new(expected, 0.0)).norm() / expected;
    outcome(rel < 1e-6, format!("value {:.12}, relative error {rel:.2e}", m.entries[0][0]))
}

fn polylogs() -> Outcome {
    let opts = SolverOptions::default();
    let corpus: Vec<C> = (0..10).map(|i| C::from_polar(0.07 * (i + 1) as f64, 0.9 * i as f64 - 2.0)).collect();
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        for &x in &corpus {
            let a = li_k(k, x, Method::Integral, &opts).unwrap().value;
            let b = li_k(k, x, Method::Series, &opts).unwrap().value;
            worst = worst.max((a - b).norm());
        }
    }
    let points = [(0.3, 0.4), (-0.5, 0.6), (0.7, 0.1), (0.2, -0.8), (-0.6, -0.6)];
    let mut worst11: f64 = 0.0;
    for (x, y) in points {
        let (x, y) = (C::new(x, 0.0), C::new(y, 0.0));
        let a = mpl11_integral(x, y, &Mpl11Config::default(), &opts).unwrap().value;
        let b = mpl11_series(x, y).unwrap().value;
        worst11 = worst11.max((a - b).norm());
    }
    outcome(worst < 1e-8 && worst11 < 1e-6, format!("Li_k max gap {worst:.2e} on 30 evaluations; L11 max gap {worst11:.2e} on 5 points"))
}

fn zeta_table() -> Outcome {
    let z2 = zeta(2).unwrap().value;
    let z3 = zeta(3).unwrap().value;
    // plain partial sum with the Euler–Maclaurin tail of Σ n^-3
    let n = 2000.0f64;
    let head: f64 = (1..=2000).map(|k| 1.0 / (k as f64).powi(3)).sum();
    let oracle3 = head + 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n.powi(3)) + 1.0 / (4.0 * n.powi(4));
    let e2 = (z2 - PI * PI / 6.0).abs();
    let e3 = (z3 - oracle3).abs();
    outcome(e2 < 1e-9 && e3 < 1e-9 && (z3 - 1.2020569031595942).abs() < 1e-9, format!("zeta(2) gap {e2:.2e}, zeta(3) gap {e3:.2e}"))
}

fn cobar_dimensions() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["circle", "wedge2", "torus"] {
        let set = fixture(name).unwrap();
        let pres = presentation_fixture(name).unwrap();
        let dims: Vec<(usize, usize)> = (1..=4)
            .map(|s| (h0_algebra(&set, s).unwrap().dimension, group_ring_oracle(&pres, s).unwrap().dimension))
            .collect();
        pass &= dims.iter().all(|(a, b)| a == b);
        lines.push(format!("{name} {dims:?}"));
    }
    outcome(pass, lines.join("; "))
}

fn bar_cobar() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for name in fixture_names() {
        let set = fixture(name).unwrap();
        for s in 1..=3 {
            let cmp = bar_cobar_rank_compare(&set, s, 2).unwrap();
            count += 1;
            if !cmp.agrees() {
                bad.push(format!("{name} s={s}: bar {:?} cobar {:?}", cmp.bar, cmp.cobar));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{count} tables agree through degree 2") } else { bad.join("; ") })
}

fn exactness() -> Outcome {
    let mut bad = Vec::new();
    let mut nodes = 0;
    let models = exactness_models(2024).unwrap();
    for (name, m) in &models {
        for k in 2..=m.max_degree().max(2) + 1 {
            let rep = check_exactness(&build_sequence_at(m, k).unwrap());
            nodes += rep.nodes.len();
            if let Some(n) = rep.first_failure() {
                bad.push(format!("{name} k={k} at {}", n.node));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} models, {nodes} nodes exact", models.len()) } else { bad.join("; ") })
}

fn currents() -> Outcome {
    let cases = random_cases(7, 200);
    let rep = oracle_identities(&cases).unwrap();
    let all_brute = rep.max_crossings <= 12 && rep.brute_force_checks == 9 * cases.len();
    outcome(
        rep.pass() && all_brute,
        format!("{} cases, {} identity checks, {} brute-force, max {} crossings, {} failures", rep.cases, rep.checks, rep.brute_force_checks, rep.max_crossings, rep.failures.len()),
    )
}

fn numeric_hopf() -> Outcome {
    let o = numeric_hopf_corpus(12, 50, &SolverOptions { tol: 1e-11, ..Default::default() }).unwrap();
    outcome(
        o.shuffle_max < 1e-8 && o.coproduct_max < 1e-8 && o.antipode_max < 1e-8 && o.transport_max < 1e-7,
        format!(
            "shuffle {:.2e}, coproduct {:.2e}, antipode {:.2e}, transport {:.2e}",
            o.shuffle_max, o.coproduct_max, o.antipode_max, o.transport_max
        ),
    )
}

fn exponential() -> Outcome {
    let e = exponential_corpus(13, &SolverOptions { tol: 1e-12, ..Default::default() }).unwrap();
    outcome(
        e.patterns == 10 && e.max_series_gap < 1e-8 && e.exp_identity_gap < 1e-10,
        format!("{} patterns, max gap {:.2e}; exp identity gap {:.2e}", e.patterns, e.max_series_gap, e.exp_identity_gap),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Option<f64>); 13] = [
        ("sphere loop cohomology", sphere_ranks, Some(5.0)),
        ("sphere ring constants", sphere_ring, None),
        ("homotopy ranks", homotopy, None),
        ("pi1 pairing", pi1_pairing, Some(30.0)),
        ("commutator period", commutator, None),
        ("polylogarithm agreement", polylogs, Some(20.0)),
        ("zeta table", zeta_table, None),
        ("cobar and group ring dimensions", cobar_dimensions, Some(60.0)),
        ("bar and cobar ranks", bar_cobar, None),
        ("exact sequences", exactness, None),
        ("currents oracle", currents, None),
        ("numerical Hopf contracts", numeric_hopf, None),
        ("exponential iterated integrals", exponential, None),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let secs = start.elapsed().as_secs_f64();
        if let Some(b) = budget {
            if secs >= *b {
                o.pass = false;
                o.detail.push_str(&format!("; over the {b} s budget"));
            }
        }
        // bypasses the harness capture so the lines reach the log
        writeln!(std::io::stderr(), "criterion {:>2} {name}: {} ({}) [{secs:.2} s]", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail)
            .unwrap();
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
