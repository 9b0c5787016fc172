//! Seeded property suites behind `chen verify`.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cobar::{build_cobar, fixture, fixture_names};
use crate::currents::{oracle_identities, random_cases};
use crate::dga::{exterior_model, sphere_model, torus_model, truncated_polynomial, DgaModel};
use crate::error::{Error, Result};
use crate::exact_seq::{build_sequence_at, check_exactness};
use crate::numerics::{
    composition_and_reversal_check, exponential_iterated_integral, exponential_series, numeric_shuffle_check,
    signature, transport, Connection, OneForm, PiecewisePath, Segment, SolverOptions, C,
};
use crate::shuffle_hopf::{coproduct, shuffle, FormalWordSum, Letter, TensorSum, Word};

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub cases: usize,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}

pub const SUITES: [&str; 5] = ["all", "hopf", "numeric", "currents", "exactness"];

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let checks = match name {
        "hopf" => hopf_suite(seed),
        "numeric" => numeric_suite(seed)?,
        "currents" => currents_suite(seed)?,
        "exactness" => exactness_suite(seed)?,
        "all" => {
            let mut c = hopf_suite(seed);
            c.extend(numeric_suite(seed)?);
            c.extend(currents_suite(seed)?);
            c.extend(exactness_suite(seed)?);
            c
        }
        other => return Err(Error::Input(format!("unknown suite '{other}' (expected one of {})", SUITES.join(", ")))),
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { suite: name.into(), seed, checks, pass })
}

fn line(name: &str, cases: usize, pass: bool, detail: String) -> CheckLine {
    CheckLine { name: name.into(), cases, pass, detail }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize, alphabet: &[Letter]) -> Word {
    Word((0..rng.random_range(0..=max_len)).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect())
}

/// Algebraic Hopf identities on random words of mixed degree.
pub fn hopf_suite(seed: u64) -> Vec<CheckLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = [Letter::new(0, 1), Letter::new(1, 2), Letter::new(2, 1), Letter::new(3, 3)];
    let cases = 100;
    let (mut comm, mut assoc, mut anti, mut bialg) = (true, true, true, true);
    for _ in 0..cases {
        let u = random_word(&mut rng, 3, &alphabet);
        let v = random_word(&mut rng, 3, &alphabet);
        let w = random_word(&mut rng, 2, &alphabet);
        let uv = shuffle(&u, &v);
        let mut vu = shuffle(&v, &u);
        if (u.shifted_degree() * v.shifted_degree()) % 2 != 0 {
            let mut neg = FormalWordSum::zero();
            neg.add_scaled(&shuffle(&v, &u), &-crate::linalg::q(1));
            vu = neg;
        }
        comm &= uv == vu;
        let left = uv.shuffle(&FormalWordSum::from_word(w.clone()));
        let right = FormalWordSum::from_word(u.clone()).shuffle(&shuffle(&v, &w));
        assoc &= left == right;
        // m(S ⊗ id)Δ = ε
        let mut conv = FormalWordSum::zero();
        for ((l, r), c) in coproduct(&u).iter() {
            conv.add_scaled(&crate::shuffle_hopf::antipode_sum(&FormalWordSum::from_word(l.clone())).shuffle(&FormalWordSum::from_word(r.clone())), c);
        }
        let expected = if u.is_empty() { FormalWordSum::unit() } else { FormalWordSum::zero() };
        anti &= conv == expected;
        // Δ(u ш v) = Δu ш Δv
        let mut lhs = TensorSum::zero();
        for (x, c) in uv.iter() {
            for ((l, r), d) in coproduct(x).iter() {
                lhs.add_term(l.clone(), r.clone(), c * d);
            }
        }
        bialg &= lhs == coproduct(&u).shuffle(&coproduct(&v));
    }
    vec![
        line("shuffle graded-commutative", cases, comm, String::new()),
        line("shuffle associative", cases, assoc, String::new()),
        line("antipode convolution", cases, anti, String::new()),
        line("coproduct multiplicative", cases, bialg, String::new()),
    ]
}

/// Letters for the numeric corpus on `ℂ∖{0,1}`; `dzb1` makes some words
/// path dependent.
pub fn numeric_alphabet() -> Vec<OneForm> {
    ["dlog(z1)", "rat(1,1-z1)*dz1", "dz1", "rat(z1,1)*dzb1"]
        .iter()
        .map(|s| OneForm::parse(s).expect("fixed form"))
        .collect()
}

fn safe(p: &PiecewisePath) -> bool {
    let forms = numeric_alphabet();
    let dens: Vec<_> = forms.iter().flat_map(|f| f.denominators()).collect();
    p.check_singularities(&dens, 0.15, false).is_ok()
}

fn random_point(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.random_range(-1.2..2.2), rng.random_range(-1.2..1.2))
}

/// A random path of lines and arcs staying at least 0.15 from 0 and 1.
pub fn random_safe_path(rng: &mut ChaCha8Rng, start: Option<C>) -> PiecewisePath {
    loop {
        let mut z = start.unwrap_or_else(|| random_point(rng));
        let mut segs = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            if rng.random_bool(0.3) {
                let r = rng.random_range(0.2..0.8);
                let a0 = rng.random_range(0.0..2.0 * PI);
                let center = z - C::from_polar(r, a0);
                let a1 = a0 + rng.random_range(-2.5..2.5);
                let seg = Segment::Arc { base: vec![C::new(0.0, 0.0)], center, radius: r, angle_from: a0, angle_to: a1, coord: 0 };
                // start exactly at z
                let shift = z - seg.start()[0];
                let seg = seg.translated(&[shift]);
                z = seg.end()[0];
                segs.push(seg);
            } else {
                let w = random_point(rng);
                segs.push(Segment::Line { from: vec![z], to: vec![w] });
                z = w;
            }
        }
        if let Ok(p) = PiecewisePath::new(segs) {
            if safe(&p) {
                return p;
            }
        }
    }
}

fn random_letters(rng: &mut ChaCha8Rng, max_len: usize, k: usize) -> Vec<usize> {
    (0..rng.random_range(1..=max_len)).map(|_| rng.random_range(0..k)).collect()
}

pub struct NumericOutcome {
    pub cases: usize,
    pub shuffle_max: f64,
    pub coproduct_max: f64,
    pub antipode_max: f64,
    pub transport_max: f64,
}

/// Shuffle, coproduct and antipode on random safe paths, plus transport
/// multiplicativity, reporting the largest residuals.
pub fn numeric_hopf_corpus(seed: u64, cases: usize, opts: &SolverOptions) -> Result<NumericOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = numeric_alphabet();
    let conn = Connection::parse(
        &[vec!["0", "dlog(z1)", "dz1"], vec!["0", "0", "rat(1,1-z1)*dz1"], vec!["0", "0", "0"]],
        true,
    )?;
    let mut out = NumericOutcome { cases, shuffle_max: 0.0, coproduct_max: 0.0, antipode_max: 0.0, transport_max: 0.0 };
    for _ in 0..cases {
        let alpha = random_safe_path(&mut rng, None);
        let beta = random_safe_path(&mut rng, Some(alpha.end()[0]));
        let u = random_letters(&mut rng, 2, alphabet.len());
        let v = random_letters(&mut rng, 2, alphabet.len());
        let w = random_letters(&mut rng, 3, alphabet.len());
        let sh = numeric_shuffle_check(&alphabet, &u, &v, &alpha, f64::INFINITY, opts)?;
        out.shuffle_max = out.shuffle_max.max(sh.residual);
        let cr = composition_and_reversal_check(&alphabet, &w, &alpha, &beta, f64::INFINITY, opts)?;
        out.coproduct_max = out.coproduct_max.max(cr[0].residual);
        out.antipode_max = out.antipode_max.max(cr[1].residual);
        let ta = transport(&conn, &alpha, opts)?.matrix;
        let tb = transport(&conn, &beta, opts)?.matrix;
        let tab = transport(&conn, &alpha.compose(&beta)?, opts)?.matrix;
        for i in 0..3 {
            for j in 0..3 {
                let prod: C = (0..3).map(|k| ta[i][k] * tb[k][j]).sum();
                out.transport_max = out.transport_max.max((prod - tab[i][j]).norm());
            }
        }
    }
    Ok(out)
}

pub struct ExponentialOutcome {
    pub patterns: usize,
    pub max_series_gap: f64,
    pub exp_identity_gap: f64,
}

/// Ten random exponential patterns against their truncated defining sums,
/// and `exp ∫ c·dz = Σ_k ∫ (c·dz)^k`.
pub fn exponential_corpus(seed: u64, opts: &SolverOptions) -> Result<ExponentialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let pool = ["dz1", "rat(1,1-z1)*dz1", "dlog(z1)", "rat(z1,1)*dz1", "dzb1"];
    let pick = |rng: &mut ChaCha8Rng| {
        let c = C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        OneForm::parse(pool[rng.random_range(0..pool.len())]).expect("fixed form").scale(c)
    };
    let mut gap: f64 = 0.0;
    let patterns = 10;
    for _ in 0..patterns {
        let n = rng.random_range(0..=2);
        let deltas: Vec<OneForm> = (0..=n).map(|_| pick(&mut rng)).collect();
        let ws: Vec<OneForm> = (0..n).map(|_| pick(&mut rng)).collect();
        let from = C::new(rng.random_range(0.2..0.6), rng.random_range(-0.3..0.3));
        let to = C::new(rng.random_range(0.2..0.6), rng.random_range(-0.3..0.3));
        let path = PiecewisePath::line(&[from], &[to])?;
        let ode = exponential_iterated_integral(&deltas, &ws, &path, opts)?;
        let series = exponential_series(&deltas, &ws, &path, None, opts)?;
        gap = gap.max((ode.value - series.value).norm());
    }
    let c = C::new(0.7, -0.4);
    let w = OneForm::dz(0).scale(c);
    let path = PiecewisePath::line(&[C::new(0.1, 0.2)], &[C::new(1.1, -0.3)])?;
    let words: Vec<Vec<usize>> = (1..=25).map(|k| vec![0; k]).collect();
    let sig = signature(&[w], &words, &path, opts)?;
    let sum: C = C::one() + sig.values.iter().sum::<C>();
    let exact = (c * (path.end()[0] - path.start()[0])).exp();
    Ok(ExponentialOutcome { patterns, max_series_gap: gap, exp_identity_gap: (sum - exact).norm() })
}

fn numeric_suite(seed: u64) -> Result<Vec<CheckLine>> {
    let opts = SolverOptions { tol: 1e-11, ..Default::default() };
    let o = numeric_hopf_corpus(seed, 50, &opts)?;
    let e = exponential_corpus(seed, &SolverOptions { tol: 1e-12, ..Default::default() })?;
    Ok(vec![
        line("numeric shuffle", o.cases, o.shuffle_max < 1e-8, format!("max residual {:.2e}", o.shuffle_max)),
        line("numeric coproduct", o.cases, o.coproduct_max < 1e-8, format!("max residual {:.2e}", o.coproduct_max)),
        line("numeric antipode", o.cases, o.antipode_max < 1e-8, format!("max residual {:.2e}", o.antipode_max)),
        line("transport multiplicative", o.cases, o.transport_max < 1e-7, format!("max residual {:.2e}", o.transport_max)),
        line("exponential vs series", e.patterns, e.max_series_gap < 1e-8, format!("max gap {:.2e}", e.max_series_gap)),
        line("exp of c dz", 1, e.exp_identity_gap < 1e-10, format!("gap {:.2e}", e.exp_identity_gap)),
    ])
}

fn currents_suite(seed: u64) -> Result<Vec<CheckLine>> {
    let rep = oracle_identities(&random_cases(seed, 200))?;
    Ok(vec![line(
        "currents identities",
        rep.cases,
        rep.pass(),
        format!("{} checks, {} brute-force, {} failures", rep.checks, rep.brute_force_checks, rep.failures.len()),
    )])
}

/// Tensor products of exterior algebras and truncated polynomial algebras,
/// cut off above degree 6.
pub fn random_formal_model(rng: &mut ChaCha8Rng) -> Result<DgaModel> {
    let mut m = DgaModel::ground_field();
    let odd: Vec<(String, u32)> =
        (0..rng.random_range(0..=3)).map(|i| (format!("u{i}"), [1, 1, 3, 5][rng.random_range(0..4)])).collect();
    if !odd.is_empty() {
        let refs: Vec<(&str, u32)> = odd.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        m = m.tensor(&exterior_model(&refs)?);
    }
    for i in 0..rng.random_range(0..=2) {
        let deg = [2, 4][rng.random_range(0..2)];
        m = m.tensor(&truncated_polynomial(&format!("p{i}"), deg, rng.random_range(1..=3))?);
    }
    Ok(m.truncate_above(6))
}

pub fn exactness_models(seed: u64) -> Result<Vec<(String, DgaModel)>> {
    let s2 = sphere_model(2)?;
    let mut out = vec![
        ("S2".to_string(), s2.clone()),
        ("S3".to_string(), sphere_model(3)?),
        ("S4".to_string(), sphere_model(4)?),
        ("T1".to_string(), torus_model(1)?),
        ("T2".to_string(), torus_model(2)?),
        ("S2xS2".to_string(), s2.tensor(&s2)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..20 {
        out.push((format!("random{i}"), random_formal_model(&mut rng)?));
    }
    Ok(out)
}

fn exactness_suite(seed: u64) -> Result<Vec<CheckLine>> {
    let mut failures = Vec::new();
    let models = exactness_models(seed)?;
    let mut sequences = 0;
    for (name, m) in &models {
        for k in 2..=m.max_degree().max(2) + 1 {
            let rep = check_exactness(&build_sequence_at(m, k)?);
            sequences += 1;
            if !rep.is_exact() {
                failures.push(format!("{name} k={k}"));
            }
        }
    }
    let mut cobar_bad = Vec::new();
    for name in fixture_names() {
        let set = fixture(name)?;
        let c = build_cobar(&set, 3, 2)?;
        for g in 0..c.generators().len() {
            if !c.d(c.d_generator(g)).values().all(Zero::is_zero) {
                cobar_bad.push(name.to_string());
                break;
            }
        }
    }
    Ok(vec![
        line("five-term sequences exact", sequences, failures.is_empty(), failures.join(", ")),
        line("cobar d∘d = 0 on fixtures", fixture_names().len(), cobar_bad.is_empty(), cobar_bad.join(", ")),
    ])
}
