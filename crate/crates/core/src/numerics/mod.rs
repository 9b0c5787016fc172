//! Iterated line integrals, parallel transport and exponential iterated
//! integrals along piecewise-analytic paths in `ℂⁿ`.
//!
//! Everything is reduced to one linear system `y' = y A(t)` solved by
//! adaptive Gauss–Legendre collocation. Word letters are integrated
//! innermost-first: `∫ w₁…w_r = ∫_{t₁<…<t_r} f₁(t₁)…f_r(t_r)`.

mod form;
mod ode;
mod pairing;
mod path;
mod poly;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::shuffle_hopf::{antipode, coproduct, shuffle, Letter, Word};

pub use form::{symbolic_wedge, wedge_at, FormTerm, OneForm, RationalFn};
pub use ode::{solve_linear_flow, FlowResult, GaussTableau, LinearSystem, SolverOptions, StepStats};
pub use pairing::{
    pairing_determinant, pi1_pairing_matrix, punctured_plane_loops, words_up_to, DeterminantReport, GroupRingElement,
    PairingMatrix,
};
pub use path::{PathDocument, PiecewisePath, Segment, SegmentDocument, JUNCTION_TOLERANCE};
pub use poly::{polynomial_roots, Laurent, Monomial, Poly, Var, C};

/// A numerical value with its accumulated error estimate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub value: C,
    pub error: f64,
    pub steps: usize,
}

/// Iterated integrals of several words over one alphabet, sharing prefixes.
#[derive(Clone, Debug)]
pub struct Signature {
    pub values: Vec<C>,
    pub error: f64,
    pub stats: StepStats,
}

/// Integrates every word (letters index `alphabet`) along `path` in one pass.
pub fn signature(alphabet: &[OneForm], words: &[Vec<usize>], path: &PiecewisePath, opts: &SolverOptions) -> Result<Signature> {
    let mut trie: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    trie.insert(Vec::new(), 0);
    let mut entries = Vec::new();
    for w in words {
        if let Some(&bad) = w.iter().find(|&&a| a >= alphabet.len()) {
            return Err(Error::Input(format!("letter {bad} outside an alphabet of {}", alphabet.len())));
        }
        for len in 1..=w.len() {
            if !trie.contains_key(&w[..len]) {
                let id = trie.len();
                let parent = trie[&w[..len - 1]];
                trie.insert(w[..len].to_vec(), id);
                entries.push((parent, id, w[len - 1], C::new(1.0, 0.0)));
            }
        }
    }
    let size = trie.len();
    let sys = LinearSystem { size, forms: alphabet.to_vec(), entries };
    let mut init = vec![C::new(0.0, 0.0); size];
    init[0] = C::new(1.0, 0.0);
    let flow = solve_linear_flow(&sys, path, vec![init], opts)?;
    let values = words.iter().map(|w| flow.rows[0][trie[w]]).collect();
    Ok(Signature { values, error: flow.error, stats: flow.stats })
}

/// `∫_γ w₁…w_r`, with `w₁` innermost.
pub fn iterated_integral(word: &[OneForm], path: &PiecewisePath, opts: &SolverOptions) -> Result<Estimate> {
    let sig = signature(word, &[(0..word.len()).collect()], path, opts)?;
    Ok(Estimate { value: sig.values[0], error: sig.error, steps: sig.stats.accepted })
}

/// Square matrix of one-forms; `None` entries are zero.
#[derive(Clone, Debug)]
pub struct Connection {
    pub entries: Vec<Vec<Option<OneForm>>>,
    /// Claimed to satisfy `dω + ω∧ω = 0`.
    pub flat: bool,
}

impl Connection {
    /// Parses a matrix of form strings; `"0"` is the zero form.
    pub fn parse(rows: &[Vec<&str>], flat: bool) -> Result<Connection> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Input("connection matrix must be square".into()));
            }
            entries.push(
                r.iter()
                    .map(|s| if s.trim() == "0" { Ok(None) } else { OneForm::parse(s).map(Some) })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(Connection { entries, flat })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| r.iter().take(i + 1).all(Option::is_none))
    }

    fn system(&self) -> LinearSystem {
        let mut forms = Vec::new();
        let mut entries = Vec::new();
        for (j, r) in self.entries.iter().enumerate() {
            for (k, f) in r.iter().enumerate() {
                if let Some(f) = f {
                    entries.push((j, k, forms.len(), C::new(1.0, 0.0)));
                    forms.push(f.clone());
                }
            }
        }
        LinearSystem { size: self.size(), forms, entries }
    }

    /// Largest coefficient of `dω + ω∧ω` over the sample points.
    pub fn flatness_residual(&self, points: &[Vec<C>]) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for z in points {
            for i in 0..n {
                for k in 0..n {
                    let mut acc: Vec<((Var, Var), C)> = Vec::new();
                    let mut add = |terms: Vec<((Var, Var), C)>| {
                        for (key, c) in terms {
                            match acc.iter_mut().find(|(kk, _)| *kk == key) {
                                Some((_, x)) => *x += c,
                                None => acc.push((key, c)),
                            }
                        }
                    };
                    if let Some(f) = &self.entries[i][k] {
                        add(f.exterior_derivative(z));
                    }
                    for j in 0..n {
                        if let (Some(a), Some(b)) = (&self.entries[i][j], &self.entries[j][k]) {
                            add(wedge_at(a, b, z));
                        }
                    }
                    worst = acc.iter().map(|(_, c)| c.norm()).fold(worst, f64::max);
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportResult {
    pub matrix: Vec<Vec<C>>,
    pub error: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Solves `T' = T · γ*ω`, `T(0) = 1`.
pub fn transport(conn: &Connection, path: &PiecewisePath, opts: &SolverOptions) -> Result<TransportResult> {
    let n = conn.size();
    let init = (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect())
        .collect();
    let flow = solve_linear_flow(&conn.system(), path, init, opts)?;
    Ok(TransportResult {
        matrix: flow.rows,
        error: flow.error,
        accepted_steps: flow.stats.accepted,
        rejected_steps: flow.stats.rejected,
    })
}

fn check_pattern(deltas: &[OneForm], ws: &[OneForm]) -> Result<()> {
    if deltas.len() != ws.len() + 1 {
        return Err(Error::Input(format!("{} exponents need {} letters, got {}", deltas.len(), deltas.len().saturating_sub(1), ws.len())));
    }
    Ok(())
}

/// `∫ e^{δ₀} w₁ e^{δ₁} … w_n e^{δ_n}`: entry `(0, n)` of the transport of
/// the connection with `δ_i` on the diagonal and `w_{i+1}` above it.
pub fn exponential_iterated_integral(deltas: &[OneForm], ws: &[OneForm], path: &PiecewisePath, opts: &SolverOptions) -> Result<Estimate> {
    check_pattern(deltas, ws)?;
    let n = ws.len();
    let mut forms = Vec::new();
    let mut entries = Vec::new();
    for (i, d) in deltas.iter().enumerate() {
        if !d.terms.is_empty() {
            entries.push((i, i, forms.len(), C::new(1.0, 0.0)));
            forms.push(d.clone());
        }
    }
    for (i, w) in ws.iter().enumerate() {
        entries.push((i, i + 1, forms.len(), C::new(1.0, 0.0)));
        forms.push(w.clone());
    }
    let sys = LinearSystem { size: n + 1, forms, entries };
    let mut init = vec![C::new(0.0, 0.0); n + 1];
    init[0] = C::new(1.0, 0.0);
    let flow = solve_linear_flow(&sys, path, vec![init], opts)?;
    Ok(Estimate { value: flow.rows[0][n], error: flow.error, steps: flow.stats.accepted })
}

/// Sampled `∫_γ |f|` for the pullback of `w`.
fn sampled_l1_bound(w: &OneForm, path: &PiecewisePath) -> f64 {
    path.segments()
        .iter()
        .map(|s| {
            (0..=64)
                .map(|i| {
                    let t = i as f64 / 64.0;
                    w.pullback(&s.eval(t), &s.velocity(t)).norm()
                })
                .fold(0.0, f64::max)
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesEstimate {
    pub value: C,
    /// Number of exponential letters kept.
    pub terms: usize,
    pub remainder_bound: f64,
    pub quadrature_error: f64,
}

/// The defining sum `Σ_{k₀,…,k_n} ∫ δ₀^{k₀} w₁ δ₁^{k₁} … w_n δ_n^{k_n}`,
/// truncated once the tail bound `Π‖w_j‖ · Σ_{K>N} ((n+1)D)^K/K!` drops
/// below `tol/10`, or at `max_terms` when given.
pub fn exponential_series(
    deltas: &[OneForm],
    ws: &[OneForm],
    path: &PiecewisePath,
    max_terms: Option<usize>,
    opts: &SolverOptions,
) -> Result<SeriesEstimate> {
    check_pattern(deltas, ws)?;
    let n = ws.len();
    let d = deltas.iter().map(|x| sampled_l1_bound(x, path)).fold(0.0, f64::max) * (n + 1) as f64;
    let wprod: f64 = ws.iter().map(|x| sampled_l1_bound(x, path)).product();
    let tail = |big_n: usize| {
        let mut term = 1.0;
        for k in 1..=big_n {
            term *= d / k as f64;
        }
        let mut sum = 0.0;
        for k in big_n + 1..big_n + 200 {
            term *= d / k as f64;
            sum += term;
            if term < 1e-300 {
                break;
            }
        }
        wprod * sum
    };
    let big_n = match max_terms {
        Some(m) => m,
        None => (0..=60).find(|&m| tail(m) < opts.tol / 10.0).ok_or_else(|| {
            Error::NonConvergence("exponential series needs more than 60 terms".into())
        })?,
    };
    // alphabet: deltas then ws
    let alphabet: Vec<OneForm> = deltas.iter().chain(ws).cloned().collect();
    let mut words = Vec::new();
    let mut ks = vec![0usize; n + 1];
    loop {
        let mut w = Vec::new();
        for i in 0..=n {
            w.extend(std::iter::repeat(i).take(ks[i]));
            if i < n {
                w.push(n + 1 + i);
            }
        }
        if ks.iter().sum::<usize>() <= big_n {
            words.push(w);
        }
        // next composition with total ≤ big_n
        let mut i = 0;
        loop {
            if i > n {
                break;
            }
            ks[i] += 1;
            if ks.iter().sum::<usize>() <= big_n {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
        if i > n {
            break;
        }
    }
    let sig = signature(&alphabet, &words, path, opts)?;
    Ok(SeriesEstimate {
        value: sig.values.iter().sum(),
        terms: big_n,
        remainder_bound: tail(big_n),
        quadrature_error: sig.error * words.len() as f64,
    })
}

fn hopf_word(w: &[usize]) -> Word {
    Word(w.iter().map(|&a| Letter::new(a as u32, 1)).collect())
}

fn word_indices(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.id as usize).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: C,
    pub rhs: C,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityReport {
    fn new(name: &str, lhs: C, rhs: C, tol: f64) -> Self {
        let residual = (lhs - rhs).norm();
        IdentityReport { name: name.into(), lhs, rhs, residual, tol, pass: residual < tol }
    }
}

/// `∫u · ∫v` against `Σ ∫(u ш v)`.
pub fn numeric_shuffle_check(alphabet: &[OneForm], u: &[usize], v: &[usize], path: &PiecewisePath, tol: f64, opts: &SolverOptions) -> Result<IdentityReport> {
    let sh = shuffle(&hopf_word(u), &hopf_word(v));
    let mut words = vec![u.to_vec(), v.to_vec()];
    let mut coeffs = Vec::new();
    for (w, c) in sh.iter() {
        words.push(word_indices(w));
        coeffs.push(c.to_f64().unwrap_or(f64::NAN));
    }
    let sig = signature(alphabet, &words, path, opts)?;
    let rhs: C = sig.values[2..].iter().zip(&coeffs).map(|(x, c)| x * c).sum();
    Ok(IdentityReport::new("shuffle", sig.values[0] * sig.values[1], rhs, tol))
}

/// Coproduct identity on `αβ` and antipode identity on `α⁻¹`.
pub fn composition_and_reversal_check(
    alphabet: &[OneForm],
    word: &[usize],
    alpha: &PiecewisePath,
    beta: &PiecewisePath,
    tol: f64,
    opts: &SolverOptions,
) -> Result<Vec<IdentityReport>> {
    let w = hopf_word(word);
    let cop = coproduct(&w);
    let mut prefixes = Vec::new();
    let mut suffixes = Vec::new();
    let mut coeffs = Vec::new();
    for ((l, r), c) in cop.iter() {
        prefixes.push(word_indices(l));
        suffixes.push(word_indices(r));
        coeffs.push(c.to_f64().unwrap_or(f64::NAN));
    }
    let on_a = signature(alphabet, &prefixes, alpha, opts)?;
    let on_b = signature(alphabet, &suffixes, beta, opts)?;
    let whole = signature(alphabet, &[word.to_vec()], &alpha.compose(beta)?, opts)?;
    let split: C = (0..coeffs.len()).map(|i| on_a.values[i] * on_b.values[i] * coeffs[i]).sum();

    let anti = antipode(&w);
    let (anti_words, anti_coeffs): (Vec<_>, Vec<_>) =
        anti.iter().map(|(x, c)| (word_indices(x), c.to_f64().unwrap_or(f64::NAN))).unzip();
    let fwd = signature(alphabet, &anti_words, alpha, opts)?;
    let back = signature(alphabet, &[word.to_vec()], &alpha.reversed(), opts)?;
    let via_antipode: C = fwd.values.iter().zip(&anti_coeffs).map(|(x, c)| x * c).sum();
    Ok(vec![
        IdentityReport::new("coproduct", whole.values[0], split, tol),
        IdentityReport::new("antipode", back.values[0], via_antipode, tol),
    ])
}
