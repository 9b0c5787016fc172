//! Adams' cobar construction on normalized chains of a reduced simplicial
//! set, its `H₀` as an augmented algebra, and comparisons with group rings
//! and with the bar construction on cochains.
//!
//! On a single nondegenerate simplex of dimension `n ≥ 2`
//!
//! ```text
//! ∂[σ] = −[∂σ] + Σ_{1≤j<n} (−1)^j [σ_(j) | σ^(n−j)]
//! ```
//!
//! with front faces `σ_(j) = d_{j+1}⋯d_n σ` and rear faces `σ^(n−j) = d_0^j σ`;
//! `∂[σ] = 0` for 1-simplices. Degenerate simplices are zero. Words are
//! handled by the Leibniz rule with the sign `(−1)^{Σ_{k<i}(dim σ_k − 1)}`.

mod fixtures;
mod group_ring;
mod pairing;
mod simplicial;

pub use fixtures::{fixture, fixture_names, presentation_fixture};
pub use group_ring::{group_ring_oracle, GroupRingQuotient, Presentation};
pub use pairing::{pairing_with_integrals, GeometricRealization, IntegralPairingReport};
pub use simplicial::{CellEntry, Simplex, SimplicialSet, SimplicialSetDocument};

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use serde::Serialize;

use crate::bar::{bar_cohomology, build_bar};
use crate::dga::{BasisElement, DgaModel};
use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, kernel, q, QVec, Subquotient, Q};

/// A cobar letter: a nondegenerate simplex `(dim, index)` with `dim ≥ 1`.
pub type CobarLetter = (u32, usize);
pub type CobarWord = Vec<CobarLetter>;

fn word_degree(w: &[CobarLetter]) -> u32 {
    w.iter().map(|(d, _)| d - 1).sum()
}

/// The quotient `Ad / Ad_{>s}` of the cobar construction by words longer
/// than `s`, in degrees `≤ degree_cap + 1`.
#[derive(Clone, Debug)]
pub struct CobarComplex {
    set: SimplicialSet,
    length_cap: usize,
    degree_cap: u32,
    generators: Vec<CobarWord>,
    index: HashMap<CobarWord, usize>,
    differential: Vec<QVec>,
}

impl CobarComplex {
    pub fn set(&self) -> &SimplicialSet {
        &self.set
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn generators(&self) -> &[CobarWord] {
        &self.generators
    }

    pub fn index_of(&self, w: &[CobarLetter]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn degree(&self, g: usize) -> u32 {
        word_degree(&self.generators[g])
    }

    pub fn d_generator(&self, g: usize) -> &QVec {
        &self.differential[g]
    }

    pub fn d(&self, v: &QVec) -> QVec {
        let mut out = QVec::new();
        for (g, c) in v {
            axpy(&mut out, c, &self.differential[*g]);
        }
        out
    }

    pub fn render(&self, w: &[CobarLetter]) -> String {
        let names: Vec<&str> = w.iter().map(|(d, i)| self.set.name(*d, *i)).collect();
        format!("[{}]", names.join("|"))
    }

    /// `H_j` of the truncated complex.
    pub fn homology(&self, j: u32) -> Subquotient {
        let here: Vec<usize> = (0..self.generators.len()).filter(|&g| self.degree(g) == j).collect();
        let images: Vec<QVec> = here.iter().map(|&g| self.differential[g].clone()).collect();
        let cycles: Vec<QVec> = kernel(&images)
            .into_iter()
            .map(|v| v.into_iter().map(|(loc, c)| (here[loc], c)).collect())
            .collect();
        let boundaries: Vec<QVec> = (0..self.generators.len())
            .filter(|&g| self.degree(g) == j + 1)
            .map(|g| self.differential[g].clone())
            .collect();
        Subquotient::new(&cycles, &boundaries)
    }

    pub fn homology_ranks(&self) -> Vec<usize> {
        (0..=self.degree_cap).map(|j| self.homology(j).dim()).collect()
    }
}

/// `∂[σ]` for a single nondegenerate simplex, as a map from words to
/// coefficients (no truncation).
pub fn bracket_differential(set: &SimplicialSet, letter: CobarLetter) -> BTreeMap<CobarWord, Q> {
    let (n, i) = letter;
    let mut out: BTreeMap<CobarWord, Q> = BTreeMap::new();
    if n < 2 {
        return out;
    }
    let s = Simplex::nondegenerate(n, i);
    let mut add = |w: CobarWord, c: Q| {
        let e = out.entry(w).or_insert_with(|| q(0));
        *e += c;
    };
    for k in 0..=n {
        let f = set.face(&s, k);
        if !f.is_degenerate() {
            // -(-1)^k [d_k σ]
            let c = if k % 2 == 0 { q(-1) } else { q(1) };
            add(vec![(f.base_dim, f.base)], c);
        }
    }
    for j in 1..n {
        let front = set.front(&s, j);
        let rear = set.rear(&s, j);
        if front.is_degenerate() || rear.is_degenerate() {
            continue;
        }
        let c = if j % 2 == 0 { q(1) } else { q(-1) };
        add(vec![(front.base_dim, front.base), (rear.base_dim, rear.base)], c);
    }
    out.retain(|_, c| !num_traits::Zero::is_zero(c));
    out
}

/// Leibniz extension of [`bracket_differential`] to a word.
pub fn word_differential(set: &SimplicialSet, w: &[CobarLetter]) -> BTreeMap<CobarWord, Q> {
    let mut out: BTreeMap<CobarWord, Q> = BTreeMap::new();
    let mut eps = 0u32;
    for (pos, &letter) in w.iter().enumerate() {
        let sign = if eps % 2 == 0 { Q::one() } else { -Q::one() };
        for (piece, c) in bracket_differential(set, letter) {
            let mut v = w[..pos].to_vec();
            v.extend(piece);
            v.extend_from_slice(&w[pos + 1..]);
            *out.entry(v).or_insert_with(|| q(0)) += &sign * c;
        }
        eps += letter.0 - 1;
    }
    out.retain(|_, c| !num_traits::Zero::is_zero(c));
    out
}

pub fn build_cobar(set: &SimplicialSet, length_cap: usize, degree_cap: u32) -> Result<CobarComplex> {
    if length_cap == 0 {
        return Err(Error::Input("length cap must be positive".into()));
    }
    set.check_identities()?;
    let letters: Vec<CobarLetter> = (1..=set.dim())
        .flat_map(|n| (0..set.count(n)).map(move |i| (n, i)))
        .collect();
    let top = degree_cap + 1;
    let mut generators: Vec<CobarWord> = vec![Vec::new()];
    let mut frontier: Vec<CobarWord> = vec![Vec::new()];
    for _ in 0..length_cap {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if word_degree(w) + l.0 - 1 <= top {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        generators.extend(next.iter().cloned());
        frontier = next;
    }
    generators.sort_by(|a, b| (word_degree(a), a.len(), a).cmp(&(word_degree(b), b.len(), b)));
    let index: HashMap<CobarWord, usize> = generators.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let differential = generators
        .iter()
        .map(|w| {
            let mut v = QVec::new();
            for (t, c) in word_differential(set, w) {
                if t.len() <= length_cap {
                    add_entry(&mut v, index[&t], c);
                }
            }
            v
        })
        .collect();
    Ok(CobarComplex { set: set.clone(), length_cap, degree_cap, generators, index, differential })
}

/// `H₀` of the cobar construction as a presented algebra together with the
/// dimension of `H₀ / I^s`, `I` the augmentation ideal.
#[derive(Clone, Debug, Serialize)]
pub struct H0Algebra {
    /// Names of the algebra generators (the nondegenerate 1-simplices).
    pub generators: Vec<String>,
    /// One relation per nondegenerate 2-simplex: `∂[τ]` written in words of
    /// generator names with coefficients.
    pub relations: Vec<Vec<(Vec<String>, String)>>,
    pub s: usize,
    pub dimension: usize,
}

pub fn h0_algebra(set: &SimplicialSet, s: usize) -> Result<H0Algebra> {
    if s == 0 {
        return Err(Error::Input("truncation order must be positive".into()));
    }
    let generators: Vec<String> = (0..set.count(1)).map(|i| set.name(1, i).to_string()).collect();
    let relations = (0..set.count(2))
        .map(|t| {
            bracket_differential(set, (2, t))
                .into_iter()
                .map(|(w, c)| (w.iter().map(|(d, i)| set.name(*d, *i).to_string()).collect(), c.to_string()))
                .collect()
        })
        .collect();
    let dimension = if s == 1 {
        1
    } else {
        let cobar = build_cobar(set, s - 1, 0)?;
        cobar.homology(0).dim()
    };
    Ok(H0Algebra { generators, relations, s, dimension })
}

/// Normalized cochains `N•(X; Q)` with the Alexander–Whitney cup product.
/// Basis: the unit and the duals of nondegenerate simplices of positive
/// dimension. The product is associative but not graded-commutative.
pub fn cochain_model(set: &SimplicialSet) -> Result<DgaModel> {
    let mut basis = vec![BasisElement { name: "1".into(), degree: 0 }];
    let mut slot: HashMap<CobarLetter, usize> = HashMap::new();
    for n in 1..=set.dim() {
        for i in 0..set.count(n) {
            slot.insert((n, i), basis.len());
            basis.push(BasisElement { name: set.name(n, i).to_string(), degree: n });
        }
    }
    let mut differential = vec![QVec::new(); basis.len()];
    let mut product: BTreeMap<(usize, usize), QVec> = BTreeMap::new();
    for n in 2..=set.dim() {
        for t in 0..set.count(n) {
            let tau = Simplex::nondegenerate(n, t);
            let target = slot[&(n, t)];
            for k in 0..=n {
                let f = set.face(&tau, k);
                if f.is_degenerate() {
                    continue;
                }
                let c = if k % 2 == 0 { q(1) } else { q(-1) };
                add_entry(&mut differential[slot[&(f.base_dim, f.base)]], target, c);
            }
            for j in 1..n {
                let front = set.front(&tau, j);
                let rear = set.rear(&tau, j);
                if front.is_degenerate() || rear.is_degenerate() {
                    continue;
                }
                let key = (slot[&(front.base_dim, front.base)], slot[&(rear.base_dim, rear.base)]);
                add_entry(product.entry(key).or_default(), target, q(1));
            }
        }
    }
    product.retain(|_, v| !v.is_empty());
    DgaModel::from_parts(basis, 0, differential, product, None)
}

/// Rank tables of `H^j(B_s(N•X))` and `H_j(Ad_{≤s})` for `j ≤ degree_cap`.
#[derive(Clone, Debug, Serialize)]
pub struct RankComparison {
    pub s: usize,
    pub bar: Vec<usize>,
    pub cobar: Vec<usize>,
}

impl RankComparison {
    pub fn agrees(&self) -> bool {
        self.bar == self.cobar
    }
}

pub fn bar_cobar_rank_compare(set: &SimplicialSet, s: usize, degree_cap: u32) -> Result<RankComparison> {
    let model = cochain_model(set)?;
    let bar = build_bar(&model, s, degree_cap)?;
    let bar_ranks = bar_cohomology(&bar).top_ranks().to_vec();
    let cobar = build_cobar(set, s, degree_cap)?;
    Ok(RankComparison { s, bar: bar_ranks, cobar: cobar.homology_ranks() })
}
