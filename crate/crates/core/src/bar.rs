//! The reduced bar construction `B(k, A, k)` of a model with `A⁰ = k`.
//!
//! Generators are words `[a1|…|ar]` of positive-degree basis elements in
//! degree `Σ(deg ai − 1)`. The differential is
//!
//! ```text
//! d[a1|…|ar] = Σ_i (-1)^i [Ja1|…|Ja(i-1)|d ai|…|ar]
//!            + Σ_{i<r} (-1)^{i+1} [Ja1|…|Ja(i-1)|Jai·a(i+1)|…|ar]
//! ```
//!
//! with `J v = (-1)^{deg v} v`, plus the augmentation term `d_C`, which is
//! identically zero when both module factors are the ground field.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::dga::{cohomology, DgaModel};
use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, kernel, QVec, Subquotient, Q};
use crate::shuffle_hopf::{self, FormalWordSum, Letter, Word};

/// A bar generator `[a1|…|ar]`; letters carry basis indices of the model.
pub type BarElement = Word;

#[derive(Clone, Debug)]
pub struct BarComplex {
    model: DgaModel,
    length_cap: usize,
    degree_cap: u32,
    generators: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Length-preserving part of the differential (from `d_A`).
    internal: Vec<Option<QVec>>,
    /// Length-lowering part (from products of adjacent slots).
    product: Vec<Option<QVec>>,
}

impl BarComplex {
    pub fn model(&self) -> &DgaModel {
        &self.model
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn degree(&self, g: usize) -> u32 {
        self.generators[g].shifted_degree() as u32
    }

    /// Bar filtration index of a generator (its word length).
    pub fn filtration(&self, g: usize) -> usize {
        self.generators[g].len()
    }

    /// Generators of bar degree `j` in `B_s`.
    pub fn generators_in(&self, j: u32, s: usize) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| self.degree(g) == j && self.filtration(g) <= s)
            .collect()
    }

    /// Full differential of a generator; `None` above the degree cap.
    pub fn d_generator(&self, g: usize) -> Option<QVec> {
        let mut out = self.internal[g].clone()?;
        axpy(&mut out, &Q::one(), self.product[g].as_ref()?);
        Some(out)
    }

    pub fn d_internal(&self, g: usize) -> Option<&QVec> {
        self.internal[g].as_ref()
    }

    pub fn d(&self, v: &QVec) -> Option<QVec> {
        let mut out = QVec::new();
        for (g, c) in v {
            axpy(&mut out, c, &self.d_generator(*g)?);
        }
        Some(out)
    }

    pub fn to_vec(&self, s: &FormalWordSum) -> Option<QVec> {
        let mut out = QVec::new();
        for (w, c) in s.iter() {
            add_entry(&mut out, self.index_of(w)?, c.clone());
        }
        Some(out)
    }

    pub fn to_sum(&self, v: &QVec) -> FormalWordSum {
        let mut out = FormalWordSum::zero();
        for (g, c) in v {
            out.add_term(self.generators[*g].clone(), c.clone());
        }
        out
    }

    /// The augmentation term `d_C` of a generator, computed from the two
    /// augmentations of the model.
    pub fn d_c(&self, g: usize) -> FormalWordSum {
        let w = &self.generators[g];
        let r = w.len();
        let mut out = FormalWordSum::zero();
        if r == 0 {
            return out;
        }
        let m = &self.model;
        let letters = w.letters();
        // (-1)^r [Ja1|…|Ja(r-1)] ε1(ar)
        let last = &m.augmentation(1)[letters[r - 1].id as usize];
        if !last.is_zero() {
            let mut c = if r % 2 == 0 { Q::one() } else { -Q::one() };
            for l in &letters[..r - 1] {
                if l.degree % 2 == 1 {
                    c = -c;
                }
            }
            out.add_term(Word(letters[..r - 1].to_vec()), c * last);
        }
        // - ε0(a1) [a2|…|ar]
        let first = &m.augmentation(0)[letters[0].id as usize];
        if !first.is_zero() {
            out.add_term(Word(letters[1..].to_vec()), -first.clone());
        }
        out
    }
}

fn letter(model: &DgaModel, i: usize) -> Letter {
    Letter::new(i as u32, model.degree(i))
}

/// Builds `B_s` truncated at bar degree `degree_cap`. Generators one degree
/// above the cap are included (without differential) so that cohomology up
/// to the cap is exact.
pub fn build_bar(model: &DgaModel, length_cap: usize, degree_cap: u32) -> Result<BarComplex> {
    if length_cap == 0 {
        return Err(Error::Input("length cap must be positive".into()));
    }
    let deg0 = model.basis_in_degree(0);
    if deg0 != vec![model.unit()] {
        return Err(Error::Precondition("bar construction needs A^0 spanned by the unit".into()));
    }
    let letters: Vec<usize> = model.positive_basis();
    let top = degree_cap as i64 + 1;
    let mut generators = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..length_cap {
        let mut next = Vec::new();
        for w in &frontier {
            for &i in &letters {
                let l = letter(model, i);
                if w.shifted_degree() + l.shifted_degree() <= top {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        generators.extend(next.iter().cloned());
        frontier = next;
    }
    generators.sort_by(|a, b| (a.shifted_degree(), a.len(), a).cmp(&(b.shifted_degree(), b.len(), b)));
    let index: HashMap<Word, usize> = generators.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let mut internal = Vec::with_capacity(generators.len());
    let mut product = Vec::with_capacity(generators.len());
    for w in &generators {
        if w.shifted_degree() > degree_cap as i64 {
            internal.push(None);
            product.push(None);
            continue;
        }
        let (di, dp) = bar_differential_parts(model, w);
        let lookup = |s: FormalWordSum| -> QVec {
            let mut out = QVec::new();
            for (t, c) in s.iter() {
                let g = index[t];
                add_entry(&mut out, g, c.clone());
            }
            out
        };
        internal.push(Some(lookup(di)));
        product.push(Some(lookup(dp)));
    }
    Ok(BarComplex {
        model: model.clone(),
        length_cap,
        degree_cap,
        generators,
        index,
        internal,
        product,
    })
}

/// The two sums of the bar differential on a single word.
fn bar_differential_parts(model: &DgaModel, w: &Word) -> (FormalWordSum, FormalWordSum) {
    let a = w.letters();
    let r = a.len();
    let mut internal = FormalWordSum::zero();
    let mut product = FormalWordSum::zero();
    // J-sign accumulated over a1..a(i-1)
    let mut j_sign = Q::one();
    for i in 0..r {
        let pos = i + 1;
        let base = if pos % 2 == 0 { Q::one() } else { -Q::one() };
        let da = model.d_basis(a[i].id as usize);
        for (k, c) in da {
            let mut v = a.to_vec();
            v[i] = letter(model, *k);
            internal.add_term(Word(v), &base * &j_sign * c);
        }
        if i + 1 < r {
            let sign_i = if a[i].degree % 2 == 1 { -Q::one() } else { Q::one() };
            let coeff = -&base * &j_sign * sign_i;
            let prod = model.mul_basis(a[i].id as usize, a[i + 1].id as usize);
            for (k, c) in &prod {
                let mut v = a[..i].to_vec();
                v.push(letter(model, *k));
                v.extend_from_slice(&a[i + 2..]);
                product.add_term(Word(v), &coeff * c);
            }
        }
        if a[i].degree % 2 == 1 {
            j_sign = -j_sign;
        }
    }
    (internal, product)
}

/// Cohomology of every filtration level `B_s`, `s ≤ length_cap`.
#[derive(Clone, Debug)]
pub struct BarCohomology {
    length_cap: usize,
    degree_cap: u32,
    /// `ranks[s][j] = rank H^j(B_s)`.
    ranks: Vec<Vec<usize>>,
    /// Subquotients for `B_{length_cap}`, indexed by degree.
    top: Vec<Subquotient>,
}

impl BarCohomology {
    pub fn rank(&self, s: usize, j: u32) -> usize {
        self.ranks[s][j as usize]
    }

    /// Ranks of `H^j(B_s)` at the full length cap.
    pub fn top_ranks(&self) -> &[usize] {
        &self.ranks[self.length_cap]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn representatives(&self, j: u32) -> &[QVec] {
        self.top[j as usize].reps()
    }

    pub fn class_of(&self, j: u32, z: &QVec) -> Option<Vec<Q>> {
        self.top.get(j as usize)?.class_of(z)
    }
}

/// Subquotient `H^j` of the subcomplex spanned by `allowed` generators.
fn cohomology_at(bar: &BarComplex, j: u32, allowed: impl Fn(usize) -> bool + Copy, use_full: bool) -> Subquotient {
    let here: Vec<usize> = (0..bar.generators.len())
        .filter(|&g| bar.degree(g) == j && allowed(g))
        .collect();
    let diff = |g: usize| -> QVec {
        if use_full {
            bar.d_generator(g).expect("within degree cap")
        } else {
            bar.d_internal(g).expect("within degree cap").clone()
        }
    };
    let images: Vec<QVec> = here.iter().map(|&g| diff(g)).collect();
    let cycles: Vec<QVec> = kernel(&images)
        .into_iter()
        .map(|v| v.into_iter().map(|(loc, c)| (here[loc], c)).collect())
        .collect();
    let boundaries: Vec<QVec> = if j == 0 {
        Vec::new()
    } else {
        (0..bar.generators.len())
            .filter(|&g| bar.degree(g) == j - 1 && allowed(g))
            .map(diff)
            .collect()
    };
    Subquotient::new(&cycles, &boundaries)
}

/// `H^j` of the subcomplex of words whose length lies in `lengths`. The
/// range must describe a subcomplex (for instance `1..=2`, since the
/// differential never lowers length to zero).
pub fn cohomology_of_lengths(bar: &BarComplex, j: u32, lengths: std::ops::RangeInclusive<usize>) -> Subquotient {
    cohomology_at(bar, j, |g| lengths.contains(&bar.filtration(g)), true)
}

pub fn bar_cohomology(bar: &BarComplex) -> BarCohomology {
    let mut ranks = Vec::new();
    let mut top = Vec::new();
    for s in 0..=bar.length_cap {
        let mut row = Vec::new();
        for j in 0..=bar.degree_cap {
            let sq = cohomology_at(bar, j, |g| bar.filtration(g) <= s, true);
            row.push(sq.dim());
            if s == bar.length_cap {
                top.push(sq);
            }
        }
        ranks.push(row);
    }
    BarCohomology { length_cap: bar.length_cap, degree_cap: bar.degree_cap, ranks, top }
}

/// Shuffle product of bar elements, signs from shifted degrees.
pub fn bar_shuffle(x: &BarElement, y: &BarElement) -> FormalWordSum {
    shuffle_hopf::shuffle(x, y)
}

/// Predicted and observed ranks of the first page of the bar-filtration
/// spectral sequence, keyed by `(s, t)` with `t` the total form degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Table {
    pub predicted: BTreeMap<(usize, u32), usize>,
    pub observed: BTreeMap<(usize, u32), usize>,
}

impl E1Table {
    pub fn agrees(&self) -> bool {
        self.predicted == self.observed
    }
}

/// `E1^{-s,t} = [H^{>0}(A)^{⊗s}]^t`, predicted from `H•(A)` and observed as the
/// cohomology of the associated graded of the bar filtration.
pub fn em_e1_ranks(model: &DgaModel, s_max: usize, t_max: u32) -> Result<E1Table> {
    let ring = cohomology(model);
    crate::dga::require_connected(&ring)?;
    let mut predicted = BTreeMap::new();
    // conv[s][t] = rank of [H^{>0}^{⊗s}]^t
    let mut conv = vec![vec![0usize; t_max as usize + 1]; s_max + 1];
    conv[0][0] = 1;
    for s in 1..=s_max {
        for t in 0..=t_max as usize {
            let mut total = 0;
            for last in 1..=t {
                total += conv[s - 1][t - last] * ring.rank(last);
            }
            conv[s][t] = total;
        }
    }
    for (s, row) in conv.iter().enumerate() {
        for t in 0..=t_max {
            if t as usize >= s {
                predicted.insert((s, t), row[t as usize]);
            }
        }
    }
    // bar degree j = t - s; need differential out of degree j, so cap at t_max
    let bar = build_bar(model, s_max.max(1), t_max)?;
    let mut observed = BTreeMap::new();
    for s in 0..=s_max {
        for t in 0..=t_max {
            if (t as usize) < s {
                continue;
            }
            let j = t - s as u32;
            let sq = cohomology_at(&bar, j, |g| bar.filtration(g) == s, false);
            observed.insert((s, t), sq.dim());
        }
    }
    Ok(E1Table { predicted, observed })
}

/// Ranks of `Hom(π_n(X), Q)` from the indecomposables of bar cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyRanks {
    pub degree_cap: u32,
    /// `pi[n]` for `2 ≤ n ≤ degree_cap + 1`.
    pub pi: BTreeMap<u32, usize>,
}

impl HomotopyRanks {
    pub fn rank(&self, n: u32) -> usize {
        self.pi.get(&n).copied().unwrap_or(0)
    }
}

pub fn homotopy_ranks(model: &DgaModel, degree_cap: u32) -> Result<HomotopyRanks> {
    let ring = cohomology(model);
    crate::dga::require_connected(&ring)?;
    if ring.rank(1) != 0 {
        return Err(Error::Precondition(format!(
            "homotopy ranks need H^1 = 0, found rank {}",
            ring.rank(1)
        )));
    }
    if !model.basis_in_degree(1).is_empty() {
        return Err(Error::Precondition(
            "degree-1 basis elements make word length unbounded in fixed degree".into(),
        ));
    }
    // every letter has shifted degree >= 1, so length <= degree
    let bar = build_bar(model, degree_cap as usize + 1, degree_cap)?;
    let coh = bar_cohomology(&bar);
    let mut pi = BTreeMap::new();
    for j in 1..=degree_cap {
        let h = coh.representatives(j).len();
        let mut decomposables = Vec::new();
        for a in 1..j {
            let b = j - a;
            for x in coh.representatives(a) {
                for y in coh.representatives(b) {
                    let prod = bar_shuffle_vec(&bar, x, y);
                    let cls = coh.class_of(j, &prod).expect("shuffle of cocycles is a cocycle");
                    decomposables.push(crate::dga::to_sparse(&cls));
                }
            }
        }
        let dec = crate::linalg::rank(&decomposables);
        pi.insert(j + 1, h - dec);
    }
    Ok(HomotopyRanks { degree_cap, pi })
}

/// Shuffle product of two chains given as generator vectors.
pub fn bar_shuffle_vec(bar: &BarComplex, x: &QVec, y: &QVec) -> QVec {
    let prod = bar.to_sum(x).shuffle(&bar.to_sum(y));
    bar.to_vec(&prod).expect("product stays within the caps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{sphere_model, torus_model};
    use crate::linalg::q;

    fn word(model: &DgaModel, names: &[&str]) -> Word {
        Word(
            names
                .iter()
                .map(|n| letter(model, model.index_of(n).expect("known name")))
                .collect(),
        )
    }

    #[test]
    fn sphere_generators_are_closed() {
        let m = sphere_model(3).unwrap();
        let bar = build_bar(&m, 3, 6).unwrap();
        let ws: Vec<usize> = (0..bar.generators().len()).filter(|&g| bar.degree(g) <= 6).collect();
        assert_eq!(ws.len(), 4);
        for g in ws {
            assert!(bar.d_generator(g).unwrap().is_empty());
        }
    }

    #[test]
    fn torus_length_two_differential() {
        let m = torus_model(1).unwrap();
        let bar = build_bar(&m, 2, 1).unwrap();
        let g = bar.index_of(&word(&m, &["dx", "dy"])).unwrap();
        let target = bar.index_of(&word(&m, &["dx^dy"])).unwrap();
        assert_eq!(bar.d_generator(g).unwrap().get(&target), Some(&q(-1)));
    }

    #[test]
    fn augmentation_term_vanishes() {
        for m in [torus_model(1).unwrap(), sphere_model(2).unwrap()] {
            let bar = build_bar(&m, 3, 3).unwrap();
            for g in 0..bar.generators().len() {
                assert!(bar.d_c(g).is_zero());
            }
        }
    }

    #[test]
    fn torus_h0_of_b2() {
        let m = torus_model(1).unwrap();
        let coh = bar_cohomology(&build_bar(&m, 2, 1).unwrap());
        assert_eq!(coh.rank(2, 0), 6);
        assert_eq!(coh.rank(1, 0), 3);
        assert_eq!(coh.rank(0, 0), 1);
    }

    #[test]
    fn ground_field_bar() {
        let m = DgaModel::ground_field();
        let coh = bar_cohomology(&build_bar(&m, 3, 3).unwrap());
        assert_eq!(coh.top_ranks(), &[1, 0, 0, 0]);
    }

    #[test]
    fn sphere_shuffles() {
        let s3 = sphere_model(3).unwrap();
        let w = word(&s3, &["w"]);
        assert_eq!(bar_shuffle(&w, &w).coeff(&word(&s3, &["w", "w"])), q(2));
        let s2 = sphere_model(2).unwrap();
        let w = word(&s2, &["w"]);
        assert!(bar_shuffle(&w, &w).is_zero());
        let ww = word(&s2, &["w", "w"]);
        let p = bar_shuffle(&ww, &ww);
        assert_eq!(p.coeff(&word(&s2, &["w", "w", "w", "w"])), q(2));
    }

    #[test]
    fn e1_examples() {
        let t = em_e1_ranks(&sphere_model(2).unwrap(), 3, 6).unwrap();
        for ((s, tt), r) in &t.predicted {
            assert_eq!(*r, usize::from(*tt as usize == 2 * s));
        }
        assert!(t.agrees());
        let t = em_e1_ranks(&torus_model(1).unwrap(), 2, 2).unwrap();
        assert_eq!(t.predicted[&(1, 1)], 2);
        assert_eq!(t.predicted[&(2, 2)], 4);
        assert!(t.agrees());
    }

    #[test]
    fn homotopy_of_spheres() {
        let h = homotopy_ranks(&sphere_model(2).unwrap(), 4).unwrap();
        assert_eq!((h.rank(2), h.rank(3), h.rank(4), h.rank(5)), (1, 1, 0, 0));
        let h = homotopy_ranks(&sphere_model(3).unwrap(), 6).unwrap();
        assert_eq!(h.pi.iter().filter(|(_, r)| **r > 0).map(|(n, _)| *n).collect::<Vec<_>>(), vec![3]);
        let h = homotopy_ranks(&sphere_model(4).unwrap(), 7).unwrap();
        assert_eq!(h.pi.iter().filter(|(_, r)| **r > 0).map(|(n, _)| *n).collect::<Vec<_>>(), vec![4, 7]);
        assert!(homotopy_ranks(&torus_model(1).unwrap(), 2).is_err());
    }
}
