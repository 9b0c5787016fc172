use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

use super::form::OneForm;
use super::ode::SolverOptions;
use super::path::PiecewisePath;
use super::poly::C;
use super::signature;

/// A rational combination of group words; `±(i+1)` is loop `i` or its inverse.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupRingElement {
    pub terms: BTreeMap<Vec<i32>, f64>,
}

fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

impl GroupRingElement {
    pub fn one() -> Self {
        Self::word(&[])
    }

    /// Loop `i` (0-based).
    pub fn generator(i: usize) -> Self {
        Self::word(&[i as i32 + 1])
    }

    pub fn inverse_generator(i: usize) -> Self {
        Self::word(&[-(i as i32 + 1)])
    }

    pub fn word(w: &[i32]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(free_reduce(w), 1.0);
        GroupRingElement { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            *out.terms.entry(w.clone()).or_insert(0.0) += c;
        }
        out.terms.retain(|_, c| *c != 0.0);
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        GroupRingElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GroupRingElement::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend(b);
                out = out.add(&GroupRingElement { terms: [(free_reduce(&w), x * y)].into_iter().collect() });
            }
        }
        out
    }

    /// `(g_{i₁} − 1)⋯(g_{i_k} − 1)`.
    pub fn augmentation_monomial(loops: &[usize]) -> Self {
        loops
            .iter()
            .fold(Self::one(), |acc, &i| acc.mul(&Self::generator(i).sub(&Self::one())))
    }
}

/// All words of length `1..=s` (or `0..=s`) over `k` letters, shortest first.
pub fn words_up_to(k: usize, s: usize, include_empty: bool) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = if include_empty { vec![Vec::new()] } else { Vec::new() };
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..s {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |a| {
                let mut x = w.clone();
                x.push(a);
                x
            }))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingMatrix {
    pub rows: Vec<Vec<usize>>,
    /// `entries[r][c] = ⟨word r, element c⟩`.
    pub entries: Vec<Vec<C>>,
    pub error: f64,
}

/// Pairs each word with each group-ring element by integrating the words
/// along the composed loop of every group word that occurs.
pub fn pi1_pairing_matrix(
    forms: &[OneForm],
    loops: &[PiecewisePath],
    rows: &[Vec<usize>],
    elements: &[GroupRingElement],
    lifted: bool,
    opts: &SolverOptions,
) -> Result<PairingMatrix> {
    let Some(first) = loops.first() else {
        return Err(Error::Input("no loops given".into()));
    };
    let base = first.start();
    for (i, l) in loops.iter().enumerate() {
        let ok = |p: &[C]| p.iter().zip(&base).all(|(a, b)| (a - b).norm() < 1e-12);
        if !lifted && (!ok(&l.start()) || !ok(&l.end())) {
            return Err(Error::Input(format!("loop {i} is not based at the common point")));
        }
    }
    let nonempty: Vec<Vec<usize>> = rows.iter().filter(|w| !w.is_empty()).cloned().collect();
    let mut cache: BTreeMap<Vec<i32>, Vec<C>> = BTreeMap::new();
    let mut error: f64 = 0.0;
    for e in elements {
        for w in e.terms.keys() {
            if cache.contains_key(w) || w.is_empty() {
                continue;
            }
            let piece = |g: i32| -> Result<PiecewisePath> {
                let idx = g.unsigned_abs() as usize - 1;
                let l = loops.get(idx).ok_or_else(|| Error::Input(format!("no loop {idx}")))?;
                Ok(if g > 0 { l.clone() } else { l.reversed() })
            };
            let mut path = piece(w[0])?;
            for &g in &w[1..] {
                path = if lifted { path.compose_lifted(&piece(g)?)? } else { path.compose(&piece(g)?)? };
            }
            let sig = signature(forms, &nonempty, &path, opts)?;
            error = error.max(sig.error);
            cache.insert(w.clone(), sig.values);
        }
    }
    let entries = rows
        .iter()
        .map(|r| {
            elements
                .iter()
                .map(|e| {
                    e.terms
                        .iter()
                        .map(|(w, c)| {
                            let v = if r.is_empty() {
                                C::new(1.0, 0.0)
                            } else if w.is_empty() {
                                C::new(0.0, 0.0)
                            } else {
                                cache[w][nonempty.iter().position(|x| x == r).expect("row present")]
                            };
                            v * *c
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(PairingMatrix { rows: rows.to_vec(), entries, error })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeterminantReport {
    pub determinant: C,
    pub abs_determinant: f64,
    pub condition_number: f64,
}

/// Determinant and 2-norm condition number of a square matrix after
/// dividing row `i` by `scale^{row_lengths[i]}`.
pub fn pairing_determinant(entries: &[Vec<C>], row_lengths: &[usize], scale: C) -> Result<DeterminantReport> {
    let n = entries.len();
    if entries.iter().any(|r| r.len() != n) || row_lengths.len() != n {
        return Err(Error::Input(format!("pairing matrix is not square ({n} rows)")));
    }
    let dm = DMatrix::from_fn(n, n, |i, j| entries[i][j] / scale.powu(row_lengths[i] as u32));
    let determinant = dm.clone().determinant();
    let sv = dm.svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DeterminantReport {
        determinant,
        abs_determinant: determinant.norm(),
        condition_number: if min > 0.0 { max / min } else { f64::INFINITY },
    })
}

/// Loops `γ₀` (around 0) and `γ₁` (around 1) in `ℂ∖{0,1}`, based at 1/2.
pub fn punctured_plane_loops() -> Vec<PiecewisePath> {
    vec![
        PiecewisePath::arc(C::new(0.0, 0.0), 0.5, 0.0, 2.0 * PI).expect("valid arc"),
        PiecewisePath::arc(C::new(1.0, 0.0), 0.5, PI, 3.0 * PI).expect("valid arc"),
    ]
}
