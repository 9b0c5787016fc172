use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::bar::{bar_cohomology, build_bar};
use crate::dga::{torus_model, wedge_of_circles, DgaModel};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, QVec};
use crate::numerics::{
    pairing_determinant, pi1_pairing_matrix, punctured_plane_loops, GroupRingElement, OneForm, PiecewisePath,
    SolverOptions, C,
};

use super::group_ring::{group_ring_oracle, Presentation};
use super::fixtures::presentation_fixture;

/// A space with a de Rham model, one closed form per degree-1 basis element
/// and loops realizing the generators of a presentation of `π₁`.
#[derive(Clone, Debug)]
pub struct GeometricRealization {
    pub name: String,
    pub model: DgaModel,
    /// Form for each degree-1 basis element, by name.
    pub forms: BTreeMap<String, OneForm>,
    /// Loop `i` realizes presentation generator `i`.
    pub loops: Vec<PiecewisePath>,
    pub presentation: Presentation,
    /// Loops compose by translation (universal cover of a torus).
    pub lifted: bool,
    /// Period used to normalize rows: a length-`k` word is divided by `period^k`.
    pub period: C,
}

impl GeometricRealization {
    /// `ℂ∖{0,1}` with `dz/z`, `dz/(1−z)`: a wedge of two circles.
    pub fn punctured_plane() -> Result<Self> {
        let forms = [("a1", "dlog(z1)"), ("a2", "rat(1,1-z1)*dz1")]
            .iter()
            .map(|(n, f)| Ok((n.to_string(), OneForm::parse(f)?)))
            .collect::<Result<_>>()?;
        Ok(GeometricRealization {
            name: "punctured-plane".into(),
            model: wedge_of_circles(2)?,
            forms,
            loops: punctured_plane_loops(),
            presentation: presentation_fixture("wedge2")?,
            lifted: false,
            period: C::new(0.0, 2.0 * PI),
        })
    }

    /// `ℝ²/ℤ²` with `dx`, `dy` and the two unit loops.
    pub fn flat_torus() -> Result<Self> {
        let zero = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        let forms = [("dx", "dz1"), ("dy", "dz2")]
            .iter()
            .map(|(n, f)| Ok((n.to_string(), OneForm::parse(f)?)))
            .collect::<Result<_>>()?;
        Ok(GeometricRealization {
            name: "flat-torus".into(),
            model: torus_model(1)?,
            forms,
            loops: vec![PiecewisePath::line(&[zero, zero], &[one, zero])?, PiecewisePath::line(&[zero, zero], &[zero, one])?],
            presentation: presentation_fixture("torus")?,
            lifted: true,
            period: one,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralPairingReport {
    pub realization: String,
    pub s: usize,
    /// Bar `H⁰` classes of length `1..=s`, rendered.
    pub rows: Vec<String>,
    /// Augmentation monomials `(g_{i₁}−1)⋯(g_{i_k}−1)`, `1 ≤ k ≤ s`.
    pub columns: Vec<String>,
    pub expected_size: usize,
    pub square: bool,
    pub matrix: Vec<Vec<C>>,
    pub abs_determinant: f64,
    pub condition_number: f64,
    pub condition_threshold: f64,
    pub nonsingular: bool,
}

/// Pairs closed iterated integrals of length `≤ s` with `J/J^{s+1}`.
/// Rows come from the bar construction on the de Rham model, columns from
/// the group-ring oracle basis; the matrix must be square and well
/// conditioned.
pub fn pairing_with_integrals(
    real: &GeometricRealization,
    s: usize,
    condition_threshold: f64,
    opts: &SolverOptions,
) -> Result<IntegralPairingReport> {
    if s == 0 {
        return Err(Error::Input("s must be positive".into()));
    }
    if real.loops.len() != real.presentation.generators.len() {
        return Err(Error::Input("one loop per presentation generator is required".into()));
    }
    let bar = build_bar(&real.model, s, 1)?;
    let h = bar_cohomology(&bar);
    let letter_form: BTreeMap<u32, usize> = real
        .forms
        .keys()
        .enumerate()
        .map(|(i, name)| {
            real.model
                .index_of(name)
                .map(|b| (b as u32, i))
                .ok_or_else(|| Error::Input(format!("model has no basis element '{name}'")))
        })
        .collect::<Result<_>>()?;
    let alphabet: Vec<OneForm> = real.forms.values().cloned().collect();

    // drop the unit class and keep an independent set
    let empty = bar.index_of(&crate::shuffle_hopf::Word::empty());
    let mut ech = Echelon::new();
    let mut classes: Vec<QVec> = Vec::new();
    for rep in h.representatives(0) {
        let mut v = rep.clone();
        if let Some(e) = empty {
            v.remove(&e);
        }
        if !v.is_empty() && ech.insert(&v) {
            classes.push(v);
        }
    }
    let mut rows: Vec<Vec<(f64, Vec<usize>)>> = Vec::new();
    let mut labels = Vec::new();
    for v in &classes {
        let sum = bar.to_sum(v);
        let mut row = Vec::new();
        let mut parts = Vec::new();
        for (w, c) in sum.iter() {
            let letters = w
                .letters()
                .iter()
                .map(|l| letter_form.get(&l.id).copied().ok_or_else(|| Error::Input(format!("no form for letter {}", l.id))))
                .collect::<Result<Vec<usize>>>()?;
            let names: Vec<&str> = w.letters().iter().map(|l| real.model.name(l.id as usize)).collect();
            let coeff = if c.is_one() { String::new() } else { c.to_string() };
            parts.push(format!("{coeff}[{}]", names.join("|")));
            row.push((c.to_f64().unwrap_or(f64::NAN), letters));
        }
        labels.push(parts.join(" + "));
        rows.push(row);
    }

    let oracle = group_ring_oracle(&real.presentation, s + 1)?;
    let monomials: Vec<Vec<usize>> = oracle.basis.iter().filter(|m| !m.is_empty()).cloned().collect();
    let columns: Vec<String> = monomials
        .iter()
        .map(|m| m.iter().map(|&i| format!("({}-1)", real.presentation.generators[i])).collect::<String>())
        .collect();
    let elements: Vec<GroupRingElement> = monomials.iter().map(|m| GroupRingElement::augmentation_monomial(m)).collect();

    let mut words: Vec<Vec<usize>> = rows.iter().flatten().map(|(_, w)| w.clone()).collect();
    words.sort();
    words.dedup();
    let pm = pi1_pairing_matrix(&alphabet, &real.loops, &words, &elements, real.lifted, opts)?;
    let matrix: Vec<Vec<C>> = rows
        .iter()
        .map(|row| {
            (0..elements.len())
                .map(|j| row.iter().map(|(c, w)| pm.entries[words.binary_search(w).expect("listed")][j] * *c).sum())
                .collect()
        })
        .collect();
    let lengths: Vec<usize> = rows.iter().map(|r| r.iter().map(|(_, w)| w.len()).max().unwrap_or(0)).collect();
    let expected_size = oracle.dimension - 1;
    let square = matrix.len() == expected_size && elements.len() == expected_size;
    let (abs_determinant, condition_number) = if square {
        let d = pairing_determinant(&matrix, &lengths, real.period)?;
        (d.abs_determinant, d.condition_number)
    } else {
        (0.0, f64::INFINITY)
    };
    Ok(IntegralPairingReport {
        realization: real.name.clone(),
        s,
        rows: labels,
        columns,
        expected_size,
        square,
        matrix,
        abs_determinant,
        condition_number,
        condition_threshold,
        nonsingular: square && condition_number < condition_threshold,
    })
}
