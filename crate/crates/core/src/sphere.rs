//! Loop-space cohomology of spheres from the bar construction.

use num_traits::Zero;
use serde::Serialize;

use crate::bar::{bar_cohomology, bar_shuffle_vec, build_bar, homotopy_ranks};
use crate::dga::sphere_model;
use crate::error::{Error, Result};
use crate::linalg::{QVec, Q};
use crate::shuffle_hopf::{Letter, Word};

/// `θ_a · θ_b = coefficient · θ_{a+b}`; `None` when the target class is absent.
#[derive(Clone, Debug, Serialize)]
pub struct ProductConstant {
    pub a: usize,
    pub b: usize,
    pub coefficient: Option<String>,
}

/// `θ₁^m = coefficient · θ_m`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerConstant {
    pub m: usize,
    pub coefficient: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub n: u32,
    pub length_cap: usize,
    pub degree_cap: u32,
    /// `ranks[j] = rank H^j` of the loop space, `j ≤ degree_cap`.
    pub ranks: Vec<usize>,
    pub products: Vec<ProductConstant>,
    pub powers: Vec<PowerConstant>,
    /// `(j, rank π_j ⊗ Q)` for `2 ≤ j ≤ 2n + 1`.
    pub homotopy: Vec<(u32, usize)>,
}

impl SphereReport {
    pub fn product(&self, a: usize, b: usize) -> Option<&str> {
        self.products.iter().find(|p| p.a == a && p.b == b)?.coefficient.as_deref()
    }

    pub fn power(&self, m: usize) -> Option<&str> {
        self.powers.iter().find(|p| p.m == m)?.coefficient.as_deref()
    }
}

pub fn sphere_report(n: u32, length_cap: usize, degree_cap: Option<u32>) -> Result<SphereReport> {
    if length_cap == 0 {
        return Err(Error::Input("length cap must be positive".into()));
    }
    let model = sphere_model(n)?;
    let degree_cap = degree_cap.unwrap_or(length_cap as u32 * (n - 1));
    let bar = build_bar(&model, length_cap, degree_cap)?;
    let coh = bar_cohomology(&bar);
    let ranks = coh.top_ranks().to_vec();
    let w = model.index_of("w").ok_or_else(|| Error::Precondition("sphere model has no class w".into()))?;
    let theta = |m: usize| -> Option<QVec> {
        let word = Word((0..m).map(|_| Letter::new(w as u32, n)).collect());
        let g = bar.index_of(&word)?;
        Some([(g, Q::from_integer(1.into()))].into_iter().collect())
    };
    let top = (degree_cap / (n - 1)) as usize;
    let max_m = length_cap.min(top);
    // coefficient of x against the class of θ_m
    let express = |m: usize, x: &QVec| -> Option<String> {
        let j = m as u32 * (n - 1);
        let t = coh.class_of(j, &theta(m)?)?;
        let c = coh.class_of(j, x)?;
        let (k, tk) = t.iter().enumerate().find(|(_, v)| !v.is_zero())?;
        let ratio = &c[k] / tk;
        c.iter().zip(&t).all(|(ci, ti)| *ci == &ratio * ti).then(|| ratio.to_string())
    };
    let mut products = Vec::new();
    for a in 1..max_m {
        for b in a..=max_m - a {
            let prod = bar_shuffle_vec(&bar, &theta(a).expect("within caps"), &theta(b).expect("within caps"));
            products.push(ProductConstant { a, b, coefficient: express(a + b, &prod) });
        }
    }
    let mut powers = Vec::new();
    if let Some(t1) = theta(1) {
        let mut acc = t1.clone();
        for m in 2..=max_m {
            acc = bar_shuffle_vec(&bar, &acc, &t1);
            powers.push(PowerConstant { m, coefficient: express(m, &acc) });
        }
    }
    let pi = homotopy_ranks(&model, 2 * n)?;
    let homotopy = (2..=2 * n + 1).map(|j| (j, pi.rank(j))).collect();
    Ok(SphereReport { n, length_cap, degree_cap, ranks, products, powers, homotopy })
}
