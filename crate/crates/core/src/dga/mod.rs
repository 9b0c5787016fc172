//! Finite-basis differential graded algebras with two augmentations.
//!
//! Models are stored by structure constants on a fixed basis. The degree-0
//! part is spanned by the unit alone, so the reduced bar construction of a
//! model needs no relations.

mod builtin;
mod cohomology;
mod json;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, unit, QVec, Q};

pub use builtin::{
    acyclic_pair, exterior_model, sphere_model, torus_model, truncated_polynomial,
    wedge_of_circles,
};
pub use cohomology::{cohomology, indecomposables, CohomologyRing, Indecomposables};
pub(crate) use cohomology::{require_connected, to_sparse};
pub use json::{DgaDocument, ProductEntry, TermEntry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub struct DgaModel {
    basis: Vec<BasisElement>,
    unit: usize,
    differential: Vec<QVec>,
    /// Products of non-unit basis pairs; absent pairs multiply to zero.
    product: BTreeMap<(usize, usize), QVec>,
    augmentations: [Vec<Q>; 2],
}

/// Which algebra axioms [`DgaModel::validate_with`] checks.
#[derive(Clone, Copy, Debug)]
pub struct ValidationOptions {
    pub graded_commutative: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { graded_commutative: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidModel(self.violations))
        }
    }
}

impl DgaModel {
    /// Builds a model from raw parts. No axioms are checked here; call
    /// [`DgaModel::validate`] before trusting the result.
    pub fn from_parts(
        basis: Vec<BasisElement>,
        unit: usize,
        differential: Vec<QVec>,
        product: BTreeMap<(usize, usize), QVec>,
        augmentations: Option<[Vec<Q>; 2]>,
    ) -> Result<Self> {
        let n = basis.len();
        if unit >= n {
            return Err(Error::Input("unit index out of range".into()));
        }
        if differential.len() != n {
            return Err(Error::Input("differential must list every basis element".into()));
        }
        let bad_index = |v: &QVec| v.keys().any(|&k| k >= n);
        if differential.iter().any(bad_index) || product.values().any(bad_index) {
            return Err(Error::Input("structure constant refers to unknown basis element".into()));
        }
        if product.keys().any(|&(a, b)| a >= n || b >= n || a == unit || b == unit) {
            return Err(Error::Input("product table may only list non-unit basis pairs".into()));
        }
        let augmentations = augmentations.unwrap_or_else(|| {
            let mut e = vec![Q::zero(); n];
            e[unit] = Q::one();
            [e.clone(), e]
        });
        if augmentations.iter().any(|e| e.len() != n) {
            return Err(Error::Input("augmentation must assign a value to every basis element".into()));
        }
        let mut product = product;
        product.retain(|_, v| !v.is_empty());
        Ok(Self { basis, unit, differential, product, augmentations })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn basis_in_degree(&self, k: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == k).collect()
    }

    /// Indices of positive-degree basis elements.
    pub fn positive_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree > 0).collect()
    }

    pub fn d_basis(&self, i: usize) -> &QVec {
        &self.differential[i]
    }

    pub fn d(&self, v: &QVec) -> QVec {
        let mut out = QVec::new();
        for (i, c) in v {
            axpy(&mut out, c, &self.differential[*i]);
        }
        out
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> QVec {
        if a == self.unit {
            return unit(b);
        }
        if b == self.unit {
            return unit(a);
        }
        self.product.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn mul(&self, x: &QVec, y: &QVec) -> QVec {
        let mut out = QVec::new();
        for (a, p) in x {
            for (b, r) in y {
                axpy(&mut out, &(p * r), &self.mul_basis(*a, *b));
            }
        }
        out
    }

    pub fn augmentation(&self, which: usize) -> &[Q] {
        &self.augmentations[which]
    }

    pub fn augment(&self, which: usize, v: &QVec) -> Q {
        v.iter().map(|(i, c)| c * &self.augmentations[which][*i]).sum()
    }

    pub fn differential_is_zero(&self) -> bool {
        self.differential.iter().all(QVec::is_empty)
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(ValidationOptions::default())
    }

    pub fn validate_with(&self, opts: ValidationOptions) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.dim();
        let deg0 = self.basis_in_degree(0);
        if deg0 != vec![self.unit] {
            violations.push(format!(
                "degree-0 part must be spanned by the unit alone, found {:?}",
                deg0.iter().map(|&i| self.name(i)).collect::<Vec<_>>()
            ));
        }
        for i in 0..n {
            for k in self.differential[i].keys() {
                if self.degree(*k) != self.degree(i) + 1 {
                    violations.push(format!("d({}) has a term of the wrong degree", self.name(i)));
                    break;
                }
            }
            let dd = self.d(&self.differential[i]);
            if !dd.is_empty() {
                violations.push(format!("d(d({})) != 0", self.name(i)));
            }
        }
        for (&(a, b), v) in &self.product {
            let want = self.degree(a) + self.degree(b);
            if v.keys().any(|&k| self.degree(k) != want) {
                violations.push(format!(
                    "product {}*{} has a term of the wrong degree",
                    self.name(a),
                    self.name(b)
                ));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_basis(a, b);
                // graded Leibniz rule
                let lhs = self.d(&ab);
                let mut rhs = self.mul(&self.differential[a], &unit(b));
                let sign = if self.degree(a) % 2 == 1 { -Q::one() } else { Q::one() };
                axpy(&mut rhs, &sign, &self.mul(&unit(a), &self.differential[b]));
                if lhs != rhs {
                    violations.push(format!("Leibniz rule fails on ({}, {})", self.name(a), self.name(b)));
                }
                if opts.graded_commutative && a < b {
                    let ba = self.mul_basis(b, a);
                    let s = if (self.degree(a) * self.degree(b)) % 2 == 1 { -Q::one() } else { Q::one() };
                    let mut diff = ab.clone();
                    axpy(&mut diff, &(-s), &ba);
                    if !diff.is_empty() {
                        violations.push(format!(
                            "graded commutativity fails on ({}, {})",
                            self.name(a),
                            self.name(b)
                        ));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_basis(a, b);
                for c in 0..n {
                    let left = self.mul(&ab, &unit(c));
                    let right = self.mul(&unit(a), &self.mul_basis(b, c));
                    if left != right {
                        violations.push(format!(
                            "associativity fails on ({}, {}, {})",
                            self.name(a),
                            self.name(b),
                            self.name(c)
                        ));
                    }
                }
            }
        }
        for which in 0..2 {
            let eps = &self.augmentations[which];
            if eps[self.unit] != Q::one() {
                violations.push(format!("augmentation {which} does not send the unit to 1"));
            }
            for i in 0..n {
                if self.degree(i) > 0 && !eps[i].is_zero() {
                    violations.push(format!(
                        "augmentation {which} is nonzero on positive-degree element {}",
                        self.name(i)
                    ));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let lhs = self.augment(which, &self.mul_basis(a, b));
                    if lhs != &eps[a] * &eps[b] {
                        violations.push(format!(
                            "augmentation {which} is not multiplicative on ({}, {})",
                            self.name(a),
                            self.name(b)
                        ));
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Graded tensor product `A ⊗ B` with the Koszul sign on products and
    /// differential.
    pub fn tensor(&self, other: &DgaModel) -> DgaModel {
        let (n, m) = (self.dim(), other.dim());
        let idx = |i: usize, j: usize| i * m + j;
        let mut basis = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let name = match (i == self.unit, j == other.unit) {
                    (true, true) => "1".to_string(),
                    (true, false) => other.name(j).to_string(),
                    (false, true) => self.name(i).to_string(),
                    (false, false) => format!("{}*{}", self.name(i), other.name(j)),
                };
                basis.push(BasisElement { name, degree: self.degree(i) + other.degree(j) });
            }
        }
        let mut differential = vec![QVec::new(); n * m];
        for i in 0..n {
            for j in 0..m {
                let t = &mut differential[idx(i, j)];
                for (k, c) in &self.differential[i] {
                    add_entry(t, idx(*k, j), c.clone());
                }
                let s = if self.degree(i) % 2 == 1 { -Q::one() } else { Q::one() };
                for (k, c) in &other.differential[j] {
                    add_entry(t, idx(i, *k), &s * c);
                }
            }
        }
        let unit_ix = idx(self.unit, other.unit);
        let mut product = BTreeMap::new();
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        let (a, b) = (idx(i, j), idx(k, l));
                        if a == unit_ix || b == unit_ix {
                            continue;
                        }
                        let left = self.mul_basis(i, k);
                        let right = other.mul_basis(j, l);
                        if left.is_empty() || right.is_empty() {
                            continue;
                        }
                        let s = if (other.degree(j) * self.degree(k)) % 2 == 1 { -Q::one() } else { Q::one() };
                        let mut v = QVec::new();
                        for (p, x) in &left {
                            for (r, y) in &right {
                                add_entry(&mut v, idx(*p, *r), &s * x * y);
                            }
                        }
                        if !v.is_empty() {
                            product.insert((a, b), v);
                        }
                    }
                }
            }
        }
        let aug = |which: usize| {
            let mut e = vec![Q::zero(); n * m];
            for i in 0..n {
                for j in 0..m {
                    e[idx(i, j)] = &self.augmentations[which][i] * &other.augmentations[which][j];
                }
            }
            e
        };
        let augmentations = [aug(0), aug(1)];
        DgaModel { basis, unit: unit_ix, differential, product, augmentations }
    }

    /// Quotient by the ideal of elements of degree above `max_degree`.
    pub fn truncate_above(&self, max_degree: u32) -> DgaModel {
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) <= max_degree).collect();
        let mut new_index = vec![usize::MAX; self.dim()];
        for (ni, &oi) in keep.iter().enumerate() {
            new_index[oi] = ni;
        }
        let project = |v: &QVec| -> QVec {
            v.iter()
                .filter(|(k, _)| new_index[**k] != usize::MAX)
                .map(|(k, c)| (new_index[*k], c.clone()))
                .collect()
        };
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let differential = keep.iter().map(|&i| project(&self.differential[i])).collect();
        let mut product = BTreeMap::new();
        for (&(a, b), v) in &self.product {
            if new_index[a] != usize::MAX && new_index[b] != usize::MAX {
                let p = project(v);
                if !p.is_empty() {
                    product.insert((new_index[a], new_index[b]), p);
                }
            }
        }
        let augmentations = [0, 1].map(|w| keep.iter().map(|&i| self.augmentations[w][i].clone()).collect());
        DgaModel { basis, unit: new_index[self.unit], differential, product, augmentations }
    }

    /// Adds an acyclic pair `y` (degree `low`) and `x = dy` (degree `low + 1`)
    /// with all products among positive-degree elements involving them zero.
    /// The inclusion of the original model is a quasi-isomorphism of dgas.
    pub fn with_acyclic_extension(&self, low: u32) -> Result<DgaModel> {
        if low == 0 {
            return Err(Error::Input("acyclic extension needs a positive degree".into()));
        }
        let mut basis = self.basis.clone();
        basis.push(BasisElement { name: format!("y{low}"), degree: low });
        let x = basis.len();
        basis.push(BasisElement { name: format!("x{}", low + 1), degree: low + 1 });
        let mut differential = self.differential.clone();
        differential.push(unit(x));
        differential.push(QVec::new());
        let augmentations = self.augmentations.clone().map(|mut e| {
            e.push(Q::zero());
            e.push(Q::zero());
            e
        });
        Ok(DgaModel {
            basis,
            unit: self.unit,
            differential,
            product: self.product.clone(),
            augmentations,
        })
    }

    /// The same model with basis elements reordered by `perm` (new position
    /// `i` holds old element `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<DgaModel> {
        let n = self.dim();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Input("not a permutation of the basis".into()));
        }
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let relabel = |v: &QVec| -> QVec { v.iter().map(|(k, c)| (inv[*k], c.clone())).collect() };
        Ok(DgaModel {
            basis: perm.iter().map(|&o| self.basis[o].clone()).collect(),
            unit: inv[self.unit],
            differential: perm.iter().map(|&o| relabel(&self.differential[o])).collect(),
            product: self.product.iter().map(|(&(a, b), v)| ((inv[a], inv[b]), relabel(v))).collect(),
            augmentations: self.augmentations.clone().map(|e| perm.iter().map(|&o| e[o].clone()).collect()),
        })
    }

    /// Model with the unit alone.
    pub fn ground_field() -> DgaModel {
        DgaModel {
            basis: vec![BasisElement { name: "1".into(), degree: 0 }],
            unit: 0,
            differential: vec![QVec::new()],
            product: BTreeMap::new(),
            augmentations: [vec![Q::one()], vec![Q::one()]],
        }
    }

    pub(crate) fn product_table(&self) -> &BTreeMap<(usize, usize), QVec> {
        &self.product
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn injected_d_squared_is_reported() {
        // 1, a (deg 1), b (deg 2), c (deg 3) with da = b, db = c
        let basis = vec![
            BasisElement { name: "1".into(), degree: 0 },
            BasisElement { name: "a".into(), degree: 1 },
            BasisElement { name: "b".into(), degree: 2 },
            BasisElement { name: "c".into(), degree: 3 },
        ];
        let mut d = vec![QVec::new(); 4];
        d[1].insert(2, q(1));
        d[2].insert(3, q(1));
        let m = DgaModel::from_parts(basis, 0, d, BTreeMap::new(), None).unwrap();
        let report = m.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v == "d(d(a)) != 0"));
    }

    #[test]
    fn extra_degree_zero_element_is_reported() {
        let basis = vec![
            BasisElement { name: "1".into(), degree: 0 },
            BasisElement { name: "g".into(), degree: 0 },
        ];
        let m = DgaModel::from_parts(basis, 0, vec![QVec::new(); 2], BTreeMap::new(), None).unwrap();
        assert!(!m.validate().is_valid());
    }

    #[test]
    fn tensor_and_truncation_stay_valid() {
        let a = sphere_model(2).unwrap();
        let b = torus_model(1).unwrap();
        let t = a.tensor(&b);
        assert!(t.validate().is_valid(), "{:?}", t.validate());
        assert_eq!(t.dim(), 8);
        let tr = t.truncate_above(2);
        assert!(tr.validate().is_valid());
        assert_eq!(tr.dim(), 5);
        let ext = a.with_acyclic_extension(2).unwrap();
        assert!(ext.validate().is_valid());
    }
}
