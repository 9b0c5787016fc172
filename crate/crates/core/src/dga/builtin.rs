use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{q, QVec};

use super::{BasisElement, DgaModel};

/// `{1, w}` with `w` in degree `n`, `dw = 0`, `w·w = 0`.
pub fn sphere_model(n: u32) -> Result<DgaModel> {
    if n < 2 {
        return Err(Error::Input(format!("sphere model needs n >= 2, got {n}")));
    }
    let basis = vec![
        BasisElement { name: "1".into(), degree: 0 },
        BasisElement { name: "w".into(), degree: n },
    ];
    DgaModel::from_parts(basis, 0, vec![QVec::new(); 2], BTreeMap::new(), None)
}

/// Invariant forms on the `2g`-torus: the exterior algebra on
/// `dx1, dy1, …, dxg, dyg` with zero differential.
pub fn torus_model(g: u32) -> Result<DgaModel> {
    if g < 1 {
        return Err(Error::Input(format!("torus model needs g >= 1, got {g}")));
    }
    let names: Vec<String> = (1..=g)
        .flat_map(|i| {
            if g == 1 {
                vec!["dx".to_string(), "dy".to_string()]
            } else {
                vec![format!("dx{i}"), format!("dy{i}")]
            }
        })
        .collect();
    let gens: Vec<(&str, u32)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    exterior_model(&gens)
}

/// Graded-commutative algebra on the given generators in which every
/// generator squares to zero, with zero differential. Basis elements are the
/// products of strictly increasing runs of generators.
pub fn exterior_model(generators: &[(&str, u32)]) -> Result<DgaModel> {
    if generators.iter().any(|(_, d)| *d == 0) {
        return Err(Error::Input("generators must have positive degree".into()));
    }
    if generators.len() > 12 {
        return Err(Error::Input("too many generators for an explicit basis".into()));
    }
    let k = generators.len();
    let subsets: Vec<u32> = {
        let mut s: Vec<u32> = (0..(1u32 << k)).collect();
        s.sort_by_key(|m| (m.count_ones(), *m));
        s
    };
    let index: BTreeMap<u32, usize> = subsets.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let degree_of = |m: u32| -> u32 { (0..k).filter(|i| m >> i & 1 == 1).map(|i| generators[i].1).sum() };
    let basis = subsets
        .iter()
        .map(|&m| {
            let name = if m == 0 {
                "1".to_string()
            } else {
                (0..k)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| generators[i].0)
                    .collect::<Vec<_>>()
                    .join("^")
            };
            BasisElement { name, degree: degree_of(m) }
        })
        .collect();
    let odd = |i: usize| generators[i].1 % 2 == 1;
    let mut product = BTreeMap::new();
    for &s in &subsets {
        for &t in &subsets {
            if s == 0 || t == 0 || s & t != 0 {
                continue;
            }
            // sign of sorting the concatenation s·t
            let mut swaps = 0u32;
            for i in (0..k).filter(|i| s >> i & 1 == 1 && odd(*i)) {
                for j in (0..k).filter(|j| t >> j & 1 == 1 && odd(*j)) {
                    if j < i {
                        swaps += 1;
                    }
                }
            }
            let mut v = QVec::new();
            v.insert(index[&(s | t)], q(if swaps % 2 == 0 { 1 } else { -1 }));
            product.insert((index[&s], index[&t]), v);
        }
    }
    let n = subsets.len();
    DgaModel::from_parts(basis, 0, vec![QVec::new(); n], product, None)
}

/// Cohomology model of a wedge of `k` circles: `1, a1, …, ak` in degree 1
/// with all products zero.
pub fn wedge_of_circles(k: u32) -> Result<DgaModel> {
    if k < 1 {
        return Err(Error::Input("wedge needs at least one circle".into()));
    }
    let mut basis = vec![BasisElement { name: "1".into(), degree: 0 }];
    for i in 1..=k {
        basis.push(BasisElement { name: format!("a{i}"), degree: 1 });
    }
    let n = basis.len();
    DgaModel::from_parts(basis, 0, vec![QVec::new(); n], BTreeMap::new(), None)
}

/// `Q[x]/(x^{height+1})` with `x` in even `degree`.
pub fn truncated_polynomial(name: &str, degree: u32, height: u32) -> Result<DgaModel> {
    if degree == 0 || degree % 2 == 1 {
        return Err(Error::Input("truncated polynomial generator must have positive even degree".into()));
    }
    if height == 0 {
        return Err(Error::Input("height must be positive".into()));
    }
    let mut basis = vec![BasisElement { name: "1".into(), degree: 0 }];
    for p in 1..=height {
        let label = if p == 1 { name.to_string() } else { format!("{name}^{p}") };
        basis.push(BasisElement { name: label, degree: degree * p });
    }
    let mut product = BTreeMap::new();
    for a in 1..=height as usize {
        for b in 1..=height as usize {
            if a + b <= height as usize {
                let mut v = QVec::new();
                v.insert(a + b, q(1));
                product.insert((a, b), v);
            }
        }
    }
    let n = basis.len();
    DgaModel::from_parts(basis, 0, vec![QVec::new(); n], product, None)
}

/// Acyclic model `1, y, x = dy` with `y` in degree `low` and zero products.
pub fn acyclic_pair(low: u32) -> Result<DgaModel> {
    DgaModel::ground_field().with_acyclic_extension(low)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_degrees() {
        let s2 = sphere_model(2).unwrap();
        assert_eq!(s2.basis().iter().map(|b| b.degree).collect::<Vec<_>>(), vec![0, 2]);
        let s3 = sphere_model(3).unwrap();
        assert_eq!(s3.basis().iter().map(|b| b.degree).collect::<Vec<_>>(), vec![0, 3]);
        assert!(sphere_model(5).unwrap().validate().is_valid());
        assert!(sphere_model(1).is_err());
    }

    #[test]
    fn torus_basis() {
        let t = torus_model(1).unwrap();
        let names: Vec<&str> = (0..t.dim()).map(|i| t.name(i)).collect();
        assert_eq!(names, vec!["1", "dx", "dy", "dx^dy"]);
        assert!(t.validate().is_valid());
        assert!(torus_model(2).unwrap().validate().is_valid());
        assert!(torus_model(0).is_err());
    }

    #[test]
    fn other_builtins_validate() {
        for m in [
            wedge_of_circles(2).unwrap(),
            truncated_polynomial("u", 2, 3).unwrap(),
            acyclic_pair(2).unwrap(),
            exterior_model(&[("a", 1), ("b", 2), ("c", 3)]).unwrap(),
        ] {
            assert!(m.validate().is_valid(), "{:?}", m.validate());
        }
    }
}
