use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_entry, QVec, Q};

use super::{BasisElement, DgaModel};

/// On-disk form of a model.
///
/// ```json
/// { "generators": [{"name": "1", "degree": 0}, {"name": "w", "degree": 2}],
///   "differential": [{"from": "a", "to": "b", "coeff": "1/2"}],
///   "products": [{"left": "a", "right": "b", "result": [{"basis": "c", "coeff": 1}]}],
///   "augmentations": {"eps0": {"1": 1}, "eps1": {"1": 1}} }
/// ```
///
/// Every basis element is listed under `generators`. If no degree-0 element
/// is listed, a unit named `1` is added. Products involving the unit are
/// implicit and must not be listed.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DgaDocument {
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub differential: Vec<DifferentialEntry>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentations: Option<AugmentationEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferentialEntry {
    pub from: String,
    pub to: String,
    pub coeff: Coefficient,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermEntry {
    pub basis: String,
    pub coeff: Coefficient,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AugmentationEntry {
    pub eps0: BTreeMap<String, Coefficient>,
    pub eps1: BTreeMap<String, Coefficient>,
}

/// A rational written either as a JSON integer or as a string `"p/q"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    pub fn to_rational(&self) -> Result<Q> {
        match self {
            Coefficient::Int(n) => Ok(Q::from_integer(BigInt::from(*n))),
            Coefficient::Text(s) => parse_rational(s),
        }
    }

    pub fn from_rational(x: &Q) -> Self {
        if x.is_integer() {
            if let Ok(n) = i64::try_from(x.numer().clone()) {
                return Coefficient::Int(n);
            }
        }
        Coefficient::Text(x.to_string())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Input(format!("cannot parse rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl DgaDocument {
    pub fn into_model(self) -> Result<DgaModel> {
        let mut gens = self.generators;
        if !gens.iter().any(|g| g.degree == 0) {
            gens.insert(0, GeneratorEntry { name: "1".into(), degree: 0 });
        }
        let names: BTreeMap<&str, usize> = gens.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        if names.len() != gens.len() {
            return Err(Error::Input("duplicate generator names".into()));
        }
        let lookup = |n: &str| {
            names
                .get(n)
                .copied()
                .ok_or_else(|| Error::Input(format!("unknown basis element '{n}'")))
        };
        let unit = gens
            .iter()
            .position(|g| g.degree == 0)
            .expect("a degree-0 element was ensured above");
        let mut differential = vec![QVec::new(); gens.len()];
        for e in &self.differential {
            add_entry(&mut differential[lookup(&e.from)?], lookup(&e.to)?, e.coeff.to_rational()?);
        }
        let mut product: BTreeMap<(usize, usize), QVec> = BTreeMap::new();
        for p in &self.products {
            let key = (lookup(&p.left)?, lookup(&p.right)?);
            if key.0 == unit || key.1 == unit {
                return Err(Error::Input("products with the unit are implicit".into()));
            }
            let slot = product.entry(key).or_default();
            for t in &p.result {
                add_entry(slot, lookup(&t.basis)?, t.coeff.to_rational()?);
            }
        }
        let augmentations = match &self.augmentations {
            None => None,
            Some(a) => {
                let read = |m: &BTreeMap<String, Coefficient>| -> Result<Vec<Q>> {
                    let mut e = vec![Q::zero(); gens.len()];
                    for (k, c) in m {
                        e[lookup(k)?] = c.to_rational()?;
                    }
                    Ok(e)
                };
                Some([read(&a.eps0)?, read(&a.eps1)?])
            }
        };
        let basis = gens
            .iter()
            .map(|g| BasisElement { name: g.name.clone(), degree: g.degree })
            .collect();
        DgaModel::from_parts(basis, unit, differential, product, augmentations)
    }

    pub fn from_model(model: &DgaModel) -> Self {
        let name = |i: usize| model.name(i).to_string();
        let generators = model
            .basis()
            .iter()
            .map(|b| GeneratorEntry { name: b.name.clone(), degree: b.degree })
            .collect();
        let mut differential = Vec::new();
        for i in 0..model.dim() {
            for (k, c) in model.d_basis(i) {
                differential.push(DifferentialEntry { from: name(i), to: name(*k), coeff: Coefficient::from_rational(c) });
            }
        }
        let products = model
            .product_table()
            .iter()
            .map(|(&(a, b), v)| ProductEntry {
                left: name(a),
                right: name(b),
                result: v
                    .iter()
                    .map(|(k, c)| TermEntry { basis: name(*k), coeff: Coefficient::from_rational(c) })
                    .collect(),
            })
            .collect();
        let aug = |w: usize| -> BTreeMap<String, Coefficient> {
            model
                .augmentation(w)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (name(i), Coefficient::from_rational(c)))
                .collect()
        };
        let default_aug = (0..2).all(|w| {
            model
                .augmentation(w)
                .iter()
                .enumerate()
                .all(|(i, c)| if i == model.unit() { c.is_one() } else { c.is_zero() })
        });
        let augmentations = (!default_aug).then(|| AugmentationEntry { eps0: aug(0), eps1: aug(1) });
        DgaDocument { generators, differential, products, augmentations }
    }
}

impl DgaModel {
    pub fn from_json(json: &str) -> Result<DgaModel> {
        let doc: DgaDocument = serde_json::from_str(json)?;
        doc.into_model()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DgaDocument::from_model(self))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{cohomology, torus_model};

    #[test]
    fn parse_with_implicit_unit() {
        let json = r#"{
            "generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 1}, {"name": "xy", "degree": 2}],
            "products": [
                {"left": "x", "right": "y", "result": [{"basis": "xy", "coeff": 1}]},
                {"left": "y", "right": "x", "result": [{"basis": "xy", "coeff": "-1"}]}
            ]
        }"#;
        let m = DgaModel::from_json(json).unwrap();
        assert_eq!(m.dim(), 4);
        assert!(m.validate().is_valid());
        assert_eq!(cohomology(&m).ranks(), vec![1, 2, 1]);
    }

    #[test]
    fn roundtrip_preserves_cohomology() {
        let t = torus_model(2).unwrap();
        let back = DgaModel::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(cohomology(&t).ranks(), cohomology(&back).ranks());
    }

    #[test]
    fn rejects_unknown_names() {
        let json = r#"{"generators": [{"name": "w", "degree": 2}],
                       "differential": [{"from": "w", "to": "v", "coeff": 1}]}"#;
        assert!(DgaModel::from_json(json).is_err());
    }
}
