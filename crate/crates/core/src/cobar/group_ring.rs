use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_entry, Echelon, QVec, Q};

/// A finite group presentation. Relators are words of generator names, with
/// inverses written `x^-1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<Vec<String>>,
}

impl Presentation {
    pub fn from_json(json: &str) -> Result<Presentation> {
        Ok(serde_json::from_str(json)?)
    }

    fn letters(&self, relator: &[String]) -> Result<Vec<(usize, bool)>> {
        relator
            .iter()
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok.as_str(), false),
                };
                let i = self
                    .generators
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| Error::Input(format!("unknown generator '{name}' in relator")))?;
                Ok((i, inverse))
            })
            .collect()
    }
}

type Monomial = Vec<usize>;
type Series = BTreeMap<Monomial, Q>;

fn truncated_product(a: &Series, b: &Series, s: usize) -> Series {
    let mut out = Series::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() >= s {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(Q::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Magnus image of `x_i^{±1}` truncated below degree `s`.
fn magnus_letter(i: usize, inverse: bool, s: usize) -> Series {
    let mut out = Series::new();
    out.insert(Vec::new(), Q::one());
    if inverse {
        let mut sign = -Q::one();
        for k in 1..s {
            out.insert(vec![i; k], sign.clone());
            sign = -sign;
        }
    } else if s > 1 {
        out.insert(vec![i], Q::one());
    }
    out
}

/// `Q π / J^s` for `π` given by a presentation.
#[derive(Clone, Debug, Serialize)]
pub struct GroupRingQuotient {
    pub s: usize,
    pub dimension: usize,
    /// Monomials `ξ_{i1}⋯ξ_{ik}` (generator indices) whose classes form a
    /// basis; the empty monomial is the class of `1`.
    pub basis: Vec<Vec<usize>>,
    pub generators: Vec<String>,
}

/// Magnus-expansion oracle: sends `x_i ↦ 1 + ξ_i` into the free associative
/// algebra truncated below degree `s` and divides by the two-sided ideal
/// generated by the images of `r − 1` for every relator `r`.
pub fn group_ring_oracle(presentation: &Presentation, s: usize) -> Result<GroupRingQuotient> {
    if s == 0 {
        return Err(Error::Input("truncation order must be positive".into()));
    }
    let m = presentation.generators.len();
    let monomial_count: usize = (0..s).map(|k| m.pow(k as u32)).sum();
    if monomial_count > 20_000 {
        return Err(Error::Input(format!("{monomial_count} monomials exceed the expansion cap")));
    }
    let mut monomials: Vec<Monomial> = vec![Vec::new()];
    let mut layer: Vec<Monomial> = vec![Vec::new()];
    for _ in 1..s {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..m {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        monomials.extend(next.iter().cloned());
        layer = next;
    }
    // longest monomials first, so pivots fall on them and short monomials
    // survive as the quotient basis
    monomials.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut ideal = Echelon::new();
    for r in &presentation.relators {
        let mut image = Series::new();
        image.insert(Vec::new(), Q::one());
        for (i, inv) in presentation.letters(r)? {
            image = truncated_product(&image, &magnus_letter(i, inv, s), s);
        }
        *image.entry(Vec::new()).or_insert_with(Q::zero) -= Q::one();
        image.retain(|_, c| !c.is_zero());
        for u in &monomials {
            for v in &monomials {
                let mut gen = Series::new();
                for (w, c) in &image {
                    if u.len() + w.len() + v.len() >= s {
                        continue;
                    }
                    let mut t = u.clone();
                    t.extend_from_slice(w);
                    t.extend_from_slice(v);
                    *gen.entry(t).or_insert_with(Q::zero) += c;
                }
                let vec: QVec = gen
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .fold(QVec::new(), |mut acc, (t, c)| {
                        add_entry(&mut acc, index[&t], c);
                        acc
                    });
                if !vec.is_empty() {
                    ideal.insert(&vec);
                }
            }
        }
    }
    let pivots: std::collections::BTreeSet<usize> = ideal.pivots().collect();
    let mut basis: Vec<Vec<usize>> = (0..monomials.len())
        .filter(|i| !pivots.contains(i))
        .map(|i| monomials[i].clone())
        .collect();
    basis.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(GroupRingQuotient {
        s,
        dimension: monomials.len() - ideal.rank(),
        basis,
        generators: presentation.generators.clone(),
    })
}
