use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{kernel, unit, QVec, Subquotient, Q};

use super::DgaModel;

/// `H•(A)` with cocycle representatives and cup-product structure constants.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    degrees: Vec<Subquotient>,
    /// `cup[p][q][i][j]` = coordinates of `h_i^p · h_j^q` in `H^{p+q}`.
    cup: Vec<Vec<Vec<Vec<Vec<Q>>>>>,
}

impl CohomologyRing {
    pub fn max_degree(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, Subquotient::dim)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(Subquotient::dim).collect()
    }

    /// Cocycle representatives of the basis of `H^k`.
    pub fn representatives(&self, k: usize) -> &[QVec] {
        self.degrees.get(k).map_or(&[], |s| s.reps())
    }

    /// Coordinates of the class of a degree-`k` cocycle.
    pub fn class_of(&self, k: usize, z: &QVec) -> Option<Vec<Q>> {
        match self.degrees.get(k) {
            Some(s) => s.class_of(z),
            None => z.is_empty().then(Vec::new),
        }
    }

    pub fn cup(&self, p: usize, i: usize, q: usize, j: usize) -> Vec<Q> {
        if p + q > self.max_degree() {
            return Vec::new();
        }
        self.cup[p][q][i][j].clone()
    }

    /// Matrix of the cup product `[H^{>0} ⊗ H^{>0}]^k → H^k`, one column per
    /// pair `(p, i, q, j)` listed by [`CohomologyRing::tensor_square_basis`].
    pub fn cup_matrix(&self, k: usize) -> Vec<Vec<Q>> {
        self.tensor_square_basis(k)
            .into_iter()
            .map(|(p, i, q, j)| self.cup(p, i, q, j))
            .collect()
    }

    /// Basis `h_i^p ⊗ h_j^q` of `[H^{>0} ⊗ H^{>0}]^k`.
    pub fn tensor_square_basis(&self, k: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for p in 1..k {
            let q = k - p;
            for i in 0..self.rank(p) {
                for j in 0..self.rank(q) {
                    out.push((p, i, q, j));
                }
            }
        }
        out
    }
}

/// Rational cohomology of a model by exact elimination on the differential.
pub fn cohomology(model: &DgaModel) -> CohomologyRing {
    let top = model.max_degree() as usize;
    let mut degrees = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let here = model.basis_in_degree(k as u32);
        let images: Vec<QVec> = here.iter().map(|&i| model.d_basis(i).clone()).collect();
        let cycles: Vec<QVec> = kernel(&images)
            .into_iter()
            .map(|v| v.into_iter().map(|(loc, c)| (here[loc], c)).collect())
            .collect();
        let boundaries: Vec<QVec> = if k == 0 {
            Vec::new()
        } else {
            model
                .basis_in_degree(k as u32 - 1)
                .iter()
                .map(|&i| model.d_basis(i).clone())
                .collect()
        };
        degrees.push(Subquotient::new(&cycles, &boundaries));
    }
    let mut cup = vec![vec![Vec::new(); top + 1]; top + 1];
    for p in 0..=top {
        for q in 0..=top - p {
            let mut table = Vec::new();
            for hi in degrees[p].reps() {
                let mut row = Vec::new();
                for hj in degrees[q].reps() {
                    let prod = model.mul(hi, hj);
                    let coords = degrees[p + q]
                        .class_of(&prod)
                        .expect("product of cocycles is a cocycle in a valid model");
                    row.push(coords);
                }
                table.push(row);
            }
            cup[p][q] = table;
        }
    }
    CohomologyRing { degrees, cup }
}

/// Indecomposables `QH^k = H^k / (decomposables)`.
#[derive(Clone, Debug)]
pub struct Indecomposables {
    quotients: Vec<Subquotient>,
}

impl Indecomposables {
    pub fn rank(&self, k: usize) -> usize {
        self.quotients.get(k).map_or(0, Subquotient::dim)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.quotients.iter().map(Subquotient::dim).collect()
    }

    /// Coordinates in `QH^k` of the class with `H^k` coordinates `h`.
    pub fn project(&self, k: usize, h: &[Q]) -> Vec<Q> {
        let v: QVec = h
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        self.quotients[k].class_of(&v).expect("every class lies in H^k")
    }

    /// `H^k` coordinates of lifts of the `QH^k` basis.
    pub fn lifts(&self, k: usize) -> &[QVec] {
        self.quotients.get(k).map_or(&[], |s| s.reps())
    }
}

pub fn indecomposables(ring: &CohomologyRing) -> Indecomposables {
    let top = ring.max_degree();
    let quotients = (0..=top)
        .map(|k| {
            let whole: Vec<QVec> = (0..ring.rank(k)).map(unit).collect();
            if k == 0 {
                // H^0 is not part of H^{>0}; it has no indecomposables
                return Subquotient::new(&[], &[]);
            }
            let decomposable: Vec<QVec> = ring
                .tensor_square_basis(k)
                .into_iter()
                .map(|(p, i, q, j)| to_sparse(&ring.cup(p, i, q, j)))
                .collect();
            Subquotient::new(&whole, &decomposable)
        })
        .collect();
    Indecomposables { quotients }
}

pub(crate) fn to_sparse(v: &[Q]) -> QVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Fails unless `H^0(A)` is one-dimensional.
pub(crate) fn require_connected(ring: &CohomologyRing) -> Result<()> {
    if ring.rank(0) != 1 {
        return Err(Error::Precondition(format!(
            "model has disconnected cohomology (rank H^0 = {})",
            ring.rank(0)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{exterior_model, sphere_model, torus_model};
    use crate::linalg::q;

    #[test]
    fn sphere_and_torus_ranks() {
        assert_eq!(cohomology(&sphere_model(2).unwrap()).ranks(), vec![1, 0, 1]);
        assert_eq!(cohomology(&torus_model(1).unwrap()).ranks(), vec![1, 2, 1]);
        assert_eq!(cohomology(&torus_model(2).unwrap()).rank(2), 6);
    }

    #[test]
    fn degree_one_and_two_generators() {
        // x in degree 1, y in degree 2, x^2 = 0, y^2 = 0: H^2 = <y>, H^3 = <xy>
        let m = exterior_model(&[("x", 1), ("y", 2)]).unwrap();
        let h = cohomology(&m);
        assert_eq!(h.ranks(), vec![1, 1, 1, 1]);
        let xy = h.cup(1, 0, 2, 0);
        assert_eq!(xy.len(), 1);
        assert_ne!(xy[0], q(0));
    }

    #[test]
    fn indecomposable_examples() {
        let s = sphere_model(4).unwrap();
        let qh = indecomposables(&cohomology(&s));
        assert_eq!(qh.rank(4), 1);
        let t1 = indecomposables(&cohomology(&torus_model(1).unwrap()));
        assert_eq!((t1.rank(1), t1.rank(2)), (2, 0));
        let t2 = indecomposables(&cohomology(&torus_model(2).unwrap()));
        assert_eq!(t2.rank(2), 0);
    }

    #[test]
    fn acyclic_extension_has_same_cohomology() {
        let s = sphere_model(3).unwrap();
        let e = s.with_acyclic_extension(2).unwrap();
        assert_eq!(cohomology(&s).ranks(), cohomology(&e).ranks()[..4].to_vec());
        assert_eq!(cohomology(&e).rank(2), 0);
    }
}
