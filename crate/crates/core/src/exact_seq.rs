//! The five-term sequence
//!
//! ```text
//! 0 → QH^{k−1} → H^{k−2}(ICh₂) → [H^{>0}⊗H^{>0}]^k → H^k → QH^k → 0
//! ```
//!
//! with `ICh₂` the words of length 1 and 2 in the bar construction. The
//! length-2 projection identifies `[a|b]` with `(−1)^{deg a} a⊗b`, which makes
//! the third map literally the cup product.

use serde::Serialize;

use crate::bar::{build_bar, cohomology_of_lengths, homotopy_ranks, BarComplex};
use crate::cobar::{group_ring_oracle, Presentation};
use crate::dga::{cohomology, indecomposables, require_connected, to_sparse, CohomologyRing, DgaModel};
use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, kernel, rank, QVec, Subquotient, Q};

/// A rational matrix stored by columns (images of source basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub columns: Vec<QVec>,
}

impl QMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self) -> usize {
        rank(&self.columns)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &QMatrix) -> QMatrix {
        let columns = other
            .columns
            .iter()
            .map(|c| {
                let mut out = QVec::new();
                for (k, x) in c {
                    axpy(&mut out, x, &self.columns[*k]);
                }
                out
            })
            .collect();
        QMatrix { rows: self.rows, columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(QVec::is_empty)
    }

    pub fn dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::from_integer(0.into()); self.cols()]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, x) in c {
                out[*i][j] = x.clone();
            }
        }
        out
    }
}

fn column_from_coords(coords: &[Q]) -> QVec {
    to_sparse(coords)
}

#[derive(Clone, Debug)]
pub struct FiveTermSequence {
    /// The degree `k` of `H^k` in the middle.
    pub k: u32,
    pub dims: [usize; 5],
    /// `maps[i]` goes from space `i` to space `i + 1`.
    pub maps: [QMatrix; 4],
    /// Basis of `[H^{>0}⊗H^{>0}]^k` as `(p, i, q, j)`.
    pub tensor_basis: Vec<(usize, usize, usize, usize)>,
}

pub const NODE_NAMES: [&str; 5] = ["QH^{k-1}", "H^{k-2}(ICh2)", "[H+ (x) H+]^k", "H^k", "QH^k"];

/// Sequence ending in `QH^{2d}`.
pub fn build_sequence(model: &DgaModel, d: u32) -> Result<FiveTermSequence> {
    if d == 0 {
        return Err(Error::Input("sequence index must be positive".into()));
    }
    build_sequence_at(model, 2 * d)
}

/// Sequence with middle cohomology degree `k ≥ 2`.
pub fn build_sequence_at(model: &DgaModel, k: u32) -> Result<FiveTermSequence> {
    if k < 2 {
        return Err(Error::Input("middle degree must be at least 2".into()));
    }
    let ring = cohomology(model);
    require_connected(&ring)?;
    let qh = indecomposables(&ring);
    let ku = k as usize;
    let bar = build_bar(model, 2, k - 2)?;
    let ich = cohomology_of_lengths(&bar, k - 2, 1..=2);

    // QH^{k-1} -> H^{k-2}(ICh2): lift to a cocycle z, send to [z]
    let lifts = if ku - 1 <= ring.max_degree() { qh.lifts(ku - 1).to_vec() } else { Vec::new() };
    let map1_cols: Vec<QVec> = lifts
        .iter()
        .map(|h| {
            let z = combine(ring.representatives(ku - 1), h);
            let mut chain = QVec::new();
            for (a, c) in &z {
                let w = crate::shuffle_hopf::Word(vec![crate::shuffle_hopf::Letter::new(*a as u32, model.degree(*a))]);
                add_entry(&mut chain, bar.index_of(&w).expect("length-1 word present"), c.clone());
            }
            column_from_coords(&ich.class_of(&chain).expect("[z] is a cocycle"))
        })
        .collect();
    let map1 = QMatrix { rows: ich.dim(), columns: map1_cols };

    // H^{k-2}(ICh2) -> [H+ ⊗ H+]^k: length-2 part, twisted, then Künneth
    let tensor_basis = ring.tensor_square_basis(ku);
    let kunneth = TensorCohomology::new(model, &ring, ku);
    let map2_cols: Vec<QVec> = ich
        .reps()
        .iter()
        .map(|c| {
            let t = length_two_part(&bar, model, c);
            column_from_coords(&kunneth.class_of(&t))
        })
        .collect();
    let map2 = QMatrix { rows: tensor_basis.len(), columns: map2_cols };

    let h_k = ring.rank(ku);
    let map3 = QMatrix {
        rows: h_k,
        columns: ring.cup_matrix(ku).iter().map(|c| column_from_coords(c)).collect(),
    };

    let qh_k = if ku <= ring.max_degree() { qh.rank(ku) } else { 0 };
    let map4 = QMatrix {
        rows: qh_k,
        columns: (0..h_k)
            .map(|i| {
                let mut e = vec![Q::from_integer(0.into()); h_k];
                e[i] = Q::from_integer(1.into());
                column_from_coords(&qh.project(ku, &e))
            })
            .collect(),
    };
    let dims = [lifts.len(), ich.dim(), tensor_basis.len(), h_k, qh_k];
    Ok(FiveTermSequence { k, dims, maps: [map1, map2, map3, map4], tensor_basis })
}

fn combine(reps: &[QVec], coords: &QVec) -> QVec {
    let mut out = QVec::new();
    for (i, c) in coords {
        axpy(&mut out, c, &reps[*i]);
    }
    out
}

/// Length-2 component of a bar chain as an element of `A⊗A`, keyed by
/// basis index pairs, with the `(−1)^{deg a}` twist.
fn length_two_part(bar: &BarComplex, model: &DgaModel, chain: &QVec) -> Vec<((usize, usize), Q)> {
    let mut out = Vec::new();
    for (g, c) in chain {
        let w = &bar.generators()[*g];
        if w.len() == 2 {
            let a = w.letters()[0].id as usize;
            let b = w.letters()[1].id as usize;
            let sign = if model.degree(a) % 2 == 1 { -c.clone() } else { c.clone() };
            out.push(((a, b), sign));
        }
    }
    out
}

/// `H^k(A^{>0} ⊗ A^{>0})` with the basis `h_i^p ⊗ h_j^q`.
struct TensorCohomology {
    pairs: std::collections::HashMap<(usize, usize), usize>,
    sub: Subquotient,
}

impl TensorCohomology {
    fn new(model: &DgaModel, ring: &CohomologyRing, k: usize) -> Self {
        let positive = model.positive_basis();
        let mut pairs = std::collections::HashMap::new();
        let mut lower = Vec::new();
        for &a in &positive {
            for &b in &positive {
                let deg = (model.degree(a) + model.degree(b)) as usize;
                if deg == k {
                    let n = pairs.len();
                    pairs.insert((a, b), n);
                } else if deg + 1 == k {
                    lower.push((a, b));
                }
            }
        }
        let embed = |a: usize, b: usize, c: &Q, v: &mut QVec| {
            if let Some(&slot) = pairs.get(&(a, b)) {
                add_entry(v, slot, c.clone());
            }
        };
        // d(a⊗b) = da⊗b + (−1)^{deg a} a⊗db
        let boundaries: Vec<QVec> = lower
            .iter()
            .map(|&(a, b)| {
                let mut v = QVec::new();
                for (x, c) in model.d_basis(a) {
                    embed(*x, b, c, &mut v);
                }
                let sign = model.degree(a) % 2 == 1;
                for (y, c) in model.d_basis(b) {
                    let c = if sign { -c.clone() } else { c.clone() };
                    embed(a, *y, &c, &mut v);
                }
                v
            })
            .collect();
        let cycles: Vec<QVec> = ring
            .tensor_square_basis(k)
            .into_iter()
            .map(|(p, i, q, j)| {
                let mut v = QVec::new();
                for (a, x) in &ring.representatives(p)[i] {
                    for (b, y) in &ring.representatives(q)[j] {
                        embed(*a, *b, &(x * y), &mut v);
                    }
                }
                v
            })
            .collect();
        let sub = Subquotient::new(&cycles, &boundaries);
        debug_assert_eq!(sub.dim(), cycles.len());
        TensorCohomology { pairs, sub }
    }

    fn class_of(&self, t: &[((usize, usize), Q)]) -> Vec<Q> {
        let mut v = QVec::new();
        for (pair, c) in t {
            add_entry(&mut v, self.pairs[pair], c.clone());
        }
        self.sub.class_of(&v).expect("length-2 part of a cocycle is a tensor cocycle")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeReport {
    pub node: &'static str,
    pub dim: usize,
    /// Rank of the incoming map (0 at the left end).
    pub image_rank: usize,
    /// Dimension of the kernel of the outgoing map (`dim` at the right end).
    pub kernel_dim: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub k: u32,
    pub nodes: Vec<NodeReport>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    pub fn first_failure(&self) -> Option<&NodeReport> {
        self.nodes.iter().find(|n| !n.exact)
    }
}

pub fn check_exactness(seq: &FiveTermSequence) -> ExactnessReport {
    let ranks: Vec<usize> = seq.maps.iter().map(QMatrix::rank).collect();
    let nodes = (0..5)
        .map(|i| {
            let image_rank = if i == 0 { 0 } else { ranks[i - 1] };
            let kernel_dim = if i == 4 { seq.dims[4] } else { seq.dims[i] - ranks[i] };
            let composite_zero = if i == 0 || i == 4 { true } else { seq.maps[i].compose(&seq.maps[i - 1]).is_zero() };
            NodeReport {
                node: NODE_NAMES[i],
                dim: seq.dims[i],
                image_rank,
                kernel_dim,
                composite_zero,
                exact: composite_zero && image_rank == kernel_dim,
            }
        })
        .collect();
    ExactnessReport { k: seq.k, nodes }
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceCheck {
    pub from_sequence: usize,
    pub oracle: usize,
}

impl SequenceCheck {
    pub fn agrees(&self) -> bool {
        self.from_sequence == self.oracle
    }
}

/// `dim Hom(J/J³) = rank H¹ + dim ker(cup: H¹⊗H¹ → H²)` against the group
/// ring oracle `dim Qπ/J³ − 1`.
pub fn pi1_sequence_check(model: &DgaModel, presentation: &Presentation) -> Result<SequenceCheck> {
    let ring = cohomology(model);
    require_connected(&ring)?;
    let h1 = ring.rank(1);
    let cup: Vec<QVec> = ring
        .tensor_square_basis(2)
        .into_iter()
        .filter(|(p, ..)| *p == 1)
        .map(|(p, i, q, j)| to_sparse(&ring.cup(p, i, q, j)))
        .collect();
    let from_sequence = h1 + cup.len() - rank(&cup);
    let oracle = group_ring_oracle(presentation, 3)?.dimension - 1;
    Ok(SequenceCheck { from_sequence, oracle })
}

/// `rank H³ + dim ker(S²H² → H⁴)` against `π₃` from bar indecomposables.
pub fn pi3_sequence_check(model: &DgaModel) -> Result<SequenceCheck> {
    let ring = cohomology(model);
    require_connected(&ring)?;
    if ring.rank(1) != 0 {
        return Err(Error::Precondition("model is not simply connected".into()));
    }
    let h2 = ring.rank(2);
    let mut sym = Vec::new();
    for i in 0..h2 {
        for j in i..h2 {
            sym.push(to_sparse(&ring.cup(2, i, 2, j)));
        }
    }
    let from_sequence = ring.rank(3) + sym.len() - rank(&sym);
    let oracle = homotopy_ranks(model, 2)?.rank(3);
    Ok(SequenceCheck { from_sequence, oracle })
}

/// Connecting map `[H^{>0}⊗H^{>0}]^k → H^k` computed from the bar
/// differential: lift `h⊗h'` to `(−1)^{deg h}[z|z']`, apply `d`, read the
/// length-1 result `[y]` as the class of `y`.
pub fn connecting_map(model: &DgaModel, k: u32) -> Result<QMatrix> {
    if k < 2 {
        return Err(Error::Input("middle degree must be at least 2".into()));
    }
    let ring = cohomology(model);
    require_connected(&ring)?;
    let ku = k as usize;
    let bar = build_bar(model, 2, k - 2)?;
    let letter = |a: usize| crate::shuffle_hopf::Letter::new(a as u32, model.degree(a));
    let columns = ring
        .tensor_square_basis(ku)
        .into_iter()
        .map(|(p, i, q, j)| {
            let mut chain = QVec::new();
            for (a, x) in &ring.representatives(p)[i] {
                for (b, y) in &ring.representatives(q)[j] {
                    let w = crate::shuffle_hopf::Word(vec![letter(*a), letter(*b)]);
                    let c = if p % 2 == 1 { -(x * y) } else { x * y };
                    add_entry(&mut chain, bar.index_of(&w).expect("length-2 word present"), c);
                }
            }
            let image = bar.d(&chain).expect("within degree cap");
            let mut y = QVec::new();
            for (g, c) in &image {
                let w = &bar.generators()[*g];
                assert_eq!(w.len(), 1, "lift of a tensor cocycle has length-1 boundary");
                add_entry(&mut y, w.letters()[0].id as usize, c.clone());
            }
            column_from_coords(&ring.class_of(ku, &y).unwrap_or_default())
        })
        .collect();
    Ok(QMatrix { rows: ring.rank(ku), columns })
}

/// Kernel of a matrix, over its source basis.
pub fn kernel_of(m: &QMatrix) -> Vec<QVec> {
    kernel(&m.columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{sphere_model, torus_model};

    #[test]
    fn sphere_two_at_four() {
        let seq = build_sequence(&sphere_model(2).unwrap(), 2).unwrap();
        assert_eq!(seq.dims, [0, 1, 1, 0, 0]);
        assert!(check_exactness(&seq).is_exact());
    }

    #[test]
    fn torus_at_two() {
        let m = torus_model(1).unwrap();
        let seq = build_sequence(&m, 1).unwrap();
        assert_eq!(seq.dims, [2, 5, 4, 1, 0]);
        assert_eq!(seq.maps[2].rank(), 1);
        assert!(check_exactness(&seq).is_exact());
    }

    #[test]
    fn ground_field_is_all_zero() {
        let seq = build_sequence(&DgaModel::ground_field(), 1).unwrap();
        assert_eq!(seq.dims, [0; 5]);
        assert!(check_exactness(&seq).is_exact());
    }
}
