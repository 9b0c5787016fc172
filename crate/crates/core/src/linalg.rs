//! Exact linear algebra over the rationals.
//!
//! Vectors are sparse maps from a basis index to a nonzero rational
//! coefficient. The [`Echelon`] type is an incrementally built row-echelon
//! basis that also remembers how each stored row was combined from the
//! inserted inputs, which is what kernel and coordinate computations need.
//! [`rank_fraction_free`] is an independent integer-only elimination used for
//! rank reporting and as a cross-check on the rational route.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Sparse rational vector; never stores zero coefficients.
pub type QVec = BTreeMap<usize, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Adds `coeff * v` into `acc`, dropping entries that cancel.
pub fn axpy(acc: &mut QVec, coeff: &Q, v: &QVec) {
    if coeff.is_zero() {
        return;
    }
    for (k, x) in v {
        add_entry(acc, *k, coeff * x);
    }
}

pub fn add_entry(acc: &mut QVec, k: usize, x: Q) {
    if x.is_zero() {
        return;
    }
    let remove = match acc.get_mut(&k) {
        Some(y) => {
            *y += x;
            y.is_zero()
        }
        None => {
            acc.insert(k, x);
            false
        }
    };
    if remove {
        acc.remove(&k);
    }
}

pub fn scaled(v: &QVec, c: &Q) -> QVec {
    if c.is_zero() {
        return QVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

pub fn unit(k: usize) -> QVec {
    let mut v = QVec::new();
    v.insert(k, Q::one());
    v
}

#[derive(Clone, Debug)]
struct EchelonRow {
    row: QVec,
    combo: QVec,
}

/// Incremental row-echelon basis with provenance tracking.
///
/// Each stored row has leading coefficient 1 at its pivot and is a known
/// rational combination of the inputs passed to [`Echelon::insert`].
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, EchelonRow>,
    inputs: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors offered so far (independent or not).
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the stored rows. Returns the remainder and the
    /// combination of inputs that was subtracted.
    fn reduce_tracked(&self, v: &QVec) -> (QVec, QVec) {
        let mut rem = v.clone();
        let mut used = QVec::new();
        let mut cursor = 0usize;
        loop {
            let next = rem
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let er = &self.rows[&k];
            axpy(&mut rem, &(-&c), &er.row);
            axpy(&mut used, &c, &er.combo);
            cursor = k + 1;
        }
        (rem, used)
    }

    pub fn reduce(&self, v: &QVec) -> QVec {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &QVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v` as input number `self.inputs()`. Returns true when it was
    /// independent of everything inserted before.
    pub fn insert(&mut self, v: &QVec) -> bool {
        let label = self.inputs;
        self.inputs += 1;
        let (rem, used) = self.reduce_tracked(v);
        let Some((&pivot, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let mut combo = scaled(&used, &(-&inv));
        add_entry(&mut combo, label, inv.clone());
        let row = scaled(&rem, &inv);
        self.rows.insert(pivot, EchelonRow { row, combo });
        true
    }

    /// Writes `v` as a combination of the inputs, if it lies in their span.
    pub fn express(&self, v: &QVec) -> Option<QVec> {
        let (rem, used) = self.reduce_tracked(v);
        rem.is_empty().then_some(used)
    }
}

/// Rank of the span of `rows`.
pub fn rank(rows: &[QVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of the kernel of the linear map sending basis vector `i` to
/// `images[i]`. Kernel vectors are expressed over the domain basis.
pub fn kernel(images: &[QVec]) -> Vec<QVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let (rem, used) = e.reduce_tracked(img);
        if rem.is_empty() {
            // img = sum used_j images[j]  =>  e_i - sum used_j e_j in kernel
            let mut k = scaled(&used, &(-Q::one()));
            add_entry(&mut k, i, Q::one());
            out.push(k);
            e.inputs += 1;
        } else {
            let pushed = e.insert_prereduced(rem, used);
            debug_assert!(pushed);
        }
        debug_assert_eq!(e.inputs, i + 1);
    }
    out
}

impl Echelon {
    fn insert_prereduced(&mut self, rem: QVec, used: QVec) -> bool {
        let label = self.inputs;
        self.inputs += 1;
        let Some((&pivot, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let mut combo = scaled(&used, &(-&inv));
        add_entry(&mut combo, label, inv.clone());
        let row = scaled(&rem, &inv);
        self.rows.insert(pivot, EchelonRow { row, combo });
        true
    }
}

/// A subquotient `Z / B` with chosen representatives and a coordinate map.
///
/// `B` must be contained in `Z`; this is asserted when classes are computed.
#[derive(Clone, Debug)]
pub struct Subquotient {
    boundary_rank: usize,
    reps: Vec<QVec>,
    basis: Echelon,
}

impl Subquotient {
    pub fn new(cycles: &[QVec], boundaries: &[QVec]) -> Self {
        // Only independent boundaries are inserted, so input labels below
        // `boundary_rank` are boundaries and the rest are representatives.
        let mut clean = Echelon::new();
        let mut boundary_rank = 0;
        for b in boundaries {
            if !clean.contains(b) {
                clean.insert(b);
                boundary_rank += 1;
            }
        }
        let mut reps = Vec::new();
        for z in cycles {
            if !clean.contains(z) {
                clean.insert(z);
                reps.push(z.clone());
            }
        }
        Self { boundary_rank, reps, basis: clean }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[QVec] {
        &self.reps
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    /// Coordinates of the class of `z` in the representative basis, or `None`
    /// when `z` is not in `Z`.
    pub fn class_of(&self, z: &QVec) -> Option<Vec<Q>> {
        let combo = self.basis.express(z)?;
        let mut out = vec![Q::zero(); self.reps.len()];
        for (label, c) in combo {
            if label >= self.boundary_rank {
                out[label - self.boundary_rank] = c;
            }
        }
        Some(out)
    }
}

/// Rank of a rational matrix by integer-only (fraction-free) elimination.
///
/// Each row is scaled to a primitive integer vector; elimination uses
/// cross-multiplication followed by division by the row content, so no
/// rational arithmetic appears in the inner loop.
pub fn rank_fraction_free(rows: &[QVec]) -> usize {
    let mut ints: Vec<BTreeMap<usize, BigInt>> = rows.iter().map(primitive_integer_row).collect();
    ints.retain(|r| !r.is_empty());
    let mut rank = 0;
    while let Some(pos) = pick_pivot_row(&ints) {
        let pivot_row = ints.swap_remove(pos);
        let (&col, a) = pivot_row.iter().next().expect("nonempty");
        let a = a.clone();
        for r in ints.iter_mut() {
            if let Some(b) = r.get(&col).cloned() {
                let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (k, x) in r.iter() {
                    next.insert(*k, x * &a);
                }
                for (k, x) in pivot_row.iter() {
                    let e = next.entry(*k).or_insert_with(BigInt::zero);
                    *e -= x * &b;
                }
                next.retain(|_, x| !x.is_zero());
                *r = make_primitive(next);
            }
        }
        ints.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

fn pick_pivot_row(rows: &[BTreeMap<usize, BigInt>]) -> Option<usize> {
    rows.iter()
        .enumerate()
        .min_by_key(|(_, r)| *r.keys().next().expect("nonempty"))
        .map(|(i, _)| i)
}

fn primitive_integer_row(v: &QVec) -> BTreeMap<usize, BigInt> {
    let mut lcm = BigInt::one();
    for x in v.values() {
        lcm = lcm.lcm(x.denom());
    }
    let row: BTreeMap<usize, BigInt> = v
        .iter()
        .map(|(k, x)| (*k, x.numer() * (&lcm / x.denom())))
        .collect();
    make_primitive(row)
}

fn make_primitive(mut row: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
    let mut g = BigInt::zero();
    for x in row.values() {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in row.values_mut() {
            *x /= &g;
        }
    }
    if let Some(x) = row.values().next() {
        if x.is_negative() {
            for x in row.values_mut() {
                *x = -&*x;
            }
        }
    }
    row
}
