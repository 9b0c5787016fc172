//! Exact iterated integrals of hyperplane delta-currents along transverse
//! piecewise-linear paths.
//!
//! Along a transverse path the letter `δ_H` contributes only at crossings,
//! so `∫ δ_{H₁}…δ_{H_r}` is the signed count of increasing crossing-time
//! tuples spelling the word.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shuffle_hopf::{antipode, coproduct, shuffle, Letter, Word};

pub type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `{p : normal · p = offset}`; crossing towards `+normal` counts `+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Hyperplane {
    pub fn new(normal: Vec<Q>, offset: Q) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::Input("hyperplane normal must be nonzero".into()));
        }
        Ok(Hyperplane { normal, offset })
    }

    fn level(&self, p: &[Q]) -> Q {
        self.normal.iter().zip(p).map(|(a, b)| a * b).sum::<Q>() - &self.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if let Some(i) = hyperplanes.iter().position(|h| h.normal.len() != dim) {
            return Err(Error::Input(format!("hyperplane {i} has the wrong dimension")));
        }
        Ok(Arrangement { dim, hyperplanes })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ArrangementDocument = serde_json::from_str(text)?;
        let hs = doc
            .hyperplanes
            .into_iter()
            .map(|h| Hyperplane::new(h.normal.iter().map(RationalDoc::value).collect::<Result<_>>()?, h.offset.value()?))
            .collect::<Result<_>>()?;
        Arrangement::new(doc.dim, hs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PLPath {
    pub vertices: Vec<Vec<Q>>,
}

impl PLPath {
    pub fn new(vertices: Vec<Vec<Q>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Input("a path needs at least two vertices".into()));
        }
        let d = vertices[0].len();
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::Input("path vertices have mixed dimensions".into()));
        }
        Ok(PLPath { vertices })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Vec<Vec<RationalDoc>> = serde_json::from_str(text)?;
        PLPath::new(doc.iter().map(|v| v.iter().map(RationalDoc::value).collect::<Result<_>>()).collect::<Result<_>>()?)
    }

    pub fn reversed(&self) -> PLPath {
        PLPath { vertices: self.vertices.iter().rev().cloned().collect() }
    }

    /// `self` then `other`; `other` must start where `self` ends.
    pub fn compose(&self, other: &PLPath) -> Result<PLPath> {
        if self.vertices.last() != other.vertices.first() {
            return Err(Error::Input("paths are not composable".into()));
        }
        let mut v = self.vertices.clone();
        v.extend(other.vertices[1..].iter().cloned());
        PLPath::new(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub hyperplane: usize,
    pub sign: i8,
    /// Segment index plus the exact parameter within the segment.
    #[serde(serialize_with = "ser_q")]
    pub time: Q,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Signed crossings in increasing time order.
pub fn crossings(path: &PLPath, arr: &Arrangement) -> Result<Vec<Crossing>> {
    if path.vertices[0].len() != arr.dim {
        return Err(Error::Input(format!("path lives in dimension {}, arrangement in {}", path.vertices[0].len(), arr.dim)));
    }
    for (vi, v) in path.vertices.iter().enumerate() {
        for (hi, h) in arr.hyperplanes.iter().enumerate() {
            if h.level(v).is_zero() {
                return Err(Error::Transversality(format!("vertex {vi} lies on hyperplane {hi}")));
            }
        }
    }
    let mut out: Vec<Crossing> = Vec::new();
    for (si, w) in path.vertices.windows(2).enumerate() {
        let mut here = Vec::new();
        for (hi, h) in arr.hyperplanes.iter().enumerate() {
            let (a, b) = (h.level(&w[0]), h.level(&w[1]));
            if a.is_positive() != b.is_positive() {
                let s = &a / (&a - &b);
                here.push(Crossing { hyperplane: hi, sign: if b.is_positive() { 1 } else { -1 }, time: s + Q::from_integer(si.into()) });
            }
        }
        here.sort_by(|x, y| x.time.cmp(&y.time));
        for pair in here.windows(2) {
            if pair[0].time == pair[1].time {
                return Err(Error::Transversality(format!(
                    "segment {si} meets hyperplanes {} and {} at the same time",
                    pair[0].hyperplane, pair[1].hyperplane
                )));
            }
        }
        out.extend(here);
    }
    Ok(out)
}

/// Signed count of increasing crossing tuples spelling `word`.
pub fn delta_iterated_integral_from(word: &[usize], cs: &[Crossing]) -> i64 {
    let mut dp = vec![0i64; word.len() + 1];
    dp[0] = 1;
    for c in cs {
        for j in (1..=word.len()).rev() {
            if word[j - 1] == c.hyperplane {
                dp[j] += dp[j - 1] * c.sign as i64;
            }
        }
    }
    dp[word.len()]
}

pub fn delta_iterated_integral(word: &[usize], path: &PLPath, arr: &Arrangement) -> Result<i64> {
    if let Some(&h) = word.iter().find(|&&h| h >= arr.hyperplanes.len()) {
        return Err(Error::Input(format!("no hyperplane {h}")));
    }
    Ok(delta_iterated_integral_from(word, &crossings(path, arr)?))
}

/// Enumerates every increasing tuple of crossing indices.
pub fn brute_force(word: &[usize], cs: &[Crossing]) -> i64 {
    fn rec(word: &[usize], cs: &[Crossing], from: usize, acc: i64) -> i64 {
        let Some((&first, rest)) = word.split_first() else {
            return acc;
        };
        (from..cs.len()).filter(|&i| cs[i].hyperplane == first).map(|i| rec(rest, cs, i + 1, acc * cs[i].sign as i64)).sum()
    }
    rec(word, cs, 0, 1)
}

fn hopf(word: &[usize]) -> Word {
    Word(word.iter().map(|&h| Letter::new(h as u32, 1)).collect())
}

fn ids(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.id as usize).collect()
}

fn int(c: &Q) -> i64 {
    c.to_integer().to_i64().expect("small coefficient")
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCounterexample {
    pub identity: String,
    pub case: usize,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleReport {
    pub cases: usize,
    pub checks: usize,
    pub brute_force_checks: usize,
    pub max_crossings: usize,
    pub failures: Vec<IdentityCounterexample>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

/// One identity case: words `u`, `v` on `alpha`, composite `alpha·beta`.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub arrangement: Arrangement,
    pub alpha: PLPath,
    pub beta: PLPath,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

/// Shuffle, coproduct and antipode identities as exact integer equations,
/// plus the brute-force comparison when a path has at most 12 crossings.
pub fn oracle_identities(cases: &[IdentityCase]) -> Result<OracleReport> {
    let mut rep = OracleReport { cases: cases.len(), ..Default::default() };
    for (n, case) in cases.iter().enumerate() {
        if case.u.iter().any(|h| case.v.contains(h)) {
            // one crossing would serve both factors at the same time
            return Err(Error::Input(format!("case {n}: shuffle words must use disjoint hyperplanes")));
        }
        let arr = &case.arrangement;
        let ca = crossings(&case.alpha, arr)?;
        let cb = crossings(&case.beta, arr)?;
        let ab = case.alpha.compose(&case.beta)?;
        let cab = crossings(&ab, arr)?;
        let crev = crossings(&case.alpha.reversed(), arr)?;
        let eval = |w: &[usize], cs: &[Crossing]| delta_iterated_integral_from(w, cs);
        let mut record = |name: &str, lhs: i64, rhs: i64| {
            rep.checks += 1;
            if lhs != rhs {
                rep.failures.push(IdentityCounterexample { identity: name.into(), case: n, lhs, rhs });
            }
        };

        let sh = shuffle(&hopf(&case.u), &hopf(&case.v));
        let rhs: i64 = sh.iter().map(|(w, c)| int(c) * eval(&ids(w), &ca)).sum();
        record("shuffle", eval(&case.u, &ca) * eval(&case.v, &ca), rhs);

        let w: Vec<usize> = case.u.iter().chain(&case.v).copied().collect();
        let split: i64 = coproduct(&hopf(&w)).iter().map(|((l, r), c)| int(c) * eval(&ids(l), &ca) * eval(&ids(r), &cb)).sum();
        record("coproduct", eval(&w, &cab), split);

        let anti: i64 = antipode(&hopf(&w)).iter().map(|(x, c)| int(c) * eval(&ids(x), &ca)).sum();
        record("antipode", eval(&w, &crev), anti);

        for cs in [&ca, &cb, &cab] {
            rep.max_crossings = rep.max_crossings.max(cs.len());
            if cs.len() <= 12 {
                for word in [&case.u, &case.v, &w] {
                    rep.brute_force_checks += 1;
                    record("brute-force", eval(word, cs), brute_force(word, cs));
                }
            }
        }
    }
    Ok(rep)
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    (0..dim).map(|_| q(rng.random_range(-40..=40), rng.random_range(1..=7))).collect()
}

fn random_transverse_path(rng: &mut ChaCha8Rng, arr: &Arrangement, start: Option<Vec<Q>>, max_crossings: usize) -> PLPath {
    loop {
        let n = rng.random_range(2..=5);
        let mut v = vec![start.clone().unwrap_or_else(|| random_point(rng, arr.dim))];
        for _ in 1..n {
            v.push(random_point(rng, arr.dim));
        }
        let p = PLPath { vertices: v };
        if let Ok(cs) = crossings(&p, arr) {
            if cs.len() <= max_crossings {
                return p;
            }
        }
    }
}

/// A seeded batch of random arrangements (≤ 5 hyperplanes in dimension
/// 2 or 3) with transverse paths and short words.
pub fn random_cases(seed: u64, count: usize) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.random_range(2..=3);
            let hs = (0..rng.random_range(1..=5))
                .map(|_| loop {
                    let normal: Vec<Q> = (0..dim).map(|_| q(rng.random_range(-3..=3), 1)).collect();
                    if let Ok(h) = Hyperplane::new(normal, q(rng.random_range(-9..=9), rng.random_range(1..=3))) {
                        break h;
                    }
                })
                .collect::<Vec<_>>();
            let k = hs.len();
            let arrangement = Arrangement { dim, hyperplanes: hs };
            let alpha = random_transverse_path(&mut rng, &arrangement, None, 6);
            // β must keep the composite transverse; its start is α's end
            let beta = random_transverse_path(&mut rng, &arrangement, alpha.vertices.last().cloned(), 6);
            // u and v draw from disjoint sets of hyperplanes
            let side: Vec<bool> = (0..k).map(|_| rng.random_bool(0.5)).collect();
            let word = |rng: &mut ChaCha8Rng, which: bool| -> Vec<usize> {
                let pool: Vec<usize> = (0..k).filter(|&h| side[h] == which).collect();
                if pool.is_empty() {
                    return Vec::new();
                }
                (0..rng.random_range(0..=3)).map(|_| pool[rng.random_range(0..pool.len())]).collect()
            };
            let u = word(&mut rng, true);
            let v = word(&mut rng, false);
            IdentityCase { arrangement, alpha, beta, u, v }
        })
        .collect()
}

/// JSON rational: integer, `[num, den]`, or `"num/den"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalDoc {
    Int(i64),
    Pair([i64; 2]),
    Text(String),
}

impl RationalDoc {
    pub fn value(&self) -> Result<Q> {
        match self {
            RationalDoc::Int(n) => Ok(Q::from_integer((*n).into())),
            RationalDoc::Pair([n, d]) => {
                if *d == 0 {
                    return Err(Error::Input("zero denominator".into()));
                }
                Ok(q(*n, *d))
            }
            RationalDoc::Text(s) => {
                let (n, d) = s.split_once('/').unwrap_or((s, "1"));
                let n: BigInt = n.trim().parse().map_err(|_| Error::Input(format!("bad rational '{s}'")))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Input(format!("bad rational '{s}'")))?;
                if d.is_zero() {
                    return Err(Error::Input("zero denominator".into()));
                }
                Ok(Q::new(n, d))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperplaneDocument {
    pub normal: Vec<RationalDoc>,
    pub offset: RationalDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrangementDocument {
    pub dim: usize,
    pub hyperplanes: Vec<HyperplaneDocument>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Vec<Q> {
        vec![q(x, 1), q(y, 1)]
    }

    fn axes() -> Arrangement {
        // H0: x = 0, H1: y = 0
        Arrangement::new(2, vec![Hyperplane::new(vec![q(1, 1), q(0, 1)], q(0, 1)).unwrap(), Hyperplane::new(vec![q(0, 1), q(1, 1)], q(0, 1)).unwrap()]).unwrap()
    }

    #[test]
    fn single_crossings() {
        let arr = axes();
        let p = PLPath::new(vec![pt(-1, 1), pt(1, 1)]).unwrap();
        let cs = crossings(&p, &arr).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!((cs[0].hyperplane, cs[0].sign), (0, 1));
        assert_eq!(crossings(&p.reversed(), &arr).unwrap()[0].sign, -1);
        let zig = PLPath::new(vec![pt(-1, 1), pt(1, 2), pt(-1, 3), pt(1, 4)]).unwrap();
        let signs: Vec<i8> = crossings(&zig, &arr).unwrap().iter().map(|c| c.sign).collect();
        assert_eq!(signs, vec![1, -1, 1]);
    }

    #[test]
    fn ordered_words() {
        let arr = axes();
        // crosses x = 0 then y = 0, both positively
        let p = PLPath::new(vec![pt(-1, -2), pt(1, -2), pt(1, 2)]).unwrap();
        assert_eq!(delta_iterated_integral(&[0, 1], &p, &arr).unwrap(), 1);
        assert_eq!(delta_iterated_integral(&[1, 0], &p, &arr).unwrap(), 0);
        assert_eq!(delta_iterated_integral(&[], &p, &arr).unwrap(), 1);
        let twice = PLPath::new(vec![pt(-1, 1), pt(1, 1), pt(1, 2), pt(-1, 2), pt(-1, 3), pt(1, 3)]).unwrap();
        // +, −, +: pairs (+,−),(+,+),(−,+)
        assert_eq!(delta_iterated_integral(&[0, 0], &twice, &arr).unwrap(), -1);
        let up_up = PLPath::new(vec![pt(-1, 1), pt(1, 1), pt(-2, 5), pt(3, 5)]).unwrap();
        let cs = crossings(&up_up, &arr).unwrap();
        assert_eq!(brute_force(&[0, 0], &cs), delta_iterated_integral_from(&[0, 0], &cs));
    }

    #[test]
    fn transversality_rejected() {
        let arr = axes();
        assert!(matches!(crossings(&PLPath::new(vec![pt(0, 1), pt(1, 1)]).unwrap(), &arr), Err(Error::Transversality(_))));
        // passes through the origin: both hyperplanes at once
        assert!(matches!(crossings(&PLPath::new(vec![pt(-1, -1), pt(1, 1)]).unwrap(), &arr), Err(Error::Transversality(_))));
    }

    #[test]
    fn json_inputs() {
        let arr = Arrangement::from_json(r#"{"dim":2,"hyperplanes":[{"normal":[1,0],"offset":"1/2"},{"normal":[[1,2],0],"offset":0}]}"#).unwrap();
        assert_eq!(arr.hyperplanes[0].offset, q(1, 2));
        assert_eq!(arr.hyperplanes[1].normal[0], q(1, 2));
        let p = PLPath::from_json(r#"[[-1, "1/3"], [[3,2], 1]]"#).unwrap();
        assert_eq!(crossings(&p, &arr).unwrap().len(), 2);
        assert!(Arrangement::from_json(r#"{"dim":2,"hyperplanes":[{"normal":[0,0],"offset":0}]}"#).is_err());
    }
}
