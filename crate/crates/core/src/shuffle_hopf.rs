//! The shuffle Hopf algebra on words of graded letters.
//!
//! A letter of degree `d` sits in shifted degree `d - 1`; every Koszul sign in
//! this module is computed from shifted degrees. Coefficients are exact
//! rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub id: u32,
    pub degree: u32,
}

impl Letter {
    pub fn new(id: u32, degree: u32) -> Self {
        Self { id, degree }
    }

    pub fn shifted_degree(&self) -> i64 {
        self.degree as i64 - 1
    }

    fn odd(&self) -> bool {
        self.shifted_degree().rem_euclid(2) == 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Degree in `A^{>0}[1]^{⊗r}`.
    pub fn shifted_degree(&self) -> i64 {
        self.0.iter().map(Letter::shifted_degree).sum()
    }

    fn odd(&self) -> bool {
        self.shifted_degree().rem_euclid(2) == 1
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{}", l.id)?;
        }
        write!(f, "]")
    }
}

/// Rational linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalWordSum {
    terms: BTreeMap<Word, Q>,
}

impl FormalWordSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut s = Self::zero();
        s.add_term(w, Q::one());
        s
    }

    pub fn unit() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.terms.insert(w.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &FormalWordSum, c: &Q) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bilinear extension of [`shuffle`].
    pub fn shuffle(&self, other: &FormalWordSum) -> FormalWordSum {
        let mut out = FormalWordSum::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_scaled(&shuffle(u, v), &(a * b));
            }
        }
        out
    }

    /// Coefficient of the empty word (the counit).
    pub fn counit(&self) -> Q {
        self.coeff(&Word::empty())
    }
}

/// Rational linear combination of pairs of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorSum {
    terms: BTreeMap<(Word, Word), Q>,
}

impl TensorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let remove = match self.terms.get_mut(&key) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.terms.insert(key.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product in the graded tensor square:
    /// `(a⊗b)(c⊗d) = (-1)^{|b||c|} (a⧢c)⊗(b⧢d)`.
    pub fn shuffle(&self, other: &TensorSum) -> TensorSum {
        let mut out = TensorSum::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let mut coef = x * y;
                if b.odd() && c.odd() {
                    coef = -coef;
                }
                let left = shuffle(a, c);
                let right = shuffle(b, d);
                for (l, p) in left.iter() {
                    for (r, s) in right.iter() {
                        out.add_term(l.clone(), r.clone(), &coef * p * s);
                    }
                }
            }
        }
        out
    }

    /// Applies `f ⊗ g` to every term; `f` and `g` must have degree zero.
    pub fn map_each(
        &self,
        f: impl Fn(&Word) -> FormalWordSum,
        g: impl Fn(&Word) -> FormalWordSum,
    ) -> TensorSum {
        let mut out = TensorSum::zero();
        for ((a, b), x) in &self.terms {
            let fa = f(a);
            let gb = g(b);
            for (l, p) in fa.iter() {
                for (r, s) in gb.iter() {
                    out.add_term(l.clone(), r.clone(), x * p * s);
                }
            }
        }
        out
    }

    /// Multiplies the two tensor factors with the shuffle product.
    pub fn multiply(&self) -> FormalWordSum {
        let mut out = FormalWordSum::zero();
        for ((a, b), x) in &self.terms {
            out.add_scaled(&shuffle(a, b), x);
        }
        out
    }
}

/// Signed shuffle product of two words.
pub fn shuffle(u: &Word, v: &Word) -> FormalWordSum {
    let mut out = FormalWordSum::zero();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    // suffix parity of u: parity of shifted degrees of u[i..]
    let mut suffix_odd = vec![false; u.len() + 1];
    for i in (0..u.len()).rev() {
        suffix_odd[i] = suffix_odd[i + 1] ^ u.0[i].odd();
    }
    shuffle_rec(&u.0, &v.0, 0, 0, false, &suffix_odd, &mut buf, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn shuffle_rec(
    u: &[Letter],
    v: &[Letter],
    i: usize,
    j: usize,
    negative: bool,
    suffix_odd: &[bool],
    buf: &mut Vec<Letter>,
    out: &mut FormalWordSum,
) {
    if i == u.len() && j == v.len() {
        let c = if negative { -Q::one() } else { Q::one() };
        out.add_term(Word(buf.clone()), c);
        return;
    }
    if i < u.len() {
        buf.push(u[i]);
        shuffle_rec(u, v, i + 1, j, negative, suffix_odd, buf, out);
        buf.pop();
    }
    if j < v.len() {
        // v[j] jumps over the letters u[i..] still to be placed
        let flip = v[j].odd() && suffix_odd[i];
        buf.push(v[j]);
        shuffle_rec(u, v, i, j + 1, negative ^ flip, suffix_odd, buf, out);
        buf.pop();
    }
}

/// Deconcatenation coproduct.
pub fn coproduct(w: &Word) -> TensorSum {
    let mut out = TensorSum::zero();
    for j in 0..=w.len() {
        out.add_term(Word(w.0[..j].to_vec()), Word(w.0[j..].to_vec()), Q::one());
    }
    out
}

/// Antipode: `(-1)^r` times the Koszul sign of reversing the letters.
pub fn antipode(w: &Word) -> FormalWordSum {
    let r = w.len();
    let mut negative = r % 2 == 1;
    let odd_count = w.0.iter().filter(|l| l.odd()).count();
    // reversal transposes every pair once
    if (odd_count * odd_count.saturating_sub(1) / 2) % 2 == 1 {
        negative = !negative;
    }
    let mut rev = w.0.clone();
    rev.reverse();
    let c = if negative { -Q::one() } else { Q::one() };
    let mut out = FormalWordSum::zero();
    out.add_term(Word(rev), c);
    out
}

pub fn antipode_sum(s: &FormalWordSum) -> FormalWordSum {
    let mut out = FormalWordSum::zero();
    for (w, c) in s.iter() {
        out.add_scaled(&antipode(w), c);
    }
    out
}

/// Named alphabet used for JSON serialization of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    /// Letter name to form degree.
    pub letters: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordsDocument {
    pub alphabet: Alphabet,
    pub words: Vec<Vec<String>>,
}

impl Alphabet {
    fn index_of(&self, name: &str) -> Option<(u32, u32)> {
        self.letters
            .iter()
            .enumerate()
            .find(|(_, (n, _))| n.as_str() == name)
            .map(|(i, (_, d))| (i as u32, *d))
    }

    pub fn name_of(&self, id: u32) -> Option<&str> {
        self.letters.keys().nth(id as usize).map(String::as_str)
    }

    pub fn word(&self, names: &[String]) -> Result<Word> {
        names
            .iter()
            .map(|n| {
                self.index_of(n)
                    .map(|(id, d)| Letter::new(id, d))
                    .ok_or_else(|| Error::Input(format!("unknown letter '{n}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn names(&self, w: &Word) -> Result<Vec<String>> {
        w.0.iter()
            .map(|l| {
                self.name_of(l.id)
                    .map(str::to_owned)
                    .ok_or_else(|| Error::Input(format!("letter id {} outside alphabet", l.id)))
            })
            .collect()
    }
}

impl WordsDocument {
    pub fn parse(json: &str) -> Result<(Alphabet, Vec<Word>)> {
        let doc: WordsDocument = serde_json::from_str(json)?;
        let words = doc
            .words
            .iter()
            .map(|w| doc.alphabet.word(w))
            .collect::<Result<Vec<_>>>()?;
        Ok((doc.alphabet, words))
    }

    pub fn render(alphabet: &Alphabet, words: &[Word]) -> Result<String> {
        let doc = WordsDocument {
            alphabet: alphabet.clone(),
            words: words.iter().map(|w| alphabet.names(w)).collect::<Result<_>>()?,
        };
        Ok(serde_json::to_string(&doc)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn w(spec: &[(u32, u32)]) -> Word {
        Word(spec.iter().map(|&(i, d)| Letter::new(i, d)).collect())
    }

    #[test]
    fn shuffle_of_two_letters() {
        let s = shuffle(&w(&[(0, 1)]), &w(&[(1, 1)]));
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(&w(&[(0, 1), (1, 1)])), q(1));
        assert_eq!(s.coeff(&w(&[(1, 1), (0, 1)])), q(1));
    }

    #[test]
    fn empty_word_is_unit() {
        let v = w(&[(0, 1), (2, 3)]);
        assert_eq!(shuffle(&Word::empty(), &v), FormalWordSum::from_word(v.clone()));
        assert_eq!(shuffle(&v, &Word::empty()), FormalWordSum::from_word(v));
    }

    #[test]
    fn shuffle_ab_with_c() {
        let (a, b, c) = ((0, 1), (1, 1), (2, 1));
        let s = shuffle(&w(&[a, b]), &w(&[c]));
        let mut expected = FormalWordSum::zero();
        expected.add_term(w(&[a, b, c]), q(1));
        expected.add_term(w(&[a, c, b]), q(1));
        expected.add_term(w(&[c, a, b]), q(1));
        assert_eq!(s, expected);
    }

    #[test]
    fn odd_shifted_letters_anticommute() {
        // degree-2 letters have shifted degree 1
        let x = w(&[(0, 2)]);
        assert!(shuffle(&x, &x).is_zero());
        let y = w(&[(0, 3)]);
        assert_eq!(shuffle(&y, &y).coeff(&w(&[(0, 3), (0, 3)])), q(2));
    }

    #[test]
    fn coproduct_examples() {
        let d = coproduct(&w(&[(0, 1), (1, 1)]));
        assert_eq!(d.len(), 3);
        let e = coproduct(&Word::empty());
        assert_eq!(e.len(), 1);
        assert!(e.iter().all(|((l, r), c)| l.is_empty() && r.is_empty() && *c == q(1)));
    }

    #[test]
    fn antipode_examples() {
        let a = w(&[(0, 1)]);
        assert_eq!(antipode(&a).coeff(&a), q(-1));
        let ab = w(&[(0, 1), (1, 1)]);
        assert_eq!(antipode(&ab).coeff(&w(&[(1, 1), (0, 1)])), q(1));
        // m(S⊗id)Δ(ab) = ba - (a⧢b)... = 0
        let lhs = coproduct(&ab).map_each(antipode, |x| FormalWordSum::from_word(x.clone())).multiply();
        assert!(lhs.is_zero());
    }

    #[test]
    fn words_json_roundtrip() {
        let json = r#"{"alphabet":{"letters":{"a":1,"w":2}},"words":[["a","w"],[]]}"#;
        let (alpha, words) = WordsDocument::parse(json).unwrap();
        assert_eq!(words[0], w(&[(0, 1), (1, 2)]));
        let back = WordsDocument::render(&alpha, &words).unwrap();
        assert_eq!(back, json);
    }
}
