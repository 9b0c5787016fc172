use std::fmt;

use crate::error::{Error, Result};

use super::poly::{Poly, Var, C};

/// `coeff · num/den · dz_j` (or `dz̄_j` when `diff.conj`).
#[derive(Clone, Debug, PartialEq)]
pub struct FormTerm {
    pub coeff: C,
    pub num: Poly,
    pub den: Poly,
    pub diff: Var,
}

/// A finite sum of rational multiples of `dz_j` and `dz̄_j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OneForm {
    pub terms: Vec<FormTerm>,
}

fn one() -> C {
    C::new(1.0, 0.0)
}

impl OneForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `dz_j`, 0-based.
    pub fn dz(j: usize) -> Self {
        Self::rational(Poly::constant(one()), Poly::constant(one()), j)
    }

    /// `num/den · dz_j`.
    pub fn rational(num: Poly, den: Poly, j: usize) -> Self {
        OneForm { terms: vec![FormTerm { coeff: one(), num, den, diff: Var { index: j, conj: false } }] }
    }

    /// `d log p = Σ_k ∂p/∂z_k / p · dz_k + ∂p/∂z̄_k / p · dz̄_k`.
    pub fn dlog(p: &Poly) -> Self {
        let mut out = OneForm::zero();
        for index in 0..p.arity() {
            for conj in [false, true] {
                let v = Var { index, conj };
                let d = p.partial(v);
                if !d.is_zero() {
                    out.terms.push(FormTerm { coeff: one(), num: d, den: p.clone(), diff: v });
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<OneForm> {
        let mut p = Parser { s: text.as_bytes(), pos: 0, text };
        let f = p.form()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(f)
    }

    pub fn scale(&self, c: C) -> OneForm {
        OneForm {
            terms: self.terms.iter().map(|t| FormTerm { coeff: t.coeff * c, ..t.clone() }).collect(),
        }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OneForm { terms }
    }

    pub fn conjugate(&self) -> OneForm {
        OneForm {
            terms: self
                .terms
                .iter()
                .map(|t| FormTerm {
                    coeff: t.coeff.conj(),
                    num: t.num.conjugate(),
                    den: t.den.conjugate(),
                    diff: Var { index: t.diff.index, conj: !t.diff.conj },
                })
                .collect(),
        }
    }

    /// Number of complex coordinates the form refers to.
    pub fn arity(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.num.arity().max(t.den.arity()).max(t.diff.index + 1))
            .max()
            .unwrap_or(0)
    }

    /// Denominators that are not constant.
    pub fn denominators(&self) -> Vec<&Poly> {
        self.terms.iter().filter(|t| t.den.as_constant().is_none()).map(|t| &t.den).collect()
    }

    /// Coefficient of `dz_j` (or `dz̄_j`) at `z`.
    pub fn component(&self, v: Var, z: &[C]) -> C {
        self.terms
            .iter()
            .filter(|t| t.diff == v)
            .map(|t| t.coeff * t.num.eval(z) / t.den.eval(z))
            .sum()
    }

    /// `γ*w / dt` at a point with velocity `dz`.
    pub fn pullback(&self, z: &[C], dz: &[C]) -> C {
        let mut acc = C::new(0.0, 0.0);
        for t in &self.terms {
            let vel = if t.diff.conj { dz[t.diff.index].conj() } else { dz[t.diff.index] };
            acc += t.coeff * t.num.eval(z) / t.den.eval(z) * vel;
        }
        acc
    }

    /// Coefficient functions of `dw` on `dv_a ∧ dv_b`, evaluated at `z`, as
    /// a map over ordered variable pairs `a < b`.
    pub fn exterior_derivative(&self, z: &[C]) -> Vec<((Var, Var), C)> {
        let mut out: Vec<((Var, Var), C)> = Vec::new();
        let mut push = |a: Var, b: Var, c: C| {
            let (key, c) = if a < b { ((a, b), c) } else { ((b, a), -c) };
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some((_, x)) => *x += c,
                None => out.push((key, c)),
            }
        };
        for t in &self.terms {
            let q = t.den.eval(z);
            let p = t.num.eval(z);
            for index in 0..z.len() {
                for conj in [false, true] {
                    let v = Var { index, conj };
                    if v == t.diff {
                        continue;
                    }
                    let dp = t.num.partial(v).eval(z);
                    let dq = t.den.partial(v).eval(z);
                    let d = t.coeff * (dp * q - p * dq) / (q * q);
                    push(v, t.diff, d);
                }
            }
        }
        out.retain(|(_, c)| c.norm() > 0.0);
        out
    }
}

/// Coefficients of `a ∧ b` on ordered variable pairs at `z`.
pub fn wedge_at(a: &OneForm, b: &OneForm, z: &[C]) -> Vec<((Var, Var), C)> {
    let vars: Vec<Var> = (0..z.len())
        .flat_map(|index| [Var { index, conj: false }, Var { index, conj: true }])
        .collect();
    let mut out = Vec::new();
    for (i, &u) in vars.iter().enumerate() {
        for &v in &vars[i + 1..] {
            let c = a.component(u, z) * b.component(v, z) - a.component(v, z) * b.component(u, z);
            if c.norm() > 0.0 {
                out.push(((u, v), c));
            }
        }
    }
    out
}

/// A rational function `num/den` used for exact symbolic form algebra.
#[derive(Clone, Debug)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn { num: Poly::zero(), den: Poly::constant(one()) }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalFn { num: self.num.add(&other.num), den: self.den.clone() };
        }
        RationalFn {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: self.num.scale(C::new(-1.0, 0.0)), den: self.den.clone() }
    }

    pub fn eval(&self, z: &[C]) -> C {
        self.num.eval(z) / self.den.eval(z)
    }
}

impl OneForm {
    /// Coefficient of `dv` as one rational function.
    pub fn symbolic_component(&self, v: Var) -> RationalFn {
        self.terms.iter().filter(|t| t.diff == v).fold(RationalFn::zero(), |acc, t| {
            acc.add(&RationalFn { num: t.num.scale(t.coeff), den: t.den.clone() })
        })
    }
}

/// Symbolic coefficient of `a ∧ b` on `du ∧ dv`.
pub fn symbolic_wedge(a: &OneForm, b: &OneForm, u: Var, v: Var) -> RationalFn {
    a.symbolic_component(u)
        .mul(&b.symbolic_component(v))
        .add(&a.symbolic_component(v).mul(&b.symbolic_component(u)).neg())
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let d = if t.diff.conj { format!("dzb{}", t.diff.index + 1) } else { format!("dz{}", t.diff.index + 1) };
            write!(f, "({}{:+}i)*rat({},{})*{}", t.coeff.re, t.coeff.im, t.num, t.den, d)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Input(format!("cannot parse form '{}' at {}: {what}", self.text, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{lit}'")))
        }
    }

    fn index(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let n: usize = self.text[start..self.pos].parse().map_err(|_| self.err("expected coordinate index"))?;
        if n == 0 {
            return Err(self.err("coordinates are numbered from 1"));
        }
        Ok(n - 1)
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < self.s.len() && (self.s[self.pos] == b'e' || self.s[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.s.len() && (self.s[self.pos] == b'+' || self.s[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if digits == self.pos {
                self.pos = save;
            }
        }
        self.text[start..self.pos].parse().map_err(|_| self.err("expected number"))
    }

    // form := fterm (('+'|'-') fterm)*
    fn form(&mut self) -> Result<OneForm> {
        let mut sign = 1.0;
        if self.eat("-") {
            sign = -1.0;
        } else {
            self.eat("+");
        }
        let mut acc = self.fterm()?.scale(C::new(sign, 0.0));
        loop {
            if self.eat("+") {
                acc = acc.add(&self.fterm()?);
            } else if self.eat("-") {
                acc = acc.add(&self.fterm()?.scale(C::new(-1.0, 0.0)));
            } else {
                return Ok(acc);
            }
        }
    }

    // fterm := (coef '*')* fatom
    fn fterm(&mut self) -> Result<OneForm> {
        let mut c = one();
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() || b == b'.' => {
                    let x = self.number()?;
                    c *= if self.eat("i") { C::new(0.0, x) } else { C::new(x, 0.0) };
                    self.expect("*")?;
                }
                Some(b'i') if !self.s[self.pos..].starts_with(b"i*") => break,
                Some(b'i') => {
                    self.pos += 1;
                    c *= C::new(0.0, 1.0);
                    self.expect("*")?;
                }
                _ => break,
            }
        }
        Ok(self.fatom()?.scale(c))
    }

    fn differential(&mut self) -> Result<Var> {
        self.expect("dz")?;
        let conj = self.eat("b");
        Ok(Var { index: self.index()?, conj })
    }

    fn fatom(&mut self) -> Result<OneForm> {
        if self.eat("dlog(") {
            let p = self.poly()?;
            self.expect(")")?;
            return Ok(OneForm::dlog(&p));
        }
        if self.eat("rat(") {
            let num = self.poly()?;
            self.expect(",")?;
            let den = self.poly()?;
            self.expect(")")?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            self.expect("*")?;
            let diff = self.differential()?;
            return Ok(OneForm { terms: vec![FormTerm { coeff: one(), num, den, diff }] });
        }
        if self.eat("conj(") {
            let f = self.form()?;
            self.expect(")")?;
            return Ok(f.conjugate());
        }
        if self.eat("(") {
            let f = self.form()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.peek() == Some(b'd') {
            let diff = self.differential()?;
            return Ok(OneForm {
                terms: vec![FormTerm { coeff: one(), num: Poly::constant(one()), den: Poly::constant(one()), diff }],
            });
        }
        Err(self.err("expected dz, dzb, dlog(..), rat(..)*dz, conj(..)"))
    }

    // poly := pterm (('+'|'-') pterm)*
    fn poly(&mut self) -> Result<Poly> {
        let neg = self.eat("-");
        if !neg {
            self.eat("+");
        }
        let mut acc = self.pterm()?;
        if neg {
            acc = acc.scale(C::new(-1.0, 0.0));
        }
        loop {
            if self.eat("+") {
                acc = acc.add(&self.pterm()?);
            } else if self.eat("-") {
                acc = acc.sub(&self.pterm()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn pterm(&mut self) -> Result<Poly> {
        let mut acc = self.pfactor()?;
        while self.eat("*") {
            acc = acc.mul(&self.pfactor()?);
        }
        Ok(acc)
    }

    fn pfactor(&mut self) -> Result<Poly> {
        let base = self.pbase()?;
        if self.eat("^") {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = self.text[start..self.pos].parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn pbase(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(")")?;
                Ok(p)
            }
            Some(b'z') => {
                self.pos += 1;
                let conj = self.eat("b");
                Ok(Poly::var(Var { index: self.index()?, conj }))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Poly::constant(C::new(0.0, 1.0)))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let x = self.number()?;
                if self.eat("i") {
                    Ok(Poly::constant(C::new(0.0, x)))
                } else {
                    Ok(Poly::constant(C::new(x, 0.0)))
                }
            }
            _ => Err(self.err("expected polynomial")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C, b: C) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn grammar() {
        let z = [C::new(0.3, 0.1)];
        let v = [C::new(1.0, 0.0)];
        let dlog = OneForm::parse("dlog(z1)").unwrap();
        assert!(close(dlog.pullback(&z, &v), 1.0 / z[0]));
        let dlog1 = OneForm::parse("dlog(1-z1)").unwrap();
        assert!(close(dlog1.pullback(&z, &v), -1.0 / (1.0 - z[0])));
        let r = OneForm::parse("2*rat(1, 1 - z1)*dz1 - 0.5i*dz1").unwrap();
        assert!(close(r.pullback(&z, &v), 2.0 / (1.0 - z[0]) - C::new(0.0, 0.5)));
        let c = OneForm::parse("conj(rat(1,z1)*dz1)").unwrap();
        assert!(close(c.pullback(&z, &v), (1.0 / z[0]).conj()));
        let sq = OneForm::parse("rat((z1+1)^2, 3)*dz1").unwrap();
        assert!(close(sq.pullback(&z, &v), (z[0] + 1.0) * (z[0] + 1.0) / 3.0));
        assert!(OneForm::parse("rat(1,0)*dz1").is_err());
        assert!(OneForm::parse("dz0").is_err());
        assert!(OneForm::parse("dz1 +").is_err());
    }

    #[test]
    fn closed_forms_have_zero_derivative() {
        let w = OneForm::parse("dlog(1-z1*z2)").unwrap();
        let z = [C::new(0.2, 0.1), C::new(-0.3, 0.4)];
        assert!(w.exterior_derivative(&z).iter().all(|(_, c)| c.norm() < 1e-14));
        let xi = OneForm::parse("rat(-zb1,1)*dz1").unwrap();
        let d = xi.exterior_derivative(&z[..1]);
        assert_eq!(d.len(), 1);
    }
}
