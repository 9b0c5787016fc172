use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

pub type C = Complex64;

/// A variable `z_k` (`conj = false`) or `z̄_k`, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub index: usize,
    pub conj: bool,
}

/// Sorted `(variable, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(Var, u32)>;

/// Polynomial in `z_1, …, z_n, z̄_1, …, z̄_n` with complex coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Monomial, C>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<Var, u32> = a.iter().copied().collect();
    for (v, e) in b {
        *m.entry(*v).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], C::new(1.0, 0.0));
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        let e = self.terms.entry(m).or_insert(C::new(0.0, 0.0));
        *e += c;
        if *e == C::new(0.0, 0.0) {
            self.terms.retain(|_, c| *c != C::new(0.0, 0.0));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::new(0.0, 0.0)),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: C) -> Poly {
        let mut out = Poly::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(C::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(mono_mul(a, b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(C::new(1.0, 0.0));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Largest variable index used, plus one.
    pub fn arity(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.index + 1))
            .max()
            .unwrap_or(0)
    }

    /// Value at `z`, with `z̄` taken as the complex conjugate.
    pub fn eval(&self, z: &[C]) -> C {
        let mut total = C::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = *c;
            for (v, e) in m {
                let base = if v.conj { z[v.index].conj() } else { z[v.index] };
                t *= base.powu(*e);
            }
            total += t;
        }
        total
    }

    /// Partial derivative with respect to `v` (treating `z` and `z̄` as
    /// independent).
    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(w, _)| *w == v) {
                let e = m[pos].1;
                let mut nm = m.clone();
                if e == 1 {
                    nm.remove(pos);
                } else {
                    nm[pos].1 = e - 1;
                }
                out.add_term(nm, c * e as f64);
            }
        }
        out
    }

    /// Swaps `z ↔ z̄` and conjugates coefficients.
    pub fn conjugate(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut nm: Monomial = m.iter().map(|(v, e)| (Var { index: v.index, conj: !v.conj }, *e)).collect();
            nm.sort();
            out.add_term(nm, c.conj());
        }
        out
    }

    /// Substitutes a Laurent polynomial for every variable.
    pub fn compose(&self, subs: &dyn Fn(Var) -> Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let mut t = Laurent::constant(*c);
            for (v, e) in m {
                let s = subs(*v);
                for _ in 0..*e {
                    t = t.mul(&s);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn fmt_coeff(c: &C) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| {
                    let name = if v.conj { format!("zb{}", v.index + 1) } else { format!("z{}", v.index + 1) };
                    if *e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_coeff(c))?;
            } else if *c == C::new(1.0, 0.0) {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `Σ_{k} c_k u^{k + low}`, a Laurent polynomial in one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub low: i32,
    pub coeffs: Vec<C>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Laurent { low: 0, coeffs: vec![c] }
    }

    /// `a + b u`.
    pub fn linear(a: C, b: C) -> Self {
        Laurent { low: 0, coeffs: vec![a, b] }
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        Laurent { low: 0, coeffs }
    }

    /// `a + b u^{-1}`.
    pub fn inverse_linear(a: C, b: C) -> Self {
        Laurent { low: -1, coeffs: vec![b, a] }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i32).max(other.low + other.coeffs.len() as i32);
        let mut coeffs = vec![C::new(0.0, 0.0); (high - low) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + i] += c;
        }
        Laurent { low, coeffs }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::zero();
        }
        let mut coeffs = vec![C::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent { low: self.low + other.low, coeffs }
    }

    pub fn eval(&self, u: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc * u.powi(self.low)
    }

    /// Roots in `ℂ∖{0}` of the polynomial part after clearing the `u^low`
    /// factor. Coefficients below `1e-14` of the largest are treated as zero.
    pub fn roots(&self) -> Vec<C> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Vec::new();
        }
        let cut = 1e-14 * scale;
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= cut) {
            c.pop();
        }
        let mut lead_zero = 0;
        while lead_zero < c.len() && c[lead_zero].norm() <= cut {
            lead_zero += 1;
        }
        let mut roots = vec![C::new(0.0, 0.0); lead_zero];
        roots.extend(polynomial_roots(&c[lead_zero..]));
        if self.low < 0 {
            // u = 0 is a pole, not a root, of the Laurent form
            roots.retain(|r| r.norm() > 0.0);
        }
        roots
    }
}

/// Roots of `Σ c_k u^k` by the Durand–Kerner iteration with Newton polish.
pub fn polynomial_roots(c: &[C]) -> Vec<C> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<C> = c.iter().map(|x| x / lead).collect();
    let eval = |u: C| {
        let mut acc = C::new(0.0, 0.0);
        for k in monic.iter().rev() {
            acc = acc * u + k;
        }
        acc
    };
    let radius = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = C::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let deriv: Vec<C> = (1..=n).map(|k| monic[k] * k as f64).collect();
    for r in z.iter_mut() {
        for _ in 0..3 {
            let mut d = C::new(0.0, 0.0);
            for k in deriv.iter().rev() {
                d = d * *r + k;
            }
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn roots_of_cubic() {
        // (u-1)(u-2)(u+3) = u^3 - 7u + 6
        let mut r = polynomial_roots(&[c(6.0), c(-7.0), c(0.0), c(1.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (x, y) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((x - c(y)).norm() < 1e-12);
        }
    }

    #[test]
    fn partials_and_conjugates() {
        let z1 = Poly::var(Var { index: 0, conj: false });
        let zb1 = Poly::var(Var { index: 0, conj: true });
        let p = z1.mul(&z1).mul(&zb1);
        let dz = p.partial(Var { index: 0, conj: false });
        let at = [C::new(0.3, 0.4)];
        assert!((dz.eval(&at) - at[0] * at[0].conj() * 2.0).norm() < 1e-15);
        let q = p.conjugate();
        assert!((q.eval(&at) - p.eval(&at).conj()).norm() < 1e-15);
    }

    #[test]
    fn laurent_composition() {
        // z̄ on the unit circle is 1/u
        let p = Poly::var(Var { index: 0, conj: true });
        let l = p.compose(&|v| if v.conj { Laurent::inverse_linear(c(0.0), c(1.0)) } else { Laurent::linear(c(0.0), c(1.0)) });
        let u = C::from_polar(1.0, 0.7);
        assert!((l.eval(u) - u.conj()).norm() < 1e-15);
    }
}
