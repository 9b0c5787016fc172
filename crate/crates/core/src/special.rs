//! Polylogarithms, `L_{1,1}` and zeta values, each by a series and by an
//! iterated integral.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{iterated_integral, signature, symbolic_wedge, OneForm, PiecewisePath, SolverOptions, Var, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Integral,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialValue {
    pub value: C,
    pub method: Method,
    /// Remainder bound for series, accumulated step error for integrals.
    pub error: f64,
    pub terms: usize,
}

const SERIES_CAP: usize = 50_000_000;

fn check_disk(x: C, what: &str) -> Result<()> {
    if !(x.norm() < 1.0) || !x.is_finite() {
        return Err(Error::Input(format!("{what} needs |x| < 1, got {x}")));
    }
    Ok(())
}

/// `Σ xⁿ/n^k` summed until the geometric tail bound falls below
/// `1e-17 · max(1, |partial|)`.
pub fn li_series(k: u32, x: C) -> Result<SpecialValue> {
    if k == 0 {
        return Err(Error::Input("polylogarithm index must be at least 1".into()));
    }
    check_disk(x, "li_k series")?;
    let r = x.norm();
    let mut sum = C::new(0.0, 0.0);
    let mut pow = C::new(1.0, 0.0);
    let mut n = 0usize;
    loop {
        n += 1;
        pow *= x;
        sum += pow / (n as f64).powi(k as i32);
        let bound = r.powi(n as i32 + 1) / ((n + 1) as f64).powi(k as i32) / (1.0 - r);
        if bound < 1e-17 * sum.norm().max(1.0) || pow.norm() == 0.0 {
            return Ok(SpecialValue { value: sum, method: Method::Series, error: bound, terms: n });
        }
        if n >= SERIES_CAP {
            return Err(Error::NonConvergence(format!("li_{k}({x}) series did not settle in {SERIES_CAP} terms")));
        }
    }
}

/// `∫_0^x dz/(1−z) (dz/z)^{k−1}` along the straight segment.
pub fn li_integral(k: u32, x: C, opts: &SolverOptions) -> Result<SpecialValue> {
    if k == 0 {
        return Err(Error::Input("polylogarithm index must be at least 1".into()));
    }
    check_disk(x, "li_k integral")?;
    if x.norm() == 0.0 {
        return Ok(SpecialValue { value: x, method: Method::Integral, error: 0.0, terms: 0 });
    }
    let mut word = vec![OneForm::parse("rat(1,1-z1)*dz1")?];
    word.extend(std::iter::repeat(OneForm::parse("rat(1,z1)*dz1")?).take(k as usize - 1));
    let path = PiecewisePath::line(&[C::new(0.0, 0.0)], &[x])?;
    let opts = SolverOptions { allow_start_pole: true, ..*opts };
    let e = iterated_integral(&word, &path, &opts)?;
    Ok(SpecialValue { value: e.value, method: Method::Integral, error: e.error, terms: e.steps })
}

pub fn li_k(k: u32, x: C, method: Method, opts: &SolverOptions) -> Result<SpecialValue> {
    match method {
        Method::Series => li_series(k, x),
        Method::Integral => li_integral(k, x, opts),
    }
}

/// Bernoulli numbers `B_0 … B_n` (with `B_1 = −1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // Σ_{j<m+1} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    pub k: u32,
    pub value: f64,
    pub remainder_bound: f64,
    /// `(h, li_k(1−h))` for the monotone-approach check.
    pub approach: Vec<(f64, f64)>,
    pub approach_monotone: bool,
}

const ZETA_HEAD: usize = 20;
const ZETA_CORRECTIONS: usize = 8;

/// `Σ_{n<N} n^{−k}` plus the Euler–Maclaurin tail at `N`.
pub fn zeta_value(k: u32) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::Input(format!("zeta needs k ≥ 2, got {k}")));
    }
    let kf = k as f64;
    let big_n = ZETA_HEAD as f64;
    let head: f64 = (1..ZETA_HEAD).rev().map(|n| (n as f64).powf(-kf)).sum();
    let mut tail = big_n.powf(1.0 - kf) / (kf - 1.0) + 0.5 * big_n.powf(-kf);
    let b = bernoulli_numbers(2 * ZETA_CORRECTIONS + 2);
    // coefficient of B_{2j}/(2j)! · k(k+1)…(k+2j−2) N^{−k−2j+1}
    let term = |j: usize| {
        let mut rising = 1.0;
        for i in 0..(2 * j - 1) {
            rising *= kf + i as f64;
        }
        let fact: f64 = (1..=2 * j).map(|i| i as f64).product();
        b[2 * j].to_f64().unwrap_or(f64::NAN) / fact * rising * big_n.powf(-kf - 2.0 * j as f64 + 1.0)
    };
    for j in 1..=ZETA_CORRECTIONS {
        tail += term(j);
    }
    Ok((head + tail, term(ZETA_CORRECTIONS + 1).abs()))
}

pub fn zeta(k: u32) -> Result<ZetaReport> {
    let (value, remainder_bound) = zeta_value(k)?;
    let approach: Vec<(f64, f64)> = [1e-3, 1e-4]
        .iter()
        .map(|&h| Ok((h, li_series(k, C::new(1.0 - h, 0.0))?.value.re)))
        .collect::<Result<_>>()?;
    let approach_monotone = approach[0].1 < approach[1].1 && approach[1].1 < value;
    Ok(ZetaReport { k, value, remainder_bound, approach, approach_monotone })
}

/// The forms in the integral representation of `L_{1,1}` on `ℂ²`.
pub struct Mpl11Forms {
    /// `dy/(1−y)`
    pub a: OneForm,
    /// `dx/(1−x)`
    pub b: OneForm,
    /// `d(xy)/(1−xy)`
    pub c: OneForm,
    /// `dx/x`
    pub e: OneForm,
}

impl Mpl11Forms {
    pub fn new() -> Self {
        let p = |s: &str| OneForm::parse(s).expect("fixed form");
        Mpl11Forms {
            a: p("rat(1,1-z2)*dz2"),
            b: p("rat(1,1-z1)*dz1"),
            c: p("rat(z2,1-z1*z2)*dz1 + rat(z1,1-z1*z2)*dz2"),
            e: p("rat(1,z1)*dz1"),
        }
    }

    fn alphabet(&self) -> Vec<OneForm> {
        vec![self.a.clone(), self.b.clone(), self.c.clone(), self.e.clone()]
    }

    /// `(coefficient, word)`: `∫AB + ∫CA − ∫CB − ∫CE`.
    pub fn integrand() -> Vec<(f64, Vec<usize>)> {
        vec![(1.0, vec![0, 1]), (1.0, vec![2, 0]), (-1.0, vec![2, 1]), (-1.0, vec![2, 3])]
    }
}

impl Default for Mpl11Forms {
    fn default() -> Self {
        Self::new()
    }
}

/// `Σ_{0<k₁<k₂} x^{k₁} y^{k₂}/(k₁k₂)`.
pub fn mpl11_series(x: C, y: C) -> Result<SpecialValue> {
    check_disk(x, "L_{1,1}")?;
    check_disk(y, "L_{1,1}")?;
    let ry = y.norm();
    let log_bound = -(1.0 - x.norm()).ln();
    let mut harmonic = C::new(0.0, 0.0); // H_{k₂−1}(x)
    let mut xp = C::new(1.0, 0.0);
    let mut yp = C::new(1.0, 0.0);
    let mut sum = C::new(0.0, 0.0);
    let mut k2 = 1usize;
    loop {
        yp *= y;
        sum += yp / k2 as f64 * harmonic;
        xp *= x;
        harmonic += xp / k2 as f64;
        k2 += 1;
        let bound = log_bound * ry.powi(k2 as i32) / (k2 as f64 * (1.0 - ry));
        if bound < 1e-17 * sum.norm().max(1.0) || yp.norm() == 0.0 {
            return Ok(SpecialValue { value: sum, method: Method::Series, error: bound, terms: k2 });
        }
        if k2 >= SERIES_CAP {
            return Err(Error::NonConvergence("L_{1,1} series did not settle".into()));
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mpl11Config {
    /// Start offsets `ε` for the path `(εx, εy) → (x, y)`.
    pub epsilons: Vec<f64>,
}

impl Default for Mpl11Config {
    fn default() -> Self {
        Mpl11Config { epsilons: vec![1e-2, 1e-3, 1e-4] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Mpl11Integral {
    pub value: C,
    /// Raw values before extrapolation, one per `ε`.
    pub raw: Vec<(f64, C)>,
    pub error: f64,
}

/// Value of the closed integrand along the straight path from
/// `(εx, εy)` to `(x, y)`.
pub fn mpl11_integrand_on(x: C, y: C, eps: f64, opts: &SolverOptions) -> Result<(C, f64)> {
    let forms = Mpl11Forms::new();
    let path = PiecewisePath::line(&[x * eps, y * eps], &[x, y])?;
    let terms = Mpl11Forms::integrand();
    let words: Vec<Vec<usize>> = terms.iter().map(|(_, w)| w.clone()).collect();
    let sig = signature(&forms.alphabet(), &words, &path, opts)?;
    let v = terms.iter().zip(&sig.values).map(|((c, _), v)| v * *c).sum();
    Ok((v, sig.error))
}

/// Richardson extrapolation to `ε = 0` through polynomial interpolation in `ε`.
pub fn mpl11_integral(x: C, y: C, config: &Mpl11Config, opts: &SolverOptions) -> Result<Mpl11Integral> {
    check_disk(x, "L_{1,1}")?;
    check_disk(y, "L_{1,1}")?;
    if config.epsilons.is_empty() || config.epsilons.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(Error::Input("extrapolation offsets must lie in (0, 1)".into()));
    }
    if x.norm() == 0.0 {
        // every term of the double series carries x^{k₁}
        return Ok(Mpl11Integral { value: C::new(0.0, 0.0), raw: Vec::new(), error: 0.0 });
    }
    let mut raw = Vec::new();
    let mut error: f64 = 0.0;
    for &e in &config.epsilons {
        let (v, err) = mpl11_integrand_on(x, y, e, opts)?;
        raw.push((e, v));
        error = error.max(err);
    }
    raw.sort_by(|a, b| b.0.total_cmp(&a.0));
    let value = extrapolate_to_zero(&raw);
    if raw.len() > 1 {
        // the same scheme without the coarsest offset
        error = error.max((value - extrapolate_to_zero(&raw[1..])).norm());
    }
    Ok(Mpl11Integral { value, raw, error })
}

fn extrapolate_to_zero(points: &[(f64, C)]) -> C {
    let mut value = C::new(0.0, 0.0);
    for (i, (ei, vi)) in points.iter().enumerate() {
        let w: f64 = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (ej, _))| ej / (ej - ei)).product();
        value += vi * w;
    }
    value
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    /// The numerator over the common denominator vanishes identically.
    pub symbolically_zero: bool,
    pub samples: Vec<((C, C), f64)>,
    pub max_residual: f64,
    pub pass: bool,
}

/// `A∧B + C∧(A − B − E)` on `dx∧dy`, symbolically and at `samples`.
pub fn integrand_closure_check(samples: &[(C, C)]) -> Result<ClosureReport> {
    let f = Mpl11Forms::new();
    let dx = Var { index: 0, conj: false };
    let dy = Var { index: 1, conj: false };
    let rest = f.a.add(&f.b.scale(C::new(-1.0, 0.0))).add(&f.e.scale(C::new(-1.0, 0.0)));
    let total = symbolic_wedge(&f.a, &f.b, dx, dy).add(&symbolic_wedge(&f.c, &rest, dx, dy));
    let symbolically_zero = total.num.is_zero();
    let mut out = Vec::new();
    for &(x, y) in samples {
        let den = x * y * (1.0 - x) * (1.0 - y) * (1.0 - x * y);
        if den.norm() < 1e-12 {
            return Err(Error::Input(format!("sample ({x}, {y}) lies on the divisor")));
        }
        out.push(((x, y), total.eval(&[x, y]).norm()));
    }
    let max_residual = out.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    Ok(ClosureReport { symbolically_zero, samples: out, max_residual, pass: max_residual < 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli() {
        let b = bernoulli_numbers(6);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert!(b[5].is_zero());
    }

    #[test]
    fn li1_is_log() {
        let v = li_series(1, C::new(0.5, 0.0)).unwrap();
        assert!((v.value.re - 2f64.ln()).abs() < 1e-15);
        let w = li_integral(1, C::new(0.5, 0.0), &SolverOptions::default()).unwrap();
        assert!((w.value.re - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn zeta_two() {
        let (z, bound) = zeta_value(2).unwrap();
        assert!((z - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(bound < 1e-14);
        assert!(zeta_value(1).is_err());
    }

    #[test]
    fn mpl11_vanishes_on_axes() {
        let v = mpl11_series(C::new(0.4, 0.0), C::new(0.0, 0.0)).unwrap();
        assert_eq!(v.value, C::new(0.0, 0.0));
        let w = mpl11_integral(C::new(0.4, 0.0), C::new(0.0, 0.0), &Mpl11Config::default(), &SolverOptions::default()).unwrap();
        assert_eq!(w.value, C::new(0.0, 0.0));
    }
}
