use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::form::OneForm;
use super::path::PiecewisePath;
use super::poly::C;

const STAGES: usize = 5;
const MIN_STEP: f64 = 1e-10;

/// Gauss–Legendre collocation tableau on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct GaussTableau {
    pub c: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussTableau {
    pub fn new(s: usize) -> Self {
        let mut c: Vec<f64> = (0..s)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (s as f64 + 0.5)).cos();
                for _ in 0..50 {
                    let (p, dp) = legendre(s, x);
                    let dx = p / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (1.0 - x) / 2.0
            })
            .collect();
        c.sort_by(|x, y| x.partial_cmp(y).expect("finite nodes"));
        // Σ_j a_ij c_j^q = c_i^{q+1}/(q+1), Σ_j b_j c_j^q = 1/(q+1)
        let v = DMatrix::from_fn(s, s, |q, j| c[j].powi(q as i32));
        let lu = v.lu();
        let solve = |upper: f64| {
            let rhs = DVector::from_fn(s, |q, _| upper.powi(q as i32 + 1) / (q + 1) as f64);
            lu.solve(&rhs).expect("distinct nodes").iter().copied().collect::<Vec<f64>>()
        };
        let a = c.iter().map(|&ci| solve(ci)).collect();
        let b = solve(1.0);
        GaussTableau { c, a, b }
    }
}

/// `y' = y · A(t)` for row vectors `y`, with `A_{jk}(t) = coeff · γ*form`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub size: usize,
    pub forms: Vec<OneForm>,
    /// `(j, k, form index, coefficient)`.
    pub entries: Vec<(usize, usize, usize, C)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct FlowResult {
    /// One final row per initial row.
    pub rows: Vec<Vec<C>>,
    /// Sum of accepted local error estimates.
    pub error: f64,
    pub stats: StepStats,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub singularity_floor: f64,
    pub allow_start_pole: bool,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, singularity_floor: 1e-6, allow_start_pole: false, max_steps: 200_000 }
    }
}

struct Stepper<'a> {
    sys: &'a LinearSystem,
    tab: GaussTableau,
    triangular: bool,
    diag: Vec<Vec<(usize, C)>>,
    // incoming off-diagonal entries per column
    incoming: Vec<Vec<(usize, usize, C)>>,
}

impl<'a> Stepper<'a> {
    fn new(sys: &'a LinearSystem) -> Self {
        let triangular = sys.entries.iter().all(|&(j, k, _, _)| j <= k);
        let mut diag = vec![Vec::new(); sys.size];
        let mut incoming = vec![Vec::new(); sys.size];
        for &(j, k, f, c) in &sys.entries {
            if j == k {
                diag[k].push((f, c));
            } else {
                incoming[k].push((j, f, c));
            }
        }
        Stepper { sys, tab: GaussTableau::new(STAGES), triangular, diag, incoming }
    }

    fn form_values(&self, path: &PiecewisePath, seg: usize, t: f64) -> Vec<C> {
        let s = &path.segments()[seg];
        let z = s.eval(t);
        let v = s.velocity(t);
        self.sys.forms.iter().map(|f| f.pullback(&z, &v)).collect()
    }

    /// One collocation step of size `h` from `t0`, for every row.
    fn step(&self, path: &PiecewisePath, seg: usize, t0: f64, h: f64, rows: &[Vec<C>]) -> Result<Vec<Vec<C>>> {
        let s = STAGES;
        let vals: Vec<Vec<C>> = self.tab.c.iter().map(|ci| self.form_values(path, seg, t0 + ci * h)).collect();
        if vals.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonConvergence(format!("non-finite integrand on segment {seg} near t = {t0}")));
        }
        let n = self.sys.size;
        rows.iter()
            .map(|y0| {
                // k[i][col]: stage derivatives; y[i][col]: stage values
                let mut k = vec![vec![C::new(0.0, 0.0); n]; s];
                let mut y = vec![vec![C::new(0.0, 0.0); n]; s];
                if self.triangular {
                    for col in 0..n {
                        let mut rhs = vec![C::new(0.0, 0.0); s];
                        for i in 0..s {
                            for &(j, f, c) in &self.incoming[col] {
                                rhs[i] += y[i][j] * vals[i][f] * c;
                            }
                        }
                        if self.diag[col].is_empty() {
                            k.iter_mut().zip(&rhs).for_each(|(ki, r)| ki[col] = *r);
                        } else {
                            let d: Vec<C> = (0..s).map(|i| self.diag[col].iter().map(|&(f, c)| vals[i][f] * c).sum()).collect();
                            // k_i − d_i h Σ_j a_ij k_j = rhs_i + d_i y0
                            let m = DMatrix::from_fn(s, s, |i, j| {
                                let id = if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
                                id - d[i] * h * self.tab.a[i][j]
                            });
                            let r = DVector::from_fn(s, |i, _| rhs[i] + d[i] * y0[col]);
                            let sol = m.lu().solve(&r).ok_or_else(|| Error::NonConvergence("singular stage system".into()))?;
                            for i in 0..s {
                                k[i][col] = sol[i];
                            }
                        }
                        for i in 0..s {
                            y[i][col] = y0[col] + (0..s).map(|j| k[j][col] * self.tab.a[i][j] * h).sum::<C>();
                        }
                    }
                } else {
                    // unknown K_{i,col} at index i*n + col
                    let dim = s * n;
                    let mut m = DMatrix::<C>::identity(dim, dim);
                    let mut r = DVector::<C>::zeros(dim);
                    for i in 0..s {
                        for &(j, col, f, c) in &self.sys.entries {
                            let a_val = vals[i][f] * c;
                            r[i * n + col] += y0[j] * a_val;
                            for l in 0..s {
                                m[(i * n + col, l * n + j)] -= a_val * h * self.tab.a[i][l];
                            }
                        }
                    }
                    let sol = m.lu().solve(&r).ok_or_else(|| Error::NonConvergence("singular stage system".into()))?;
                    for i in 0..s {
                        for col in 0..n {
                            k[i][col] = sol[i * n + col];
                        }
                    }
                }
                Ok((0..n).map(|col| y0[col] + (0..s).map(|j| k[j][col] * self.tab.b[j] * h).sum::<C>()).collect())
            })
            .collect()
    }
}

fn max_diff(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Integrates `y' = y A` along `path` from the given initial rows.
pub fn solve_linear_flow(sys: &LinearSystem, path: &PiecewisePath, init: Vec<Vec<C>>, opts: &SolverOptions) -> Result<FlowResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    if init.iter().any(|r| r.len() != sys.size) {
        return Err(Error::Input("initial row has the wrong length".into()));
    }
    let dens: Vec<_> = sys.forms.iter().flat_map(|f| f.denominators()).collect();
    path.check_singularities(&dens, opts.singularity_floor, opts.allow_start_pole)?;
    for f in &sys.forms {
        if f.arity() > path.dim() {
            return Err(Error::Input(format!("form {f} needs {} coordinates, path has {}", f.arity(), path.dim())));
        }
    }
    let stepper = Stepper::new(sys);
    let nseg = path.segments().len() as f64;
    let mut rows = init;
    let mut error = 0.0;
    let mut stats = StepStats::default();
    for seg in 0..path.segments().len() {
        let mut t = 0.0;
        let mut h: f64 = if opts.allow_start_pole && seg == 0 { 1e-3 } else { 0.125 };
        while t < 1.0 {
            h = h.min(1.0 - t);
            let full = stepper.step(path, seg, t, h, &rows)?;
            let half = stepper.step(path, seg, t, h / 2.0, &rows)?;
            let half = stepper.step(path, seg, t + h / 2.0, h / 2.0, &half)?;
            stats.evaluations += 3 * STAGES;
            let err = max_diff(&full, &half) / 1023.0;
            let budget = 0.5 * opts.tol * h / nseg;
            if err <= budget {
                rows = half;
                t += h;
                error += err;
                stats.accepted += 1;
            } else {
                stats.rejected += 1;
            }
            let ratio = if err > 0.0 { budget / err } else { f64::INFINITY };
            let factor = (0.9 * ratio.powf(1.0 / 11.0)).clamp(0.2, 4.0);
            if !factor.is_finite() {
                return Err(Error::NonConvergence(format!("non-finite error estimate on segment {seg}")));
            }
            h *= factor;
            if t < 1.0 && h < MIN_STEP {
                return Err(Error::NonConvergence(format!("step size underflow on segment {seg} at t = {t}")));
            }
            if stats.accepted + stats.rejected > opts.max_steps {
                return Err(Error::NonConvergence(format!("more than {} steps", opts.max_steps)));
            }
        }
    }
    Ok(FlowResult { rows, error, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_is_gauss() {
        let t = GaussTableau::new(5);
        // exact for polynomials of degree 9
        let q: f64 = t.b.iter().zip(&t.c).map(|(b, c)| b * c.powi(9)).sum();
        assert!((q - 0.1).abs() < 1e-14);
        assert!((t.c[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exponential_growth() {
        // y' = y · dz on 0 → 1 gives e
        let sys = LinearSystem { size: 1, forms: vec![OneForm::dz(0)], entries: vec![(0, 0, 0, C::new(1.0, 0.0))] };
        let path = PiecewisePath::line(&[C::new(0.0, 0.0)], &[C::new(1.0, 0.0)]).unwrap();
        let r = solve_linear_flow(&sys, &path, vec![vec![C::new(1.0, 0.0)]], &SolverOptions::default()).unwrap();
        assert!((r.rows[0][0] - std::f64::consts::E).norm() < 1e-12);
        // same system through the dense path
        let sys2 = LinearSystem {
            size: 2,
            forms: vec![OneForm::dz(0)],
            entries: vec![(0, 1, 0, C::new(1.0, 0.0)), (1, 0, 0, C::new(-1.0, 0.0))],
        };
        let r = solve_linear_flow(&sys2, &path, vec![vec![C::new(1.0, 0.0), C::new(0.0, 0.0)]], &SolverOptions::default()).unwrap();
        assert!((r.rows[0][0] - 1f64.cos()).norm() < 1e-12);
        assert!((r.rows[0][1] - 1f64.sin()).norm() < 1e-12);
    }
}
