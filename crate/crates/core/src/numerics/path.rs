use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::poly::{Laurent, Poly, Var, C};

/// Maximum mismatch accepted between consecutive segment endpoints.
pub const JUNCTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    /// `from + t (to − from)`.
    Line { from: Vec<C>, to: Vec<C> },
    /// Coordinate `coord` runs along `center + radius e^{iθ}`; the others stay at `base`.
    Arc { base: Vec<C>, center: C, radius: f64, angle_from: f64, angle_to: f64, coord: usize },
    /// `Σ_p coeffs[p] t^p`.
    Poly { coeffs: Vec<Vec<C>> },
}

fn binomial_shift(coeffs: &[Vec<C>], a: f64, h: f64) -> Vec<Vec<C>> {
    // substitute t = a + h s
    let n = coeffs.first().map_or(0, Vec::len);
    let mut out = vec![vec![C::new(0.0, 0.0); n]; coeffs.len()];
    for (p, c) in coeffs.iter().enumerate() {
        let mut binom = 1.0;
        for q in 0..=p {
            let w = binom * a.powi((p - q) as i32) * h.powi(q as i32);
            for k in 0..n {
                out[q][k] += c[k] * w;
            }
            binom = binom * (p - q) as f64 / (q + 1) as f64;
        }
    }
    out
}

impl Segment {
    pub fn dim(&self) -> usize {
        match self {
            Segment::Line { from, .. } => from.len(),
            Segment::Arc { base, .. } => base.len(),
            Segment::Poly { coeffs } => coeffs.first().map_or(0, Vec::len),
        }
    }

    pub fn eval(&self, t: f64) -> Vec<C> {
        match self {
            Segment::Line { from, to } => from.iter().zip(to).map(|(a, b)| a + (b - a) * t).collect(),
            Segment::Arc { base, center, radius, angle_from, angle_to, coord } => {
                let mut z = base.clone();
                let theta = angle_from + (angle_to - angle_from) * t;
                z[*coord] = center + C::from_polar(*radius, theta);
                z
            }
            Segment::Poly { coeffs } => {
                let mut z = vec![C::new(0.0, 0.0); self.dim()];
                for c in coeffs.iter().rev() {
                    for k in 0..z.len() {
                        z[k] = z[k] * t + c[k];
                    }
                }
                z
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Vec<C> {
        match self {
            Segment::Line { from, to } => from.iter().zip(to).map(|(a, b)| b - a).collect(),
            Segment::Arc { base, radius, angle_from, angle_to, coord, .. } => {
                let mut v = vec![C::new(0.0, 0.0); base.len()];
                let w = angle_to - angle_from;
                let theta = angle_from + w * t;
                v[*coord] = C::new(0.0, w) * C::from_polar(*radius, theta);
                v
            }
            Segment::Poly { coeffs } => {
                let mut v = vec![C::new(0.0, 0.0); self.dim()];
                for (p, c) in coeffs.iter().enumerate().skip(1).rev() {
                    for k in 0..v.len() {
                        v[k] = v[k] * t + c[k] * p as f64;
                    }
                }
                v
            }
        }
    }

    pub fn start(&self) -> Vec<C> {
        self.eval(0.0)
    }

    pub fn end(&self) -> Vec<C> {
        self.eval(1.0)
    }

    /// The same curve on `[a, b]`, reparametrized over `[0, 1]`.
    pub fn restrict(&self, a: f64, b: f64) -> Segment {
        match self {
            Segment::Line { .. } => Segment::Line { from: self.eval(a), to: self.eval(b) },
            Segment::Arc { base, center, radius, angle_from, angle_to, coord } => {
                let w = angle_to - angle_from;
                Segment::Arc {
                    base: base.clone(),
                    center: *center,
                    radius: *radius,
                    angle_from: angle_from + w * a,
                    angle_to: angle_from + w * b,
                    coord: *coord,
                }
            }
            Segment::Poly { coeffs } => Segment::Poly { coeffs: binomial_shift(coeffs, a, b - a) },
        }
    }

    pub fn reversed(&self) -> Segment {
        self.restrict(1.0, 0.0)
    }

    pub fn translated(&self, shift: &[C]) -> Segment {
        let add = |p: &Vec<C>| p.iter().zip(shift).map(|(a, b)| a + b).collect::<Vec<C>>();
        match self {
            Segment::Line { from, to } => Segment::Line { from: add(from), to: add(to) },
            Segment::Arc { base, center, radius, angle_from, angle_to, coord } => Segment::Arc {
                base: add(base),
                center: center + shift[*coord],
                radius: *radius,
                angle_from: *angle_from,
                angle_to: *angle_to,
                coord: *coord,
            },
            Segment::Poly { coeffs } => {
                let mut c = coeffs.clone();
                c[0] = add(&c[0]);
                Segment::Poly { coeffs: c }
            }
        }
    }

    /// Holomorphic extension of a line or polynomial segment to complex `t`.
    fn eval_complex(&self, t: C) -> Vec<C> {
        match self {
            Segment::Line { from, to } => from.iter().zip(to).map(|(a, b)| a + (b - a) * t).collect(),
            Segment::Poly { coeffs } => {
                let mut z = vec![C::new(0.0, 0.0); self.dim()];
                for c in coeffs.iter().rev() {
                    for k in 0..z.len() {
                        z[k] = z[k] * t + c[k];
                    }
                }
                z
            }
            Segment::Arc { .. } => self.eval(t.re),
        }
    }

    /// Each coordinate and its conjugate as a Laurent polynomial in the
    /// segment's natural variable (`t`, or `u = e^{iθ}` for arcs).
    fn substitution(&self, v: Var) -> Laurent {
        let conj = |c: C| if v.conj { c.conj() } else { c };
        match self {
            Segment::Line { from, to } => Laurent::linear(conj(from[v.index]), conj(to[v.index] - from[v.index])),
            Segment::Arc { base, center, radius, coord, .. } => {
                if v.index != *coord {
                    Laurent::constant(conj(base[v.index]))
                } else if v.conj {
                    Laurent::inverse_linear(center.conj(), C::new(*radius, 0.0))
                } else {
                    Laurent::linear(*center, C::new(*radius, 0.0))
                }
            }
            Segment::Poly { coeffs } => Laurent::from_coeffs(coeffs.iter().map(|c| conj(c[v.index])).collect()),
        }
    }

    /// Estimated distance from the segment to the zero set of `q`, measured
    /// through the roots of `q` restricted to the segment's complexified
    /// parameter. Roots at the start point are ignored when `skip_start`.
    pub fn distance_to_zeros(&self, q: &Poly, skip_start: bool) -> f64 {
        let composed = q.compose(&|v| self.substitution(v));
        if composed.coeffs.iter().all(|c| c.norm() == 0.0) {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        match self {
            Segment::Arc { radius, angle_from, angle_to, .. } => {
                let (lo, hi) = if angle_from <= angle_to { (*angle_from, *angle_to) } else { (*angle_to, *angle_from) };
                for u in composed.roots() {
                    if skip_start && (u - C::from_polar(1.0, *angle_from)).norm() < 1e-9 {
                        continue;
                    }
                    let mut theta = u.arg();
                    // move theta into [lo, lo + 2π)
                    theta = lo + (theta - lo).rem_euclid(std::f64::consts::TAU);
                    let mut d = f64::INFINITY;
                    for cand in [theta, lo, hi] {
                        if cand >= lo && cand <= hi {
                            d = d.min((u - C::from_polar(1.0, cand)).norm());
                        }
                    }
                    best = best.min(d * radius);
                }
            }
            _ => {
                for r in composed.roots() {
                    if skip_start && r.norm() < 1e-9 {
                        continue;
                    }
                    let tp = r.re.clamp(0.0, 1.0);
                    let near = self.eval(tp);
                    let d: f64 = self.eval_complex(r).iter().zip(&near).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                    best = best.min(d);
                }
            }
        }
        best
    }
}

/// A finite chain of analytic segments in `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    segments: Vec<Segment>,
}

fn points_close(a: &[C], b: &[C]) -> bool {
    let scale = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= JUNCTION_TOLERANCE * scale)
}

impl PiecewisePath {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Input("a path needs at least one segment".into()));
        }
        let n = segments[0].dim();
        if n == 0 {
            return Err(Error::Input("path points must have at least one coordinate".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if s.dim() != n {
                return Err(Error::Input(format!("segment {i} has dimension {} (expected {n})", s.dim())));
            }
            if let Segment::Arc { coord, radius, .. } = s {
                if *coord >= n || !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::Input(format!("segment {i}: bad arc")));
                }
            }
            if let Segment::Poly { coeffs } = s {
                if coeffs.iter().any(|c| c.len() != n) {
                    return Err(Error::Input(format!("segment {i}: ragged polynomial coefficients")));
                }
            }
            if i > 0 && !points_close(&segments[i - 1].end(), &s.start()) {
                return Err(Error::Input(format!("segment {i} does not start where segment {} ends", i - 1)));
            }
        }
        Ok(PiecewisePath { segments })
    }

    pub fn line(from: &[C], to: &[C]) -> Result<Self> {
        Self::new(vec![Segment::Line { from: from.to_vec(), to: to.to_vec() }])
    }

    /// Straight segments through the given points.
    pub fn polyline(points: &[Vec<C>]) -> Result<Self> {
        Self::new(points.windows(2).map(|w| Segment::Line { from: w[0].clone(), to: w[1].clone() }).collect())
    }

    /// Circle arc in the plane.
    pub fn arc(center: C, radius: f64, angle_from: f64, angle_to: f64) -> Result<Self> {
        Self::new(vec![Segment::Arc { base: vec![C::new(0.0, 0.0)], center, radius, angle_from, angle_to, coord: 0 }])
    }

    /// The constant path at `p`.
    pub fn constant(p: &[C]) -> Result<Self> {
        Self::new(vec![Segment::Poly { coeffs: vec![p.to_vec()] }])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dim(&self) -> usize {
        self.segments[0].dim()
    }

    pub fn start(&self) -> Vec<C> {
        self.segments[0].start()
    }

    pub fn end(&self) -> Vec<C> {
        self.segments.last().expect("nonempty").end()
    }

    /// `self` followed by `other`; endpoints must match.
    pub fn compose(&self, other: &PiecewisePath) -> Result<Self> {
        let mut s = self.segments.clone();
        s.extend(other.segments.iter().cloned());
        Self::new(s)
    }

    /// `self` followed by `other` translated to start at the end of `self`.
    /// On a torus `ℂⁿ/Λ` this is loop composition in the universal cover.
    pub fn compose_lifted(&self, other: &PiecewisePath) -> Result<Self> {
        let shift: Vec<C> = self.end().iter().zip(other.start()).map(|(a, b)| a - b).collect();
        let mut s = self.segments.clone();
        s.extend(other.segments.iter().map(|g| g.translated(&shift)));
        Self::new(s)
    }

    pub fn reversed(&self) -> Self {
        PiecewisePath { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    /// Splits every segment at parameter `tau` (reparametrization only).
    pub fn refined(&self, tau: f64) -> Self {
        let segments = self.segments.iter().flat_map(|s| [s.restrict(0.0, tau), s.restrict(tau, 1.0)]).collect();
        PiecewisePath { segments }
    }

    /// Splits the whole path at its global parameter `tau ∈ (0, len)`.
    pub fn split_at(&self, tau: f64) -> Result<(Self, Self)> {
        let len = self.segments.len() as f64;
        if !(tau > 0.0 && tau < len) {
            return Err(Error::Input(format!("split point {tau} outside (0, {len})")));
        }
        let i = (tau.floor() as usize).min(self.segments.len() - 1);
        let f = tau - i as f64;
        let mut left: Vec<Segment> = self.segments[..i].to_vec();
        let mut right: Vec<Segment> = Vec::new();
        if f > 0.0 {
            left.push(self.segments[i].restrict(0.0, f));
            right.push(self.segments[i].restrict(f, 1.0));
        } else {
            right.push(self.segments[i].clone());
        }
        right.extend(self.segments[i + 1..].iter().cloned());
        Ok((Self::new(left)?, Self::new(right)?))
    }

    /// Smallest estimated distance to a zero of any of `denominators`.
    pub fn check_singularities(&self, denominators: &[&Poly], floor: f64, allow_start_pole: bool) -> Result<()> {
        for (i, seg) in self.segments.iter().enumerate() {
            for q in denominators {
                if q.arity() > self.dim() {
                    return Err(Error::Input(format!("form uses z{} on a path in ℂ^{}", q.arity(), self.dim())));
                }
                let d = seg.distance_to_zeros(q, allow_start_pole && i == 0);
                if d < floor {
                    return Err(Error::Singularity { segment: i, distance: d, floor });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PathDocument = serde_json::from_str(text)?;
        doc.into_path()
    }

    pub fn to_document(&self) -> PathDocument {
        let flat = |p: &[C]| p.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<f64>>();
        PathDocument {
            segments: self
                .segments
                .iter()
                .map(|s| match s {
                    Segment::Line { from, to } => SegmentDocument::Line { from: flat(from), to: flat(to) },
                    Segment::Arc { base, center, radius, angle_from, angle_to, coord } => SegmentDocument::Arc {
                        center: vec![center.re, center.im],
                        radius: *radius,
                        angle_from: *angle_from,
                        angle_to: *angle_to,
                        coord: coord + 1,
                        base: Some(flat(base)),
                    },
                    Segment::Poly { coeffs } => SegmentDocument::Poly { coeffs: coeffs.iter().map(|c| flat(c)).collect() },
                })
                .collect(),
        }
    }
}

/// JSON form of a path. Points are flattened `[re, im, re, im, …]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathDocument {
    pub segments: Vec<SegmentDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SegmentDocument {
    Line {
        from: Vec<f64>,
        to: Vec<f64>,
    },
    Arc {
        center: Vec<f64>,
        radius: f64,
        angle_from: f64,
        angle_to: f64,
        #[serde(default = "first_coord")]
        coord: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Vec<f64>>,
    },
    Poly {
        coeffs: Vec<Vec<f64>>,
    },
}

fn first_coord() -> usize {
    1
}

fn unflatten(v: &[f64], what: &str) -> Result<Vec<C>> {
    if v.is_empty() || v.len() % 2 != 0 || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input(format!("{what}: expected a nonempty list of finite [re, im] pairs")));
    }
    Ok(v.chunks(2).map(|p| C::new(p[0], p[1])).collect())
}

impl PathDocument {
    pub fn into_path(self) -> Result<PiecewisePath> {
        let mut segments = Vec::new();
        for (i, s) in self.segments.into_iter().enumerate() {
            let what = format!("segment {i}");
            segments.push(match s {
                SegmentDocument::Line { from, to } => Segment::Line { from: unflatten(&from, &what)?, to: unflatten(&to, &what)? },
                SegmentDocument::Arc { center, radius, angle_from, angle_to, coord, base } => {
                    let c = unflatten(&center, &what)?;
                    if c.len() != 1 || coord == 0 {
                        return Err(Error::Input(format!("{what}: arc center is one complex number, coord counts from 1")));
                    }
                    let base = match base {
                        Some(b) => unflatten(&b, &what)?,
                        None => vec![C::new(0.0, 0.0); coord],
                    };
                    if coord > base.len() {
                        return Err(Error::Input(format!("{what}: coord {coord} exceeds dimension {}", base.len())));
                    }
                    Segment::Arc { base, center: c[0], radius, angle_from, angle_to, coord: coord - 1 }
                }
                SegmentDocument::Poly { coeffs } => {
                    if coeffs.is_empty() {
                        return Err(Error::Input(format!("{what}: empty polynomial")));
                    }
                    Segment::Poly { coeffs: coeffs.iter().map(|c| unflatten(c, &what)).collect::<Result<_>>()? }
                }
            });
        }
        PiecewisePath::new(segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::OneForm;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn restrict_and_reverse() {
        let p = Segment::Poly { coeffs: vec![vec![c(1.0, 0.0)], vec![c(0.0, 1.0)], vec![c(2.0, 0.0)]] };
        let r = p.restrict(0.25, 0.75);
        for s in [0.0, 0.3, 1.0] {
            assert!((r.eval(s)[0] - p.eval(0.25 + 0.5 * s)[0]).norm() < 1e-14);
        }
        let q = p.reversed();
        assert!((q.eval(0.2)[0] - p.eval(0.8)[0]).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"segments":[{"type":"line","from":[0.5,0],"to":[1,0]},
            {"type":"arc","center":[0,0],"radius":1,"angle_from":0,"angle_to":1.5707963267948966},
            {"type":"poly","coeffs":[[0,1],[0.5,-1]]}]}"#;
        let p = PiecewisePath::from_json(text).unwrap();
        assert_eq!(p.segments().len(), 3);
        let back = serde_json::to_string(&p.to_document()).unwrap();
        assert_eq!(PiecewisePath::from_json(&back).unwrap(), p);
        let broken = r#"{"segments":[{"type":"line","from":[0,0],"to":[1,0]},{"type":"line","from":[2,0],"to":[3,0]}]}"#;
        assert!(PiecewisePath::from_json(broken).is_err());
    }

    #[test]
    fn singularity_distances() {
        let w = OneForm::parse("rat(1,1-z1)*dz1").unwrap();
        let dens = w.denominators();
        let near = PiecewisePath::line(&[c(0.0, 0.0)], &[c(1.0 - 1e-8, 0.0)]).unwrap();
        assert!(matches!(near.check_singularities(&dens, 1e-6, false), Err(Error::Singularity { .. })));
        let far = PiecewisePath::line(&[c(0.0, 0.0)], &[c(0.5, 0.0)]).unwrap();
        assert!(far.check_singularities(&dens, 1e-6, false).is_ok());
        let d = far.segments()[0].distance_to_zeros(dens[0], false);
        assert!((d - 0.5).abs() < 1e-12);
        let around = PiecewisePath::arc(c(1.0, 0.0), 0.5, 0.0, 6.0).unwrap();
        let d = around.segments()[0].distance_to_zeros(dens[0], false);
        assert!((d - 0.5).abs() < 1e-9);
        let z = OneForm::parse("dlog(z1)").unwrap();
        assert!(far.check_singularities(&z.denominators(), 1e-6, false).is_err());
        assert!(far.check_singularities(&z.denominators(), 1e-6, true).is_ok());
    }
}
