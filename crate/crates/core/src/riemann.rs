//! Harmonic moments of an analytic curve and the exterior conformal map
//! built from the truncated free energy.
//!
//! Moments are contour integrals along `γ` with `z̄` on the curve:
//!
//! ```text
//! t_0 = (1/2πi) ∮ z̄ dz,      t_k = (1/2πik) ∮ z^{−k} z̄ dz
//! ```
//!
//! and the map `w(z) = z/r + Σ_{j≥0} p_j z^{−j}` of the exterior of `γ` onto
//! `|w| > 1` comes from
//!
//! ```text
//! log w = log z − ½ ∂_0² v − Σ_k z^{−k}/k ∂_0 ∂_k v
//! ```

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::exactring::{FormalSeries, Var};
use crate::{Error, Result};

/// Harmonic moments `t_0 > 0`, `t_k` (`k ≥ 1`) and their conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    pub t0: f64,
    pub t: Vec<Complex64>,
    pub tbar: Vec<Complex64>,
}

impl MomentVector {
    /// `t̄_k` is set to `conj(t_k)`.
    pub fn new(t0: f64, t: Vec<Complex64>) -> Result<Self> {
        if t0.is_nan() || t0 <= 0.0 {
            return Err(Error::NonPositiveT0(t0));
        }
        let tbar = t.iter().map(|z| z.conj()).collect();
        Ok(Self { t0, t, tbar })
    }

    pub fn order(&self) -> u32 {
        self.t.len() as u32
    }

    pub fn t(&self, k: u32) -> Option<Complex64> {
        self.t.get((k as usize).checked_sub(1)?).copied()
    }

    pub fn tbar(&self, k: u32) -> Option<Complex64> {
        self.tbar.get((k as usize).checked_sub(1)?).copied()
    }

    /// Copy extended with zero moments up to order `k`.
    pub fn padded(&self, k: u32) -> Self {
        let mut out = self.clone();
        let k = k as usize;
        if out.t.len() < k {
            out.t.resize(k, Complex64::new(0.0, 0.0));
            out.tbar.resize(k, Complex64::new(0.0, 0.0));
        }
        out
    }

    /// `Σ_k |t_k| t_0^{(k−2)/2}`: scale-free size of the deformation away
    /// from a disk. The truncated series is only useful when this is small.
    pub fn smallness(&self) -> f64 {
        self.t
            .iter()
            .enumerate()
            .map(|(i, tk)| tk.norm() * Float::powf(self.t0, (i as f64 - 1.0) / 2.0))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

/// `z(θ) = Σ c_m e^{imθ}`. A clockwise parameterization is traversed in
/// reverse so that every computation sees a positively oriented curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    fourier: Vec<(i32, Complex64)>,
    orientation: Orientation,
}

impl CurveSpec {
    pub fn new(fourier: Vec<(i32, Complex64)>, orientation: Orientation) -> Result<Self> {
        if fourier.is_empty() {
            return Err(Error::InvalidCurve("no Fourier coefficients".into()));
        }
        if fourier.iter().any(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidCurve("non-finite Fourier coefficient".into()));
        }
        Ok(Self { fourier, orientation })
    }

    pub fn circle(radius: f64) -> Self {
        Self::shifted_disk(Complex64::new(0.0, 0.0), radius)
    }

    pub fn shifted_disk(center: Complex64, radius: f64) -> Self {
        Self {
            fourier: vec![(0, center), (1, Complex64::new(radius, 0.0))],
            orientation: Orientation::CounterClockwise,
        }
    }

    /// `a cos θ + i b sin θ`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        Self {
            fourier: vec![
                (1, Complex64::new((a + b) / 2.0, 0.0)),
                (-1, Complex64::new((a - b) / 2.0, 0.0)),
            ],
            orientation: Orientation::CounterClockwise,
        }
    }

    pub fn fourier(&self) -> &[(i32, Complex64)] {
        &self.fourier
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Largest `|m|` present.
    pub fn bandwidth(&self) -> u32 {
        self.fourier.iter().map(|(m, _)| m.unsigned_abs()).max().unwrap_or(0)
    }

    fn angle(&self, theta: f64) -> f64 {
        match self.orientation {
            Orientation::CounterClockwise => theta,
            Orientation::Clockwise => -theta,
        }
    }

    /// Point on the positively oriented curve.
    pub fn point(&self, theta: f64) -> Complex64 {
        let th = self.angle(theta);
        self.fourier
            .iter()
            .map(|&(m, c)| c * Complex64::from_polar(1.0, m as f64 * th))
            .sum()
    }

    /// `dz/dθ` along the positively oriented curve.
    pub fn derivative(&self, theta: f64) -> Complex64 {
        let th = self.angle(theta);
        let sign = match self.orientation {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        };
        self.fourier
            .iter()
            .map(|&(m, c)| c * Complex64::new(0.0, sign * m as f64) * Complex64::from_polar(1.0, m as f64 * th))
            .sum()
    }

    pub fn samples(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|i| self.point(2.0 * PI * i as f64 / n as f64)).collect()
    }

    /// `z → e^{iα} z`.
    pub fn rotated(&self, alpha: f64) -> Self {
        let e = Complex64::from_polar(1.0, alpha);
        Self {
            fourier: self.fourier.iter().map(|&(m, c)| (m, c * e)).collect(),
            orientation: self.orientation,
        }
    }

    /// `z → λ z`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            fourier: self.fourier.iter().map(|&(m, c)| (m, c * lambda)).collect(),
            orientation: self.orientation,
        }
    }

    /// Checks on an `n`-point grid that the curve winds once around 0 and
    /// that the polygon through the samples does not cross itself.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 8 {
            return Err(Error::InvalidParameter(
                "validation grid needs at least 8 points".into(),
            ));
        }
        let pts = self.samples(n);
        if pts.iter().any(|z| z.norm() == 0.0) {
            return Err(Error::InvalidCurve("curve passes through 0".into()));
        }
        let mut turn = 0.0;
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            turn += (b / a).arg();
        }
        let winding = Float::round(turn / (2.0 * PI)) as i64;
        if winding != 1 {
            return Err(Error::InvalidCurve(alloc::format!(
                "winding number around 0 is {winding}, expected 1"
            )));
        }
        for i in 0..n {
            let (p1, p2) = (pts[i], pts[(i + 1) % n]);
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (q1, q2) = (pts[j], pts[(j + 1) % n]);
                if segments_cross(p1, p2, q1, q2) {
                    return Err(Error::InvalidCurve(alloc::format!(
                        "self-intersection between samples {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

pub const DEFAULT_NQUAD: usize = 512;

/// Moments `t_0, t_1, …, t_K` by the trapezoidal rule on `n_quad` points.
pub fn moments_from_curve(curve: &CurveSpec, k: u32, n_quad: usize) -> Result<MomentVector> {
    let min = 4 * curve.bandwidth() as usize + 4;
    if n_quad < min {
        return Err(Error::InvalidParameter(alloc::format!(
            "n_quad = {n_quad} is below 4M+4 = {min}"
        )));
    }
    curve.validate(n_quad)?;
    let mut t0 = Complex64::new(0.0, 0.0);
    let mut t = vec![Complex64::new(0.0, 0.0); k as usize];
    for i in 0..n_quad {
        let theta = 2.0 * PI * i as f64 / n_quad as f64;
        let z = curve.point(theta);
        let w = z.conj() * curve.derivative(theta);
        t0 += w;
        let zinv = z.inv();
        let mut pow = Complex64::new(1.0, 0.0);
        for tk in t.iter_mut() {
            pow *= zinv;
            *tk += pow * w;
        }
    }
    // (1/2πi) Σ f(θ_n) (2π/N) = Σ f / (iN)
    let scale = Complex64::new(0.0, n_quad as f64).inv();
    let t0 = (t0 * scale).re;
    for (i, tk) in t.iter_mut().enumerate() {
        *tk *= scale / (i as f64 + 1.0);
    }
    MomentVector::new(t0, t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapDiagnostics {
    /// [`MomentVector::smallness`] of the input moments.
    pub smallness: f64,
    pub smallness_threshold: f64,
    /// `|Im ½ ∂_0² v|`, zero for exact conjugate-symmetric moments.
    pub radius_phase: f64,
    /// `|p_J|`, a rough size of the omitted tail.
    pub tail_estimate: f64,
}

impl MapDiagnostics {
    pub fn outside_regime(&self) -> bool {
        self.smallness > self.smallness_threshold
    }
}

pub const DEFAULT_SMALLNESS_THRESHOLD: f64 = 0.25;

/// `w(z) = z/r + Σ_{j=0}^{J} p_j z^{−j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSeries {
    pub r: f64,
    pub p: Vec<Complex64>,
    pub diagnostics: MapDiagnostics,
}

impl MapSeries {
    pub fn order(&self) -> u32 {
        self.p.len().saturating_sub(1) as u32
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zinv = z.inv();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in self.p.iter().rev() {
            acc = acc * zinv + p;
        }
        z / self.r + acc
    }
}

/// Builds the map from `v` evaluated at `m`, keeping `p_0 … p_J`.
///
/// Moments above `m.order()` are taken to be zero. The coefficients
/// `a_k = −∂_0 ∂_k v / k` are used for `k ≤ min(J + 1, W)`.
pub fn map_series(v: &FormalSeries, m: &MomentVector, j: u32) -> Result<MapSeries> {
    map_series_with_threshold(v, m, j, DEFAULT_SMALLNESS_THRESHOLD)
}

pub fn map_series_with_threshold(v: &FormalSeries, m: &MomentVector, j: u32, threshold: f64) -> Result<MapSeries> {
    if m.t0.is_nan() || m.t0 <= 0.0 {
        return Err(Error::NonPositiveT0(m.t0));
    }
    let w = v.cutoff();
    let point = m.padded(w);
    let d0 = v.diff(Var::T0);
    let half_log_r = d0.diff(Var::T0).eval(&point)? * 0.5;
    let r = Float::exp(half_log_r.re);
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Overflow("conformal radius"));
    }
    let kmax = (j + 1).min(w) as usize;
    let mut a = vec![Complex64::new(0.0, 0.0); j as usize + 2];
    for (k, ak) in a.iter_mut().enumerate().take(kmax + 1).skip(1) {
        *ak = -d0.diff(Var::T(k as u32)).eval(&point)? / k as f64;
    }
    // exp(Σ a_k x^k) = Σ b_n x^n with n b_n = Σ_k k a_k b_{n−k}
    let mut b = vec![Complex64::new(0.0, 0.0); j as usize + 2];
    b[0] = Complex64::new(1.0, 0.0);
    for n in 1..b.len() {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            s += a[k] * b[n - k] * k as f64;
        }
        b[n] = s / n as f64;
    }
    let p: Vec<Complex64> = b[1..].iter().map(|bn| bn / r).collect();
    if p.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::Overflow("map coefficients"));
    }
    let diagnostics = MapDiagnostics {
        smallness: m.smallness(),
        smallness_threshold: threshold,
        radius_phase: Float::abs(half_log_r.im),
        tail_estimate: p.last().map(|c| c.norm()).unwrap_or(0.0),
    };
    Ok(MapSeries { r, p, diagnostics })
}

/// `max_θ | |w(z(θ))| − 1 |` over `n_samples` points of the curve.
pub fn boundary_unimodularity(curve: &CurveSpec, map: &MapSeries, n_samples: usize) -> f64 {
    curve
        .samples(n_samples)
        .into_iter()
        .map(|z| Float::abs(map.eval(z).norm() - 1.0))
        .fold(0.0, Float::max)
}

/// Domains with closed-form exterior maps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleShape {
    Circle {
        radius: f64,
    },
    ShiftedDisk {
        center: Complex64,
        radius: f64,
    },
    /// Semi-axes `a ≥ b` along the real and imaginary axes.
    Ellipse {
        a: f64,
        b: f64,
    },
}

impl OracleShape {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            OracleShape::Circle { radius } => radius > 0.0,
            OracleShape::ShiftedDisk { center, radius } => radius > 0.0 && center.norm() < radius,
            OracleShape::Ellipse { a, b } => {
                if a < b {
                    return Err(Error::InvalidParameter("ellipse needs a >= b".into()));
                }
                b > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(alloc::format!("degenerate shape {self:?}")))
        }
    }

    pub fn curve(&self) -> CurveSpec {
        match *self {
            OracleShape::Circle { radius } => CurveSpec::circle(radius),
            OracleShape::ShiftedDisk { center, radius } => CurveSpec::shifted_disk(center, radius),
            OracleShape::Ellipse { a, b } => CurveSpec::ellipse(a, b),
        }
    }

    /// Exact exterior map with `w(∞) = ∞`, `w'(∞) > 0`.
    pub fn map(&self, z: Complex64) -> Result<Complex64> {
        self.validate()?;
        Ok(match *self {
            OracleShape::Circle { radius } => z / radius,
            OracleShape::ShiftedDisk { center, radius } => (z - center) / radius,
            OracleShape::Ellipse { a, b } => {
                if a == b {
                    return Ok(z / a);
                }
                // z = A w + B/w
                let (ca, cb) = ((a + b) / 2.0, (a - b) / 2.0);
                let root = (z * z - 4.0 * ca * cb).sqrt();
                let w1 = (z + root) / (2.0 * ca);
                let w2 = (z - root) / (2.0 * ca);
                if w1.norm() >= w2.norm() {
                    w1
                } else {
                    w2
                }
            }
        })
    }

    /// `(θ, w(z(θ)))` on the boundary.
    pub fn samples(&self, n: usize) -> Result<Vec<(f64, Complex64)>> {
        let curve = self.curve();
        (0..n)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / n as f64;
                Ok((theta, self.map(curve.point(theta))?))
            })
            .collect()
    }

    /// Exact moments `t_0` and `t_1 … t_K`.
    pub fn moments(&self, k: u32) -> Result<MomentVector> {
        self.validate()?;
        let mut t = vec![Complex64::new(0.0, 0.0); k as usize];
        let t0 = match *self {
            OracleShape::Circle { radius } => radius * radius,
            OracleShape::ShiftedDisk { center, radius } => {
                if let Some(t1) = t.first_mut() {
                    *t1 = center.conj();
                }
                radius * radius
            }
            OracleShape::Ellipse { a, b } => {
                if let Some(t2) = t.get_mut(1) {
                    *t2 = Complex64::new((a - b) / (2.0 * (a + b)), 0.0);
                }
                a * b
            }
        };
        MomentVector::new(t0, t)
    }
}

/// `max | w(z) − w_exact(z) |` over `n_samples` boundary points of `shape`.
pub fn map_error_against(shape: &OracleShape, map: &MapSeries, n_samples: usize) -> Result<f64> {
    let curve = shape.curve();
    let mut worst: f64 = 0.0;
    for (theta, exact) in shape.samples(n_samples)? {
        worst = Float::max(worst, (map.eval(curve.point(theta)) - exact).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taucoeffs::CoeffEngine;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_moments() {
        let m = moments_from_curve(&CurveSpec::circle(1.7), 4, 64).unwrap();
        assert!((m.t0 - 1.7 * 1.7).abs() < 1e-13);
        assert!(m.t.iter().all(|t| t.norm() < 1e-14));
    }

    #[test]
    fn shifted_disk_moments() {
        let center = c(0.1, -0.05);
        let m = moments_from_curve(&CurveSpec::shifted_disk(center, 1.0), 5, 256).unwrap();
        assert!((m.t0 - 1.0).abs() < 1e-13);
        assert!((m.t[0] - center.conj()).norm() < 1e-13);
        assert!(m.t[1..].iter().all(|t| t.norm() < 1e-13));
    }

    #[test]
    fn ellipse_moments() {
        let (a, b) = (1.0, 0.8);
        let m = moments_from_curve(&CurveSpec::ellipse(a, b), 6, 256).unwrap();
        assert!((m.t0 - a * b).abs() < 1e-13);
        assert!((m.t[1] - c((a - b) / (2.0 * (a + b)), 0.0)).norm() < 1e-13);
        for k in [0, 2, 3, 4, 5] {
            assert!(m.t[k].norm() < 1e-13, "t{} = {}", k + 1, m.t[k]);
        }
    }

    #[test]
    fn clockwise_flag_reverses() {
        let mut f = CurveSpec::ellipse(1.0, 0.9).fourier().to_vec();
        for e in f.iter_mut() {
            e.0 = -e.0;
        }
        let cw = CurveSpec::new(f.clone(), Orientation::Clockwise).unwrap();
        let ccw = moments_from_curve(&CurveSpec::ellipse(1.0, 0.9), 3, 64).unwrap();
        let m = moments_from_curve(&cw, 3, 64).unwrap();
        assert!((m.t0 - ccw.t0).abs() < 1e-14);
        let wrong = CurveSpec::new(f, Orientation::CounterClockwise).unwrap();
        assert!(matches!(moments_from_curve(&wrong, 3, 64), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn rejects_bad_curves() {
        // 0 outside
        let off = CurveSpec::shifted_disk(c(2.0, 0.0), 1.0);
        assert!(moments_from_curve(&off, 2, 64).is_err());
        // figure eight style loop: z = e^{iθ} + 1.5 e^{2iθ}
        let eight = CurveSpec::new(vec![(1, c(1.0, 0.0)), (2, c(1.5, 0.0))], Orientation::CounterClockwise).unwrap();
        assert!(moments_from_curve(&eight, 2, 64).is_err());
        // limaçon with an inner loop around 0 winding once
        let lima = CurveSpec::new(vec![(1, c(1.0, 0.0)), (2, c(0.7, 0.0))], Orientation::CounterClockwise).unwrap();
        assert!(matches!(moments_from_curve(&lima, 2, 64), Err(Error::InvalidCurve(_))));
        assert!(moments_from_curve(&CurveSpec::circle(1.0), 2, 7).is_err());
    }

    #[test]
    fn circle_map_is_exact() {
        let v = CoeffEngine::new().tau_series(4).unwrap();
        let m = OracleShape::Circle { radius: 2.0 }.moments(4).unwrap();
        let map = map_series(&v, &m, 4).unwrap();
        assert!((map.r - 2.0).abs() < 1e-14);
        assert!(map.p.iter().all(|p| p.norm() < 1e-14));
        assert!(boundary_unimodularity(&CurveSpec::circle(2.0), &map, 64) < 1e-14);
    }

    #[test]
    fn shifted_disk_leading_coefficients() {
        let v = CoeffEngine::new().tau_series(6).unwrap();
        let shape = OracleShape::ShiftedDisk {
            center: c(0.05, 0.02),
            radius: 1.0,
        };
        let map = map_series(&v, &shape.moments(6).unwrap(), 6).unwrap();
        assert!((map.r - 1.0).abs() < 1e-8);
        assert!((map.p[0] + c(0.05, 0.02)).norm() < 1e-8);
        assert!(map_error_against(&shape, &map, 128).unwrap() < 1e-6);
    }

    #[test]
    fn wrong_radius_shows_in_unimodularity() {
        let v = CoeffEngine::new().tau_series(3).unwrap();
        let m = OracleShape::Circle { radius: 1.0 }.moments(3).unwrap();
        let mut map = map_series(&v, &m, 3).unwrap();
        map.r = 1.1;
        let err = boundary_unimodularity(&CurveSpec::circle(1.0), &map, 64);
        assert!((err - (1.0 / 1.1 - 1.0f64).abs()).abs() < 1e-12);
    }

    #[test]
    fn oracle_maps() {
        let circle = OracleShape::Circle { radius: 2.0 };
        assert!((circle.map(c(2.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let disk = OracleShape::ShiftedDisk {
            center: c(0.1, 0.0),
            radius: 1.0,
        };
        assert!((disk.map(c(1.1, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let round = OracleShape::Ellipse { a: 1.0, b: 1.0 };
        let z = c(0.3, 1.2);
        assert_eq!(
            round.map(z).unwrap(),
            OracleShape::Circle { radius: 1.0 }.map(z).unwrap()
        );
        assert!(OracleShape::Ellipse { a: 0.5, b: 1.0 }.validate().is_err());
        let e = OracleShape::Ellipse { a: 1.0, b: 0.6 };
        for (_, w) in e.samples(32).unwrap() {
            assert!((w.norm() - 1.0).abs() < 1e-13);
        }
        // w'(∞) = 1/A > 0
        let far = e.map(c(1e6, 0.0)).unwrap();
        assert!((far.re - 1e6 / 0.8).abs() / 1e6 < 1e-9);
    }
}
