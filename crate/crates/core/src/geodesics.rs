//! Connection, geodesic equations and a fixed-step RK4 integrator.
//!
//! With `lambda = mu / (2k)`, `G1 = zdot + conj(eta) wdot`:
//!
//! ```text
//! zddot = -2 (conj w / P) zdot wdot + lambda conj(eta) G1^2
//! wddot = -2 (conj w / P) wdot^2    - lambda G1^2
//! ```
//!
//! No adaptive step control: solutions are smooth away from the boundary and
//! a fixed step keeps the output deterministic. Integration stops with
//! [`Error::BoundaryEscape`] rather than clamping.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{c, eta_raw, finite, JacobiPoint, ModelParams, TangentVector, DEFAULT_BOUNDARY_EPS};
use crate::error::{Error, Result};
use crate::geometry::{metric_derivative_fd, metric_raw, tangent_norm};
use crate::group::disk_geodesic_raw;
use crate::stencil::WirtingerStencil;

/// The six independent symbols; the remaining ones follow from symmetry in the
/// lower indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChristoffelSet {
    /// `Gamma^z_zz`
    pub g_zzz: Complex64,
    /// `Gamma^w_zz`
    pub g_wzz: Complex64,
    /// `Gamma^z_zw`
    pub g_zzw: Complex64,
    /// `Gamma^w_wz`
    pub g_wwz: Complex64,
    /// `Gamma^z_ww`
    pub g_zww: Complex64,
    /// `Gamma^w_ww`
    pub g_www: Complex64,
}

impl ChristoffelSet {
    /// `Gamma^upper_{b g}` with 0 = z, 1 = w.
    pub fn get(&self, upper: usize, b: usize, g: usize) -> Complex64 {
        match (upper, b + g) {
            (0, 0) => self.g_zzz,
            (0, 1) => self.g_zzw,
            (0, _) => self.g_zww,
            (_, 0) => self.g_wzz,
            (_, 1) => self.g_wwz,
            _ => self.g_www,
        }
    }

    pub fn as_array(&self) -> [Complex64; 6] {
        [self.g_zzz, self.g_wzz, self.g_zzw, self.g_wwz, self.g_zww, self.g_www]
    }

    /// `-Gamma^a_{bg} v^b v^g`.
    pub fn contract(&self, v: &TangentVector) -> TangentVector {
        let vv = [v.dz, v.dw];
        let mut out = [c(0.0, 0.0); 2];
        for (a, o) in out.iter_mut().enumerate() {
            for b in 0..2 {
                for g in 0..2 {
                    *o -= self.get(a, b, g) * vv[b] * vv[g];
                }
            }
        }
        TangentVector { dz: out[0], dw: out[1] }
    }
}

#[inline]
fn ratio(params: ModelParams) -> f64 {
    params.mu() / (2.0 * params.k())
}

pub(crate) fn christoffel_raw(z: Complex64, w: Complex64, lam: f64) -> ChristoffelSet {
    let p = 1.0 - w.norm_sqr();
    let eb = eta_raw(z, w).conj();
    let wp = w.conj() / p;
    ChristoffelSet {
        g_zzz: -lam * eb,
        g_wzz: c(lam, 0.0),
        g_zzw: -lam * eb * eb + wp,
        g_wwz: lam * eb,
        g_zww: -lam * eb * eb * eb,
        g_www: lam * eb * eb + 2.0 * wp,
    }
}

pub fn christoffel(pt: &JacobiPoint, params: ModelParams) -> ChristoffelSet {
    christoffel_raw(pt.z(), pt.w(), ratio(params))
}

/// Largest violation of `sum_a h_{a ebar} Gamma^a_{bg} = d h_{b ebar} / d z_g`,
/// relative to `max(1, |rhs|)`, with the right side by finite differences.
pub fn christoffel_relation_deviation(pt: &JacobiPoint, params: ModelParams, stencil: WirtingerStencil) -> Result<f64> {
    let gam = christoffel(pt, params);
    let h = metric_raw(pt.z(), pt.w(), params.k(), params.mu());
    let mut worst = 0.0f64;
    for b in 0..2 {
        for g in 0..2 {
            for e in 0..2 {
                let lhs: Complex64 = (0..2).map(|a| h.entry(a, e) * gam.get(a, b, g)).sum();
                let rhs = metric_derivative_fd(pt, params, stencil, b, e, g)?;
                worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub pos: JacobiPoint,
    pub vel: TangentVector,
}

impl GeodesicState {
    pub fn new(pos: JacobiPoint, vel: TangentVector) -> Self {
        Self { pos, vel }
    }

    /// `h(v, v)`.
    pub fn energy(&self, params: ModelParams) -> f64 {
        metric_raw(self.pos.z(), self.pos.w(), params.k(), params.mu()).form(&self.vel, &self.vel).re
    }
}

#[inline]
fn rhs_raw(z: Complex64, w: Complex64, dz: Complex64, dw: Complex64, lam: f64) -> (Complex64, Complex64) {
    let p = 1.0 - w.norm_sqr();
    let eb = eta_raw(z, w).conj();
    let wp = w.conj() / p;
    let g1 = dz + eb * dw;
    let g1s = g1 * g1;
    (-2.0 * wp * dz * dw + lam * eb * g1s, -2.0 * wp * dw * dw - lam * g1s)
}

/// Acceleration `(zddot, wddot)` from the reduced form of the geodesic equations.
pub fn geodesic_rhs(s: &GeodesicState, params: ModelParams) -> TangentVector {
    let (az, aw) = rhs_raw(s.pos.z(), s.pos.w(), s.vel.dz, s.vel.dw, ratio(params));
    TangentVector { dz: az, dw: aw }
}

/// Acceleration by contracting the Christoffel symbols.
pub fn geodesic_rhs_christoffel(s: &GeodesicState, params: ModelParams) -> TangentVector {
    christoffel(&s.pos, params).contract(&s.vel)
}

/// `|a - rhs(s)|`, max over the two components.
pub fn geodesic_residual(s: &GeodesicState, accel: &TangentVector, params: ModelParams) -> f64 {
    let r = geodesic_rhs(s, params);
    (accel.dz - r.dz).norm().max((accel.dw - r.dw).norm())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    samples: Vec<(f64, GeodesicState)>,
}

pub const CSV_HEADER: &str = "t,re_z,im_z,re_w,im_w,re_dz,im_dz,re_dw,im_dw,speed";

impl GeodesicPath {
    /// Validates strictly increasing times.
    pub fn new(samples: Vec<(f64, GeodesicState)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("empty path".into()));
        }
        if samples.windows(2).any(|p| !(p[1].0 > p[0].0)) {
            return Err(Error::InvalidArgument("path times must be strictly increasing".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, GeodesicState)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &GeodesicState {
        &self.samples[0].1
    }

    pub fn last(&self) -> &GeodesicState {
        &self.samples[self.samples.len() - 1].1
    }

    pub fn t_end(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    /// Joins `other` onto the end of `self`; `other` must start where `self` ends.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let (t0, s0) = other.samples[0];
        let dev = (s0.pos.z() - self.last().pos.z()).norm().max((s0.pos.w() - self.last().pos.w()).norm());
        if (t0 - self.t_end()).abs() > 1e-12 || dev > 1e-12 {
            return Err(Error::EndpointMismatch { deviation: dev.max((t0 - self.t_end()).abs()) });
        }
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples[1..]);
        Self::new(samples)
    }

    /// Largest relative change of `h(v, v)` from its initial value.
    pub fn energy_drift(&self, params: ModelParams) -> f64 {
        let e0 = self.first().energy(params);
        let scale = e0.abs().max(f64::MIN_POSITIVE);
        if e0 == 0.0 {
            return self.samples.iter().map(|(_, s)| s.energy(params).abs()).fold(0.0, f64::max);
        }
        self.samples.iter().map(|(_, s)| (s.energy(params) - e0).abs() / scale).fold(0.0, f64::max)
    }

    pub fn to_csv(&self, params: ModelParams) -> String {
        let mut out = String::with_capacity(self.samples.len() * 160);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (t, s) in &self.samples {
            let (z, w, dz, dw) = (s.pos.z(), s.pos.w(), s.vel.dz, s.vel.dw);
            let speed = tangent_norm(&s.pos, &s.vel, params);
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{},{},{},{},{speed}",
                z.re, z.im, w.re, w.im, dz.re, dz.im, dw.re, dw.im
            );
        }
        out
    }
}

type Phase = [Complex64; 4];

#[inline]
fn deriv(y: &Phase, lam: f64) -> Phase {
    let (az, aw) = rhs_raw(y[0], y[1], y[2], y[3], lam);
    [y[2], y[3], az, aw]
}

#[inline]
fn axpy(y: &Phase, k: &Phase, h: f64) -> Phase {
    [y[0] + k[0] * h, y[1] + k[1] * h, y[2] + k[2] * h, y[3] + k[3] * h]
}

#[inline]
fn inside(y: &Phase) -> bool {
    y.iter().all(|v| finite(*v)) && y[1].norm() < 1.0 - DEFAULT_BOUNDARY_EPS
}

/// Classical RK4 with `n_steps` equal steps on `[0, t_end]`; every step is sampled.
pub fn integrate(s0: &GeodesicState, t_end: f64, n_steps: usize, params: ModelParams) -> Result<GeodesicPath> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::InvalidArgument(format!("t_end = {t_end} must be positive")));
    }
    let lam = ratio(params);
    let h = t_end / n_steps as f64;
    let mut y: Phase = [s0.pos.z(), s0.pos.w(), s0.vel.dz, s0.vel.dw];
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push((0.0, *s0));
    for i in 0..n_steps {
        let t = i as f64 * h;
        let k1 = deriv(&y, lam);
        let y2 = axpy(&y, &k1, 0.5 * h);
        if !inside(&y2) {
            return Err(Error::BoundaryEscape { t });
        }
        let k2 = deriv(&y2, lam);
        let y3 = axpy(&y, &k2, 0.5 * h);
        if !inside(&y3) {
            return Err(Error::BoundaryEscape { t });
        }
        let k3 = deriv(&y3, lam);
        let y4 = axpy(&y, &k3, h);
        if !inside(&y4) {
            return Err(Error::BoundaryEscape { t });
        }
        let k4 = deriv(&y4, lam);
        for j in 0..4 {
            y[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
        if !inside(&y) {
            return Err(Error::BoundaryEscape { t });
        }
        let t_next = if i + 1 == n_steps { t_end } else { (i + 1) as f64 * h };
        let state = GeodesicState {
            pos: JacobiPoint::new(y[0], y[1])?,
            vel: TangentVector { dz: y[2], dw: y[3] },
        };
        samples.push((t_next, state));
    }
    GeodesicPath::new(samples)
}

/// Integrates several initial conditions in parallel; order is preserved.
pub fn integrate_batch(
    starts: &[GeodesicState],
    t_end: f64,
    n_steps: usize,
    params: ModelParams,
) -> Vec<Result<GeodesicPath>> {
    starts.par_iter().map(|s| integrate(s, t_end, n_steps, params)).collect()
}

/// Geodesics known in closed form, with their exact accelerations.
pub trait ClosedFormGeodesic {
    fn state(&self, t: f64) -> Result<GeodesicState>;
    fn acceleration(&self, t: f64) -> TangentVector;

    /// `|closed-form acceleration - geodesic_rhs|` at time `t`.
    fn residual(&self, t: f64, params: ModelParams) -> Result<f64> {
        Ok(geodesic_residual(&self.state(t)?, &self.acceleration(t), params))
    }
}

/// `(w, wdot, wddot)` of the disk geodesic `w(t) = (B/|B|) tanh(t|B|)`.
fn disk_jet(b: Complex64, t: f64) -> (Complex64, Complex64, Complex64) {
    let r = b.norm();
    let w = disk_geodesic_raw(b, t);
    let th = (t * r).tanh();
    let sech2 = 1.0 - th * th;
    (w, b * sech2, -2.0 * b * r * sech2 * th)
}

/// `w(t) = (B/|B|) tanh(t|B|)`, `z(t) = eta0 - conj(eta0) w(t)`: constant `eta`,
/// so the curve solves the full system for every `k`, `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcParticular {
    pub eta0: Complex64,
    pub b: Complex64,
}

impl ClosedFormGeodesic for FcParticular {
    fn state(&self, t: f64) -> Result<GeodesicState> {
        let (w, dw, _) = disk_jet(self.b, t);
        let e = self.eta0.conj();
        Ok(GeodesicState {
            pos: JacobiPoint::new(self.eta0 - e * w, w)?,
            vel: TangentVector::new(-e * dw, dw)?,
        })
    }

    fn acceleration(&self, t: f64) -> TangentVector {
        let (_, _, aw) = disk_jet(self.b, t);
        TangentVector { dz: -self.eta0.conj() * aw, dw: aw }
    }
}

pub fn fc_particular_solution(eta0: Complex64, b: Complex64, t: f64) -> Result<GeodesicState> {
    FcParticular { eta0, b }.state(t)
}

/// `mu = 0`: `z(t) = (zdot0 / B) w(t) + z1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuZero {
    pub z0dot: Complex64,
    pub z1: Complex64,
    pub b: Complex64,
}

impl MuZero {
    pub fn new(z0dot: Complex64, z1: Complex64, b: Complex64) -> Result<Self> {
        if !finite(z0dot) || !finite(z1) || !finite(b) {
            return Err(Error::NonFinite);
        }
        if b == c(0.0, 0.0) && z0dot != c(0.0, 0.0) {
            return Err(Error::ZeroDirection);
        }
        Ok(Self { z0dot, z1, b })
    }

    fn slope(&self) -> Complex64 {
        if self.b == c(0.0, 0.0) {
            c(0.0, 0.0)
        } else {
            self.z0dot / self.b
        }
    }
}

impl ClosedFormGeodesic for MuZero {
    fn state(&self, t: f64) -> Result<GeodesicState> {
        let (w, dw, _) = disk_jet(self.b, t);
        let s = self.slope();
        Ok(GeodesicState { pos: JacobiPoint::new(s * w + self.z1, w)?, vel: TangentVector::new(s * dw, dw)? })
    }

    fn acceleration(&self, t: f64) -> TangentVector {
        let (_, _, aw) = disk_jet(self.b, t);
        TangentVector { dz: self.slope() * aw, dw: aw }
    }
}

pub fn mu_zero_solution(z0dot: Complex64, z1: Complex64, b: Complex64, t: f64) -> Result<GeodesicState> {
    MuZero::new(z0dot, z1, b)?.state(t)
}

/// Trapezoidal `int |gamma'|_h dt`.
pub fn curve_length(path: &GeodesicPath, params: ModelParams) -> Result<f64> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument("curve length needs at least two samples".into()));
    }
    let speeds: Vec<(f64, f64)> =
        path.samples().iter().map(|(t, s)| (*t, tangent_norm(&s.pos, &s.vel, params))).collect();
    Ok(speeds.windows(2).map(|p| 0.5 * (p[1].0 - p[0].0) * (p[0].1 + p[1].1)).sum())
}

/// Straight segment `zeta1 + s (zeta2 - zeta1)`, `s in [0, 1]`, sampled at `n + 1`
/// points. Stays inside the domain by convexity of the disk.
pub fn straight_path(p1: &JacobiPoint, p2: &JacobiPoint, n: usize) -> Result<GeodesicPath> {
    let n = n.max(1);
    let v = TangentVector::new(p2.z() - p1.z(), p2.w() - p1.w())?;
    let samples = (0..=n)
        .map(|i| {
            let s = i as f64 / n as f64;
            let pos = JacobiPoint::new(p1.z() + v.dz * s, p1.w() + v.dw * s)?;
            Ok((s, GeodesicState { pos, vel: v }))
        })
        .collect::<Result<Vec<_>>>()?;
    GeodesicPath::new(samples)
}

/// Experimental shooting: Newton iteration on the initial velocity so that the
/// RK4 geodesic on `[0, 1]` ends at `target`. May fail to converge for distant
/// points; no global convergence guarantee.
pub fn shoot(
    from: &JacobiPoint,
    target: &JacobiPoint,
    n_steps: usize,
    params: ModelParams,
    max_iter: usize,
) -> Result<GeodesicPath> {
    let end = |v: &[f64; 4]| -> Result<[f64; 4]> {
        let s0 = GeodesicState::new(*from, TangentVector::new(c(v[0], v[1]), c(v[2], v[3]))?);
        let p = integrate(&s0, 1.0, n_steps, params)?;
        let q = p.last().pos;
        let d = [q.z() - target.z(), q.w() - target.w()];
        Ok([d[0].re, d[0].im, d[1].re, d[1].im])
    };
    let dz = target.z() - from.z();
    let dw = target.w() - from.w();
    let mut v = [dz.re, dz.im, dw.re, dw.im];
    for _ in 0..max_iter {
        let f = end(&v)?;
        let err = f.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if err < 1e-10 {
            let s0 = GeodesicState::new(*from, TangentVector::new(c(v[0], v[1]), c(v[2], v[3]))?);
            return integrate(&s0, 1.0, n_steps, params);
        }
        let h = 1e-6;
        let mut jac = [[0.0; 4]; 4];
        for j in 0..4 {
            let mut vp = v;
            vp[j] += h;
            let mut vm = v;
            vm[j] -= h;
            let (fp, fm) = (end(&vp)?, end(&vm)?);
            for i in 0..4 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let step = solve4(jac, f).ok_or_else(|| Error::InvalidArgument("singular shooting Jacobian".into()))?;
        for j in 0..4 {
            v[j] -= step[j];
        }
    }
    Err(Error::InvalidArgument("shooting did not converge".into()))
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(piv, col);
        b.swap(piv, col);
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for cc in col..4 {
                a[r][cc] -= f * a[col][cc];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|cc| a[r][cc] * x[cc]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(k: f64, mu: f64) -> ModelParams {
        ModelParams::new(k, mu).unwrap()
    }

    fn tv(a: f64, b: f64, x: f64, y: f64) -> TangentVector {
        TangentVector::new(c(a, b), c(x, y)).unwrap()
    }

    #[test]
    fn christoffel_examples() {
        let g = christoffel(&JacobiPoint::origin(), params(1.0, 1.0));
        let arr = g.as_array();
        assert_eq!(arr[1], c(0.5, 0.0));
        assert!(arr.iter().enumerate().all(|(i, v)| i == 1 || v.norm() == 0.0));

        let g = christoffel(&JacobiPoint::new(c(1.0, 0.0), c(0.5, 0.0)).unwrap(), params(1.0, 1.0));
        let want = [-1.0, 0.5, -4.0 / 3.0, 1.0, -4.0, 10.0 / 3.0];
        for (v, w) in g.as_array().iter().zip(want) {
            assert!((v - c(w, 0.0)).norm() < 1e-13, "{v} vs {w}");
        }
    }

    #[test]
    fn christoffel_relation() {
        let s = WirtingerStencil::default();
        for (z, w) in [(c(0.0, 0.0), c(0.0, 0.0)), (c(1.0, 0.5), c(0.3, -0.4)), (c(-0.7, 1.2), c(0.6, 0.1))] {
            let pt = JacobiPoint::new(z, w).unwrap();
            assert!(christoffel_relation_deviation(&pt, params(1.3, 0.8), s).unwrap() < 1e-6);
        }
    }

    #[test]
    fn rhs_examples() {
        let p = params(1.0, 1.0);
        let o = JacobiPoint::origin();
        let a = geodesic_rhs(&GeodesicState::new(o, tv(1.0, 0.0, 0.0, 0.0)), p);
        assert_eq!(a.dz, c(0.0, 0.0));
        assert!((a.dw - c(-0.5, 0.0)).norm() < 1e-15);
        let a = geodesic_rhs(&GeodesicState::new(o, tv(0.0, 0.0, 1.0, 0.0)), p);
        assert_eq!((a.dz, a.dw), (c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn zero_velocity_constant() {
        let s0 = GeodesicState::new(JacobiPoint::new(c(0.3, 0.1), c(0.2, 0.2)).unwrap(), TangentVector::zero());
        let path = integrate(&s0, 1.0, 10, params(1.0, 1.0)).unwrap();
        assert_eq!(path.len(), 11);
        assert!(path.samples().iter().all(|(_, s)| s.pos == s0.pos));
        assert_eq!(curve_length(&path, params(1.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn mu_zero_matches_tanh() {
        let p = ModelParams::decoupled(1.0).unwrap();
        let b = c(0.6, 0.8);
        let s0 = GeodesicState::new(JacobiPoint::origin(), TangentVector::new(c(0.0, 0.0), b).unwrap());
        let path = integrate(&s0, 2.0, 2000, p).unwrap();
        let worst = path
            .samples()
            .iter()
            .map(|(t, s)| (s.pos.w() - disk_geodesic_raw(b, *t)).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn fc_particular_residual() {
        let sol = FcParticular { eta0: c(1.0, 1.0), b: c(0.7, 0.0) };
        let s0 = sol.state(0.0).unwrap();
        assert_eq!(s0.pos.z(), c(1.0, 1.0));
        assert_eq!(s0.pos.w(), c(0.0, 0.0));
        for i in 1..20 {
            let t = 0.1 * i as f64;
            assert!(sol.residual(t, params(1.0, 1.0)).unwrap() < 1e-9);
        }
        let s = fc_particular_solution(c(0.0, 0.0), c(0.7, 0.0), 0.8).unwrap();
        assert_eq!(s.pos.z(), c(0.0, 0.0));
    }

    #[test]
    fn mu_zero_solution_examples() {
        let s = mu_zero_solution(c(0.3, 0.2), c(1.0, -1.0), c(0.5, 0.1), 0.0).unwrap();
        assert_eq!(s.pos.z(), c(1.0, -1.0));
        assert_eq!(s.pos.w(), c(0.0, 0.0));
        assert!((s.vel.dz - c(0.3, 0.2)).norm() < 1e-15);
        assert_eq!(s.vel.dw, c(0.5, 0.1));
        let s = mu_zero_solution(c(0.0, 0.0), c(1.0, -1.0), c(0.5, 0.1), 1.3).unwrap();
        assert_eq!(s.pos.z(), c(1.0, -1.0));
        assert!(matches!(mu_zero_solution(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), 1.0), Err(Error::ZeroDirection)));
        let sol = MuZero::new(c(0.3, 0.2), c(1.0, -1.0), c(0.5, 0.1)).unwrap();
        let p = ModelParams::decoupled(1.5).unwrap();
        for i in 0..20 {
            assert!(sol.residual(0.1 * i as f64, p).unwrap() < 1e-9);
        }
    }

    #[test]
    fn radial_disk_length() {
        let p = params(1.0, 1.0);
        let s0 = GeodesicState::new(JacobiPoint::origin(), tv(0.0, 0.0, 1.0, 0.0));
        let path = integrate(&s0, 1.0, 1000, ModelParams::decoupled(1.0).unwrap()).unwrap();
        let len = curve_length(&path, p).unwrap();
        assert!((len - 2f64.sqrt()).abs() < 1e-8, "{len}");
    }

    #[test]
    fn concatenation_adds_lengths() {
        let p = params(1.2, 0.9);
        let s0 = GeodesicState::new(JacobiPoint::new(c(0.1, 0.2), c(0.1, 0.0)).unwrap(), tv(0.3, -0.2, 0.2, 0.1));
        let a = integrate(&s0, 0.5, 200, p).unwrap();
        let b0 = *a.last();
        let b = integrate(&b0, 0.5, 200, p).unwrap();
        let b = GeodesicPath::new(b.samples().iter().map(|(t, s)| (t + 0.5, *s)).collect()).unwrap();
        let joined = a.concat(&b).unwrap();
        let total = curve_length(&joined, p).unwrap();
        let parts = curve_length(&a, p).unwrap() + curve_length(&b, p).unwrap();
        assert!((total - parts).abs() < 1e-12);
        assert!(a.concat(&a).is_err());
    }

    #[test]
    fn boundary_escape_reported() {
        let s0 = GeodesicState::new(JacobiPoint::origin(), tv(0.0, 0.0, 1.0, 0.0));
        // tanh(t) approaches 1 - 1e-9 near t ~ 10.7
        let err = integrate(&s0, 40.0, 4000, ModelParams::decoupled(1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::BoundaryEscape { t } if t > 5.0));
    }

    #[test]
    fn csv_shape() {
        let s0 = GeodesicState::new(JacobiPoint::origin(), TangentVector::zero());
        let csv = integrate(&s0, 1.0, 1, params(1.0, 1.0)).unwrap().to_csv(params(1.0, 1.0));
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].split(',').count(), 10);
    }

    #[test]
    fn shooting_recovers_known_geodesic() {
        let p = params(1.25, 1.0);
        let s0 = GeodesicState::new(JacobiPoint::new(c(0.2, 0.1), c(0.1, -0.1)).unwrap(), tv(0.3, 0.1, 0.2, 0.2));
        let path = integrate(&s0, 1.0, 200, p).unwrap();
        let shot = shoot(&s0.pos, &path.last().pos, 200, p, 20).unwrap();
        assert!((shot.first().vel.dz - s0.vel.dz).norm() < 1e-7);
        assert!((shot.first().vel.dw - s0.vel.dw).norm() < 1e-7);
    }

    fn arb_state() -> impl Strategy<Value = GeodesicState> {
        (-2.0..2.0f64, -2.0..2.0f64, 0.0..0.9f64, 0.0..std::f64::consts::TAU, prop::array::uniform4(-2.0..2.0f64))
            .prop_map(|(x, y, r, t, v)| {
                GeodesicState::new(
                    JacobiPoint::new(c(x, y), Complex64::from_polar(r, t)).unwrap(),
                    TangentVector::new(c(v[0], v[1]), c(v[2], v[3])).unwrap(),
                )
            })
    }

    proptest! {
        #[test]
        fn two_accelerations_agree(s in arb_state(), k in 0.8f64..4.0, mu in 0.1f64..3.0) {
            let p = params(k, mu);
            let a = geodesic_rhs(&s, p);
            let b = geodesic_rhs_christoffel(&s, p);
            let scale = a.dz.norm().max(a.dw.norm()).max(1.0);
            prop_assert!((a.dz - b.dz).norm() <= 1e-12 * scale);
            prop_assert!((a.dw - b.dw).norm() <= 1e-12 * scale);
        }
    }
}
