//! SU(1,1) and Jacobi group actions, the multiplier, and the FC coordinate change.
//!
//! The FC map `z = eta - w conj(eta)` depends on `conj(eta)`, so it is not
//! holomorphic. Pullbacks are therefore done on the real Kähler 2-form with
//! the full 4x4 real Jacobian; the (1,1) part is re-extracted afterwards and
//! the (2,0) part is reported as a residual (it must vanish for a map that
//! preserves the form type).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{c, finite, DiskPoint, HermitianMetric2, JacobiPoint, ModelParams};
use crate::error::{Error, Result};
use crate::geometry::metric_raw;
use crate::kernels::{berezin_kernel, diastasis, log_jacobi_kernel};
use crate::stencil::{real_jacobian, Coords, WirtingerStencil};

/// Tolerance on `|a|^2 - |b|^2 = 1`.
pub const SU11_TOL: f64 = 1e-12;

/// `[[a, b], [conj b, conj a]]` with `|a|^2 - |b|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct SU11Element {
    a: Complex64,
    b: Complex64,
}

impl TryFrom<[f64; 4]> for SU11Element {
    type Error = Error;
    fn try_from(v: [f64; 4]) -> Result<Self> {
        Self::new(c(v[0], v[1]), c(v[2], v[3]))
    }
}

impl From<SU11Element> for [f64; 4] {
    fn from(g: SU11Element) -> Self {
        [g.a.re, g.a.im, g.b.re, g.b.im]
    }
}

impl SU11Element {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if !finite(a) || !finite(b) {
            return Err(Error::NonFinite);
        }
        let defect = (a.norm_sqr() - b.norm_sqr() - 1.0).abs();
        if defect > SU11_TOL * (1.0 + a.norm_sqr()) {
            return Err(Error::InvalidSu11 { defect });
        }
        Ok(Self { a, b })
    }

    /// `a = sqrt(1 + |b|^2) e^{i phase}`; always valid.
    pub fn from_b_phase(b: Complex64, phase: f64) -> Result<Self> {
        if !finite(b) || !phase.is_finite() {
            return Err(Error::NonFinite);
        }
        let a = Complex64::from_polar((1.0 + b.norm_sqr()).sqrt(), phase);
        Ok(Self { a, b })
    }

    pub fn identity() -> Self {
        Self { a: c(1.0, 0.0), b: c(0.0, 0.0) }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.b.conj(),
            b: self.a * other.b + self.b * other.a.conj(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.a.conj(), b: -self.b }
    }

    /// `| |a|^2 - |b|^2 - 1 |`.
    pub fn defect(&self) -> f64 {
        (self.a.norm_sqr() - self.b.norm_sqr() - 1.0).abs()
    }
}

#[inline]
fn mobius_raw(g: &SU11Element, w: Complex64) -> Complex64 {
    (g.a * w + g.b) / (g.b.conj() * w + g.a.conj())
}

/// `(a w + b) / (conj(b) w + conj(a))`.
pub fn mobius(g: &SU11Element, w: DiskPoint) -> Result<DiskPoint> {
    DiskPoint::new(mobius_raw(g, w.value()))
}

/// `(g, alpha, t)`; JSON `{a_re, a_im, b_re, b_im, alpha_re, alpha_im, t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupElementJson", into = "GroupElementJson")]
pub struct JacobiGroupElement {
    pub g: SU11Element,
    pub alpha: Complex64,
    pub t: f64,
}

#[derive(Serialize, Deserialize)]
struct GroupElementJson {
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    alpha_re: f64,
    alpha_im: f64,
    t: f64,
}

impl TryFrom<GroupElementJson> for JacobiGroupElement {
    type Error = Error;
    fn try_from(j: GroupElementJson) -> Result<Self> {
        let g = SU11Element::new(c(j.a_re, j.a_im), c(j.b_re, j.b_im))?;
        Self::new(g, c(j.alpha_re, j.alpha_im), j.t)
    }
}

impl From<JacobiGroupElement> for GroupElementJson {
    fn from(e: JacobiGroupElement) -> Self {
        Self {
            a_re: e.g.a.re,
            a_im: e.g.a.im,
            b_re: e.g.b.re,
            b_im: e.g.b.im,
            alpha_re: e.alpha.re,
            alpha_im: e.alpha.im,
            t: e.t,
        }
    }
}

impl JacobiGroupElement {
    pub fn new(g: SU11Element, alpha: Complex64, t: f64) -> Result<Self> {
        if !finite(alpha) || !t.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { g, alpha, t })
    }

    pub fn identity() -> Self {
        Self { g: SU11Element::identity(), alpha: c(0.0, 0.0), t: 0.0 }
    }
}

/// `theta = mu Im(alpha2 conj(alpha1))`.
pub fn heisenberg_phase(alpha2: Complex64, alpha1: Complex64, mu: f64) -> f64 {
    mu * (alpha2 * alpha1.conj()).im
}

#[inline]
pub(crate) fn action_raw(e: &JacobiGroupElement, z: Complex64, w: Complex64) -> (Complex64, Complex64, Complex64) {
    let (a, b, al) = (e.g.a, e.g.b, e.alpha);
    let gamma = z + al - al.conj() * w;
    let delta = b.conj() * w + a.conj();
    (gamma / delta, (a * w + b) / delta, gamma)
}

/// Point action and multiplier `lambda`:
///
/// ```text
/// gamma = z + alpha - conj(alpha) w,  delta = conj(b) w + conj(a)
/// z1 = gamma / delta,  w1 = (a w + b) / delta
/// lambda = delta^(-2k) exp(-mu/2 (conj(alpha)(z + gamma) + conj(b) gamma^2 / delta)) e^{i mu t}
/// ```
///
/// `delta^(-2k)` is taken as `conj(a)^(-2k) (1 + conj(b) w / conj(a))^(-2k)`;
/// the second factor has argument in `(-pi/2, pi/2)` on the disk, so the
/// multiplier is continuous in `w` for non-integer `2k`.
pub fn jacobi_action(
    e: &JacobiGroupElement,
    pt: &JacobiPoint,
    params: ModelParams,
) -> Result<(JacobiPoint, Complex64)> {
    let (z, w) = (pt.z(), pt.w());
    let (z1, w1, gamma) = action_raw(e, z, w);
    let abar = e.g.a.conj();
    let delta = e.g.b.conj() * w + abar;
    if delta.norm() < 1e-12 {
        return Err(Error::InvalidArgument("vanishing denominator in group action".into()));
    }
    let (k, mu) = (params.k(), params.mu());
    let log_delta = abar.ln() + (c(1.0, 0.0) + e.g.b.conj() * w / abar).ln();
    let al = e.alpha.conj();
    let expo = -2.0 * k * log_delta - 0.5 * mu * (al * (z + gamma) + e.g.b.conj() * gamma * gamma / delta)
        + c(0.0, mu * e.t);
    let lambda = expo.exp();
    Ok((JacobiPoint::new(z1, w1)?, lambda))
}

/// `z = eta - w conj(eta)`.
pub fn fc_forward(eta: Complex64, w: DiskPoint) -> Result<JacobiPoint> {
    JacobiPoint::from_parts(eta - w.value() * eta.conj(), w)
}

/// `eta = (z + conj(z) w) / (1 - |w|^2)`.
pub fn fc_inverse(pt: &JacobiPoint) -> (Complex64, DiskPoint) {
    (crate::domain::eta_of(pt), pt.disk())
}

#[inline]
fn eta_action_raw(e: &JacobiGroupElement, eta: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let (a, b, al) = (e.g.a, e.g.b, e.alpha);
    (a * (eta + al) + b * (eta.conj() + al.conj()), mobius_raw(&e.g, w))
}

/// The action in `(eta, w)` coordinates: `eta1 = a(eta + alpha) + b(conj eta + conj alpha)`.
pub fn action_eta_coords(e: &JacobiGroupElement, eta: Complex64, w: DiskPoint) -> Result<(Complex64, DiskPoint)> {
    if !finite(eta) {
        return Err(Error::NonFinite);
    }
    let (eta1, w1) = eta_action_raw(e, eta, w.value());
    Ok((eta1, DiskPoint::new(w1)?))
}

pub(crate) fn disk_geodesic_raw(z: Complex64, t: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return c(0.0, 0.0);
    }
    z / r * (t * r).tanh()
}

/// `w = (z / |z|) tanh(t |z|)`, with `w = 0` for `z = 0`.
pub fn disk_geodesic_map(z: Complex64, t: f64) -> Result<DiskPoint> {
    if !finite(z) || !t.is_finite() {
        return Err(Error::NonFinite);
    }
    DiskPoint::new(disk_geodesic_raw(z, t))
}

// ---------------------------------------------------------------------------
// Real 2-form machinery

pub type Real4 = [[f64; 4]; 4];

/// Kähler form of a Hermitian metric as a real antisymmetric matrix,
/// `Omega_ij = -2 Im H(e_i, e_j)` with `e = (d/dRe z, d/dIm z, d/dRe w, d/dIm w)`.
pub fn kahler_form_matrix(h: &HermitianMetric2) -> Real4 {
    let basis = |i: usize| -> [Complex64; 2] {
        let mut v = [c(0.0, 0.0); 2];
        v[i / 2] = if i.is_multiple_of(2) { c(1.0, 0.0) } else { c(0.0, 1.0) };
        v
    };
    let herm = |u: &[Complex64; 2], v: &[Complex64; 2]| -> Complex64 {
        let mut s = c(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                s += h.entry(a, b) * u[a] * v[b].conj();
            }
        }
        s
    };
    let mut om = [[0.0; 4]; 4];
    for (i, row) in om.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = -2.0 * herm(&basis(i), &basis(j)).im;
        }
    }
    om
}

/// `J^T Omega J`.
pub fn pullback_form(omega: &Real4, jac: &Real4) -> Real4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for p in 0..4 {
                for q in 0..4 {
                    s += jac[p][i] * omega[p][q] * jac[q][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// Type decomposition of a real 2-form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormSplit {
    /// `h_{a bbar} = -i Omega(d_a, dbar_b)`.
    pub h: [[Complex64; 2]; 2],
    /// Largest `|Omega(d_a, d_b)|`: the (2,0) + (0,2) content.
    pub residual_20: f64,
}

impl FormSplit {
    pub fn to_metric(&self) -> HermitianMetric2 {
        HermitianMetric2 { h_zz: self.h[0][0].re, h_zw: self.h[0][1], h_ww: self.h[1][1].re }
    }

    /// Largest deviation from a given Hermitian metric, including imaginary
    /// parts on the diagonal.
    pub fn max_abs_diff(&self, m: &HermitianMetric2) -> f64 {
        let mut d = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                d = d.max((self.h[a][b] - m.entry(a, b)).norm());
            }
        }
        d
    }
}

pub fn split_form(om: &Real4) -> FormSplit {
    let holo = |a: usize| -> [Complex64; 4] {
        let mut v = [c(0.0, 0.0); 4];
        v[2 * a] = c(0.5, 0.0);
        v[2 * a + 1] = c(0.0, -0.5);
        v
    };
    let anti = |a: usize| -> [Complex64; 4] {
        let mut v = [c(0.0, 0.0); 4];
        v[2 * a] = c(0.5, 0.0);
        v[2 * a + 1] = c(0.0, 0.5);
        v
    };
    let bil = |u: &[Complex64; 4], v: &[Complex64; 4]| -> Complex64 {
        let mut s = c(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                s += u[i] * om[i][j] * v[j];
            }
        }
        s
    };
    let mut h = [[c(0.0, 0.0); 2]; 2];
    let mut res = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            h[a][b] = c(0.0, -1.0) * bil(&holo(a), &anti(b));
            res = res.max(bil(&holo(a), &holo(b)).norm());
        }
    }
    FormSplit { h, residual_20: res }
}

/// Pull a metric field back through a smooth map of `C^2` at `x`.
pub fn pullback_metric<M, H>(map: &M, field: &H, x: &Coords, h: f64) -> FormSplit
where
    M: Fn(&Coords) -> Coords,
    H: Fn(&Coords) -> HermitianMetric2,
{
    let jac = real_jacobian(map, x, h);
    let om = kahler_form_matrix(&field(&map(x)));
    split_form(&pullback_form(&om, &jac))
}

/// Determinant of a real 4x4 matrix by partial-pivot elimination.
pub fn det4(m: &Real4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for cc in col..4 {
                a[r][cc] -= f * a[col][cc];
            }
        }
    }
    det
}

/// Real Jacobian of the point action at `pt`.
pub fn action_jacobian(e: &JacobiGroupElement, pt: &JacobiPoint, h: f64) -> Real4 {
    let map = |x: &Coords| {
        let (z1, w1, _) = action_raw(e, x[0], x[1]);
        [z1, w1]
    };
    real_jacobian(&map, &pt.coords(), h)
}

/// The split metric in `(eta, w)` coordinates: `diag(mu, 2k / P^2)`.
pub fn split_metric(w: Complex64, params: ModelParams) -> HermitianMetric2 {
    let p = 1.0 - w.norm_sqr();
    HermitianMetric2 { h_zz: params.mu(), h_zw: c(0.0, 0.0), h_ww: 2.0 * params.k() / (p * p) }
}

// ---------------------------------------------------------------------------
// Invariance checks (deviations; callers compare against tolerances)

/// Relative deviation of `K(zeta1, conj zeta21) lambda(zeta) conj(lambda(zeta2))`
/// from `K(zeta, conj zeta2)`, computed in log space.
pub fn kernel_equivariance_deviation(
    e: &JacobiGroupElement,
    p1: &JacobiPoint,
    p2: &JacobiPoint,
    params: ModelParams,
) -> Result<f64> {
    let (q1, l1) = jacobi_action(e, p1, params)?;
    let (q2, l2) = jacobi_action(e, p2, params)?;
    let lhs = log_jacobi_kernel(&q1, &q2, params) + l1.ln() + l2.conj().ln();
    let rhs = log_jacobi_kernel(p1, p2, params);
    // relative deviation of exp(lhs) from exp(rhs)
    Ok(((lhs - rhs).exp() - 1.0).norm())
}

/// `(|b(g zeta1, g zeta2) - b(zeta1, zeta2)|, |D(g zeta1, g zeta2) - D(zeta1, zeta2)| / max(1, D))`.
pub fn berezin_invariance_deviation(
    e: &JacobiGroupElement,
    p1: &JacobiPoint,
    p2: &JacobiPoint,
    params: ModelParams,
) -> Result<(f64, f64)> {
    let (q1, _) = jacobi_action(e, p1, params)?;
    let (q2, _) = jacobi_action(e, p2, params)?;
    let db = (berezin_kernel(&q1, &q2, params) - berezin_kernel(p1, p2, params)).abs();
    let d0 = diastasis(p1, p2, params);
    let dd = (diastasis(&q1, &q2, params) - d0).abs() / d0.max(1.0);
    Ok((db, dd))
}

/// Relative deviation of the pulled-back metric from the metric at `pt`
/// (including the (2,0) residual).
pub fn metric_invariance_deviation(
    e: &JacobiGroupElement,
    pt: &JacobiPoint,
    params: ModelParams,
    stencil: WirtingerStencil,
) -> Result<f64> {
    let (q, _) = jacobi_action(e, pt, params)?;
    let h = stencil.step_at(pt.w())?.min(stencil.step_at(q.w())?);
    let (k, mu) = (params.k(), params.mu());
    let map = |x: &Coords| {
        let (z1, w1, _) = action_raw(e, x[0], x[1]);
        [z1, w1]
    };
    let split = pullback_metric(&map, &|y: &Coords| metric_raw(y[0], y[1], k, mu), &pt.coords(), h);
    let target = metric_raw(pt.z(), pt.w(), k, mu);
    Ok(split.max_abs_diff(&target).max(split.residual_20) / target.max_abs())
}

/// Metric pulled back through the FC map at `(eta, w)`.
pub fn fc_pullback(eta: Complex64, w: DiskPoint, params: ModelParams, h: f64) -> FormSplit {
    let (k, mu) = (params.k(), params.mu());
    let map = |x: &Coords| [x[0] - x[1] * x[0].conj(), x[1]];
    pullback_metric(&map, &|y: &Coords| metric_raw(y[0], y[1], k, mu), &[eta, w.value()], h)
}

/// Deviations `(cross term and (2,0) part, diagonal vs (mu, 2k/P^2) relative)`.
pub fn fc_splitting_deviation(eta: Complex64, w: DiskPoint, params: ModelParams, h: f64) -> (f64, f64) {
    let s = fc_pullback(eta, w, params, h);
    let target = split_metric(w.value(), params);
    let cross = s.h[0][1].norm().max(s.h[1][0].norm()).max(s.residual_20);
    let d0 = (s.h[0][0] - target.entry(0, 0)).norm() / target.h_zz;
    let d1 = (s.h[1][1] - target.entry(1, 1)).norm() / target.h_ww;
    (cross, d0.max(d1))
}

/// Relative deviation of the split form from its pullback under the
/// `(eta, w)`-coordinate action.
pub fn eta_action_invariance_deviation(
    e: &JacobiGroupElement,
    eta: Complex64,
    w: DiskPoint,
    params: ModelParams,
    h: f64,
) -> Result<f64> {
    action_eta_coords(e, eta, w)?;
    let map = |x: &Coords| {
        let (a, b) = eta_action_raw(e, x[0], x[1]);
        [a, b]
    };
    let field = |y: &Coords| split_metric(y[1], params);
    let s = pullback_metric(&map, &field, &[eta, w.value()], h);
    let target = split_metric(w.value(), params);
    Ok(s.max_abs_diff(&target).max(s.residual_20) / target.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(k: f64, mu: f64) -> ModelParams {
        ModelParams::new(k, mu).unwrap()
    }

    fn g54() -> SU11Element {
        SU11Element::new(c(1.25, 0.0), c(0.75, 0.0)).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn su11_validation() {
        assert!(SU11Element::new(c(1.0, 0.0), c(0.5, 0.0)).is_err());
        assert!(SU11Element::new(c(f64::NAN, 0.0), c(0.0, 0.0)).is_err());
        let g = SU11Element::from_b_phase(c(0.3, -2.0), 0.7).unwrap();
        assert!(g.defect() < 1e-14);
    }

    #[test]
    fn mobius_examples() {
        let w = DiskPoint::new(c(0.2, -0.3)).unwrap();
        assert_eq!(mobius(&SU11Element::identity(), w).unwrap(), w);
        let v = mobius(&g54(), DiskPoint::origin()).unwrap().value();
        assert!(close(v, c(0.6, 0.0), 1e-15));
    }

    #[test]
    fn heisenberg_phase_examples() {
        let a = c(0.3, 0.8);
        assert_eq!(heisenberg_phase(a, a, 2.0), 0.0);
        assert_eq!(heisenberg_phase(c(0.0, 1.0), c(1.0, 0.0), 1.0), 1.0);
        let b = c(-1.1, 0.4);
        assert_eq!(heisenberg_phase(a, b, 1.3), -heisenberg_phase(b, a, 1.3));
    }

    #[test]
    fn action_examples() {
        let p = params(1.3, 0.7);
        let pt = JacobiPoint::new(c(0.4, -0.2), c(0.1, 0.5)).unwrap();
        let (q, l) = jacobi_action(&JacobiGroupElement::identity(), &pt, p).unwrap();
        assert_eq!(q, pt);
        assert!(close(l, c(1.0, 0.0), 1e-15));

        let e = JacobiGroupElement::new(SU11Element::identity(), c(0.8, 0.0), 0.0).unwrap();
        let (q, _) = jacobi_action(&e, &JacobiPoint::new(c(0.5, 0.1), c(0.0, 0.0)).unwrap(), p).unwrap();
        assert!(close(q.z(), c(1.3, 0.1), 1e-15));
        assert_eq!(q.w(), c(0.0, 0.0));

        let k = 1.7;
        let e = JacobiGroupElement::new(g54(), c(0.0, 0.0), 0.0).unwrap();
        let (q, l) = jacobi_action(&e, &JacobiPoint::origin(), params(k, 1.0)).unwrap();
        assert!(close(q.z(), c(0.0, 0.0), 1e-15));
        assert!(close(q.w(), c(0.6, 0.0), 1e-15));
        assert!(close(l, c(0.8f64.powf(2.0 * k), 0.0), 1e-14));
    }

    #[test]
    fn central_phase_only_rotates() {
        let p = params(1.0, 2.0);
        let pt = JacobiPoint::new(c(0.3, 0.3), c(0.2, 0.0)).unwrap();
        let e0 = JacobiGroupElement::new(g54(), c(0.1, 0.2), 0.0).unwrap();
        let e1 = JacobiGroupElement::new(g54(), c(0.1, 0.2), 0.4).unwrap();
        let (_, l0) = jacobi_action(&e0, &pt, p).unwrap();
        let (_, l1) = jacobi_action(&e1, &pt, p).unwrap();
        assert!(close(l1, l0 * Complex64::from_polar(1.0, 0.8), 1e-14));
    }

    #[test]
    fn fc_examples() {
        let w = DiskPoint::new(c(0.5, 0.0)).unwrap();
        let eta = c(1.2, -0.4);
        assert_eq!(fc_forward(eta, DiskPoint::origin()).unwrap().z(), eta);
        assert!(close(fc_forward(c(2.0, 0.0), w).unwrap().z(), c(1.0, 0.0), 1e-15));
        assert_eq!(fc_forward(c(0.0, 0.0), w).unwrap().z(), c(0.0, 0.0));
        let (e, _) = fc_inverse(&JacobiPoint::new(c(1.0, 0.0), c(0.5, 0.0)).unwrap());
        assert!(close(e, c(2.0, 0.0), 1e-15));
    }

    #[test]
    fn eta_action_examples() {
        let w = DiskPoint::new(c(0.1, 0.3)).unwrap();
        let eta = c(0.7, 0.2);
        let (e1, w1) = action_eta_coords(&JacobiGroupElement::identity(), eta, w).unwrap();
        assert_eq!((e1, w1), (eta, w));
        let e = JacobiGroupElement::new(SU11Element::identity(), c(1.0, 0.0), 0.0).unwrap();
        let (e1, _) = action_eta_coords(&e, c(0.0, 0.0), w).unwrap();
        assert!(close(e1, c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn disk_geodesic_examples() {
        assert_eq!(disk_geodesic_map(c(0.0, 0.0), 3.0).unwrap().value(), c(0.0, 0.0));
        let v = disk_geodesic_map(c(1.0, 0.0), 1.0).unwrap().value();
        assert!((v.re - 0.761594).abs() < 1e-6);
    }

    #[test]
    fn form_roundtrip() {
        let h = metric_raw(c(0.3, -0.5), c(0.2, 0.4), 1.4, 0.8);
        let s = split_form(&kahler_form_matrix(&h));
        assert!(s.max_abs_diff(&h) < 1e-14);
        assert!(s.residual_20 < 1e-14);
    }

    #[test]
    fn fc_splitting_at_a_point() {
        let p = params(1.25, 1.3);
        let w = DiskPoint::new(c(0.4, -0.3)).unwrap();
        let (cross, diag) = fc_splitting_deviation(c(1.1, 0.6), w, p, 1e-3);
        assert!(cross < 1e-10, "cross {cross}");
        assert!(diag < 1e-8, "diag {diag}");
    }

    #[test]
    fn json_shape() {
        let e = JacobiGroupElement::new(g54(), c(0.1, -0.2), 0.5).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        for key in ["a_re", "a_im", "b_re", "b_im", "alpha_re", "alpha_im", "\"t\""] {
            assert!(s.contains(key), "{s}");
        }
        let back: JacobiGroupElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        let bad = r#"{"a_re":1,"a_im":0,"b_re":1,"b_im":0,"alpha_re":0,"alpha_im":0,"t":0}"#;
        assert!(serde_json::from_str::<JacobiGroupElement>(bad).is_err());
    }

    #[test]
    fn det4_known() {
        let m = [[2.0, 0.0, 0.0, 1.0], [0.0, 3.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]];
        assert!((det4(&m) - 3.0).abs() < 1e-14);
    }

    fn arb_su11() -> impl Strategy<Value = SU11Element> {
        (-2.0..2.0f64, -2.0..2.0f64, 0.0..std::f64::consts::TAU)
            .prop_map(|(x, y, t)| SU11Element::from_b_phase(c(x, y), t).unwrap())
    }

    fn arb_w() -> impl Strategy<Value = DiskPoint> {
        (0.0..0.9f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| DiskPoint::new(Complex64::from_polar(r, t)).unwrap())
    }

    proptest! {
        #[test]
        fn mobius_composition(g1 in arb_su11(), g2 in arb_su11(), w in arb_w()) {
            let lhs = mobius(&g1, mobius(&g2, w).unwrap()).unwrap().value();
            let rhs = mobius(&g1.compose(&g2), w).unwrap().value();
            prop_assert!((lhs - rhs).norm() < 1e-11);
            prop_assert!(g1.compose(&g2).defect() < 1e-12 * (1.0 + g1.a().norm_sqr() * g2.a().norm_sqr()));
        }

        #[test]
        fn fc_round_trip(x in -3.0..3.0f64, y in -3.0..3.0f64, w in arb_w()) {
            let eta = c(x, y);
            let (e2, w2) = fc_inverse(&fc_forward(eta, w).unwrap());
            prop_assert!((e2 - eta).norm() <= 1e-12 * eta.norm().max(1.0) / w.p());
            prop_assert_eq!(w2, w);
        }

        #[test]
        fn commuting_square(g in arb_su11(), ax in -1.0..1.0f64, ay in -1.0..1.0f64,
                            zx in -1.0..1.0f64, zy in -1.0..1.0f64, w in arb_w()) {
            let e = JacobiGroupElement::new(g, c(ax, ay), 0.0).unwrap();
            let pt = JacobiPoint::from_parts(c(zx, zy), w).unwrap();
            let p = params(1.25, 1.0);
            let (q, _) = jacobi_action(&e, &pt, p).unwrap();
            let (eta, w0) = fc_inverse(&pt);
            let (eta1, w1) = action_eta_coords(&e, eta, w0).unwrap();
            let r = fc_forward(eta1, w1).unwrap();
            let scale = q.z().norm().max(1.0) / q.p();
            prop_assert!((r.z() - q.z()).norm() < 1e-10 * scale);
            prop_assert!((r.w() - q.w()).norm() < 1e-10);
        }
    }
}
