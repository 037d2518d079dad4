//! Kähler metric of the Siegel-Jacobi disk and the quantities derived from it.
//!
//! With `P = 1 - |w|^2` and `eta = (z + conj(z) w) / P`:
//!
//! ```text
//! h_{z zbar} = mu / P
//! h_{z wbar} = mu eta / P
//! h_{w wbar} = mu |eta|^2 / P + 2k / P^2
//! ```
//!
//! Closed forms are paired with finite-difference routes through
//! [`crate::stencil`] so each identity can be checked numerically.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{c, eta_raw, HermitianMetric2, JacobiPoint, ModelParams, TangentVector};
use crate::error::Result;
use crate::kernels::potential_raw;
use crate::stencil::{d_dz, wirtinger_hessian, Coords, WirtingerStencil};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicciTensor2 {
    pub r_zz: f64,
    pub r_zw: Complex64,
    pub r_ww: f64,
}

impl RicciTensor2 {
    pub fn entry(&self, alpha: usize, beta: usize) -> Complex64 {
        match (alpha, beta) {
            (0, 0) => c(self.r_zz, 0.0),
            (0, 1) => self.r_zw,
            (1, 0) => self.r_zw.conj(),
            _ => c(self.r_ww, 0.0),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.r_zz - other.r_zz)
            .abs()
            .max((self.r_zw - other.r_zw).norm())
            .max((self.r_ww - other.r_ww).abs())
    }
}

pub(crate) fn metric_raw(z: Complex64, w: Complex64, k: f64, mu: f64) -> HermitianMetric2 {
    let p = 1.0 - w.norm_sqr();
    let eta = eta_raw(z, w);
    HermitianMetric2 {
        h_zz: mu / p,
        h_zw: eta * (mu / p),
        h_ww: mu * eta.norm_sqr() / p + 2.0 * k / (p * p),
    }
}

pub fn metric(pt: &JacobiPoint, params: ModelParams) -> HermitianMetric2 {
    metric_raw(pt.z(), pt.w(), params.k(), params.mu())
}

/// Mixed Wirtinger Hessian of the Kähler potential by central differences.
pub fn metric_fd(pt: &JacobiPoint, params: ModelParams, stencil: WirtingerStencil) -> Result<HermitianMetric2> {
    let h = stencil.step_at(pt.w())?;
    let (k, mu) = (params.k(), params.mu());
    let f = |x: &Coords| c(potential_raw(x[0], x[1], k, mu), 0.0);
    let hs = wirtinger_hessian(&f, &pt.coords(), h);
    Ok(crate::stencil::hessian_to_metric(&hs))
}

/// Determinant of the 2x2 metric matrix.
pub fn metric_det(pt: &JacobiPoint, params: ModelParams) -> f64 {
    metric(pt, params).det()
}

/// `2 k mu / P^3`.
pub fn metric_det_closed_form(pt: &JacobiPoint, params: ModelParams) -> f64 {
    2.0 * params.k() * params.mu() / pt.p().powi(3)
}

/// `Ric = -3 / P^2 dw ^ dwbar`; no `z` components.
pub fn ricci(pt: &JacobiPoint, _params: ModelParams) -> RicciTensor2 {
    let p = pt.p();
    RicciTensor2 { r_zz: 0.0, r_zw: c(0.0, 0.0), r_ww: -3.0 / (p * p) }
}

/// `-d dbar ln det h` by finite differences of the 2x2 determinant.
pub fn ricci_fd(pt: &JacobiPoint, params: ModelParams, stencil: WirtingerStencil) -> Result<RicciTensor2> {
    let h = stencil.step_at(pt.w())?;
    let (k, mu) = (params.k(), params.mu());
    let f = |x: &Coords| c(metric_raw(x[0], x[1], k, mu).det().ln(), 0.0);
    let hs = wirtinger_hessian(&f, &pt.coords(), h);
    Ok(RicciTensor2 { r_zz: -hs[0][0].re, r_zw: -hs[0][1], r_ww: -hs[1][1].re })
}

fn inverse(m: &HermitianMetric2) -> [[Complex64; 2]; 2] {
    let d = m.det();
    [[c(m.h_ww / d, 0.0), -m.h_zw / d], [-m.h_zw.conj() / d, c(m.h_zz / d, 0.0)]]
}

/// `sum_{a,b} (h^{-1})^{b a} Ric_{a bbar}`.
pub fn scalar_curvature_of(h: &HermitianMetric2, r: &RicciTensor2) -> f64 {
    let inv = inverse(h);
    let mut s = c(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            s += inv[b][a] * r.entry(a, b);
        }
    }
    s.re
}

/// Equals `-3 / (2k)` everywhere.
pub fn scalar_curvature(pt: &JacobiPoint, params: ModelParams) -> f64 {
    scalar_curvature_of(&metric(pt, params), &ricci(pt, params))
}

/// Coefficients of `3 h - Ric`:
/// `3 mu / P`, `3 mu eta / P`, `3 (mu |eta|^2 / P + (2k + 1) / P^2)`.
pub fn tilde_metric(pt: &JacobiPoint, params: ModelParams) -> HermitianMetric2 {
    let p = pt.p();
    let eta = eta_raw(pt.z(), pt.w());
    let mu = params.mu();
    HermitianMetric2 {
        h_zz: 3.0 * mu / p,
        h_zw: 3.0 * mu * eta / p,
        h_ww: 3.0 * (mu * eta.norm_sqr() / p + (2.0 * params.k() + 1.0) / (p * p)),
    }
}

/// `4 k mu / P^3` against `dRe z dIm z dRe w dIm w`.
pub fn volume_density(pt: &JacobiPoint, params: ModelParams) -> f64 {
    4.0 * params.k() * params.mu() / pt.p().powi(3)
}

pub fn tangent_norm(pt: &JacobiPoint, v: &TangentVector, params: ModelParams) -> f64 {
    metric(pt, params).form(v, v).re.max(0.0).sqrt()
}

/// Largest violation of `d h_{a bbar} / d z_g = d h_{g bbar} / d z_a` for an
/// arbitrary metric field.
pub fn kahler_condition_check_with<M>(metric_field: M, pt: &JacobiPoint, stencil: WirtingerStencil) -> Result<f64>
where
    M: Fn(&Coords) -> HermitianMetric2,
{
    let h = stencil.step_at(pt.w())?;
    let x = pt.coords();
    let mut worst = 0.0f64;
    for beta in 0..2 {
        let h_z = |y: &Coords| metric_field(y).entry(0, beta);
        let h_w = |y: &Coords| metric_field(y).entry(1, beta);
        let lhs = d_dz(&h_z, &x, 1, h);
        let rhs = d_dz(&h_w, &x, 0, h);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

pub fn kahler_condition_check(pt: &JacobiPoint, params: ModelParams, stencil: WirtingerStencil) -> Result<f64> {
    let (k, mu) = (params.k(), params.mu());
    kahler_condition_check_with(|x: &Coords| metric_raw(x[0], x[1], k, mu), pt, stencil)
}

/// `d h_{a bbar} / d z_g` for the closed-form metric, by finite differences.
pub fn metric_derivative_fd(
    pt: &JacobiPoint,
    params: ModelParams,
    stencil: WirtingerStencil,
    alpha: usize,
    beta: usize,
    gamma: usize,
) -> Result<Complex64> {
    let h = stencil.step_at(pt.w())?;
    let (k, mu) = (params.k(), params.mu());
    let f = |x: &Coords| metric_raw(x[0], x[1], k, mu).entry(alpha, beta);
    Ok(d_dz(&f, &pt.coords(), gamma, h))
}
