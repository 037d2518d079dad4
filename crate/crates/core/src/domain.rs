//! Points, parameters and the small value types shared by every module.
//!
//! All types are immutable `Copy` values and every constructor validates.
//! Finite-difference stencils work on raw `[z, w]` coordinates instead of
//! points, after checking their reach against the boundary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Default guard on the open disk: points with `|w| >= 1 - DEFAULT_BOUNDARY_EPS`
/// are rejected.
pub const DEFAULT_BOUNDARY_EPS: f64 = 1e-9;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    w: Complex64,
}

impl DiskPoint {
    pub fn new(w: Complex64) -> Result<Self> {
        Self::with_bound(w, DEFAULT_BOUNDARY_EPS)
    }

    pub fn with_bound(w: Complex64, eps: f64) -> Result<Self> {
        if !finite(w) {
            return Err(Error::NonFinite);
        }
        let modulus = w.norm();
        if modulus >= 1.0 - eps {
            return Err(Error::BoundaryViolation { modulus, bound: eps });
        }
        Ok(Self { w })
    }

    pub fn origin() -> Self {
        Self { w: Complex64::new(0.0, 0.0) }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.w
    }

    /// `P = 1 - |w|^2`, strictly positive.
    #[inline]
    pub fn p(&self) -> f64 {
        1.0 - self.w.norm_sqr()
    }
}

/// A point `(z, w)` of the Siegel-Jacobi disk `C x D_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiPoint {
    z: Complex64,
    w: DiskPoint,
}

impl JacobiPoint {
    pub fn new(z: Complex64, w: Complex64) -> Result<Self> {
        Self::with_bound(z, w, DEFAULT_BOUNDARY_EPS)
    }

    pub fn with_bound(z: Complex64, w: Complex64, eps: f64) -> Result<Self> {
        if !finite(z) {
            return Err(Error::NonFinite);
        }
        Ok(Self { z, w: DiskPoint::with_bound(w, eps)? })
    }

    pub fn from_parts(z: Complex64, w: DiskPoint) -> Result<Self> {
        if !finite(z) {
            return Err(Error::NonFinite);
        }
        Ok(Self { z, w })
    }

    pub fn origin() -> Self {
        Self { z: Complex64::new(0.0, 0.0), w: DiskPoint::origin() }
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        self.z
    }

    #[inline]
    pub fn w(&self) -> Complex64 {
        self.w.w
    }

    #[inline]
    pub fn disk(&self) -> DiskPoint {
        self.w
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.w.p()
    }

    /// `(z, w)` as a coordinate pair.
    #[inline]
    pub fn coords(&self) -> [Complex64; 2] {
        [self.z, self.w.w]
    }
}

/// Validated point constructor.
pub fn make_jacobi_point(z: Complex64, w: Complex64) -> Result<JacobiPoint> {
    JacobiPoint::new(z, w)
}

/// `eta = (z + conj(z) w) / (1 - |w|^2)`.
pub fn eta_of(pt: &JacobiPoint) -> Complex64 {
    eta_raw(pt.z(), pt.w())
}

#[inline]
pub(crate) fn eta_raw(z: Complex64, w: Complex64) -> Complex64 {
    (z + z.conj() * w) / (1.0 - w.norm_sqr())
}

/// Representation parameters: Bargmann index `k` and Heisenberg scale `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    k: f64,
    mu: f64,
}

impl ModelParams {
    pub fn new(k: f64, mu: f64) -> Result<Self> {
        if !k.is_finite() || !mu.is_finite() {
            return Err(Error::NonFinite);
        }
        if k <= 0.75 {
            return Err(Error::InvalidParams(format!("k = {k} must exceed 3/4")));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidParams(format!("mu = {mu} must be positive")));
        }
        Ok(Self { k, mu })
    }

    /// Any `k > 0`, `mu > 0`. The weight normalisation `(4k - 3) / (2 pi^2)`
    /// vanishes or turns negative for `k <= 3/4`, so the Monte Carlo routines
    /// reject such parameters; kernels, series and geometry remain valid
    /// (e.g. `k = 3/4`, the `2k' = 1` member of the basis family).
    pub fn unnormalized(k: f64, mu: f64) -> Result<Self> {
        if !k.is_finite() || !mu.is_finite() {
            return Err(Error::NonFinite);
        }
        if k <= 0.0 {
            return Err(Error::InvalidParams(format!("k = {k} must be positive")));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidParams(format!("mu = {mu} must be positive")));
        }
        Ok(Self { k, mu })
    }

    /// True when the weight normalisation is positive (`k > 3/4`).
    pub fn is_normalizable(&self) -> bool {
        self.k > 0.75
    }

    /// The `mu = 0` limit in which the `z` and `w` geodesic equations decouple.
    /// Only meaningful for the connection and geodesic routines; the kernels
    /// degenerate to the pure disk kernel.
    pub fn decoupled(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::NonFinite);
        }
        if k <= 0.0 {
            return Err(Error::InvalidParams(format!("k = {k} must be positive")));
        }
        Ok(Self { k, mu: 0.0 })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `2k' = 2(k - 1/4)` as a positive integer, when it is one.
    pub fn two_k_prime(&self) -> Result<u32> {
        let t = 2.0 * (self.k - 0.25);
        let r = t.round();
        if r >= 1.0 && (t - r).abs() < 1e-12 {
            Ok(r as u32)
        } else {
            Err(Error::InvalidK { k: self.k })
        }
    }

    /// Normalisation constant of the weight, `(4k - 3) / (2 pi^2)`.
    pub fn lambda_norm(&self) -> f64 {
        (4.0 * self.k - 3.0) / (2.0 * std::f64::consts::PI * std::f64::consts::PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub dz: Complex64,
    pub dw: Complex64,
}

impl TangentVector {
    pub fn new(dz: Complex64, dw: Complex64) -> Result<Self> {
        if !finite(dz) || !finite(dw) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dz, dw })
    }

    pub fn zero() -> Self {
        Self { dz: c(0.0, 0.0), dw: c(0.0, 0.0) }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dz: self.dz * s, dw: self.dw * s }
    }
}

/// Hermitian 2x2 metric coefficients `h_{z zbar}`, `h_{z wbar}`, `h_{w wbar}`.
/// `h_{w zbar}` is the conjugate of `h_zw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianMetric2 {
    pub h_zz: f64,
    pub h_zw: Complex64,
    pub h_ww: f64,
}

impl HermitianMetric2 {
    pub fn det(&self) -> f64 {
        self.h_zz * self.h_ww - self.h_zw.norm_sqr()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.h_zz > 0.0 && self.h_ww > 0.0 && self.det() > 0.0
    }

    /// Entry `h_{alpha betabar}` with index 0 = z, 1 = w.
    pub fn entry(&self, alpha: usize, beta: usize) -> Complex64 {
        match (alpha, beta) {
            (0, 0) => c(self.h_zz, 0.0),
            (0, 1) => self.h_zw,
            (1, 0) => self.h_zw.conj(),
            _ => c(self.h_ww, 0.0),
        }
    }

    /// `sum h_{ab} u_a conj(v_b)`.
    pub fn form(&self, u: &TangentVector, v: &TangentVector) -> Complex64 {
        let (u0, u1, v0, v1) = (u.dz, u.dw, v.dz.conj(), v.dw.conj());
        u0 * v0 * self.h_zz + u0 * v1 * self.h_zw + u1 * v0 * self.h_zw.conj() + u1 * v1 * self.h_ww
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.h_zz - other.h_zz)
            .abs()
            .max((self.h_zw - other.h_zw).norm())
            .max((self.h_ww - other.h_ww).abs())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.h_zz.abs().max(self.h_zw.norm()).max(self.h_ww.abs())
    }

    /// Coefficient difference relative to the larger of the two coefficient scales.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        self.max_abs_diff(other) / self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_and_interior_points_validate() {
        assert!(make_jacobi_point(c(0.0, 0.0), c(0.0, 0.0)).is_ok());
        assert!(make_jacobi_point(c(1.0, 2.0), c(0.5, 0.0)).is_ok());
    }

    #[test]
    fn boundary_and_nan_rejected() {
        assert!(matches!(
            make_jacobi_point(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::BoundaryViolation { .. })
        ));
        assert!(matches!(
            make_jacobi_point(c(0.0, 0.0), c(0.0, 1.0 - 1e-10)),
            Err(Error::BoundaryViolation { .. })
        ));
        assert_eq!(make_jacobi_point(c(f64::NAN, 0.0), c(0.0, 0.0)), Err(Error::NonFinite));
        assert_eq!(make_jacobi_point(c(0.0, 0.0), c(f64::INFINITY, 0.0)), Err(Error::NonFinite));
        assert!(JacobiPoint::with_bound(c(0.0, 0.0), c(0.95, 0.0), 0.1).is_err());
    }

    #[test]
    fn eta_examples() {
        let w = c(0.3, -0.4);
        assert_eq!(eta_of(&make_jacobi_point(c(0.0, 0.0), w).unwrap()), c(0.0, 0.0));
        let z = c(1.5, -0.25);
        assert_eq!(eta_of(&make_jacobi_point(z, c(0.0, 0.0)).unwrap()), z);
        let e = eta_of(&make_jacobi_point(c(1.0, 0.0), c(0.5, 0.0)).unwrap());
        assert!((e - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.75, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0).is_ok());
        assert_eq!(ModelParams::new(1.25, 1.0).unwrap().two_k_prime(), Ok(2));
        assert!(ModelParams::new(0.75 + 1e-3, 1.0).unwrap().two_k_prime().is_err());
        assert!(ModelParams::new(1.0, 1.0).unwrap().two_k_prime().is_err());
        let lam = ModelParams::new(1.0, 1.0).unwrap().lambda_norm();
        assert!((lam - 0.050_660_591_821_168_88).abs() < 1e-15);
        let t = ModelParams::unnormalized(0.75, 1.0).unwrap();
        assert_eq!(t.two_k_prime(), Ok(1));
        assert!(!t.is_normalizable());
        assert!(ModelParams::unnormalized(0.0, 1.0).is_err());
        assert!(ModelParams::unnormalized(1.0, 0.0).is_err());
    }
}
