//! Central finite differences in Wirtinger form on `C^2`.
//!
//! Coordinates are `[z, w]`; real directions are ordered
//! `(Re z, Im z, Re w, Im w)`. `d/dz = (d/dx - i d/dy) / 2` and
//! `d/dzbar = (d/dx + i d/dy) / 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{c, HermitianMetric2, DEFAULT_BOUNDARY_EPS};
use crate::error::{Error, Result};

pub type Coords = [Complex64; 2];

pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const MIN_FD_STEP: f64 = 1e-7;
pub const MAX_FD_STEP: f64 = 0.25;
/// Adaptive halving near the boundary stops here.
pub const HALVING_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WirtingerStencil {
    step: f64,
}

impl Default for WirtingerStencil {
    fn default() -> Self {
        Self { step: DEFAULT_FD_STEP }
    }
}

impl WirtingerStencil {
    pub fn new(step: f64) -> Result<Self> {
        if !(MIN_FD_STEP..=MAX_FD_STEP).contains(&step) {
            return Err(Error::InvalidArgument(format!(
                "finite-difference step {step} outside [{MIN_FD_STEP}, {MAX_FD_STEP}]"
            )));
        }
        Ok(Self { step })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Step usable at disk coordinate `w`: the nominal step, halved until
    /// the stencil stays at distance `> 2 * step` from the guarded boundary.
    pub fn step_at(&self, w: Complex64) -> Result<f64> {
        let limit = 1.0 - DEFAULT_BOUNDARY_EPS;
        let floor = HALVING_FLOOR.min(self.step);
        let mut h = self.step;
        loop {
            if w.norm() + 2.0 * h < limit {
                return Ok(h);
            }
            if h / 2.0 < floor {
                return Err(Error::BoundaryProximity { step: self.step, modulus: w.norm() });
            }
            h /= 2.0;
        }
    }
}

#[inline]
fn shifted(x: &Coords, dir: usize, h: f64) -> Coords {
    let mut y = *x;
    let d = if dir.is_multiple_of(2) { c(h, 0.0) } else { c(0.0, h) };
    y[dir / 2] += d;
    y
}

#[inline]
fn shifted2(x: &Coords, d1: usize, h1: f64, d2: usize, h2: f64) -> Coords {
    shifted(&shifted(x, d1, h1), d2, h2)
}

/// First partial derivative along real direction `dir`.
pub fn partial<F: Fn(&Coords) -> Complex64>(f: &F, x: &Coords, dir: usize, h: f64) -> Complex64 {
    (f(&shifted(x, dir, h)) - f(&shifted(x, dir, -h))) / (2.0 * h)
}

/// Second partial derivative along real directions `d1`, `d2`.
pub fn second_partial<F: Fn(&Coords) -> Complex64>(
    f: &F,
    x: &Coords,
    d1: usize,
    d2: usize,
    h: f64,
) -> Complex64 {
    if d1 == d2 {
        (f(&shifted(x, d1, h)) - 2.0 * f(x) + f(&shifted(x, d1, -h))) / (h * h)
    } else {
        (f(&shifted2(x, d1, h, d2, h)) - f(&shifted2(x, d1, h, d2, -h))
            - f(&shifted2(x, d1, -h, d2, h))
            + f(&shifted2(x, d1, -h, d2, -h)))
            / (4.0 * h * h)
    }
}

/// `d f / d z_a`.
pub fn d_dz<F: Fn(&Coords) -> Complex64>(f: &F, x: &Coords, a: usize, h: f64) -> Complex64 {
    0.5 * (partial(f, x, 2 * a, h) - c(0.0, 1.0) * partial(f, x, 2 * a + 1, h))
}

/// `d f / d zbar_a`.
pub fn d_dzbar<F: Fn(&Coords) -> Complex64>(f: &F, x: &Coords, a: usize, h: f64) -> Complex64 {
    0.5 * (partial(f, x, 2 * a, h) + c(0.0, 1.0) * partial(f, x, 2 * a + 1, h))
}

/// Mixed Wirtinger derivative `d^2 f / (d z_a d zbar_b)`.
pub fn mixed<F: Fn(&Coords) -> Complex64>(f: &F, x: &Coords, a: usize, b: usize, h: f64) -> Complex64 {
    let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
    let re = second_partial(f, x, xa, xb, h) + second_partial(f, x, ya, yb, h);
    let im = second_partial(f, x, xa, yb, h) - second_partial(f, x, ya, xb, h);
    0.25 * (re + c(0.0, 1.0) * im)
}

/// `[[d_z dbar_z f, d_z dbar_w f], [d_w dbar_z f, d_w dbar_w f]]`.
pub fn wirtinger_hessian<F: Fn(&Coords) -> Complex64>(f: &F, x: &Coords, h: f64) -> [[Complex64; 2]; 2] {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = mixed(f, x, a, b, h);
        }
    }
    out
}

/// Hermitian metric from a Wirtinger Hessian (diagonal imaginary parts dropped).
pub fn hessian_to_metric(hs: &[[Complex64; 2]; 2]) -> HermitianMetric2 {
    HermitianMetric2 { h_zz: hs[0][0].re, h_zw: hs[0][1], h_ww: hs[1][1].re }
}

/// Real 4x4 Jacobian `J[i][j] = d y_i / d x_j` of a map `C^2 -> C^2`.
pub fn real_jacobian<M: Fn(&Coords) -> Coords>(map: &M, x: &Coords, h: f64) -> [[f64; 4]; 4] {
    let mut jac = [[0.0; 4]; 4];
    for j in 0..4 {
        let yp = map(&shifted(x, j, h));
        let ym = map(&shifted(x, j, -h));
        for a in 0..2 {
            let d = (yp[a] - ym[a]) / (2.0 * h);
            jac[2 * a][j] = d.re;
            jac[2 * a + 1][j] = d.im;
        }
    }
    jac
}

/// Complex Jacobian `J[a][b] = d y_a / d x_b` of a holomorphic map.
pub fn holomorphic_jacobian<M: Fn(&Coords) -> Coords>(map: &M, x: &Coords, h: f64) -> [[Complex64; 2]; 2] {
    let mut jac = [[c(0.0, 0.0); 2]; 2];
    for (a, row) in jac.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = d_dz(&|p: &Coords| map(p)[a], x, b, h);
        }
    }
    jac
}
