//! Finite truncations of the embedding into projective space by the
//! orthonormal basis, and the distances built from it.
//!
//! Inner products are antilinear in the first argument. Angles are computed
//! as `atan2(sin, cos)` from an orthogonal decomposition rather than as
//! `acos(cos)`, which loses half the digits near zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{c, finite, JacobiPoint, ModelParams};
use crate::error::{Error, Result};
use crate::geodesics::{curve_length, GeodesicPath};
use crate::geometry::metric;
use crate::kernels::{
    diastasis_closed_form, kahler_potential, normalized_kernel, pn_normalized_table, su11_table, basis_values, TruncationOrder,
};
use crate::stencil::{hessian_to_metric, wirtinger_hessian, Coords, WirtingerStencil};

/// Homogeneous coordinates; JSON is an array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ProjectiveVector {
    components: Vec<Complex64>,
}

impl TryFrom<Vec<[f64; 2]>> for ProjectiveVector {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(v.into_iter().map(|[a, b]| c(a, b)).collect())
    }
}

impl From<ProjectiveVector> for Vec<[f64; 2]> {
    fn from(v: ProjectiveVector) -> Self {
        v.components.into_iter().map(|z| [z.re, z.im]).collect()
    }
}

impl ProjectiveVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.iter().any(|z| !finite(*z)) {
            return Err(Error::NonFinite);
        }
        if components.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::InvalidArgument("projective vector must be nonzero".into()));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, s: Complex64) -> Result<Self> {
        Self::new(self.components.iter().map(|z| z * s).collect())
    }

    /// `<self, other> = sum conj(self_i) other_i`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        Ok(self.components.iter().zip(&other.components).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Basis values `f_{n,m}(zeta)` ordered by `n + m`, then `n`.
pub fn embed(pt: &JacobiPoint, params: ModelParams, trunc: TruncationOrder) -> Result<ProjectiveVector> {
    ProjectiveVector::new(basis_values(pt, params, trunc)?)
}

/// `sum |f_{n,m}|^2`; the double sum factorises into the `n` and `m` sums.
pub(crate) fn embed_norm_sqr_raw(z: Complex64, w: Complex64, params: ModelParams, trunc: TruncationOrder) -> Result<f64> {
    let two_kp = params.two_k_prime()? as f64;
    let q: f64 = pn_normalized_table(trunc.n_max(), params.mu().sqrt() * z, w).iter().map(|v| v.norm_sqr()).sum();
    let s: f64 = su11_table(trunc.m_max(), w, two_kp).iter().map(|v| v.norm_sqr()).sum();
    Ok(q * s)
}

/// `1 - sum |f|^2 / K(zeta, conj zeta)`: relative tail of the truncated norm.
pub fn embedding_tail(pt: &JacobiPoint, params: ModelParams, trunc: TruncationOrder) -> Result<f64> {
    let n2 = embed_norm_sqr_raw(pt.z(), pt.w(), params, trunc)?;
    Ok(1.0 - (n2.ln() - kahler_potential(pt, params)).exp())
}

/// `(cos, sin)` of the angle between the complex lines through `u` and `v`.
fn line_angle_parts(u: &[Complex64], v: &[Complex64]) -> (f64, f64) {
    let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>() / (nu * nv);
    // component of v/|v| orthogonal to u
    let perp: f64 = u.iter().zip(v).map(|(a, b)| (b / nv - ip * (a / nu)).norm_sqr()).sum::<f64>().sqrt();
    (ip.norm(), perp)
}

/// Elliptic Cayley distance `acos(|<v1, v2>| / (|v1| |v2|))`, in `[0, pi/2]`.
pub fn cayley_distance(v1: &ProjectiveVector, v2: &ProjectiveVector) -> Result<f64> {
    if v1.len() != v2.len() {
        return Err(Error::DimensionMismatch { left: v1.len(), right: v2.len() });
    }
    let (cs, sn) = line_angle_parts(v1.components(), v2.components());
    Ok(sn.atan2(cs).clamp(0.0, std::f64::consts::FRAC_PI_2))
}

/// `acos |normalized_kernel(zeta1, zeta2)|`, from the diastasis:
/// `cos^2 = exp(-D)`, `sin^2 = -expm1(-D)`. Uses the cancellation-free closed
/// form of `D`, so nearby points keep full relative accuracy.
pub fn cs_angle(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> f64 {
    let d = diastasis_closed_form(p1, p2, params);
    let cs = (-0.5 * d).exp();
    let sn = (-(-d).exp_m1()).max(0.0).sqrt();
    sn.atan2(cs)
}

/// `|kappa(zeta1, zeta2) - <e2, e1> / (|e1| |e2|)|` with truncated embeddings.
pub fn cauchy_check(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams, trunc: TruncationOrder) -> Result<f64> {
    let e1 = embed(p1, params, trunc)?;
    let e2 = embed(p2, params, trunc)?;
    let ip = e2.inner(&e1)? / (e1.norm_sqr() * e2.norm_sqr()).sqrt();
    Ok((normalized_kernel(p1, p2, params) - ip).norm())
}

/// `|cs_angle - cayley_distance(embed, embed)|`.
pub fn angle_cayley_deviation(
    p1: &JacobiPoint,
    p2: &JacobiPoint,
    params: ModelParams,
    trunc: TruncationOrder,
) -> Result<f64> {
    let d = cayley_distance(&embed(p1, params, trunc)?, &embed(p2, params, trunc)?)?;
    Ok((d - cs_angle(p1, p2, params)).abs())
}

/// Largest coefficient difference between the closed-form metric and the
/// Wirtinger Hessian of `ln sum |f_{n,m}|^2`.
pub fn fubini_study_pullback_check(
    pt: &JacobiPoint,
    params: ModelParams,
    trunc: TruncationOrder,
    stencil: WirtingerStencil,
) -> Result<f64> {
    params.two_k_prime()?;
    let h = stencil.step_at(pt.w())?;
    let f = |x: &Coords| c(embed_norm_sqr_raw(x[0], x[1], params, trunc).map(f64::ln).unwrap_or(f64::NAN), 0.0);
    let fs = hessian_to_metric(&wirtinger_hessian(&f, &pt.coords(), h));
    Ok(fs.max_abs_diff(&metric(pt, params)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub length: f64,
    pub angle: f64,
    pub holds: bool,
}

/// Any admissible curve length bounds the distance from above, and the
/// distance dominates the coherent-state angle: `length >= angle`.
pub fn distance_angle_inequality_check(
    p1: &JacobiPoint,
    p2: &JacobiPoint,
    params: ModelParams,
    path: &GeodesicPath,
) -> Result<InequalityReport> {
    let dev = |a: &JacobiPoint, b: &JacobiPoint| (a.z() - b.z()).norm().max((a.w() - b.w()).norm());
    let d = dev(&path.first().pos, p1).max(dev(&path.last().pos, p2));
    if d > 1e-6 {
        return Err(Error::EndpointMismatch { deviation: d });
    }
    let length = if path.len() < 2 { 0.0 } else { curve_length(path, params)? };
    let angle = cs_angle(p1, p2, params);
    Ok(InequalityReport { length, angle, holds: length >= angle - 1e-9 })
}
