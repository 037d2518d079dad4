//! Reproducing kernels, Kähler potential, orthonormal basis and the
//! derived normalized / Berezin kernels and diastasis.
//!
//! Every power `(1 - w conj(w2))^(-2k)` is taken on the principal branch.
//! `Re(1 - w conj(w2)) > 0` on the open bidisk, so the branch cut is never
//! crossed. Combinations of several kernel values (normalized kernel,
//! Berezin kernel, diastasis) are formed in log space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::domain::{c, DiskPoint, JacobiPoint, ModelParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub n: u32,
    pub m: u32,
}

impl BasisIndex {
    pub fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }
}

/// Truncation `n <= n_max`, `m <= m_max` of the basis expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationOrder {
    n_max: u32,
    m_max: u32,
}

impl TruncationOrder {
    pub fn new(n_max: u32, m_max: u32) -> Result<Self> {
        if n_max < 1 || m_max < 1 {
            return Err(Error::InvalidArgument(format!(
                "truncation orders must be >= 1, got ({n_max}, {m_max})"
            )));
        }
        Ok(Self { n_max, m_max })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn len(&self) -> usize {
        (self.n_max as usize + 1) * (self.m_max as usize + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Indices ordered by total degree `n + m`, then by `n`.
    pub fn ordered_indices(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.len());
        for total in 0..=(self.n_max + self.m_max) {
            for n in 0..=total.min(self.n_max) {
                let m = total - n;
                if m <= self.m_max {
                    out.push(BasisIndex { n, m });
                }
            }
        }
        out
    }
}

impl Default for TruncationOrder {
    fn default() -> Self {
        Self { n_max: 40, m_max: 40 }
    }
}

/// `exp(mu z conj(z2))`.
pub fn heisenberg_kernel(z: Complex64, z2: Complex64, mu: f64) -> Complex64 {
    (z * z2.conj() * mu).exp()
}

/// `(1 - w conj(w2))^(-2k)`.
pub fn disk_kernel(w: DiskPoint, w2: DiskPoint, k: f64) -> Complex64 {
    (-2.0 * k * (c(1.0, 0.0) - w.value() * w2.value().conj()).ln()).exp()
}

#[inline]
pub(crate) fn cross_f_raw(z: Complex64, w: Complex64, z2: Complex64, w2: Complex64) -> Complex64 {
    let z2c = z2.conj();
    (2.0 * z2c * z + z * z * w2.conj() + z2c * z2c * w) / (2.0 * (c(1.0, 0.0) - w * w2.conj()))
}

/// `F(zeta, conj zeta2) = (2 conj(z2) z + z^2 conj(w2) + conj(z2)^2 w) / (2 (1 - w conj(w2)))`.
pub fn cross_f(p1: &JacobiPoint, p2: &JacobiPoint) -> Complex64 {
    cross_f_raw(p1.z(), p1.w(), p2.z(), p2.w())
}

/// Diagonal value `F(zeta)`, real.
pub(crate) fn f_diag_raw(z: Complex64, w: Complex64) -> f64 {
    (2.0 * z.norm_sqr() + (z * z * w.conj()).re * 2.0) / (2.0 * (1.0 - w.norm_sqr()))
}

#[inline]
pub(crate) fn log_kernel_raw(
    z: Complex64,
    w: Complex64,
    z2: Complex64,
    w2: Complex64,
    k: f64,
    mu: f64,
) -> Complex64 {
    -2.0 * k * (c(1.0, 0.0) - w * w2.conj()).ln() + mu * cross_f_raw(z, w, z2, w2)
}

/// Principal log of the Jacobi kernel `K(zeta, conj zeta2)`.
pub fn log_jacobi_kernel(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> Complex64 {
    log_kernel_raw(p1.z(), p1.w(), p2.z(), p2.w(), params.k(), params.mu())
}

/// `K(zeta, conj zeta2) = (1 - w conj(w2))^(-2k) exp(mu F(zeta, conj zeta2))`.
pub fn jacobi_kernel(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> Complex64 {
    log_jacobi_kernel(p1, p2, params).exp()
}

#[inline]
pub(crate) fn potential_raw(z: Complex64, w: Complex64, k: f64, mu: f64) -> f64 {
    mu * f_diag_raw(z, w) - 2.0 * k * (1.0 - w.norm_sqr()).ln()
}

/// Kähler potential `f = ln K(zeta, conj zeta)`.
pub fn kahler_potential(pt: &JacobiPoint, params: ModelParams) -> f64 {
    potential_raw(pt.z(), pt.w(), params.k(), params.mu())
}

/// `K(zeta, conj zeta2) / sqrt(K(zeta) K(zeta2))`, evaluated in log space.
pub fn normalized_kernel(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> Complex64 {
    let l12 = log_jacobi_kernel(p1, p2, params);
    let f1 = kahler_potential(p1, params);
    let f2 = kahler_potential(p2, params);
    (l12 - 0.5 * (f1 + f2)).exp()
}

/// `|normalized_kernel|^2`, in `[0, 1]`.
pub fn berezin_kernel(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> f64 {
    (-diastasis(p1, p2, params)).exp().min(1.0)
}

/// Calabi diastasis `-ln b(zeta, zeta2)`.
pub fn diastasis(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> f64 {
    let l12 = log_jacobi_kernel(p1, p2, params);
    let d = kahler_potential(p1, params) + kahler_potential(p2, params) - 2.0 * l12.re;
    d.max(0.0)
}

/// Closed-form diastasis, written so that it vanishes exactly on the diagonal:
///
/// ```text
/// D = 2k ln(1 + |w1 - w2|^2 / (P1 P2))
///   + mu [ |d|^2 (1 - |w1 w2|^2) - Re(conj(d)^2 (w1 + w2 - w1 w2 (conj w1 + conj w2))) ] / |1 - w1 conj w2|^2
/// ```
///
/// with `d = eta1 - eta2`. This is `|1 - w1 conj w2|^2 = P1 P2 + |w1 - w2|^2` for the
/// disk part and the Heisenberg part rewritten in the coordinates `eta`.
pub fn diastasis_closed_form(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> f64 {
    let (w1, w2) = (p1.w(), p2.w());
    let disk = 2.0 * params.k() * ((w1 - w2).norm_sqr() / (p1.p() * p2.p())).ln_1p();
    let d = crate::domain::eta_of(p1) - crate::domain::eta_of(p2);
    let s = w1 + w2 - w1 * w2 * (w1.conj() + w2.conj());
    let num = d.norm_sqr() * (1.0 - (w1 * w2).norm_sqr()) - (d.conj() * d.conj() * s).re;
    let heis = params.mu() * num / (c(1.0, 0.0) - w1 * w2.conj()).norm_sqr();
    (disk + heis).max(0.0)
}

/// `P_n(z, w) = n! sum_{p <= n/2} (w/2)^p z^(n-2p) / (p! (n-2p)!)`, summed directly.
pub fn pn_polynomial(n: u32, z: Complex64, w: Complex64) -> Complex64 {
    // coefficient n! / (p! (n-2p)! 2^p), built incrementally in p
    let mut coef = 1.0f64;
    let mut sum = c(0.0, 0.0);
    let nn = n as i64;
    for p in 0..=(n / 2) {
        let pp = p as i64;
        sum += coef * w.powu(p) * z.powu(n - 2 * p);
        let a = (nn - 2 * pp) as f64;
        coef *= a * (a - 1.0) / (2.0 * (pp as f64 + 1.0));
    }
    sum
}

/// `P_n(z, w) / sqrt(n!)` for `n = 0..=n_max` through the three-term recurrence
/// `Q_{n+1} = (z Q_n + sqrt(n) w Q_{n-1}) / sqrt(n+1)`.
pub fn pn_normalized_table(n_max: u32, z: Complex64, w: Complex64) -> Vec<Complex64> {
    let mut q = Vec::with_capacity(n_max as usize + 1);
    q.push(c(1.0, 0.0));
    if n_max >= 1 {
        q.push(z);
    }
    for n in 1..n_max as usize {
        let next = (z * q[n] + (n as f64).sqrt() * w * q[n - 1]) / ((n + 1) as f64).sqrt();
        q.push(next);
    }
    q
}

/// `sqrt(Gamma(m + 2k') / (m! Gamma(2k')))` via log-gamma differences.
pub fn su11_coefficient(m: u32, two_k_prime: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let m = m as f64;
    (0.5 * (ln_gamma(m + two_k_prime) - ln_gamma(m + 1.0) - ln_gamma(two_k_prime))).exp()
}

/// `sqrt(Gamma(m+2k)/(m! Gamma(2k))) w^m` for `m = 0..=m_max`.
pub fn su11_table(m_max: u32, w: Complex64, two_k: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m_max as usize + 1);
    let mut wp = c(1.0, 0.0);
    for m in 0..=m_max {
        out.push(wp * su11_coefficient(m, two_k));
        wp *= w;
    }
    out
}

/// Orthonormal basis function
/// `f_{n,m}(zeta) = sqrt(Gamma(m+2k')/(m! Gamma(2k'))) w^m P_n(sqrt(mu) z, w) / sqrt(n!)`
/// with `k = k' + 1/4`.
pub fn basis_function(idx: BasisIndex, pt: &JacobiPoint, params: ModelParams) -> Result<Complex64> {
    let two_kp = params.two_k_prime()? as f64;
    let q = pn_normalized_table(idx.n, params.mu().sqrt() * pt.z(), pt.w());
    Ok(q[idx.n as usize] * su11_coefficient(idx.m, two_kp) * pt.w().powu(idx.m))
}

/// All basis values up to `trunc`, in [`TruncationOrder::ordered_indices`] order.
pub fn basis_values(pt: &JacobiPoint, params: ModelParams, trunc: TruncationOrder) -> Result<Vec<Complex64>> {
    basis_values_raw(pt.z(), pt.w(), params, trunc)
}

pub(crate) fn basis_values_raw(
    z: Complex64,
    w: Complex64,
    params: ModelParams,
    trunc: TruncationOrder,
) -> Result<Vec<Complex64>> {
    let two_kp = params.two_k_prime()? as f64;
    let q = pn_normalized_table(trunc.n_max(), params.mu().sqrt() * z, w);
    let s = su11_table(trunc.m_max(), w, two_kp);
    Ok(trunc
        .ordered_indices()
        .into_iter()
        .map(|i| q[i.n as usize] * s[i.m as usize])
        .collect())
}

/// Truncated expansion `sum_{n<=n_max, m<=m_max} f_{n,m}(zeta) conj(f_{n,m}(zeta2))`.
pub fn kernel_series(
    p1: &JacobiPoint,
    p2: &JacobiPoint,
    params: ModelParams,
    trunc: TruncationOrder,
) -> Result<Complex64> {
    let two_kp = params.two_k_prime()? as f64;
    let sm = params.mu().sqrt();
    let q1 = pn_normalized_table(trunc.n_max(), sm * p1.z(), p1.w());
    let q2 = pn_normalized_table(trunc.n_max(), sm * p2.z(), p2.w());
    let s1 = su11_table(trunc.m_max(), p1.w(), two_kp);
    let s2 = su11_table(trunc.m_max(), p2.w(), two_kp);
    let mut total = c(0.0, 0.0);
    for n in 0..=trunc.n_max() as usize {
        let mut row = c(0.0, 0.0);
        for m in 0..=trunc.m_max() as usize {
            row += (q1[n] * s1[m]) * (q2[n] * s2[m]).conj();
        }
        total += row;
    }
    Ok(total)
}

/// `|series - K| / |K|` at one pair of points.
pub fn series_relative_error(
    p1: &JacobiPoint,
    p2: &JacobiPoint,
    params: ModelParams,
    trunc: TruncationOrder,
) -> Result<f64> {
    let exact = jacobi_kernel(p1, p2, params);
    Ok((kernel_series(p1, p2, params, trunc)? - exact).norm() / exact.norm())
}
