//! Invariant measure, scalar-product weight and Monte Carlo inner products.
//!
//! The exact law of the normalised measure `rho dnu` is
//!
//! * `s = |w|^2 ~ Beta(1, 2k - 3/2)` with a uniform angle, which is the
//!   `w`-marginal once `z` is integrated out;
//! * `z | w` Gaussian with covariance `[[1-u, -v], [-v, 1+u]] / (2 mu)`
//!   (`w = u + iv`), the exact conditional of `exp(-mu F)`.
//!
//! Samples come from an equal mixture of that law and a copy with a wider
//! `z`-Gaussian, which tames the variance of high-order basis products. The
//! importance weight `rho (mu / P^3) / q` is recomputed from the independent
//! formulas for `rho` and `q`; its mean is 1 exactly when the normalisation
//! constant `(4k - 3) / (2 pi^2)` is right, and it never exceeds 2.
//!
//! Work is split into fixed-size chunks, each with its own ChaCha stream
//! keyed by `(seed, chunk index)`, and merged in chunk order. Results are
//! therefore bit-for-bit identical for any thread count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{c, JacobiPoint, ModelParams};
use crate::error::{Error, Result};
use crate::gauss::QuadratureRule;
use crate::group::{action_jacobian, det4, jacobi_action, JacobiGroupElement};
use crate::kernels::{
    basis_values_raw, f_diag_raw, log_kernel_raw, su11_coefficient, BasisIndex, TruncationOrder,
};

pub const MIN_SAMPLES: usize = 1000;
const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    n_samples: usize,
    seed: u64,
}

impl McConfig {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        if n_samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!("n_samples = {n_samples} below {MIN_SAMPLES}")));
        }
        Ok(Self { n_samples, seed })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// JSON `{re, im, std_error, n_samples, seed}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub re: f64,
    pub im: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    pub fn value(&self) -> Complex64 {
        c(self.re, self.im)
    }

    /// `|value - target|` in units of the standard error.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let d = (self.value() - target).norm();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// `mu / (1 - |w|^2)^3`, against `dRe z dIm z dRe w dIm w`.
pub fn invariant_measure_density(pt: &JacobiPoint, mu: f64) -> f64 {
    mu / pt.p().powi(3)
}

/// `Lambda (1 - |w|^2)^(2k) exp(-mu F(zeta, conj zeta))`.
pub fn weight_rho(pt: &JacobiPoint, params: ModelParams) -> f64 {
    params.lambda_norm() * pt.p().powf(2.0 * params.k()) * (-params.mu() * f_diag_raw(pt.z(), pt.w())).exp()
}

/// `|rho K / Lambda - 1|`, computed through the kernel rather than the potential.
pub fn rho_kernel_identity_deviation(pt: &JacobiPoint, params: ModelParams) -> f64 {
    let lk = log_kernel_raw(pt.z(), pt.w(), pt.z(), pt.w(), params.k(), params.mu());
    (weight_rho(pt, params) * lk.re.exp() / params.lambda_norm() - 1.0).abs()
}

/// Relative change of `density * |det J|` under the point action.
pub fn measure_invariance_deviation(
    e: &JacobiGroupElement,
    pt: &JacobiPoint,
    params: ModelParams,
    h: f64,
) -> Result<f64> {
    let (q, _) = jacobi_action(e, pt, params)?;
    let jac = det4(&action_jacobian(e, pt, h)).abs();
    let mu = params.mu();
    let src = invariant_measure_density(pt, mu);
    Ok((invariant_measure_density(&q, mu) * jac - src).abs() / src)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledPoint {
    pub point: JacobiPoint,
    /// Proposal density `q` against `d^4 x`.
    pub density: f64,
    /// `rho (mu / P^3) / q`.
    pub weight: f64,
}

fn require_normalizable(params: ModelParams) -> Result<()> {
    if params.is_normalizable() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("k = {} must exceed 3/4 for the weighted measure", params.k())))
    }
}

/// One component of the proposal: `|w|^2 ~ Beta(1, b)` with a uniform angle,
/// and `z | w` Gaussian with covariance `[[1-u, -v], [-v, 1+u]] / (2 m)`.
/// With `b = 2k - 3/2`, `m = mu` this is exactly `rho dnu`.
#[derive(Debug, Clone, Copy)]
struct Proposal {
    b: f64,
    m: f64,
}

impl Proposal {
    fn density(&self, pt: &JacobiPoint) -> f64 {
        let p = pt.p();
        let pi = std::f64::consts::PI;
        let radial = self.b * p.powf(self.b - 1.0) / pi;
        let gauss = self.m / p.sqrt() / pi * (-self.m * f_diag_raw(pt.z(), pt.w())).exp();
        radial * gauss
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Complex64, Complex64) {
        let u: f64 = rng.random();
        let s = 1.0 - (1.0 - u).powf(1.0 / self.b);
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        let w = Complex64::from_polar(s.sqrt(), theta);
        let (g1, g2): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        // Cholesky of [[1-u, -v], [-v, 1+u]] / (2 m)
        let scale = (0.5 / self.m).sqrt();
        let a11 = (1.0 - w.re).max(0.0).sqrt();
        let (x, y) = if a11 > 0.0 {
            let l21 = -w.im / a11;
            let l22 = ((1.0 + w.re) - l21 * l21).max(0.0).sqrt();
            (a11 * g1, l21 * g1 + l22 * g2)
        } else {
            (0.0, (1.0 + w.re).sqrt() * g2)
        };
        (c(x * scale, y * scale), w)
    }
}

/// Width factor of the second mixture component: `z | w` drawn with `mu / 2`.
const WIDE_Z: f64 = 0.5;

/// Defensive mixture: half exact `rho dnu`, half the same `w` law with a
/// `z`-Gaussian of twice the variance. Weights stay below 2, while the
/// high-order basis products, whose mass sits at large `|z|`, get several
/// times smaller variance than under `rho dnu` alone.
fn proposals(params: ModelParams) -> [Proposal; 2] {
    let b = 2.0 * params.k() - 1.5;
    [Proposal { b, m: params.mu() }, Proposal { b, m: WIDE_Z * params.mu() }]
}

fn mixture_density(props: &[Proposal; 2], pt: &JacobiPoint) -> f64 {
    0.5 * (props[0].density(pt) + props[1].density(pt))
}

/// One draw from the mixture proposal together with its importance weight
/// `rho (mu / P^3) / q`. Draws landing within the boundary guard are redrawn.
pub fn sample_point<R: Rng + ?Sized>(params: ModelParams, rng: &mut R) -> Result<SampledPoint> {
    require_normalizable(params)?;
    Ok(sample_unchecked(params, &proposals(params), rng))
}

fn sample_unchecked<R: Rng + ?Sized>(params: ModelParams, props: &[Proposal; 2], rng: &mut R) -> SampledPoint {
    loop {
        let which = usize::from(rng.random::<bool>());
        let (z, w) = props[which].draw(rng);
        let Ok(point) = JacobiPoint::new(z, w) else {
            continue;
        };
        let density = mixture_density(props, &point);
        if !(density > 0.0 && density.is_finite()) {
            continue;
        }
        let weight = weight_rho(&point, params) * invariant_measure_density(&point, params.mu()) / density;
        return SampledPoint { point, density, weight };
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Running sums for a vector of complex integrands.
#[derive(Debug, Clone)]
struct Acc {
    sum: Vec<Complex64>,
    sum_sq: Vec<f64>,
    n: usize,
}

impl Acc {
    fn new(len: usize) -> Self {
        Self { sum: vec![c(0.0, 0.0); len], sum_sq: vec![0.0; len], n: 0 }
    }

    fn merge(mut self, other: &Self) -> Self {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        self.n += other.n;
        self
    }

    fn estimates(&self, cfg: &McConfig) -> Vec<McEstimate> {
        let n = self.n as f64;
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(s, q)| {
                let mean = s / n;
                let var = (q / n - mean.norm_sqr()).max(0.0) * n / (n - 1.0);
                McEstimate { re: mean.re, im: mean.im, std_error: (var / n).sqrt(), n_samples: self.n, seed: cfg.seed }
            })
            .collect()
    }
}

/// Monte Carlo mean of a vector-valued integrand against `rho dnu`.
/// `integrand(sample, out)` writes `len` values, already multiplied by any weight.
pub fn mc_integrate<F>(params: ModelParams, cfg: &McConfig, len: usize, integrand: F) -> Result<Vec<McEstimate>>
where
    F: Fn(&SampledPoint, &mut [Complex64]) + Sync,
{
    require_normalizable(params)?;
    let n_chunks = cfg.n_samples.div_ceil(CHUNK);
    let parts: Vec<Acc> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let count = CHUNK.min(cfg.n_samples - ci * CHUNK);
            let mut rng = chunk_rng(cfg.seed, ci);
            let mut acc = Acc::new(len);
            let props = proposals(params);
            let mut buf = vec![c(0.0, 0.0); len];
            for _ in 0..count {
                let s = sample_unchecked(params, &props, &mut rng);
                integrand(&s, &mut buf);
                for ((a, q), v) in acc.sum.iter_mut().zip(acc.sum_sq.iter_mut()).zip(&buf) {
                    *a += v;
                    *q += v.norm_sqr();
                }
            }
            acc.n = count;
            acc
        })
        .collect();
    let total = parts.iter().fold(Acc::new(len), |a, b| a.merge(b));
    Ok(total.estimates(cfg))
}

/// Mean importance weight; 1 when the normalisation constant is right.
pub fn mean_weight(params: ModelParams, cfg: &McConfig) -> Result<McEstimate> {
    Ok(mc_integrate(params, cfg, 1, |s, out| out[0] = c(s.weight, 0.0))?[0])
}

fn smallest_trunc(indices: &[BasisIndex]) -> Result<TruncationOrder> {
    let n = indices.iter().map(|i| i.n).max().unwrap_or(0).max(1);
    let m = indices.iter().map(|i| i.m).max().unwrap_or(0).max(1);
    TruncationOrder::new(n, m)
}

fn positions(indices: &[BasisIndex], trunc: TruncationOrder) -> Vec<usize> {
    let order = trunc.ordered_indices();
    indices.iter().map(|i| order.iter().position(|o| o == i).unwrap_or(0)).collect()
}

/// `int conj(f_{i1}) f_{i2} rho dnu`.
pub fn inner_product_mc(i1: BasisIndex, i2: BasisIndex, params: ModelParams, cfg: &McConfig) -> Result<McEstimate> {
    Ok(gram_matrix_mc(&[i1, i2], params, cfg)?[0][1])
}

/// All inner products among `indices` from one sample stream; entry `[a][b]`
/// estimates `<f_a, f_b>`.
pub fn gram_matrix_mc(indices: &[BasisIndex], params: ModelParams, cfg: &McConfig) -> Result<Vec<Vec<McEstimate>>> {
    params.two_k_prime()?;
    let trunc = smallest_trunc(indices)?;
    let pos = positions(indices, trunc);
    let d = indices.len();
    let flat = mc_integrate(params, cfg, d * d, |s, out| {
        let vals = basis_values_raw(s.point.z(), s.point.w(), params, trunc).unwrap_or_default();
        for a in 0..d {
            let fa = vals[pos[a]].conj() * s.weight;
            for b in 0..d {
                out[a * d + b] = fa * vals[pos[b]];
            }
        }
    })?;
    Ok(flat.chunks(d).map(|r| r.to_vec()).collect())
}

/// Indices with `n <= n_max`, `m <= m_max`, in the basis order.
pub fn index_block(n_max: u32, m_max: u32) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in 0..=m_max {
            out.push(BasisIndex::new(n, m));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalReport {
    pub estimate: McEstimate,
    pub exact_re: f64,
    pub exact_im: f64,
    pub z_score: f64,
}

/// Resolution of the identity against finite combinations
/// `psi = sum c_i f_i`: Monte Carlo of `Lambda int conj(psi1) psi2 / K dnu`
/// against the exact `sum conj(c1_i) c2_i`.
pub fn parseval_check(
    c1: &[(BasisIndex, Complex64)],
    c2: &[(BasisIndex, Complex64)],
    params: ModelParams,
    cfg: &McConfig,
) -> Result<ParsevalReport> {
    params.two_k_prime()?;
    let all: Vec<BasisIndex> = c1.iter().chain(c2).map(|(i, _)| *i).collect();
    let trunc = smallest_trunc(&all)?;
    let p1 = positions(&c1.iter().map(|x| x.0).collect::<Vec<_>>(), trunc);
    let p2 = positions(&c2.iter().map(|x| x.0).collect::<Vec<_>>(), trunc);
    let (k, mu, lam) = (params.k(), params.mu(), params.lambda_norm());
    let est = mc_integrate(params, cfg, 1, |s, out| {
        let (z, w) = (s.point.z(), s.point.w());
        let vals = basis_values_raw(z, w, params, trunc).unwrap_or_default();
        let psi1: Complex64 = c1.iter().zip(&p1).map(|((_, a), &p)| a * vals[p]).sum();
        let psi2: Complex64 = c2.iter().zip(&p2).map(|((_, a), &p)| a * vals[p]).sum();
        let kern = log_kernel_raw(z, w, z, w, k, mu).re.exp();
        out[0] = psi1.conj() * psi2 * (lam / kern * mu / s.point.p().powi(3) / s.density);
    })?[0];
    let mut exact = c(0.0, 0.0);
    for (i, a) in c1 {
        for (j, b) in c2 {
            if i == j {
                exact += a.conj() * b;
            }
        }
    }
    Ok(ParsevalReport { estimate: est, exact_re: exact.re, exact_im: exact.im, z_score: est.z_score(exact) })
}

/// `| int_D |c_m w^m|^2 ((2k'-1)/pi) (1-|w|^2)^(2k'-2) d^2w - 1 |` by tensor
/// Gauss–Legendre in polar coordinates. Needs `2k' >= 2`.
pub fn disk_marginal_check(m: u32, two_k_prime: u32, n_radial: usize, n_angle: usize) -> Result<f64> {
    if two_k_prime < 2 {
        return Err(Error::InvalidArgument("disk marginal needs 2k' >= 2".into()));
    }
    let tk = two_k_prime as f64;
    let radial = QuadratureRule::gauss_legendre(n_radial, 0.0, 1.0)?;
    let angular = QuadratureRule::gauss_legendre(n_angle, 0.0, std::f64::consts::TAU)?;
    let coef = su11_coefficient(m, tk).powi(2);
    let norm = (tk - 1.0) / std::f64::consts::PI;
    let mut total = 0.0;
    for (r, wr) in radial.iter() {
        for (t, wt) in angular.iter() {
            let w = Complex64::from_polar(r, t);
            let f2 = coef * w.powu(m).norm_sqr();
            total += wr * wt * r * f2 * norm * (1.0 - r * r).powf(tk - 2.0);
        }
    }
    Ok((total - 1.0).abs())
}
