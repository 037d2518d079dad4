//! Bargmann transform kernel and Hermite states, checked by Gauss–Hermite quadrature.
//!
//! Nodes are generated for the weight `exp(-u^2)` and used with `q = u sqrt(hbar)`.
//! Both the kernel and the Hermite functions carry a factor
//! `exp(-q^2 / (2 hbar)) = exp(-u^2 / 2)`; it is divided out analytically so the
//! quadrature only sees the entire residue.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::c;
use crate::error::{Error, Result};
use crate::gauss::QuadratureRule;
use crate::kernels::heisenberg_kernel;

pub const MIN_REPRODUCING_NODES: usize = 32;
pub const MAX_IMAGE_ORDER: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HBarParams {
    hbar: f64,
}

impl HBarParams {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParams(format!("hbar = {hbar} must be positive")));
        }
        Ok(Self { hbar })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `mu = 1 / hbar`.
    pub fn mu(&self) -> f64 {
        1.0 / self.hbar
    }

    fn prefactor(&self) -> f64 {
        (std::f64::consts::PI * self.hbar).powf(-0.25)
    }
}

/// `B(z, q) = (pi hbar)^(-1/4) exp((sqrt(2) q z - (z^2 + q^2) / 2) / hbar)`.
pub fn bargmann_kernel(z: Complex64, q: f64, p: HBarParams) -> Complex64 {
    let s2 = std::f64::consts::SQRT_2;
    p.prefactor() * ((s2 * q * z - 0.5 * (z * z + q * q)) / p.hbar).exp()
}

/// `B(z, u sqrt(hbar)) exp(u^2 / 2)`.
fn kernel_residue(z: Complex64, u: f64, p: HBarParams) -> Complex64 {
    let s2 = std::f64::consts::SQRT_2;
    p.prefactor() * (s2 * u * z / p.hbar.sqrt() - 0.5 * z * z / p.hbar).exp()
}

/// `phi_0 .. phi_n` at `u sqrt(hbar)`, with `exp(-u^2 / 2)` removed.
fn hermite_residues(n: u32, u: f64, p: HBarParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(p.prefactor());
    if n == 0 {
        return out;
    }
    out.push(2f64.sqrt() * u * out[0]);
    for j in 1..n as usize {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * u * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// Normalised Hermite function `phi_n(q)` via
/// `phi_{n+1} = sqrt(2/(n+1)) (q / sqrt(hbar)) phi_n - sqrt(n/(n+1)) phi_{n-1}`,
/// `phi_0 = (pi hbar)^(-1/4) exp(-q^2 / (2 hbar))`.
pub fn hermite_state(n: u32, q: f64, p: HBarParams) -> f64 {
    let u = q / p.hbar.sqrt();
    hermite_residues(n, u, p)[n as usize] * (-0.5 * u * u).exp()
}

/// `int f(q) g(q) dq` for integrands written as residues `f(u sqrt(hbar)) e^{u^2/2}`.
fn integrate<F: Fn(f64) -> Complex64>(rule: &QuadratureRule, p: HBarParams, f: F) -> Complex64 {
    let s: Complex64 = rule.iter().map(|(u, w)| f(u) * w).sum();
    s * p.hbar.sqrt()
}

/// `int B(0, q)^2 dq`, which equals 1.
pub fn kernel_norm(p: HBarParams, rule: &QuadratureRule) -> f64 {
    integrate(rule, p, |u| kernel_residue(c(0.0, 0.0), u, p).powi(2)).re
}

/// `| int B(z, q) B(conj w, q) dq - exp(z conj(w) / hbar) |`.
pub fn reproducing_check(z: Complex64, w: Complex64, p: HBarParams, rule: &QuadratureRule) -> Result<f64> {
    if rule.len() < MIN_REPRODUCING_NODES {
        return Err(Error::InvalidArgument(format!(
            "reproducing check needs at least {MIN_REPRODUCING_NODES} nodes, got {}",
            rule.len()
        )));
    }
    let wc = w.conj();
    let quad = integrate(rule, p, |u| kernel_residue(z, u, p) * kernel_residue(wc, u, p));
    Ok((quad - heisenberg_kernel(z, w, p.mu())).norm())
}

/// `<phi_n, phi_m>` by quadrature.
pub fn hermite_overlap(n: u32, m: u32, p: HBarParams, rule: &QuadratureRule) -> f64 {
    let top = n.max(m);
    integrate(rule, p, |u| {
        let h = hermite_residues(top, u, p);
        c(h[n as usize] * h[m as usize], 0.0)
    })
    .re
}

/// `| int B(z, q) phi_n(q) dq - (sqrt(mu) z)^n / sqrt(n!) |`.
pub fn bargmann_image(n: u32, z: Complex64, p: HBarParams, rule: &QuadratureRule) -> Result<Complex64> {
    if n > MAX_IMAGE_ORDER {
        return Err(Error::InvalidArgument(format!("image order {n} exceeds {MAX_IMAGE_ORDER}")));
    }
    Ok(integrate(rule, p, |u| kernel_residue(z, u, p) * hermite_residues(n, u, p)[n as usize]))
}

/// `(sqrt(mu) z)^n / sqrt(n!)`.
pub fn monomial_image(n: u32, z: Complex64, p: HBarParams) -> Complex64 {
    let lf = statrs::function::gamma::ln_gamma(n as f64 + 1.0);
    (z * p.mu().sqrt()).powu(n) * (-0.5 * lf).exp()
}

pub fn bargmann_image_check(n: u32, z: Complex64, p: HBarParams, rule: &QuadratureRule) -> Result<f64> {
    Ok((bargmann_image(n, z, p, rule)? - monomial_image(n, z, p)).norm())
}
