use num_complex::Complex64;

use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::bargmann::{bargmann_image_check, hermite_overlap, kernel_norm, reproducing_check, HBarParams};
use crate::error::Result;
use crate::gauss::QuadratureRule;

/// Bargmann transform identities by Gauss–Hermite quadrature.
pub struct BargmannSuite;

pub const REPRODUCING_NODES: usize = 96;
pub const RADIUS: f64 = 1.5;

/// `hbar in {1/2, 1, 2}` and `1 / mu`.
pub fn hbar_grid(mu: f64) -> Vec<HBarParams> {
    let mut v: Vec<f64> = vec![0.5, 1.0, 2.0];
    if !v.contains(&(1.0 / mu)) {
        v.push(1.0 / mu);
    }
    v.into_iter().filter_map(|h| HBarParams::new(h).ok()).collect()
}

/// Random pairs in `|z|, |w| <= 1.5` plus all pairs of eight points on the rim.
pub fn reproducing_pairs(seed: u64, n: usize) -> Vec<(Complex64, Complex64)> {
    let mut r = sampling::rng(seed, 50);
    let mut out: Vec<_> =
        (0..n).map(|_| (sampling::in_disk(&mut r, RADIUS), sampling::in_disk(&mut r, RADIUS))).collect();
    let rim: Vec<Complex64> =
        (0..8).map(|i| Complex64::from_polar(RADIUS, std::f64::consts::TAU * i as f64 / 8.0)).collect();
    for a in &rim {
        for b in &rim {
            out.push((*a, *b));
        }
    }
    out
}

pub fn reproducing_sweep(hbars: &[HBarParams], pairs: &[(Complex64, Complex64)]) -> Result<f64> {
    let rule = QuadratureRule::gauss_hermite(REPRODUCING_NODES)?;
    let mut w = 0.0f64;
    for h in hbars {
        w = w.max(worst(pairs, |(z, v)| reproducing_check(*z, *v, *h, &rule))?);
    }
    Ok(w)
}

pub fn image_sweep(hbars: &[HBarParams], zs: &[Complex64], n_max: u32) -> Result<f64> {
    let rule = QuadratureRule::gauss_hermite(REPRODUCING_NODES)?;
    let mut w = 0.0f64;
    for h in hbars {
        for n in 0..=n_max {
            w = w.max(worst(zs, |z| bargmann_image_check(n, *z, *h, &rule))?);
        }
    }
    Ok(w)
}

impl VerificationSuite for BargmannSuite {
    fn name(&self) -> &'static str {
        "bargmann"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let hb = hbar_grid(ctx.params.mu());
        let mut out = Vec::new();
        let rule64 = QuadratureRule::gauss_hermite(64);

        let norm = rule64
            .as_ref()
            .map(|r| hb.iter().map(|h| (kernel_norm(*h, r) - 1.0).abs()).fold(0.0, f64::max))
            .map_err(Clone::clone);
        out.push(ctx.check_result("kernel-norm", "int B(0, q)^2 dq = 1", norm, 1e-12));

        let rep = reproducing_sweep(&hb, &reproducing_pairs(ctx.seed, ctx.n_points));
        out.push(ctx.check_result("reproducing", "int B(z, q) B(conj w, q) dq = exp(z conj w / hbar)", rep, 1e-9));

        let orth = rule64.as_ref().map_err(Clone::clone).map(|r| {
            let mut w = 0.0f64;
            for h in &hb {
                for n in 0..=10 {
                    for m in 0..=10 {
                        let want = if n == m { 1.0 } else { 0.0 };
                        w = w.max((hermite_overlap(n, m, *h, r) - want).abs());
                    }
                }
            }
            w
        });
        out.push(ctx.check_result("hermite-orthonormality", "<phi_n, phi_m> = delta_nm", orth, 1e-10));

        let mut r = sampling::rng(ctx.seed, 51);
        let zs: Vec<Complex64> = (0..20).map(|_| sampling::in_disk(&mut r, RADIUS)).collect();
        let img = image_sweep(&hb, &zs, 10);
        out.push(ctx.check_result("monomial-images", "B phi_n = (sqrt(mu) z)^n / sqrt(n!)", img, 1e-8));
        out
    }
}
