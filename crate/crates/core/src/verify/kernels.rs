use num_complex::Complex64;

use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::domain::{DiskPoint, JacobiPoint, ModelParams};
use crate::error::Result;
use crate::kernels::{
    berezin_kernel, diastasis, diastasis_closed_form, disk_kernel, heisenberg_kernel, jacobi_kernel,
    kahler_potential, log_jacobi_kernel, series_relative_error, TruncationOrder,
};

/// Kernel symmetries, factorisation, diastasis routes and the series expansion.
pub struct KernelsSuite;

pub const SERIES_TOL: f64 = 1e-8;

/// Parameter sets of the series sweep: `2k' in 1..=4`, `mu in {1/2, 1, 2}`.
pub fn series_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for two_kp in 1..=4 {
        for mu in [0.5, 1.0, 2.0] {
            out.extend(ModelParams::unnormalized(0.5 * two_kp as f64 + 0.25, mu));
        }
    }
    out
}

/// Worst relative series error over `pairs` for each parameter set.
pub fn series_sweep(
    grid: &[ModelParams],
    pairs: &[(JacobiPoint, JacobiPoint)],
    trunc: TruncationOrder,
) -> Result<f64> {
    let mut w = 0.0f64;
    for p in grid {
        w = w.max(worst(pairs, |(a, b)| series_relative_error(a, b, *p, trunc))?);
    }
    Ok(w)
}

impl VerificationSuite for KernelsSuite {
    fn name(&self) -> &'static str {
        "kernels"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let p = ctx.params;
        let pairs = sampling::pairs(ctx.seed, 10, ctx.n_points, 2.0, 0.9);
        let pts = sampling::points(ctx.seed, 11, ctx.n_points, 2.0, 0.9);
        let mut out = Vec::new();

        let herm = worst(&pairs, |(a, b)| {
            let l12 = log_jacobi_kernel(a, b, p);
            let l21 = log_jacobi_kernel(b, a, p);
            Ok(((l21.conj() - l12).exp() - 1.0).norm())
        });
        out.push(ctx.check_result("hermitian-symmetry", "K(b, conj a) = conj K(a, conj b)", herm, 1e-12));

        let pos = worst(&pts, |a| {
            let v = jacobi_kernel(a, a, p);
            Ok(if v.re > 0.0 { v.im.abs() / v.re } else { f64::INFINITY })
        });
        out.push(ctx.check_result("diagonal-positivity", "K(a, conj a) > 0", pos, 1e-12));

        let pot = worst(&pts, |a| {
            let f = kahler_potential(a, p);
            Ok((f - log_jacobi_kernel(a, a, p).re).abs() / f.abs().max(1.0))
        });
        out.push(ctx.check_result("potential-log-kernel", "f = ln K(a, conj a)", pot, 1e-12));

        let fact = worst(&pairs, |(a, b)| {
            let za = JacobiPoint::new(a.z(), Complex64::new(0.0, 0.0))?;
            let zb = JacobiPoint::new(b.z(), Complex64::new(0.0, 0.0))?;
            let h = (jacobi_kernel(&za, &zb, p) - heisenberg_kernel(a.z(), b.z(), p.mu())).norm()
                / heisenberg_kernel(a.z(), b.z(), p.mu()).norm();
            let wa = JacobiPoint::from_parts(Complex64::new(0.0, 0.0), a.disk())?;
            let wb = JacobiPoint::from_parts(Complex64::new(0.0, 0.0), b.disk())?;
            let dk = disk_kernel(DiskPoint::new(a.w())?, DiskPoint::new(b.w())?, p.k());
            let d = (jacobi_kernel(&wa, &wb, p) - dk).norm() / dk.norm();
            Ok(h.max(d))
        });
        out.push(ctx.check_result("factorization", "K reduces to the Heisenberg and disk kernels", fact, 1e-12));

        let dia = worst(&pairs, |(a, b)| {
            let d = diastasis(a, b, p);
            Ok((d - diastasis_closed_form(a, b, p)).abs() / d.abs().max(1.0))
        });
        out.push(ctx.check_result("diastasis-two-routes", "D = ln K11 + ln K22 - 2 Re ln K12", dia, 1e-10));

        let ber = worst(&pairs, |(a, b)| {
            let v = berezin_kernel(a, b, p);
            let range = (v - 1.0).max(-v).max(0.0);
            Ok(range.max((v - (-diastasis_closed_form(a, b, p)).exp()).abs()))
        });
        out.push(ctx.check_result("berezin-diastasis", "b = exp(-D) in [0, 1]", ber, 1e-12));

        let series_pairs = sampling::pairs(ctx.seed, 12, 20, 1.0, 0.6);
        let series = series_sweep(&series_grid(), &series_pairs, ctx.trunc);
        let name = format!("series-closed-form({},{})", ctx.trunc.n_max(), ctx.trunc.m_max());
        out.push(ctx.check_result(&name, "truncated f_{n,m} expansion = K with k = k' + 1/4", series, SERIES_TOL));
        out
    }
}
