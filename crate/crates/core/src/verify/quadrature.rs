use num_complex::Complex64;

use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::error::Result;
use crate::kernels::BasisIndex;
use crate::quadrature::{
    disk_marginal_check, gram_matrix_mc, index_block, mean_weight, measure_invariance_deviation, parseval_check,
    rho_kernel_identity_deviation, McConfig, McEstimate,
};

/// Invariant measure, weight normalisation and Monte Carlo orthonormality.
pub struct QuadratureSuite;

/// `(max z-score against the identity, max standard error)` of a Gram matrix.
pub fn identity_scores(gram: &[Vec<McEstimate>]) -> (f64, f64) {
    let mut z = 0.0f64;
    let mut se = 0.0f64;
    for (a, row) in gram.iter().enumerate() {
        for (b, e) in row.iter().enumerate() {
            let target = if a == b { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            z = z.max(e.z_score(target));
            se = se.max(e.std_error);
        }
    }
    (z, se)
}

/// Worst disk-marginal deviation for `m <= 5`, `2k' in 2..=5`.
pub fn disk_marginal_sweep() -> Result<f64> {
    let mut w = 0.0f64;
    for tk in 2..=5 {
        for m in 0..=5 {
            w = w.max(disk_marginal_check(m, tk, 32, 16)?);
        }
    }
    Ok(w)
}

impl VerificationSuite for QuadratureSuite {
    fn name(&self) -> &'static str {
        "quadrature"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let bp = ctx.basis_params();
        let tag = ctx.basis_tag();
        let mut out = Vec::new();
        let cfg = McConfig::new(ctx.mc_samples, ctx.seed);

        let pts = sampling::points(ctx.seed, 70, ctx.n_points, 2.0, 0.9);
        let rho = worst(&pts, |a| Ok(rho_kernel_identity_deviation(a, ctx.params)));
        out.push(ctx.check_result("rho-kernel-identity", "rho K = Lambda", rho, 1e-12));

        let elems = sampling::elements(ctx.seed, 71, 20, 1.0, 1.0);
        let cases: Vec<_> = elems.into_iter().zip(pts.iter().copied()).collect();
        let meas = worst(&cases, |(e, a)| measure_invariance_deviation(e, a, ctx.params, ctx.stencil.step()));
        out.push(ctx.check_result("measure-invariance", "dnu = mu / P^3 d^4x is invariant", meas, 1e-6));

        let norm = cfg.clone().and_then(|c| mean_weight(ctx.params, &c)).map(|e| e.z_score(Complex64::new(1.0, 0.0)));
        let refn = "int rho dnu = 1 with Lambda = (4k-3)/(2 pi^2)";
        out.push(ctx.check_result("weight-normalization-zscore", refn, norm, 3.0));

        let gram = cfg.clone().and_then(|c| gram_matrix_mc(&index_block(3, 3), bp, &c)).map(|g| identity_scores(&g));
        let (z, se) = match &gram {
            Ok((z, se)) => (Ok(*z), Ok(*se)),
            Err(e) => (Err(e.clone()), Err(e.clone())),
        };
        let refn = "<f_a, f_b> = delta_ab";
        out.push(ctx.check_result(&format!("orthonormality-zscore{tag}"), refn, z, 3.0));
        out.push(ctx.check_result(&format!("orthonormality-stderr{tag}"), refn, se, 1e-2));

        let psi = [(BasisIndex::new(0, 0), Complex64::new(1.0, 0.0)), (BasisIndex::new(1, 1), Complex64::new(0.0, 1.0))];
        let pars = cfg.and_then(|c| parseval_check(&psi, &psi, bp, &c)).map(|r| r.z_score);
        out.push(ctx.check_result(&format!("parseval{tag}"), "Lambda int conj(psi) psi / K dnu = |c|^2", pars, 3.0));

        out.push(ctx.check_result("disk-marginal", "SU(1,1) factor normalised", disk_marginal_sweep(), 1e-6));
        out
    }
}
