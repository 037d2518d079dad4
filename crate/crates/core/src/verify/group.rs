use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::domain::{JacobiPoint, ModelParams};
use crate::group::{
    action_eta_coords, berezin_invariance_deviation, eta_action_invariance_deviation, fc_forward, fc_inverse,
    fc_splitting_deviation, jacobi_action, kernel_equivariance_deviation, metric_invariance_deviation, mobius,
    JacobiGroupElement,
};

/// Group law, FC coordinates and invariance of the kernel-derived quantities.
pub struct GroupSuite;

type Sample = (JacobiGroupElement, JacobiGroupElement, JacobiPoint, JacobiPoint);

pub fn group_samples(seed: u64, n: usize) -> Vec<Sample> {
    let g1 = sampling::elements(seed, 30, n, 1.0, 1.0);
    let g2 = sampling::elements(seed, 31, n, 1.0, 1.0);
    let pairs = sampling::pairs(seed, 32, n, 1.0, 0.6);
    g1.into_iter().zip(g2).zip(pairs).map(|((a, b), (p, q))| (a, b, p, q)).collect()
}

/// Worst `(Berezin, diastasis, kernel equivariance)` deviations.
pub fn invariance_sweep(samples: &[Sample], params: ModelParams) -> crate::Result<(f64, f64, f64)> {
    let ber = worst(samples, |(e, _, p, q)| Ok(berezin_invariance_deviation(e, p, q, params)?.0))?;
    let dia = worst(samples, |(e, _, p, q)| Ok(berezin_invariance_deviation(e, p, q, params)?.1))?;
    let ker = worst(samples, |(e, _, p, q)| kernel_equivariance_deviation(e, p, q, params))?;
    Ok((ber, dia, ker))
}

/// Worst `(cross, diagonal)` FC splitting deviations at the given points.
pub fn fc_splitting_sweep(
    pts: &[JacobiPoint],
    params: ModelParams,
    stencil: crate::stencil::WirtingerStencil,
) -> crate::Result<(f64, f64)> {
    let cross = worst(pts, |a| {
        let (eta, w) = fc_inverse(a);
        Ok(fc_splitting_deviation(eta, w, params, stencil.step_at(a.w())?).0)
    })?;
    let diag = worst(pts, |a| {
        let (eta, w) = fc_inverse(a);
        Ok(fc_splitting_deviation(eta, w, params, stencil.step_at(a.w())?).1)
    })?;
    Ok((cross, diag))
}

impl VerificationSuite for GroupSuite {
    fn name(&self) -> &'static str {
        "group"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let (p, st) = (ctx.params, ctx.stencil);
        let samples = group_samples(ctx.seed, ctx.n_points);
        let mut out = Vec::new();

        let defect = worst(&samples, |(a, b, _, _)| Ok(a.g.compose(&b.g).defect()));
        out.push(ctx.check_result("su11-composition", "|a|^2 - |b|^2 = 1 under products", defect, 1e-12));

        let hom = worst(&samples, |(a, b, x, _)| {
            let lhs = mobius(&a.g.compose(&b.g), x.disk())?;
            let rhs = mobius(&a.g, mobius(&b.g, x.disk())?)?;
            let back = mobius(&a.g.inverse(), mobius(&a.g, x.disk())?)?;
            Ok((lhs.value() - rhs.value()).norm().max((back.value() - x.w()).norm()))
        });
        out.push(ctx.check_result("mobius-homomorphism", "(g1 g2) w = g1 (g2 w)", hom, 1e-12));

        let round = worst(&samples, |(_, _, x, _)| {
            let (eta, w) = fc_inverse(x);
            let y = fc_forward(eta, w)?;
            Ok((y.z() - x.z()).norm().max((y.w() - x.w()).norm()) / x.z().norm().max(1.0))
        });
        out.push(ctx.check_result("fc-round-trip", "z = eta - w conj(eta)", round, 1e-12));

        let square = worst(&samples, |(e, _, x, _)| {
            let (eta, w) = fc_inverse(x);
            let (eta1, w1) = action_eta_coords(e, eta, w)?;
            let via_eta = fc_forward(eta1, w1)?;
            let (direct, _) = jacobi_action(e, x, p)?;
            let d = (via_eta.z() - direct.z()).norm().max((via_eta.w() - direct.w()).norm());
            Ok(d / direct.z().norm().max(1.0))
        });
        out.push(ctx.check_result("fc-commuting-square", "action commutes with the FC map", square, 1e-10));

        match invariance_sweep(&samples, p) {
            Ok((ber, dia, ker)) => {
                out.push(ctx.check("berezin-invariance", "b(g a, g b) = b(a, b)", ber, 1e-10));
                out.push(ctx.check("diastasis-invariance", "D(g a, g b) = D(a, b)", dia, 1e-10));
                out.push(ctx.check("kernel-equivariance", "K transforms with the multiplier", ker, 1e-10));
            }
            Err(_) => {
                for name in ["berezin-invariance", "diastasis-invariance", "kernel-equivariance"] {
                    out.push(CheckResult::errored(name, "group invariance", ctx.tol(name, 1e-10)));
                }
            }
        }

        let few = &samples[..samples.len().min(20)];
        let met = worst(few, |(e, _, x, _)| metric_invariance_deviation(e, x, p, st));
        out.push(ctx.check_result("metric-invariance", "g* h = h", met, 1e-5));

        let pts: Vec<JacobiPoint> = samples.iter().map(|s| s.2).collect();
        match fc_splitting_sweep(&pts, p, st) {
            Ok((cross, diag)) => {
                out.push(ctx.check("fc-splitting-cross", "h = mu |d eta|^2 + 2k |dw|^2 / P^2", cross, 1e-10));
                out.push(ctx.check("fc-splitting-diagonal", "h = mu |d eta|^2 + 2k |dw|^2 / P^2", diag, 1e-8));
            }
            Err(_) => {
                out.push(CheckResult::errored("fc-splitting-cross", "FC splitting", ctx.tol("fc-splitting-cross", 1e-10)));
                out.push(CheckResult::errored(
                    "fc-splitting-diagonal",
                    "FC splitting",
                    ctx.tol("fc-splitting-diagonal", 1e-8),
                ));
            }
        }

        let eta_inv = worst(few, |(e, _, x, _)| {
            let (eta, w) = fc_inverse(x);
            eta_action_invariance_deviation(e, eta, w, p, st.step())
        });
        out.push(ctx.check_result("eta-action-invariance", "split form invariant in (eta, w)", eta_inv, 1e-5));
        out
    }
}
