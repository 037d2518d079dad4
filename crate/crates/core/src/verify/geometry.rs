use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::geometry::{
    kahler_condition_check, metric, metric_det, metric_det_closed_form, metric_fd, ricci, ricci_fd,
    scalar_curvature, volume_density,
};

/// Closed-form metric and curvature against finite-difference routes.
pub struct GeometrySuite;

impl VerificationSuite for GeometrySuite {
    fn name(&self) -> &'static str {
        "geometry"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let (p, st) = (ctx.params, ctx.stencil);
        let pts = sampling::points(ctx.seed, 20, ctx.n_points, 2.0, 0.8);
        let mut out = Vec::new();

        let hess = worst(&pts, |a| Ok(metric(a, p).rel_diff(&metric_fd(a, p, st)?)));
        out.push(ctx.check_result("metric-vs-potential", "h = Wirtinger Hessian of f", hess, 1e-6));

        let det = worst(&pts, |a| {
            let want = metric_det_closed_form(a, p);
            Ok((metric_det(a, p) - want).abs() / want)
        });
        out.push(ctx.check_result("metric-determinant", "det h = 2k mu / P^3", det, 1e-12));

        let vol = worst(&pts, |a| {
            let v = volume_density(a, p);
            Ok((v - 2.0 * metric_det(a, p)).abs() / v)
        });
        out.push(ctx.check_result("volume-density", "dV = 4k mu / P^3", vol, 1e-12));

        let target = -3.0 / (2.0 * p.k());
        let scal = worst(&pts, |a| Ok((scalar_curvature(a, p) - target).abs()));
        out.push(ctx.check_result("scalar-curvature", "R = -3/(2k)", scal, 1e-10));

        let ric = worst(&pts, |a| {
            let exact = ricci(a, p);
            let fd = ricci_fd(a, p, st)?;
            let scale = exact.r_ww.abs().max(1.0);
            Ok(exact.max_abs_diff(&fd) / scale)
        });
        out.push(ctx.check_result("ricci-vs-log-det", "Ric = -dd-bar ln det h", ric, 1e-6));

        let witness = worst(&pts, |a| {
            let h = metric(a, p);
            let r = ricci_fd(a, p, st)?;
            if h.h_zz > 0.0 && r.r_ww < 0.0 {
                Ok(r.r_zz.abs())
            } else {
                Ok(f64::INFINITY)
            }
        });
        out.push(ctx.check_result("non-einstein", "Ric_zz = 0 < h_zz while Ric_ww < 0", witness, 1e-6));

        let kahler = worst(&pts, |a| Ok(kahler_condition_check(a, p, st)? / metric(a, p).max_abs()));
        out.push(ctx.check_result("kahler-condition", "d_g h_ab = d_a h_gb", kahler, 1e-6));
        out
    }
}
