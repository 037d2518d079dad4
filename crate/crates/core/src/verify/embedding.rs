use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::domain::{JacobiPoint, ModelParams};
use crate::embedding::{
    angle_cayley_deviation, cauchy_check, cs_angle, distance_angle_inequality_check, embedding_tail,
    fubini_study_pullback_check,
};
use crate::error::Result;
use crate::geodesics::{shoot, straight_path};
use crate::group::jacobi_action;

/// Coherent-state embedding into projective space.
pub struct EmbeddingSuite;

/// `max(angle - L, 0)`, with `L` the shortest of the straight segment and,
/// when shooting converges, the RK4 geodesic between the points.
pub fn inequality_violation(p1: &JacobiPoint, p2: &JacobiPoint, params: ModelParams) -> Result<f64> {
    let seg = straight_path(p1, p2, 400)?;
    let mut r = distance_angle_inequality_check(p1, p2, params, &seg)?;
    if let Ok(geo) = shoot(p1, p2, 400, params, 30) {
        if let Ok(g) = distance_angle_inequality_check(p1, p2, params, &geo) {
            if g.length < r.length {
                r = g;
            }
        }
    }
    Ok((r.angle - r.length).max(0.0))
}

impl VerificationSuite for EmbeddingSuite {
    fn name(&self) -> &'static str {
        "embedding"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let p = ctx.basis_params();
        let tag = ctx.basis_tag();
        let t = ctx.trunc;
        let name = |s: &str| format!("{s}{tag}");
        let mut out = Vec::new();

        let pairs = sampling::pairs(ctx.seed, 60, 50, 1.0, 0.5);
        let cauchy = worst(&pairs, |(a, b)| cauchy_check(a, b, p, t));
        out.push(ctx.check_result(&name("cauchy"), "<e_b, e_a> / |e_a||e_b| = normalised K", cauchy, 1e-8));

        let tail = worst(&sampling::points(ctx.seed, 61, 50, 1.0, 0.5), |a| embedding_tail(a, p, t));
        out.push(ctx.check_result(&name("embedding-tail"), "sum |f_{n,m}|^2 / K -> 1", tail, 1e-8));

        let pts = sampling::points(ctx.seed, 62, 8, 1.0, 0.5);
        let fs = worst(&pts, |a| fubini_study_pullback_check(a, p, t, ctx.stencil));
        out.push(ctx.check_result(&name("fubini-study-pullback"), "h = pullback of the FS metric", fs, 1e-5));

        let few = &pairs[..20];
        let ang = worst(few, |(a, b)| angle_cayley_deviation(a, b, p, t));
        out.push(ctx.check_result(&name("angle-cayley"), "acos |kappa| = Cayley distance", ang, 1e-8));

        let ineq_pairs = sampling::pairs(ctx.seed, 63, ctx.n_points, 1.0, 0.6);
        let ineq = worst(&ineq_pairs, |(a, b)| inequality_violation(a, b, ctx.params));
        out.push(ctx.check_result("distance-angle-inequality", "d(a, b) >= acos |kappa(a, b)|", ineq, 1e-9));

        let elems = sampling::elements(ctx.seed, 64, pairs.len(), 1.0, 1.0);
        let cases: Vec<_> = elems.into_iter().zip(pairs.iter().copied()).collect();
        let inv = worst(&cases, |(e, (a, b))| {
            let (ga, _) = jacobi_action(e, a, ctx.params)?;
            let (gb, _) = jacobi_action(e, b, ctx.params)?;
            Ok((cs_angle(&ga, &gb, ctx.params) - cs_angle(a, b, ctx.params)).abs())
        });
        out.push(ctx.check_result("angle-invariance", "acos |kappa| is group invariant", inv, 1e-9));
        out
    }
}
