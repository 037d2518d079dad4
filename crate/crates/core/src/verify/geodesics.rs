use num_complex::Complex64;

use super::{sampling, worst, CheckResult, VerificationSuite, VerifyContext};
use crate::domain::{ModelParams, TangentVector};
use crate::error::Result;
use crate::geodesics::{
    christoffel_relation_deviation, curve_length, geodesic_rhs, geodesic_rhs_christoffel, integrate,
    ClosedFormGeodesic, FcParticular, GeodesicState, MuZero,
};
use crate::group::{action_raw, jacobi_action, JacobiGroupElement};
use crate::stencil::{holomorphic_jacobian, Coords};

/// Connection, integrator and closed-form solutions of the geodesic equations.
pub struct GeodesicsSuite;

pub const T_END: f64 = 2.0;

fn n_steps(t_end: f64, step: f64) -> usize {
    (t_end / step).round().max(1.0) as usize
}

/// Largest state deviation between an RK4 path and a closed form over `[0, t_end]`.
pub fn closed_form_tracking<G: ClosedFormGeodesic>(g: &G, params: ModelParams, step: f64, t_end: f64) -> Result<f64> {
    let path = integrate(&g.state(0.0)?, t_end, n_steps(t_end, step), params)?;
    let mut w = 0.0f64;
    for (t, s) in path.samples() {
        let e = g.state(*t)?;
        let d = [s.pos.z() - e.pos.z(), s.pos.w() - e.pos.w(), s.vel.dz - e.vel.dz, s.vel.dw - e.vel.dw];
        w = w.max(d.iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    Ok(w)
}

/// Largest ODE residual of a closed form sampled on `[0, t_end]`.
pub fn closed_form_residual<G: ClosedFormGeodesic>(g: &G, params: ModelParams, t_end: f64) -> Result<f64> {
    let mut w = 0.0f64;
    for i in 0..=200 {
        w = w.max(g.residual(t_end * i as f64 / 200.0, params)?);
    }
    Ok(w)
}

pub fn mu_zero_cases(seed: u64, n: usize) -> Vec<MuZero> {
    let mut r = sampling::rng(seed, 40);
    (0..n)
        .filter_map(|_| {
            let b = sampling::in_disk(&mut r, 0.8);
            MuZero::new(sampling::in_disk(&mut r, 1.0), sampling::in_disk(&mut r, 1.0), b).ok()
        })
        .collect()
}

pub fn fc_particular_cases(seed: u64, n: usize) -> Vec<FcParticular> {
    let mut r = sampling::rng(seed, 41);
    (0..n)
        .map(|_| FcParticular { eta0: sampling::in_disk(&mut r, 1.5), b: sampling::in_disk(&mut r, 0.8) })
        .collect()
}

pub fn random_states(seed: u64, stream: u64, n: usize) -> Vec<GeodesicState> {
    let mut r = sampling::rng(seed, stream);
    (0..n)
        .map(|_| {
            let pos = sampling::point(&mut r, 1.0, 0.5);
            let vel = TangentVector { dz: sampling::in_disk(&mut r, 0.5), dw: sampling::in_disk(&mut r, 0.3) };
            GeodesicState::new(pos, vel)
        })
        .collect()
}

/// Endpoint mismatch between `g(geodesic)` and the geodesic from the
/// transported initial data.
pub fn covariance_deviation(
    e: &JacobiGroupElement,
    s0: &GeodesicState,
    params: ModelParams,
    step: f64,
    t_end: f64,
) -> Result<f64> {
    let map = |x: &Coords| {
        let (z1, w1, _) = action_raw(e, x[0], x[1]);
        [z1, w1]
    };
    let j = holomorphic_jacobian(&map, &s0.pos.coords(), 1e-5);
    let v = s0.vel;
    let v1 = TangentVector { dz: j[0][0] * v.dz + j[0][1] * v.dw, dw: j[1][0] * v.dz + j[1][1] * v.dw };
    let (q0, _) = jacobi_action(e, &s0.pos, params)?;
    let n = n_steps(t_end, step);
    let end = integrate(s0, t_end, n, params)?.last().pos;
    let end_moved = integrate(&GeodesicState::new(q0, v1), t_end, n, params)?.last().pos;
    let (mapped, _) = jacobi_action(e, &end, params)?;
    Ok((mapped.z() - end_moved.z()).norm().max((mapped.w() - end_moved.w()).norm()))
}

impl VerificationSuite for GeodesicsSuite {
    fn name(&self) -> &'static str {
        "geodesics"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let (p, st, h) = (ctx.params, ctx.stencil, ctx.rk4_step);
        let mut out = Vec::new();
        let pts = sampling::points(ctx.seed, 42, 20, 2.0, 0.8);

        let chr = worst(&pts, |a| christoffel_relation_deviation(a, p, st));
        out.push(ctx.check_result("christoffel-relation", "h_ae Gamma^a_bg = d_g h_be", chr, 1e-6));

        let states = random_states(ctx.seed, 43, ctx.n_points);
        let rhs = worst(&states, |s| {
            let a = geodesic_rhs(s, p);
            let b = geodesic_rhs_christoffel(s, p);
            let scale = a.dz.norm().max(a.dw.norm()).max(1.0);
            Ok((a.dz - b.dz).norm().max((a.dw - b.dw).norm()) / scale)
        });
        out.push(ctx.check_result("rhs-two-forms", "reduced equations = Christoffel contraction", rhs, 1e-12));

        let mz = mu_zero_cases(ctx.seed, 8);
        let dec = ModelParams::decoupled(p.k());
        let track = dec.clone().and_then(|d| worst(&mz, |g| closed_form_tracking(g, d, h, T_END)));
        out.push(ctx.check_result("mu-zero-tanh", "mu = 0: w = tanh, z affine in w", track, 1e-8));
        let mz_res = dec.and_then(|d| worst(&mz, |g| closed_form_residual(g, d, T_END)));
        out.push(ctx.check_result("mu-zero-residual", "mu = 0 closed form solves the ODE", mz_res, 1e-9));

        let fcp = fc_particular_cases(ctx.seed, 8);
        let fres = worst(&fcp, |g| closed_form_residual(g, p, T_END));
        out.push(ctx.check_result("fc-particular-residual", "constant eta, w = tanh", fres, 1e-9));

        let few = &states[..states.len().min(8)];
        let drift = worst(few, |s| Ok(integrate(s, T_END, n_steps(T_END, h), p)?.energy_drift(p)));
        out.push(ctx.check_result("energy-drift", "h(v, v) conserved", drift, 1e-8));

        let elems = sampling::elements(ctx.seed, 44, few.len(), 0.5, 0.5);
        let cases: Vec<_> = elems.into_iter().zip(few.iter().copied()).collect();
        let cov = worst(&cases, |(e, s)| covariance_deviation(e, s, p, h, 1.0));
        out.push(ctx.check_result("group-covariance", "isometries map geodesics to geodesics", cov, 1e-6));

        let radial = FcParticular { eta0: Complex64::new(0.0, 0.0), b: Complex64::new(1.0, 0.0) };
        let len = radial
            .state(0.0)
            .and_then(|s0| integrate(&s0, T_END, n_steps(T_END, h), p))
            .and_then(|path| curve_length(&path, p))
            .map(|l| (l - (2.0 * p.k()).sqrt() * T_END).abs() / T_END);
        out.push(ctx.check_result("radial-speed", "|w'| = sech^2 has speed sqrt(2k)", len, 1e-8));
        out
    }
}
