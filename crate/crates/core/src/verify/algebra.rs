use super::{CheckResult, VerificationSuite, VerifyContext};
use crate::algebra::{check_relations, RELATIONS, RELATION_TOL};
use crate::domain::ModelParams;

/// Every defining bracket on all monomials of degree <= 8, over a grid of
/// `(k, mu)` plus the configured pair.
pub struct AlgebraSuite;

pub const MAX_DEGREE: u32 = 8;

pub fn parameter_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for k in [1.0, 1.5, 2.0] {
        for mu in [0.5, 1.0, 2.0] {
            out.extend(ModelParams::new(k, mu));
        }
    }
    out
}

impl VerificationSuite for AlgebraSuite {
    fn name(&self) -> &'static str {
        "algebra"
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        let mut grid = parameter_grid();
        grid.push(ctx.params);
        let reports: Vec<_> = grid.iter().map(|p| check_relations(MAX_DEGREE, *p)).collect();
        RELATIONS
            .iter()
            .map(|rel| {
                let dev = reports
                    .iter()
                    .flat_map(|r| r.checks.iter())
                    .filter(|c| c.relation == rel.name)
                    .map(|c| if c.max_deviation.is_nan() { f64::INFINITY } else { c.max_deviation })
                    .fold(0.0, f64::max);
                let reference = format!("Jacobi algebra bracket ({} group)", rel.group);
                ctx.check(&format!("bracket {}", rel.name), &reference, dev, RELATION_TOL)
            })
            .collect()
    }
}
