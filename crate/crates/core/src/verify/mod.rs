//! Named verification suites behind a common trait.
//!
//! Each suite recomputes one module's identities against an independent route
//! (finite differences, quadrature, series, group transport) and reports a
//! deviation against a tolerance per check. Suites register by name in a
//! [`SuiteRegistry`]; callers select them at runtime.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::domain::ModelParams;
use crate::error::Result;
use crate::kernels::TruncationOrder;
use crate::stencil::WirtingerStencil;

pub mod algebra;
pub mod bargmann;
pub mod embedding;
pub mod geodesics;
pub mod geometry;
pub mod group;
pub mod kernels;
pub mod quadrature;
pub mod sampling;

pub use algebra::AlgebraSuite;
pub use bargmann::BargmannSuite;
pub use embedding::EmbeddingSuite;
pub use geodesics::GeodesicsSuite;
pub use geometry::GeometrySuite;
pub use group::GroupSuite;
pub use kernels::KernelsSuite;
pub use quadrature::QuadratureSuite;

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    /// The identity being checked.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// `pass` iff `deviation <= tolerance`; NaN never passes.
    pub fn new(check: impl Into<String>, reference: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            reference: reference.into(),
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }

    /// A check whose computation itself failed.
    pub fn errored(check: impl Into<String>, reference: impl Into<String>, tolerance: f64) -> Self {
        Self::new(check, reference, f64::INFINITY, tolerance)
    }
}

/// Inputs shared by all suites.
#[derive(Debug, Clone)]
pub struct VerifyContext {
    pub params: ModelParams,
    pub trunc: TruncationOrder,
    pub stencil: WirtingerStencil,
    pub rk4_step: f64,
    pub seed: u64,
    pub mc_samples: usize,
    pub tolerances: BTreeMap<String, f64>,
    /// Random points per sweep.
    pub n_points: usize,
}

impl VerifyContext {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            params: cfg.params()?,
            trunc: cfg.trunc()?,
            stencil: cfg.stencil()?,
            rk4_step: cfg.rk4_step,
            seed: cfg.seed,
            mc_samples: cfg.mc_samples,
            tolerances: cfg.tolerances.clone(),
            n_points: 100,
        })
    }

    /// Tolerance for `check`, honouring overrides.
    pub fn tol(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }

    /// Builds a result with the (possibly overridden) tolerance.
    pub fn check(&self, name: &str, reference: &str, deviation: f64, default_tol: f64) -> CheckResult {
        CheckResult::new(name, reference, deviation, self.tol(name, default_tol))
    }

    /// Same, for a fallible deviation: errors become failed checks.
    pub fn check_result(&self, name: &str, reference: &str, deviation: Result<f64>, default_tol: f64) -> CheckResult {
        match deviation {
            Ok(d) => self.check(name, reference, d, default_tol),
            Err(_) => CheckResult::errored(name, reference, self.tol(name, default_tol)),
        }
    }

    /// Parameters for basis-dependent checks: the configured ones when
    /// `2(k - 1/4)` is a positive integer, otherwise `k = 5/4` at the same `mu`.
    pub fn basis_params(&self) -> ModelParams {
        if self.params.two_k_prime().is_ok() {
            self.params
        } else {
            ModelParams::new(1.25, self.params.mu()).unwrap_or(self.params)
        }
    }

    /// Suffix naming a substituted `k`, empty when none.
    pub fn basis_tag(&self) -> String {
        let bp = self.basis_params();
        if bp.k() == self.params.k() {
            String::new()
        } else {
            format!("[k={}]", bp.k())
        }
    }
}

/// Largest deviation over `items`, evaluated in parallel. NaN counts as
/// infinite, and the first error aborts the sweep.
pub(crate) fn worst<T, F>(items: &[T], f: F) -> Result<f64>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    items
        .par_iter()
        .map(|x| f(x).map(|d| if d.is_nan() { f64::INFINITY } else { d }))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

pub trait VerificationSuite: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }

    pub fn failed(&self) -> Vec<&CheckResult> {
        self.checks().filter(|c| !c.pass).collect()
    }
}

pub struct SuiteRegistry {
    suites: BTreeMap<&'static str, Box<dyn VerificationSuite>>,
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(AlgebraSuite));
        r.register(Box::new(KernelsSuite));
        r.register(Box::new(GeometrySuite));
        r.register(Box::new(GroupSuite));
        r.register(Box::new(GeodesicsSuite));
        r.register(Box::new(BargmannSuite));
        r.register(Box::new(EmbeddingSuite));
        r.register(Box::new(QuadratureSuite));
        r
    }
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        Self { suites: BTreeMap::new() }
    }

    /// Adds or replaces a suite under its own name.
    pub fn register(&mut self, suite: Box<dyn VerificationSuite>) {
        self.suites.insert(suite.name(), suite);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn VerificationSuite> {
        self.suites.get(name).map(|s| s.as_ref())
    }

    fn report(suite: &dyn VerificationSuite, ctx: &VerifyContext) -> SuiteReport {
        let checks = suite.run(ctx);
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport { suite: suite.name().to_string(), checks, pass }
    }

    /// Runs one suite by name, or every suite for `"all"`. Suites run
    /// concurrently; the report is ordered by suite name.
    pub fn run(&self, selection: &str, ctx: &VerifyContext) -> Option<VerificationReport> {
        let chosen: Vec<&dyn VerificationSuite> = if selection == "all" {
            self.suites.values().map(|s| s.as_ref()).collect()
        } else {
            vec![self.get(selection)?]
        };
        let suites: Vec<SuiteReport> = chosen.par_iter().map(|s| Self::report(*s, ctx)).collect();
        let pass = suites.iter().all(|s| s.pass);
        Some(VerificationReport { suites, pass })
    }
}
