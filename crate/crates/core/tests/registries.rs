use std::io::Write as _;

use num_complex::Complex64;

use jacobi_cs::config::RunConfig;
use jacobi_cs::quadrature::{gram_matrix_mc, index_block, mean_weight, McConfig};
use jacobi_cs::quantity::{table_csv, Grid, GridAxis, Quantity, QuantityRegistry};
use jacobi_cs::verify::{CheckResult, SuiteRegistry, VerificationSuite, VerifyContext};
use jacobi_cs::{JacobiPoint, ModelParams};

struct Fixed {
    name: &'static str,
    deviation: f64,
}

impl VerificationSuite for Fixed {
    fn name(&self) -> &'static str {
        self.name
    }

    fn run(&self, ctx: &VerifyContext) -> Vec<CheckResult> {
        vec![ctx.check("fixed", "constant", self.deviation, 1e-3)]
    }
}

fn ctx(cfg: &RunConfig) -> VerifyContext {
    VerifyContext::from_config(cfg).unwrap()
}

#[test]
fn custom_suites_plug_into_the_registry() {
    let mut reg = SuiteRegistry::empty();
    reg.register(Box::new(Fixed { name: "good", deviation: 0.0 }));
    reg.register(Box::new(Fixed { name: "bad", deviation: 1.0 }));
    let report = reg.run("all", &ctx(&RunConfig::default())).unwrap();
    let names: Vec<_> = report.suites.iter().map(|s| s.suite.as_str()).collect();
    assert_eq!(names, ["bad", "good"]);
    assert!(!report.pass);
    assert_eq!(report.failed().len(), 1);
    assert!(reg.run("good", &ctx(&RunConfig::default())).unwrap().pass);
    assert!(reg.run("missing", &ctx(&RunConfig::default())).is_none());
}

#[test]
fn tolerance_overrides_reach_checks() {
    let mut reg = SuiteRegistry::empty();
    reg.register(Box::new(Fixed { name: "bad", deviation: 1.0 }));
    let mut cfg = RunConfig::default();
    cfg.tolerances.insert("fixed".into(), 2.0);
    assert!(reg.run("bad", &ctx(&cfg)).unwrap().pass);
}

#[test]
fn default_registry_geometry_passes_and_coarse_stencil_fails() {
    let reg = SuiteRegistry::default();
    assert_eq!(reg.names().len(), 8);
    let report = reg.run("geometry", &ctx(&RunConfig::default())).unwrap();
    assert!(report.pass, "{:?}", report.failed());
    let coarse = RunConfig { fd_step: 0.1, ..RunConfig::default() };
    assert!(!reg.run("geometry", &ctx(&coarse)).unwrap().pass);
}

#[test]
fn report_serializes_with_reference_field() {
    let report = SuiteRegistry::default().run("algebra", &ctx(&RunConfig::default())).unwrap();
    let v = serde_json::to_value(&report).unwrap();
    let first = &v["suites"][0]["checks"][0];
    for key in ["check", "paper_ref", "deviation", "tolerance", "pass"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn config_file_round_trip_and_rejects_unknown_fields() {
    let cfg = RunConfig { k: 2.0, mu: 0.5, seed: 7, ..RunConfig::default() };
    let mut f = tempfile();
    f.1.write_all(serde_json::to_string(&cfg).unwrap().as_bytes()).unwrap();
    assert_eq!(RunConfig::load(&f.0).unwrap(), cfg);
    assert!(RunConfig::from_json(r#"{"k": 2.0, "bogus": 1}"#).is_err());
    let partial = RunConfig::from_json(r#"{"mu": 3.0}"#).unwrap();
    assert_eq!((partial.k, partial.mu), (1.0, 3.0));
    assert!(RunConfig { rk4_step: 0.5, ..RunConfig::default() }.validate().is_err());
    std::fs::remove_file(&f.0).unwrap();
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    let path = std::env::temp_dir().join(format!("jacobi-cs-cfg-{}.json", std::process::id()));
    let file = std::fs::File::create(&path).unwrap();
    (path, file)
}

struct ReW;

impl Quantity for ReW {
    fn name(&self) -> &'static str {
        "re-w"
    }
    fn columns(&self) -> &'static [&'static str] {
        &["value"]
    }
    fn eval(&self, pt: &JacobiPoint, _: &JacobiPoint, _: ModelParams) -> Vec<f64> {
        vec![pt.w().re]
    }
}

#[test]
fn custom_quantities_tabulate() {
    let mut reg = QuantityRegistry::default();
    reg.register(Box::new(ReW));
    let zero = GridAxis::single(0.0);
    let grid = Grid { re_z: zero, im_z: zero, re_w: "0:0.5:3".parse().unwrap(), im_w: zero };
    let p = ModelParams::new(1.0, 1.0).unwrap();
    let csv = table_csv(reg.get("re-w").unwrap(), &grid, &JacobiPoint::origin(), p).unwrap();
    let last: Vec<f64> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(last, [0.0, 0.25, 0.5]);
}

#[test]
fn monte_carlo_is_seeded_and_thread_count_independent() {
    let p = ModelParams::new(1.25, 1.0).unwrap();
    let cfg = McConfig::new(50_000, 42).unwrap();
    let idx = index_block(1, 1);
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = serial.install(|| gram_matrix_mc(&idx, p, &cfg)).unwrap();
    let b = gram_matrix_mc(&idx, p, &cfg).unwrap();
    assert_eq!(a, b);
    let other = gram_matrix_mc(&idx, p, &McConfig::new(50_000, 43).unwrap()).unwrap();
    assert_ne!(a, other);
    let w = mean_weight(p, &cfg).unwrap();
    assert!(w.z_score(Complex64::new(1.0, 0.0)) < 4.0);
}

#[test]
fn quadrature_rejects_non_normalizable_k() {
    let p = ModelParams::unnormalized(0.75, 1.0).unwrap();
    assert!(!p.is_normalizable());
    assert!(mean_weight(p, &McConfig::new(1000, 1).unwrap()).is_err());
}
