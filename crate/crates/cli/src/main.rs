mod args;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use jacobi_cs::config::RunConfig;
use jacobi_cs::geodesics::{
    curve_length, integrate, ClosedFormGeodesic, FcParticular, GeodesicPath, GeodesicState,
};
use jacobi_cs::quantity::{table_csv, Grid, QuantityRegistry};
use jacobi_cs::verify::{SuiteRegistry, VerifyContext};
use jacobi_cs::{Error, JacobiPoint, ModelParams, TangentVector};

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0} check(s)")]
    Verification(usize),
    #[error("left the domain at t = {t}")]
    Escape { t: f64 },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Verification(_) => 1,
            Self::Escape { .. } => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundaryEscape { t } => Self::Escape { t },
            other => Self::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("jacobi-cs: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let base = match &cli.overrides.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::from_env()?,
    };
    let cfg = cli.overrides.apply(base);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    let params = cfg.params()?;
    match cli.command {
        Command::Eval { quantity, point, second } => {
            let q = QuantityRegistry::default();
            let q = q.get(&quantity)?;
            let a = JacobiPoint::new(point.z, point.w)?;
            let b = JacobiPoint::new(second.z2, second.w2)?;
            let mut inputs = json!({"k": params.k(), "mu": params.mu(), "z": pair(a.z()), "w": pair(a.w())});
            if q.two_point() {
                inputs["z2"] = pair(b.z());
                inputs["w2"] = pair(b.w());
            }
            let vals = q.eval(&a, &b, params);
            let mut rec = json!({"quantity": q.name(), "inputs": inputs});
            if let [v] = vals.as_slice() {
                rec["value"] = json!(v);
            } else {
                let m: Map<String, Value> = q.columns().iter().zip(&vals).map(|(c, v)| (c.to_string(), json!(v))).collect();
                rec["values"] = Value::Object(m);
            }
            println!("{}", serde_json::to_string_pretty(&rec).expect("JSON record"));
            Ok(())
        }
        Command::Geodesic { point, dz, dw, t_end, steps, output } => {
            if !(t_end.is_finite() && t_end > 0.0) {
                return Err(CliError::Input(format!("t_end = {t_end} must be positive")));
            }
            let s0 = GeodesicState::new(JacobiPoint::new(point.z, point.w)?, TangentVector::new(dz, dw)?);
            let n = steps.unwrap_or_else(|| (t_end / cfg.rk4_step).round().max(1.0) as usize);
            if n == 0 {
                return Err(CliError::Input("steps must be positive".into()));
            }
            let summary = geodesic(&s0, t_end, n, params, &output)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("JSON summary"));
            Ok(())
        }
        Command::Verify { suite } => {
            let reg = SuiteRegistry::default();
            let ctx = VerifyContext::from_config(&cfg)?;
            let report = reg.run(&suite, &ctx).ok_or_else(|| {
                CliError::Input(format!("unknown suite {suite:?}; known: all, {}", reg.names().join(", ")))
            })?;
            println!("{}", serde_json::to_string_pretty(&report).expect("JSON report"));
            match report.failed().len() {
                0 => Ok(()),
                n => Err(CliError::Verification(n)),
            }
        }
        Command::Table { quantity, re_z, im_z, re_w, im_w, second, output } => {
            let q = QuantityRegistry::default();
            let q = q.get(&quantity)?;
            let other = JacobiPoint::new(second.z2, second.w2)?;
            let csv = table_csv(q, &Grid { re_z, im_z, re_w, im_w }, &other, params)?;
            match output {
                Some(path) => write(&path, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// The FC particular solution through `s0` when `s0` starts at `w = 0` on it.
fn matching_closed_form(s0: &GeodesicState) -> Option<FcParticular> {
    let (z, w) = (s0.pos.z(), s0.pos.w());
    let scale = s0.vel.dz.norm().max(s0.vel.dw.norm()).max(1.0);
    let on_family = w == Complex64::new(0.0, 0.0) && (s0.vel.dz + z.conj() * s0.vel.dw).norm() <= 1e-12 * scale;
    on_family.then_some(FcParticular { eta0: z, b: s0.vel.dw })
}

fn geodesic(s0: &GeodesicState, t_end: f64, n: usize, params: ModelParams, out: &Path) -> Result<Value, CliError> {
    let at_rest = s0.vel.dz == Complex64::new(0.0, 0.0) && s0.vel.dw == Complex64::new(0.0, 0.0);
    let path = if at_rest {
        GeodesicPath::new(vec![(0.0, *s0), (t_end, *s0)])?
    } else {
        integrate(s0, t_end, n, params)?
    };
    write(out, &path.to_csv(params))?;
    let length = if at_rest { 0.0 } else { curve_length(&path, params)? };
    let closed = match matching_closed_form(s0) {
        Some(g) => {
            let mut worst = 0.0f64;
            for (t, s) in path.samples() {
                let e = g.state(*t)?;
                let d = [s.pos.z() - e.pos.z(), s.pos.w() - e.pos.w(), s.vel.dz - e.vel.dz, s.vel.dw - e.vel.dw];
                worst = worst.max(d.iter().map(|x| x.norm()).fold(0.0, f64::max));
            }
            json!(worst)
        }
        None => Value::Null,
    };
    let last = path.last();
    Ok(json!({
        "final": {
            "t": path.t_end(),
            "z": pair(last.pos.z()),
            "w": pair(last.pos.w()),
            "dz": pair(last.vel.dz),
            "dw": pair(last.vel.dw),
        },
        "length": length,
        "max_energy_drift": path.energy_drift(params),
        "closed_form_residual": closed,
        "samples": path.len(),
        "csv": out.display().to_string(),
    }))
}
