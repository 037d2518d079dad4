use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use jacobi_cs::config::RunConfig;
use jacobi_cs::quantity::GridAxis;

#[derive(Debug, Parser)]
#[command(name = "jacobi-cs", version, about = "Coherent-state geometry of the Siegel-Jacobi disk")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags layered over the config file (or `JACOBI_CS_CONFIG`).
#[derive(Debug, Args)]
pub struct Overrides {
    /// JSON config file; takes precedence over JACOBI_CS_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, global = true)]
    pub n_max: Option<u32>,
    #[arg(long, global = true)]
    pub m_max: Option<u32>,
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    #[arg(long, global = true)]
    pub rk4_step: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo samples for the quadrature suite.
    #[arg(long, global = true)]
    pub mc_samples: Option<usize>,
    /// Tolerance override, NAME=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tolerances: Vec<(String, f64)>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: RunConfig) -> RunConfig {
        if let Some(v) = self.k {
            cfg.k = v;
        }
        if let Some(v) = self.mu {
            cfg.mu = v;
        }
        if let Some(v) = self.n_max {
            cfg.truncation.n_max = v;
        }
        if let Some(v) = self.m_max {
            cfg.truncation.m_max = v;
        }
        if let Some(v) = self.fd_step {
            cfg.fd_step = v;
        }
        if let Some(v) = self.rk4_step {
            cfg.rk4_step = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.mc_samples {
            cfg.mc_samples = v;
        }
        for (name, v) in &self.tolerances {
            cfg.tolerances.insert(name.clone(), *v);
        }
        cfg
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a quantity at a point; prints a JSON record.
    Eval {
        /// kernel, potential, metric, ricci, scalar-curvature, diastasis,
        /// berezin, christoffel, volume or eta.
        quantity: String,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        second: SecondPoint,
    },
    /// Integrate a geodesic with RK4; writes CSV and prints a JSON summary.
    Geodesic {
        #[command(flatten)]
        point: PointArgs,
        /// Initial velocity dz/dt as re,im.
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        dz: Complex64,
        /// Initial velocity dw/dt as re,im.
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        dw: Complex64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// RK4 steps; defaults to t_end / rk4_step.
        #[arg(long)]
        steps: Option<usize>,
        /// CSV destination.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Run a verification suite (or `all`); prints a JSON report, exit 1 on any failure.
    Verify {
        /// algebra, kernels, geometry, group, geodesics, bargmann, embedding,
        /// quadrature or all.
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Tabulate a quantity over a grid as CSV.
    Table {
        quantity: String,
        /// Re z axis: a value or start:stop:count.
        #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
        re_z: GridAxis,
        #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
        im_z: GridAxis,
        #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
        re_w: GridAxis,
        #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
        im_w: GridAxis,
        #[command(flatten)]
        second: SecondPoint,
        /// CSV destination; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// z as re,im.
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    /// w as re,im, |w| < 1.
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub w: Complex64,
}

/// Second argument of two-point quantities (kernel, diastasis, berezin);
/// the origin by default.
#[derive(Debug, Args)]
pub struct SecondPoint {
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z2: Complex64,
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub w2: Complex64,
}

/// `re,im` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("{s:?} is not re,im"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("{s:?} is not re,im")),
    }
}

fn parse_axis(s: &str) -> Result<GridAxis, String> {
    s.parse().map_err(|e: jacobi_cs::Error| e.to_string())
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, v) = s.split_once('=').ok_or_else(|| format!("{s:?} is not NAME=VALUE"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("{s:?}: bad tolerance value"))?;
    Ok((name.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn tolerance_flags() {
        assert_eq!(parse_tol("scalar-curvature=1e-9").unwrap(), ("scalar-curvature".into(), 1e-9));
        assert!(parse_tol("abc").is_err());
    }

    #[test]
    fn overrides_beat_file() {
        let cli = Cli::parse_from(["jacobi-cs", "--k", "2", "--tol", "a=0.5", "verify", "geometry"]);
        let cfg = cli.overrides.apply(RunConfig { mu: 3.0, ..RunConfig::default() });
        assert_eq!((cfg.k, cfg.mu), (2.0, 3.0));
        assert_eq!(cfg.tolerances["a"], 0.5);
    }
}
