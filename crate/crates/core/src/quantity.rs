//! Named scalar-valued quantities for point evaluation and grid tables.
//!
//! Each quantity maps a point (and, for two-point quantities, a second
//! point) to a fixed list of named real columns.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::domain::{eta_of, JacobiPoint, ModelParams};
use crate::error::{Error, Result};
use crate::geodesics::christoffel;
use crate::geometry::{metric, ricci, scalar_curvature, volume_density};
use crate::kernels::{berezin_kernel, diastasis, jacobi_kernel, kahler_potential};

pub trait Quantity: Send + Sync {
    fn name(&self) -> &'static str;
    fn columns(&self) -> &'static [&'static str];
    /// Whether `eval` uses the second point.
    fn two_point(&self) -> bool {
        false
    }
    /// One value per entry of `columns`.
    fn eval(&self, pt: &JacobiPoint, other: &JacobiPoint, params: ModelParams) -> Vec<f64>;
}

macro_rules! quantity {
    ($ty:ident, $name:literal, [$($col:literal),+], two_point = $two:literal, |$pt:ident, $other:ident, $p:ident| $body:expr) => {
        pub struct $ty;

        impl Quantity for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn columns(&self) -> &'static [&'static str] {
                &[$($col),+]
            }
            fn two_point(&self) -> bool {
                $two
            }
            #[allow(unused_variables)]
            fn eval(&self, $pt: &JacobiPoint, $other: &JacobiPoint, $p: ModelParams) -> Vec<f64> {
                $body
            }
        }
    };
}

quantity!(Kernel, "kernel", ["re", "im"], two_point = true, |a, b, p| {
    let v = jacobi_kernel(a, b, p);
    vec![v.re, v.im]
});

quantity!(Potential, "potential", ["value"], two_point = false, |a, b, p| vec![kahler_potential(a, p)]);

quantity!(Metric, "metric", ["h_zz", "re_h_zw", "im_h_zw", "h_ww"], two_point = false, |a, b, p| {
    let h = metric(a, p);
    vec![h.h_zz, h.h_zw.re, h.h_zw.im, h.h_ww]
});

quantity!(Ricci, "ricci", ["r_zz", "re_r_zw", "im_r_zw", "r_ww"], two_point = false, |a, b, p| {
    let r = ricci(a, p);
    vec![r.r_zz, r.r_zw.re, r.r_zw.im, r.r_ww]
});

quantity!(ScalarCurvature, "scalar-curvature", ["value"], two_point = false, |a, b, p| vec![
    scalar_curvature(a, p)
]);

quantity!(Diastasis, "diastasis", ["value"], two_point = true, |a, b, p| vec![diastasis(a, b, p)]);

quantity!(Berezin, "berezin", ["value"], two_point = true, |a, b, p| vec![berezin_kernel(a, b, p)]);

quantity!(
    Christoffel,
    "christoffel",
    [
        "re_g_zzz", "im_g_zzz", "re_g_wzz", "im_g_wzz", "re_g_zzw", "im_g_zzw", "re_g_wwz", "im_g_wwz", "re_g_zww",
        "im_g_zww", "re_g_www", "im_g_www"
    ],
    two_point = false,
    |a, b, p| christoffel(a, p).as_array().iter().flat_map(|g| [g.re, g.im]).collect()
);

quantity!(Volume, "volume", ["value"], two_point = false, |a, b, p| vec![volume_density(a, p)]);

quantity!(Eta, "eta", ["re", "im"], two_point = false, |a, b, p| {
    let e = eta_of(a);
    vec![e.re, e.im]
});

pub struct QuantityRegistry {
    items: BTreeMap<&'static str, Box<dyn Quantity>>,
}

impl Default for QuantityRegistry {
    fn default() -> Self {
        let mut r = Self { items: BTreeMap::new() };
        r.register(Box::new(Kernel));
        r.register(Box::new(Potential));
        r.register(Box::new(Metric));
        r.register(Box::new(Ricci));
        r.register(Box::new(ScalarCurvature));
        r.register(Box::new(Diastasis));
        r.register(Box::new(Berezin));
        r.register(Box::new(Christoffel));
        r.register(Box::new(Volume));
        r.register(Box::new(Eta));
        r
    }
}

impl QuantityRegistry {
    pub fn register(&mut self, q: Box<dyn Quantity>) {
        self.items.insert(q.name(), q);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Quantity> {
        self.items
            .get(name)
            .map(|q| q.as_ref())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown quantity {name:?}; known: {}", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.items.keys().copied().collect()
    }
}

/// `start:stop:count`, `count` evenly spaced values including both ends;
/// a bare number is a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn single(v: f64) -> Self {
        Self { start: v, stop: v, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

impl FromStr for GridAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("grid axis {s:?} must be a number or start:stop:count"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
        match parts.as_slice() {
            [v] => Ok(Self::single(num(v)?)),
            [a, b, n] => Ok(Self { start: num(a)?, stop: num(b)?, count: n.parse().map_err(|_| bad())? }),
            _ => Err(bad()),
        }
    }
}

/// Tensor grid over `(Re z, Im z, Re w, Im w)`, `Re w` varying fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub re_z: GridAxis,
    pub im_z: GridAxis,
    pub re_w: GridAxis,
    pub im_w: GridAxis,
}

impl Grid {
    /// All grid points; fails on the first one outside the domain.
    pub fn points(&self) -> Result<Vec<JacobiPoint>> {
        let mut out = Vec::new();
        for zr in self.re_z.values() {
            for zi in self.im_z.values() {
                for wi in self.im_w.values() {
                    for wr in self.re_w.values() {
                        out.push(JacobiPoint::new(num_complex::Complex64::new(zr, zi), num_complex::Complex64::new(wr, wi))?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// CSV with columns `re_z,im_z,re_w,im_w,<quantity columns>`.
pub fn table_csv(q: &dyn Quantity, grid: &Grid, other: &JacobiPoint, params: ModelParams) -> Result<String> {
    let pts = grid.points()?;
    let mut out = String::from("re_z,im_z,re_w,im_w");
    for c in q.columns() {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for a in &pts {
        let vals = q.eval(a, other, params);
        let row: Vec<String> =
            [a.z().re, a.z().im, a.w().re, a.w().im].iter().chain(vals.iter()).map(|v| format!("{v:.17e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
