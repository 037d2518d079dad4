//! Seeded random points and group elements for sweeps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::domain::JacobiPoint;
use crate::group::{JacobiGroupElement, SU11Element};

/// A ChaCha stream keyed by `(seed, stream)`, so sweeps do not share draws.
pub fn rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform in the closed disk of radius `r`.
pub fn in_disk<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex64 {
    let rad = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(rad, std::f64::consts::TAU * rng.random::<f64>())
}

/// `|z| <= z_max`, `|w| <= w_max < 1`, each uniform by area.
pub fn point<R: Rng + ?Sized>(rng: &mut R, z_max: f64, w_max: f64) -> JacobiPoint {
    loop {
        if let Ok(p) = JacobiPoint::new(in_disk(rng, z_max), in_disk(rng, w_max)) {
            return p;
        }
    }
}

pub fn points(seed: u64, stream: u64, n: usize, z_max: f64, w_max: f64) -> Vec<JacobiPoint> {
    let mut r = rng(seed, stream);
    (0..n).map(|_| point(&mut r, z_max, w_max)).collect()
}

pub fn pairs(seed: u64, stream: u64, n: usize, z_max: f64, w_max: f64) -> Vec<(JacobiPoint, JacobiPoint)> {
    let mut r = rng(seed, stream);
    (0..n).map(|_| (point(&mut r, z_max, w_max), point(&mut r, z_max, w_max))).collect()
}

/// `b` uniform with `|b| <= b_max`, uniform phase of `a`, `|alpha| <= alpha_max`,
/// `t` uniform in `[-1, 1]`.
pub fn element<R: Rng + ?Sized>(rng: &mut R, b_max: f64, alpha_max: f64) -> JacobiGroupElement {
    loop {
        let b = in_disk(rng, b_max);
        let phase = std::f64::consts::TAU * rng.random::<f64>();
        let alpha = in_disk(rng, alpha_max);
        let t = 2.0 * rng.random::<f64>() - 1.0;
        if let Ok(e) = SU11Element::from_b_phase(b, phase).and_then(|g| JacobiGroupElement::new(g, alpha, t)) {
            return e;
        }
    }
}

pub fn elements(seed: u64, stream: u64, n: usize, b_max: f64, alpha_max: f64) -> Vec<JacobiGroupElement> {
    let mut r = rng(seed, stream);
    (0..n).map(|_| element(&mut r, b_max, alpha_max)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_determinism() {
        let a = points(3, 1, 200, 1.5, 0.6);
        assert!(a.iter().all(|p| p.z().norm() <= 1.5 && p.w().norm() <= 0.6));
        assert_eq!(a, points(3, 1, 200, 1.5, 0.6));
        assert_ne!(a, points(3, 2, 200, 1.5, 0.6));
        let e = elements(0, 0, 50, 1.0, 1.0);
        assert!(e.iter().all(|g| g.g.defect() < 1e-12));
    }
}
