//! Differential realization of the Jacobi algebra generators on polynomials
//! in `(z, w)` and exact checking of their commutation relations.
//!
//! Each generator acts on a monomial `z^i w^j` by a closed-form rewrite rule;
//! the action on a polynomial is the linear extension.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{c, ModelParams};

/// Finite polynomial in `(z, w)` keyed by `(deg_z, deg_w)`. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BiPolynomial {
    coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl BiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, c(1.0, 0.0))
    }

    pub fn monomial(deg_z: u32, deg_w: u32, coeff: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(deg_z, deg_w, coeff);
        p
    }

    pub fn add_term(&mut self, deg_z: u32, deg_w: u32, coeff: Complex64) {
        if coeff == c(0.0, 0.0) {
            return;
        }
        let entry = self.coeffs.entry((deg_z, deg_w)).or_insert(c(0.0, 0.0));
        *entry += coeff;
        if *entry == c(0.0, 0.0) {
            self.coeffs.remove(&(deg_z, deg_w));
        }
    }

    pub fn coeff(&self, deg_z: u32, deg_w: u32) -> Complex64 {
        self.coeffs.get(&(deg_z, deg_w)).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|(i, j)| i + j).max()
    }

    pub fn max_deg_z(&self) -> Option<u32> {
        self.coeffs.keys().map(|(i, _)| *i).max()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &v) in &self.coeffs {
            out.add_term(i, j, v * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), &v) in &other.coeffs {
            out.add_term(i, j, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.coeffs.iter().map(|(&(i, j), &v)| v * z.powu(i) * w.powu(j)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    A,
    ADag,
    KMinus,
    KZero,
    KPlus,
}

impl Generator {
    pub const ALL: [Generator; 5] =
        [Generator::A, Generator::ADag, Generator::KMinus, Generator::KZero, Generator::KPlus];
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::A => "a",
            Generator::ADag => "a+",
            Generator::KMinus => "K-",
            Generator::KZero => "K0",
            Generator::KPlus => "K+",
        };
        f.write_str(s)
    }
}

/// A representation of the five generators as linear operators on polynomials.
pub trait Realization {
    fn apply(&self, g: Generator, p: &BiPolynomial) -> BiPolynomial;
}

/// First-order holomorphic differential operators:
///
/// ```text
/// a   = (1/sqrt mu) d/dz
/// a+  = sqrt(mu) z + (w/sqrt mu) d/dz
/// K-  = d/dw
/// K0  = k + (z/2) d/dz + w d/dw
/// K+  = (mu/2) z^2 + 2k w + z w d/dz + w^2 d/dw
/// ```
#[derive(Debug, Clone, Copy)]
pub struct DifferentialRealization {
    pub params: ModelParams,
}

impl Realization for DifferentialRealization {
    fn apply(&self, g: Generator, p: &BiPolynomial) -> BiPolynomial {
        let k = self.params.k();
        let mu = self.params.mu();
        let sm = mu.sqrt();
        let mut out = BiPolynomial::zero();
        for ((i, j), v) in p.terms() {
            let fi = i as f64;
            let fj = j as f64;
            match g {
                Generator::A => {
                    if i > 0 {
                        out.add_term(i - 1, j, v * (fi / sm));
                    }
                }
                Generator::ADag => {
                    out.add_term(i + 1, j, v * sm);
                    if i > 0 {
                        out.add_term(i - 1, j + 1, v * (fi / sm));
                    }
                }
                Generator::KMinus => {
                    if j > 0 {
                        out.add_term(i, j - 1, v * fj);
                    }
                }
                Generator::KZero => out.add_term(i, j, v * (k + 0.5 * fi + fj)),
                Generator::KPlus => {
                    out.add_term(i + 2, j, v * (0.5 * mu));
                    out.add_term(i, j + 1, v * (2.0 * k + fi + fj));
                }
            }
        }
        out
    }
}

/// Apply a generator in the differential realization with parameters `params`.
pub fn apply_generator(g: Generator, p: &BiPolynomial, params: ModelParams) -> BiPolynomial {
    DifferentialRealization { params }.apply(g, p)
}

/// `(g1 g2 - g2 g1) p` in a given realization.
pub fn commutator_in(
    r: &dyn Realization,
    g1: Generator,
    g2: Generator,
    p: &BiPolynomial,
) -> BiPolynomial {
    let a = r.apply(g1, &r.apply(g2, p));
    let b = r.apply(g2, &r.apply(g1, p));
    a.sub(&b)
}

pub fn commutator(g1: Generator, g2: Generator, p: &BiPolynomial, params: ModelParams) -> BiPolynomial {
    commutator_in(&DifferentialRealization { params }, g1, g2, p)
}

/// Right-hand side of a bracket: `identity_coeff * 1 + sum coeff * generator`.
#[derive(Debug, Clone, Copy)]
pub struct Relation {
    pub name: &'static str,
    pub group: &'static str,
    pub lhs: (Generator, Generator),
    pub identity_coeff: f64,
    pub rhs: Option<(f64, Generator)>,
}

/// The defining brackets of the Jacobi algebra.
pub const RELATIONS: [Relation; 10] = {
    use Generator::*;
    [
        Relation { name: "[a,a+]=1", group: "heisenberg", lhs: (A, ADag), identity_coeff: 1.0, rhs: None },
        Relation { name: "[K0,K+]=K+", group: "su11", lhs: (KZero, KPlus), identity_coeff: 0.0, rhs: Some((1.0, KPlus)) },
        Relation { name: "[K0,K-]=-K-", group: "su11", lhs: (KZero, KMinus), identity_coeff: 0.0, rhs: Some((-1.0, KMinus)) },
        Relation { name: "[K-,K+]=2K0", group: "su11", lhs: (KMinus, KPlus), identity_coeff: 0.0, rhs: Some((2.0, KZero)) },
        Relation { name: "[a,K+]=a+", group: "mixed", lhs: (A, KPlus), identity_coeff: 0.0, rhs: Some((1.0, ADag)) },
        Relation { name: "[K-,a+]=a", group: "mixed", lhs: (KMinus, ADag), identity_coeff: 0.0, rhs: Some((1.0, A)) },
        Relation { name: "[K+,a+]=0", group: "mixed", lhs: (KPlus, ADag), identity_coeff: 0.0, rhs: None },
        Relation { name: "[K-,a]=0", group: "mixed", lhs: (KMinus, A), identity_coeff: 0.0, rhs: None },
        Relation { name: "[K0,a+]=a+/2", group: "weight", lhs: (KZero, ADag), identity_coeff: 0.0, rhs: Some((0.5, ADag)) },
        Relation { name: "[K0,a]=-a/2", group: "weight", lhs: (KZero, A), identity_coeff: 0.0, rhs: Some((-0.5, A)) },
    ]
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub group: String,
    pub monomial: (u32, u32),
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    pub pass: bool,
}

impl RelationReport {
    pub fn worst(&self) -> f64 {
        self.checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn failed_groups(&self) -> Vec<String> {
        let mut g: Vec<String> =
            self.checks.iter().filter(|c| !c.pass).map(|c| c.group.clone()).collect();
        g.dedup();
        g.sort();
        g.dedup();
        g
    }
}

/// Absolute tolerance on commutator coefficients, scaled by the largest
/// coefficient magnitude involved.
pub const RELATION_TOL: f64 = 1e-12;

pub fn check_relations_in(r: &dyn Realization, max_degree: u32) -> RelationReport {
    let mut checks = Vec::new();
    for total in 0..=max_degree {
        for i in 0..=total {
            let j = total - i;
            let p = BiPolynomial::monomial(i, j, c(1.0, 0.0));
            for rel in RELATIONS.iter() {
                let lhs = commutator_in(r, rel.lhs.0, rel.lhs.1, &p);
                let mut rhs = p.scale(c(rel.identity_coeff, 0.0));
                if let Some((coef, g)) = rel.rhs {
                    rhs = rhs.add(&r.apply(g, &p).scale(c(coef, 0.0)));
                }
                let diff = lhs.sub(&rhs).max_abs_coeff();
                let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff()).max(1.0);
                checks.push(RelationCheck {
                    relation: rel.name.to_string(),
                    group: rel.group.to_string(),
                    monomial: (i, j),
                    max_deviation: diff,
                    pass: diff <= RELATION_TOL * scale,
                });
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    RelationReport { checks, pass }
}

/// Check every bracket on every monomial `z^i w^j` with `i + j <= max_degree`.
pub fn check_relations(max_degree: u32, params: ModelParams) -> RelationReport {
    check_relations_in(&DifferentialRealization { params }, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: f64, mu: f64) -> ModelParams {
        ModelParams::new(k, mu).unwrap()
    }

    /// Adds `eps * w` to K+; breaks `[K-,K+] = 2K0`.
    struct PerturbedKPlus {
        base: DifferentialRealization,
        eps: f64,
    }

    impl Realization for PerturbedKPlus {
        fn apply(&self, g: Generator, p: &BiPolynomial) -> BiPolynomial {
            let out = self.base.apply(g, p);
            if g != Generator::KPlus {
                return out;
            }
            let mut shifted = BiPolynomial::zero();
            for ((i, j), v) in p.terms() {
                shifted.add_term(i, j + 1, v * self.eps);
            }
            out.add(&shifted)
        }
    }

    #[test]
    fn vacuum_conditions() {
        let p = params(1.5, 2.0);
        assert!(apply_generator(Generator::A, &BiPolynomial::one(), p).is_zero());
        assert!(apply_generator(Generator::KMinus, &BiPolynomial::one(), p).is_zero());
        let k0 = apply_generator(Generator::KZero, &BiPolynomial::one(), p);
        assert_eq!(k0, BiPolynomial::one().scale(c(1.5, 0.0)));
    }

    #[test]
    fn kplus_on_vacuum() {
        let p = params(1.5, 2.0);
        let out = apply_generator(Generator::KPlus, &BiPolynomial::one(), p);
        assert_eq!(out.len(), 2);
        assert_eq!(out.coeff(2, 0), c(1.0, 0.0));
        assert_eq!(out.coeff(0, 1), c(3.0, 0.0));
    }

    #[test]
    fn commutator_examples() {
        let p = params(1.0, 1.0);
        let z = BiPolynomial::monomial(1, 0, c(1.0, 0.0));
        assert_eq!(commutator(Generator::A, Generator::ADag, &z, p), z);
        let two_k = commutator(Generator::KMinus, Generator::KPlus, &BiPolynomial::one(), p);
        assert_eq!(two_k, BiPolynomial::one().scale(c(2.0, 0.0)));
        for i in 0..4 {
            for j in 0..4 {
                let m = BiPolynomial::monomial(i, j, c(1.0, 0.0));
                let r = commutator(Generator::KPlus, Generator::ADag, &m, p);
                assert!(r.max_abs_coeff() < 1e-12, "{i},{j}: {r:?}");
            }
        }
    }

    #[test]
    fn relations_hold_on_constant() {
        let rep = check_relations(0, params(1.0, 1.0));
        assert!(rep.pass);
        assert_eq!(rep.checks.len(), RELATIONS.len());
    }

    #[test]
    fn relations_hold_to_degree_six() {
        assert!(check_relations(6, params(1.5, 2.0)).pass);
    }

    #[test]
    fn perturbed_kplus_fails_on_su11_brackets() {
        let r = PerturbedKPlus { base: DifferentialRealization { params: params(1.0, 1.0) }, eps: 0.1 };
        let rep = check_relations_in(&r, 6);
        assert!(!rep.pass);
        assert!(rep.failed_groups().contains(&"su11".to_string()));
        assert!(rep
            .checks
            .iter()
            .any(|c| c.relation == "[K-,K+]=2K0" && !c.pass));
    }

    #[test]
    fn degree_bookkeeping() {
        let p = params(2.0, 0.5);
        for i in 0..5u32 {
            for j in 0..5u32 {
                let m = BiPolynomial::monomial(i, j, c(1.0, 0.0));
                let up = apply_generator(Generator::KPlus, &m, p);
                assert!(up.total_degree().unwrap() <= i + j + 2);
                let down = apply_generator(Generator::A, &m, p);
                if i == 0 {
                    assert!(down.is_zero());
                } else {
                    assert_eq!(down.max_deg_z(), Some(i - 1));
                }
            }
        }
    }

    #[test]
    fn report_serializes() {
        let rep = check_relations(1, params(1.0, 1.0));
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("\"relation\""));
        assert!(s.contains("\"max_deviation\""));
    }
}
