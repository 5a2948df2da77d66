//! Vector fields, Lie brackets, structure constants and the gauge calculus
//! built on them.

mod gauge;
mod mc;

use num_traits::Zero;
use thiserror::Error;

use crate::symbolic_core::{ExactMatrix, MultiIndex, Poly, Rational};

pub use gauge::{
    conjugate, curvature, curvature_variation, flat_potential, matrix_curvature, matrix_gauge_transform, nabla, poincare_el,
    poincare_duality_residual, AlgForm, GaugeField, GaugePotential, RMat,
};
pub use mc::{adjoint_rep_residual, affine_adjoint_matrix, affine_mc_forms, mc_verify, MCForms};

#[derive(Debug, Error, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("bracket [theta_{rho}, theta_{sigma}] is not in the span of the generators")]
    NotClosed { rho: usize, sigma: usize },
    #[error("form degree {0} exceeds the dimension")]
    DegreeOverflow(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(comps: Vec<Poly>) -> Self {
        VectorField { comps }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn zero(n: usize) -> Self {
        VectorField { comps: vec![Poly::zero(n); n] }
    }

    /// `d/dx^k`.
    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[k] = Poly::one(n);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    /// Derivative of a function along the field.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.comps
            .iter()
            .enumerate()
            .fold(Poly::zero(f.nvars()), |acc, (r, v)| &acc + &(v * &f.diff(r)))
    }
}

/// `[v, w]^k = v^r d_r w^k - w^r d_r v^k`.
pub fn bracket(v: &VectorField, w: &VectorField) -> Result<VectorField, LieError> {
    if v.n() != w.n() {
        return Err(LieError::DimensionMismatch(format!("{} vs {}", v.n(), w.n())));
    }
    Ok(VectorField {
        comps: (0..v.n()).map(|k| &v.apply(&w.comps[k]) - &w.apply(&v.comps[k])).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    p: usize,
    c: Vec<Rational>,
}

impl StructureConstants {
    pub fn zero(p: usize) -> Self {
        StructureConstants { p, c: vec![Rational::zero(); p * p * p] }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    /// `c^tau_{rho sigma}`.
    pub fn get(&self, tau: usize, rho: usize, sigma: usize) -> &Rational {
        &self.c[(tau * self.p + rho) * self.p + sigma]
    }

    pub fn set(&mut self, tau: usize, rho: usize, sigma: usize, v: Rational) {
        let p = self.p;
        self.c[(tau * p + rho) * p + sigma] = v;
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Sets `c^tau_{rho sigma} = v` and `c^tau_{sigma rho} = -v`.
    pub fn set_skew(&mut self, tau: usize, rho: usize, sigma: usize, v: Rational) {
        self.set(tau, sigma, rho, -v.clone());
        self.set(tau, rho, sigma, v);
    }
}

fn coefficient_vector(v: &VectorField, monomials: &[(usize, MultiIndex)]) -> Vec<Rational> {
    monomials.iter().map(|(k, m)| v.comps[*k].coeff(m)).collect()
}

/// Solves `[theta_rho, theta_sigma] = c^tau_{rho sigma} theta_tau` exactly.
pub fn structure_constants(gens: &[VectorField]) -> Result<StructureConstants, LieError> {
    let p = gens.len();
    let Some(n) = gens.first().map(|g| g.n()) else {
        return Ok(StructureConstants::zero(0));
    };
    if gens.iter().any(|g| g.n() != n) {
        return Err(LieError::DimensionMismatch("generators of different arity".into()));
    }
    let mut brackets = vec![vec![VectorField::zero(n); p]; p];
    for r in 0..p {
        for s in r + 1..p {
            brackets[r][s] = bracket(&gens[r], &gens[s])?;
        }
    }
    let mut monos: std::collections::BTreeSet<(usize, MultiIndex)> = Default::default();
    for v in gens.iter().chain(brackets.iter().flatten()) {
        for (k, c) in v.comps.iter().enumerate() {
            for m in c.terms().keys() {
                monos.insert((k, m.clone()));
            }
        }
    }
    let monos: Vec<_> = monos.into_iter().collect();
    let cols: Vec<Vec<Rational>> = gens.iter().map(|g| coefficient_vector(g, &monos)).collect();
    let a = ExactMatrix::from_rows(cols, monos.len(), Rational::zero()).transpose();
    if a.rank() < p {
        return Err(LieError::Dependent);
    }
    let mut c = StructureConstants::zero(p);
    for r in 0..p {
        for s in r + 1..p {
            let b = coefficient_vector(&brackets[r][s], &monos);
            let x = a.solve(&b).ok_or(LieError::NotClosed { rho: r, sigma: s })?;
            for (t, v) in x.into_iter().enumerate() {
                c.set_skew(t, r, s, v);
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub enum JacobiWitness {
    /// `c^tau_{rho sigma} + c^tau_{sigma rho} != 0`.
    Antisymmetry { tau: usize, rho: usize, sigma: usize },
    /// Cyclic sum nonzero for `(lambda; rho, sigma, tau)`.
    Jacobi { lambda: usize, rho: usize, sigma: usize, tau: usize, value: Rational },
}

/// Checks antisymmetry and the Jacobi identity, returning the first violation.
pub fn jacobi_check(c: &StructureConstants) -> Result<(), JacobiWitness> {
    let p = c.dim();
    for t in 0..p {
        for r in 0..p {
            for s in 0..p {
                if !(c.get(t, r, s) + c.get(t, s, r)).is_zero() {
                    return Err(JacobiWitness::Antisymmetry { tau: t, rho: r, sigma: s });
                }
            }
        }
    }
    for l in 0..p {
        for r in 0..p {
            for s in 0..p {
                for t in 0..p {
                    let mut v = Rational::zero();
                    for m in 0..p {
                        v += c.get(l, m, r) * c.get(m, s, t);
                        v += c.get(l, m, s) * c.get(m, t, r);
                        v += c.get(l, m, t) * c.get(m, r, s);
                    }
                    if !v.is_zero() {
                        return Err(JacobiWitness::Jacobi { lambda: l, rho: r, sigma: s, tau: t, value: v });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `{d/dx, x d/dx}` acting on the line.
pub fn affine_generators() -> Vec<VectorField> {
    vec![VectorField::coordinate(1, 0), VectorField::new(vec![Poly::var(1, 0)])]
}

/// Translations `d_1 .. d_n`.
pub fn translation_generators(n: usize) -> Vec<VectorField> {
    (0..n).map(|k| VectorField::coordinate(n, k)).collect()
}
