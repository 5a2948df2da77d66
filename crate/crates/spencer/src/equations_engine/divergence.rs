use std::collections::BTreeMap;

use num_traits::Zero;

use super::{EngineError, EquilibriumSystem, GroupSystem};
use crate::diffop::LinDiffOp;
use crate::symbolic_core::{ExactMatrix, MultiIndex, Poly, QMatrix, RatFunc, Rational};

/// Multipliers `P_a` with `P . E(y) = d_r (sum_a P_a y_{a,r})`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceForm {
    pub tau: usize,
    pub multipliers: Vec<Poly>,
}

impl DivergenceForm {
    /// Coefficient of dual `d` in the flux component `D^r`.
    pub fn flux(&self, n: usize) -> Vec<Vec<Poly>> {
        let dim = self.multipliers.len();
        let nv = self.multipliers.first().map_or(n, Poly::nvars);
        (0..n)
            .map(|r| {
                let mut row = vec![Poly::zero(nv); n * dim];
                for (a, p) in self.multipliers.iter().enumerate() {
                    row[a * n + r] = p.clone();
                }
                row
            })
            .collect()
    }

    /// `d_r D^r - P . E` as an operator on the duals.
    pub fn residual(&self, eq: &EquilibriumSystem) -> LinDiffOp {
        residual_op(eq, &self.multipliers)
    }

    pub fn verify(&self, eq: &EquilibriumSystem) -> Result<(), EngineError> {
        let r = self.residual(eq);
        if r.is_zero() {
            Ok(())
        } else {
            Err(EngineError::CertificateFailed { tau: self.tau, residual: r.pretty(&eq.dual_names).join("; ") })
        }
    }

    pub fn pretty(&self, eq: &EquilibriumSystem) -> Vec<String> {
        let n = eq.n();
        let names = Poly::default_names(n);
        self.flux(n)
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let terms: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(d, p)| match p.as_constant() {
                        Some(c) if c == Rational::from_integer(1.into()) => eq.dual_names[d].clone(),
                        _ => format!("({})*{}", p.fmt_with(&names), eq.dual_names[d]),
                    })
                    .collect();
                let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                format!("D^{} = {}", r + 1, body)
            })
            .collect()
    }
}

fn residual_op(eq: &EquilibriumSystem, mult: &[Poly]) -> LinDiffOp {
    let n = eq.n();
    let m_in = eq.op.m_in();
    let mut op = LinDiffOp::zero(n, m_in, 1);
    for (a, p) in mult.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for r in 0..n {
            let d = a * n + r;
            op.add_coeff(0, d, MultiIndex::zero(n), RatFunc::from_poly(p.diff(r)));
            op.add_coeff(0, d, MultiIndex::unit(n, r), RatFunc::from_poly(p.clone()));
        }
    }
    for ((row, k, mu), c) in eq.op.coeffs() {
        let p = &mult[*row];
        if p.is_zero() {
            continue;
        }
        let t = RatFunc::from_poly(p.clone()).mul_ref(c);
        op.add_coeff(0, *k, mu.clone(), -&t);
    }
    op
}

/// Multipliers read off the columns of the jet matrix, each verified.
pub fn divergence_certificate(gs: &GroupSystem, eq: &EquilibriumSystem) -> Result<Vec<DivergenceForm>, EngineError> {
    let m = gs.jet_matrix();
    (0..gs.dim())
        .map(|tau| {
            let form = DivergenceForm { tau, multipliers: m.iter().map(|row| row[tau].clone()).collect() };
            form.verify(eq)?;
            Ok(form)
        })
        .collect()
}

/// Basis of all polynomial multiplier vectors of degree at most `degree`
/// turning the equilibrium rows into a divergence.
pub fn search_divergence_forms(eq: &EquilibriumSystem, degree: u32) -> Vec<Vec<Poly>> {
    let n = eq.n();
    let dim = eq.op.m_out();
    let monos = MultiIndex::up_to_degree(n, degree);
    let mut basis = Vec::new();
    for a in 0..dim {
        for m in &monos {
            let mut v = vec![Poly::zero(n); dim];
            v[a] = Poly::monomial(n, m.clone(), Rational::from_integer(1.into()));
            basis.push(v);
        }
    }
    let residuals: Vec<BTreeMap<(usize, MultiIndex, MultiIndex), Rational>> = crate::par::map(&basis, 8, |v| {
        let r = residual_op(eq, v);
        let mut out = BTreeMap::new();
        for ((_, k, mu), c) in r.coeffs() {
            let p = c.as_poly().expect("constant-coefficient equilibrium");
            for (mono, w) in p.terms() {
                out.insert((*k, mu.clone(), mono.clone()), w.clone());
            }
        }
        out
    });
    let keys: Vec<_> = {
        let mut s = std::collections::BTreeSet::new();
        for r in &residuals {
            s.extend(r.keys().cloned());
        }
        s.into_iter().collect()
    };
    let mut mat = QMatrix::qzeros(keys.len(), basis.len());
    for (j, r) in residuals.iter().enumerate() {
        for (i, key) in keys.iter().enumerate() {
            if let Some(c) = r.get(key) {
                mat.set(i, j, c.clone());
            }
        }
    }
    mat.kernel()
        .into_iter()
        .map(|w| {
            let mut v = vec![Poly::zero(n); dim];
            for (j, c) in w.iter().enumerate() {
                if !c.is_zero() {
                    v = v.iter().zip(&basis[j]).map(|(x, b)| x + &b.scale(c)).collect();
                }
            }
            v
        })
        .collect()
}

/// Runs the bounded search and normalizes the solutions so that their
/// values at the origin match the columns of `M(0)`.
pub fn synthesize_divergence_forms(gs: &GroupSystem, eq: &EquilibriumSystem, degree: u32) -> Result<Vec<DivergenceForm>, EngineError> {
    let n = gs.n();
    let dim = gs.dim();
    let sols = search_divergence_forms(eq, degree);
    if sols.len() != dim {
        return Err(EngineError::Unsupported(format!("search found {} forms, expected {dim}", sols.len())));
    }
    let origin = vec![Rational::zero(); n];
    let rows: Vec<Vec<Rational>> = (0..dim).map(|a| sols.iter().map(|s| s[a].eval(&origin)).collect()).collect();
    let v = ExactMatrix::from_rows(rows, dim, Rational::zero());
    let m = gs.jet_matrix();
    (0..dim)
        .map(|tau| {
            let target: Vec<Rational> = m.iter().map(|row| row[tau].eval(&origin)).collect();
            let c = v
                .solve(&target)
                .ok_or_else(|| EngineError::Unsupported("search solutions do not span M(0)".into()))?;
            let mut mult = vec![Poly::zero(n); dim];
            for (j, cj) in c.iter().enumerate() {
                for a in 0..dim {
                    mult[a] = &mult[a] + &sols[j][a].scale(cj);
                }
            }
            let form = DivergenceForm { tau, multipliers: mult };
            form.verify(eq)?;
            Ok(form)
        })
        .collect()
}
