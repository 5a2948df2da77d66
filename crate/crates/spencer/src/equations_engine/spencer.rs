use num_traits::Zero;

use super::{GroupSystem, Param};
use crate::diffop::LinDiffOp;
use crate::symbolic_core::{MultiIndex, QMatrix, Rational};

/// `N_i` with `(N_i)[a][b] = l_a(L(d_i-shifted jets))_b`, so that the
/// first Spencer operator reads `D1 P = dP - N P`.
pub fn connection(gs: &GroupSystem) -> Vec<QMatrix> {
    let n = gs.n();
    let dim = gs.dim();
    (0..n)
        .map(|i| {
            let mut m = QMatrix::qzeros(dim, dim);
            for a in 0..dim {
                for ((k, mu), w) in gs.param_functional(a) {
                    let shifted = gs.param_jet(k, &mu.inc(i));
                    for (b, c) in shifted.into_iter().enumerate() {
                        if !c.is_zero() {
                            let v = m.get(a, b) + &(&w * &c);
                            m.set(a, b, v);
                        }
                    }
                }
            }
            m
        })
        .collect()
}

/// First Spencer operator on parameter functions; output row `a * n + i`.
pub fn spencer_d1(gs: &GroupSystem) -> LinDiffOp {
    let n = gs.n();
    let dim = gs.dim();
    let conn = connection(gs);
    let mut op = LinDiffOp::zero(n, dim, n * dim);
    for a in 0..dim {
        for (i, ni) in conn.iter().enumerate() {
            let row = a * n + i;
            op.add_simple(row, a, Some(i), 1);
            for b in 0..dim {
                let c = ni.get(a, b);
                if !c.is_zero() {
                    op.add_const(row, b, MultiIndex::zero(n), -c.clone());
                }
            }
        }
    }
    op
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Second Spencer operator on 1-forms `X^a_i` (input `a * n + i`);
/// output row `a * C(n,2) + p` for the `p`-th pair `i < j`.
pub fn spencer_d2(gs: &GroupSystem) -> LinDiffOp {
    let n = gs.n();
    let dim = gs.dim();
    let conn = connection(gs);
    let ps = pairs(n);
    let mut op = LinDiffOp::zero(n, n * dim, ps.len() * dim);
    let zero = MultiIndex::zero(n);
    for a in 0..dim {
        for (p, &(i, j)) in ps.iter().enumerate() {
            let row = a * ps.len() + p;
            op.add_simple(row, a * n + j, Some(i), 1);
            op.add_simple(row, a * n + i, Some(j), -1);
            for b in 0..dim {
                let ci = conn[i].get(a, b);
                if !ci.is_zero() {
                    op.add_const(row, b * n + j, zero.clone(), -ci.clone());
                }
                let cj = conn[j].get(a, b);
                if !cj.is_zero() {
                    op.add_const(row, b * n + i, zero.clone(), cj.clone());
                }
            }
        }
    }
    op
}

/// Equilibrium equations `-ad(D1) y = f`.
#[derive(Clone, Debug)]
pub struct EquilibriumSystem {
    /// Inputs are the duals `a * n + r`, outputs one row per parameter.
    pub op: LinDiffOp,
    pub params: Vec<Param>,
    pub dual_names: Vec<String>,
    pub rhs_names: Vec<String>,
    pub row_labels: Vec<&'static str>,
}

impl EquilibriumSystem {
    pub fn n(&self) -> usize {
        self.op.n()
    }

    pub fn dual_index(&self, a: usize, r: usize) -> usize {
        a * self.n() + r
    }

    /// Lines of the form `label: lhs = rhs`.
    pub fn pretty(&self) -> Vec<String> {
        self.op
            .pretty(&self.dual_names)
            .into_iter()
            .enumerate()
            .map(|(a, lhs)| format!("{}: {} = {}", self.row_labels[a], lhs, self.rhs_names[a]))
            .collect()
    }
}

pub fn equilibrium(gs: &GroupSystem) -> EquilibriumSystem {
    let n = gs.n();
    let op = spencer_d1(gs).formal_adjoint().neg();
    EquilibriumSystem {
        op,
        params: gs.params.clone(),
        dual_names: gs.params.iter().flat_map(|p| (0..n).map(move |r| p.dual_name(r))).collect(),
        rhs_names: gs.params.iter().map(|p| p.rhs_name()).collect(),
        row_labels: gs.params.iter().map(|p| p.row_label()).collect(),
    }
}

/// Coupling of each elation row to the rotation duals: for every `s`, the
/// pairs `(dual name, coefficient)` of the zero-order terms in row `A_s`.
pub fn maxwell_weyl_mu(gs: &GroupSystem) -> Vec<Vec<(String, Rational)>> {
    let eq = equilibrium(gs);
    let n = gs.n();
    let zero = MultiIndex::zero(n);
    gs.params
        .iter()
        .enumerate()
        .filter(|(_, p)| matches!(p, Param::Elation(_)))
        .map(|(row, _)| {
            let mut out = Vec::new();
            for (a, p) in gs.params.iter().enumerate() {
                if !matches!(p, Param::Rotation(..)) {
                    continue;
                }
                for r in 0..n {
                    let d = eq.dual_index(a, r);
                    if let Some(c) = eq.op.coeff(row, d, &zero).as_constant() {
                        if !c.is_zero() {
                            out.push((eq.dual_names[d].clone(), c));
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// `-ad(D2)`: duals as first-order expressions in `C(n,2) * dim` potentials.
pub fn parametrize(gs: &GroupSystem) -> LinDiffOp {
    spencer_d2(gs).formal_adjoint().neg()
}

pub fn potential_count(gs: &GroupSystem) -> usize {
    let n = gs.n();
    n * (n - 1) / 2 * gs.dim()
}
