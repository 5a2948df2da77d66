use num_traits::{One, Zero};

use super::{ConstantMetric, EngineError, GroupSystem};
use crate::diffop::LinDiffOp;
use crate::symbolic_core::{MultiIndex, Poly, RatFunc, Rational};

/// Killing operator of the Euclidean plane, outputs `(Omega_11, Omega_12, Omega_22)`.
pub fn plane_killing_operator() -> LinDiffOp {
    let mut op = LinDiffOp::zero(2, 2, 3);
    op.add_simple(0, 0, Some(0), 2);
    op.add_simple(1, 1, Some(0), 1);
    op.add_simple(1, 0, Some(1), 1);
    op.add_simple(2, 1, Some(1), 2);
    op
}

/// Plane Cauchy operator on `(sigma_11, sigma_12, sigma_22)`.
pub fn cauchy_operator() -> LinDiffOp {
    let mut op = LinDiffOp::zero(2, 3, 2);
    op.add_simple(0, 0, Some(0), 1);
    op.add_simple(0, 1, Some(1), 1);
    op.add_simple(1, 1, Some(0), 1);
    op.add_simple(1, 2, Some(1), 1);
    op
}

/// Stress functions `(sigma_11, sigma_12, sigma_22)` of one potential,
/// derived as the adjoint of the second-order compatibility condition of
/// the Killing operator and normalized so that `sigma_11 = d22 phi`.
pub fn airy_parametrization() -> Result<LinDiffOp, EngineError> {
    let cc = plane_killing_operator().compatibility_conditions(2)?;
    let row = (0..cc.m_out())
        .map(|a| cc.row(a))
        .find(|r| r.order() == 2)
        .ok_or_else(|| EngineError::Unsupported("no second-order condition".into()))?;
    let tau = row.formal_adjoint();
    // the pairing counts Omega_12 twice, so sigma_12 = tau_12 / 2
    let mut sigma = LinDiffOp::zero(2, 1, 3);
    for ((a, k, mu), c) in tau.coeffs() {
        let c = if *a == 1 { c.scale(&Rational::new(1.into(), 2.into())) } else { c.clone() };
        sigma.add_coeff(*a, *k, mu.clone(), c);
    }
    let lead = sigma
        .coeff(0, 0, &MultiIndex::from_slice(&[0, 2]))
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| EngineError::Unsupported("unexpected Airy shape".into()))?;
    Ok(sigma.scale(&(Rational::one() / lead)))
}

#[derive(Clone, Debug)]
pub struct MaxwellReport {
    /// `J^i = d_r F^{ir}` on the six components `F^{ij}`, `i < j`.
    pub induction: LinDiffOp,
    /// Compatibility conditions of `induction` up to order one.
    pub conservation: LinDiffOp,
    /// `conservation` is a nonzero multiple of `d_i J^i`.
    pub conservation_is_divergence: bool,
    /// `sigma^i_j` in the ring of the six `F_kl`, `k < l`.
    pub stress: Vec<Vec<Poly>>,
    pub stress_trace: Poly,
}

fn skew_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Second Maxwell block over a constant metric of dimension `n`.
pub fn maxwell_block(metric: &ConstantMetric) -> Result<MaxwellReport, EngineError> {
    let n = metric.n();
    let ps = skew_pairs(n);
    let pos = |i: usize, j: usize| -> Option<(usize, i64)> {
        if i < j {
            ps.iter().position(|p| *p == (i, j)).map(|p| (p, 1))
        } else if i > j {
            ps.iter().position(|p| *p == (j, i)).map(|p| (p, -1))
        } else {
            None
        }
    };
    let mut induction = LinDiffOp::zero(n, ps.len(), n);
    for i in 0..n {
        for r in 0..n {
            if let Some((p, s)) = pos(i, r) {
                induction.add_simple(i, p, Some(r), s);
            }
        }
    }
    let conservation = induction.compatibility_conditions(1)?;
    let conservation_is_divergence = conservation.m_out() == 1 && {
        let c0 = conservation.coeff(0, 0, &MultiIndex::unit(n, 0));
        !c0.is_zero()
            && conservation.coeffs().len() == n
            && (0..n).all(|i| conservation.coeff(0, i, &MultiIndex::unit(n, i)) == c0)
    };

    let nv = ps.len();
    let lower = |k: usize, l: usize| -> Poly {
        match pos(k, l) {
            Some((p, s)) => Poly::var(nv, p).scale(&Rational::from_integer(s.into())),
            None => Poly::zero(nv),
        }
    };
    let upper = |i: usize, j: usize| -> Poly {
        let mut acc = Poly::zero(nv);
        for k in 0..n {
            for l in 0..n {
                let c = metric.upper(i, k) * metric.upper(j, l);
                if !c.is_zero() {
                    acc = &acc + &lower(k, l).scale(&c);
                }
            }
        }
        acc
    };
    let mut contraction = Poly::zero(nv);
    for r in 0..n {
        for s in 0..n {
            contraction = &contraction + &(&upper(r, s) * &lower(r, s));
        }
    }
    let quarter = Rational::new(1.into(), 4.into());
    let stress: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = (0..n).fold(Poly::zero(nv), |acc, r| &acc + &(&upper(i, r) * &lower(r, j)));
                    if i == j {
                        s = &s + &contraction.scale(&quarter);
                    }
                    s
                })
                .collect()
        })
        .collect();
    let stress_trace = (0..n).fold(Poly::zero(nv), |acc, i| &acc + &stress[i][i]);
    Ok(MaxwellReport { induction, conservation, conservation_is_divergence, stress, stress_trace })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmProjection {
    pub b: Vec<Poly>,
    pub f: Vec<Vec<Poly>>,
    /// `F_ij = n (d_j A_i - d_i A_j)`.
    pub matches_closed_form: bool,
    /// `dF = 0`.
    pub closed: bool,
}

/// `B_i = n (d_i A - A_i)` and `F = dB` for a section `(A, A_i)`.
pub fn conformal_em_projection(a: &Poly, ai: &[Poly]) -> EmProjection {
    let n = ai.len();
    let nr = Rational::from_integer((n as i64).into());
    let b: Vec<Poly> = (0..n).map(|i| (&a.diff(i) - &ai[i]).scale(&nr)).collect();
    let f: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| &b[j].diff(i) - &b[i].diff(j)).collect()).collect();
    let matches_closed_form =
        (0..n).all(|i| (0..n).all(|j| f[i][j] == (&ai[i].diff(j) - &ai[j].diff(i)).scale(&nr)));
    let closed = (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| (&(&f[j][k].diff(i) + &f[k][i].diff(j)) + &f[i][j].diff(k)).is_zero())
        })
    });
    EmProjection { b, f, matches_closed_form, closed }
}

/// Residual operators on the parameters for the two reductions
/// `(d_i A - A_i) - (d_i xi^r_r - xi^r_ri) / n` and
/// `d_i A_j - (d_i xi^r_rj - xi^r_rij) / n`, with jets given by the
/// parametric substitution. All vanish for conformal-type systems.
pub fn jet_reduction_residuals(gs: &GroupSystem) -> Vec<LinDiffOp> {
    use super::Param;
    let n = gs.n();
    let dim = gs.dim();
    let inv_n = Rational::new(1.into(), (n as i64).into());
    let zero = MultiIndex::zero(n);
    let dmu = |i: usize| MultiIndex::unit(n, i);
    // sum_r L(r, mu + 1_r)
    let trace = |mu: &MultiIndex| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        for r in 0..n {
            for (b, c) in gs.param_jet(r, &mu.inc(r)).into_iter().enumerate() {
                v[b] += c;
            }
        }
        v
    };
    let push = |op: &mut LinDiffOp, coeffs: &[Rational], mu: &MultiIndex, s: &Rational| {
        for (b, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                op.add_coeff(0, b, mu.clone(), RatFunc::constant(n, c * s));
            }
        }
    };
    let mut out = Vec::new();
    let Some(pa) = gs.param_index(Param::Dilatation) else {
        return out;
    };
    let neg_inv = -inv_n.clone();
    for i in 0..n {
        let mut op = LinDiffOp::zero(n, dim, 1);
        op.add_simple(0, pa, Some(i), 1);
        if let Some(pi) = gs.param_index(Param::Elation(i)) {
            op.add_simple(0, pi, None, -1);
        }
        push(&mut op, &trace(&zero), &dmu(i), &neg_inv);
        push(&mut op, &trace(&dmu(i)), &zero, &inv_n);
        out.push(op);
    }
    for i in 0..n {
        for j in 0..n {
            let mut op = LinDiffOp::zero(n, dim, 1);
            if let Some(pj) = gs.param_index(Param::Elation(j)) {
                op.add_simple(0, pj, Some(i), 1);
            }
            push(&mut op, &trace(&dmu(j)), &dmu(i), &neg_inv);
            push(&mut op, &trace(&dmu(i).inc(j)), &zero, &inv_n);
            out.push(op);
        }
    }
    out
}
