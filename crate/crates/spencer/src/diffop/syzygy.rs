//! Compatibility conditions by left-kernel search on prolongation matrices.

use std::collections::BTreeMap;

use super::{diff_multi, DiffOpError, LinDiffOp};
use crate::symbolic_core::{Elim, ExactMatrix, MultiIndex, RatFunc, Rational};

type Row = BTreeMap<(usize, MultiIndex), RatFunc>;

/// Rows `d_nu (P u)^a` for `|nu| <= s`, expanded in the jets of `u`.
pub fn prolongation_rows(op: &LinDiffOp, s: u32) -> Vec<((usize, MultiIndex), Row)> {
    let n = op.n();
    let mut by_eq: BTreeMap<usize, Vec<(usize, &MultiIndex, &RatFunc)>> = BTreeMap::new();
    for ((a, k, mu), c) in op.coeffs() {
        by_eq.entry(*a).or_default().push((*k, mu, c));
    }
    let mut out = Vec::new();
    for nu in MultiIndex::up_to_degree(n, s) {
        for a in 0..op.m_out() {
            let mut row = Row::new();
            if let Some(terms) = by_eq.get(&a) {
                for lam in nu.sub_indices() {
                    let rest = nu.checked_sub(&lam).unwrap();
                    let b = Rational::from_integer((nu.binom(&lam) as i64).into());
                    for (k, mu, c) in terms {
                        let d = diff_multi(c, &rest);
                        if d.is_zero() {
                            continue;
                        }
                        let key = (*k, lam.add(mu));
                        let v = match row.remove(&key) {
                            Some(x) => &x + &d.scale(&b),
                            None => d.scale(&b),
                        };
                        if !v.is_zero() {
                            row.insert(key, v);
                        }
                    }
                }
            }
            out.push(((a, nu.clone()), row));
        }
    }
    out
}

trait CoeffField: Elim {
    fn from_rf(r: &RatFunc, n: usize) -> Self;
    fn to_rf(&self, n: usize) -> RatFunc;
    fn dx(&self, i: usize) -> Self;
    fn zero_of(n: usize) -> Self;
}

impl CoeffField for Rational {
    fn from_rf(r: &RatFunc, _: usize) -> Self {
        r.as_constant().expect("constant coefficient")
    }
    fn to_rf(&self, n: usize) -> RatFunc {
        RatFunc::constant(n, self.clone())
    }
    fn dx(&self, _: usize) -> Self {
        Rational::from_integer(0.into())
    }
    fn zero_of(_: usize) -> Self {
        Rational::from_integer(0.into())
    }
}

impl CoeffField for RatFunc {
    fn from_rf(r: &RatFunc, _: usize) -> Self {
        r.clone()
    }
    fn to_rf(&self, _: usize) -> RatFunc {
        self.clone()
    }
    fn dx(&self, i: usize) -> Self {
        self.diff(i)
    }
    fn zero_of(n: usize) -> Self {
        RatFunc::zero(n)
    }
}

pub(super) fn compatibility_conditions(op: &LinDiffOp, bound: u32) -> Result<LinDiffOp, DiffOpError> {
    if op.has_constant_coefficients() {
        search::<Rational>(op, bound)
    } else {
        search::<RatFunc>(op, bound)
    }
}

fn search<F: CoeffField>(op: &LinDiffOp, bound: u32) -> Result<LinDiffOp, DiffOpError> {
    let n = op.n();
    let zero = F::zero_of(n);
    let mut gens: Vec<(u32, Vec<((usize, MultiIndex), F)>)> = Vec::new();
    for s in 0..=bound {
        let rows = prolongation_rows(op, s);
        let row_index: BTreeMap<(usize, MultiIndex), usize> =
            rows.iter().enumerate().map(|(i, (k, _))| (k.clone(), i)).collect();
        let mut cols: BTreeMap<(usize, MultiIndex), usize> = BTreeMap::new();
        for (_, r) in &rows {
            for k in r.keys() {
                let l = cols.len();
                cols.entry(k.clone()).or_insert(l);
            }
        }
        let mut m = ExactMatrix::zeros(rows.len(), cols.len(), zero.clone());
        for (i, (_, r)) in rows.iter().enumerate() {
            for (k, c) in r {
                m.set(i, cols[k], F::from_rf(c, n));
            }
        }
        let kernel = m.left_kernel();
        if kernel.is_empty() {
            continue;
        }
        let (basis, _) = ExactMatrix::from_rows(kernel, rows.len(), zero.clone()).rref();
        let mut span = ExactMatrix::zeros(0, rows.len(), zero.clone());
        for (sg, g) in &gens {
            for rho in MultiIndex::up_to_degree(n, s - sg) {
                let mut v = vec![zero.clone(); rows.len()];
                for ((a, nu), lam) in g {
                    for tau in rho.sub_indices() {
                        let rest = rho.checked_sub(&tau).unwrap();
                        let mut d = lam.clone();
                        for i in rest.to_list() {
                            d = d.dx(i);
                        }
                        if d.is_nil() {
                            continue;
                        }
                        let b = Rational::from_integer((rho.binom(&tau) as i64).into());
                        let idx = row_index[&(*a, tau.add(nu))];
                        v[idx] = v[idx].plus(&d.scaled(&b));
                    }
                }
                span.push_row(v);
            }
        }
        let mut rank = span.rank();
        for b in basis {
            let mut trial = span.clone();
            trial.push_row(b.clone());
            let r2 = trial.rank();
            if r2 > rank {
                rank = r2;
                span = trial;
                let b = F::normalize_vector(&b);
                let g: Vec<((usize, MultiIndex), F)> = rows
                    .iter()
                    .zip(b)
                    .filter(|(_, c)| !c.is_nil())
                    .map(|((k, _), c)| (k.clone(), c))
                    .collect();
                gens.push((s, g));
            }
        }
    }
    if gens.is_empty() {
        return Err(DiffOpError::EmptyAtBound { bound });
    }
    let mut q = LinDiffOp::zero(n, op.m_out(), gens.len());
    for (i, (_, g)) in gens.iter().enumerate() {
        for ((a, nu), c) in g {
            q.add_coeff(i, *a, nu.clone(), c.to_rf(n));
        }
    }
    Ok(q)
}
