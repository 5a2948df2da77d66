//! Maurer-Cartan forms on group coordinates.

use super::StructureConstants;
use crate::symbolic_core::{ExactMatrix, Field, Poly, RatFunc, Rational};

/// `omega[tau][r]` is the coefficient of `da^r` in the form `omega^tau`;
/// `alpha[r][tau]` is the dual frame, so that `alpha . omega = id`.
#[derive(Clone, Debug)]
pub struct MCForms {
    pub p: usize,
    pub omega: Vec<Vec<RatFunc>>,
    pub alpha: Vec<Vec<RatFunc>>,
}

impl MCForms {
    pub fn new(omega: Vec<Vec<RatFunc>>) -> Option<Self> {
        let p = omega.len();
        let alpha = invert(&omega)?;
        Some(MCForms { p, omega, alpha })
    }
}

pub(crate) fn invert(m: &[Vec<RatFunc>]) -> Option<Vec<Vec<RatFunc>>> {
    let p = m.len();
    let nv = m.first()?.first()?.nvars();
    let mat = ExactMatrix::from_rows(m.to_vec(), p, RatFunc::zero(nv));
    let mut cols = Vec::with_capacity(p);
    for j in 0..p {
        let e: Vec<RatFunc> = (0..p)
            .map(|i| if i == j { RatFunc::one(nv) } else { RatFunc::zero(nv) })
            .collect();
        cols.push(mat.solve(&e)?);
    }
    Some((0..p).map(|i| (0..p).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Affine group `x -> a2 x + a1` with forms `da1 - (a1/a2) da2` and `da2 / a2`.
pub fn affine_mc_forms() -> MCForms {
    let a1 = Poly::var(2, 0);
    let a2 = Poly::var(2, 1);
    let one = RatFunc::one(2);
    let zero = RatFunc::zero(2);
    let omega = vec![
        vec![one.clone(), RatFunc::new(-&a1, a2.clone()).unwrap()],
        vec![zero, RatFunc::new(Poly::one(2), a2).unwrap()],
    ];
    MCForms::new(omega).expect("invertible")
}

/// Checks `d_r omega^tau_s - d_s omega^tau_r + c^tau_{rho sigma} omega^rho_r omega^sigma_s = 0`
/// and `alpha . omega = id`.
pub fn mc_verify(forms: &MCForms, c: &StructureConstants) -> Result<(), String> {
    let p = forms.p;
    if c.dim() != p || forms.omega.iter().any(|r| r.len() != p) {
        return Err("shape mismatch".into());
    }
    let nv = forms.omega[0][0].nvars();
    for t in 0..p {
        for r in 0..p {
            for s in r + 1..p {
                let mut v = &forms.omega[t][s].diff(r) - &forms.omega[t][r].diff(s);
                for rho in 0..p {
                    for sig in 0..p {
                        let k = c.get(t, rho, sig);
                        if num_traits::Zero::is_zero(k) {
                            continue;
                        }
                        v = &v + &(&forms.omega[rho][r] * &forms.omega[sig][s]).scale(k);
                    }
                }
                if !v.is_zero() {
                    return Err(format!("Maurer-Cartan residual {v} at tau={t}, r={r}, s={s}"));
                }
            }
        }
    }
    for i in 0..p {
        for j in 0..p {
            let mut v = RatFunc::zero(nv);
            for k in 0..p {
                v = &v + &(&forms.alpha[i][k] * &forms.omega[k][j]);
            }
            let target = if i == j { RatFunc::one(nv) } else { RatFunc::zero(nv) };
            if !v.is_equal(&target) {
                return Err(format!("alpha.omega entry ({i},{j}) is {v}"));
            }
        }
    }
    Ok(())
}

/// A solution of the adjoint-representation system for the affine group.
pub fn affine_adjoint_matrix() -> Vec<Vec<RatFunc>> {
    let a1 = RatFunc::var(2, 0);
    let a2 = RatFunc::var(2, 1);
    vec![vec![a2, -&a1], vec![RatFunc::zero(2), RatFunc::one(2)]]
}

/// Residual `d M^tau_mu / d a^r + c^tau_{rho sigma} omega^rho_r M^sigma_mu`, indexed `[r][tau][mu]`.
pub fn adjoint_rep_residual(forms: &MCForms, c: &StructureConstants, m: &[Vec<RatFunc>]) -> Vec<Vec<Vec<RatFunc>>> {
    let p = forms.p;
    (0..p)
        .map(|r| {
            (0..p)
                .map(|t| {
                    (0..p)
                        .map(|mu| {
                            let mut v = m[t][mu].diff(r);
                            for rho in 0..p {
                                for sig in 0..p {
                                    let k: &Rational = c.get(t, rho, sig);
                                    if num_traits::Zero::is_zero(k) {
                                        continue;
                                    }
                                    v = &v + &(&forms.omega[rho][r] * &m[sig][mu]).scale(k);
                                }
                            }
                            v
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}
