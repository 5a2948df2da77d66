//! Gauge potentials, curvature, covariant derivative and the Poincare
//! Euler-Lagrange operator.

use super::mc::{invert, MCForms};
use super::{LieError, StructureConstants};
use crate::symbolic_core::forms::{subsets, wedge_left};
use crate::symbolic_core::{RatFunc, Rational};
use num_traits::Zero;

/// `a[tau][i] = A^tau_i(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePotential {
    pub n: usize,
    pub p: usize,
    pub a: Vec<Vec<RatFunc>>,
}

impl GaugePotential {
    pub fn new(a: Vec<Vec<RatFunc>>) -> Self {
        let p = a.len();
        let n = a.first().map(|r| r.len()).unwrap_or(0);
        GaugePotential { n, p, a }
    }

    pub fn zero(n: usize, p: usize) -> Self {
        GaugePotential { n, p, a: vec![vec![RatFunc::zero(n); n]; p] }
    }
}

/// `f[tau][i][j] = F^tau_{ij}`, skew in `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    pub n: usize,
    pub p: usize,
    pub f: Vec<Vec<Vec<RatFunc>>>,
}

impl GaugeField {
    pub fn new(f: Vec<Vec<Vec<RatFunc>>>) -> Result<Self, String> {
        let p = f.len();
        let n = f.first().map(|r| r.len()).unwrap_or(0);
        for t in 0..p {
            for i in 0..n {
                for j in 0..n {
                    if !(&f[t][i][j] + &f[t][j][i]).is_zero() {
                        return Err(format!("F^{t}_({i}{j}) is not skew"));
                    }
                }
            }
        }
        Ok(GaugeField { n, p, f })
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().flatten().flatten().all(|x| x.is_zero())
    }
}

fn c_nonzero(c: &StructureConstants) -> Vec<(usize, usize, usize, Rational)> {
    let p = c.dim();
    let mut v = Vec::new();
    for t in 0..p {
        for r in 0..p {
            for s in 0..p {
                let k = c.get(t, r, s);
                if !k.is_zero() {
                    v.push((t, r, s, k.clone()));
                }
            }
        }
    }
    v
}

/// `F^tau_{ij} = d_i A^tau_j - d_j A^tau_i - c^tau_{rho sigma} A^rho_i A^sigma_j`.
pub fn curvature(a: &GaugePotential, c: &StructureConstants) -> GaugeField {
    let (n, p) = (a.n, a.p);
    let cs = c_nonzero(c);
    let mut f = vec![vec![vec![RatFunc::zero(n); n]; n]; p];
    for t in 0..p {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                f[t][i][j] = &a.a[t][j].diff(i) - &a.a[t][i].diff(j);
            }
        }
    }
    for (t, r, s, k) in &cs {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    f[*t][i][j] = &f[*t][i][j] - &(&a.a[*r][i] * &a.a[*s][j]).scale(k);
                }
            }
        }
    }
    GaugeField { n, p, f }
}

/// Linearization of [`curvature`] at `a` in the direction `da`.
pub fn curvature_variation(a: &GaugePotential, da: &GaugePotential, c: &StructureConstants) -> GaugeField {
    let (n, p) = (a.n, a.p);
    let mut f = curvature(da, &StructureConstants::zero(p)).f;
    for (t, r, s, k) in c_nonzero(c) {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let q = &(&da.a[r][i] * &a.a[s][j]) + &(&a.a[r][i] * &da.a[s][j]);
                    f[t][i][j] = &f[t][i][j] - &q.scale(&k);
                }
            }
        }
    }
    GaugeField { n, p, f }
}

/// Flat potential `A = -omega(b) db` obtained from a map `x -> b(x)` into the group.
pub fn flat_potential(forms: &MCForms, b: &[RatFunc]) -> GaugePotential {
    let p = forms.p;
    let n = b[0].nvars();
    let subs_ok = |f: &RatFunc| -> RatFunc {
        let nums: Vec<_> = b.iter().map(|x| x.numerator().clone()).collect();
        let dens: Vec<_> = b.iter().map(|x| x.denominator()).collect();
        compose_rational(f, &nums, &dens, n)
    };
    let om: Vec<Vec<RatFunc>> = forms.omega.iter().map(|row| row.iter().map(&subs_ok).collect()).collect();
    let mut a = vec![vec![RatFunc::zero(n); n]; p];
    for t in 0..p {
        for i in 0..n {
            let mut v = RatFunc::zero(n);
            for r in 0..p {
                v = &v + &(&om[t][r] * &b[r].diff(i));
            }
            a[t][i] = -&v;
        }
    }
    GaugePotential { n, p, a }
}

// f(b1, .., bp) with each b_k = nums[k] / dens[k], computed by homogenising.
fn compose_rational(f: &RatFunc, nums: &[crate::symbolic_core::Poly], dens: &[crate::symbolic_core::Poly], n: usize) -> RatFunc {
    let eval_poly = |p: &crate::symbolic_core::Poly| -> RatFunc {
        let mut acc = RatFunc::zero(n);
        for (m, c) in p.terms() {
            let mut t = RatFunc::constant(n, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &RatFunc::new(nums[k].clone(), dens[k].clone()).unwrap();
                }
            }
            acc = &acc + &t;
        }
        acc
    };
    &eval_poly(f.numerator()) / &eval_poly(&f.denominator())
}

/// Lie-algebra valued `r`-form: `comps[tau][I]` over increasing index sets `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgForm {
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub comps: Vec<Vec<RatFunc>>,
}

impl AlgForm {
    pub fn zero(n: usize, p: usize, r: usize) -> Self {
        let k = subsets(n, r).len();
        AlgForm { n, p, r, comps: vec![vec![RatFunc::zero(n); k]; p] }
    }

    pub fn from_functions(lambda: Vec<RatFunc>) -> Self {
        let n = lambda[0].nvars();
        AlgForm { n, p: lambda.len(), r: 0, comps: lambda.into_iter().map(|l| vec![l]).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(|x| x.is_zero())
    }

    /// Component on `dx^i ^ dx^j` (`i < j`) of a 2-form.
    pub fn two_form_entry(&self, tau: usize, i: usize, j: usize) -> RatFunc {
        let sets = subsets(self.n, 2);
        let k = crate::symbolic_core::forms::subset_index(&sets, &[i, j]);
        self.comps[tau][k].clone()
    }
}

/// `(nabla w)^tau = d w^tau - c^tau_{rho sigma} A^rho ^ w^sigma`.
pub fn nabla(a: &GaugePotential, c: &StructureConstants, w: &AlgForm) -> Result<AlgForm, LieError> {
    if w.r >= a.n {
        return Err(LieError::DegreeOverflow(w.r));
    }
    if w.p != a.p || w.n != a.n {
        return Err(LieError::DimensionMismatch("form and potential disagree".into()));
    }
    let (n, p) = (a.n, a.p);
    let src = subsets(n, w.r);
    let dst = subsets(n, w.r + 1);
    let mut out = AlgForm::zero(n, p, w.r + 1);
    for t in 0..p {
        for (ii, set) in src.iter().enumerate() {
            for i in 0..n {
                if let Some((sg, j)) = wedge_left(i, set) {
                    let k = crate::symbolic_core::forms::subset_index(&dst, &j);
                    let d = w.comps[t][ii].diff(i).scale(&Rational::from_integer(sg.into()));
                    out.comps[t][k] = &out.comps[t][k] + &d;
                }
            }
        }
    }
    for (t, r, s, kc) in c_nonzero(c) {
        for (ii, set) in src.iter().enumerate() {
            for i in 0..n {
                if let Some((sg, j)) = wedge_left(i, set) {
                    let k = crate::symbolic_core::forms::subset_index(&dst, &j);
                    let term = (&a.a[r][i] * &w.comps[s][ii]).scale(&(kc.clone() * Rational::from_integer(sg.into())));
                    out.comps[t][k] = &out.comps[t][k] - &term;
                }
            }
        }
    }
    Ok(out)
}

/// `EL_tau = d_i SA^i_tau + c^sigma_{rho tau} A^rho_i SA^i_sigma`; `sa[i][tau]`.
pub fn poincare_el(a: &GaugePotential, c: &StructureConstants, sa: &[Vec<RatFunc>]) -> Vec<RatFunc> {
    let (n, p) = (a.n, a.p);
    let mut out: Vec<RatFunc> = (0..p)
        .map(|t| (0..n).fold(RatFunc::zero(n), |acc, i| &acc + &sa[i][t].diff(i)))
        .collect();
    for (s, r, t, k) in c_nonzero(c) {
        for i in 0..n {
            out[t] = &out[t] + &(&a.a[r][i] * &sa[i][s]).scale(&k);
        }
    }
    out
}

/// `sum (nabla lambda).SA + sum lambda.EL - d_i(lambda^tau SA^i_tau)`; zero exactly.
pub fn poincare_duality_residual(a: &GaugePotential, c: &StructureConstants, lambda: &[RatFunc], sa: &[Vec<RatFunc>]) -> RatFunc {
    let n = a.n;
    let nl = nabla(a, c, &AlgForm::from_functions(lambda.to_vec())).expect("0-form");
    let el = poincare_el(a, c, sa);
    let mut v = RatFunc::zero(n);
    for t in 0..a.p {
        for i in 0..n {
            v = &v + &(&nl.comps[t][i] * &sa[i][t]);
            v = &v - &(&lambda[t] * &sa[i][t]).diff(i);
        }
        v = &v + &(&lambda[t] * &el[t]);
    }
    v
}

/// Square matrix of rational functions.
pub type RMat = Vec<Vec<RatFunc>>;

fn mat_mul(a: &RMat, b: &RMat) -> RMat {
    let n = a[0][0].nvars();
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(RatFunc::zero(n), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn mat_add(a: &RMat, b: &RMat, sign: i64) -> RMat {
    let s = Rational::from_integer(sign.into());
    a.iter()
        .zip(b)
        .map(|(r, q)| r.iter().zip(q).map(|(x, y)| x + &y.scale(&s)).collect())
        .collect()
}

fn mat_diff(a: &RMat, i: usize) -> RMat {
    a.iter().map(|r| r.iter().map(|x| x.diff(i)).collect()).collect()
}

/// Finite gauge transformation `A'_i = b^-1 A_i b + b^-1 d_i b`.
pub fn matrix_gauge_transform(a: &[RMat], b: &RMat) -> Option<Vec<RMat>> {
    let bi = invert(b)?;
    Some(
        a.iter()
            .enumerate()
            .map(|(i, ai)| mat_add(&mat_mul(&mat_mul(&bi, ai), b), &mat_mul(&bi, &mat_diff(b, i)), 1))
            .collect(),
    )
}

/// `F_ij = d_i A_j - d_j A_i + [A_i, A_j]`, indexed `[i][j]`.
pub fn matrix_curvature(a: &[RMat]) -> Vec<Vec<RMat>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = mat_add(&mat_diff(&a[j], i), &mat_diff(&a[i], j), -1);
                    let comm = mat_add(&mat_mul(&a[i], &a[j]), &mat_mul(&a[j], &a[i]), -1);
                    mat_add(&d, &comm, 1)
                })
                .collect()
        })
        .collect()
}

/// `b^-1 F b` for each component.
pub fn conjugate(f: &[Vec<RMat>], b: &RMat) -> Option<Vec<Vec<RMat>>> {
    let bi = invert(b)?;
    Some(f.iter().map(|row| row.iter().map(|m| mat_mul(&mat_mul(&bi, m), b)).collect()).collect())
}
