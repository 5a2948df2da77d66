//! Divergence certificates built by repeated integration by parts.

use std::collections::BTreeMap;

use super::{diff_multi, DiffOpError, LinDiffOp};
use crate::symbolic_core::{MultiIndex, RatFunc, Rational};

/// Linear expression in the jets of `v`: `(a, beta) -> c` means `c * d_beta v^a`.
pub type VExpr = BTreeMap<(usize, MultiIndex), RatFunc>;

/// Bilinear expression `(beta, a, k, gamma) -> c` meaning `c * d_beta v^a * d_gamma u^k`.
pub type Bilinear = BTreeMap<(MultiIndex, usize, usize, MultiIndex), RatFunc>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, RatFunc>, k: K, c: RatFunc) {
    if c.is_zero() {
        return;
    }
    match m.remove(&k) {
        Some(a) => {
            let s = &a + &c;
            if !s.is_zero() {
                m.insert(k, s);
            }
        }
        None => {
            m.insert(k, c);
        }
    }
}

/// Total derivative of a `v`-side expression.
pub fn total_diff(w: &VExpr, i: usize) -> VExpr {
    let mut out = VExpr::new();
    for ((a, beta), c) in w {
        add_to(&mut out, (*a, beta.inc(i)), c.clone());
        add_to(&mut out, (*a, beta.clone()), c.diff(i));
    }
    out
}

/// Total derivative of a bilinear expression.
pub fn bilinear_diff(b: &Bilinear, i: usize) -> Bilinear {
    let mut out = Bilinear::new();
    for ((beta, a, k, gamma), c) in b {
        add_to(&mut out, (beta.inc(i), *a, *k, gamma.clone()), c.clone());
        add_to(&mut out, (beta.clone(), *a, *k, gamma.inc(i)), c.clone());
        add_to(&mut out, (beta.clone(), *a, *k, gamma.clone()), c.diff(i));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceCertificate {
    pub n: usize,
    /// `fluxes[r]` is the component `J^r`.
    pub fluxes: Vec<Bilinear>,
}

impl DivergenceCertificate {
    pub fn build(op: &LinDiffOp) -> Self {
        let n = op.n();
        let mut fluxes = vec![Bilinear::new(); n];
        for ((a, k, mu), c) in op.coeffs() {
            let mut w = VExpr::new();
            w.insert((*a, MultiIndex::zero(n)), c.clone());
            let mut mu = mu.clone();
            // W d_mu u = d_i(W d_{mu-1_i} u) - (D_i W) d_{mu-1_i} u
            while let Some(i) = (0..n).find(|&i| mu.get(i) > 0) {
                let lower = mu.dec(i).unwrap();
                for ((b, beta), wc) in &w {
                    add_to(&mut fluxes[i], (beta.clone(), *b, *k, lower.clone()), wc.clone());
                }
                w = total_diff(&w, i)
                    .into_iter()
                    .map(|(key, c)| (key, -&c))
                    .collect();
                mu = lower;
            }
        }
        DivergenceCertificate { n, fluxes }
    }

    /// `v . P u - (ad P v) . u - sum_r D_r J^r`, which vanishes for a valid certificate.
    pub fn residual(&self, op: &LinDiffOp) -> Bilinear {
        let n = op.n();
        let zero = MultiIndex::zero(n);
        let mut res = Bilinear::new();
        for ((a, k, mu), c) in op.coeffs() {
            add_to(&mut res, (zero.clone(), *a, *k, mu.clone()), c.clone());
        }
        for ((k, a, mu), c) in op.formal_adjoint().coeffs() {
            add_to(&mut res, (mu.clone(), *a, *k, zero.clone()), -c);
        }
        for (r, j) in self.fluxes.iter().enumerate() {
            for (key, c) in bilinear_diff(j, r) {
                add_to(&mut res, key, -&c);
            }
        }
        res
    }

    pub fn verify(&self, op: &LinDiffOp) -> Result<(), DiffOpError> {
        let res = self.residual(op);
        match res.iter().next() {
            None => Ok(()),
            Some(((beta, a, k, gamma), c)) => Err(DiffOpError::CertificateFailed(format!(
                "leftover term {c} * d{beta:?} v{a} * d{gamma:?} u{k}"
            ))),
        }
    }

    /// Evaluates `J^r` on concrete rational-function data.
    pub fn evaluate(&self, v: &[RatFunc], u: &[RatFunc]) -> Vec<RatFunc> {
        let n = self.n;
        self.fluxes
            .iter()
            .map(|j| {
                let mut acc = RatFunc::zero(n);
                for ((beta, a, k, gamma), c) in j {
                    let t = &(c * &diff_multi(&v[*a], beta)) * &diff_multi(&u[*k], gamma);
                    acc = &acc + &t;
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        DivergenceCertificate {
            n: self.n,
            fluxes: self
                .fluxes
                .iter()
                .map(|j| j.iter().map(|(k, c)| (k.clone(), c.scale(s))).filter(|(_, c)| !c.is_zero()).collect())
                .collect(),
        }
    }
}
