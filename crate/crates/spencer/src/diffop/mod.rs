//! Linear differential operators with rational-function coefficients.
//!
//! An operator `P` maps `m_in` unknown functions of `n` variables to `m_out`
//! expressions: `(P u)^a = sum c(a, k, mu) d_mu u^k`.

mod certificate;
mod syzygy;
mod text;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::symbolic_core::{MultiIndex, RatFunc, Rational};

pub use certificate::{Bilinear, DivergenceCertificate, VExpr};
pub use syzygy::prolongation_rows;

#[derive(Debug, Error, PartialEq)]
pub enum DiffOpError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no compatibility conditions up to order {bound}")]
    EmptyAtBound { bound: u32 },
    #[error("divergence certificate failed: {0}")]
    CertificateFailed(String),
}

pub type Key = (usize, usize, MultiIndex);

#[derive(Clone, PartialEq)]
pub struct LinDiffOp {
    n: usize,
    m_in: usize,
    m_out: usize,
    coeffs: BTreeMap<Key, RatFunc>,
}

impl LinDiffOp {
    pub fn zero(n: usize, m_in: usize, m_out: usize) -> Self {
        LinDiffOp { n, m_in, m_out, coeffs: BTreeMap::new() }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        let mut p = Self::zero(n, m, m);
        for k in 0..m {
            p.add_const(k, k, MultiIndex::zero(n), Rational::one());
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_in(&self) -> usize {
        self.m_in
    }

    pub fn m_out(&self) -> usize {
        self.m_out
    }

    pub fn coeffs(&self) -> &BTreeMap<Key, RatFunc> {
        &self.coeffs
    }

    pub fn coeff(&self, eq: usize, k: usize, mu: &MultiIndex) -> RatFunc {
        self.coeffs
            .get(&(eq, k, mu.clone()))
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.n))
    }

    pub fn add_coeff(&mut self, eq: usize, k: usize, mu: MultiIndex, c: RatFunc) {
        assert!(eq < self.m_out && k < self.m_in, "index out of range");
        assert_eq!(mu.nvars(), self.n, "multi-index arity");
        if c.is_zero() {
            return;
        }
        let key = (eq, k, mu);
        let v = match self.coeffs.remove(&key) {
            Some(a) => &a + &c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(key, v);
        }
    }

    pub fn add_const(&mut self, eq: usize, k: usize, mu: MultiIndex, c: Rational) {
        let n = self.n;
        self.add_coeff(eq, k, mu, RatFunc::constant(n, c));
    }

    /// Adds `c * d_i u^k` (or `c * u^k` when `deriv` is `None`) to row `eq`.
    pub fn add_simple(&mut self, eq: usize, k: usize, deriv: Option<usize>, c: i64) {
        let mu = match deriv {
            Some(i) => MultiIndex::unit(self.n, i),
            None => MultiIndex::zero(self.n),
        };
        self.add_const(eq, k, mu, Rational::from_integer(c.into()));
    }

    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|(_, _, m)| m.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| c.is_constant())
    }

    pub fn row(&self, eq: usize) -> LinDiffOp {
        let mut r = Self::zero(self.n, self.m_in, 1);
        for ((a, k, mu), c) in &self.coeffs {
            if *a == eq {
                r.coeffs.insert((0, *k, mu.clone()), c.clone());
            }
        }
        r
    }

    /// Operator made of the listed rows, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> LinDiffOp {
        let mut r = Self::zero(self.n, self.m_in, rows.len());
        for (new, &old) in rows.iter().enumerate() {
            for ((a, k, mu), c) in &self.coeffs {
                if *a == old {
                    r.coeffs.insert((new, *k, mu.clone()), c.clone());
                }
            }
        }
        r
    }

    pub fn stack(&self, o: &LinDiffOp) -> Result<LinDiffOp, DiffOpError> {
        if self.n != o.n || self.m_in != o.m_in {
            return Err(DiffOpError::ShapeMismatch("stacking needs equal inputs".into()));
        }
        let mut r = Self::zero(self.n, self.m_in, self.m_out + o.m_out);
        r.coeffs = self.coeffs.clone();
        for ((a, k, mu), c) in &o.coeffs {
            r.coeffs.insert((a + self.m_out, *k, mu.clone()), c.clone());
        }
        Ok(r)
    }

    pub fn add(&self, o: &LinDiffOp) -> Result<LinDiffOp, DiffOpError> {
        if (self.n, self.m_in, self.m_out) != (o.n, o.m_in, o.m_out) {
            return Err(DiffOpError::ShapeMismatch("sum of operators".into()));
        }
        let mut r = self.clone();
        for ((a, k, mu), c) in &o.coeffs {
            r.add_coeff(*a, *k, mu.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn scale(&self, s: &Rational) -> LinDiffOp {
        let mut r = Self::zero(self.n, self.m_in, self.m_out);
        if s.is_zero() {
            return r;
        }
        for (key, c) in &self.coeffs {
            r.coeffs.insert(key.clone(), c.scale(s));
        }
        r
    }

    pub fn neg(&self) -> LinDiffOp {
        self.scale(&-Rational::one())
    }

    pub fn apply(&self, u: &[RatFunc]) -> Result<Vec<RatFunc>, DiffOpError> {
        if u.len() != self.m_in {
            return Err(DiffOpError::ShapeMismatch(format!("expected {} inputs, got {}", self.m_in, u.len())));
        }
        let mut out = vec![RatFunc::zero(self.n); self.m_out];
        let mut cache: BTreeMap<(usize, MultiIndex), RatFunc> = BTreeMap::new();
        for ((a, k, mu), c) in &self.coeffs {
            let d = cache
                .entry((*k, mu.clone()))
                .or_insert_with(|| diff_multi(&u[*k], mu))
                .clone();
            out[*a] = &out[*a] + &(c * &d);
        }
        Ok(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinDiffOp) -> Result<LinDiffOp, DiffOpError> {
        if self.m_in != inner.m_out || self.n != inner.n {
            return Err(DiffOpError::ShapeMismatch(format!(
                "cannot compose {}->{} after {}->{}",
                self.m_in, self.m_out, inner.m_in, inner.m_out
            )));
        }
        let mut r = Self::zero(self.n, inner.m_in, self.m_out);
        let mut by_row: BTreeMap<usize, Vec<(&Key, &RatFunc)>> = BTreeMap::new();
        for e in &inner.coeffs {
            by_row.entry(e.0 .0).or_default().push(e);
        }
        let mut dcache: BTreeMap<(Key, MultiIndex), RatFunc> = BTreeMap::new();
        for ((g, a, nu), qc) in &self.coeffs {
            let Some(terms) = by_row.get(a) else { continue };
            for lam in nu.sub_indices() {
                let b = nu.binom(&lam) as i64;
                let rest = nu.checked_sub(&lam).unwrap();
                for ((_, k, mu), pc) in terms {
                    let key = (((*a), *k, mu.clone()), rest.clone());
                    let dp = dcache.entry(key).or_insert_with(|| diff_multi(pc, &rest)).clone();
                    if dp.is_zero() {
                        continue;
                    }
                    let c = (qc * &dp).scale(&Rational::from_integer(b.into()));
                    r.add_coeff(*g, *k, lam.add(mu), c);
                }
            }
        }
        Ok(r)
    }

    /// Formal adjoint: `v . P u - (ad P v) . u` is a divergence.
    pub fn formal_adjoint(&self) -> LinDiffOp {
        let mut r = Self::zero(self.n, self.m_out, self.m_in);
        for ((a, k, nu), c) in &self.coeffs {
            let sign = if nu.degree() % 2 == 0 { 1 } else { -1 };
            for mu in nu.sub_indices() {
                let rest = nu.checked_sub(&mu).unwrap();
                let d = diff_multi(c, &rest);
                if d.is_zero() {
                    continue;
                }
                let b = sign * nu.binom(&mu) as i64;
                r.add_coeff(*k, *a, mu, d.scale(&Rational::from_integer(b.into())));
            }
        }
        r
    }

    pub fn divergence_certificate(&self) -> DivergenceCertificate {
        DivergenceCertificate::build(self)
    }

    pub fn compatibility_conditions(&self, bound: u32) -> Result<LinDiffOp, DiffOpError> {
        syzygy::compatibility_conditions(self, bound)
    }

    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn from_text(s: &str) -> Result<LinDiffOp, DiffOpError> {
        text::from_text(s)
    }

    /// Human-readable rows using the given unknown names.
    pub fn pretty(&self, unknowns: &[String]) -> Vec<String> {
        let names = crate::symbolic_core::Poly::default_names(self.n);
        (0..self.m_out)
            .map(|a| {
                let mut parts = Vec::new();
                for ((b, k, mu), c) in &self.coeffs {
                    if *b != a {
                        continue;
                    }
                    let d = if mu.degree() == 0 {
                        unknowns[*k].clone()
                    } else {
                        let ix: Vec<String> = mu.to_list().iter().map(|i| (i + 1).to_string()).collect();
                        format!("d{}({})", ix.join(""), unknowns[*k])
                    };
                    let cs = match c.as_constant() {
                        Some(q) if q.is_one() => "+".to_string(),
                        Some(q) if q == -Rational::one() => "-".to_string(),
                        _ => format!("+{}*", c.fmt_with(&names)),
                    };
                    parts.push(format!("{cs}{d}"));
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" ")
                }
            })
            .collect()
    }
}

impl std::fmt::Debug for LinDiffOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn diff_multi(f: &RatFunc, mu: &MultiIndex) -> RatFunc {
    let mut r = f.clone();
    for i in mu.to_list() {
        if r.is_zero() {
            break;
        }
        r = r.diff(i);
    }
    r
}
