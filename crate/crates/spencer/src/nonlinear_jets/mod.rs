//! Jets of invertible maps, their composition and inversion, and the
//! nonlinear Spencer operator `f_{q+1} -> chi_q`.
//!
//! Jet values are stored as derivatives `f^k_mu` (not Taylor coefficients).
//! The coefficient type is generic: plain rationals for jets at a point,
//! `RatFunc` for sections given as functions of `x`, truncated series for
//! sections known near a sample point, and `Dual` on top of any of these
//! for first-order variations.

use std::collections::BTreeMap;

use rand::Rng;

use crate::symbolic_core::{Dual, Field, MultiIndex, Poly, RatFunc, Rational, TruncSeries};

mod variation;

pub use variation::*;

/// Highest jet order accepted by the groupoid operations.
pub const MAX_ORDER: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NonlinearError {
    #[error("jet orders do not match: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("jet order {0} is above the supported maximum {MAX_ORDER}")]
    OrderTooHigh(u32),
    #[error("source of the left jet differs from the target of the right jet")]
    BasePointMismatch,
    #[error("first-order part is not invertible")]
    SingularJet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unsupported order {0} for this formula")]
    UnsupportedOrder(u32),
}

/// Coefficient fields with partial derivatives in the source variables.
pub trait DiffField: Field {
    fn d(&self, i: usize) -> Self;
}

impl DiffField for RatFunc {
    fn d(&self, i: usize) -> Self {
        self.diff(i)
    }
}

impl<F: Field> DiffField for TruncSeries<F> {
    fn d(&self, i: usize) -> Self {
        self.diff(i)
    }
}

impl<F: DiffField> DiffField for Dual<F> {
    fn d(&self, i: usize) -> Self {
        Dual::new(self.re.d(i), self.eps.d(i))
    }
}

fn kronecker<F: Field>(zero: &F, a: usize, b: usize) -> F {
    if a == b {
        zero.one_like()
    } else {
        zero.clone()
    }
}

fn binom_q(mu: &MultiIndex, la: &MultiIndex) -> Rational {
    Rational::from_integer(mu.binom(la).into())
}

/// Determinant by cofactor expansion; fine for the small sizes used here.
pub fn det<F: Field>(m: &[Vec<F>], zero: &F) -> F {
    match m.len() {
        0 => zero.one_like(),
        1 => m[0][0].clone(),
        2 => m[0][0].times(&m[1][1]).minus(&m[0][1].times(&m[1][0])),
        n => {
            let mut acc = zero.clone();
            for j in 0..n {
                if m[0][j].is_nil() {
                    continue;
                }
                let t = m[0][j].times(&det(&minor(m, 0, j), zero));
                acc = if j % 2 == 0 { acc.plus(&t) } else { acc.minus(&t) };
            }
            acc
        }
    }
}

fn minor<F: Field>(m: &[Vec<F>], r: usize, c: usize) -> Vec<Vec<F>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Inverse through the adjugate, so only the determinant is inverted.
pub fn mat_inverse<F: Field>(m: &[Vec<F>], zero: &F) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let dinv = det(m, zero).recip()?;
    if n == 1 {
        return Some(vec![vec![dinv]]);
    }
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = det(&minor(m, j, i), zero).times(&dinv);
                        if (i + j) % 2 == 0 {
                            c
                        } else {
                            c.negate()
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Vertical jet `xi^k_mu`, `|mu| <= q`, of a vector field.
#[derive(Clone, Debug)]
pub struct VerticalJet<F> {
    n: usize,
    q: u32,
    zero: F,
    comps: BTreeMap<(usize, MultiIndex), F>,
}

impl<F: Field> VerticalJet<F> {
    pub fn zero(n: usize, q: u32, zero: F) -> Self {
        VerticalJet { n, q, zero, comps: BTreeMap::new() }
    }

    pub fn from_fn(n: usize, q: u32, zero: F, mut f: impl FnMut(usize, &MultiIndex) -> F) -> Self {
        let mut v = Self::zero(n, q, zero);
        for k in 0..n {
            for mu in MultiIndex::up_to_degree(n, q) {
                let c = f(k, &mu);
                v.set(k, mu, c);
            }
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn get(&self, k: usize, mu: &MultiIndex) -> F {
        self.comps.get(&(k, mu.clone())).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn set(&mut self, k: usize, mu: MultiIndex, c: F) {
        if mu.degree() > self.q {
            return;
        }
        if c.is_nil() {
            self.comps.remove(&(k, mu));
        } else {
            self.comps.insert((k, mu), c);
        }
    }

    pub fn truncate(&self, q: u32) -> Self {
        let mut v = Self::zero(self.n, q.min(self.q), self.zero.clone());
        for ((k, mu), c) in &self.comps {
            v.set(*k, mu.clone(), c.clone());
        }
        v
    }

    pub fn plus(&self, o: &Self) -> Self {
        let q = self.q.min(o.q);
        Self::from_fn(self.n, q, self.zero.clone(), |k, mu| self.get(k, mu).plus(&o.get(k, mu)))
    }

    pub fn is_equal(&self, o: &Self) -> bool {
        let q = self.q.min(o.q);
        (0..self.n).all(|k| MultiIndex::up_to_degree(self.n, q).iter().all(|mu| self.get(k, mu).is_equal(&o.get(k, mu))))
    }

    pub fn map<G: Field>(&self, zero: G, f: impl Fn(&F) -> G) -> VerticalJet<G> {
        let mut v = VerticalJet::zero(self.n, self.q, zero);
        for ((k, mu), c) in &self.comps {
            v.set(*k, mu.clone(), f(c));
        }
        v
    }
}

/// Jet `f_q` of an invertible map: source point and values `f^k_mu`, `|mu| <= q`.
#[derive(Clone, Debug)]
pub struct JetOfMap<F> {
    n: usize,
    q: u32,
    source: Vec<F>,
    comps: BTreeMap<(usize, MultiIndex), F>,
}

impl<F: Field> JetOfMap<F> {
    /// Fails when the first-order part is singular.
    pub fn new(
        source: Vec<F>,
        q: u32,
        values: impl IntoIterator<Item = ((usize, MultiIndex), F)>,
    ) -> Result<Self, NonlinearError> {
        let n = source.len();
        if q > MAX_ORDER {
            return Err(NonlinearError::OrderTooHigh(q));
        }
        let mut comps = BTreeMap::new();
        for ((k, mu), c) in values {
            if k >= n || mu.nvars() != n {
                return Err(NonlinearError::Dimension { expected: n, got: k.max(mu.nvars()) });
            }
            if mu.degree() <= q && !c.is_nil() {
                comps.insert((k, mu), c);
            }
        }
        let j = JetOfMap { n, q, source, comps };
        if q >= 1 && det(&j.jacobian(), &j.zero()).is_nil() {
            return Err(NonlinearError::SingularJet);
        }
        Ok(j)
    }

    /// `id_q` at the given point.
    pub fn identity(source: Vec<F>, q: u32) -> Result<Self, NonlinearError> {
        let n = source.len();
        let zero = source[0].zero_like();
        let mut vals = Vec::new();
        for k in 0..n {
            vals.push(((k, MultiIndex::zero(n)), source[k].clone()));
            if q >= 1 {
                vals.push(((k, MultiIndex::unit(n, k)), zero.one_like()));
            }
        }
        Self::new(source, q, vals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    fn zero(&self) -> F {
        self.source[0].zero_like()
    }

    pub fn source(&self) -> &[F] {
        &self.source
    }

    pub fn target(&self) -> Vec<F> {
        (0..self.n).map(|k| self.get(k, &MultiIndex::zero(self.n))).collect()
    }

    pub fn get(&self, k: usize, mu: &MultiIndex) -> F {
        self.comps.get(&(k, mu.clone())).cloned().unwrap_or_else(|| self.zero())
    }

    /// `f^k_i`.
    pub fn jacobian(&self) -> Vec<Vec<F>> {
        (0..self.n).map(|k| (0..self.n).map(|i| self.get(k, &MultiIndex::unit(self.n, i))).collect()).collect()
    }

    pub fn truncate(&self, q: u32) -> Self {
        let q = q.min(self.q);
        JetOfMap {
            n: self.n,
            q,
            source: self.source.clone(),
            comps: self.comps.iter().filter(|((_, mu), _)| mu.degree() <= q).map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }

    pub fn is_equal(&self, o: &Self) -> bool {
        self.n == o.n
            && self.q == o.q
            && self.source.iter().zip(&o.source).all(|(a, b)| a.is_equal(b))
            && (0..self.n).all(|k| MultiIndex::up_to_degree(self.n, self.q).iter().all(|mu| self.get(k, mu).is_equal(&o.get(k, mu))))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> JetOfMap<G> {
        JetOfMap {
            n: self.n,
            q: self.q,
            source: self.source.iter().map(&f).collect(),
            comps: self.comps.iter().map(|(a, c)| (a.clone(), f(c))).collect(),
        }
    }

    /// Series `sum f^k_mu h^mu / mu!` over `1 <= |mu| <= q`.
    fn increments(&self, q: u32) -> Vec<TruncSeries<F>> {
        (0..self.n).map(|u| jet_series(self.n, q, &self.zero(), |m| self.get(u, m), false)).collect()
    }

    /// `self o f`, the jet of the composite at the source of `f`.
    pub fn compose(&self, f: &JetOfMap<F>) -> Result<JetOfMap<F>, NonlinearError> {
        if self.q != f.q {
            return Err(NonlinearError::OrderMismatch { left: self.q, right: f.q });
        }
        if self.n != f.n {
            return Err(NonlinearError::Dimension { expected: self.n, got: f.n });
        }
        if !self.source.iter().zip(f.target()).all(|(a, b)| a.is_equal(&b)) {
            return Err(NonlinearError::BasePointMismatch);
        }
        let (n, q) = (self.n, self.q);
        let zero = self.zero();
        let sf = f.increments(q);
        let mut vals = Vec::new();
        for k in 0..n {
            let c = jet_series(n, q, &zero, |m| self.get(k, m), true).compose(&sf);
            for mu in MultiIndex::up_to_degree(n, q) {
                vals.push(((k, mu.clone()), c.derivative_at_origin(&mu)));
            }
        }
        JetOfMap::new(f.source.clone(), q, vals)
    }

    /// Jet of the inverse map, based at the target.
    pub fn inverse(&self) -> Result<JetOfMap<F>, NonlinearError> {
        let (n, q) = (self.n, self.q);
        let zero = self.zero();
        let linv = mat_inverse(&self.jacobian(), &zero).ok_or(NonlinearError::SingularJet)?;
        let vars: Vec<TruncSeries<F>> = (0..n).map(|i| TruncSeries::var(n, q, i, &zero)).collect();
        let lin: Vec<TruncSeries<F>> = (0..n)
            .map(|j| (0..n).fold(TruncSeries::zero(n, q, zero.clone()), |acc, u| acc.plus(&vars[u].scale(&linv[j][u]))))
            .collect();
        let sf = self.increments(q);
        let mut g = lin.clone();
        for m in 2..=q {
            let mut next = Vec::with_capacity(n);
            for k in 0..n {
                let err = g[k].compose(&sf).minus(&vars[k]);
                let mut part = TruncSeries::zero(n, q, zero.clone());
                for (mono, c) in err.coeffs() {
                    if mono.degree() == m {
                        part.set(mono.clone(), c.clone());
                    }
                }
                next.push(g[k].minus(&part.compose(&lin)));
            }
            g = next;
        }
        let mut vals = Vec::new();
        for k in 0..n {
            vals.push(((k, MultiIndex::zero(n)), self.source[k].clone()));
            for mu in MultiIndex::up_to_degree(n, q).into_iter().filter(|m| m.degree() > 0) {
                vals.push(((k, mu.clone()), g[k].derivative_at_origin(&mu)));
            }
        }
        JetOfMap::new(self.target(), q, vals)
    }
}

fn jet_series<F: Field>(n: usize, q: u32, zero: &F, get: impl Fn(&MultiIndex) -> F, constant: bool) -> TruncSeries<F> {
    TruncSeries::from_derivatives(
        n,
        q,
        zero.clone(),
        MultiIndex::up_to_degree(n, q)
            .into_iter()
            .filter(|m| constant || m.degree() > 0)
            .map(|m| {
                let v = get(&m);
                (m, v)
            }),
    )
}

impl JetOfMap<RatFunc> {
    /// Holonomic section `x -> j_q(f)(x)` of a polynomial map.
    pub fn holonomic(fs: &[Poly], q: u32) -> Result<Self, NonlinearError> {
        let n = fs.len();
        let source = (0..n).map(|i| RatFunc::var(n, i)).collect();
        let mut vals = Vec::new();
        for (k, f) in fs.iter().enumerate() {
            for mu in MultiIndex::up_to_degree(n, q) {
                vals.push(((k, mu.clone()), RatFunc::from_poly(f.diff_multi(&mu))));
            }
        }
        Self::new(source, q, vals)
    }

    /// Substitutes polynomials for the variables everywhere.
    pub fn substitute(&self, subs: &[Poly]) -> Option<Self> {
        let mut comps = BTreeMap::new();
        for (a, c) in &self.comps {
            let v = c.substitute(subs)?;
            if !v.is_zero() {
                comps.insert(a.clone(), v);
            }
        }
        let source = self.source.iter().map(|s| s.substitute(subs)).collect::<Option<Vec<_>>>()?;
        Some(JetOfMap { n: self.n, q: self.q, source, comps })
    }

    /// Polynomial form of the target, when it has one.
    pub fn target_polys(&self) -> Option<Vec<Poly>> {
        self.target().iter().map(|t| t.as_poly().cloned()).collect()
    }

    /// Values at a point; `None` on a pole.
    pub fn at(&self, pt: &[Rational]) -> Option<JetOfMap<Rational>> {
        let mut comps = BTreeMap::new();
        for (a, c) in &self.comps {
            comps.insert(a.clone(), c.eval(pt)?);
        }
        let source = self.source.iter().map(|s| s.eval(pt)).collect::<Option<Vec<_>>>()?;
        Some(JetOfMap { n: self.n, q: self.q, source, comps })
    }
}

/// Nonlinear Spencer operator `chi_q = D-bar f_{q+1}` as a one-form with
/// values in vertical `q`-jets, stored as `chi^k_{mu,i}`.
#[derive(Clone, Debug)]
pub struct ChiForm<F> {
    n: usize,
    q: u32,
    zero: F,
    comps: BTreeMap<(usize, MultiIndex, usize), F>,
}

impl<F: Field> ChiForm<F> {
    pub fn from_components(parts: Vec<VerticalJet<F>>) -> Self {
        let n = parts.len();
        let q = parts.iter().map(VerticalJet::order).min().unwrap_or(0);
        let zero = parts[0].zero.clone();
        let mut comps = BTreeMap::new();
        for (i, p) in parts.iter().enumerate() {
            for ((k, mu), c) in &p.comps {
                if mu.degree() <= q {
                    comps.insert((*k, mu.clone(), i), c.clone());
                }
            }
        }
        ChiForm { n, q, zero, comps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn get(&self, k: usize, mu: &MultiIndex, i: usize) -> F {
        self.comps.get(&(k, mu.clone(), i)).cloned().unwrap_or_else(|| self.zero.clone())
    }

    /// `A^k_i = chi^k_{,i} + delta^k_i`.
    pub fn a(&self, k: usize, i: usize) -> F {
        self.get(k, &MultiIndex::zero(self.n), i).plus(&kronecker(&self.zero, k, i))
    }

    /// `chi_q(d_i)`.
    pub fn component(&self, i: usize) -> VerticalJet<F> {
        VerticalJet::from_fn(self.n, self.q, self.zero.clone(), |k, mu| self.get(k, mu, i))
    }

    /// `chi_q(xi)^k_mu = chi^k_{mu,r} xi^r`.
    pub fn contract(&self, xi: &VerticalJet<F>) -> VerticalJet<F> {
        let z = MultiIndex::zero(self.n);
        VerticalJet::from_fn(self.n, self.q, self.zero.clone(), |k, mu| {
            (0..self.n).fold(self.zero.clone(), |acc, r| acc.plus(&self.get(k, mu, r).times(&xi.get(r, &z))))
        })
    }

    pub fn truncate(&self, q: u32) -> Self {
        ChiForm::from_components((0..self.n).map(|i| self.component(i).truncate(q)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(Field::is_nil)
    }

    /// Components `(k, mu, i)` where the two forms differ, up to the common order.
    pub fn mismatches(&self, o: &Self) -> Vec<(usize, MultiIndex, usize)> {
        let q = self.q.min(o.q);
        let mut out = Vec::new();
        for k in 0..self.n {
            for mu in MultiIndex::up_to_degree(self.n, q) {
                for i in 0..self.n {
                    if !self.get(k, &mu, i).is_equal(&o.get(k, &mu, i)) {
                        out.push((k, mu.clone(), i));
                    }
                }
            }
        }
        out
    }

    pub fn is_equal(&self, o: &Self) -> bool {
        self.n == o.n && self.mismatches(o).is_empty()
    }

    pub fn map<G: Field>(&self, zero: G, f: impl Fn(&F) -> G) -> ChiForm<G> {
        ChiForm { n: self.n, q: self.q, zero, comps: self.comps.iter().map(|(a, c)| (a.clone(), f(c))).collect() }
    }
}

impl ChiForm<RatFunc> {
    pub fn substitute(&self, subs: &[Poly]) -> Option<Self> {
        let mut comps = BTreeMap::new();
        for (a, c) in &self.comps {
            comps.insert(a.clone(), c.substitute(subs)?);
        }
        Some(ChiForm { n: self.n, q: self.q, zero: self.zero.clone(), comps })
    }
}

/// `f_{q+1}` acting on vertical jets at the source, giving the `x`-jets of
/// the pushed field along `f`:
/// `sum_{lambda <= mu} binom(mu, lambda) f^k_{mu - lambda + 1_r} xi^r_lambda`.
pub fn tangent_map<F: Field>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    let q = xi.order();
    if f.order() < q + 1 {
        return Err(NonlinearError::OrderMismatch { left: f.order(), right: q + 1 });
    }
    let n = f.n();
    Ok(VerticalJet::from_fn(n, q, f.zero(), |k, mu| {
        let mut acc = f.zero();
        for la in mu.sub_indices() {
            let rest = mu.checked_sub(&la).unwrap();
            let b = binom_q(mu, &la);
            for r in 0..n {
                let x = xi.get(r, &la);
                if !x.is_nil() {
                    acc = acc.plus(&f.get(k, &rest.inc(r)).times(&x).scaled(&b));
                }
            }
        }
        acc
    }))
}

/// Inverse of [`tangent_map`], solved degree by degree.
pub fn tangent_map_inverse<F: Field>(f: &JetOfMap<F>, v: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    let q = v.order();
    if f.order() < q + 1 {
        return Err(NonlinearError::OrderMismatch { left: f.order(), right: q + 1 });
    }
    let n = f.n();
    let zero = f.zero();
    let ginv = mat_inverse(&f.jacobian(), &zero).ok_or(NonlinearError::SingularJet)?;
    let mut xi = VerticalJet::zero(n, q, zero.clone());
    for d in 0..=q {
        for mu in MultiIndex::of_degree(n, d) {
            let rhs: Vec<F> = (0..n)
                .map(|k| {
                    let mut acc = v.get(k, &mu);
                    for la in mu.sub_indices() {
                        if la == mu {
                            continue;
                        }
                        let rest = mu.checked_sub(&la).unwrap();
                        let b = binom_q(&mu, &la);
                        for r in 0..n {
                            let x = xi.get(r, &la);
                            if !x.is_nil() {
                                acc = acc.minus(&f.get(k, &rest.inc(r)).times(&x).scaled(&b));
                            }
                        }
                    }
                    acc
                })
                .collect();
            for r in 0..n {
                let c = (0..n).fold(zero.clone(), |acc, k| acc.plus(&ginv[r][k].times(&rhs[k])));
                xi.set(r, mu.clone(), c);
            }
        }
    }
    Ok(xi)
}

/// `x`-jets of `eta o f` for a vertical jet `eta` at the target.
pub fn pullback_jet<F: Field>(f: &JetOfMap<F>, eta: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    let q = eta.order();
    if f.order() < q {
        return Err(NonlinearError::OrderMismatch { left: f.order(), right: q });
    }
    let n = f.n();
    let zero = f.zero();
    let sf = f.increments(q);
    let mut out = VerticalJet::zero(n, q, zero.clone());
    for k in 0..n {
        let c = jet_series(n, q, &zero, |m| eta.get(k, m), true).compose(&sf);
        for mu in MultiIndex::up_to_degree(n, q) {
            out.set(k, mu.clone(), c.derivative_at_origin(&mu));
        }
    }
    Ok(out)
}

/// Inverse of [`pullback_jet`]: target jets of `w o f^{-1}`.
pub fn pushforward_jet<F: Field>(f: &JetOfMap<F>, w: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    let q = w.order();
    if f.order() < q {
        return Err(NonlinearError::OrderMismatch { left: f.order(), right: q });
    }
    pullback_jet(&f.truncate(q).inverse()?, w)
}

/// `eta_q = f_{q+1}(xi_q)`, a vertical jet at the target.
pub fn act<F: Field>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    pushforward_jet(f, &tangent_map(f, xi)?)
}

/// `f_{q+1}^{-1}(eta_q)`, a vertical jet at the source.
pub fn act_inverse<F: Field>(f: &JetOfMap<F>, eta: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    tangent_map_inverse(f, &pullback_jet(f, eta)?)
}

/// Linear Spencer operator `(D xi_{q+1})^k_{mu,i} = d_i xi^k_mu - xi^k_{mu+1_i}`.
pub fn linear_spencer<F: DiffField>(xi: &VerticalJet<F>) -> Result<ChiForm<F>, NonlinearError> {
    let q = xi.order().checked_sub(1).ok_or(NonlinearError::UnsupportedOrder(0))?;
    let n = xi.n();
    Ok(ChiForm::from_components(
        (0..n)
            .map(|i| VerticalJet::from_fn(n, q, xi.zero.clone(), |k, mu| xi.get(k, mu).d(i).minus(&xi.get(k, &mu.inc(i)))))
            .collect(),
    ))
}

/// `chi_q = D-bar f_{q+1}`, solving
/// `f_{q+1}(chi_q(d_i))^k_mu = d_i f^k_mu - f^k_{mu+1_i}`.
pub fn nonlinear_spencer<F: DiffField>(f: &JetOfMap<F>) -> Result<ChiForm<F>, NonlinearError> {
    let q = f.order().checked_sub(1).ok_or(NonlinearError::UnsupportedOrder(0))?;
    let n = f.n();
    let parts = (0..n)
        .map(|i| {
            let v = VerticalJet::from_fn(n, q, f.zero(), |k, mu| f.get(k, mu).d(i).minus(&f.get(k, &mu.inc(i))));
            tangent_map_inverse(f, &v)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChiForm::from_components(parts))
}

/// Residuals of the first (needs `q >= 1`) and second (needs `q >= 2`)
/// nonlinear compatibility conditions, over pairs `i < j`.
#[derive(Clone, Debug)]
pub struct CcResiduals<F> {
    /// Indexed by `(k, i, j)`.
    pub first: Vec<((usize, usize, usize), F)>,
    /// Indexed by `(k, l, i, j)`.
    pub second: Vec<((usize, usize, usize, usize), F)>,
}

impl<F: Field> CcResiduals<F> {
    pub fn all_zero(&self) -> bool {
        self.first.iter().all(|(_, r)| r.is_nil()) && self.second.iter().all(|(_, r)| r.is_nil())
    }
}

pub fn compatibility_residuals<F: DiffField>(chi: &ChiForm<F>) -> CcResiduals<F> {
    let n = chi.n();
    let u = |l: usize| MultiIndex::unit(n, l);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if chi.order() >= 1 {
                for k in 0..n {
                    let mut r = chi.a(k, j).d(i).minus(&chi.a(k, i).d(j));
                    for s in 0..n {
                        r = r
                            .minus(&chi.a(s, i).times(&chi.get(k, &u(s), j)))
                            .plus(&chi.a(s, j).times(&chi.get(k, &u(s), i)));
                    }
                    first.push(((k, i, j), r));
                }
            }
            if chi.order() >= 2 {
                for k in 0..n {
                    for l in 0..n {
                        let mut r = chi.get(k, &u(l), j).d(i).minus(&chi.get(k, &u(l), i).d(j));
                        for s in 0..n {
                            r = r
                                .minus(&chi.get(s, &u(l), i).times(&chi.get(k, &u(s), j)))
                                .plus(&chi.get(s, &u(l), j).times(&chi.get(k, &u(s), i)))
                                .minus(&chi.a(s, i).times(&chi.get(k, &u(l).inc(s), j)))
                                .plus(&chi.a(s, j).times(&chi.get(k, &u(l).inc(s), i)));
                        }
                        second.push(((k, l, i, j), r));
                    }
                }
            }
        }
    }
    CcResiduals { first, second }
}

/// Gauge transform `chi' = f_{q+1}^{-1} o chi o j_1(f) + D-bar f_{q+1}`.
/// `chi` lives on the target and must already be evaluated at `f(x)`.
pub fn gauge_transform<F: DiffField>(chi: &ChiForm<F>, f: &JetOfMap<F>) -> Result<ChiForm<F>, NonlinearError> {
    let q = chi.order();
    if f.order() != q + 1 {
        return Err(NonlinearError::OrderMismatch { left: f.order(), right: q + 1 });
    }
    let n = f.n();
    let df = nonlinear_spencer(f)?;
    let target = f.target();
    let parts = (0..n)
        .map(|i| {
            let mut eta = VerticalJet::zero(n, q, f.zero());
            for u in 0..n {
                let c = target[u].d(i);
                if c.is_nil() {
                    continue;
                }
                let comp = chi.component(u);
                eta = VerticalJet::from_fn(n, q, f.zero(), |k, mu| eta.get(k, mu).plus(&comp.get(k, mu).times(&c)));
            }
            Ok(act_inverse(f, &eta)?.plus(&df.component(i)))
        })
        .collect::<Result<Vec<_>, NonlinearError>>()?;
    Ok(ChiForm::from_components(parts))
}

fn small_poly<R: Rng>(n: usize, deg: u32, rng: &mut R) -> Poly {
    Poly::from_terms(
        n,
        MultiIndex::up_to_degree(n, deg)
            .into_iter()
            .filter_map(|m| {
                let c: i64 = rng.gen_range(-2..=2);
                (c != 0).then(|| (m, Rational::from_integer(c.into())))
            }),
    )
}

/// Random polynomial section `x -> f_q(x)` (not holonomic in general).
/// Components have degree at most `deg`; the Jacobian part is close to the identity.
pub fn random_poly_section<R: Rng>(n: usize, q: u32, deg: u32, rng: &mut R) -> JetOfMap<RatFunc> {
    loop {
        let source: Vec<RatFunc> = (0..n).map(|i| RatFunc::var(n, i)).collect();
        let mut vals = Vec::new();
        for k in 0..n {
            for mu in MultiIndex::up_to_degree(n, q) {
                let mut p = small_poly(n, deg, rng);
                match mu.degree() {
                    0 => p = &p + &Poly::var(n, k),
                    1 if mu.get(k) == 1 => p = &p + &Poly::int(n, 3),
                    _ => {}
                }
                vals.push(((k, mu), RatFunc::from_poly(p)));
            }
        }
        if let Ok(j) = JetOfMap::new(source, q, vals) {
            return j;
        }
    }
}

pub fn random_poly_vertical<R: Rng>(n: usize, q: u32, deg: u32, rng: &mut R) -> VerticalJet<RatFunc> {
    VerticalJet::from_fn(n, q, RatFunc::zero(n), |_, _| RatFunc::from_poly(small_poly(n, deg, rng)))
}

fn random_series<R: Rng>(n: usize, order: u32, rng: &mut R) -> TruncSeries<Rational> {
    let mut s = TruncSeries::zero(n, order, Rational::from_integer(0.into()));
    for m in MultiIndex::up_to_degree(n, order) {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        s.set(m, Rational::new(num.into(), den.into()));
    }
    s
}

/// Random section known as truncated series of order `order` around a
/// random rational point.
pub fn random_series_section<R: Rng>(n: usize, q: u32, order: u32, rng: &mut R) -> JetOfMap<TruncSeries<Rational>> {
    loop {
        let source: Vec<TruncSeries<Rational>> = (0..n)
            .map(|i| {
                let x0 = Rational::from_integer(rng.gen_range(-3i64..=3).into());
                TruncSeries::constant(n, order, x0).plus(&TruncSeries::var(n, order, i, &Rational::from_integer(0.into())))
            })
            .collect();
        let mut vals = Vec::new();
        for k in 0..n {
            for mu in MultiIndex::up_to_degree(n, q) {
                vals.push(((k, mu), random_series(n, order, rng)));
            }
        }
        let Ok(j) = JetOfMap::new(source, q, vals) else { continue };
        // the series must be invertible at the sample point, not just nonzero
        if det(&j.jacobian(), &j.zero()).constant_term() != Rational::from_integer(0.into()) {
            return j;
        }
    }
}

pub fn random_series_vertical<R: Rng>(n: usize, q: u32, order: u32, rng: &mut R) -> VerticalJet<TruncSeries<Rational>> {
    let zero = TruncSeries::zero(n, order, Rational::from_integer(0.into()));
    VerticalJet::from_fn(n, q, zero, |_, _| random_series(n, order, rng))
}
