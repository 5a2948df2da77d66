//! Truncated multivariate power series with coefficients in a field.
//!
//! Used both for Taylor data at a point and for jet composition. A series
//! carries its truncation order; differentiation lowers it by one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::field::Field;
use super::multiindex::MultiIndex;
use super::poly::Poly;
use super::rational::Rational;

#[derive(Clone, Debug)]
pub struct TruncSeries<F> {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<MultiIndex, F>,
    zero: F,
}

impl<F: Field> TruncSeries<F> {
    pub fn zero(nvars: usize, order: u32, zero: F) -> Self {
        TruncSeries { nvars, order, coeffs: BTreeMap::new(), zero }
    }

    pub fn constant(nvars: usize, order: u32, c: F) -> Self {
        let zero = c.zero_like();
        let mut s = Self::zero(nvars, order, zero);
        s.set(MultiIndex::zero(nvars), c);
        s
    }

    /// The series `h_i`.
    pub fn var(nvars: usize, order: u32, i: usize, proto: &F) -> Self {
        let mut s = Self::zero(nvars, order, proto.zero_like());
        if order >= 1 {
            s.set(MultiIndex::unit(nvars, i), proto.one_like());
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, F> {
        &self.coeffs
    }

    pub fn coeff(&self, m: &MultiIndex) -> F {
        self.coeffs.get(m).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn set(&mut self, m: MultiIndex, c: F) {
        if m.degree() > self.order || c.is_nil() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }

    fn add_to(&mut self, m: MultiIndex, c: F) {
        if m.degree() > self.order || c.is_nil() {
            return;
        }
        let v = match self.coeffs.get(&m) {
            Some(a) => a.plus(&c),
            None => c,
        };
        self.set(m, v);
    }

    /// Derivative `d^mu f(0)`, i.e. `mu!` times the coefficient.
    pub fn derivative_at_origin(&self, mu: &MultiIndex) -> F {
        let f = Rational::from_integer(mu.factorial());
        self.coeff(mu).scaled(&f)
    }

    /// Builds a series from derivative values `d^mu f(0)`.
    pub fn from_derivatives(nvars: usize, order: u32, zero: F, it: impl IntoIterator<Item = (MultiIndex, F)>) -> Self {
        let mut s = Self::zero(nvars, order, zero);
        for (m, d) in it {
            let f = Rational::new(BigInt::one(), m.factorial());
            s.set(m.clone(), d.scaled(&f));
        }
        s
    }

    pub fn truncate(&self, order: u32) -> Self {
        let mut s = Self::zero(self.nvars, order.min(self.order), self.zero.clone());
        for (m, c) in &self.coeffs {
            s.set(m.clone(), c.clone());
        }
        s
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut s = self.truncate(self.order.min(o.order));
        for (m, c) in &o.coeffs {
            s.add_to(m.clone(), c.clone());
        }
        s
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }

    pub fn negate(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = c.negate();
        }
        s
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut s = Self::zero(self.nvars, self.order, self.zero.clone());
        for (m, a) in &self.coeffs {
            s.set(m.clone(), a.times(c));
        }
        s
    }

    pub fn times(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut s = Self::zero(self.nvars, order, self.zero.clone());
        for (m1, a) in &self.coeffs {
            for (m2, b) in &o.coeffs {
                if m1.degree() + m2.degree() <= order {
                    s.add_to(m1.add(m2), a.times(b));
                }
            }
        }
        s
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    pub fn recip(&self) -> Option<Self> {
        let c = self.constant_term();
        let ci = c.recip()?;
        let mut r = self.clone();
        r.coeffs.remove(&MultiIndex::zero(self.nvars));
        let r = r.scale(&ci.negate());
        let mut acc = Self::constant(self.nvars, self.order, ci.one_like());
        let mut pw = acc.clone();
        for _ in 0..self.order {
            pw = pw.times(&r);
            acc = acc.plus(&pw);
        }
        Some(acc.scale(&ci))
    }

    pub fn diff(&self, i: usize) -> Self {
        let mut s = Self::zero(self.nvars, self.order.saturating_sub(1), self.zero.clone());
        for (m, c) in &self.coeffs {
            let e = m.get(i);
            if e > 0 {
                s.set(m.dec(i).unwrap(), c.scaled(&Rational::from_integer(e.into())));
            }
        }
        s
    }

    /// Substitutes series without constant term for the variables.
    pub fn compose(&self, inner: &[TruncSeries<F>]) -> Self {
        assert_eq!(inner.len(), self.nvars, "composition arity");
        let nv = inner.first().map(|s| s.nvars).unwrap_or(0);
        let order = inner.iter().map(|s| s.order).min().unwrap_or(self.order).min(self.order);
        for s in inner {
            assert!(s.constant_term().is_nil(), "inner series must vanish at the origin");
        }
        let mut powers: Vec<Vec<TruncSeries<F>>> = inner
            .iter()
            .map(|s| vec![Self::constant(nv, order, self.zero.one_like()), s.truncate(order)])
            .collect();
        let mut out = Self::zero(nv, order, self.zero.clone());
        for (m, c) in &self.coeffs {
            let mut t = Self::constant(nv, order, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().times(&inner[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.times(&powers[i][e as usize]);
                }
            }
            out = out.plus(&t);
        }
        out
    }
}

impl TruncSeries<Rational> {
    /// Taylor expansion of a polynomial at `pt`.
    pub fn taylor(p: &Poly, pt: &[Rational], order: u32) -> Self {
        let n = p.nvars();
        let subs: Vec<Poly> = (0..n)
            .map(|i| &Poly::var(n, i) + &Poly::constant(n, pt[i].clone()))
            .collect();
        let shifted = p.substitute(&subs);
        let mut s = Self::zero(n, order, Rational::from_integer(0.into()));
        for (m, c) in shifted.terms() {
            s.set(m.clone(), c.clone());
        }
        s
    }
}

impl<F: Field> Field for TruncSeries<F> {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.order, self.zero.clone())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.nvars, self.order, self.zero.one_like())
    }
    fn is_nil(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        TruncSeries::plus(self, o)
    }
    fn minus(&self, o: &Self) -> Self {
        TruncSeries::minus(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        TruncSeries::times(self, o)
    }
    fn negate(&self) -> Self {
        TruncSeries::negate(self)
    }
    fn recip(&self) -> Option<Self> {
        TruncSeries::recip(self)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::constant(self.nvars, self.order, self.zero.from_rational_like(r))
    }
}
