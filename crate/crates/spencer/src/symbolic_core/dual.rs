//! Dual numbers `a + b t` with `t^2 = 0`, used for first-order variations.

use super::field::Field;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Dual<F> {
    pub re: F,
    pub eps: F,
}

impl<F: Field> Dual<F> {
    pub fn new(re: F, eps: F) -> Self {
        Dual { re, eps }
    }

    pub fn real(re: F) -> Self {
        let eps = re.zero_like();
        Dual { re, eps }
    }
}

impl<F: Field> Field for Dual<F> {
    fn zero_like(&self) -> Self {
        Dual::real(self.re.zero_like())
    }
    fn one_like(&self) -> Self {
        Dual::real(self.re.one_like())
    }
    fn is_nil(&self) -> bool {
        self.re.is_nil() && self.eps.is_nil()
    }
    fn plus(&self, o: &Self) -> Self {
        Dual::new(self.re.plus(&o.re), self.eps.plus(&o.eps))
    }
    fn minus(&self, o: &Self) -> Self {
        Dual::new(self.re.minus(&o.re), self.eps.minus(&o.eps))
    }
    fn times(&self, o: &Self) -> Self {
        Dual::new(self.re.times(&o.re), self.re.times(&o.eps).plus(&self.eps.times(&o.re)))
    }
    fn negate(&self) -> Self {
        Dual::new(self.re.negate(), self.eps.negate())
    }
    fn recip(&self) -> Option<Self> {
        let r = self.re.recip()?;
        let e = self.eps.times(&r).times(&r).negate();
        Some(Dual::new(r, e))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Dual::real(self.re.from_rational_like(q))
    }
}
