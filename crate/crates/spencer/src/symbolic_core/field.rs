//! Minimal field interface shared by exact scalars.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;

pub trait Field: Clone + Debug + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn from_rational_like(&self, r: &Rational) -> Self;

    fn over(&self, o: &Self) -> Option<Self> {
        Some(self.times(&o.recip()?))
    }

    fn is_equal(&self, o: &Self) -> bool {
        self.minus(o).is_nil()
    }

    fn scaled(&self, r: &Rational) -> Self {
        self.times(&self.from_rational_like(r))
    }
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(num_rational::Ratio::recip(self))
        }
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }
}

/// Sums an iterator of field elements starting from `zero`.
pub fn sum<F: Field>(zero: F, it: impl IntoIterator<Item = F>) -> F {
    it.into_iter().fold(zero, |acc, x| acc.plus(&x))
}
