#![allow(dead_code)]

use proptest::prelude::*;
use spencer::symbolic_core::{MultiIndex, Poly, RatFunc, Rational};

pub fn poly(s: &str, n: usize) -> Poly {
    Poly::parse_with(s, &Poly::default_names(n)).unwrap()
}

pub fn rf(s: &str, n: usize) -> RatFunc {
    RatFunc::parse_with(s, &Poly::default_names(n)).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Polynomials in `n` variables of degree at most `deg`, small integer coefficients.
pub fn arb_poly(n: usize, deg: u32) -> impl Strategy<Value = Poly> {
    let monos = MultiIndex::up_to_degree(n, deg);
    let len = monos.len();
    prop::collection::vec(-3i64..=3, len).prop_map(move |cs| {
        Poly::from_terms(
            n,
            monos
                .iter()
                .cloned()
                .zip(cs)
                .map(|(m, c)| (m, Rational::from_integer(c.into()))),
        )
    })
}

pub fn arb_ratfunc_poly(n: usize, deg: u32) -> impl Strategy<Value = RatFunc> {
    arb_poly(n, deg).prop_map(RatFunc::from_poly)
}
