//! Rational functions with a factored denominator.
//!
//! No multivariate gcd is computed. The denominator is kept as a product of
//! monic factors with multiplicities and every operation cancels factors that
//! divide the numerator exactly. Equality is decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};


use super::field::Field;
use super::poly::Poly;
use super::rational::Rational;

#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        RatFunc { num: Poly::zero(nvars), den: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    /// `num / den`; fails on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let c = den.leading_coeff();
        let num = num.scale(&c.recip());
        let den = den.monic();
        let mut r = RatFunc { num, den: Vec::new() };
        if !den.is_constant() {
            r.den.push((den, 1));
        }
        r.reduce();
        Some(r)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::one(self.nvars());
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    fn merge_factor(den: &mut Vec<(Poly, u32)>, f: &Poly, e: u32, max: bool) {
        if let Some(slot) = den.iter_mut().find(|(g, _)| g == f) {
            slot.1 = if max { slot.1.max(e) } else { slot.1 + e };
        } else {
            den.push((f.clone(), e));
        }
    }

    fn cofactor(&self, lcm: &[(Poly, u32)]) -> Poly {
        let mut c = Poly::one(self.nvars());
        for (f, e) in lcm {
            let mine = self.den.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
            if *e > mine {
                c = &c * &f.pow(e - mine);
            }
        }
        c
    }

    pub fn add_ref(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let mut r = RatFunc { num: &self.num + &o.num, den: self.den.clone() };
            r.reduce();
            return r;
        }
        let mut lcm = self.den.clone();
        for (f, e) in &o.den {
            Self::merge_factor(&mut lcm, f, *e, true);
        }
        let num = &(&self.num * &self.cofactor(&lcm)) + &(&o.num * &o.cofactor(&lcm));
        let mut r = RatFunc { num, den: lcm };
        r.reduce();
        r
    }

    pub fn mul_ref(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            Self::merge_factor(&mut den, f, *e, false);
        }
        let mut r = RatFunc { num: &self.num * &o.num, den };
        r.reduce();
        r
    }

    pub fn inverse(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let c = self.num.leading_coeff();
        let f = self.num.monic();
        let num = self.denominator().scale(&c.recip());
        let mut den = Vec::new();
        if !f.is_constant() {
            den.push((f, 1));
        }
        let mut r = RatFunc { num, den };
        r.reduce();
        Some(r)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        let mut r = RatFunc { num: self.num.scale(c), den: self.den.clone() };
        if Zero::is_zero(c) {
            r.den.clear();
        }
        r
    }

    pub fn diff(&self, i: usize) -> RatFunc {
        let mut out = RatFunc { num: self.num.diff(i), den: self.den.clone() };
        out.reduce();
        for (k, (f, e)) in self.den.iter().enumerate() {
            let df = f.diff(i);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            den[k].1 += 1;
            let num = (&self.num * &df).scale(&Rational::from_integer((-(*e as i64)).into()));
            let mut t = RatFunc { num, den };
            t.reduce();
            out = out.add_ref(&t);
        }
        out
    }

    pub fn eval(&self, pt: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, e) in &self.den {
            let v = f.eval(pt);
            for _ in 0..*e {
                d *= &v;
            }
        }
        if Zero::is_zero(&d) {
            return None;
        }
        Some(self.num.eval(pt) / d)
    }

    /// Composition with polynomial substitutions.
    pub fn substitute(&self, subs: &[Poly]) -> Option<RatFunc> {
        let mut r = RatFunc::from_poly(self.num.substitute(subs));
        for (f, e) in &self.den {
            let g = RatFunc::from_poly(f.substitute(subs).pow(*e));
            r = r.mul_ref(&g.inverse()?);
        }
        Some(r)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        format!("({})/({})", self.num.fmt_with(names), self.denominator().fmt_with(names))
    }

    pub fn parse_with(s: &str, names: &[String]) -> Result<RatFunc, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let close = rest.find(")/(").ok_or_else(|| format!("malformed rational function '{s}'"))?;
            let num = Poly::parse_with(&rest[..close], names)?;
            let den_s = rest[close + 3..]
                .strip_suffix(')')
                .ok_or_else(|| format!("malformed rational function '{s}'"))?;
            let den = Poly::parse_with(den_s, names)?;
            RatFunc::new(num, den).ok_or_else(|| "zero denominator".to_string())
        } else {
            Ok(RatFunc::from_poly(Poly::parse_with(s, names)?))
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.denominator() == &o.num * &self.denominator()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&Poly::default_names(self.nvars())))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        self.add_ref(o)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self.add_ref(&-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        self.mul_ref(o)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self.mul_ref(&o.inverse().expect("division by zero rational function"))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

super::poly::owned_ops!(RatFunc);

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.nvars())
    }
    fn is_nil(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inverse()
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        RatFunc::constant(self.nvars(), r.clone())
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}
