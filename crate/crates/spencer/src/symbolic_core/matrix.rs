//! Dense exact matrices with fraction-free (Bareiss) elimination.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::Field;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::{primitive_integer_vector, Rational};
use crate::par;

/// Integral domain used during fraction-free elimination.
pub trait FfRing: Clone + Send + Sync {
    fn is_zero_elem(&self) -> bool;
    fn mul_elem(&self, o: &Self) -> Self;
    fn sub_elem(&self, o: &Self) -> Self;
    /// Exact division; the caller guarantees divisibility.
    fn div_elem(&self, d: &Self) -> Self;
}

impl FfRing for BigInt {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn div_elem(&self, d: &Self) -> Self {
        self / d
    }
}

impl FfRing for Poly {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn div_elem(&self, d: &Self) -> Self {
        self.div_exact(d).expect("Bareiss step must divide exactly")
    }
}

/// A field whose rows can be cleared into an integral domain.
pub trait Elim: Field {
    type Ring: FfRing;
    fn clear_row(row: &[Self]) -> Vec<Self::Ring>;
    fn ring_one(proto: &Self) -> Self::Ring;
    fn lift(r: &Self::Ring, proto: &Self) -> Self;
    /// Canonical scaling of a kernel vector.
    fn normalize_vector(v: &[Self]) -> Vec<Self>;
}

impl Elim for Rational {
    type Ring = BigInt;
    fn clear_row(row: &[Self]) -> Vec<BigInt> {
        let l = super::rational::lcm_of_denominators(row);
        row.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect()
    }
    fn ring_one(_: &Self) -> BigInt {
        BigInt::one()
    }
    fn lift(r: &BigInt, _: &Self) -> Self {
        Rational::from_integer(r.clone())
    }
    fn normalize_vector(v: &[Self]) -> Vec<Self> {
        primitive_integer_vector(v)
    }
}

impl Elim for RatFunc {
    type Ring = Poly;
    fn clear_row(row: &[Self]) -> Vec<Poly> {
        let nv = row.first().map(|r| r.nvars()).unwrap_or(0);
        let mut c = RatFunc::one(nv);
        for r in row {
            let t = r.mul_ref(&c);
            if !t.is_polynomial() {
                c = c.mul_ref(&RatFunc::from_poly(t.denominator()));
            }
        }
        row.iter()
            .map(|r| r.mul_ref(&c).as_poly().cloned().expect("denominator cleared"))
            .collect()
    }
    fn ring_one(proto: &Self) -> Poly {
        Poly::one(proto.nvars())
    }
    fn lift(r: &Poly, _: &Self) -> Self {
        RatFunc::from_poly(r.clone())
    }
    fn normalize_vector(v: &[Self]) -> Vec<Self> {
        let cleared = RatFunc::clear_row(v);
        match cleared.iter().find(|p| !p.is_zero()) {
            None => v.to_vec(),
            Some(f) => {
                let c = f.content().recip();
                cleared.iter().map(|p| RatFunc::from_poly(p.scale(&c))).collect()
            }
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<F>>,
    zero: F,
}

/// Output of fraction-free forward elimination.
pub struct Echelon<R> {
    pub rows: Vec<Vec<R>>,
    pub pivots: Vec<usize>,
    /// Original row index of each echelon row, before elimination swaps.
    pub perm: Vec<usize>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize, zero: F) -> Self {
        ExactMatrix { rows, cols, data: vec![vec![zero.clone(); cols]; rows], zero }
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize, zero: F) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged matrix");
        }
        ExactMatrix { rows: rows.len(), cols, data: rows, zero }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn rows_vec(&self) -> &Vec<Vec<F>> {
        &self.data
    }

    pub fn push_row(&mut self, r: Vec<F>) {
        assert_eq!(r.len(), self.cols, "row length");
        self.data.push(r);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(self.zero.clone(), |acc, (a, b)| if a.is_nil() || b.is_nil() { acc } else { acc.plus(&a.times(b)) })
            })
            .collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let ot = o.transpose();
        let data = par::map(&self.data, 8, |r| {
            ot.data
                .iter()
                .map(|c| {
                    r.iter().zip(c).fold(self.zero.clone(), |acc, (a, b)| {
                        if a.is_nil() || b.is_nil() {
                            acc
                        } else {
                            acc.plus(&a.times(b))
                        }
                    })
                })
                .collect()
        });
        ExactMatrix { rows: self.rows, cols: o.cols, data, zero: self.zero.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_nil()))
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let data = self.data.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        ExactMatrix { rows: self.rows, cols: cols.len(), data, zero: self.zero.clone() }
    }

    pub fn stack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "column mismatch");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        ExactMatrix { rows: self.rows + o.rows, cols: self.cols, data, zero: self.zero.clone() }
    }
}

impl<F: Elim> ExactMatrix<F> {
    /// Fraction-free forward elimination to row echelon form.
    pub fn echelon(&self) -> Echelon<F::Ring> {
        let mut rows: Vec<Vec<F::Ring>> = par::map(&self.data, 16, |r| F::clear_row(r));
        let mut perm: Vec<usize> = (0..self.rows).collect();
        let mut pivots = Vec::new();
        let mut prev = F::ring_one(&self.zero);
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else {
                continue;
            };
            rows.swap(r, p);
            perm.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let piv_row = &head[r];
            let piv = piv_row[c].clone();
            let prev_ref = &prev;
            par::for_each_mut(tail, 8, |row| {
                let f = row[c].clone();
                for j in c..row.len() {
                    let mut v = piv.mul_elem(&row[j]);
                    if !f.is_zero_elem() && !piv_row[j].is_zero_elem() {
                        v = v.sub_elem(&f.mul_elem(&piv_row[j]));
                    }
                    row[j] = if v.is_zero_elem() { v } else { v.div_elem(prev_ref) };
                }
            });
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        perm.truncate(r);
        Echelon { rows, pivots, perm }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one free column per vector.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let ech = self.echelon();
        let lifted: Vec<Vec<F>> = ech
            .rows
            .iter()
            .map(|r| r.iter().map(|x| F::lift(x, &self.zero)).collect())
            .collect();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &ech.pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        par::map(&free, 8, |&f| {
            let mut v = vec![self.zero.clone(); self.cols];
            v[f] = self.zero.one_like();
            for k in (0..ech.pivots.len()).rev() {
                let pc = ech.pivots[k];
                let row = &lifted[k];
                let mut s = self.zero.clone();
                for j in pc + 1..self.cols {
                    if !row[j].is_nil() && !v[j].is_nil() {
                        s = s.plus(&row[j].times(&v[j]));
                    }
                }
                v[pc] = s.negate().over(&row[pc]).expect("nonzero pivot");
            }
            F::normalize_vector(&v)
        })
    }

    pub fn left_kernel(&self) -> Vec<Vec<F>> {
        self.transpose().kernel()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let mut aug = self.clone();
        for (i, row) in aug.data.iter_mut().enumerate() {
            row.push(b[i].clone());
        }
        aug.cols += 1;
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.zero.clone(); self.cols];
        for k in (0..ech.pivots.len()).rev() {
            let pc = ech.pivots[k];
            let row: Vec<F> = ech.rows[k].iter().map(|v| F::lift(v, &self.zero)).collect();
            let mut s = row[self.cols].clone();
            for j in pc + 1..self.cols {
                if !row[j].is_nil() && !x[j].is_nil() {
                    s = s.minus(&row[j].times(&x[j]));
                }
            }
            x[pc] = s.over(&row[pc]).expect("nonzero pivot");
        }
        Some(x)
    }

    /// Reduced row echelon form over the field, zero rows dropped.
    pub fn rref(&self) -> (Vec<Vec<F>>, Vec<usize>) {
        let ech = self.echelon();
        let mut rows: Vec<Vec<F>> = ech
            .rows
            .iter()
            .map(|r| r.iter().map(|x| F::lift(x, &self.zero)).collect())
            .collect();
        for k in 0..rows.len() {
            let pc = ech.pivots[k];
            let inv = rows[k][pc].recip().expect("nonzero pivot");
            rows[k] = rows[k].iter().map(|x| x.times(&inv)).collect();
        }
        for k in (0..rows.len()).rev() {
            let pc = ech.pivots[k];
            let pr = rows[k].clone();
            for i in 0..k {
                let f = rows[i][pc].clone();
                if f.is_nil() {
                    continue;
                }
                for j in pc..self.cols {
                    if !pr[j].is_nil() {
                        rows[i][j] = rows[i][j].minus(&f.times(&pr[j]));
                    }
                }
            }
        }
        (rows, ech.pivots)
    }

    pub fn in_row_space(&self, v: &[F]) -> bool {
        let r = self.rank();
        let mut m = self.clone();
        m.push_row(v.to_vec());
        m.rank() == r
    }
}

impl<F: Field> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {:?}", r)?;
        }
        Ok(())
    }
}

pub type QMatrix = ExactMatrix<Rational>;

impl QMatrix {
    pub fn from_ints(rows: &[Vec<i64>]) -> QMatrix {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        ExactMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| super::rational::rat(x)).collect()).collect(),
            cols,
            Rational::zero(),
        )
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = Self::zeros(n, n, Rational::zero());
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    pub fn qzeros(rows: usize, cols: usize) -> QMatrix {
        Self::zeros(rows, cols, Rational::zero())
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for i in c + 1..n {
                let f = &a[i][c] / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.rows;
        let mut aug = self.clone();
        for (i, row) in aug.data.iter_mut().enumerate() {
            for j in 0..n {
                row.push(if i == j { Rational::one() } else { Rational::zero() });
            }
        }
        aug.cols = 2 * n;
        let (rows, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let data = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(ExactMatrix { rows: n, cols: n, data, zero: Rational::zero() })
    }
}
