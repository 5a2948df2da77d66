//! Algebraic curvature tensors over a constant metric: Riemann tensors
//! built from symmetric `A_ij`, the Ricci contraction, the lift back from
//! Ricci and the Weyl projection.
//!
//! Components are stored densely as `R^k_{l,ij}` at
//! `((k * n + l) * n + i) * n + j`. Constructors check symmetries and never
//! symmetrize.

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::equations_engine::{build_group_system, ConstantMetric, GroupKind};
use crate::jet_theory::delta_cocycles;
use crate::symbolic_core::{QMatrix, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("dimension {0} < 3")]
    DimensionTooSmall(usize),
    #[error("expected {expected} components, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("not skew in the form indices at {0:?}")]
    NotSkew([usize; 4]),
    #[error("fiber part not in g1 at {0:?}")]
    NotInG1([usize; 4]),
    #[error("cyclic sum nonzero at {0:?}")]
    Bianchi([usize; 4]),
    #[error("trace nonzero at ({0}, {1})")]
    NotTraceFree(usize, usize),
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn delta(a: usize, b: usize) -> Rational {
    if a == b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

fn check_dim(n: usize) -> Result<(), CurvatureError> {
    if n < 3 {
        Err(CurvatureError::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}

/// Symmetric 2-tensor `R_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciTensor {
    n: usize,
    comps: Vec<Vec<Rational>>,
}

impl RicciTensor {
    pub fn new(comps: Vec<Vec<Rational>>) -> Result<Self, CurvatureError> {
        let n = comps.len();
        for (i, row) in comps.iter().enumerate() {
            if row.len() != n {
                return Err(CurvatureError::Shape { expected: n, got: row.len() });
            }
            for j in 0..i {
                if row[j] != comps[j][i] {
                    return Err(CurvatureError::NotSymmetric(i, j));
                }
            }
        }
        Ok(RicciTensor { n, comps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.comps[i][j]
    }

    pub fn comps(&self) -> &[Vec<Rational>] {
        &self.comps
    }

    /// `omega^ij R_ij`.
    pub fn trace(&self, metric: &ConstantMetric) -> Rational {
        trace2(&self.comps, metric)
    }
}

fn trace2(a: &[Vec<Rational>], metric: &ConstantMetric) -> Rational {
    let n = a.len();
    let mut t = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            t += metric.upper(i, j) * &a[i][j];
        }
    }
    t
}

/// Dense 4-index array with `R^k_{l,ij}` layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    n: usize,
    comps: Vec<Rational>,
}

impl Tensor4 {
    pub fn zero(n: usize) -> Self {
        Tensor4 { n, comps: vec![Rational::zero(); n * n * n * n] }
    }

    pub fn from_vec(n: usize, comps: Vec<Rational>) -> Result<Self, CurvatureError> {
        let expected = n * n * n * n;
        if comps.len() != expected {
            return Err(CurvatureError::Shape { expected, got: comps.len() });
        }
        Ok(Tensor4 { n, comps })
    }

    fn idx(&self, k: usize, l: usize, i: usize, j: usize) -> usize {
        ((k * self.n + l) * self.n + i) * self.n + j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> &Rational {
        &self.comps[self.idx(k, l, i, j)]
    }

    pub fn set(&mut self, k: usize, l: usize, i: usize, j: usize, v: Rational) {
        let p = self.idx(k, l, i, j);
        self.comps[p] = v;
    }

    pub fn comps(&self) -> &[Rational] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, o: &Tensor4) -> Tensor4 {
        Tensor4 { n: self.n, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &Tensor4) -> Tensor4 {
        Tensor4 { n: self.n, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    /// `T^r_{i,rj}`.
    pub fn contract(&self) -> Vec<Vec<Rational>> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| (0..n).fold(Rational::zero(), |acc, r| acc + self.get(r, i, r, j))).collect()).collect()
    }

    fn check_skew(&self) -> Result<(), CurvatureError> {
        let n = self.n;
        for k in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if self.get(k, l, i, j) != &-self.get(k, l, j, i) {
                            return Err(CurvatureError::NotSkew([k, l, i, j]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `omega_ka T^a_{l,ij} + omega_la T^a_{k,ij} = 0`.
    fn check_g1(&self, metric: &ConstantMetric) -> Result<(), CurvatureError> {
        let n = self.n;
        for k in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut s = Rational::zero();
                        for a in 0..n {
                            s += metric.lower(k, a) * self.get(a, l, i, j) + metric.lower(l, a) * self.get(a, k, i, j);
                        }
                        if !s.is_zero() {
                            return Err(CurvatureError::NotInG1([k, l, i, j]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic sum over `(l, i, j)`, the delta-image in the third exterior power.
    pub fn cyclic_defect(&self) -> Option<[usize; 4]> {
        let n = self.n;
        for k in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let s = self.get(k, l, i, j) + self.get(k, i, j, l) + self.get(k, j, l, i);
                        if !s.is_zero() {
                            return Some([k, l, i, j]);
                        }
                    }
                }
            }
        }
        None
    }
}

/// An element of `Z^2_1(g_1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannTensor(Tensor4);

impl RiemannTensor {
    pub fn new(t: Tensor4, metric: &ConstantMetric) -> Result<Self, CurvatureError> {
        t.check_skew()?;
        t.check_g1(metric)?;
        if let Some(at) = t.cyclic_defect() {
            return Err(CurvatureError::Bianchi(at));
        }
        Ok(RiemannTensor(t))
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.0
    }

    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> &Rational {
        self.0.get(k, l, i, j)
    }

    /// `R_ij = R^r_{i,rj}`.
    pub fn ricci(&self) -> RicciTensor {
        RicciTensor::new(self.0.contract()).expect("contraction of a curvature tensor is symmetric")
    }
}

/// Skew in the form indices and totally trace-free.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylTensor(Tensor4);

impl WeylTensor {
    pub fn new(t: Tensor4) -> Result<Self, CurvatureError> {
        t.check_skew()?;
        let c = t.contract();
        for (i, row) in c.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    return Err(CurvatureError::NotTraceFree(i, j));
                }
            }
        }
        Ok(WeylTensor(t))
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

fn check_symmetric(a: &[Vec<Rational>], n: usize) -> Result<(), CurvatureError> {
    RicciTensor::new(a.to_vec()).map(|_| ()).and_then(|_| {
        if a.len() == n {
            Ok(())
        } else {
            Err(CurvatureError::Shape { expected: n, got: a.len() })
        }
    })
}

/// `R^k_{l,ij} = (d^k_i A_lj - d^k_j A_li) - omega^ks (omega_li A_sj - omega_lj A_si)`.
pub fn riemann_from_a(a: &[Vec<Rational>], metric: &ConstantMetric) -> Result<RiemannTensor, CurvatureError> {
    let n = metric.n();
    check_symmetric(a, n)?;
    let mut t = Tensor4::zero(n);
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = delta(k, i) * &a[l][j] - delta(k, j) * &a[l][i];
                    for s in 0..n {
                        let w = metric.upper(k, s);
                        if !w.is_zero() {
                            v -= w * (metric.lower(l, i) * &a[s][j] - metric.lower(l, j) * &a[s][i]);
                        }
                    }
                    t.set(k, l, i, j, v);
                }
            }
        }
    }
    RiemannTensor::new(t, metric)
}

/// `R_ij = (n - 2) A_ij + omega_ij tr(A)` together with `tr(R)`.
pub fn ricci_from_a(a: &[Vec<Rational>], metric: &ConstantMetric) -> Result<(RicciTensor, Rational), CurvatureError> {
    let n = metric.n();
    check_dim(n)?;
    check_symmetric(a, n)?;
    let tr = trace2(a, metric);
    let nm2 = rat(n as i64 - 2);
    let comps = (0..n).map(|i| (0..n).map(|j| &nm2 * &a[i][j] + metric.lower(i, j) * &tr).collect()).collect();
    let r = RicciTensor::new(comps)?;
    let t = r.trace(metric);
    Ok((r, t))
}

/// Inverse of [`ricci_from_a`]:
/// `A_ij = R_ij / (n - 2) - omega_ij tr(R) / (2 (n - 1)(n - 2))`.
pub fn a_from_ricci(r: &RicciTensor, metric: &ConstantMetric) -> Result<Vec<Vec<Rational>>, CurvatureError> {
    let n = metric.n();
    check_dim(n)?;
    let tr = r.trace(metric);
    let n = n as i64;
    let c1 = Rational::new(1.into(), (n - 2).into());
    let c2 = Rational::new(1.into(), (2 * (n - 1) * (n - 2)).into());
    let n = n as usize;
    Ok((0..n).map(|i| (0..n).map(|j| &c1 * r.get(i, j) - &c2 * metric.lower(i, j) * &tr).collect()).collect())
}

/// The lift `Ricci -> Riemann`; its contraction returns the input.
pub fn riemann_from_ricci(r: &RicciTensor, metric: &ConstantMetric) -> Result<RiemannTensor, CurvatureError> {
    let n = metric.n();
    check_dim(n)?;
    if r.n() != n {
        return Err(CurvatureError::Shape { expected: n, got: r.n() });
    }
    let tr = r.trace(metric);
    let ni = n as i64;
    let c1 = Rational::new(1.into(), (ni - 2).into());
    let c2 = Rational::new(1.into(), ((ni - 1) * (ni - 2)).into());
    let mut t = Tensor4::zero(n);
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = delta(k, i) * r.get(l, j) - delta(k, j) * r.get(l, i);
                    for s in 0..n {
                        let w = metric.upper(k, s);
                        if !w.is_zero() {
                            v -= w * (metric.lower(l, i) * r.get(s, j) - metric.lower(l, j) * r.get(s, i));
                        }
                    }
                    let w = (delta(k, i) * metric.lower(l, j) - delta(k, j) * metric.lower(l, i)) * &tr;
                    t.set(k, l, i, j, &c1 * v - &c2 * w);
                }
            }
        }
    }
    RiemannTensor::new(t, metric)
}

/// `W = R - lift(contract(R))`.
pub fn weyl_projection(riem: &RiemannTensor, metric: &ConstantMetric) -> Result<WeylTensor, CurvatureError> {
    let lift = riemann_from_ricci(&riem.ricci(), metric)?;
    WeylTensor::new(riem.tensor().sub(lift.tensor()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundleDims {
    /// `n^2 (n^2 - 1) / 12`.
    pub f1: usize,
    /// `n (n + 1)(n + 2)(n - 3) / 12`.
    pub f1_hat: usize,
    pub difference: usize,
}

pub fn bundle_dims(n: usize) -> Result<BundleDims, CurvatureError> {
    check_dim(n)?;
    let f1 = n * n * (n * n - 1) / 12;
    let f1_hat = n * (n + 1) * (n + 2) * (n - 3) / 12;
    let difference = f1 - f1_hat;
    debug_assert_eq!(difference, n * (n + 1) / 2);
    Ok(BundleDims { f1, f1_hat, difference })
}

/// Basis of `Z^2_1(g_1)` as the kernel of the skew, `g_1` and cyclic
/// constraints on all `n^4` components.
pub fn z2_g1_basis(metric: &ConstantMetric) -> Vec<RiemannTensor> {
    let n = metric.n();
    let t = Tensor4::zero(n);
    let size = n * n * n * n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let unit = |pairs: &[(usize, Rational)]| {
        let mut v = vec![Rational::zero(); size];
        for (p, c) in pairs {
            v[*p] += c;
        }
        v
    };
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i < j {
                        rows.push(unit(&[(t.idx(k, l, i, j), Rational::one()), (t.idx(k, l, j, i), Rational::one())]));
                    } else if i == j {
                        rows.push(unit(&[(t.idx(k, l, i, i), Rational::one())]));
                    }
                    if k <= l {
                        let mut p = Vec::new();
                        for a in 0..n {
                            p.push((t.idx(a, l, i, j), metric.lower(k, a)));
                            p.push((t.idx(a, k, i, j), metric.lower(l, a)));
                        }
                        rows.push(unit(&p));
                    }
                    if l < i && i < j {
                        rows.push(unit(&[
                            (t.idx(k, l, i, j), Rational::one()),
                            (t.idx(k, i, j, l), Rational::one()),
                            (t.idx(k, j, l, i), Rational::one()),
                        ]));
                    }
                }
            }
        }
    }
    let m = QMatrix::from_rows(rows, size, Rational::zero());
    m.kernel()
        .into_iter()
        .map(|v| RiemannTensor::new(Tensor4 { n, comps: v }, metric).expect("kernel vector satisfies the constraints"))
        .collect()
}

/// Random integer combination of a basis of `Z^2_1(g_1)`.
pub fn random_riemann<R: Rng>(basis: &[RiemannTensor], metric: &ConstantMetric, rng: &mut R) -> RiemannTensor {
    let n = metric.n();
    let mut t = Tensor4::zero(n);
    for b in basis {
        let c = rat(rng.gen_range(-5..=5));
        t = t.add(&Tensor4 { n, comps: b.tensor().comps.iter().map(|x| x * &c).collect() });
    }
    RiemannTensor::new(t, metric).expect("combination of cocycles")
}

/// `dim Z^2_1(g_1)` through the delta-sequence of the Killing symbol.
pub fn z2_dim_from_jets(metric: &ConstantMetric) -> usize {
    let gs = build_group_system(GroupKind::Killing, metric).expect("Killing system");
    delta_cocycles(&gs.lie_equations.symbol(), 2)
}

/// Embeds a curvature tensor into the delta-complex coordinates of the
/// Killing symbol and checks it is a cocycle there.
pub fn is_jet_cocycle(riem: &RiemannTensor, metric: &ConstantMetric) -> bool {
    use crate::jet_theory::{DeltaMap, JetSpace};
    use crate::symbolic_core::forms::subsets;
    let n = metric.n();
    let top = JetSpace::top(n, n, 1);
    let sets = subsets(n, 2);
    let mut v = vec![Rational::zero(); sets.len() * top.len()];
    for (a, s) in sets.iter().enumerate() {
        for (p, (k, mu)) in top.coords().iter().enumerate() {
            let l = mu.to_list()[0];
            v[a * top.len() + p] = riem.get(*k, l, s[0], s[1]).clone();
        }
    }
    DeltaMap::new(n, n, 2, 0).matrix.mul_vec(&v).iter().all(Zero::is_zero)
}
