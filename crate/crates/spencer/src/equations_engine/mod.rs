//! Lie equations of the Killing, Weyl and conformal groups over a constant
//! metric, their parametric jets, the Spencer operators built on them and
//! the equilibrium equations obtained by formal adjunction.
//!
//! Parameters are ordered translations `xi^k`, rotations `R_ij = xi^j_i`
//! (`i < j`), the dilatation `A = xi^r_r / n` and the elations
//! `A_s = xi^r_{rs} / n`. Generators use the same order.

mod divergence;
mod physics;
mod spencer;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::diffop::DiffOpError;
use crate::jet_theory::{JetError, JetRow, LinearSystem};
use crate::lie_structure::VectorField;
use crate::symbolic_core::{ExactMatrix, MultiIndex, Poly, QMatrix, RatFunc, Rational};

pub use divergence::{divergence_certificate, search_divergence_forms, synthesize_divergence_forms, DivergenceForm};
pub use physics::{
    airy_parametrization, cauchy_operator, conformal_em_projection, jet_reduction_residuals, maxwell_block,
    plane_killing_operator, EmProjection, MaxwellReport,
};
pub use spencer::{connection, equilibrium, maxwell_weyl_mu, parametrize, potential_count, spencer_d1, spencer_d2, EquilibriumSystem};

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad metric: {0}")]
    Metric(String),
    #[error("jet matrix has rank {rank} < {size}")]
    RankDeficient { rank: usize, size: usize },
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("divergence certificate failed for parameter {tau}: {residual}")]
    CertificateFailed { tau: usize, residual: String },
}

/// Constant non-degenerate symmetric metric; Christoffel symbols vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantMetric {
    omega: QMatrix,
    inverse: QMatrix,
}

impl ConstantMetric {
    pub fn new(omega: QMatrix) -> Result<Self, EngineError> {
        let n = omega.nrows();
        if omega.ncols() != n {
            return Err(EngineError::Metric("not square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if omega.get(i, j) != omega.get(j, i) {
                    return Err(EngineError::Metric("not symmetric".into()));
                }
            }
        }
        let inverse = omega.inverse().ok_or_else(|| EngineError::Metric("degenerate".into()))?;
        Ok(ConstantMetric { omega, inverse })
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, EngineError> {
        let n = entries.len();
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect();
        Self::new(QMatrix::from_ints(&rows))
    }

    pub fn euclidean(n: usize) -> Self {
        Self::diagonal(&vec![1; n]).expect("identity metric")
    }

    /// `diag(1, .., 1, -1)`.
    pub fn minkowski(n: usize) -> Self {
        let mut d = vec![1; n];
        if let Some(last) = d.last_mut() {
            *last = -1;
        }
        Self::diagonal(&d).expect("non-degenerate")
    }

    pub fn n(&self) -> usize {
        self.omega.nrows()
    }

    /// `omega_ij`.
    pub fn lower(&self, i: usize, j: usize) -> Rational {
        self.omega.get(i, j).clone()
    }

    /// `omega^ij`.
    pub fn upper(&self, i: usize, j: usize) -> Rational {
        self.inverse.get(i, j).clone()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.omega.get(i, j).is_zero()))
    }

    /// `x^2 = omega_ab x^a x^b`.
    pub fn square(&self) -> Poly {
        let n = self.n();
        let mut p = Poly::zero(n);
        for a in 0..n {
            for b in 0..n {
                let c = self.lower(a, b);
                if !c.is_zero() {
                    p = &p + &(&Poly::var(n, a) * &Poly::var(n, b)).scale(&c);
                }
            }
        }
        p
    }

    /// `x_e = omega_et x^t`.
    pub fn lowered_coordinate(&self, e: usize) -> Poly {
        let n = self.n();
        (0..n).fold(Poly::zero(n), |acc, t| &acc + &Poly::var(n, t).scale(&self.lower(e, t)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Killing,
    Weyl,
    Conformal,
    ProjectiveLine,
}

impl GroupKind {
    pub fn from_name(s: &str) -> Result<Self, EngineError> {
        match s {
            "killing" => Ok(GroupKind::Killing),
            "weyl" => Ok(GroupKind::Weyl),
            "conformal" => Ok(GroupKind::Conformal),
            "projective-line" => Ok(GroupKind::ProjectiveLine),
            other => Err(EngineError::Unsupported(format!("group kind {other}"))),
        }
    }

    fn has_dilatation(self) -> bool {
        !matches!(self, GroupKind::Killing)
    }

    fn has_elations(self) -> bool {
        matches!(self, GroupKind::Conformal | GroupKind::ProjectiveLine)
    }
}

/// A group parameter, equivalently a parametric jet coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Translation(usize),
    Rotation(usize, usize),
    Dilatation,
    Elation(usize),
}

impl Param {
    pub fn label(&self) -> String {
        match *self {
            Param::Translation(k) => format!("xi^{}", k + 1),
            Param::Rotation(i, j) => format!("xi^{}_{}", j + 1, i + 1),
            Param::Dilatation => "A".into(),
            Param::Elation(s) => format!("A_{}", s + 1),
        }
    }

    /// Name of the dual unknown paired with `d_r` of this parameter.
    pub fn dual_name(&self, r: usize) -> String {
        match *self {
            Param::Translation(k) => format!("sigma^{{{},{}}}", k + 1, r + 1),
            Param::Rotation(i, j) => format!("mu^{{{}{},{}}}", i + 1, j + 1, r + 1),
            Param::Dilatation => format!("nu^{}", r + 1),
            Param::Elation(s) => format!("pi^{{{},{}}}", s + 1, r + 1),
        }
    }

    pub fn rhs_name(&self) -> String {
        match *self {
            Param::Translation(k) => format!("f^{}", k + 1),
            Param::Rotation(i, j) => format!("m^{{{}{}}}", i + 1, j + 1),
            Param::Dilatation => "u".into(),
            Param::Elation(s) => format!("v^{}", s + 1),
        }
    }

    pub fn row_label(&self) -> &'static str {
        match self {
            Param::Translation(_) => "Cauchy",
            Param::Rotation(..) => "Cosserat",
            Param::Dilatation => "Clausius",
            Param::Elation(_) => "Maxwell-Weyl",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupSystem {
    pub kind: GroupKind,
    pub metric: ConstantMetric,
    pub params: Vec<Param>,
    pub generators: Vec<VectorField>,
    /// Defining equations at the order where they are formally integrable.
    pub lie_equations: LinearSystem,
    /// Highest jet order among the parameters.
    pub param_order: u32,
}

/// Builds generators, parameters and Lie equations.
pub fn build_group_system(kind: GroupKind, metric: &ConstantMetric) -> Result<GroupSystem, EngineError> {
    let n = metric.n();
    if n == 0 {
        return Err(EngineError::Unsupported("dimension 0".into()));
    }
    if kind == GroupKind::ProjectiveLine && n != 1 {
        return Err(EngineError::Unsupported("projective line needs n = 1".into()));
    }
    if !metric.is_diagonal() {
        return Err(EngineError::Unsupported("generators are only built for diagonal metrics".into()));
    }
    let mut params: Vec<Param> = (0..n).map(Param::Translation).collect();
    for i in 0..n {
        for j in i + 1..n {
            params.push(Param::Rotation(i, j));
        }
    }
    if kind.has_dilatation() {
        params.push(Param::Dilatation);
    }
    if kind.has_elations() {
        params.extend((0..n).map(Param::Elation));
    }
    let generators = params.iter().map(|p| generator(metric, *p)).collect();
    let (q, rows) = lie_rows(kind, metric);
    let lie_equations = LinearSystem::new(n, n, q, rows)?;
    let param_order = if kind.has_elations() { 2 } else { 1 };
    Ok(GroupSystem { kind, metric: metric.clone(), params, generators, lie_equations, param_order })
}

fn generator(metric: &ConstantMetric, p: Param) -> VectorField {
    let n = metric.n();
    match p {
        Param::Translation(k) => VectorField::coordinate(n, k),
        Param::Rotation(i, j) => {
            // d_i theta^j = 1, d_j theta^i = -omega_jj / omega_ii
            let mut v = VectorField::zero(n);
            v.comps[j] = Poly::var(n, i);
            let c = -(metric.lower(j, j) / metric.lower(i, i));
            v.comps[i] = Poly::var(n, j).scale(&c);
            v
        }
        Param::Dilatation => VectorField::new((0..n).map(|r| Poly::var(n, r)).collect()),
        Param::Elation(e) => {
            // -1/2 x^2 delta^r_e + x_e x^r
            let half = Rational::new((-1).into(), 2.into());
            let xe = metric.lowered_coordinate(e);
            VectorField::new(
                (0..n)
                    .map(|r| {
                        let mut c = &xe * &Poly::var(n, r);
                        if r == e {
                            c = &c + &metric.square().scale(&half);
                        }
                        c
                    })
                    .collect(),
            )
        }
    }
}

fn add(row: &mut JetRow, k: usize, mu: MultiIndex, c: Rational) {
    let e = row.entry((k, mu)).or_insert_with(Rational::zero);
    *e += c;
}

fn lie_rows(kind: GroupKind, metric: &ConstantMetric) -> (u32, Vec<JetRow>) {
    let n = metric.n();
    let nr = Rational::from_integer((n as i64).into());
    let u = |i: usize| MultiIndex::unit(n, i);
    let mut rows = Vec::new();
    // Medolaghi: omega_rj xi^r_i + omega_ir xi^r_j - c omega_ij xi^r_r = 0
    let trace_coeff = if kind.has_dilatation() { Rational::from_integer(2.into()) / &nr } else { Rational::zero() };
    for i in 0..n {
        for j in i..n {
            let mut row = JetRow::new();
            for r in 0..n {
                add(&mut row, r, u(i), metric.lower(r, j));
                add(&mut row, r, u(j), metric.lower(i, r));
                add(&mut row, r, u(r), -(&trace_coeff * metric.lower(i, j)));
            }
            rows.push(row);
        }
    }
    let q = match kind {
        GroupKind::Killing => 1,
        GroupKind::Weyl => {
            for mu in MultiIndex::of_degree(n, 2) {
                for k in 0..n {
                    let mut row = JetRow::new();
                    add(&mut row, k, mu.clone(), Rational::one());
                    rows.push(row);
                }
            }
            2
        }
        GroupKind::Conformal | GroupKind::ProjectiveLine => {
            // xi^k_ij = delta^k_i A_j + delta^k_j A_i - omega_ij omega^kr A_r, A_s = xi^t_ts / n
            let a = |s: usize| -> Vec<(usize, MultiIndex, Rational)> {
                (0..n).map(|t| (t, u(t).inc(s), Rational::one() / &nr)).collect()
            };
            for mu in MultiIndex::of_degree(n, 2) {
                let l = mu.to_list();
                let (i, j) = (l[0], l[1]);
                for k in 0..n {
                    let mut row = JetRow::new();
                    add(&mut row, k, mu.clone(), Rational::one());
                    let mut sub = |s: usize, c: Rational| {
                        for (t, m, w) in a(s) {
                            add(&mut row, t, m, -(&c * &w));
                        }
                    };
                    if k == i {
                        sub(j, Rational::one());
                    }
                    if k == j {
                        sub(i, Rational::one());
                    }
                    for r in 0..n {
                        let c = metric.lower(i, j) * metric.upper(k, r);
                        if !c.is_zero() {
                            sub(r, -c);
                        }
                    }
                    row.retain(|_, c| !c.is_zero());
                    rows.push(row);
                }
            }
            for mu in MultiIndex::of_degree(n, 3) {
                for k in 0..n {
                    let mut row = JetRow::new();
                    add(&mut row, k, mu.clone(), Rational::one());
                    rows.push(row);
                }
            }
            3
        }
    };
    for r in rows.iter_mut() {
        r.retain(|_, c| !c.is_zero());
    }
    (q, rows)
}

impl GroupSystem {
    pub fn n(&self) -> usize {
        self.metric.n()
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn param_index(&self, p: Param) -> Option<usize> {
        self.params.iter().position(|x| *x == p)
    }

    fn unit(&self, p: Param) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        if let Some(i) = self.param_index(p) {
            v[i] = Rational::one();
        }
        v
    }

    /// Jet coordinate `xi^k_mu` of a section of `R_q` as a linear
    /// combination of the parameters.
    pub fn param_jet(&self, k: usize, mu: &MultiIndex) -> Vec<Rational> {
        let n = self.n();
        let m = &self.metric;
        match mu.degree() {
            0 => self.unit(Param::Translation(k)),
            1 => {
                let i = mu.to_list()[0];
                if k == i {
                    self.unit(Param::Dilatation)
                } else if i < k {
                    self.unit(Param::Rotation(i, k))
                } else {
                    let c = -(m.lower(i, i) / m.lower(k, k));
                    self.unit(Param::Rotation(k, i)).into_iter().map(|x| x * &c).collect()
                }
            }
            2 if self.kind.has_elations() => {
                let l = mu.to_list();
                let (i, j) = (l[0], l[1]);
                let mut v = vec![Rational::zero(); self.dim()];
                let mut acc = |s: usize, c: Rational| {
                    if let Some(p) = self.param_index(Param::Elation(s)) {
                        v[p] += c;
                    }
                };
                if k == i {
                    acc(j, Rational::one());
                }
                if k == j {
                    acc(i, Rational::one());
                }
                for r in 0..n {
                    acc(r, -(m.lower(i, j) * m.upper(k, r)));
                }
                v
            }
            _ => vec![Rational::zero(); self.dim()],
        }
    }

    /// The functional reading parameter `a` off a jet.
    pub fn param_functional(&self, a: usize) -> JetRow {
        let n = self.n();
        let inv_n = Rational::new(1.into(), (n as i64).into());
        let mut row = JetRow::new();
        match self.params[a] {
            Param::Translation(k) => add(&mut row, k, MultiIndex::zero(n), Rational::one()),
            Param::Rotation(i, j) => add(&mut row, j, MultiIndex::unit(n, i), Rational::one()),
            Param::Dilatation => {
                for r in 0..n {
                    add(&mut row, r, MultiIndex::unit(n, r), inv_n.clone());
                }
            }
            Param::Elation(s) => {
                for r in 0..n {
                    add(&mut row, r, MultiIndex::unit(n, r).inc(s), inv_n.clone());
                }
            }
        }
        row
    }

    /// Jet vector (in the coordinates of `J_q`) of the section with
    /// parameters `p`.
    pub fn param_section_vector(&self, q: u32, p: &[Rational]) -> Vec<Rational> {
        let js = crate::jet_theory::JetSpace::full(self.n(), self.n(), q);
        js.coords()
            .iter()
            .map(|(k, mu)| self.param_jet(*k, mu).iter().zip(p).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `M(x)`: entry `(a, tau)` is parameter `a` of `j_q(theta_tau)`.
    pub fn jet_matrix(&self) -> Vec<Vec<Poly>> {
        let n = self.n();
        (0..self.dim())
            .map(|a| {
                let f = self.param_functional(a);
                self.generators
                    .iter()
                    .map(|g| {
                        f.iter().fold(Poly::zero(n), |acc, ((k, mu), c)| &acc + &g.comps[*k].diff_multi(mu).scale(c))
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank of `M(x)` over the rational functions, and its determinant.
    pub fn jet_matrix_checked(&self) -> Result<(Vec<Vec<Poly>>, Poly), EngineError> {
        let m = self.jet_matrix();
        let n = self.n();
        let rows: Vec<Vec<RatFunc>> = m.iter().map(|r| r.iter().cloned().map(RatFunc::from_poly).collect()).collect();
        let size = m.len();
        let rank = ExactMatrix::from_rows(rows, size, RatFunc::zero(n)).rank();
        if rank < size {
            return Err(EngineError::RankDeficient { rank, size });
        }
        let det = poly_det(m.clone(), n);
        Ok((m, det))
    }
}

/// Fraction-free determinant of a square polynomial matrix.
pub fn poly_det(mut a: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let size = a.len();
    if size == 0 {
        return Poly::one(nvars);
    }
    let mut negate = false;
    let mut prev = Poly::one(nvars);
    for k in 0..size {
        let Some(p) = (k..size).find(|&i| !a[i][k].is_zero()) else {
            return Poly::zero(nvars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[size - 1][size - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
