//! Jet coordinates, linear systems `R_q ⊂ J_q(E)` with constant
//! coefficients, their symbols, the Spencer δ-map and the dimensions of the
//! Spencer and Janet bundles.
//!
//! A jet coordinate `y^k_mu` is keyed by `(k, mu)`. Coordinates of `J_q(E)`
//! are ordered graded-lex in `mu`, then by `k`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::par;
use crate::symbolic_core::forms::{subset_index, subsets, wedge_left};
use crate::symbolic_core::rational::binomial;
use crate::symbolic_core::{ExactMatrix, MultiIndex, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum JetError {
    #[error("row of order {order} exceeds system order {q}")]
    OrderTooHigh { order: u32, q: u32 },
    #[error("not stabilized at order {q}: dim R_q = {dim_rq}, dim pi(R_(q+1)) = {dim_proj}")]
    NotStabilized { q: u32, dim_rq: usize, dim_proj: usize },
    #[error("coordinate out of range: {0}")]
    BadCoordinate(String),
}

/// Fiber dimensions of `S_q T* ⊗ E` and `J_q(E)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetDims {
    pub n: usize,
    pub m: usize,
    pub q: u32,
}

impl JetDims {
    pub fn symmetric(&self) -> usize {
        if self.n == 0 {
            return if self.q == 0 { self.m } else { 0 };
        }
        self.m * binomial(self.q as u64 + self.n as u64 - 1, self.q as u64) as usize
    }

    pub fn jet(&self) -> usize {
        self.m * binomial(self.q as u64 + self.n as u64, self.q as u64) as usize
    }
}

/// Rows `q = 0..=q_max` of `(q, dim S_q T* ⊗ E, dim J_q(E))`.
pub fn jet_dim_table(n: usize, m: usize, q_max: u32) -> Vec<(u32, usize, usize)> {
    (0..=q_max)
        .map(|q| {
            let d = JetDims { n, m, q };
            (q, d.symmetric(), d.jet())
        })
        .collect()
}

/// Ordered coordinate list of `J_q(E)`, or of `S_q T* ⊗ E` for [`JetSpace::top`].
#[derive(Clone, Debug)]
pub struct JetSpace {
    pub n: usize,
    pub m: usize,
    pub q: u32,
    coords: Vec<(usize, MultiIndex)>,
    index: HashMap<(usize, MultiIndex), usize>,
}

impl JetSpace {
    pub fn full(n: usize, m: usize, q: u32) -> Self {
        Self::build(n, m, q, MultiIndex::up_to_degree(n, q))
    }

    pub fn top(n: usize, m: usize, q: u32) -> Self {
        Self::build(n, m, q, MultiIndex::of_degree(n, q))
    }

    fn build(n: usize, m: usize, q: u32, mus: Vec<MultiIndex>) -> Self {
        let mut coords = Vec::with_capacity(mus.len() * m);
        for mu in mus {
            for k in 0..m {
                coords.push((k, mu.clone()));
            }
        }
        let index = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        JetSpace { n, m, q, coords, index }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(usize, MultiIndex)] {
        &self.coords
    }

    pub fn position(&self, k: usize, mu: &MultiIndex) -> Option<usize> {
        self.index.get(&(k, mu.clone())).copied()
    }
}

/// A linear form `sum c y^k_mu` on jet coordinates.
pub type JetRow = BTreeMap<(usize, MultiIndex), Rational>;

pub fn row_order(row: &JetRow) -> u32 {
    row.keys().map(|(_, mu)| mu.degree()).max().unwrap_or(0)
}

/// Formal derivative `d_i` of a constant-coefficient row.
pub fn row_derivative(row: &JetRow, i: usize) -> JetRow {
    row.iter().map(|((k, mu), c)| ((*k, mu.inc(i)), c.clone())).collect()
}

fn row_derivative_multi(row: &JetRow, nu: &MultiIndex) -> JetRow {
    row.iter().map(|((k, mu), c)| ((*k, mu.add(nu)), c.clone())).collect()
}

/// `R_q ⊂ J_q(E)` given by generating rows of order at most `q`; the
/// materialized system holds every formal derivative that stays within
/// order `q`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    n: usize,
    m: usize,
    q: u32,
    generators: Vec<JetRow>,
}

impl LinearSystem {
    pub fn new(n: usize, m: usize, q: u32, generators: Vec<JetRow>) -> Result<Self, JetError> {
        for g in &generators {
            for (k, mu) in g.keys() {
                if *k >= m || mu.nvars() != n {
                    return Err(JetError::BadCoordinate(format!("y^{k}_{mu:?}")));
                }
            }
            let o = row_order(g);
            if o > q {
                return Err(JetError::OrderTooHigh { order: o, q });
            }
        }
        let generators = generators.into_iter().filter(|g| g.values().any(|c| !c.is_zero())).collect();
        Ok(LinearSystem { n, m, q, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn generators(&self) -> &[JetRow] {
        &self.generators
    }

    /// `R_{q+r}`.
    pub fn prolong(&self, r: u32) -> LinearSystem {
        LinearSystem { q: self.q + r, ..self.clone() }
    }

    pub fn jet_space(&self) -> JetSpace {
        JetSpace::full(self.n, self.m, self.q)
    }

    /// All rows of `R_q` as linear forms.
    pub fn rows(&self) -> Vec<JetRow> {
        let mut out = Vec::new();
        for g in &self.generators {
            let o = row_order(g);
            for nu in MultiIndex::up_to_degree(self.n, self.q - o) {
                out.push(row_derivative_multi(g, &nu));
            }
        }
        out
    }

    pub fn matrix(&self) -> ExactMatrix<Rational> {
        let js = self.jet_space();
        rows_to_matrix(&self.rows(), &js)
    }

    pub fn dim(&self) -> usize {
        self.jet_space().len() - self.matrix().rank()
    }

    /// Basis of `R_q` as vectors in `J_q(E)` coordinates.
    pub fn solution_basis(&self) -> Vec<Vec<Rational>> {
        self.matrix().kernel()
    }

    /// The symbol `g_q`: solutions whose components below order `q` vanish.
    pub fn symbol(&self) -> SymbolSpace {
        let top = JetSpace::top(self.n, self.m, self.q);
        let rows: Vec<JetRow> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().filter(|((_, mu), _)| mu.degree() == self.q).collect())
            .collect();
        let mat = rows_to_matrix(&rows, &top);
        SymbolSpace { n: self.n, m: self.m, q: self.q, basis: mat.kernel() }
    }

    /// `dim pi(R_{q+1})`, computed as `dim R_{q+1} - dim g_{q+1}`.
    pub fn projected_dim(&self) -> usize {
        let p = self.prolong(1);
        p.dim() - p.symbol().dim()
    }

    /// Stabilization certificate: `pi(R_{q+1}) = R_q`.
    pub fn check_projection(&self) -> Result<(), JetError> {
        let d = self.dim();
        let pd = self.projected_dim();
        if d == pd {
            Ok(())
        } else {
            Err(JetError::NotStabilized { q: self.q, dim_rq: d, dim_proj: pd })
        }
    }
}

fn rows_to_matrix(rows: &[JetRow], js: &JetSpace) -> ExactMatrix<Rational> {
    let mut data = Vec::with_capacity(rows.len());
    for r in rows {
        let mut v = vec![Rational::zero(); js.len()];
        for ((k, mu), c) in r {
            let p = js.position(*k, mu).expect("coordinate within order");
            v[p] += c;
        }
        data.push(v);
    }
    ExactMatrix::from_rows(data, js.len(), Rational::zero())
}

/// A subspace `g_q ⊂ S_q T* ⊗ E`, stored as basis vectors in
/// [`JetSpace::top`] coordinates.
#[derive(Clone, Debug)]
pub struct SymbolSpace {
    pub n: usize,
    pub m: usize,
    pub q: u32,
    basis: Vec<Vec<Rational>>,
}

impl SymbolSpace {
    /// Spans `vectors` (reduced to an independent basis).
    pub fn span(n: usize, m: usize, q: u32, vectors: Vec<Vec<Rational>>) -> Self {
        let len = JetSpace::top(n, m, q).len();
        if vectors.is_empty() {
            return SymbolSpace { n, m, q, basis: vec![] };
        }
        let (basis, _) = ExactMatrix::from_rows(vectors, len, Rational::zero()).rref();
        SymbolSpace { n, m, q, basis }
    }

    /// Solutions in `S_q T* ⊗ E` of the homogeneous equations `rows`.
    pub fn from_equations(n: usize, m: usize, q: u32, rows: &[JetRow]) -> Self {
        let top = JetSpace::top(n, m, q);
        let basis = if rows.is_empty() {
            (0..top.len())
                .map(|i| {
                    let mut v = vec![Rational::zero(); top.len()];
                    v[i] = Rational::from_integer(1.into());
                    v
                })
                .collect()
        } else {
            rows_to_matrix(rows, &top).kernel()
        };
        SymbolSpace { n, m, q, basis }
    }

    pub fn full(n: usize, m: usize, q: u32) -> Self {
        Self::from_equations(n, m, q, &[])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if self.basis.is_empty() {
            return v.iter().all(|c| c.is_zero());
        }
        let len = v.len();
        ExactMatrix::from_rows(self.basis.clone(), len, Rational::zero()).in_row_space(v)
    }

    /// First algebraic prolongation `g_{q+1} = {v : d_i v ∈ g_q for all i}`.
    pub fn prolong(&self) -> SymbolSpace {
        let src = JetSpace::top(self.n, self.m, self.q + 1);
        let dst = JetSpace::top(self.n, self.m, self.q);
        // v ∈ g_{q+1} iff every derivative d_i v is annihilated by the
        // equations of g_q, i.e. the annihilator of the basis.
        let ann = if self.basis.is_empty() {
            identity_rows(dst.len())
        } else {
            ExactMatrix::from_rows(self.basis.clone(), dst.len(), Rational::zero()).kernel()
        };
        let mut rows = Vec::new();
        for i in 0..self.n {
            for a in &ann {
                let mut v = vec![Rational::zero(); src.len()];
                for (c, (k, nu)) in src.coords().iter().enumerate() {
                    if let Some(mu) = nu.dec(i) {
                        let p = dst.position(*k, &mu).expect("lower coordinate");
                        v[c] = a[p].clone();
                    }
                }
                rows.push(v);
            }
        }
        let basis = if rows.is_empty() {
            identity_rows(src.len())
        } else {
            ExactMatrix::from_rows(rows, src.len(), Rational::zero()).kernel()
        };
        SymbolSpace { n: self.n, m: self.m, q: self.q + 1, basis }
    }
}

fn identity_rows(len: usize) -> Vec<Vec<Rational>> {
    (0..len)
        .map(|i| {
            let mut v = vec![Rational::zero(); len];
            v[i] = Rational::from_integer(1.into());
            v
        })
        .collect()
}

/// Matrix of `δ: ∧^r T* ⊗ S_{q+1} T* ⊗ E → ∧^{r+1} T* ⊗ S_q T* ⊗ E`.
///
/// Columns are indexed by `(I, nu, k)` and rows by `(J, mu, k)`, with `I, J`
/// increasing index sets in lexicographic order and `(nu, k)` in
/// [`JetSpace::top`] order.
#[derive(Clone, Debug)]
pub struct DeltaMap {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub q: u32,
    pub matrix: ExactMatrix<Rational>,
}

impl DeltaMap {
    pub fn new(n: usize, m: usize, r: usize, q: u32) -> Self {
        let src_sets = subsets(n, r);
        let dst_sets = subsets(n, r + 1);
        let src = JetSpace::top(n, m, q + 1);
        let dst = JetSpace::top(n, m, q);
        let mut mat = ExactMatrix::zeros(dst_sets.len() * dst.len(), src_sets.len() * src.len(), Rational::zero());
        for (a, set) in src_sets.iter().enumerate() {
            for (c, (k, nu)) in src.coords().iter().enumerate() {
                let col = a * src.len() + c;
                for i in 0..n {
                    let Some(mu) = nu.dec(i) else { continue };
                    let Some((sign, j)) = wedge_left(i, set) else { continue };
                    let row = subset_index(&dst_sets, &j) * dst.len() + dst.position(*k, &mu).expect("coordinate");
                    let v = mat.get(row, col) + Rational::from_integer(sign.into());
                    mat.set(row, col, v);
                }
            }
        }
        DeltaMap { n, m, r, q, matrix: mat }
    }

    /// Restriction to `∧^r T* ⊗ g` with `g ⊂ S_{q+1} T* ⊗ E`: images of the
    /// vectors `dx^I ⊗ b`, one column per pair.
    pub fn restricted(&self, g: &SymbolSpace) -> ExactMatrix<Rational> {
        assert_eq!(g.q, self.q + 1, "symbol order");
        let src_len = JetSpace::top(self.n, self.m, self.q + 1).len();
        let nsets = subsets(self.n, self.r).len();
        let mut cols = Vec::with_capacity(nsets * g.dim());
        for a in 0..nsets {
            for b in g.basis() {
                let mut v = vec![Rational::zero(); nsets * src_len];
                v[a * src_len..(a + 1) * src_len].clone_from_slice(b);
                cols.push(self.matrix.mul_vec(&v));
            }
        }
        let nrows = self.matrix.nrows();
        if cols.is_empty() {
            return ExactMatrix::zeros(nrows, 0, Rational::zero());
        }
        ExactMatrix::from_rows(cols, nrows, Rational::zero()).transpose()
    }
}

/// Rank of `δ` on `∧^r T* ⊗ g` where `g` has order `q+1 ≥ 1`.
fn delta_rank(g: &SymbolSpace, r: usize) -> usize {
    if g.q == 0 || g.dim() == 0 || r > g.n {
        return 0;
    }
    DeltaMap::new(g.n, g.m, r, g.q - 1).restricted(g).rank()
}

/// `dim Z^r(g_q)`, the kernel of `δ` on `∧^r T* ⊗ g_q`.
pub fn delta_cocycles(g: &SymbolSpace, r: usize) -> usize {
    binomial(g.n as u64, r as u64) as usize * g.dim() - delta_rank(g, r)
}

/// `dim H^r(g_q) = dim Z^r(g_q) - rank δ(∧^{r-1} T* ⊗ g_{q+1})`.
pub fn delta_cohomology(g: &SymbolSpace, r: usize) -> usize {
    let z = delta_cocycles(g, r);
    if r == 0 {
        return z;
    }
    z - delta_rank(&g.prolong(), r - 1)
}

/// Fiber dimensions of the three rows of the fundamental diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramDims {
    pub q: u32,
    /// Spencer bundles `C_r`.
    pub spencer: Vec<usize>,
    /// `C_r(E)`.
    pub middle: Vec<usize>,
    /// Janet bundles `F_r`.
    pub janet: Vec<usize>,
}

impl DiagramDims {
    /// `C_r + F_r = C_r(E)` for every `r`.
    pub fn columns_exact(&self) -> bool {
        (0..self.middle.len()).all(|r| self.spencer[r] + self.janet[r] == self.middle[r])
    }
}

/// Dimensions of `C_r`, `C_r(E)`, `F_r` for `r = 0..=n`, after certifying
/// `pi(R_{q+1}) = R_q`.
pub fn spencer_janet_dims(sys: &LinearSystem) -> Result<DiagramDims, JetError> {
    sys.check_projection()?;
    let (n, m, q) = (sys.n, sys.m, sys.q);
    let jq = JetSpace::full(n, m, q);
    let rq = sys.solution_basis();
    let g_next = sys.prolong(1).symbol();
    let s_next = SymbolSpace::full(n, m, q + 1);
    let rs: Vec<usize> = (0..=n).collect();
    let per_r = par::map(&rs, 2, |&r| {
        let wedge = binomial(n as u64, r as u64) as usize;
        let (c, ce, f) = if r == 0 {
            (rq.len(), jq.len(), jq.len() - rq.len())
        } else {
            let c = wedge * rq.len() - delta_rank(&g_next, r - 1);
            let ce = wedge * jq.len() - delta_rank(&s_next, r - 1);
            let f = wedge * jq.len() - span_rank(n, m, q, r, &rq, &s_next);
            (c, ce, f)
        };
        (c, ce, f)
    });
    Ok(DiagramDims {
        q,
        spencer: per_r.iter().map(|x| x.0).collect(),
        middle: per_r.iter().map(|x| x.1).collect(),
        janet: per_r.iter().map(|x| x.2).collect(),
    })
}

/// `dim(∧^r T* ⊗ R_q + δ(∧^{r-1} T* ⊗ S_{q+1} T* ⊗ E))` inside `∧^r T* ⊗ J_q(E)`.
fn span_rank(n: usize, m: usize, q: u32, r: usize, rq: &[Vec<Rational>], s_next: &SymbolSpace) -> usize {
    let jq = JetSpace::full(n, m, q);
    let top = JetSpace::top(n, m, q);
    let sets = subsets(n, r);
    let width = sets.len() * jq.len();
    let mut vecs = Vec::new();
    for a in 0..sets.len() {
        for b in rq {
            let mut v = vec![Rational::zero(); width];
            v[a * jq.len()..(a + 1) * jq.len()].clone_from_slice(b);
            vecs.push(v);
        }
    }
    {
        // δ-image lives in ∧^r ⊗ S_q ⊗ E; embed into ∧^r ⊗ J_q(E).
        let img = DeltaMap::new(n, m, r - 1, q).restricted(s_next).transpose();
        let embed: Vec<usize> = top.coords().iter().map(|(k, mu)| jq.position(*k, mu).expect("top in full")).collect();
        for col in img.rows_vec() {
            let mut v = vec![Rational::zero(); width];
            for (a, _) in sets.iter().enumerate() {
                for (t, &p) in embed.iter().enumerate() {
                    v[a * jq.len() + p] = col[a * top.len() + t].clone();
                }
            }
            vecs.push(v);
        }
    }
    if vecs.is_empty() {
        return 0;
    }
    ExactMatrix::from_rows(vecs, width, Rational::zero()).rank()
}

/// Alternating sum `d_0 - d_1 + d_2 - ...`.
pub fn euler_poincare(dims: &[i64]) -> i64 {
    dims.iter().enumerate().map(|(i, d)| if i % 2 == 0 { *d } else { -*d }).sum()
}

/// Builds a row from `(coefficient, k, mu)` triples.
pub fn jet_row(n: usize, terms: &[(i64, usize, &[u16])]) -> JetRow {
    let mut row = JetRow::new();
    for (c, k, mu) in terms {
        assert_eq!(mu.len(), n, "multi-index arity");
        *row.entry((*k, MultiIndex::from_slice(mu))).or_insert_with(Rational::zero) += Rational::from_integer((*c).into());
    }
    row.retain(|_, c| !c.is_zero());
    row
}

/// The Macaulay system `y_33 = 0, y_23 - y_11 = 0, y_22 = 0` in three variables.
pub fn macaulay_system() -> LinearSystem {
    let rows = vec![
        jet_row(3, &[(1, 0, &[0, 0, 2])]),
        jet_row(3, &[(1, 0, &[0, 1, 1]), (-1, 0, &[2, 0, 0])]),
        jet_row(3, &[(1, 0, &[0, 2, 0])]),
    ];
    LinearSystem::new(3, 1, 2, rows).expect("order two rows")
}
