//! First-order variations of `chi_q` computed three independent ways.

use super::*;

/// Bracket of vertical jets, `{a, b}^k_mu = sum binom(mu, lambda)
/// (a^r_lambda b^k_{mu-lambda+1_r} - b^r_lambda a^k_{mu-lambda+1_r})`,
/// so that `{j(a), j(b)} = j([a, b])`. Loses one order.
pub fn bracket<F: Field>(a: &VerticalJet<F>, b: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    let q = a.order().min(b.order()).checked_sub(1).ok_or(NonlinearError::UnsupportedOrder(0))?;
    let n = a.n();
    Ok(VerticalJet::from_fn(n, q, a.zero_elem().clone(), |k, mu| {
        let mut acc = a.zero_elem().clone();
        for la in mu.sub_indices() {
            let rest = mu.checked_sub(&la).unwrap();
            let c = binom_q(mu, &la);
            for r in 0..n {
                let t = a.get(r, &la).times(&b.get(k, &rest.inc(r))).minus(&b.get(r, &la).times(&a.get(k, &rest.inc(r))));
                acc = acc.plus(&t.scaled(&c));
            }
        }
        acc
    }))
}

/// `t`-coefficient of `D-bar(f_{q+1} o (id_{q+1} + t xi_{q+1}))`.
pub fn source_variation_dual<F: DiffField>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<ChiForm<F>, NonlinearError> {
    let n = f.n();
    let q1 = f.order();
    if xi.order() < q1 {
        return Err(NonlinearError::OrderMismatch { left: xi.order(), right: q1 });
    }
    let z = MultiIndex::zero(n);
    let zero = f.zero();
    let moved: Vec<Dual<F>> = (0..n).map(|i| Dual::new(f.source[i].clone(), xi.get(i, &z))).collect();
    // f_{q+1} evaluated at x + t xi(x)
    let shifted = JetOfMap::new(
        moved.clone(),
        q1,
        f.comps.iter().map(|((k, mu), c)| {
            let eps = (0..n).fold(zero.clone(), |acc, r| acc.plus(&xi.get(r, &z).times(&c.d(r))));
            ((*k, mu.clone()), Dual::new(c.clone(), eps))
        }),
    )?;
    let mut hv = Vec::new();
    for k in 0..n {
        for mu in MultiIndex::up_to_degree(n, q1) {
            let re = match mu.degree() {
                0 => f.source[k].clone(),
                1 if mu.get(k) == 1 => zero.one_like(),
                _ => zero.clone(),
            };
            hv.push(((k, mu.clone()), Dual::new(re, xi.get(k, &mu))));
        }
    }
    let h = JetOfMap::new(f.source.iter().cloned().map(Dual::real).collect(), q1, hv)?;
    let chi = nonlinear_spencer(&shifted.compose(&h)?)?;
    Ok(chi.map(zero, |c| c.eps.clone()))
}

/// Explicit source formulas for `q = 0, 1`:
/// `d_i xi^k - xi^k_i + xi^r d_r chi^k_{,i} + chi^k_{,r} d_i xi^r - chi^r_{,i} xi^k_r`
/// and, for `q = 1`,
/// `d_i xi^k_j - xi^k_{ij} + xi^r d_r chi^k_{j,i} + chi^k_{j,r} d_i xi^r
///  + chi^k_{r,i} xi^r_j - chi^r_{j,i} xi^k_r - chi^r_{,i} xi^k_{jr}`.
pub fn source_variation_formula<F: DiffField>(chi: &ChiForm<F>, xi: &VerticalJet<F>) -> Result<ChiForm<F>, NonlinearError> {
    let q = chi.order();
    if q > 1 {
        return Err(NonlinearError::UnsupportedOrder(q));
    }
    if xi.order() < q + 1 {
        return Err(NonlinearError::OrderMismatch { left: xi.order(), right: q + 1 });
    }
    let n = chi.n();
    let z = MultiIndex::zero(n);
    let u = |l: usize| MultiIndex::unit(n, l);
    let zero = chi.zero.clone();
    let parts = (0..n)
        .map(|i| {
            VerticalJet::from_fn(n, q, zero.clone(), |k, mu| {
                let mut acc = xi.get(k, mu).d(i).minus(&xi.get(k, &mu.inc(i)));
                for r in 0..n {
                    acc = acc
                        .plus(&xi.get(r, &z).times(&chi.get(k, mu, i).d(r)))
                        .plus(&chi.get(k, mu, r).times(&xi.get(r, &z).d(i)))
                        .minus(&chi.get(r, mu, i).times(&xi.get(k, &u(r))));
                }
                if mu.degree() == 1 {
                    let j = (0..n).find(|&j| mu.get(j) == 1).unwrap();
                    for r in 0..n {
                        acc = acc
                            .plus(&chi.get(k, &u(r), i).times(&xi.get(r, &u(j))))
                            .minus(&chi.get(r, &z, i).times(&xi.get(k, &u(j).inc(r))));
                    }
                }
                acc
            })
        })
        .collect();
    Ok(ChiForm::from_components(parts))
}

/// `xi-bar_{q+1} = xi_{q+1} + chi_{q+1}(xi)` with `chi_{q+1} = D-bar f_{q+2}`.
pub fn target_field<F: DiffField>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<VerticalJet<F>, NonlinearError> {
    let chi = nonlinear_spencer(f)?;
    Ok(xi.truncate(chi.order()).plus(&chi.contract(xi)))
}

/// Target-side formula `f_{q+1}^{-1} o D_Y eta_{q+1} o j_1(f)` with
/// `eta_{q+1} = f_{q+2}(xi-bar_{q+1})`; `f` has order `q + 2`.
pub fn target_variation_formula<F: DiffField>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<ChiForm<F>, NonlinearError> {
    let q = f.order().checked_sub(2).ok_or(NonlinearError::UnsupportedOrder(f.order()))?;
    let n = f.n();
    let eta = act(f, &target_field(f, xi)?)?;
    let target = f.target();
    let f1 = f.truncate(q + 1);
    let parts = (0..n)
        .map(|i| {
            let dy = VerticalJet::from_fn(n, q, f.zero(), |k, nu| {
                (0..n).fold(eta.get(k, nu).d(i), |acc, s| acc.minus(&eta.get(k, &nu.inc(s)).times(&target[s].d(i))))
            });
            act_inverse(&f1, &dy)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChiForm::from_components(parts))
}

/// `i(zeta) D xi-bar_{q+1} - {chi_{q+1}(zeta), xi-bar_{q+1}}`; `f` has order `q + 2`.
pub fn bracket_variation_formula<F: DiffField>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<ChiForm<F>, NonlinearError> {
    let chi = nonlinear_spencer(f)?;
    let xb = target_field(f, xi)?;
    let lin = linear_spencer(&xb)?;
    let n = f.n();
    let parts = (0..n)
        .map(|i| {
            let b = bracket(&chi.component(i), &xb)?;
            let l = lin.component(i);
            Ok(VerticalJet::from_fn(n, b.order(), f.zero(), |k, mu| l.get(k, mu).minus(&b.get(k, mu))))
        })
        .collect::<Result<Vec<_>, NonlinearError>>()?;
    Ok(ChiForm::from_components(parts))
}

/// All variation formulas for `f` of order `q + 2` and `xi` of order `q + 1`.
#[derive(Clone, Debug)]
pub struct VariationReport<F> {
    pub q: u32,
    pub dual: ChiForm<F>,
    /// Only for `q <= 1`.
    pub source: Option<ChiForm<F>>,
    pub target: ChiForm<F>,
    pub bracket: ChiForm<F>,
}

impl<F: Field> VariationReport<F> {
    pub fn agree(&self) -> bool {
        self.source.as_ref().is_none_or(|s| s.is_equal(&self.dual))
            && self.target.is_equal(&self.dual)
            && self.bracket.is_equal(&self.dual)
    }
}

pub fn variation_check<F: DiffField>(f: &JetOfMap<F>, xi: &VerticalJet<F>) -> Result<VariationReport<F>, NonlinearError> {
    let q = f.order().checked_sub(2).ok_or(NonlinearError::UnsupportedOrder(f.order()))?;
    let f1 = f.truncate(q + 1);
    let xi1 = xi.truncate(q + 1);
    let dual = source_variation_dual(&f1, &xi1)?;
    let source = if q <= 1 { Some(source_variation_formula(&nonlinear_spencer(&f1)?, &xi1)?) } else { None };
    let target = target_variation_formula(f, &xi1)?;
    let bracket = bracket_variation_formula(f, &xi1)?;
    Ok(VariationReport { q, dual, source, target, bracket })
}
