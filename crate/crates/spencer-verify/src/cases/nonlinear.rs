use spencer::nonlinear_jets::*;

use super::*;

fn err(e: NonlinearError) -> String {
    e.to_string()
}

fn random_point_jet(rng: &mut ChaCha8Rng, n: usize, order: u32, src: &[Rational]) -> JetOfMap<Rational> {
    loop {
        let mut vals = Vec::new();
        for k in 0..n {
            for mu in MultiIndex::up_to_degree(n, order) {
                let c: i64 = rng.gen_range(-4..=4);
                let c = if mu.degree() == 1 && mu.get(k) == 1 { c + 5 } else { c };
                vals.push(((k, mu), q(c, rng.gen_range(1..=3))));
            }
        }
        if let Ok(j) = JetOfMap::new(src.to_vec(), order, vals) {
            return j;
        }
    }
}

pub fn groupoid(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 20);
    for s in 0..ctx.samples {
        let n = 1 + s % 3;
        let order = 1 + (s % 3) as u32;
        let x: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
        let f = random_point_jet(&mut rng, n, order, &x);
        let g = random_point_jet(&mut rng, n, order, &f.target());
        let h = random_point_jet(&mut rng, n, order, &g.target());
        let tag = |law: &str| format!("sample {s} (n={n}, order {order}): {law}");
        let left = h.compose(&g).map_err(err)?.compose(&f).map_err(err)?;
        let right = h.compose(&g.compose(&f).map_err(err)?).map_err(err)?;
        check(left.is_equal(&right), || tag("associativity"))?;
        let idx = JetOfMap::identity(x.clone(), order).map_err(err)?;
        let idy = JetOfMap::identity(f.target(), order).map_err(err)?;
        check(f.compose(&idx).map_err(err)?.is_equal(&f), || tag("right identity"))?;
        check(idy.compose(&f).map_err(err)?.is_equal(&f), || tag("left identity"))?;
        let fi = f.inverse().map_err(err)?;
        check(fi.compose(&f).map_err(err)?.is_equal(&idx), || tag("left inverse"))?;
        check(f.compose(&fi).map_err(err)?.is_equal(&idy), || tag("right inverse"))?;
    }
    // f(x) = 2x + x^2 at 0 has inverse jet (1/2, -1/4, 3/8)
    let mi = |d: u16| MultiIndex::from_slice(&[d]);
    let vals = [0, 2, 2, 0].iter().enumerate().map(|(d, &c)| ((0, mi(d as u16)), q(c, 1)));
    let g = JetOfMap::new(vec![q(0, 1)], 3, vals).map_err(err)?.inverse().map_err(err)?;
    let coeffs: Vec<Rational> = (1..=3).map(|d| g.get(0, &mi(d))).collect();
    expect_eq("inverse of 2x + x^2", coeffs, vec![q(1, 2), q(-1, 4), q(3, 8)])?;
    pass(vec![format!("{} random triples, orders 1..3, n = 1..3", ctx.samples)])
}

pub fn holonomic(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 21);
    for s in 0..ctx.samples.min(8) {
        let n = 1 + s % 2;
        let fs: Vec<Poly> = (0..n).map(|k| &random_poly(&mut rng, n, 3) + &Poly::var(n, k).scale(&q(7, 1))).collect();
        let Ok(f) = JetOfMap::holonomic(&fs, 3) else { continue };
        let chi = nonlinear_spencer(&f).map_err(err)?;
        check(chi.is_zero(), || format!("sample {s}: chi(j_3 f) != 0 for f = {fs:?}"))?;
    }
    pass(vec!["chi_2(j_3 f) = 0 for random polynomial maps".into()])
}

pub fn cc(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 22);
    let mut detail = Vec::new();
    for (n, order) in [(2, 2), (3, 2), (2, 3)] {
        let f = random_poly_section(n, order, 1, &mut rng);
        let chi = nonlinear_spencer(&f).map_err(err)?;
        let r = compatibility_residuals(&chi);
        let bad = r.first.iter().find(|(_, v)| !v.is_zero()).map(|(k, _)| format!("first {k:?}"));
        let bad = bad.or_else(|| r.second.iter().find(|(_, v)| !v.is_zero()).map(|(k, _)| format!("second {k:?}")));
        if let Some(b) = bad {
            return Err(format!("n={n}, order {order}: residual {b} nonzero"));
        }
        detail.push(format!("n={n}, f of order {order}: {} first, {} second identities", r.first.len(), r.second.len()));
    }
    check(detail.iter().any(|d| !d.contains(" 0 second")), || "second condition never exercised".into())?;
    pass(detail)
}

pub fn gauge(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 23);
    let f = random_poly_section(2, 2, 1, &mut rng);
    let g = random_poly_section(2, 2, 1, &mut rng);
    let yf = f.target_polys().ok_or("non-polynomial target")?;
    // way one: D-bar of the composite equals the gauge transform of D-bar g
    let gf = g.substitute(&yf).ok_or("substitution failed")?.compose(&f).map_err(err)?;
    let direct = nonlinear_spencer(&gf).map_err(err)?;
    let chi_g = nonlinear_spencer(&g).map_err(err)?.substitute(&yf).ok_or("substitution failed")?;
    let gauged = gauge_transform(&chi_g, &f).map_err(err)?;
    check(gauged.is_equal(&direct), || format!("gauge law fails at {:?}", gauged.mismatches(&direct).first()))?;
    // way two: on an arbitrary form, gauging by f then h equals gauging by f o h
    let h = random_poly_section(2, 2, 1, &mut rng);
    let yh = h.target_polys().ok_or("non-polynomial target")?;
    let fh = f.substitute(&yh).ok_or("substitution failed")?.compose(&h).map_err(err)?;
    let chi = ChiForm::from_components(vec![random_poly_vertical(2, 1, 1, &mut rng), random_poly_vertical(2, 1, 1, &mut rng)]);
    let step = gauge_transform(&chi.substitute(&yf).ok_or("substitution failed")?, &f).map_err(err)?;
    let twice = gauge_transform(&step.substitute(&yh).ok_or("substitution failed")?, &h).map_err(err)?;
    let yfh = fh.target_polys().ok_or("non-polynomial target")?;
    let once = gauge_transform(&chi.substitute(&yfh).ok_or("substitution failed")?, &fh).map_err(err)?;
    check(twice.is_equal(&once), || "gauge action is not compatible with composition".into())?;
    pass(vec!["D-bar(g o f) = gauge(D-bar g, f) symbolically".into(), "gauge by f then h = gauge by f o h".into()])
}

pub fn variation(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 24);
    for qq in 0..=1u32 {
        let f = random_poly_section(2, qq + 2, 1, &mut rng);
        let xi = random_poly_vertical(2, qq + 1, 1, &mut rng);
        let rep = variation_check(&f, &xi).map_err(err)?;
        check(rep.agree(), || format!("symbolic q={qq}: formulas disagree"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for s in 0..ctx.samples {
        let qq = (s % 2) as u32;
        let n = 1 + s % 3;
        let f = random_series_section(n, qq + 2, 3, &mut rng);
        let xi = random_series_vertical(n, qq + 1, 3, &mut rng);
        let rep = variation_check(&f, &xi).map_err(err)?;
        if !rep.agree() {
            let src = rep.source.as_ref().map(|s| s.mismatches(&rep.dual).len()).unwrap_or(0);
            return Err(format!(
                "sample {s} (n={n}, q={qq}): mismatches source {src}, target {}, bracket {}",
                rep.target.mismatches(&rep.dual).len(),
                rep.bracket.mismatches(&rep.dual).len()
            ));
        }
    }
    pass(vec![format!(
        "symbolic for q = 0, 1; {} sample points (seed {}) with t^2 = 0 perturbation",
        ctx.samples, ctx.seed
    )])
}
