use spencer::curvature::*;
use spencer::equations_engine::{conformal_em_projection, maxwell_block, ConstantMetric};
use spencer::jet_theory::{delta_cohomology, SymbolSpace};

use super::*;

fn metrics() -> Vec<(&'static str, ConstantMetric)> {
    vec![
        ("euclidean 3", ConstantMetric::euclidean(3)),
        ("euclidean 4", ConstantMetric::euclidean(4)),
        ("minkowski 4", ConstantMetric::minkowski(4)),
    ]
}

fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    let mut a = vec![vec![q(0, 1); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = q(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            a[i][j] = v.clone();
            a[j][i] = v;
        }
    }
    a
}

fn trace_free(w: &WeylTensor) -> bool {
    w.tensor().contract().iter().flatten().all(|x| *x == q(0, 1))
}

pub fn curvature_trace(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 10);
    for (name, m) in metrics() {
        let n = m.n();
        for s in 0..ctx.samples {
            let a = random_sym(&mut rng, n);
            let (r, tr) = ricci_from_a(&a, &m).map_err(|e| e.to_string())?;
            let tra: Rational = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.upper(i, j) * &a[i][j]).sum();
            let want = q(2 * (n as i64 - 1), 1) * tra;
            check(tr == want, || format!("{name} sample {s}: tr R = {tr}, 2(n-1) tr A = {want}"))?;
            let riem = riemann_from_a(&a, &m).map_err(|e| e.to_string())?;
            check(riem.ricci() == r, || format!("{name} sample {s}: contraction differs"))?;
            let w = weyl_projection(&riem, &m).map_err(|e| e.to_string())?;
            check(trace_free(&w), || format!("{name} sample {s}: Weyl part has a trace"))?;
        }
    }
    pass(vec![format!("{} samples per metric, seed {}", ctx.samples, ctx.seed)])
}

pub fn curvature_splitting(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 11);
    let mut detail = Vec::new();
    for (name, m) in metrics() {
        let basis = z2_g1_basis(&m);
        for s in 0..ctx.samples {
            let t = random_riemann(&basis, &m, &mut rng);
            let lift = riemann_from_ricci(&t.ricci(), &m).map_err(|e| e.to_string())?;
            let w = weyl_projection(&t, &m).map_err(|e| e.to_string())?;
            check(lift.tensor().add(w.tensor()) == *t.tensor(), || format!("{name} sample {s}: lift + Weyl != Riemann"))?;
            check(trace_free(&w), || format!("{name} sample {s}: Weyl part has a trace"))?;
        }
        detail.push(format!("{name}: cocycle basis {}", basis.len()));
    }
    pass(detail)
}

/// Order-one Killing (`c = 0`) or conformal (`c = 2/n`) symbol for the Euclidean metric.
fn orthogonal_symbol(n: usize, c: Rational) -> SymbolSpace {
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = spencer::jet_theory::JetRow::new();
            *row.entry((j, MultiIndex::unit(n, i))).or_insert_with(|| q(0, 1)) += q(1, 1);
            *row.entry((i, MultiIndex::unit(n, j))).or_insert_with(|| q(0, 1)) += q(1, 1);
            if i == j {
                for r in 0..n {
                    *row.entry((r, MultiIndex::unit(n, r))).or_insert_with(|| q(0, 1)) -= c.clone();
                }
            }
            rows.push(row);
        }
    }
    SymbolSpace::from_equations(n, n, 1, &rows)
}

pub fn curvature_dims(_: &Ctx) -> CaseResult {
    let d4 = bundle_dims(4).map_err(|e| e.to_string())?;
    expect_eq("dim F1(4), dim F1hat(4)", (d4.f1, d4.f1_hat), (20, 10))?;
    let mut detail = vec![format!("n=4: F1 {}, F1hat {}", d4.f1, d4.f1_hat)];
    for n in 4..=6 {
        let d = bundle_dims(n).map_err(|e| e.to_string())?;
        expect_eq(&format!("n={n} difference"), d.difference, n * (n + 1) / 2)?;
        detail.push(format!("n={n}: F1 - F1hat = {}", d.difference));
    }
    // independent count through delta-cohomology of the symbols
    let f1 = delta_cohomology(&orthogonal_symbol(4, q(0, 1)), 2);
    let fh = delta_cohomology(&orthogonal_symbol(4, q(1, 2)), 2);
    expect_eq("H^2 of Killing and conformal symbols, n=4", (f1, fh), (20, 10))?;
    expect_eq("cocycle basis, n=4", z2_g1_basis(&ConstantMetric::euclidean(4)).len(), 20)?;
    pass(detail)
}

pub fn weyl_n3(ctx: &Ctx) -> CaseResult {
    let d = bundle_dims(3).map_err(|e| e.to_string())?;
    expect_eq("dim F1hat(3)", d.f1_hat, 0)?;
    let mut rng = rng(ctx, 12);
    let m = ConstantMetric::euclidean(3);
    let basis = z2_g1_basis(&m);
    for s in 0..ctx.samples {
        let t = random_riemann(&basis, &m, &mut rng);
        let w = weyl_projection(&t, &m).map_err(|e| e.to_string())?;
        check(w.is_zero(), || format!("sample {s}: nonzero Weyl tensor"))?;
    }
    pass(vec![format!("{} random curvature tensors at n=3", ctx.samples)])
}

pub fn maxwell(_: &Ctx) -> CaseResult {
    let r = maxwell_block(&ConstantMetric::minkowski(4)).map_err(|e| e.to_string())?;
    check(r.conservation_is_divergence, || format!("conservation law: {}", r.conservation.to_text()))?;
    check(r.stress_trace.is_zero(), || format!("stress trace {}", r.stress_trace))?;
    pass(vec![
        format!("compatibility of induction: {} condition(s), order {}", r.conservation.m_out(), r.conservation.order()),
        "stress trace vanishes identically".into(),
    ])
}

pub fn em_projection(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 13);
    let n = 4;
    for s in 0..ctx.samples {
        let a = random_poly(&mut rng, n, 3);
        let ai: Vec<Poly> = (0..n).map(|_| random_poly(&mut rng, n, 2)).collect();
        let p = conformal_em_projection(&a, &ai);
        check(p.matches_closed_form, || format!("sample {s}: F != n(dA_i - dA_j)"))?;
        check(p.closed, || format!("sample {s}: dF != 0"))?;
        let integrable: Vec<Poly> = (0..n).map(|i| a.diff(i)).collect();
        let z = conformal_em_projection(&a, &integrable);
        check(z.f.iter().flatten().all(Poly::is_zero), || format!("sample {s}: F nonzero on an integrable section"))?;
    }
    pass(vec![format!("{} random sections at n=4, seed {}", ctx.samples, ctx.seed)])
}
