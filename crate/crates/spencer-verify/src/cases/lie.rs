use spencer::equations_engine::GroupKind;
use spencer::lie_structure::*;
use spencer::symbolic_core::RatFunc;

use super::*;

pub fn mc_affine(_: &Ctx) -> CaseResult {
    let forms = affine_mc_forms();
    let c = structure_constants(&affine_generators()).map_err(|e| e.to_string())?;
    expect_eq("c^1_{12}", c.get(0, 0, 1).clone(), q(1, 1))?;
    mc_verify(&forms, &c)?;
    // a sign flip in c must be caught
    let mut bad = c.clone();
    bad.set_skew(0, 0, 1, q(-1, 1));
    check(mc_verify(&forms, &bad).is_err(), || "flipped structure constants accepted".into())?;
    pass(vec!["d omega^1 + omega^1 ^ omega^2 = 0, d omega^2 = 0, alpha o omega = id".into()])
}

pub fn adjoint_rep(_: &Ctx) -> CaseResult {
    let forms = affine_mc_forms();
    let c = structure_constants(&affine_generators()).map_err(|e| e.to_string())?;
    let res = adjoint_rep_residual(&forms, &c, &affine_adjoint_matrix());
    for (a, row) in res.iter().enumerate() {
        for (b, col) in row.iter().enumerate() {
            for (i, r) in col.iter().enumerate() {
                check(r.is_zero(), || format!("residual ({a},{b},{i}) = {r}"))?;
            }
        }
    }
    pass(vec!["M(a) = [[a2, -a1], [0, 1]] solves the adjoint system".into()])
}

pub fn structure_constants_case(_: &Ctx) -> CaseResult {
    let mut detail = Vec::new();
    for n in 1..=4 {
        let mut counts = Vec::new();
        for kind in [GroupKind::Killing, GroupKind::Weyl, GroupKind::Conformal] {
            let gs = system(kind, n)?;
            let want = match kind {
                GroupKind::Killing => n * (n + 1) / 2,
                GroupKind::Weyl => (n * n + n + 2) / 2,
                _ => (n + 1) * (n + 2) / 2,
            };
            expect_eq(&format!("{kind:?} n={n} generator count"), gs.dim(), want)?;
            let c = structure_constants(&gs.generators).map_err(|e| format!("{kind:?} n={n}: {e}"))?;
            jacobi_check(&c).map_err(|w| format!("{kind:?} n={n}: {w:?}"))?;
            counts.push(gs.dim());
        }
        detail.push(format!("n={n}: killing {}, weyl {}, conformal {}", counts[0], counts[1], counts[2]));
    }
    pass(detail)
}

fn algebras() -> Result<Vec<(&'static str, StructureConstants)>, String> {
    let affine = structure_constants(&affine_generators()).map_err(|e| e.to_string())?;
    let proj = structure_constants(&system(GroupKind::ProjectiveLine, 1)?.generators).map_err(|e| e.to_string())?;
    Ok(vec![("affine", affine), ("projective line", proj)])
}

fn random_potential(rng: &mut ChaCha8Rng, p: usize) -> GaugePotential {
    GaugePotential::new((0..p).map(|_| (0..2).map(|_| random_rf(rng, 2, 2)).collect()).collect())
}

pub fn gauge_nabla(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 3);
    for (name, c) in algebras()? {
        let p = c.dim();
        for s in 0..ctx.samples {
            let a = random_potential(&mut rng, p);
            let lam: Vec<RatFunc> = (0..p).map(|_| random_rf(&mut rng, 2, 2)).collect();
            let f = curvature(&a, &c);
            let l1 = nabla(&a, &c, &AlgForm::from_functions(lam.clone())).map_err(|e| e.to_string())?;
            let l2 = nabla(&a, &c, &l1).map_err(|e| e.to_string())?;
            for t in 0..p {
                let mut want = RatFunc::zero(2);
                for r in 0..p {
                    for u in 0..p {
                        want = &want + &(&f.f[r][0][1] * &lam[u]).scale(c.get(t, u, r));
                    }
                }
                let got = l2.two_form_entry(t, 0, 1);
                check(got == want, || format!("{name} sample {s} tau={t}: {got} != {want}"))?;
            }
        }
    }
    pass(vec![format!("{} random (A, lambda) per algebra, seed {}", ctx.samples, ctx.seed)])
}

pub fn poincare_el_case(ctx: &Ctx) -> CaseResult {
    let mut rng = rng(ctx, 4);
    for (name, c) in algebras()? {
        let p = c.dim();
        for s in 0..ctx.samples {
            let a = random_potential(&mut rng, p);
            let lam: Vec<RatFunc> = (0..p).map(|_| random_rf(&mut rng, 2, 2)).collect();
            let sa: Vec<Vec<RatFunc>> = (0..2).map(|_| (0..p).map(|_| random_rf(&mut rng, 2, 2)).collect()).collect();
            let r = poincare_duality_residual(&a, &c, &lam, &sa);
            check(r.is_zero(), || format!("{name} sample {s}: residual {r}"))?;
        }
    }
    pass(vec![format!("{} random (A, lambda, S) per algebra, seed {}", ctx.samples, ctx.seed)])
}
