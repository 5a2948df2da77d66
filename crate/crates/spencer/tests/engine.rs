mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use spencer::diffop::LinDiffOp;
use spencer::equations_engine::*;
use spencer::jet_theory::spencer_janet_dims;
use spencer::lie_structure::{jacobi_check, structure_constants};
use spencer::symbolic_core::{MultiIndex, Poly, QMatrix, RatFunc, Rational};

fn system(kind: GroupKind, n: usize) -> GroupSystem {
    build_group_system(kind, &ConstantMetric::euclidean(n)).unwrap()
}

fn kinds(n: usize) -> Vec<GroupKind> {
    let mut k = vec![GroupKind::Killing, GroupKind::Weyl, GroupKind::Conformal];
    if n == 1 {
        k.push(GroupKind::ProjectiveLine);
    }
    k
}

fn polys(rows: &[&[&str]], n: usize) -> Vec<Vec<Poly>> {
    rows.iter().map(|r| r.iter().map(|s| poly(s, n)).collect()).collect()
}

/// Zero-order operator with polynomial coefficients.
fn matrix_op(m: &[Vec<Poly>], n: usize) -> LinDiffOp {
    let mut op = LinDiffOp::zero(n, m[0].len(), m.len());
    for (a, row) in m.iter().enumerate() {
        for (b, p) in row.iter().enumerate() {
            if !p.is_zero() {
                op.add_coeff(a, b, MultiIndex::zero(n), RatFunc::from_poly(p.clone()));
            }
        }
    }
    op
}

/// Rank of the rational span of the rows of a constant-coefficient operator.
fn row_rank(op: &LinDiffOp) -> usize {
    let keys: Vec<(usize, MultiIndex)> =
        op.coeffs().keys().map(|(_, k, mu)| (*k, mu.clone())).collect::<BTreeSet<_>>().into_iter().collect();
    let mut m = QMatrix::qzeros(op.m_out(), keys.len());
    for ((a, k, mu), c) in op.coeffs() {
        let j = keys.iter().position(|x| *x == (*k, mu.clone())).unwrap();
        m.set(*a, j, c.as_constant().unwrap());
    }
    m.rank()
}

fn c(op: &LinDiffOp, row: usize, k: usize, mu: &[u16]) -> Rational {
    op.coeff(row, k, &MultiIndex::from_slice(mu)).as_constant().unwrap()
}

#[test]
fn generator_counts_and_closure() {
    for n in 1..=4 {
        for kind in kinds(n) {
            let gs = system(kind, n);
            let expected = match kind {
                GroupKind::Killing => n * (n + 1) / 2,
                GroupKind::Weyl => (n * n + n + 2) / 2,
                _ => (n + 1) * (n + 2) / 2,
            };
            assert_eq!(gs.dim(), expected, "{kind:?} n={n}");
            let sc = structure_constants(&gs.generators).unwrap();
            assert!(jacobi_check(&sc).is_ok());
        }
    }
    assert_eq!(system(GroupKind::Conformal, 4).dim(), 15);
}

#[test]
fn weyl_plane_generators() {
    let gs = system(GroupKind::Weyl, 2);
    let got: Vec<Vec<Poly>> = gs.generators.iter().map(|g| g.comps.clone()).collect();
    assert_eq!(got, polys(&[&["1", "0"], &["0", "1"], &["-x2", "x1"], &["x1", "x2"]], 2));
    let conf = system(GroupKind::Conformal, 2);
    assert_eq!(conf.generators[4].comps, vec![poly("1/2*x1^2 - 1/2*x2^2", 2), poly("x1*x2", 2)]);
    assert_eq!(system(GroupKind::ProjectiveLine, 1).generators[2].comps, vec![poly("1/2*x1^2", 1)]);
}

#[test]
fn elation_divergence() {
    for n in 1..=4 {
        let gs = system(GroupKind::Conformal, n);
        for s in 0..n {
            let th = &gs.generators[gs.param_index(Param::Elation(s)).unwrap()];
            let div = (0..n).fold(Poly::zero(n), |acc, r| &acc + &th.comps[r].diff(r));
            assert_eq!(div, Poly::var(n, s).scale(&q(n as i64, 1)));
        }
    }
    let gs = build_group_system(GroupKind::Conformal, &ConstantMetric::minkowski(4)).unwrap();
    let th = &gs.generators[gs.param_index(Param::Elation(3)).unwrap()];
    let div = (0..4).fold(Poly::zero(4), |acc, r| &acc + &th.comps[r].diff(r));
    assert_eq!(div, Poly::var(4, 3).scale(&q(-4, 1)));
}

#[test]
fn generators_solve_their_lie_equations() {
    for n in 1..=3 {
        for kind in kinds(n) {
            let gs = system(kind, n);
            for g in &gs.generators {
                for row in gs.lie_equations.rows() {
                    let v = row.iter().fold(Poly::zero(n), |acc, ((k, mu), w)| &acc + &g.comps[*k].diff_multi(mu).scale(w));
                    assert!(v.is_zero(), "{kind:?} n={n}");
                }
            }
        }
    }
}

#[test]
fn parametric_sections_span_the_lie_equations() {
    for n in 1..=3 {
        for kind in kinds(n) {
            let gs = system(kind, n);
            let sys = &gs.lie_equations;
            assert_eq!(sys.dim(), gs.dim(), "{kind:?} n={n}");
            let depth = sys.order().max(gs.param_order + 1);
            let pro = sys.prolong(depth - sys.order());
            let mat = pro.matrix();
            for p in 0..gs.dim() {
                let mut e = vec![q(0, 1); gs.dim()];
                e[p] = q(1, 1);
                let v = gs.param_section_vector(depth, &e);
                assert!(mat.mul_vec(&v).iter().all(|x| *x == q(0, 1)), "{kind:?} n={n} p={p}");
                for (a, _) in gs.params.iter().enumerate() {
                    let f = gs.param_functional(a);
                    let val = f.iter().fold(q(0, 1), |acc, ((k, mu), w)| acc + w * &gs.param_jet(*k, mu)[p]);
                    assert_eq!(val, if a == p { q(1, 1) } else { q(0, 1) });
                }
            }
        }
    }
}

#[test]
fn jet_matrices() {
    let (m, det) = system(GroupKind::ProjectiveLine, 1).jet_matrix_checked().unwrap();
    assert_eq!(m, polys(&[&["1", "x1", "1/2*x1^2"], &["0", "1", "x1"], &["0", "0", "1"]], 1));
    assert_eq!(det, poly("1", 1));

    let (m, _) = system(GroupKind::Weyl, 2).jet_matrix_checked().unwrap();
    let want = polys(&[&["1", "0", "-x2", "x1"], &["0", "1", "x1", "x2"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]], 2);
    assert_eq!(m, want);

    let (m, det) = system(GroupKind::Conformal, 2).jet_matrix_checked().unwrap();
    assert_eq!(det, poly("1", 2));
    assert_eq!(m[2], polys(&[&["0", "0", "1", "0", "x2", "-x1"]], 2)[0]);
    assert_eq!(m[3], polys(&[&["0", "0", "0", "1", "x1", "x2"]], 2)[0]);
    assert_eq!(m[4], polys(&[&["0", "0", "0", "0", "1", "0"]], 2)[0]);
    assert_eq!(m[0][4], poly("1/2*x1^2 - 1/2*x2^2", 2));

    for n in 1..=3 {
        for kind in kinds(n) {
            let gs = system(kind, n);
            let m = gs.jet_matrix();
            let origin = vec![q(0, 1); n];
            for (a, row) in m.iter().enumerate() {
                for (b, p) in row.iter().enumerate() {
                    assert_eq!(p.eval(&origin), if a == b { q(1, 1) } else { q(0, 1) });
                }
            }
        }
    }
}

#[test]
fn rank_deficient_generators() {
    let mut gs = system(GroupKind::Killing, 2);
    gs.generators[1] = gs.generators[0].clone();
    assert_eq!(gs.jet_matrix_checked().unwrap_err(), EngineError::RankDeficient { rank: 2, size: 3 });
}

#[test]
fn unsupported_inputs() {
    assert!(matches!(GroupKind::from_name("affine"), Err(EngineError::Unsupported(_))));
    assert_eq!(GroupKind::from_name("weyl").unwrap(), GroupKind::Weyl);
    assert!(matches!(ConstantMetric::diagonal(&[1, 0]), Err(EngineError::Metric(_))));
    let skew = QMatrix::from_ints(&[vec![1, 1], vec![0, 1]]);
    assert!(matches!(ConstantMetric::new(skew), Err(EngineError::Metric(_))));
    let off = ConstantMetric::new(QMatrix::from_ints(&[vec![2, 1], vec![1, 2]])).unwrap();
    assert!(matches!(build_group_system(GroupKind::Killing, &off), Err(EngineError::Unsupported(_))));
    assert!(build_group_system(GroupKind::ProjectiveLine, &ConstantMetric::euclidean(2)).is_err());
}

#[test]
fn first_spencer_operator_rows() {
    let d1 = spencer_d1(&system(GroupKind::ProjectiveLine, 1));
    let names: Vec<String> = ["xi", "xi_x", "xi_xx"].iter().map(|s| s.to_string()).collect();
    assert_eq!(d1.pretty(&names), vec!["+d1(xi) -xi_x", "+d1(xi_x) -xi_xx", "+d1(xi_xx)"]);

    // Killing plane: d_i xi^k - xi^k_i and d_i of the rotation
    let d1 = spencer_d1(&system(GroupKind::Killing, 2));
    assert_eq!(d1.m_out(), 6);
    assert_eq!(d1.row(0).coeffs().len(), 1);
    assert_eq!(c(&d1, 1, 2, &[0, 0]), q(1, 1));
    assert_eq!(c(&d1, 2, 2, &[0, 0]), q(-1, 1));
    assert_eq!(d1.row(3).coeffs().len(), 1);
    assert_eq!(c(&d1, 4, 2, &[1, 0]), q(1, 1));
    assert_eq!(d1.row(4).coeffs().len(), 1);
}

#[test]
fn first_operator_kills_group_orbits() {
    for n in 1..=3 {
        for kind in kinds(n) {
            let gs = system(kind, n);
            // constant parameters give zero: no zero-order term survives
            let comp = spencer_d1(&gs).compose(&matrix_op(&gs.jet_matrix(), n)).unwrap();
            assert!(comp.coeffs().keys().all(|(_, _, mu)| mu.degree() == 1), "{kind:?} n={n}");
        }
    }
}

#[test]
fn second_operator_is_the_first_order_cc() {
    for (kind, n) in [(GroupKind::ProjectiveLine, 1), (GroupKind::Killing, 2), (GroupKind::Weyl, 2), (GroupKind::Conformal, 2), (GroupKind::Killing, 3)] {
        let gs = system(kind, n);
        let d1 = spencer_d1(&gs);
        let d2 = spencer_d2(&gs);
        assert!(d2.compose(&d1).unwrap().is_zero());
        assert_eq!(d2.m_out(), potential_count(&gs));
        if n == 1 {
            continue;
        }
        let cc = d1.compatibility_conditions(1).unwrap();
        let both = row_rank(&d2.stack(&cc).unwrap());
        assert_eq!(row_rank(&d2), both, "{kind:?} n={n}");
        assert_eq!(row_rank(&cc), both, "{kind:?} n={n}");
    }
    let conf = system(GroupKind::Conformal, 2);
    assert_eq!(spencer_d1(&conf).m_out(), 12);
    assert_eq!(spencer_d2(&conf).m_out(), 6);
    assert_eq!(spencer_d2(&system(GroupKind::Killing, 2)).m_out(), 3);
}

#[test]
fn conformal_plane_diagram() {
    let d = spencer_janet_dims(&system(GroupKind::Conformal, 2).lie_equations).unwrap();
    assert_eq!(d.spencer, vec![6, 12, 6]);
    assert_eq!(d.middle, vec![20, 30, 12]);
    assert_eq!(d.janet, vec![14, 18, 6]);
    assert!(d.columns_exact());
}

#[test]
fn projective_equilibrium() {
    let eq = equilibrium(&system(GroupKind::ProjectiveLine, 1));
    assert_eq!(eq.pretty(), vec!["Cauchy: +d1(sigma^{1,1}) = f^1", "Clausius: +sigma^{1,1} +d1(nu^1) = u", "Maxwell-Weyl: +nu^1 +d1(pi^{1,1}) = v^1"]);
}

#[test]
fn weyl_plane_equilibrium() {
    let gs = system(GroupKind::Weyl, 2);
    let eq = equilibrium(&gs);
    assert_eq!(eq.op, spencer_d1(&gs).formal_adjoint().neg());
    assert_eq!(eq.row_labels, vec!["Cauchy", "Cauchy", "Cosserat", "Clausius"]);
    // duals: sigma^{k,r} = 2k + r, mu^{12,r} = 4 + r, nu^r = 6 + r
    for k in 0..2 {
        let row = eq.op.row(k);
        assert_eq!(row.coeffs().len(), 2);
        assert_eq!(c(&eq.op, k, 2 * k, &[1, 0]), q(1, 1));
        assert_eq!(c(&eq.op, k, 2 * k + 1, &[0, 1]), q(1, 1));
    }
    assert_eq!(eq.op.row(2).coeffs().len(), 4);
    assert_eq!(c(&eq.op, 2, 4, &[1, 0]), q(1, 1));
    assert_eq!(c(&eq.op, 2, 5, &[0, 1]), q(1, 1));
    assert_eq!(c(&eq.op, 2, 2, &[0, 0]), q(1, 1));
    assert_eq!(c(&eq.op, 2, 1, &[0, 0]), q(-1, 1));
    assert_eq!(eq.op.row(3).coeffs().len(), 4);
    assert_eq!(c(&eq.op, 3, 0, &[0, 0]), q(1, 1));
    assert_eq!(c(&eq.op, 3, 3, &[0, 0]), q(1, 1));
}

#[test]
fn conformal_plane_elation_rows() {
    let gs = system(GroupKind::Conformal, 2);
    let eq = equilibrium(&gs);
    let lines = eq.pretty();
    assert_eq!(lines[4], "Maxwell-Weyl: +mu^{12,2} +nu^1 +d1(pi^{1,1}) +d2(pi^{1,2}) = v^1");
    assert_eq!(lines[5], "Maxwell-Weyl: -mu^{12,1} +nu^2 +d1(pi^{2,1}) +d2(pi^{2,2}) = v^2");
    let mu = maxwell_weyl_mu(&gs);
    assert_eq!(mu, vec![vec![("mu^{12,2}".to_string(), q(1, 1))], vec![("mu^{12,1}".to_string(), q(-1, 1))]]);
    // at n = 3 each elation row carries nu^s with unit weight
    let gs = system(GroupKind::Conformal, 3);
    let eq = equilibrium(&gs);
    let nu = gs.param_index(Param::Dilatation).unwrap();
    for s in 0..3 {
        let row = gs.param_index(Param::Elation(s)).unwrap();
        assert_eq!(c(&eq.op, row, eq.dual_index(nu, s), &[0, 0, 0]), q(1, 1));
    }
    assert_eq!(maxwell_weyl_mu(&gs).iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2, 2]);
}

#[test]
fn divergence_certificates_for_every_system() {
    for n in 1..=3 {
        for kind in kinds(n) {
            let gs = system(kind, n);
            let eq = equilibrium(&gs);
            let forms = divergence_certificate(&gs, &eq).unwrap();
            assert_eq!(forms.len(), gs.dim());
        }
    }
}

#[test]
fn boxed_fluxes() {
    let gs = system(GroupKind::ProjectiveLine, 1);
    let eq = equilibrium(&gs);
    let forms = divergence_certificate(&gs, &eq).unwrap();
    assert_eq!(forms[1].pretty(&eq), vec!["D^1 = (x1)*sigma^{1,1} + nu^1"]);
    assert_eq!(forms[2].pretty(&eq), vec!["D^1 = (1/2*x1^2)*sigma^{1,1} + (x1)*nu^1 + pi^{1,1}"]);

    let gs = system(GroupKind::Weyl, 2);
    let eq = equilibrium(&gs);
    let forms = divergence_certificate(&gs, &eq).unwrap();
    assert_eq!(forms[3].multipliers, vec![poly("x1", 2), poly("x2", 2), poly("0", 2), poly("1", 2)]);

    let gs = system(GroupKind::Conformal, 2);
    let eq = equilibrium(&gs);
    let forms = divergence_certificate(&gs, &eq).unwrap();
    let want = vec![poly("1/2*x1^2 - 1/2*x2^2", 2), poly("x1*x2", 2), poly("x2", 2), poly("x1", 2), poly("1", 2), poly("0", 2)];
    assert_eq!(forms[4].multipliers, want);
}

#[test]
fn wrong_multipliers_fail() {
    let gs = system(GroupKind::ProjectiveLine, 1);
    let eq = equilibrium(&gs);
    // the flux with 1/2 x^2 placed on the last dual instead of sigma
    let bad = DivergenceForm { tau: 2, multipliers: vec![poly("0", 1), poly("x1", 1), poly("1 + 1/2*x1^2", 1)] };
    assert!(matches!(bad.verify(&eq), Err(EngineError::CertificateFailed { tau: 2, .. })));
}

#[test]
fn synthesized_elation_fluxes() {
    for (kind, n) in [(GroupKind::ProjectiveLine, 1), (GroupKind::Conformal, 2), (GroupKind::Conformal, 3)] {
        let gs = system(kind, n);
        let eq = equilibrium(&gs);
        assert_eq!(search_divergence_forms(&eq, 2).len(), gs.dim());
        let forms = synthesize_divergence_forms(&gs, &eq, 2).unwrap();
        let direct = divergence_certificate(&gs, &eq).unwrap();
        assert_eq!(forms, direct, "{kind:?} n={n}");
    }
    // degree one is too small for the elations
    let gs = system(GroupKind::Conformal, 2);
    assert!(synthesize_divergence_forms(&gs, &equilibrium(&gs), 1).is_err());
}

#[test]
fn killing_plane_parametrization() {
    let gs = system(GroupKind::Killing, 2);
    let p = parametrize(&gs);
    let phi: Vec<String> = ["phi1", "phi2", "phi3"].iter().map(|s| s.to_string()).collect();
    assert_eq!(
        p.pretty(&phi),
        vec!["-d2(phi1)", "+d1(phi1)", "-d2(phi2)", "+d1(phi2)", "+phi1 -d2(phi3)", "+phi2 +d1(phi3)"]
    );
}

#[test]
fn adjoint_sequence_is_exact_at_the_composition() {
    for (kind, n) in [(GroupKind::ProjectiveLine, 1), (GroupKind::Killing, 2), (GroupKind::Weyl, 2), (GroupKind::Conformal, 2), (GroupKind::Conformal, 3)] {
        let gs = system(kind, n);
        let eq = equilibrium(&gs);
        assert!(eq.op.compose(&parametrize(&gs)).unwrap().is_zero(), "{kind:?} n={n}");
    }
}

#[test]
fn potential_counts() {
    for n in 2..=4usize {
        let nn = n as i64;
        assert_eq!(potential_count(&system(GroupKind::Killing, n)) as i64, nn * nn * (nn * nn - 1) / 4);
        assert_eq!(potential_count(&system(GroupKind::Conformal, n)) as i64, nn * (nn * nn - 1) * (nn + 2) / 4);
    }
    assert_eq!(potential_count(&system(GroupKind::Killing, 2)), 3);
    assert_eq!(potential_count(&system(GroupKind::Conformal, 4)), 90);
    assert_eq!(parametrize(&system(GroupKind::Conformal, 4)).m_in(), 90);
}

#[test]
fn airy() {
    let a = airy_parametrization().unwrap();
    let phi = vec!["phi".to_string()];
    assert_eq!(a.pretty(&phi), vec!["+d22(phi)", "-d12(phi)", "+d11(phi)"]);
    assert!(cauchy_operator().compose(&a).unwrap().is_zero());
    let s = a.apply(&[rf("1/2*x1^2", 2)]).unwrap();
    assert_eq!(s, vec![rf("0", 2), rf("0", 2), rf("1", 2)]);
    assert!(!cauchy_operator().compose(&plane_killing_operator()).unwrap().is_zero());
}

#[test]
fn maxwell() {
    let r = maxwell_block(&ConstantMetric::minkowski(4)).unwrap();
    assert!(r.conservation_is_divergence);
    assert!(r.stress_trace.is_zero());
    assert!(!r.stress[0][0].is_zero());
    let zero: Vec<RatFunc> = (0..6).map(|_| rf("0", 4)).collect();
    assert!(r.induction.apply(&zero).unwrap().iter().all(RatFunc::is_zero));
    let e = maxwell_block(&ConstantMetric::euclidean(3)).unwrap();
    assert!(e.conservation_is_divergence);
}

#[test]
fn em_projection_examples() {
    let n = 4;
    let a = poly("x1", n);
    let ai: Vec<Poly> = (0..n).map(|i| a.diff(i)).collect();
    let p = conformal_em_projection(&a, &ai);
    assert!(p.b.iter().all(Poly::is_zero));
    assert!(p.f.iter().flatten().all(Poly::is_zero));

    let mut ai = vec![Poly::zero(n); n];
    ai[0] = poly("x2", n);
    let p = conformal_em_projection(&Poly::zero(n), &ai);
    assert!(p.matches_closed_form && p.closed);
    assert_eq!(p.f[0][1], poly("4", n));
    assert_eq!(p.f[1][0], poly("-4", n));
    let nonzero = p.f.iter().flatten().filter(|x| !x.is_zero()).count();
    assert_eq!(nonzero, 2);
}

#[test]
fn jet_reductions() {
    for n in 1..=4 {
        for kind in [GroupKind::Weyl, GroupKind::Conformal] {
            let res = jet_reduction_residuals(&system(kind, n));
            assert_eq!(res.len(), n + n * n);
            assert!(res.iter().all(LinDiffOp::is_zero), "{kind:?} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn em_projection_is_closed(a in arb_poly(3, 3), a1 in arb_poly(3, 2), a2 in arb_poly(3, 2), a3 in arb_poly(3, 2)) {
        let p = conformal_em_projection(&a, &[a1, a2, a3]);
        prop_assert!(p.matches_closed_form);
        prop_assert!(p.closed);
    }

    #[test]
    fn charge_is_conserved(fs in prop::collection::vec(arb_poly(4, 3), 6)) {
        let r = maxwell_block(&ConstantMetric::minkowski(4)).unwrap();
        let f: Vec<RatFunc> = fs.into_iter().map(RatFunc::from_poly).collect();
        let j = r.induction.apply(&f).unwrap();
        let div = (0..4).fold(RatFunc::zero(4), |acc, i| acc.add_ref(&j[i].diff(i)));
        prop_assert!(div.is_zero());
    }

    #[test]
    fn orbit_sections_with_varying_parameters(lam in prop::collection::vec(arb_poly(2, 2), 6)) {
        // D1 (M lambda) = M' (d lambda): only derivatives of lambda survive
        let gs = system(GroupKind::Conformal, 2);
        let m = gs.jet_matrix();
        let xi: Vec<RatFunc> = (0..6)
            .map(|a| RatFunc::from_poly((0..6).fold(Poly::zero(2), |acc, t| &acc + &(&m[a][t] * &lam[t]))))
            .collect();
        let out = spencer_d1(&gs).apply(&xi).unwrap();
        for a in 0..6 {
            for i in 0..2 {
                let want = (0..6).fold(Poly::zero(2), |acc, t| &acc + &(&m[a][t] * &lam[t].diff(i)));
                prop_assert_eq!(out[a * 2 + i].clone(), RatFunc::from_poly(want));
            }
        }
    }
}
