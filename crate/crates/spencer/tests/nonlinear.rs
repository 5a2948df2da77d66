mod common;

use common::{poly, q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spencer::nonlinear_jets::*;
use spencer::symbolic_core::{MultiIndex, Poly, RatFunc, Rational};

fn mi(v: &[u16]) -> MultiIndex {
    MultiIndex::from_slice(v)
}

fn jet1(x: i64, vals: &[i64]) -> JetOfMap<Rational> {
    let v = vals.iter().enumerate().map(|(d, &c)| ((0, mi(&[d as u16])), q(c, 1)));
    JetOfMap::new(vec![q(x, 1)], vals.len() as u32 - 1, v).unwrap()
}

fn random_point_jet(rng: &mut ChaCha8Rng, n: usize, order: u32, src: &[Rational]) -> JetOfMap<Rational> {
    use rand::Rng;
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

#[test]
fn composition_example() {
    // g(y) = y^2 after f(x) = x + 1, at x = 1
    let f = jet1(1, &[2, 1, 0]);
    let g = jet1(2, &[4, 4, 2]);
    let h = g.compose(&f).unwrap();
    assert!(h.is_equal(&jet1(1, &[4, 4, 2])));
    assert_eq!(f.compose(&f).unwrap_err(), NonlinearError::BasePointMismatch);
    assert!(matches!(g.truncate(1).compose(&f), Err(NonlinearError::OrderMismatch { .. })));
}

#[test]
fn inverse_example() {
    // f(x) = 2x + x^2 at 0; inverse -1 + sqrt(1 + y)
    let f = jet1(0, &[0, 2, 2]);
    let g = f.inverse().unwrap();
    assert_eq!(g.get(0, &mi(&[1])), q(1, 2));
    assert_eq!(g.get(0, &mi(&[2])), q(-1, 4));
    let f3 = jet1(0, &[0, 2, 2, 0]);
    let g3 = f3.inverse().unwrap();
    assert_eq!(g3.get(0, &mi(&[3])), q(3, 8));
    assert!(JetOfMap::new(vec![q(0, 1)], 1, vec![((0, mi(&[0])), q(1, 1))]).is_err());
    assert_eq!(JetOfMap::<Rational>::identity(vec![q(0, 1)], 4).unwrap_err(), NonlinearError::OrderTooHigh(4));
}

#[test]
fn groupoid_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for n in 1..=2 {
        for order in 1..=3 {
            let x: Vec<Rational> = (0..n).map(|i| q(i as i64 - 1, 2)).collect();
            let f = random_point_jet(&mut rng, n, order, &x);
            let g = random_point_jet(&mut rng, n, order, &f.target());
            let h = random_point_jet(&mut rng, n, order, &g.target());
            let assoc_l = h.compose(&g).unwrap().compose(&f).unwrap();
            let assoc_r = h.compose(&g.compose(&f).unwrap()).unwrap();
            assert!(assoc_l.is_equal(&assoc_r));
            let idx = JetOfMap::identity(x.clone(), order).unwrap();
            let idy = JetOfMap::identity(f.target(), order).unwrap();
            assert!(f.compose(&idx).unwrap().is_equal(&f));
            assert!(idy.compose(&f).unwrap().is_equal(&f));
            let fi = f.inverse().unwrap();
            assert!(fi.compose(&f).unwrap().is_equal(&idx));
            assert!(f.compose(&fi).unwrap().is_equal(&idy));
            let gf_inv = g.compose(&f).unwrap().inverse().unwrap();
            assert!(gf_inv.is_equal(&fi.compose(&g.inverse().unwrap()).unwrap()));
        }
    }
}

#[test]
fn holonomic_sections_have_zero_chi() {
    let f = JetOfMap::holonomic(&[poly("x1 + x1^2 + x2^3", 2), poly("x2 - x1*x2", 2)], 3).unwrap();
    let chi = nonlinear_spencer(&f).unwrap();
    assert_eq!(chi.order(), 2);
    assert!(chi.is_zero());
    let id = JetOfMap::holonomic(&[poly("x1", 1)], 1).unwrap();
    assert!(nonlinear_spencer(&id).unwrap().is_zero());
}

#[test]
fn one_dimensional_chi() {
    // f = x + x^2 with f_x replaced by an independent function
    let fx = poly("1 + x1^3", 1);
    let f = JetOfMap::new(
        vec![RatFunc::var(1, 0)],
        1,
        vec![((0, mi(&[0])), RatFunc::from_poly(poly("x1 + x1^2", 1))), ((0, mi(&[1])), RatFunc::from_poly(fx.clone()))],
    )
    .unwrap();
    let chi = nonlinear_spencer(&f).unwrap();
    let expected = RatFunc::new(poly("1 + 2*x1", 1), fx).unwrap().add_ref(&RatFunc::constant(1, q(-1, 1)));
    assert_eq!(chi.get(0, &mi(&[0]), 0), expected);
}

#[test]
fn tangent_map_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = random_poly_section(2, 3, 1, &mut rng);
    let xi = random_poly_vertical(2, 2, 1, &mut rng);
    let v = tangent_map(&f, &xi).unwrap();
    assert!(tangent_map_inverse(&f, &v).unwrap().is_equal(&xi));
    let eta = act(&f, &xi).unwrap();
    assert!(act_inverse(&f, &eta).unwrap().is_equal(&xi));
}

#[test]
fn tangent_map_matches_pushforward_of_holonomic_fields() {
    // for holonomic data f_{q+1}(j_q xi) is the q-jet of (f_* xi) o f
    let fs = [poly("x1 + x2^2", 2), poly("x2 + x1*x2", 2)];
    let xs = [poly("x2", 2), poly("x1^2", 2)];
    let f = JetOfMap::holonomic(&fs, 3).unwrap();
    let xi = VerticalJet::from_fn(2, 2, RatFunc::zero(2), |k, mu| RatFunc::from_poly(xs[k].diff_multi(mu)));
    let pushed: Vec<Poly> = (0..2).map(|k| (0..2).fold(Poly::zero(2), |acc, r| &acc + &(&fs[k].diff(r) * &xs[r]))).collect();
    let expected = VerticalJet::from_fn(2, 2, RatFunc::zero(2), |k, mu| RatFunc::from_poly(pushed[k].diff_multi(mu)));
    assert!(tangent_map(&f, &xi).unwrap().is_equal(&expected));
}

#[test]
fn first_compatibility_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for n in 2..=3 {
        let f = random_poly_section(n, 2, 1, &mut rng);
        let chi = nonlinear_spencer(&f).unwrap();
        let cc = compatibility_residuals(&chi);
        assert_eq!(cc.first.len(), n * n * (n - 1) / 2);
        assert!(cc.second.is_empty());
        assert!(cc.all_zero(), "n={n}");
    }
}

#[test]
fn second_compatibility_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_poly_section(2, 3, 1, &mut rng);
    let chi = nonlinear_spencer(&f).unwrap();
    let cc = compatibility_residuals(&chi);
    assert_eq!(cc.second.len(), 4);
    assert!(cc.all_zero());
}

#[test]
fn compatibility_detects_non_spencer_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_poly_section(2, 2, 1, &mut rng);
    let chi = nonlinear_spencer(&f).unwrap();
    let xi = random_poly_vertical(2, 1, 2, &mut rng);
    let bumped = ChiForm::from_components((0..2).map(|i| if i == 0 { chi.component(0).plus(&xi) } else { chi.component(i) }).collect());
    assert!(!compatibility_residuals(&bumped).all_zero());
}

fn substitute_target(g: &JetOfMap<RatFunc>, f: &JetOfMap<RatFunc>) -> JetOfMap<RatFunc> {
    g.substitute(&f.target_polys().unwrap()).unwrap()
}

#[test]
fn gauge_law_and_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = random_poly_section(2, 2, 1, &mut rng);
    let g = random_poly_section(2, 2, 1, &mut rng);
    let gf = substitute_target(&g, &f).compose(&f).unwrap();
    let chi_g = nonlinear_spencer(&g).unwrap();
    let at_f = chi_g.substitute(&f.target_polys().unwrap()).unwrap();
    let gauged = gauge_transform(&at_f, &f).unwrap();
    assert!(gauged.is_equal(&nonlinear_spencer(&gf).unwrap()));

    // gauging by f then h equals gauging by f o h
    let h = random_poly_section(2, 2, 1, &mut rng);
    let fh = substitute_target(&f, &h).compose(&h).unwrap();
    let chi = ChiForm::from_components(vec![random_poly_vertical(2, 1, 1, &mut rng), random_poly_vertical(2, 1, 1, &mut rng)]);
    let step = gauge_transform(&chi.substitute(&f.target_polys().unwrap()).unwrap(), &f).unwrap();
    let twice = gauge_transform(&step.substitute(&h.target_polys().unwrap()).unwrap(), &h).unwrap();
    let once = gauge_transform(&chi.substitute(&fh.target_polys().unwrap()).unwrap(), &fh).unwrap();
    assert!(twice.is_equal(&once));
}

#[test]
fn variations_agree_symbolically() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for qq in 0..=1u32 {
        let f = random_poly_section(2, qq + 2, 1, &mut rng);
        let xi = random_poly_vertical(2, qq + 1, 1, &mut rng);
        let rep = variation_check(&f, &xi).unwrap();
        assert_eq!(rep.q, qq);
        let s = rep.source.as_ref().unwrap();
        assert!(s.mismatches(&rep.dual).is_empty(), "source q={qq}");
        assert!(rep.target.mismatches(&rep.dual).is_empty(), "target q={qq}");
        assert!(rep.bracket.mismatches(&rep.dual).is_empty(), "bracket q={qq}");
    }
}

#[test]
fn variations_agree_at_sample_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for sample in 0..25 {
        let qq = (sample % 2) as u32;
        let n = 1 + sample % 3;
        let f = random_series_section(n, qq + 2, 3, &mut rng);
        let xi = random_series_vertical(n, qq + 1, 3, &mut rng);
        assert!(variation_check(&f, &xi).unwrap().agree(), "sample {sample}");
    }
}

#[test]
fn identity_limit() {
    // at f = id the variation is the linear Spencer operator
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let id = JetOfMap::holonomic(&[poly("x1", 2), poly("x2", 2)], 3).unwrap();
    let xi = random_poly_vertical(2, 2, 2, &mut rng);
    let rep = variation_check(&id, &xi).unwrap();
    assert!(rep.agree());
    assert!(rep.dual.is_equal(&linear_spencer(&xi).unwrap()));
}

#[test]
fn unsupported_orders() {
    let f = JetOfMap::holonomic(&[poly("x1", 1)], 0).unwrap();
    assert_eq!(nonlinear_spencer(&f).unwrap_err(), NonlinearError::UnsupportedOrder(0));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = random_poly_section(1, 3, 1, &mut rng);
    let chi = nonlinear_spencer(&f).unwrap();
    let xi = random_poly_vertical(1, 3, 1, &mut rng);
    assert_eq!(source_variation_formula(&chi, &xi).unwrap_err(), NonlinearError::UnsupportedOrder(2));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_jet(n: usize, order: u32) -> impl Strategy<Value = JetOfMap<Rational>> {
        let len = n * MultiIndex::up_to_degree(n, order).len();
        (prop::collection::vec(-4i64..=4, len), prop::collection::vec(-3i64..=3, n)).prop_filter_map("singular", move |(cs, x)| {
            let mut it = cs.into_iter();
            let mut vals = Vec::new();
            for k in 0..n {
                for mu in MultiIndex::up_to_degree(n, order) {
                    vals.push(((k, mu), q(it.next().unwrap(), 1)));
                }
            }
            JetOfMap::new(x.into_iter().map(|v| q(v, 1)).collect(), order, vals).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn inverse_is_two_sided(f in arb_jet(2, 3)) {
            let fi = f.inverse().unwrap();
            let idx = JetOfMap::identity(f.source().to_vec(), 3).unwrap();
            prop_assert!(fi.compose(&f).unwrap().is_equal(&idx));
            prop_assert!(fi.inverse().unwrap().is_equal(&f));
        }

        #[test]
        fn holonomic_chi_vanishes(a in common::arb_poly(2, 3), b in common::arb_poly(2, 3)) {
            let fs = [&a + &poly("x1", 2), &b + &poly("x2", 2)];
            if let Ok(f) = JetOfMap::holonomic(&fs, 2) {
                prop_assert!(nonlinear_spencer(&f).unwrap().is_zero());
            }
        }
    }
}
