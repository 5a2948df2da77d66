mod common;

use common::q;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spencer::curvature::*;
use spencer::equations_engine::ConstantMetric;
use spencer::symbolic_core::Rational;

fn sym(n: usize, f: impl Fn(usize, usize) -> i64) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| q(f(i.min(j), i.max(j)), 1)).collect()).collect()
}

fn metric_matrix(m: &ConstantMetric) -> Vec<Vec<Rational>> {
    let n = m.n();
    (0..n).map(|i| (0..n).map(|j| m.lower(i, j)).collect()).collect()
}

fn metrics() -> Vec<ConstantMetric> {
    vec![
        ConstantMetric::euclidean(3),
        ConstantMetric::euclidean(4),
        ConstantMetric::minkowski(4),
        ConstantMetric::diagonal(&[2, 1, -3]).unwrap(),
    ]
}

#[test]
fn ricci_of_the_metric() {
    let m = ConstantMetric::euclidean(4);
    let (r, tr) = ricci_from_a(&metric_matrix(&m), &m).unwrap();
    let six: Vec<Vec<Rational>> = metric_matrix(&m).iter().map(|row| row.iter().map(|x| x * q(6, 1)).collect()).collect();
    assert_eq!(r.comps(), &six[..]);
    assert_eq!(tr, q(24, 1));
    let (r, tr) = ricci_from_a(&sym(4, |_, _| 0), &m).unwrap();
    assert!(r.comps().iter().flatten().all(|x| *x == q(0, 1)));
    assert_eq!(tr, q(0, 1));
}

#[test]
fn small_dimensions_are_rejected() {
    let m = ConstantMetric::euclidean(2);
    assert_eq!(ricci_from_a(&sym(2, |_, _| 1), &m).unwrap_err(), CurvatureError::DimensionTooSmall(2));
    assert!(bundle_dims(2).is_err());
    let r = RicciTensor::new(sym(2, |_, _| 1)).unwrap();
    assert!(riemann_from_ricci(&r, &m).is_err());
}

#[test]
fn constructors_verify() {
    let bad = vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(1, 1)]];
    assert_eq!(RicciTensor::new(bad).unwrap_err(), CurvatureError::NotSymmetric(1, 0));
    let m = ConstantMetric::euclidean(3);
    let mut t = Tensor4::zero(3);
    t.set(0, 1, 0, 1, q(1, 1));
    assert!(matches!(RiemannTensor::new(t.clone(), &m), Err(CurvatureError::NotSkew(_))));
    t.set(0, 1, 1, 0, q(-1, 1));
    assert!(matches!(RiemannTensor::new(t.clone(), &m), Err(CurvatureError::NotInG1(_))));
    // a g1-valued 2-form failing the cyclic identity
    let mut t = Tensor4::zero(3);
    for (k, l, s) in [(0, 1, 1), (1, 0, -1)] {
        t.set(k, l, 1, 2, q(s, 1));
        t.set(k, l, 2, 1, q(-s, 1));
    }
    assert!(matches!(RiemannTensor::new(t, &m), Err(CurvatureError::Bianchi(_))));
    assert!(Tensor4::from_vec(3, vec![q(0, 1); 80]).is_err());
}

#[test]
fn lift_of_the_metric() {
    let m = ConstantMetric::euclidean(4);
    let r = RicciTensor::new(metric_matrix(&m)).unwrap();
    let riem = riemann_from_ricci(&r, &m).unwrap();
    assert!(riem.tensor().cyclic_defect().is_none());
    assert_eq!(riem.ricci(), r);
    // constant curvature: R^k_{l,ij} = (d^k_i w_lj - d^k_j w_li) / (n - 1)
    assert_eq!(*riem.get(0, 1, 0, 1), q(1, 3));
    assert!(weyl_projection(&riem, &m).unwrap().is_zero());
    let zero = RicciTensor::new(sym(4, |_, _| 0)).unwrap();
    assert!(riemann_from_ricci(&zero, &m).unwrap().tensor().is_zero());
}

#[test]
fn cocycle_space_dimension() {
    for n in 3..=5 {
        let m = ConstantMetric::euclidean(n);
        let f1 = n * n * (n * n - 1) / 12;
        assert_eq!(z2_g1_basis(&m).len(), f1, "n={n}");
        assert_eq!(z2_dim_from_jets(&m), f1, "n={n}");
    }
    assert_eq!(z2_g1_basis(&ConstantMetric::minkowski(4)).len(), 20);
}

#[test]
fn bundle_dimensions() {
    assert_eq!(bundle_dims(4).unwrap(), BundleDims { f1: 20, f1_hat: 10, difference: 10 });
    assert_eq!(bundle_dims(3).unwrap(), BundleDims { f1: 6, f1_hat: 0, difference: 6 });
    for n in 3..=10 {
        let d = bundle_dims(n).unwrap();
        assert_eq!(d.difference, n * (n + 1) / 2);
    }
}

#[test]
fn weyl_rank_matches_the_hat_bundle() {
    // the Weyl parts of a cocycle basis span a space of dimension dim F1_hat
    for n in 3..=4 {
        let m = ConstantMetric::euclidean(n);
        let rows: Vec<Vec<Rational>> = z2_g1_basis(&m)
            .iter()
            .map(|r| weyl_projection(r, &m).unwrap().tensor().comps().to_vec())
            .collect();
        let width = n.pow(4);
        let rank = spencer::symbolic_core::QMatrix::from_rows(rows, width, q(0, 1)).rank();
        assert_eq!(rank, bundle_dims(n).unwrap().f1_hat);
    }
}

#[test]
fn splitting_on_random_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for m in metrics() {
        let basis = z2_g1_basis(&m);
        for _ in 0..5 {
            let t = random_riemann(&basis, &m, &mut rng);
            assert!(is_jet_cocycle(&t, &m));
            let lift = riemann_from_ricci(&t.ricci(), &m).unwrap();
            let w = weyl_projection(&t, &m).unwrap();
            assert_eq!(lift.tensor().add(w.tensor()), *t.tensor());
            assert!(w.tensor().contract().iter().flatten().all(|x| *x == q(0, 1)));
            if m.n() == 3 {
                assert!(w.is_zero());
            }
        }
    }
}

fn arb_sym(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| sym(n, |i, j| v[i * n + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ricci_formula_and_round_trip(a in arb_sym(4), which in 0usize..4) {
        let m = metrics().swap_remove(which);
        let n = m.n();
        let a: Vec<Vec<Rational>> = a.into_iter().take(n).map(|r| r.into_iter().take(n).collect()).collect();
        let riem = riemann_from_a(&a, &m).unwrap();
        let (r, tr) = ricci_from_a(&a, &m).unwrap();
        prop_assert_eq!(riem.ricci(), r.clone());
        let tra: Rational = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.upper(i, j) * &a[i][j]).sum();
        prop_assert_eq!(tr, q(2 * (n as i64 - 1), 1) * tra);
        prop_assert_eq!(a_from_ricci(&r, &m).unwrap(), a.clone());
        // pure-Ricci tensors have no Weyl part
        prop_assert_eq!(riemann_from_ricci(&r, &m).unwrap(), riem.clone());
        prop_assert!(weyl_projection(&riem, &m).unwrap().is_zero());
    }

    #[test]
    fn lift_contracts_back(r in arb_sym(4)) {
        let m = ConstantMetric::minkowski(4);
        let r = RicciTensor::new(r).unwrap();
        let riem = riemann_from_ricci(&r, &m).unwrap();
        prop_assert_eq!(riem.ricci(), r);
        prop_assert!(is_jet_cocycle(&riem, &m));
    }
}
