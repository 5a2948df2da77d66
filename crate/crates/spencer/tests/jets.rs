mod common;

use proptest::prelude::*;
use spencer::jet_theory::*;
use spencer::symbolic_core::forms::subsets;
use spencer::symbolic_core::rational::binomial;
use spencer::symbolic_core::{MultiIndex, Rational};

fn mi(v: &[u16]) -> MultiIndex {
    MultiIndex::from_slice(v)
}

/// Equations of an order-1 symbol on `T* ⊗ T`: `ω_rj v^r_i + ω_ir v^r_j - c ω_ij v^r_r = 0`,
/// Euclidean ω. `c = 0` gives the Killing symbol, `c = 2/n` the conformal one.
fn orthogonal_symbol(n: usize, c: Rational) -> SymbolSpace {
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = JetRow::new();
            *row.entry((j, MultiIndex::unit(n, i))).or_insert_with(|| Rational::from_integer(0.into())) += Rational::from_integer(1.into());
            *row.entry((i, MultiIndex::unit(n, j))).or_insert_with(|| Rational::from_integer(0.into())) += Rational::from_integer(1.into());
            if i == j {
                for r in 0..n {
                    *row.entry((r, MultiIndex::unit(n, r))).or_insert_with(|| Rational::from_integer(0.into())) -= c.clone();
                }
            }
            rows.push(row);
        }
    }
    SymbolSpace::from_equations(n, n, 1, &rows)
}

fn killing_symbol(n: usize) -> SymbolSpace {
    orthogonal_symbol(n, Rational::from_integer(0.into()))
}

fn conformal_symbol(n: usize) -> SymbolSpace {
    orthogonal_symbol(n, Rational::new(2.into(), (n as i64).into()))
}

#[test]
fn jet_dimension_table_three_variables() {
    let t = jet_dim_table(3, 1, 7);
    let s: Vec<usize> = t.iter().map(|r| r.1).collect();
    let j: Vec<usize> = t.iter().map(|r| r.2).collect();
    assert_eq!(s, vec![1, 3, 6, 10, 15, 21, 28, 36]);
    assert_eq!(j, vec![1, 4, 10, 20, 35, 56, 84, 120]);
    for (q, s, j) in jet_dim_table(1, 1, 6) {
        assert_eq!((s, j), (1, q as usize + 1));
    }
    assert_eq!(JetDims { n: 4, m: 1, q: 2 }.symmetric(), 10);
}

#[test]
fn macaulay_symbols_and_prolongations() {
    let r2 = macaulay_system();
    assert_eq!(r2.symbol().dim(), 3);
    assert_eq!(r2.prolong(1).symbol().dim(), 1);
    assert_eq!(r2.prolong(2).symbol().dim(), 0);
    // y_111 is parametric in g_3 (y_123 = y_111 is principal)
    let g3 = r2.prolong(1).symbol();
    let top = JetSpace::top(3, 1, 3);
    let b = &g3.basis()[0];
    let at = |v: &[u16]| b[top.position(0, &mi(v)).unwrap()].clone();
    assert_eq!(at(&[3, 0, 0]), at(&[1, 1, 1]));
    assert_ne!(at(&[3, 0, 0]), Rational::from_integer(0.into()));
    let nonzero = b.iter().filter(|c| **c != Rational::from_integer(0.into())).count();
    assert_eq!(nonzero, 2);
    assert_eq!(r2.dim(), 7);
    for r in 1..=5 {
        assert_eq!(r2.prolong(r).dim(), 8, "dim R_{}", 2 + r);
    }
    // the algebraic prolongation agrees with the symbol of the prolonged system
    assert_eq!(r2.symbol().prolong().dim(), 1);
    assert_eq!(r2.symbol().prolong().prolong().dim(), 0);
}

#[test]
fn macaulay_diagram_at_order_four() {
    let d = spencer_janet_dims(&macaulay_system().prolong(2)).unwrap();
    assert_eq!(d.spencer, vec![8, 24, 24, 8]);
    assert_eq!(d.middle, vec![35, 84, 70, 20]);
    assert_eq!(d.janet, vec![27, 60, 46, 12]);
    assert!(d.columns_exact());
}

#[test]
fn macaulay_second_order_symbol_is_not_two_acyclic() {
    let g2 = macaulay_system().symbol();
    let h2 = delta_cohomology(&g2, 2);
    assert!(h2 > 0, "H^2(g_2) = {h2}");
}

#[test]
fn projection_failure_is_reported() {
    // y_11 = 0, y_2 = 0 in two variables: prolongation forces y_12 = 0 only
    // at order two, while R_1 itself has no relation on y_1.
    let sys = LinearSystem::new(
        2,
        1,
        2,
        vec![jet_row(2, &[(1, 0, &[2, 0])]), jet_row(2, &[(1, 0, &[0, 1]), (-1, 0, &[1, 0])])],
    )
    .unwrap();
    let err = spencer_janet_dims(&sys.prolong(0));
    // y_2 = y_1 and y_11 = 0 give y_12 = 0, y_22 = 0 at order 2 and nothing new at order 3
    assert!(err.is_ok());
    let tricky = LinearSystem::new(
        2,
        1,
        2,
        vec![jet_row(2, &[(1, 0, &[2, 0])]), jet_row(2, &[(1, 0, &[1, 1]), (-1, 0, &[0, 1])])],
    )
    .unwrap();
    // d_1(y_12 - y_2) - d_2(y_11) = -y_12, so y_2 = 0 is a hidden first-order consequence
    assert!(matches!(spencer_janet_dims(&tricky), Err(JetError::NotStabilized { .. })));
}

#[test]
fn order_too_high_rejected() {
    let r = LinearSystem::new(1, 1, 1, vec![jet_row(1, &[(1, 0, &[2])])]);
    assert_eq!(r.unwrap_err(), JetError::OrderTooHigh { order: 2, q: 1 });
}

#[test]
fn projective_line_diagram() {
    let sys = LinearSystem::new(1, 1, 3, vec![jet_row(1, &[(1, 0, &[3])])]).unwrap();
    assert_eq!(sys.dim(), 3);
    let d = spencer_janet_dims(&sys).unwrap();
    assert_eq!(d.spencer, vec![3, 3]);
    assert_eq!(d.middle, vec![4, 3]);
    assert_eq!(d.janet, vec![1, 0]);
    assert!(d.columns_exact());
}

#[test]
fn killing_plane_second_symbol_vanishes() {
    let g1 = killing_symbol(2);
    assert_eq!(g1.dim(), 1);
    assert_eq!(g1.prolong().dim(), 0);
}

#[test]
fn conformal_symbols() {
    for n in 3..=5 {
        let g1 = conformal_symbol(n);
        assert_eq!(g1.dim(), n * (n - 1) / 2 + 1);
        let g2 = g1.prolong();
        assert_eq!(g2.dim(), n);
        assert_eq!(g2.prolong().dim(), 0);
    }
}

#[test]
fn riemann_and_weyl_counts() {
    for n in 4..=6usize {
        let f1 = delta_cohomology(&killing_symbol(n), 2);
        let fh1 = delta_cohomology(&conformal_symbol(n), 2);
        assert_eq!(f1, n * n * (n * n - 1) / 12, "Killing n={n}");
        assert_eq!(fh1, n * (n + 1) * (n + 2) * (n - 3) / 12, "Weyl n={n}");
        assert_eq!(f1 - fh1, n * (n + 1) / 2);
    }
    assert_eq!(delta_cohomology(&conformal_symbol(4), 2), 10);
}

#[test]
fn cohomology_in_degree_zero_is_the_kernel() {
    let g = SymbolSpace::full(2, 1, 2);
    assert_eq!(delta_cohomology(&g, 0), 0);
    let g0 = SymbolSpace::full(2, 3, 0);
    assert_eq!(delta_cohomology(&g0, 0), 3);
}

#[test]
fn euler_poincare_sums() {
    assert_eq!(euler_poincare(&[1, 12, 21, 46, 72, 48, 12]), 0);
    assert_eq!(euler_poincare(&[2, 20, 30, 12]), 0);
    assert_eq!(euler_poincare(&[8, 120, 540, 600, 184]), 12);
    assert_eq!(euler_poincare(&[8, 120, 540, 600, 184, 12]), 0);
}

#[test]
fn full_jet_bundle_rows_are_exact() {
    // with no equations the Janet row is zero and the Spencer row is C(E)
    let sys = LinearSystem::new(2, 1, 2, vec![]).unwrap();
    let d = spencer_janet_dims(&sys).unwrap();
    assert_eq!(d.spencer, d.middle);
    assert!(d.janet.iter().all(|&f| f == 0));
}

fn delta_square_is_zero(n: usize, m: usize, r: usize, q: u32) -> bool {
    let a = DeltaMap::new(n, m, r, q + 1);
    let b = DeltaMap::new(n, m, r + 1, q);
    b.matrix.mul(&a.matrix).is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_squares_to_zero(n in 1usize..=4, m in 1usize..=2, r in 0usize..=3, q in 0u32..=2) {
        prop_assume!(r + 2 <= n);
        prop_assert!(delta_square_is_zero(n, m, r, q));
    }

    #[test]
    fn delta_sequence_on_full_symbols_is_exact(n in 1usize..=3, q in 1u32..=3) {
        // exactness of δ on S_q ⊗ E for q ≥ 1 in the middle degrees
        for r in 1..n {
            let z = delta_cocycles(&SymbolSpace::full(n, 1, q), r);
            let b = binomial(n as u64, (r - 1) as u64) as usize * JetDims { n, m: 1, q: q + 1 }.symmetric()
                - delta_cocycles(&SymbolSpace::full(n, 1, q + 1), r - 1);
            prop_assert_eq!(z, b);
        }
        prop_assert_eq!(subsets(n, 0).len(), 1);
    }

    #[test]
    fn prolongation_stabilizes(extra in 1u32..=3) {
        let r3 = macaulay_system().prolong(1);
        prop_assert!(r3.check_projection().is_ok());
        prop_assert_eq!(r3.prolong(extra).dim(), r3.dim());
    }

    #[test]
    fn diagram_columns_short_exact(which in 0usize..3) {
        let sys = match which {
            0 => macaulay_system().prolong(2),
            1 => LinearSystem::new(1, 1, 3, vec![jet_row(1, &[(1, 0, &[3])])]).unwrap(),
            _ => LinearSystem::new(2, 1, 2, vec![jet_row(2, &[(1, 0, &[2, 0])]), jet_row(2, &[(1, 0, &[0, 2])]), jet_row(2, &[(1, 0, &[1, 1])])]).unwrap(),
        };
        let d = spencer_janet_dims(&sys).unwrap();
        prop_assert!(d.columns_exact());
    }
}
