use spencer::diffop::{DiffOpError, LinDiffOp};
use spencer::symbolic_core::{rat, MultiIndex, Poly, RatFunc, Rational};

fn mi(v: &[u16]) -> MultiIndex {
    MultiIndex::from_slice(v)
}

fn macaulay() -> LinDiffOp {
    // y33, y23 - y11, y22
    let mut p = LinDiffOp::zero(3, 1, 3);
    p.add_const(0, 0, mi(&[0, 0, 2]), rat(1));
    p.add_const(1, 0, mi(&[0, 1, 1]), rat(1));
    p.add_const(1, 0, mi(&[2, 0, 0]), rat(-1));
    p.add_const(2, 0, mi(&[0, 2, 0]), rat(1));
    p
}

fn rf(s: &str, n: usize) -> RatFunc {
    RatFunc::parse_with(s, &Poly::default_names(n)).unwrap()
}

#[test]
fn adjoint_of_first_derivative_changes_sign() {
    let mut d = LinDiffOp::zero(1, 1, 1);
    d.add_simple(0, 0, Some(0), 1);
    assert_eq!(d.formal_adjoint(), d.neg());
}

#[test]
fn adjoint_with_variable_coefficient() {
    // x d/dx  ->  -x d/dx - 1
    let mut p = LinDiffOp::zero(1, 1, 1);
    p.add_coeff(0, 0, mi(&[1]), rf("x1", 1));
    let mut expected = LinDiffOp::zero(1, 1, 1);
    expected.add_coeff(0, 0, mi(&[1]), rf("-x1", 1));
    expected.add_simple(0, 0, None, -1);
    assert_eq!(p.formal_adjoint(), expected);
    let cert = p.divergence_certificate();
    cert.verify(&p).unwrap();
}

#[test]
fn macaulay_compatibility_conditions_have_order_two() {
    let p = macaulay();
    assert_eq!(p.compatibility_conditions(1), Err(DiffOpError::EmptyAtBound { bound: 1 }));
    let q = p.compatibility_conditions(2).unwrap();
    assert_eq!(q.m_out(), 3);
    assert_eq!(q.order(), 2);
    assert!(q.compose(&p).unwrap().is_zero());
    // one relation among the three conditions, again of order two
    let r = q.compatibility_conditions(2).unwrap();
    assert_eq!(r.m_out(), 1);
    assert_eq!(r.order(), 2);
    assert!(r.compose(&q).unwrap().is_zero());
}

#[test]
fn text_round_trip_is_exact() {
    let mut p = LinDiffOp::zero(2, 2, 1);
    p.add_coeff(0, 1, mi(&[1, 1]), rf("(3/2*x1^2-x2)/(x1+1)", 2));
    p.add_coeff(0, 0, mi(&[0, 0]), rf("-7", 2));
    let t = p.to_text();
    let q = LinDiffOp::from_text(&t).unwrap();
    assert_eq!(q, p);
    assert_eq!(q.to_text(), t);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = LinDiffOp::from_text("op 1 1 1\n0 0 1 (x1)/(1)\n0 3 1 1\n").unwrap_err();
    assert_eq!(e, DiffOpError::Parse { line: 3, msg: "index out of range".into() });
}

#[test]
fn apply_matches_composition() {
    let mut p = LinDiffOp::zero(2, 1, 1);
    p.add_coeff(0, 0, mi(&[1, 0]), rf("x2", 2));
    let mut q = LinDiffOp::zero(2, 1, 1);
    q.add_coeff(0, 0, mi(&[0, 1]), rf("x1^2", 2));
    let u = vec![rf("x1^3*x2^2+x2", 2)];
    let lhs = q.compose(&p).unwrap().apply(&u).unwrap();
    let rhs = q.apply(&p.apply(&u).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    let _ = Rational::from_integer(0.into());
}
