use spencer::diffop::{DiffOpError, LinDiffOp};
use spencer::equations_engine::GroupKind;
use spencer::jet_theory::*;

use super::*;

fn row(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("/")
}

pub fn macaulay_dims(_: &Ctx) -> CaseResult {
    let r2 = macaulay_system();
    let g: Vec<usize> = (0..3).map(|r| r2.prolong(r).symbol().dim()).collect();
    expect_eq("dim g2, g3, g4", g.clone(), vec![3, 1, 0])?;
    let stable: Vec<usize> = (1..=4).map(|r| r2.prolong(r).dim()).collect();
    check(stable.iter().all(|&d| d == 8), || format!("dim R3..R6 = {stable:?}"))?;
    r2.prolong(1).check_projection().map_err(|e| e.to_string())?;
    let d = spencer_janet_dims(&r2.prolong(2)).map_err(|e| e.to_string())?;
    expect_eq("Spencer row", d.spencer.clone(), vec![8, 24, 24, 8])?;
    expect_eq("middle row", d.middle.clone(), vec![35, 84, 70, 20])?;
    expect_eq("Janet row", d.janet.clone(), vec![27, 60, 46, 12])?;
    check(d.columns_exact(), || "columns not exact".into())?;
    pass(vec![
        format!("dim g2 = {}, g3 = {}, g4 = {}", g[0], g[1], g[2]),
        format!("dim R2 = {}, dim R3..R6 = {}", r2.dim(), row(&stable)),
        format!("Spencer {}", row(&d.spencer)),
        format!("middle  {}", row(&d.middle)),
        format!("Janet   {}", row(&d.janet)),
    ])
}

fn macaulay_op() -> LinDiffOp {
    let mi = |v: &[u16]| MultiIndex::from_slice(v);
    let mut p = LinDiffOp::zero(3, 1, 3);
    p.add_const(0, 0, mi(&[0, 0, 2]), q(1, 1));
    p.add_const(1, 0, mi(&[0, 1, 1]), q(1, 1));
    p.add_const(1, 0, mi(&[2, 0, 0]), q(-1, 1));
    p.add_const(2, 0, mi(&[0, 2, 0]), q(1, 1));
    p
}

pub fn macaulay_cc(_: &Ctx) -> CaseResult {
    let p = macaulay_op();
    expect_eq("first-order search", p.compatibility_conditions(1).err(), Some(DiffOpError::EmptyAtBound { bound: 1 }))?;
    let cc = p.compatibility_conditions(2).map_err(|e| e.to_string())?;
    expect_eq("CC count and order", (cc.m_out(), cc.order()), (3, 2))?;
    check(cc.compose(&p).map_err(|e| e.to_string())?.is_zero(), || "CC o P != 0".into())?;
    let syz = cc.compatibility_conditions(2).map_err(|e| e.to_string())?;
    check(syz.compose(&cc).map_err(|e| e.to_string())?.is_zero(), || "syzygy o CC != 0".into())?;
    expect_eq("syzygy count", syz.m_out(), 1)?;
    let h2 = delta_cohomology(&macaulay_system().symbol(), 2);
    check(h2 > 0, || "g2 is 2-acyclic".into())?;
    pass(vec![
        format!("{} conditions of order {}", cc.m_out(), cc.order()),
        format!("{} relation among them, order {}", syz.m_out(), syz.order()),
        format!("dim H^2(g2) = {h2}"),
    ])
}

pub fn euler_poincare_case(_: &Ctx) -> CaseResult {
    expect_eq("1-12+21-46+72-48+12", euler_poincare(&[1, 12, 21, 46, 72, 48, 12]), 0)?;
    expect_eq("8-120+540-600+184", euler_poincare(&[8, 120, 540, 600, 184]), 12)?;
    let d = spencer_janet_dims(&macaulay_system().prolong(2)).map_err(|e| e.to_string())?;
    let ep = |v: &[usize]| euler_poincare(&v.iter().map(|&x| x as i64).collect::<Vec<_>>());
    expect_eq("dim F3", *d.janet.last().unwrap() as i64, 12)?;
    expect_eq("Spencer row", ep(&d.spencer), 0)?;
    expect_eq("middle minus Janet", ep(&d.middle) - ep(&d.janet), 0)?;
    pass(vec![
        "1-12+21-46+72-48+12 = 0".into(),
        "8-120+540-600+184 = 12 = dim F3".into(),
        format!("diagram rows: {} / {} / {}", ep(&d.spencer), ep(&d.middle), ep(&d.janet)),
    ])
}

pub fn jet_dim_table_case(_: &Ctx) -> CaseResult {
    let t = jet_dim_table(3, 1, 7);
    let s: Vec<usize> = t.iter().map(|r| r.1).collect();
    let j: Vec<usize> = t.iter().map(|r| r.2).collect();
    expect_eq("dim S_q", s.clone(), vec![1, 3, 6, 10, 15, 21, 28, 36])?;
    expect_eq("dim J_q", j.clone(), vec![1, 4, 10, 20, 35, 56, 84, 120])?;
    pass(vec![format!("S_q: {}", row(&s)), format!("J_q: {}", row(&j))])
}

pub fn conformal_diagram(_: &Ctx) -> CaseResult {
    let gs = system(GroupKind::Conformal, 2)?;
    let d = spencer_janet_dims(&gs.lie_equations).map_err(|e| e.to_string())?;
    expect_eq("Spencer row", d.spencer.clone(), vec![6, 12, 6])?;
    expect_eq("middle row", d.middle.clone(), vec![20, 30, 12])?;
    expect_eq("Janet row", d.janet.clone(), vec![14, 18, 6])?;
    check(d.columns_exact(), || "columns not exact".into())?;
    expect_eq("12-30+20-2", euler_poincare(&[2, 20, 30, 12]), 0)?;
    pass(vec![
        format!("Spencer {}", row(&d.spencer)),
        format!("middle  {}", row(&d.middle)),
        format!("Janet   {}", row(&d.janet)),
    ])
}
