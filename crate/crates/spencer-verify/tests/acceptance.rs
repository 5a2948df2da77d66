//! One line per acceptance criterion, driven by the case registry.

use std::collections::BTreeMap;
use std::io::Write;

use spencer_verify::{registry, run_many, status_label, Ctx, Status};

#[test]
fn acceptance() {
    let cases = registry();
    let reports = run_many(&cases, &Ctx::default(), 1, false);
    let mut by_criterion: BTreeMap<u8, Vec<_>> = BTreeMap::new();
    for r in &reports {
        by_criterion.entry(r.criterion).or_default().push(r);
    }
    // written to the raw handle so the table shows up without --nocapture
    let mut out = std::io::stderr().lock();
    let mut failed = Vec::new();
    for n in 1..=14u8 {
        let rs = by_criterion.get(&n).cloned().unwrap_or_default();
        let ok = !rs.is_empty() && rs.iter().all(|r| r.status != Status::Fail);
        let ids: Vec<String> = rs.iter().map(|r| format!("{}={}", r.id, status_label(r.status))).collect();
        writeln!(out, "criterion {n}: {} ({})", if ok { "PASS" } else { "FAIL" }, ids.join(", ")).unwrap();
        for r in rs.iter().filter(|r| r.status == Status::Fail) {
            writeln!(out, "    {}: {}", r.id, r.witness.as_deref().unwrap_or("")).unwrap();
        }
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
