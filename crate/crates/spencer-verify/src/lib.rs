//! Registry of verification cases and the runner behind the `verify` binary.

use std::time::Instant;

use serde::Serialize;

pub mod cases;

pub use cases::registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyDocumented,
}

/// Run parameters shared by every case.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub samples: usize,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx { seed: 0, samples: 25 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub witness: Option<String>,
    pub detail: Vec<String>,
}

pub type CaseFn = fn(&Ctx) -> Result<Outcome, String>;

pub struct Case {
    pub id: &'static str,
    pub tags: &'static [&'static str],
    /// Acceptance criterion this case contributes to (1-based).
    pub criterion: u8,
    pub paper_ref: &'static str,
    pub run: CaseFn,
}

pub const TAGS: &[&str] = &["lie", "spencer", "adjoint", "divergence", "cohomology", "curvature", "nonlinear"];

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub status: Status,
    pub paper_ref: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u64,
    #[serde(skip)]
    pub detail: Vec<String>,
    #[serde(skip)]
    pub criterion: u8,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub documented: usize,
}

pub fn find(id: &str) -> Option<Case> {
    registry().into_iter().find(|c| c.id == id)
}

pub fn select(tag: Option<&str>) -> Vec<Case> {
    registry().into_iter().filter(|c| tag.is_none_or(|t| c.tags.contains(&t))).collect()
}

/// Runs one case. Panics inside a case are caught and reported as failures.
pub fn run_case(case: &Case, ctx: &Ctx, timing: bool) -> CaseReport {
    let start = Instant::now();
    let res = std::panic::catch_unwind(|| (case.run)(ctx));
    let millis = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    let out = match res {
        Ok(Ok(o)) => o,
        Ok(Err(w)) => Outcome { status: Status::Fail, witness: Some(w), detail: vec![] },
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome { status: Status::Fail, witness: Some(format!("panic: {msg}")), detail: vec![] }
        }
    };
    CaseReport {
        id: case.id.to_string(),
        status: out.status,
        paper_ref: case.paper_ref.to_string(),
        witness: out.witness,
        millis,
        detail: out.detail,
        criterion: case.criterion,
    }
}

/// Runs the cases on at most `jobs` threads; reports come back sorted by id.
pub fn run_many(cases: &[Case], ctx: &Ctx, jobs: usize, timing: bool) -> Vec<CaseReport> {
    let mut out = run_pool(cases, ctx, jobs, timing);
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

#[cfg(feature = "parallel")]
fn run_pool(cases: &[Case], ctx: &Ctx, jobs: usize, timing: bool) -> Vec<CaseReport> {
    use rayon::prelude::*;
    if jobs <= 1 {
        return cases.iter().map(|c| run_case(c, ctx, timing)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| cases.par_iter().map(|c| run_case(c, ctx, timing)).collect()),
        Err(_) => cases.iter().map(|c| run_case(c, ctx, timing)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_pool(cases: &[Case], ctx: &Ctx, _jobs: usize, timing: bool) -> Vec<CaseReport> {
    cases.iter().map(|c| run_case(c, ctx, timing)).collect()
}

pub fn summarize(reports: &[CaseReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::DiscrepancyDocumented => s.documented += 1,
        }
    }
    s
}

pub fn to_json(reports: &[CaseReport]) -> serde_json::Value {
    serde_json::json!({ "cases": reports, "summary": summarize(reports) })
}

pub fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::DiscrepancyDocumented => "documented",
    }
}

pub fn to_text(reports: &[CaseReport], timing: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let time = if timing { format!(" ({} ms)", r.millis) } else { String::new() };
        out.push_str(&format!("{:<12} {}{}  [{}]\n", status_label(r.status), r.id, time, r.paper_ref));
        if let Some(w) = &r.witness {
            out.push_str(&format!("    witness: {w}\n"));
        }
        for d in &r.detail {
            out.push_str(&format!("    {d}\n"));
        }
    }
    let s = summarize(reports);
    out.push_str(&format!("summary: {} pass, {} fail, {} documented\n", s.pass, s.fail, s.documented));
    out
}
