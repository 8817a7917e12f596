//! Named verification suites and example reproductions.
//!
//! Every suite is deterministic: random inputs come from fixed seeds and the
//! planar search has no randomness, so two runs produce identical reports
//! (apart from `runtime_s`, which can be switched off).

mod repro;
mod suites;

pub use repro::{reproduce, Artifact, REPRO_IDS};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

pub const SUITES: &[&str] = &[
    "apl_1d",
    "representation_1d",
    "support_1d",
    "coarea_1d",
    "dominance",
    "strip_2d",
    "gradient_2d",
    "counterexample_annulus",
    "enlarged_rationals",
    "sobolev_ratio",
];

/// How `observed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|expected - observed| <= tol`
    Close,
    /// `observed <= expected + tol`
    AtMost,
    /// `observed >= expected - tol`
    AtLeast,
    /// Boolean match, with `1` for true and `0` for false.
    Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    #[serde(with = "crate::json")]
    pub expected: f64,
    #[serde(with = "crate::json")]
    pub observed: f64,
    pub tol: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    fn make(label: impl Into<String>, expected: f64, observed: f64, tol: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Close => (expected - observed).abs() <= tol || expected == observed,
            Relation::AtMost => observed <= expected + tol,
            Relation::AtLeast => observed >= expected - tol,
            Relation::Flag => expected == observed,
        };
        Self { label: label.into(), expected, observed, tol, relation, pass }
    }

    pub fn close(label: impl Into<String>, expected: f64, observed: f64, tol: f64) -> Self {
        Self::make(label, expected, observed, tol, Relation::Close)
    }

    pub fn at_most(label: impl Into<String>, bound: f64, observed: f64, tol: f64) -> Self {
        Self::make(label, bound, observed, tol, Relation::AtMost)
    }

    pub fn at_least(label: impl Into<String>, bound: f64, observed: f64, tol: f64) -> Self {
        Self::make(label, bound, observed, tol, Relation::AtLeast)
    }

    pub fn flag(label: impl Into<String>, expected: bool, observed: bool) -> Self {
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        Self::make(label, f(expected), f(observed), 0.0, Relation::Flag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub runtime_s: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

/// Settings shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Context {
    pub tol: Tolerances,
    /// Record wall-clock runtimes; off for byte-identical reports.
    pub timing: bool,
}

impl Default for Context {
    fn default() -> Self {
        Self { tol: Tolerances::default(), timing: true }
    }
}

pub fn run_suite(name: &str, ctx: &Context) -> Result<Report> {
    let start = Instant::now();
    let checks = match name {
        "apl_1d" => suites::apl_1d(ctx)?,
        "representation_1d" => suites::representation_1d(ctx)?,
        "support_1d" => suites::support_1d(ctx)?,
        "coarea_1d" => suites::coarea_1d(ctx)?,
        "dominance" => suites::dominance(ctx)?,
        "strip_2d" => suites::strip_2d(ctx)?,
        "gradient_2d" => suites::gradient_2d(ctx)?,
        "counterexample_annulus" => suites::counterexample_annulus(ctx)?,
        "enlarged_rationals" => suites::enlarged_rationals(ctx)?,
        "sobolev_ratio" => suites::sobolev_ratio(ctx)?,
        other => {
            return Err(Error::Argument(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(Report { suite: name.to_string(), checks, runtime_s: elapsed(ctx, start) })
}

/// All suites in order, optionally running them concurrently.
pub fn run_all(ctx: &Context, parallel: bool) -> Result<Vec<Report>> {
    if parallel {
        SUITES.par_iter().map(|s| run_suite(s, ctx)).collect()
    } else {
        SUITES.iter().map(|s| run_suite(s, ctx)).collect()
    }
}

fn elapsed(ctx: &Context, start: Instant) -> f64 {
    if ctx.timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_relations() {
        assert!(Check::close("a", 1.0, 1.0 + 1e-13, 1e-12).pass);
        assert!(!Check::close("a", 1.0, 1.1, 1e-3).pass);
        assert!(Check::close("inf", f64::INFINITY, f64::INFINITY, 0.0).pass);
        assert!(Check::at_most("b", 2.0, 2.0 + 1e-10, 1e-9).pass);
        assert!(!Check::at_most("b", 2.0, 2.1, 1e-9).pass);
        assert!(Check::at_least("c", 0.9, 0.95, 0.0).pass);
        assert!(!Check::flag("d", true, false).pass);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &Context::default()), Err(Error::Argument(_))));
    }

    #[test]
    fn fast_suites_pass_and_are_deterministic() {
        let ctx = Context { timing: false, ..Context::default() };
        for name in ["apl_1d", "coarea_1d", "strip_2d"] {
            let a = run_suite(name, &ctx).unwrap();
            assert!(a.passed(), "{}", serde_json::to_string_pretty(&a).unwrap());
            let b = run_suite(name, &ctx).unwrap();
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }
}
