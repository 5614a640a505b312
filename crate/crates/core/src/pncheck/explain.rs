use std::fmt::Write;

use super::{BranchStatus, FeasibilityReport, Route, Verdict};
use crate::scalar::Scalar;

/// Human-readable derivation of every branch.
pub fn explain<W: Scalar>(report: &FeasibilityReport<W>) -> String {
    let s = &report.system;
    let ctx = |i: usize| format!("({}) {}", i + 1, s.contexts[i].label);
    let mut out = String::new();
    for b in &report.branches {
        let zeroed: Vec<&str> = b.zeroed.iter().map(|&j| s.labels[j].as_str()).collect();
        let case = b.case.map(|c| format!(" case ({c})")).unwrap_or_default();
        let _ = write!(out, "branch {:>3}{case}: zero {{{}}}: ", b.pattern, zeroed.join(", "));
        match &b.status {
            BranchStatus::Infeasible(d) => {
                let why = match &d.route {
                    Route::VanishingMixture { context } => {
                        format!("{} has no free member of positive weight, so v = 0", ctx(*context))
                    }
                    Route::ForcedEquality { contexts } => format!(
                        "{} and {} force incompatible values on their free members",
                        ctx(contexts[0]),
                        ctx(contexts[1])
                    ),
                    Route::Combination { contexts } => format!(
                        "no nonnegative solution of {}",
                        contexts.iter().map(|&i| ctx(i)).collect::<Vec<_>>().join(", ")
                    ),
                };
                let y: Vec<String> = d.core.iter().map(|&i| d.farkas[i].to_string()).collect();
                let _ = writeln!(out, "infeasible; {why}; multipliers [{}]", y.join(", "));
            }
            BranchStatus::Feasible { witness } => {
                let vals: Vec<String> = witness
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(j, w)| format!("{} = {w}", s.labels[j]))
                    .collect();
                let _ = writeln!(out, "feasible with v = 1, {}", vals.join(", "));
            }
        }
    }
    let verdict = match report.verdict {
        Verdict::Contextual => "contextual: every branch is infeasible",
        Verdict::NotDecided => "not decided: a feasible branch exists (this does not prove noncontextuality)",
    };
    let _ = writeln!(out, "{verdict}");
    out
}
