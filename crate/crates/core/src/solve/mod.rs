//! Approximation algorithms.
//!
//! | solver | tasks | bins |
//! |--------|-------|------|
//! | [`solve_short`] | every `9h <= C` | `<= 2 OPT` |
//! | [`solve_squares_eq`] | squares, `T = C` | `<= 2 OPT` |
//! | [`solve_squares_general`] | squares | `<= 2 OPT` for small optima |
//! | [`solve_general`] | anything | `<= 3 OPT` for small optima |
//!
//! The guessing solvers try every `g` from the area bound upward as a guess
//! for the optimum, build a structured solution for it, finish with first fit
//! and keep the verified result with the fewest bins.

mod general;
mod short;
mod squares;

pub use general::{lemma3fat_check, solve_general, GeneralCase, GeneralReport, LemmaReport, Regime};
pub use short::{solve_short, ShortReport};
pub use squares::{
    leftmost_fit_big_squares, pack_nine_groups, solve_squares_eq, solve_squares_general, LeftmostOutcome,
    OneDimRoute, SquareCase, SquaresReport,
};

use crate::model::{area_lower_bound, verify_solution, Instance, Solution};
use crate::primitives::PrimitiveError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("instance is outside this solver's domain: {0}")]
    NotApplicable(String),
    #[error("no guess up to {0} produced a verified solution")]
    NoGuessSucceeded(u64),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// A verified solution plus the solver's report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved<R> {
    pub solution: Solution,
    pub report: R,
}

/// What happened for one guess of the optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessRecord {
    pub guess: u64,
    /// Final bin count, or why the guess was rejected.
    pub result: Result<usize, String>,
}

/// Solver selection for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Auto,
    Short,
    SquaresEq,
    Squares,
    General,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "short" => Ok(Algorithm::Short),
            "squares-eq" => Ok(Algorithm::SquaresEq),
            "squares" => Ok(Algorithm::Squares),
            "general" => Ok(Algorithm::General),
            other => Err(format!(
                "unknown algorithm {other:?}; expected auto, short, squares-eq, squares or general"
            )),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Auto => "auto",
            Algorithm::Short => "short",
            Algorithm::SquaresEq => "squares-eq",
            Algorithm::Squares => "squares",
            Algorithm::General => "general",
        })
    }
}

/// Short if every `9h <= C`, else squares-eq for squares with `T = C`, else
/// squares for squares, else general.
pub fn choose_algorithm(instance: &Instance) -> Algorithm {
    let c = instance.capacity();
    let tasks = instance.tasks();
    if tasks.iter().all(|t| 9 * t.height <= c) {
        Algorithm::Short
    } else if tasks.iter().all(|t| t.is_square()) {
        if instance.horizon() == c {
            Algorithm::SquaresEq
        } else {
            Algorithm::Squares
        }
    } else {
        Algorithm::General
    }
}

/// Solver-independent summary of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveSummary {
    pub algorithm: Algorithm,
    pub solution: Solution,
    pub area_lower_bound: u64,
    pub accepted_guess: Option<u64>,
    pub structured_bins: Option<usize>,
    /// The solver's own bound check for the accepted guess.
    pub certified: bool,
    pub notes: Vec<String>,
}

/// Runs one solver (resolving `Auto` first).
pub fn solve(instance: &Instance, algorithm: Algorithm) -> Result<SolveSummary, SolveError> {
    let algorithm = match algorithm {
        Algorithm::Auto => choose_algorithm(instance),
        a => a,
    };
    let lb = area_lower_bound(instance);
    let summary = match algorithm {
        Algorithm::Short => {
            let s = solve_short(instance)?;
            SolveSummary {
                algorithm,
                area_lower_bound: lb,
                accepted_guess: s.report.accepted_guess,
                structured_bins: s.report.structured_bins,
                certified: s.report.within_bound && s.report.audit_clean,
                notes: s.report.notes(),
                solution: s.solution,
            }
        }
        Algorithm::SquaresEq | Algorithm::Squares => {
            let s = if algorithm == Algorithm::SquaresEq {
                solve_squares_eq(instance)?
            } else {
                solve_squares_general(instance)?
            };
            SolveSummary {
                algorithm,
                area_lower_bound: lb,
                accepted_guess: s.report.accepted_guess,
                structured_bins: Some(s.report.structured_bins),
                certified: s.report.certified(),
                notes: s.report.notes(),
                solution: s.solution,
            }
        }
        Algorithm::General => {
            let s = solve_general(instance)?;
            SolveSummary {
                algorithm,
                area_lower_bound: lb,
                accepted_guess: s.report.accepted_guess,
                structured_bins: s.report.structured_bins,
                certified: s.report.certified(),
                notes: s.report.notes(),
                solution: s.solution,
            }
        }
        Algorithm::Auto => unreachable!("resolved above"),
    };
    Ok(summary)
}

/// Runs `attempt` for every guess from the area bound up to the task count
/// and keeps the verified solution with the fewest bins (ties: smaller
/// guess). Stops early once the guess reaches the best count found, since
/// later guesses can only certify weaker bounds, or when the area bound is
/// met.
pub(crate) fn best_over_guesses<X>(
    instance: &Instance,
    mut attempt: impl FnMut(u64) -> Result<(Solution, X), String>,
) -> (Option<(u64, Solution, X)>, Vec<GuessRecord>) {
    let lb = area_lower_bound(instance).max(1);
    let n = instance.len() as u64;
    let mut best: Option<(u64, Solution, X)> = None;
    let mut log = Vec::new();
    for g in lb..=n.max(lb) {
        if let Some((_, sol, _)) = &best {
            if g >= sol.num_bins() as u64 || sol.num_bins() as u64 == lb {
                break;
            }
        }
        let result = attempt(g).and_then(|(sol, extra)| {
            let report = verify_solution(instance, &sol);
            if report.is_valid() {
                Ok((sol, extra))
            } else {
                Err(format!("solution failed verification: {report}"))
            }
        });
        match result {
            Ok((sol, extra)) => {
                log.push(GuessRecord {
                    guess: g,
                    result: Ok(sol.num_bins()),
                });
                let better = best
                    .as_ref()
                    .is_none_or(|(_, b, _)| sol.num_bins() < b.num_bins());
                if better {
                    best = Some((g, sol, extra));
                }
            }
            Err(reason) => log.push(GuessRecord {
                guess: g,
                result: Err(reason),
            }),
        }
    }
    (best, log)
}

pub(crate) fn describe_guesses(log: &[GuessRecord]) -> Vec<String> {
    log.iter()
        .map(|r| match &r.result {
            Ok(bins) => format!("guess {}: {bins} bins", r.guess),
            Err(reason) => format!("guess {}: rejected ({reason})", r.guess),
        })
        .collect()
}
