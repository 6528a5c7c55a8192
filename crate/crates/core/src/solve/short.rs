use super::{best_over_guesses, describe_guesses, GuessRecord, SolveError, Solved};
use crate::model::{area_lower_bound, Instance, Rational, Solution, Task};
use crate::primitives::{cut_strip, first_fit_on_top, two_pile_strip, FitParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortReport {
    pub guesses: Vec<GuessRecord>,
    pub accepted_guess: Option<u64>,
    /// Bins after cutting the strip, before first fit.
    pub structured_bins: Option<usize>,
    pub final_bins: usize,
    /// The cut used at most `g + ceil((g-1)/9) + 1` bins.
    pub cut_within_bound: bool,
    /// `final_bins <= 2 * accepted_guess`.
    pub within_bound: bool,
    /// First fit never opened a bin while a scanned bin was underfull.
    pub audit_clean: bool,
}

impl ShortReport {
    pub fn notes(&self) -> Vec<String> {
        let mut notes = describe_guesses(&self.guesses);
        if !self.cut_within_bound {
            notes.push("strip cut exceeded g + ceil((g-1)/9) + 1 bins".into());
        }
        if !self.audit_clean {
            notes.push("first-fit fill audit recorded a violation".into());
        }
        notes
    }
}

struct Attempt {
    structured_bins: usize,
    cut_within_bound: bool,
    audit_clean: bool,
}

/// 2-approximation for tasks with `9h <= C`.
///
/// For each guess `g`: tasks wider than `T/3` go into a two-pile strip of
/// height `g * C`, which is cut into a 2-structured solution; the narrow
/// tasks are added by first fit (`delta_h = 1/9`, `delta_w = 1/3`).
pub fn solve_short(instance: &Instance) -> Result<Solved<ShortReport>, SolveError> {
    let (t, c) = (instance.horizon(), instance.capacity());
    if let Some(task) = instance.tasks().iter().find(|x| 9 * x.height > c) {
        return Err(SolveError::NotApplicable(format!(
            "task {} has height {} above C/9",
            task.id, task.height
        )));
    }
    if instance.is_empty() {
        return Ok(Solved {
            solution: Solution::default(),
            report: ShortReport {
                guesses: Vec::new(),
                accepted_guess: None,
                structured_bins: Some(0),
                final_bins: 0,
                cut_within_bound: true,
                within_bound: true,
                audit_clean: true,
            },
        });
    }

    let (wide, narrow): (Vec<Task>, Vec<Task>) = instance.tasks().iter().partition(|x| 3 * x.width > t);
    let params = FitParams::new(Rational::from_integer(2), Rational::new(1, 9), Rational::new(1, 3))
        .expect("fixed parameters are consistent");
    let trivial_strip = wide.is_empty();
    let lb = area_lower_bound(instance).max(1);

    let (best, guesses) = best_over_guesses(instance, |g| {
        if trivial_strip && g > lb {
            return Err("no wide tasks; the first guess already covers this".into());
        }
        let layout = two_pile_strip(&wide, g * c, t).map_err(|e| e.to_string())?;
        let cut = cut_strip(&layout, instance).map_err(|e| e.to_string())?;
        let structured_bins = cut.structured.num_bins();
        let bound = g + (g - 1).div_ceil(9) + 1;
        let fit = first_fit_on_top(instance, &cut.structured, &narrow, params).map_err(|e| e.to_string())?;
        Ok((
            fit.solution,
            Attempt {
                structured_bins,
                cut_within_bound: structured_bins as u64 <= bound,
                audit_clean: fit.audit.is_clean(),
            },
        ))
    });

    let (g, solution, attempt) = best.ok_or(SolveError::NoGuessSucceeded(instance.len() as u64))?;
    let final_bins = solution.num_bins();
    Ok(Solved {
        solution,
        report: ShortReport {
            guesses,
            accepted_guess: Some(g),
            structured_bins: Some(attempt.structured_bins),
            final_bins,
            cut_within_bound: attempt.cut_within_bound,
            within_bound: final_bins as u64 <= 2 * g,
            audit_clean: attempt.audit_clean,
        },
    })
}
