use std::collections::HashMap;
use std::fmt;

use super::profile::{LoadProfile, LoadRun};
use super::ratio::{ceil_div, ratio_of};
use super::{Bin, Instance, ModelError, Rational, Solution, TaskId};

/// Load profile of one bin. Fails if a placement leaves `1..=horizon`.
pub fn load_profile(instance: &Instance, bin: &Bin) -> Result<LoadProfile, ModelError> {
    let horizon = instance.horizon();
    // (slot, delta) events; a task adds at `start` and removes after `end`.
    let mut events: Vec<(u64, i128)> = Vec::with_capacity(bin.len() * 2);
    for p in &bin.placements {
        let fits = p.start >= 1
            && p
                .start
                .checked_add(p.task.width - 1)
                .is_some_and(|end| end <= horizon);
        if !fits {
            return Err(ModelError::OutOfHorizon {
                id: p.task.id,
                start: p.start,
                horizon,
            });
        }
        events.push((p.start, p.task.height as i128));
        events.push((p.end() + 1, -(p.task.height as i128)));
    }
    events.sort_unstable();

    let mut runs: Vec<LoadRun> = Vec::new();
    let mut load: i128 = 0;
    let mut slot = 1u64;
    let mut i = 0;
    while slot <= horizon {
        while i < events.len() && events[i].0 == slot {
            load += events[i].1;
            i += 1;
        }
        let next = events.get(i).map_or(horizon + 1, |e| e.0.min(horizon + 1));
        let value = load as u64;
        match runs.last_mut() {
            Some(run) if run.load == value => run.len += next - slot,
            _ => runs.push(LoadRun {
                start: slot,
                len: next - slot,
                load: value,
            }),
        }
        slot = next;
    }
    Ok(LoadProfile::from_runs(runs))
}

/// `ceil(total area / (T * C))`, the trivial lower bound on the bin count.
pub fn area_lower_bound(instance: &Instance) -> u64 {
    ceil_div(instance.total_area(), instance.bin_area()) as u64
}

/// Sum of task areas in a bin.
pub fn bin_area(bin: &Bin) -> u128 {
    bin.tasks().map(|t| t.area()).sum()
}

/// Placed area over `T * C`.
pub fn bin_fullness(instance: &Instance, bin: &Bin) -> Rational {
    ratio_of(bin_area(bin), instance.bin_area())
}

/// Whether the load never increases along the slots.
pub fn is_sorted_profile(profile: &LoadProfile) -> Result<bool, ModelError> {
    if profile.is_empty() {
        return Err(ModelError::EmptyProfile);
    }
    Ok(profile.is_non_increasing())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overload {
    pub bin: usize,
    /// First slot of the bin whose load exceeds capacity.
    pub slot: u64,
    pub load: u64,
}

/// Everything wrong with a solution, collected rather than stopping early.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub bins: usize,
    pub capacity: u64,
    /// Instance tasks that are not placed anywhere.
    pub missing: Vec<TaskId>,
    /// Tasks placed more than once.
    pub duplicated: Vec<TaskId>,
    /// Placements whose id is not in the instance or whose size differs.
    pub foreign: Vec<TaskId>,
    /// `(bin, task, start)` for placements leaving `1..=horizon`.
    pub out_of_horizon: Vec<(usize, TaskId, u64)>,
    pub overloads: Vec<Overload>,
}

impl VerificationReport {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty() && self.duplicated.is_empty() && self.foreign.is_empty()
    }

    pub fn is_feasible(&self) -> bool {
        self.out_of_horizon.is_empty() && self.overloads.is_empty() && self.foreign.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.is_complete() && self.is_feasible()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid: {} bins", self.bins);
        }
        let ids = |v: &[TaskId]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut parts = Vec::new();
        if !self.missing.is_empty() {
            parts.push(format!("missing tasks {}", ids(&self.missing)));
        }
        if !self.duplicated.is_empty() {
            parts.push(format!("duplicated tasks {}", ids(&self.duplicated)));
        }
        if !self.foreign.is_empty() {
            parts.push(format!("unknown or resized tasks {}", ids(&self.foreign)));
        }
        for (bin, id, start) in &self.out_of_horizon {
            parts.push(format!("bin {bin}: task {id} at start {start} leaves the horizon"));
        }
        for o in &self.overloads {
            parts.push(format!(
                "bin {}: slot {} has load {} > capacity {}",
                o.bin, o.slot, o.load, self.capacity
            ));
        }
        write!(f, "invalid: {}", parts.join("; "))
    }
}

/// Checks completeness (every task exactly once, unchanged) and feasibility
/// (in range, no slot above capacity).
pub fn verify_solution(instance: &Instance, solution: &Solution) -> VerificationReport {
    let mut report = VerificationReport {
        bins: solution.num_bins(),
        capacity: instance.capacity(),
        ..Default::default()
    };
    let by_id: HashMap<TaskId, _> = instance.tasks().iter().map(|t| (t.id, *t)).collect();
    let mut seen: HashMap<TaskId, usize> = HashMap::new();

    for (index, bin) in solution.bins.iter().enumerate() {
        for p in &bin.placements {
            match by_id.get(&p.task.id) {
                Some(task) if *task == p.task => {
                    *seen.entry(p.task.id).or_default() += 1;
                }
                _ => report.foreign.push(p.task.id),
            }
        }
        match load_profile(instance, bin) {
            Ok(profile) => {
                if let Some(run) = profile
                    .runs()
                    .iter()
                    .find(|r| r.load > instance.capacity())
                {
                    report.overloads.push(Overload {
                        bin: index,
                        slot: run.start,
                        load: run.load,
                    });
                }
            }
            Err(_) => {
                for p in &bin.placements {
                    if p.start == 0 || p.start + p.task.width - 1 > instance.horizon() {
                        report.out_of_horizon.push((index, p.task.id, p.start));
                    }
                }
            }
        }
    }

    for task in instance.tasks() {
        match seen.get(&task.id) {
            None => report.missing.push(task.id),
            Some(&n) if n > 1 => report.duplicated.push(task.id),
            _ => {}
        }
    }
    report
}
