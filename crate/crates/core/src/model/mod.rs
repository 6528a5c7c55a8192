//! Tasks, instances and allocations.
//!
//! A bin is `horizon` consecutive time slots (numbered from 1), each able to
//! carry at most `capacity` units of demand. A task of width `w` and height `h`
//! placed at start slot `s` adds `h` to every slot in `s..=s + w - 1`.

mod classify;
mod profile;
pub mod ratio;
mod verify;

use std::collections::HashSet;
use std::fmt;

pub use classify::{classify_task, ClassPartition, ClassTotals, TaskClass};
pub use profile::{LoadProfile, LoadRun, StepProfile};
pub use verify::{
    area_lower_bound, bin_area, bin_fullness, is_sorted_profile, load_profile, verify_solution,
    Overload, VerificationReport,
};

/// Exact fraction used for every threshold in the crate.
pub type Rational = num_rational::Ratio<i64>;

/// Bin dimensions are capped so that `horizon * capacity` and every area
/// comparison stay inside `i64`/`u128` arithmetic.
pub const MAX_DIMENSION: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskId(pub u64);

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Task {
    pub id: TaskId,
    /// Number of consecutive slots the task occupies.
    pub width: u64,
    /// Demand added to each occupied slot.
    pub height: u64,
}

impl Task {
    pub fn new(id: u64, width: u64, height: u64) -> Self {
        Task {
            id: TaskId(id),
            width,
            height,
        }
    }

    pub fn area(&self) -> u128 {
        self.width as u128 * self.height as u128
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("bin dimensions must be in 1..={max}, got horizon {horizon} and capacity {capacity}", max = MAX_DIMENSION)]
    InvalidDimensions { horizon: u64, capacity: u64 },
    #[error("task {id} has width {width} and height {height}, outside 1..={horizon} x 1..={capacity}")]
    TaskOutOfBounds {
        id: TaskId,
        width: u64,
        height: u64,
        horizon: u64,
        capacity: u64,
    },
    #[error("task id {0} appears more than once")]
    DuplicateId(TaskId),
    #[error("task {id} starting at slot {start} does not fit in slots 1..={horizon}")]
    OutOfHorizon { id: TaskId, start: u64, horizon: u64 },
    #[error("load profile has no slots")]
    EmptyProfile,
    #[error("{tags} tags given for {bins} bins")]
    TagCountMismatch { tags: usize, bins: usize },
    #[error("bin {bin} breaks its tag: {reason}")]
    TagViolated { bin: usize, reason: String },
    #[error("bin {bin} carries load {load} at slot {slot}, above capacity {capacity}")]
    Overloaded {
        bin: usize,
        slot: u64,
        load: u64,
        capacity: u64,
    },
}

/// Bin dimensions plus the tasks to pack. Construction validates everything,
/// so every `Instance` value is well formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    horizon: u64,
    capacity: u64,
    tasks: Vec<Task>,
}

impl Instance {
    pub fn new(horizon: u64, capacity: u64, tasks: Vec<Task>) -> Result<Self, ModelError> {
        if horizon == 0 || capacity == 0 || horizon > MAX_DIMENSION || capacity > MAX_DIMENSION {
            return Err(ModelError::InvalidDimensions { horizon, capacity });
        }
        let mut seen = HashSet::with_capacity(tasks.len());
        for task in &tasks {
            if task.width == 0 || task.height == 0 || task.width > horizon || task.height > capacity
            {
                return Err(ModelError::TaskOutOfBounds {
                    id: task.id,
                    width: task.width,
                    height: task.height,
                    horizon,
                    capacity,
                });
            }
            if !seen.insert(task.id) {
                return Err(ModelError::DuplicateId(task.id));
            }
        }
        Ok(Instance {
            horizon,
            capacity,
            tasks,
        })
    }

    /// Number of slots `T` per bin.
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Per-slot capacity `C`.
    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn task(&self, id: TaskId) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn total_area(&self) -> u128 {
        self.tasks.iter().map(Task::area).sum()
    }

    pub fn bin_area(&self) -> u128 {
        self.horizon as u128 * self.capacity as u128
    }

    /// Same bin dimensions, different task list.
    pub fn with_tasks(&self, tasks: Vec<Task>) -> Result<Instance, ModelError> {
        Instance::new(self.horizon, self.capacity, tasks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub task: Task,
    /// First occupied slot, 1-based.
    pub start: u64,
}

impl Placement {
    /// Last occupied slot.
    pub fn end(&self) -> u64 {
        self.start + self.task.width - 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bin {
    pub placements: Vec<Placement>,
}

impl Bin {
    pub fn new() -> Self {
        Bin::default()
    }

    pub fn push(&mut self, task: Task, start: u64) {
        self.placements.push(Placement { task, start });
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> + '_ {
        self.placements.iter().map(|p| &p.task)
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    pub bins: Vec<Bin>,
}

impl Solution {
    pub fn new(bins: Vec<Bin>) -> Self {
        Solution { bins }
    }

    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    pub fn num_placements(&self) -> usize {
        self.bins.iter().map(Bin::len).sum()
    }
}

/// Why a bin of a structured solution is allowed to stay as it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinTag {
    /// Placed area is at least this fraction of `horizon * capacity`.
    AlphaFull(Rational),
    /// Load is non-increasing from slot 1 to slot `horizon`.
    SortedProfile,
}

/// A solution where every bin is either `1/k`-full or has a sorted profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSolution {
    pub solution: Solution,
    pub k: Rational,
    pub tags: Vec<BinTag>,
}

impl StructuredSolution {
    pub fn empty(k: Rational) -> Self {
        StructuredSolution {
            solution: Solution::default(),
            k,
            tags: Vec::new(),
        }
    }

    pub fn push(&mut self, bin: Bin, tag: BinTag) {
        self.solution.bins.push(bin);
        self.tags.push(tag);
    }

    pub fn num_bins(&self) -> usize {
        self.solution.num_bins()
    }

    /// Checks tag count, per-bin capacity and every tag against the actual bin.
    pub fn validate(&self, instance: &Instance) -> Result<(), ModelError> {
        if self.tags.len() != self.solution.bins.len() {
            return Err(ModelError::TagCountMismatch {
                tags: self.tags.len(),
                bins: self.solution.bins.len(),
            });
        }
        let min_alpha = self.k.recip();
        for (index, (bin, tag)) in self.solution.bins.iter().zip(&self.tags).enumerate() {
            let profile = load_profile(instance, bin)?;
            let peak = profile.max_load();
            if peak > instance.capacity() {
                let slot = profile
                    .runs()
                    .iter()
                    .find(|r| r.load == peak)
                    .map_or(1, |r| r.start);
                return Err(ModelError::Overloaded {
                    bin: index,
                    slot,
                    load: peak,
                    capacity: instance.capacity(),
                });
            }
            match *tag {
                BinTag::SortedProfile => {
                    if !is_sorted_profile(&profile)? {
                        return Err(ModelError::TagViolated {
                            bin: index,
                            reason: "load profile is not non-increasing".into(),
                        });
                    }
                }
                BinTag::AlphaFull(alpha) => {
                    if alpha < min_alpha {
                        return Err(ModelError::TagViolated {
                            bin: index,
                            reason: format!("fullness tag {alpha} is below 1/k = {min_alpha}"),
                        });
                    }
                    let fullness = bin_fullness(instance, bin);
                    if fullness < alpha {
                        return Err(ModelError::TagViolated {
                            bin: index,
                            reason: format!("fullness {fullness} is below tagged {alpha}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}
