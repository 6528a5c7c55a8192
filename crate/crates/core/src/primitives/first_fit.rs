use super::PrimitiveError;
use crate::model::ratio::{gt_fraction_of, le_fraction_of};
use crate::model::{bin_area, Bin, BinTag, Instance, Rational, Solution, StepProfile, StructuredSolution, Task};

/// Size limits and fill target for [`first_fit_on_top`].
///
/// With `enforce_condition` every remaining task must satisfy
/// `h <= delta_h * C` and `w <= delta_w * T`, and `(1 - delta_h)(1 - delta_w)`
/// must be at least `1/k`. Without it the remaining tasks must satisfy the
/// same size limits and additionally `3h <= C` or `3w <= T`; the fill target
/// is then `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitParams {
    pub k: Rational,
    pub delta_h: Rational,
    pub delta_w: Rational,
    pub enforce_condition: bool,
}

impl FitParams {
    pub fn new(k: Rational, delta_h: Rational, delta_w: Rational) -> Result<Self, PrimitiveError> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        for (name, d) in [("delta_h", delta_h), ("delta_w", delta_w)] {
            if d <= zero || d > one {
                return Err(PrimitiveError::InvalidParams(format!(
                    "{name} = {d} must lie in (0, 1]"
                )));
            }
        }
        if k < one {
            return Err(PrimitiveError::InvalidParams(format!("k = {k} must be at least 1")));
        }
        let fill = (one - delta_h) * (one - delta_w);
        if fill < k.recip() {
            return Err(PrimitiveError::InvalidParams(format!(
                "(1 - {delta_h})(1 - {delta_w}) = {fill} is below 1/k = {}",
                k.recip()
            )));
        }
        Ok(FitParams {
            k,
            delta_h,
            delta_w,
            enforce_condition: true,
        })
    }

    /// Tasks at most half the bin in each direction and at most a third in
    /// one of them; passed-over bins end up more than a third full.
    pub fn mixed() -> Self {
        FitParams {
            k: Rational::from_integer(3),
            delta_h: Rational::new(1, 2),
            delta_w: Rational::new(1, 2),
            enforce_condition: false,
        }
    }

    /// Fraction of `T * C` every passed-over bin must strictly exceed.
    pub fn fill_threshold(&self) -> Rational {
        if self.enforce_condition {
            let one = Rational::from_integer(1);
            (one - self.delta_h) * (one - self.delta_w)
        } else {
            self.k.recip()
        }
    }

    fn check_task(&self, task: &Task, horizon: u64, capacity: u64) -> Result<(), PrimitiveError> {
        let too_large = |reason: String| PrimitiveError::TaskTooLarge {
            id: task.id,
            width: task.width,
            height: task.height,
            reason,
        };
        if !le_fraction_of(task.height as u128, self.delta_h, capacity as u128) {
            return Err(too_large(format!("height above {} of capacity", self.delta_h)));
        }
        if !le_fraction_of(task.width as u128, self.delta_w, horizon as u128) {
            return Err(too_large(format!("width above {} of horizon", self.delta_w)));
        }
        if !self.enforce_condition
            && 3 * task.height > capacity
            && 3 * task.width > horizon
        {
            return Err(too_large("more than a third of the bin in both directions".into()));
        }
        Ok(())
    }
}

/// Area of one passed-over bin at the moment a new bin was opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinFill {
    pub bin: usize,
    pub area: u128,
    pub meets_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpeningEvent {
    /// Index of the bin being opened.
    pub opened_bin: usize,
    /// Every bin scanned so far, in scan order.
    pub checked: Vec<BinFill>,
}

/// Record of the fill invariant: whenever a fresh bin is opened, every bin
/// already scanned holds area above `threshold * T * C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillAudit {
    pub threshold: Rational,
    pub events: Vec<OpeningEvent>,
}

impl FillAudit {
    /// `(opened_bin, underfull_bin)` pairs.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        self.events
            .iter()
            .flat_map(|e| {
                e.checked
                    .iter()
                    .filter(|f| !f.meets_threshold)
                    .map(move |f| (e.opened_bin, f.bin))
            })
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.events
            .iter()
            .all(|e| e.checked.iter().all(|f| f.meets_threshold))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitOutcome {
    pub solution: Solution,
    pub audit: FillAudit,
    /// Bins opened beyond the structured input.
    pub opened: usize,
}

/// Places `remaining` into the sorted-profile bins of `structured`, then into
/// fresh bins.
///
/// Each bin is scanned from slot 1 to the right, visiting only slots where the
/// load changes. At every visited slot the whole remaining list is tried in
/// order and each task that fits there is placed. A fresh bin is opened only
/// when a full scan of the current bin leaves tasks over. `AlphaFull` bins are
/// kept untouched.
pub fn first_fit_on_top(
    instance: &Instance,
    structured: &StructuredSolution,
    remaining: &[Task],
    params: FitParams,
) -> Result<FitOutcome, PrimitiveError> {
    let horizon = instance.horizon();
    let capacity = instance.capacity();
    structured.validate(instance)?;
    for task in remaining {
        params.check_task(task, horizon, capacity)?;
    }

    let mut bins = structured.solution.bins.clone();
    let mut queue: Vec<usize> = structured
        .tags
        .iter()
        .enumerate()
        .filter(|(_, tag)| matches!(tag, BinTag::SortedProfile))
        .map(|(i, _)| i)
        .collect();
    let threshold = params.fill_threshold();
    let mut audit = FillAudit {
        threshold,
        events: Vec::new(),
    };
    let mut pending = remaining.to_vec();
    let mut scanned: Vec<usize> = Vec::new();
    let mut opened = 0;
    let mut next = 0;

    while !pending.is_empty() {
        if next == queue.len() {
            let opened_bin = bins.len();
            let checked = scanned
                .iter()
                .map(|&b| {
                    let area = bin_area(&bins[b]);
                    BinFill {
                        bin: b,
                        area,
                        meets_threshold: gt_fraction_of(area, threshold, instance.bin_area()),
                    }
                })
                .collect();
            audit.events.push(OpeningEvent { opened_bin, checked });
            bins.push(Bin::new());
            queue.push(opened_bin);
            opened += 1;
        }
        let index = queue[next];
        next += 1;
        scan_bin(&mut bins[index], &mut pending, horizon, capacity);
        scanned.push(index);
    }

    Ok(FitOutcome {
        solution: Solution::new(bins),
        audit,
        opened,
    })
}

fn scan_bin(bin: &mut Bin, pending: &mut Vec<Task>, horizon: u64, capacity: u64) {
    let mut profile = StepProfile::from_bin(horizon, bin);
    let mut slot = 1u64;
    loop {
        pending.retain(|task| {
            let last = slot + task.width - 1;
            if last <= horizon && profile.max_over(slot, last) + task.height <= capacity {
                profile.add(slot, last, task.height);
                bin.push(*task, slot);
                false
            } else {
                true
            }
        });
        if pending.is_empty() {
            return;
        }
        match profile.next_change_after(slot) {
            Some(s) => slot = s,
            None => return,
        }
    }
}
