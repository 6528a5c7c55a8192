use super::PrimitiveError;
use crate::model::{Bin, StepProfile, Task};

/// All tasks start at slot 1. The profile is sorted whatever the order.
pub fn stack_sorted(tasks: &[Task], horizon: u64, capacity: u64) -> Result<Bin, PrimitiveError> {
    let total: u128 = tasks.iter().map(|t| t.height as u128).sum();
    if total > capacity as u128 {
        return Err(PrimitiveError::DoesNotFit {
            needed: total,
            available: capacity as u128,
        });
    }
    let mut ordered = tasks.to_vec();
    ordered.sort_by(|a, b| b.width.cmp(&a.width).then(a.id.cmp(&b.id)));
    let mut bin = Bin::new();
    for task in ordered {
        if task.width > horizon {
            return Err(PrimitiveError::DoesNotFit {
                needed: task.width as u128,
                available: horizon as u128,
            });
        }
        bin.push(task, 1);
    }
    Ok(bin)
}

/// Tasks next to each other from slot 1, tallest first.
pub fn side_by_side(tasks: &[Task], horizon: u64, capacity: u64) -> Result<Bin, PrimitiveError> {
    shelves(&[tasks.to_vec()], horizon, capacity).ok_or_else(|| PrimitiveError::DoesNotFit {
        needed: tasks.iter().map(|t| t.width as u128).sum(),
        available: horizon as u128,
    })
}

/// Each group becomes a shelf: its tasks sit next to each other from slot 1,
/// tallest first. Returns `None` when a shelf is wider than the horizon or the
/// summed load exceeds capacity somewhere. The resulting profile is sorted.
pub fn shelves(groups: &[Vec<Task>], horizon: u64, capacity: u64) -> Option<Bin> {
    let mut bin = Bin::new();
    let mut profile = StepProfile::new(horizon);
    for group in groups {
        let mut ordered = group.clone();
        ordered.sort_by(|a, b| {
            b.height
                .cmp(&a.height)
                .then(b.width.cmp(&a.width))
                .then(a.id.cmp(&b.id))
        });
        let mut start = 1u64;
        for task in ordered {
            let end = start + task.width - 1;
            if end > horizon {
                return None;
            }
            profile.add(start, end, task.height);
            bin.push(task, start);
            start = end + 1;
        }
    }
    let peak = profile.to_profile().max_load();
    (peak <= capacity).then_some(bin)
}
