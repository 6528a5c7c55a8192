use std::collections::BTreeMap;

use super::arrange::{shelves, stack_sorted};
use super::PrimitiveError;
use crate::model::ratio::ge_fraction_of;
use crate::model::{bin_area, Bin, BinTag, Instance, Rational, StructuredSolution, Task};

/// A task at vertical offset `bottom` in a strip; it covers
/// `bottom..bottom + height`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripItem {
    pub task: Task,
    pub bottom: u64,
}

impl StripItem {
    pub fn top(&self) -> u64 {
        self.bottom + self.task.height
    }
}

/// Two piles in a strip of `width` columns and height `budget`.
///
/// The left pile is stacked upward from 0 against the left edge, the right
/// pile downward from `budget` against the right edge. Within each pile widths
/// are non-increasing in stacking order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripLayout {
    pub budget: u64,
    pub width: u64,
    pub left: Vec<StripItem>,
    pub right: Vec<StripItem>,
    /// The task whose addition first pushed the left pile above `budget`.
    pub dropped: Option<Task>,
}

/// Sorts `tasks` by width (widest first) and stacks them on the left until
/// the pile would exceed `budget`. That task is dropped and the rest hang from
/// the top on the right. Fails if the right pile is taller than the budget or
/// a left and a right task overlap.
///
/// ```
/// use dbp_core::primitives::two_pile_strip;
/// use dbp_core::Task;
/// let tasks = [Task::new(1, 6, 2), Task::new(2, 5, 2), Task::new(3, 4, 2)];
/// let layout = two_pile_strip(&tasks, 4, 10).unwrap();
/// assert_eq!(layout.left.len(), 2);
/// assert_eq!(layout.dropped.map(|t| t.id.0), Some(3));
/// assert!(layout.right.is_empty());
/// ```
pub fn two_pile_strip(tasks: &[Task], budget: u64, width: u64) -> Result<StripLayout, PrimitiveError> {
    let mut ordered = tasks.to_vec();
    ordered.sort_by(|a, b| {
        b.width
            .cmp(&a.width)
            .then(b.height.cmp(&a.height))
            .then(a.id.cmp(&b.id))
    });
    if let Some(t) = ordered.iter().find(|t| t.width > width) {
        return Err(PrimitiveError::TaskTooLarge {
            id: t.id,
            width: t.width,
            height: t.height,
            reason: format!("wider than the strip width {width}"),
        });
    }

    let mut layout = StripLayout {
        budget,
        width,
        left: Vec::new(),
        right: Vec::new(),
        dropped: None,
    };
    let mut height = 0u64;
    let mut rest = ordered.into_iter();
    for task in rest.by_ref() {
        if height + task.height > budget {
            layout.dropped = Some(task);
            break;
        }
        layout.left.push(StripItem { task, bottom: height });
        height += task.height;
    }
    let mut top = budget;
    for task in rest {
        if task.height > top {
            return Err(PrimitiveError::InfeasibleBudget {
                budget,
                reason: "right pile is taller than the strip".into(),
            });
        }
        top -= task.height;
        layout.right.push(StripItem { task, bottom: top });
    }

    // Both piles are sorted by offset, so a merge walk finds every vertically
    // overlapping pair.
    let right_up: Vec<&StripItem> = layout.right.iter().rev().collect();
    let mut j = 0;
    for l in &layout.left {
        while j < right_up.len() && right_up[j].top() <= l.bottom {
            j += 1;
        }
        let mut k = j;
        while k < right_up.len() && right_up[k].bottom < l.top() {
            let r = right_up[k];
            if l.task.width + r.task.width > width {
                return Err(PrimitiveError::InfeasibleBudget {
                    budget,
                    reason: format!("tasks {} and {} overlap", l.task.id, r.task.id),
                });
            }
            k += 1;
        }
    }
    Ok(layout)
}

/// Bin counts of a [`cut_strip`] result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutOutcome {
    pub structured: StructuredSolution,
    /// Bins made from the tasks lying inside one band of height `C`.
    pub band_bins: usize,
    /// Bins collecting the tasks crossing band boundaries, nine boundaries each.
    pub shelf_bins: usize,
    /// Whether the dropped task (or an underfull right part) needed its own bin.
    pub overflow_bin: bool,
}

/// Cuts a strip of height `g * C` into `g` bands and builds a 2-structured
/// solution.
///
/// - tasks inside one band form one bin; left tasks start at slot 1, right
///   tasks end at slot `T`
/// - tasks crossing a band boundary form shelves: each boundary's left and
///   right crossing task sit side by side, and nine boundaries share a bin
/// - the dropped task gets a bin of its own, possibly with the right part of
///   a band that is neither left-only nor half full stacked on it
///
/// Every task in the layout must satisfy `9h <= C`.
pub fn cut_strip(layout: &StripLayout, instance: &Instance) -> Result<CutOutcome, PrimitiveError> {
    let capacity = instance.capacity();
    let horizon = instance.horizon();
    if layout.width != horizon {
        return Err(PrimitiveError::MalformedLayout(format!(
            "strip width {} differs from horizon {horizon}",
            layout.width
        )));
    }
    if !layout.budget.is_multiple_of(capacity) {
        return Err(PrimitiveError::MalformedLayout(format!(
            "budget {} is not a multiple of capacity {capacity}",
            layout.budget
        )));
    }
    let all = layout
        .left
        .iter()
        .chain(&layout.right)
        .map(|i| i.task)
        .chain(layout.dropped);
    for task in all {
        if 9 * task.height > capacity {
            return Err(PrimitiveError::TaskTooLarge {
                id: task.id,
                width: task.width,
                height: task.height,
                reason: "height above a ninth of capacity".into(),
            });
        }
    }

    let bands = (layout.budget / capacity) as usize;
    let mut band_left: Vec<Vec<Task>> = vec![Vec::new(); bands];
    let mut band_right: Vec<Vec<Task>> = vec![Vec::new(); bands];
    // boundary index -> (left crossing task, right crossing task)
    let mut crossings: BTreeMap<u64, (Option<Task>, Option<Task>)> = BTreeMap::new();

    for (items, is_left) in [(&layout.left, true), (&layout.right, false)] {
        for item in items {
            let boundary = item.bottom / capacity + 1;
            if boundary * capacity < item.top() {
                let entry = crossings.entry(boundary).or_default();
                let slot = if is_left { &mut entry.0 } else { &mut entry.1 };
                if slot.replace(item.task).is_some() {
                    return Err(PrimitiveError::MalformedLayout(format!(
                        "two tasks of one pile cross boundary {boundary}"
                    )));
                }
            } else {
                let band = (item.bottom / capacity) as usize;
                if is_left {
                    band_left[band].push(item.task);
                } else {
                    band_right[band].push(item.task);
                }
            }
        }
    }

    let half = Rational::new(1, 2);
    let mut out = StructuredSolution::empty(Rational::from_integer(2));
    let mut band_bins = 0;
    let mut overflow: Vec<Task> = layout.dropped.into_iter().collect();
    let mut overflow_taken = false;

    for (left, right) in band_left.iter().zip(&band_right) {
        if left.is_empty() && right.is_empty() {
            continue;
        }
        if right.is_empty() || left.is_empty() {
            let tasks = if right.is_empty() { left } else { right };
            out.push(stack_sorted(tasks, horizon, capacity)?, BinTag::SortedProfile);
            band_bins += 1;
            continue;
        }
        let mut bin = Bin::new();
        for t in left {
            bin.push(*t, 1);
        }
        for t in right {
            bin.push(*t, horizon - t.width + 1);
        }
        if ge_fraction_of(bin_area(&bin), half, instance.bin_area()) {
            out.push(bin, BinTag::AlphaFull(half));
        } else {
            if overflow_taken {
                return Err(PrimitiveError::MalformedLayout(
                    "more than one band is neither left-only nor half full".into(),
                ));
            }
            overflow_taken = true;
            overflow.extend(right.iter().copied());
            out.push(stack_sorted(left, horizon, capacity)?, BinTag::SortedProfile);
        }
        band_bins += 1;
    }

    let crossing_pairs: Vec<(Option<Task>, Option<Task>)> = crossings.into_values().collect();
    let mut shelf_bins = 0;
    for chunk in crossing_pairs.chunks(9) {
        let groups: Vec<Vec<Task>> = chunk
            .iter()
            .map(|(l, r)| l.iter().chain(r.iter()).copied().collect())
            .collect();
        let bin = shelves(&groups, horizon, capacity).ok_or_else(|| {
            PrimitiveError::MalformedLayout("crossing tasks do not fit nine shelves per bin".into())
        })?;
        out.push(bin, BinTag::SortedProfile);
        shelf_bins += 1;
    }

    let overflow_bin = !overflow.is_empty();
    if overflow_bin {
        let bin = stack_sorted(&overflow, horizon, capacity).map_err(|_| {
            PrimitiveError::MalformedLayout("dropped task and underfull right part exceed capacity".into())
        })?;
        out.push(bin, BinTag::SortedProfile);
    }

    out.validate(instance)?;
    Ok(CutOutcome {
        structured: out,
        band_bins,
        shelf_bins,
        overflow_bin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_is_detected() {
        // Width-7 tasks in a strip of width 10: with budget 4 the fourth task
        // hangs on the right facing the second.
        let tasks: Vec<Task> = (1..=4).map(|i| Task::new(i, 7, 2)).collect();
        assert!(matches!(
            two_pile_strip(&tasks, 4, 10),
            Err(PrimitiveError::InfeasibleBudget { .. })
        ));
        assert!(two_pile_strip(&tasks, 6, 10).is_ok());
    }

    #[test]
    fn right_pile_hangs_from_top() {
        let tasks = vec![
            Task::new(1, 6, 3),
            Task::new(2, 5, 3),
            Task::new(3, 4, 3),
            Task::new(4, 4, 2),
        ];
        let layout = two_pile_strip(&tasks, 6, 10).unwrap();
        assert_eq!(layout.left.len(), 2);
        assert_eq!(layout.dropped.unwrap().id.0, 3);
        assert_eq!(layout.right[0].bottom, 4);
    }

    #[test]
    fn cut_counts_stay_within_bound() {
        let tasks: Vec<Task> = (1..=20).map(|i| Task::new(i, 4 + i % 5, 1 + i % 2)).collect();
        let inst = Instance::new(10, 18, tasks.clone()).unwrap();
        for g in 2..=4u64 {
            if let Ok(layout) = two_pile_strip(&tasks, g * 18, 10) {
                let cut = cut_strip(&layout, &inst).unwrap();
                let bound = g + (g - 1).div_ceil(9) + 1;
                assert!(cut.structured.num_bins() as u64 <= bound);
            }
        }
    }
}
