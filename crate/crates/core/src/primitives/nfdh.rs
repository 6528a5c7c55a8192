use crate::model::{Bin, Task};

/// Next Fit Decreasing Height.
///
/// Tasks are sorted by height (ties: wider first, then id) and laid left to
/// right on a shelf whose height is its first task's height. A task that does
/// not fit the shelf's remaining width closes it; a shelf that does not fit
/// the current bin's remaining capacity opens a new bin. Every bin gets a
/// non-increasing profile.
///
/// Tasks must satisfy `width <= horizon` and `height <= capacity`.
pub fn nfdh(tasks: &[Task], horizon: u64, capacity: u64) -> Vec<Bin> {
    let mut ordered = tasks.to_vec();
    ordered.sort_by(|a, b| {
        b.height
            .cmp(&a.height)
            .then(b.width.cmp(&a.width))
            .then(a.id.cmp(&b.id))
    });

    let mut bins: Vec<Bin> = Vec::new();
    let mut used = 0u64;
    let mut shelf: Vec<Task> = Vec::new();
    let mut shelf_width = 0u64;

    let mut close = |shelf: &mut Vec<Task>, bins: &mut Vec<Bin>| {
        let Some(first) = shelf.first() else { return };
        let height = first.height;
        if bins.is_empty() || used + height > capacity {
            bins.push(Bin::new());
            used = 0;
        }
        let bin = bins.last_mut().expect("a bin was just ensured");
        let mut start = 1;
        for task in shelf.drain(..) {
            bin.push(task, start);
            start += task.width;
        }
        used += height;
    };

    for task in ordered {
        if !shelf.is_empty() && shelf_width + task.width > horizon {
            close(&mut shelf, &mut bins);
            shelf_width = 0;
        }
        shelf_width += task.width;
        shelf.push(task);
    }
    close(&mut shelf, &mut bins);
    bins
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_sorted_profile, load_profile, verify_solution, Instance, Solution};

    #[test]
    fn four_quarter_squares_share_one_bin() {
        let tasks: Vec<Task> = (1..=4).map(|i| Task::new(i, 6, 6)).collect();
        let inst = Instance::new(12, 12, tasks.clone()).unwrap();
        let bins = nfdh(&tasks, 12, 12);
        assert_eq!(bins.len(), 1);
        assert_eq!(load_profile(&inst, &bins[0]).unwrap().dense(), vec![12; 12]);
    }

    #[test]
    fn bins_are_sorted_and_valid() {
        let tasks = vec![
            Task::new(1, 4, 5),
            Task::new(2, 7, 3),
            Task::new(3, 2, 6),
            Task::new(4, 5, 5),
            Task::new(5, 9, 1),
            Task::new(6, 3, 4),
        ];
        let inst = Instance::new(10, 10, tasks.clone()).unwrap();
        let bins = nfdh(&tasks, 10, 10);
        for bin in &bins {
            assert!(is_sorted_profile(&load_profile(&inst, bin).unwrap()).unwrap());
        }
        assert!(verify_solution(&inst, &Solution::new(bins)).is_valid());
    }

    #[test]
    fn empty_input_gives_no_bins() {
        assert!(nfdh(&[], 5, 5).is_empty());
    }
}
