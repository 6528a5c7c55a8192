use super::ratio::ceil_div;
use super::{Instance, Task};

/// Size class of a task relative to the bin.
///
/// | class | condition |
/// |-------|-----------|
/// | `Tall`  | `h > C/2` |
/// | `Wide`  | `h <= C/2` and `w > T/2` |
/// | `Fat`   | `C/3 < h <= C/2` and `T/3 < w <= T/2` |
/// | `Small` | anything else |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskClass {
    Tall,
    Wide,
    Fat,
    Small,
}

pub fn classify_task(task: &Task, horizon: u64, capacity: u64) -> TaskClass {
    let (w, h) = (task.width as u128, task.height as u128);
    let (t, c) = (horizon as u128, capacity as u128);
    if 2 * h > c {
        TaskClass::Tall
    } else if 2 * w > t {
        TaskClass::Wide
    } else if 3 * h > c && 3 * w > t {
        TaskClass::Fat
    } else {
        TaskClass::Small
    }
}

/// Tasks of an instance split by [`TaskClass`], each list in input order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassPartition {
    pub tall: Vec<Task>,
    pub wide: Vec<Task>,
    pub fat: Vec<Task>,
    pub small: Vec<Task>,
}

impl ClassPartition {
    pub fn of(instance: &Instance) -> Self {
        let mut out = ClassPartition::default();
        for task in instance.tasks() {
            match classify_task(task, instance.horizon(), instance.capacity()) {
                TaskClass::Tall => out.tall.push(*task),
                TaskClass::Wide => out.wide.push(*task),
                TaskClass::Fat => out.fat.push(*task),
                TaskClass::Small => out.small.push(*task),
            }
        }
        out
    }
}

/// Aggregates used by the general solver's case analysis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassTotals {
    /// Sum of widths of tall tasks.
    pub tall_width: u128,
    /// Sum of heights of wide tasks.
    pub wide_height: u128,
    pub fat_count: usize,
    pub small_count: usize,
}

impl ClassTotals {
    pub fn of(partition: &ClassPartition) -> Self {
        ClassTotals {
            tall_width: partition.tall.iter().map(|t| t.width as u128).sum(),
            wide_height: partition.wide.iter().map(|t| t.height as u128).sum(),
            fat_count: partition.fat.len(),
            small_count: partition.small.len(),
        }
    }

    /// Bins needed if tall tasks were cut into unit-height slivers.
    pub fn tall_width_bins(&self, horizon: u64) -> u128 {
        ceil_div(self.tall_width, horizon as u128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(w: u64, h: u64) -> TaskClass {
        classify_task(&Task::new(1, w, h), 12, 12)
    }

    #[test]
    fn boundaries_at_halves_and_thirds() {
        assert_eq!(class(1, 7), TaskClass::Tall);
        assert_eq!(class(12, 6), TaskClass::Wide);
        assert_eq!(class(7, 6), TaskClass::Wide);
        assert_eq!(class(6, 6), TaskClass::Fat);
        assert_eq!(class(5, 5), TaskClass::Fat);
        assert_eq!(class(4, 6), TaskClass::Small);
        assert_eq!(class(6, 4), TaskClass::Small);
        assert_eq!(class(1, 1), TaskClass::Small);
    }

    #[test]
    fn odd_dimensions_use_exact_halves() {
        // C = 7: h = 4 is tall (8 > 7), h = 3 is not.
        let t = |w, h| classify_task(&Task::new(1, w, h), 7, 7);
        assert_eq!(t(1, 4), TaskClass::Tall);
        assert_eq!(t(4, 3), TaskClass::Wide);
        assert_eq!(t(3, 3), TaskClass::Fat);
        assert_eq!(t(2, 3), TaskClass::Small);
    }
}
