use super::GenError;
use crate::model::{Instance, Task};

/// SplitMix64 (Steele, Lea and Flood). Portable: the same seed gives the same
/// stream on every platform and in any reimplementation.
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// return z ^ (z >> 31)
/// ```
/// (all arithmetic wrapping mod 2^64).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `lo..=hi` as `lo + next % (hi - lo + 1)`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo;
        if span == u64::MAX {
            return self.next_u64();
        }
        lo + self.next_u64() % (span + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Width in `1..=T`, height in `1..=C/9`. Needs `C >= 9`.
    ShortTasks,
    /// Side in `1..=min(T, C)`.
    Squares,
    /// Width in `1..=T`, height in `1..=C`.
    Mixed,
}

impl std::str::FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "short" => Ok(Family::ShortTasks),
            "squares" => Ok(Family::Squares),
            "mixed" => Ok(Family::Mixed),
            other => Err(GenError::InvalidParams(format!(
                "unknown family {other:?}; expected short, squares or mixed"
            ))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::ShortTasks => "short",
            Family::Squares => "squares",
            Family::Mixed => "mixed",
        })
    }
}

/// `n` tasks with ids `1..=n`, drawn in id order. Per task the draws are
/// width then height (one draw for a square's side).
///
/// ```
/// use dbp_core::generators::{gen_random, Family};
/// let a = gen_random(Family::Squares, 5, 10, 10, 7).unwrap();
/// let b = gen_random(Family::Squares, 5, 10, 10, 7).unwrap();
/// assert_eq!(a, b);
/// assert!(a.tasks().iter().all(|t| t.is_square()));
/// ```
pub fn gen_random(family: Family, n: usize, horizon: u64, capacity: u64, seed: u64) -> Result<Instance, GenError> {
    if horizon == 0 || capacity == 0 {
        return Err(GenError::InvalidParams("horizon and capacity must be positive".into()));
    }
    if family == Family::ShortTasks && capacity < 9 {
        return Err(GenError::InvalidParams(format!(
            "short tasks need capacity at least 9, got {capacity}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let tasks = (1..=n as u64)
        .map(|id| match family {
            Family::ShortTasks => {
                let w = rng.range(1, horizon);
                let h = rng.range(1, capacity / 9);
                Task::new(id, w, h)
            }
            Family::Squares => {
                let s = rng.range(1, horizon.min(capacity));
                Task::new(id, s, s)
            }
            Family::Mixed => {
                let w = rng.range(1, horizon);
                let h = rng.range(1, capacity);
                Task::new(id, w, h)
            }
        })
        .collect();
    Ok(Instance::new(horizon, capacity, tasks)?)
}
