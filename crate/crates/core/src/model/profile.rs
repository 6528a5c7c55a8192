use std::collections::BTreeMap;

use super::Bin;

/// A maximal stretch of slots with equal load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadRun {
    pub start: u64,
    pub len: u64,
    pub load: u64,
}

/// Per-slot load of one bin, run-length encoded. Adjacent runs always differ
/// in load.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadProfile {
    runs: Vec<LoadRun>,
}

impl LoadProfile {
    pub fn from_dense(loads: &[u64]) -> Self {
        let mut runs: Vec<LoadRun> = Vec::new();
        for (i, &load) in loads.iter().enumerate() {
            match runs.last_mut() {
                Some(run) if run.load == load => run.len += 1,
                _ => runs.push(LoadRun {
                    start: i as u64 + 1,
                    len: 1,
                    load,
                }),
            }
        }
        LoadProfile { runs }
    }

    pub(crate) fn from_runs(runs: Vec<LoadRun>) -> Self {
        LoadProfile { runs }
    }

    pub fn runs(&self) -> &[LoadRun] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn horizon(&self) -> u64 {
        self.runs.iter().map(|r| r.len).sum()
    }

    /// One entry per slot, slot 1 first.
    pub fn dense(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.horizon() as usize);
        for run in &self.runs {
            out.extend(std::iter::repeat_n(run.load, run.len as usize));
        }
        out
    }

    /// Load of a 1-based slot; 0 outside the profile.
    pub fn load_at(&self, slot: u64) -> u64 {
        let idx = self.runs.partition_point(|r| r.start + r.len <= slot);
        match self.runs.get(idx) {
            Some(run) if run.start <= slot => run.load,
            _ => 0,
        }
    }

    pub fn max_load(&self) -> u64 {
        self.runs.iter().map(|r| r.load).max().unwrap_or(0)
    }

    pub fn area(&self) -> u128 {
        self.runs
            .iter()
            .map(|r| r.load as u128 * r.len as u128)
            .sum()
    }

    /// True if the load never increases from one slot to the next.
    pub fn is_non_increasing(&self) -> bool {
        self.runs.windows(2).all(|w| w[0].load >= w[1].load)
    }
}

/// Mutable step function over slots `1..=horizon`, used while building bins.
///
/// ```
/// use dbp_core::model::StepProfile;
/// let mut p = StepProfile::new(5);
/// p.add(2, 3, 4);
/// assert_eq!(p.to_profile().dense(), vec![0, 4, 4, 0, 0]);
/// assert_eq!(p.max_over(1, 2), 4);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepProfile {
    horizon: u64,
    steps: BTreeMap<u64, u64>,
}

impl StepProfile {
    pub fn new(horizon: u64) -> Self {
        let mut steps = BTreeMap::new();
        steps.insert(1, 0);
        StepProfile { horizon, steps }
    }

    /// Profile of a bin whose placements are already known to lie in range.
    pub fn from_bin(horizon: u64, bin: &Bin) -> Self {
        let mut p = StepProfile::new(horizon);
        for pl in &bin.placements {
            p.add(pl.start, pl.end(), pl.task.height);
        }
        p
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn load_at(&self, slot: u64) -> u64 {
        self.steps
            .range(..=slot)
            .next_back()
            .map_or(0, |(_, &v)| v)
    }

    /// Largest load over `first..=last`.
    pub fn max_over(&self, first: u64, last: u64) -> u64 {
        let head = self.load_at(first);
        if last <= first {
            return head;
        }
        self.steps
            .range(first + 1..=last)
            .map(|(_, &v)| v)
            .fold(head, u64::max)
    }

    /// Adds `height` to every slot in `first..=last`.
    pub fn add(&mut self, first: u64, last: u64, height: u64) {
        debug_assert!(first >= 1 && first <= last && last <= self.horizon);
        self.split(first);
        if last < self.horizon {
            self.split(last + 1);
        }
        for (_, v) in self.steps.range_mut(first..=last) {
            *v += height;
        }
        self.merge(first);
        if last < self.horizon {
            self.merge(last + 1);
        }
    }

    /// First slot after `slot` where the load changes.
    pub fn next_change_after(&self, slot: u64) -> Option<u64> {
        self.steps.range(slot + 1..).next().map(|(&k, _)| k)
    }

    /// Smallest start where a `width x height` task fits under `capacity`.
    ///
    /// Only run starts are candidates: a leftmost feasible start is slot 1 or
    /// a slot where the load just dropped.
    pub fn leftmost_fit(&self, width: u64, height: u64, capacity: u64) -> Option<u64> {
        if width > self.horizon || height > capacity {
            return None;
        }
        let last_start = self.horizon - width + 1;
        self.steps
            .range(..=last_start)
            .map(|(&k, _)| k)
            .find(|&s| self.max_over(s, s + width - 1) + height <= capacity)
    }

    pub fn to_profile(&self) -> LoadProfile {
        let mut runs = Vec::with_capacity(self.steps.len());
        let mut iter = self.steps.iter().peekable();
        while let Some((&start, &load)) = iter.next() {
            let end = iter.peek().map_or(self.horizon + 1, |(&k, _)| k);
            runs.push(LoadRun {
                start,
                len: end - start,
                load,
            });
        }
        LoadProfile::from_runs(runs)
    }

    pub fn area(&self) -> u128 {
        self.to_profile().area()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.steps
            .values()
            .zip(self.steps.values().skip(1))
            .all(|(a, b)| a >= b)
    }

    fn split(&mut self, at: u64) {
        if !self.steps.contains_key(&at) {
            let v = self.load_at(at);
            self.steps.insert(at, v);
        }
    }

    fn merge(&mut self, at: u64) {
        if at <= 1 {
            return;
        }
        let Some(&here) = self.steps.get(&at) else {
            return;
        };
        if self.load_at(at - 1) == here {
            self.steps.remove(&at);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_round_trip() {
        let loads = [3, 3, 2, 1, 1, 0];
        let p = LoadProfile::from_dense(&loads);
        assert_eq!(p.runs().len(), 4);
        assert_eq!(p.dense(), loads);
        assert_eq!(p.load_at(3), 2);
        assert_eq!(p.load_at(7), 0);
        assert_eq!(p.area(), 10);
        assert!(p.is_non_increasing());
    }

    #[test]
    fn step_profile_merges_equal_runs() {
        let mut p = StepProfile::new(6);
        p.add(1, 3, 2);
        p.add(4, 6, 2);
        assert_eq!(p.to_profile().runs().len(), 1);
        assert_eq!(p.next_change_after(1), None);
    }

    #[test]
    fn leftmost_fit_skips_blocked_prefix() {
        let mut p = StepProfile::new(10);
        p.add(1, 4, 8);
        assert_eq!(p.leftmost_fit(3, 3, 10), Some(5));
        assert_eq!(p.leftmost_fit(3, 2, 10), Some(1));
        assert_eq!(p.leftmost_fit(7, 3, 10), None);
    }
}
