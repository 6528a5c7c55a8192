use std::collections::{BTreeMap, HashMap};

use super::{Meter, OracleOutcome, SearchBudget, Verdict};
use crate::model::{area_lower_bound, Bin, Instance, Solution, Task};

/// Tasks with equal width and height, searched as one kind.
struct Kind {
    width: u64,
    height: u64,
    tasks: Vec<Task>,
}

fn kinds_of(tasks: &[Task]) -> Vec<Kind> {
    let mut sorted = tasks.to_vec();
    sorted.sort_by(|a, b| {
        b.area()
            .cmp(&a.area())
            .then(b.width.cmp(&a.width))
            .then(b.height.cmp(&a.height))
            .then(a.id.cmp(&b.id))
    });
    let mut kinds: Vec<Kind> = Vec::new();
    for task in sorted {
        match kinds.last_mut() {
            Some(k) if k.width == task.width && k.height == task.height => k.tasks.push(task),
            _ => kinds.push(Kind {
                width: task.width,
                height: task.height,
                tasks: vec![task],
            }),
        }
    }
    kinds
}

/// Decides whether all tasks of `instance` fit into a single bin.
///
/// Any feasible allocation can be shifted left task by task until every task
/// starts at slot 1 or right after some other task ends. Ordered by start,
/// every start is then 1 or the slot after an earlier task's end. The search
/// walks those candidate slots left to right and at each one decides which
/// task kinds start there, pruning on capacity and on free area to the right.
///
/// ```
/// use dbp_core::oracle::{single_bin_feasible, SearchBudget, Verdict};
/// use dbp_core::{Instance, Task};
/// let inst = Instance::new(4, 2, vec![Task::new(1, 3, 1), Task::new(2, 3, 1), Task::new(3, 1, 2)]).unwrap();
/// let out = single_bin_feasible(&inst, SearchBudget::nodes(10_000));
/// assert!(out.proven().unwrap().is_feasible());
/// ```
pub fn single_bin_feasible(instance: &Instance, budget: SearchBudget) -> OracleOutcome<Verdict<Bin>> {
    let mut meter = Meter::new(budget);
    let verdict = one_bin(instance.horizon(), instance.capacity(), instance.tasks(), &mut meter);
    match verdict {
        Some(value) => OracleOutcome::Proven {
            value,
            nodes: meter.nodes(),
        },
        None => OracleOutcome::Unknown {
            nodes: meter.nodes(),
        },
    }
}

/// `None` when the meter runs out.
pub(crate) fn one_bin(horizon: u64, capacity: u64, tasks: &[Task], meter: &mut Meter) -> Option<Verdict<Bin>> {
    let area: u128 = tasks.iter().map(Task::area).sum();
    if !meter.tick() {
        return None;
    }
    if area > horizon as u128 * capacity as u128
        || tasks.iter().any(|t| t.width > horizon || t.height > capacity)
    {
        return Some(Verdict::Infeasible);
    }
    let kinds = kinds_of(tasks);
    let mut search = OneBin {
        horizon,
        capacity,
        left: kinds.iter().map(|k| k.tasks.len()).collect(),
        kinds,
        loads: vec![0; horizon as usize],
        ends: BTreeMap::new(),
        placed: Vec::new(),
        witness: None,
        remaining_area: area,
        meter,
    };
    match search.dfs(1, 0) {
        None => None,
        Some(false) => Some(Verdict::Infeasible),
        Some(true) => {
            let placed = search.witness.take().unwrap_or_default();
            let mut used = vec![0usize; search.kinds.len()];
            let mut bin = Bin::new();
            for (kind, start) in placed {
                bin.push(search.kinds[kind].tasks[used[kind]], start);
                used[kind] += 1;
            }
            Some(Verdict::Feasible(bin))
        }
    }
}

struct OneBin<'m> {
    horizon: u64,
    capacity: u64,
    kinds: Vec<Kind>,
    left: Vec<usize>,
    /// `loads[s - 1]` is the load of slot `s`.
    loads: Vec<u64>,
    /// Candidate starts created by placed tasks, with multiplicity.
    ends: BTreeMap<u64, u32>,
    placed: Vec<(usize, u64)>,
    witness: Option<Vec<(usize, u64)>>,
    remaining_area: u128,
    meter: &'m mut Meter,
}

impl OneBin<'_> {
    fn dfs(&mut self, slot: u64, first_kind: usize) -> Option<bool> {
        if self.remaining_area == 0 {
            self.witness = Some(self.placed.clone());
            return Some(true);
        }
        if !self.meter.tick() {
            return None;
        }
        let from = (slot - 1) as usize;
        let free: u128 = self.loads[from..]
            .iter()
            .map(|&l| (self.capacity - l) as u128)
            .sum();
        if self.remaining_area > free {
            return Some(false);
        }
        let room = self.horizon - slot + 1;
        let widest = (0..self.kinds.len())
            .filter(|&k| self.left[k] > 0)
            .map(|k| self.kinds[k].width)
            .max()
            .unwrap_or(0);
        if widest > room {
            return Some(false);
        }

        for k in first_kind..self.kinds.len() {
            if self.left[k] == 0 {
                continue;
            }
            let (w, h) = (self.kinds[k].width, self.kinds[k].height);
            if w > room {
                continue;
            }
            let span = from..from + w as usize;
            if self.loads[span.clone()].iter().any(|&l| l + h > self.capacity) {
                continue;
            }
            self.apply(k, slot, true);
            let found = self.dfs(slot, k);
            self.apply(k, slot, false);
            match found {
                Some(false) => {}
                other => return other,
            }
        }

        match self.ends.range(slot + 1..).next() {
            Some((&next, _)) => self.dfs(next, 0),
            None => Some(false),
        }
    }

    fn apply(&mut self, kind: usize, slot: u64, place: bool) {
        let (w, h) = (self.kinds[kind].width, self.kinds[kind].height);
        let from = (slot - 1) as usize;
        let end = slot + w;
        let area = w as u128 * h as u128;
        if place {
            for l in &mut self.loads[from..from + w as usize] {
                *l += h;
            }
            self.left[kind] -= 1;
            self.remaining_area -= area;
            self.placed.push((kind, slot));
            if end <= self.horizon {
                *self.ends.entry(end).or_default() += 1;
            }
        } else {
            for l in &mut self.loads[from..from + w as usize] {
                *l -= h;
            }
            self.left[kind] += 1;
            self.remaining_area += area;
            self.placed.pop();
            if end <= self.horizon {
                let count = self.ends.get_mut(&end).expect("end was recorded");
                *count -= 1;
                if *count == 0 {
                    self.ends.remove(&end);
                }
            }
        }
    }
}

/// A proven optimum of the demand bin packing problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub bins: usize,
    pub witness: Solution,
}

/// Minimum number of bins, by iterative deepening from the area bound.
pub fn exact_demand_bp(instance: &Instance, budget: SearchBudget) -> OracleOutcome<Optimum> {
    let mut meter = Meter::new(budget);
    if instance.is_empty() {
        return OracleOutcome::Proven {
            value: Optimum {
                bins: 0,
                witness: Solution::default(),
            },
            nodes: 0,
        };
    }
    let start = area_lower_bound(instance).max(1) as usize;
    for k in start..=instance.len() {
        match assign(instance.horizon(), instance.capacity(), instance.tasks(), k, &mut meter) {
            Some(Verdict::Feasible(bins)) => {
                return OracleOutcome::Proven {
                    value: Optimum {
                        bins: bins.len(),
                        witness: Solution::new(bins),
                    },
                    nodes: meter.nodes(),
                };
            }
            Some(Verdict::Infeasible) => {}
            None => break,
        }
    }
    OracleOutcome::Unknown {
        nodes: meter.nodes(),
    }
}

/// Decides whether `tasks` fit into at most `bins` bins of the instance's
/// dimensions; a feasible answer carries one allocation per non-empty bin.
pub fn pack_into_bins(
    instance: &Instance,
    tasks: &[Task],
    bins: usize,
    budget: SearchBudget,
) -> OracleOutcome<Verdict<Vec<Bin>>> {
    let mut meter = Meter::new(budget);
    match assign(instance.horizon(), instance.capacity(), tasks, bins, &mut meter) {
        Some(value) => OracleOutcome::Proven {
            value,
            nodes: meter.nodes(),
        },
        None => OracleOutcome::Unknown {
            nodes: meter.nodes(),
        },
    }
}

fn assign(horizon: u64, capacity: u64, tasks: &[Task], bins: usize, meter: &mut Meter) -> Option<Verdict<Vec<Bin>>> {
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    order.sort_by(|&a, &b| {
        let (ta, tb) = (&tasks[a], &tasks[b]);
        tb.area()
            .cmp(&ta.area())
            .then(tb.width.cmp(&ta.width))
            .then(tb.height.cmp(&ta.height))
            .then(ta.id.cmp(&tb.id))
    });
    let mut search = Assign {
        horizon,
        capacity,
        tasks,
        order,
        limit: bins,
        groups: Vec::new(),
        areas: Vec::new(),
        bin_of: vec![usize::MAX; tasks.len()],
        remaining: tasks.iter().map(Task::area).sum(),
        cache: HashMap::new(),
        uncertain: false,
        meter,
    };
    if search.dfs(0) {
        let bins = search
            .groups
            .iter()
            .map(|g| {
                let mut key = g.clone();
                key.sort_unstable();
                match search.cache.get(&key) {
                    Some(Some(bin)) => bin.clone(),
                    _ => unreachable!("every accepted bin was checked feasible"),
                }
            })
            .collect();
        return Some(Verdict::Feasible(bins));
    }
    if search.uncertain || search.meter.exhausted() {
        None
    } else {
        Some(Verdict::Infeasible)
    }
}

struct Assign<'a, 'm> {
    horizon: u64,
    capacity: u64,
    tasks: &'a [Task],
    order: Vec<usize>,
    limit: usize,
    groups: Vec<Vec<usize>>,
    areas: Vec<u128>,
    bin_of: Vec<usize>,
    remaining: u128,
    /// Sorted task indices -> allocation if the set fits one bin.
    cache: HashMap<Vec<usize>, Option<Bin>>,
    uncertain: bool,
    meter: &'m mut Meter,
}

impl Assign<'_, '_> {
    fn bin_area(&self) -> u128 {
        self.horizon as u128 * self.capacity as u128
    }

    fn fits(&mut self, group: &[usize]) -> bool {
        let mut key = group.to_vec();
        key.sort_unstable();
        if let Some(entry) = self.cache.get(&key) {
            return entry.is_some();
        }
        let subset: Vec<Task> = key.iter().map(|&i| self.tasks[i]).collect();
        match one_bin(self.horizon, self.capacity, &subset, self.meter) {
            Some(Verdict::Feasible(bin)) => {
                self.cache.insert(key, Some(bin));
                true
            }
            Some(Verdict::Infeasible) => {
                self.cache.insert(key, None);
                false
            }
            None => {
                self.uncertain = true;
                false
            }
        }
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        if !self.meter.tick() {
            return false;
        }
        let full = self.bin_area();
        let open = self.groups.len();
        let room: u128 = self.areas.iter().map(|a| full - a).sum::<u128>()
            + (self.limit - open) as u128 * full;
        if self.remaining > room {
            return false;
        }
        let item = self.order[pos];
        let task = self.tasks[item];
        let first_bin = match pos.checked_sub(1).map(|p| self.order[p]) {
            Some(prev)
                if self.tasks[prev].width == task.width && self.tasks[prev].height == task.height =>
            {
                self.bin_of[prev]
            }
            _ => 0,
        };
        for b in first_bin..open {
            if self.areas[b] + task.area() > full {
                continue;
            }
            self.groups[b].push(item);
            let group = self.groups[b].clone();
            if self.fits(&group) {
                self.place(item, b, task.area());
                if self.dfs(pos + 1) {
                    return true;
                }
                self.unplace(item, b, task.area());
            }
            self.groups[b].pop();
            if self.meter.exhausted() {
                return false;
            }
        }
        if open < self.limit {
            self.groups.push(vec![item]);
            self.areas.push(0);
            let key = vec![item];
            self.cache.entry(key).or_insert_with(|| {
                let mut bin = Bin::new();
                bin.push(task, 1);
                Some(bin)
            });
            self.place(item, open, task.area());
            if self.dfs(pos + 1) {
                return true;
            }
            self.unplace(item, open, task.area());
            self.groups.pop();
            self.areas.pop();
        }
        false
    }

    fn place(&mut self, item: usize, bin: usize, area: u128) {
        self.bin_of[item] = bin;
        self.areas[bin] += area;
        self.remaining -= area;
    }

    fn unplace(&mut self, item: usize, bin: usize, area: u128) {
        self.bin_of[item] = usize::MAX;
        self.areas[bin] -= area;
        self.remaining += area;
    }
}
