use super::ffd::ffd_units;
use super::{decreasing_order, scaled_items, Bp1dError, Grouping};
use crate::model::Rational;

/// Result of [`exact_bp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactBp {
    /// Proven minimum number of bins.
    Optimal(Grouping),
    /// Budget ran out; `best` is the best packing found.
    Unknown {
        best: Grouping,
        lower_bound: usize,
        nodes: u64,
    },
}

impl ExactBp {
    pub fn groups(&self) -> &Grouping {
        match self {
            ExactBp::Optimal(g) => g,
            ExactBp::Unknown { best, .. } => best,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, ExactBp::Optimal(_))
    }
}

/// Branch and bound over items in decreasing order.
///
/// Starts from the FFD packing and the larger of the area bound and the
/// Martello-Toth L2 bound. Bins with equal residual room are treated as one
/// branch.
pub fn exact_bp(sizes: &[Rational], capacity: Rational, node_budget: u64) -> Result<ExactBp, Bp1dError> {
    let (units, cap) = scaled_items(sizes, capacity)?;
    Ok(exact_units(&units, cap, node_budget))
}

/// Lower bound on the number of bins: max of the area bound and L2.
pub fn lower_bound(sizes: &[Rational], capacity: Rational) -> Result<usize, Bp1dError> {
    let (units, cap) = scaled_items(sizes, capacity)?;
    Ok(lower_bound_units(&units, cap))
}

pub(crate) fn lower_bound_units(sizes: &[u64], capacity: u64) -> usize {
    let total: u128 = sizes.iter().map(|&s| s as u128).sum();
    let area = total.div_ceil(capacity as u128) as usize;
    let cap = capacity as u128;
    let mut best = area;
    let mut thresholds: Vec<u64> = sizes.iter().copied().filter(|&s| 2 * s <= capacity).collect();
    thresholds.push(0);
    thresholds.sort_unstable();
    thresholds.dedup();
    for k in thresholds {
        let k = k as u128;
        let (mut j1, mut j2, mut j2_sum, mut j3_sum) = (0usize, 0u128, 0u128, 0u128);
        for &s in sizes {
            let s = s as u128;
            if s > cap - k {
                j1 += 1;
            } else if 2 * s > cap {
                j2 += 1;
                j2_sum += s;
            } else if s >= k {
                j3_sum += s;
            }
        }
        let room = j2 * cap - j2_sum;
        let extra = j3_sum.saturating_sub(room).div_ceil(cap);
        best = best.max(j1 + j2 as usize + extra as usize);
    }
    best
}

pub(crate) fn exact_units(sizes: &[u64], capacity: u64, node_budget: u64) -> ExactBp {
    let upper = ffd_units(sizes, capacity);
    let lower = lower_bound_units(sizes, capacity);
    if upper.len() <= lower {
        return ExactBp::Optimal(upper);
    }
    let order = decreasing_order(sizes);
    let mut search = Search {
        sizes,
        capacity,
        order: &order,
        suffix: suffix_sums(sizes, &order),
        free: Vec::new(),
        assign: vec![0; sizes.len()],
        best: upper.len(),
        best_assign: None,
        lower,
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    search.run(0);
    let best = match search.best_assign.take() {
        Some(assign) => group(&assign, search.best),
        None => upper,
    };
    if search.aborted {
        ExactBp::Unknown {
            best,
            lower_bound: lower,
            nodes: search.nodes,
        }
    } else {
        ExactBp::Optimal(best)
    }
}

fn suffix_sums(sizes: &[u64], order: &[usize]) -> Vec<u128> {
    let mut suffix = vec![0u128; order.len() + 1];
    for pos in (0..order.len()).rev() {
        suffix[pos] = suffix[pos + 1] + sizes[order[pos]] as u128;
    }
    suffix
}

fn group(assign: &[usize], bins: usize) -> Grouping {
    let mut groups = vec![Vec::new(); bins];
    for (item, &b) in assign.iter().enumerate() {
        groups[b].push(item);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

struct Search<'a> {
    sizes: &'a [u64],
    capacity: u64,
    order: &'a [usize],
    suffix: Vec<u128>,
    free: Vec<u64>,
    assign: Vec<usize>,
    best: usize,
    best_assign: Option<Vec<usize>>,
    lower: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Search<'_> {
    fn run(&mut self, pos: usize) {
        if self.aborted || self.best <= self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if pos == self.order.len() {
            if self.free.len() < self.best {
                self.best = self.free.len();
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        let room: u128 = self.free.iter().map(|&f| f as u128).sum();
        let overflow = self.suffix[pos].saturating_sub(room);
        let needed = self.free.len() + overflow.div_ceil(self.capacity as u128) as usize;
        if needed >= self.best {
            return;
        }
        let item = self.order[pos];
        let size = self.sizes[item];
        let mut tried: Vec<u64> = Vec::new();
        for b in 0..self.free.len() {
            let f = self.free[b];
            if f < size || tried.contains(&f) {
                continue;
            }
            tried.push(f);
            self.free[b] -= size;
            self.assign[item] = b;
            self.run(pos + 1);
            self.free[b] += size;
        }
        if self.free.len() + 1 < self.best {
            self.free.push(self.capacity - size);
            self.assign[item] = self.free.len() - 1;
            self.run(pos + 1);
            self.free.pop();
        }
    }
}
