use super::{decreasing_order, to_units, Bp1dError, DEFAULT_NODE_BUDGET};
use crate::model::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MkpOutcome {
    /// `assignment[i]` is the bin of item `i`. `reserve_bin` is the bin that
    /// was filled last, after every other bin had been tried.
    Packed { assignment: Vec<usize>, reserve_bin: usize },
    /// Exhaustive search proved no assignment exists.
    Infeasible,
    /// The node budget ran out.
    Unknown { nodes: u64 },
}

/// Packs every item into bins with the given capacities, using
/// [`DEFAULT_NODE_BUDGET`].
pub fn mkp_pack_all(sizes: &[Rational], capacities: &[Rational], slack: Rational) -> Result<MkpOutcome, Bp1dError> {
    mkp_pack_all_with_budget(sizes, capacities, slack, DEFAULT_NODE_BUDGET)
}

/// Packs every item (profit = size) into bins of the given capacities.
///
/// Requires `sum(sizes) <= sum(capacities) - slack` with `slack > 0`. For
/// each candidate reserve bin `j` (capacity at least `slack / K`), an exact
/// search fills the other bins first and overflows into `j`. The search is
/// complete, so the first candidate either succeeds or proves infeasibility.
pub fn mkp_pack_all_with_budget(
    sizes: &[Rational],
    capacities: &[Rational],
    slack: Rational,
    node_budget: u64,
) -> Result<MkpOutcome, Bp1dError> {
    let zero = Rational::from_integer(0);
    if slack <= zero {
        return Err(Bp1dError::InvalidCapacity(slack));
    }
    if let Some(&c) = capacities.iter().find(|&&c| c < zero) {
        return Err(Bp1dError::InvalidCapacity(c));
    }
    for (index, &size) in sizes.iter().enumerate() {
        if size <= zero {
            return Err(Bp1dError::ItemTooLarge {
                index,
                size,
                capacity: zero,
            });
        }
    }
    let total: Rational = sizes.iter().copied().sum();
    let room: Rational = capacities.iter().copied().sum();
    if total > room - slack {
        return Err(Bp1dError::SlackViolated {
            total,
            capacity: room,
            slack,
        });
    }
    if capacities.is_empty() {
        return Ok(if sizes.is_empty() {
            MkpOutcome::Packed {
                assignment: Vec::new(),
                reserve_bin: 0,
            }
        } else {
            MkpOutcome::Infeasible
        });
    }

    let mut all = sizes.to_vec();
    all.extend_from_slice(capacities);
    all.push(slack);
    let units = to_units(&all)?;
    let (item_units, rest) = units.split_at(sizes.len());
    let (cap_units, slack_units) = rest.split_at(capacities.len());
    let per_bin = slack_units[0] as u128;
    let bins = capacities.len() as u128;

    // Some bin always qualifies (the largest holds at least the average), and
    // the search is complete, so the first candidate settles the question.
    let Some(reserve) = (0..capacities.len()).find(|&j| cap_units[j] as u128 * bins >= per_bin) else {
        return Ok(MkpOutcome::Infeasible);
    };
    let order = decreasing_order(item_units);
    let mut bin_order: Vec<usize> = (0..capacities.len()).filter(|&b| b != reserve).collect();
    bin_order.push(reserve);
    let mut search = Search {
        sizes: item_units,
        order: &order,
        bins: &bin_order,
        free: cap_units.to_vec(),
        assign: vec![0; sizes.len()],
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    if search.run(0) {
        Ok(MkpOutcome::Packed {
            assignment: search.assign,
            reserve_bin: reserve,
        })
    } else if search.aborted {
        Ok(MkpOutcome::Unknown { nodes: search.nodes })
    } else {
        Ok(MkpOutcome::Infeasible)
    }
}

struct Search<'a> {
    sizes: &'a [u64],
    order: &'a [usize],
    bins: &'a [usize],
    free: Vec<u64>,
    assign: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Search<'_> {
    fn run(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return false;
        }
        let remaining: u128 = self.order[pos..].iter().map(|&i| self.sizes[i] as u128).sum();
        let room: u128 = self.free.iter().map(|&f| f as u128).sum();
        if remaining > room {
            return false;
        }
        let item = self.order[pos];
        let size = self.sizes[item];
        let mut tried: Vec<u64> = Vec::new();
        for &b in self.bins {
            let f = self.free[b];
            if f < size || tried.contains(&f) {
                continue;
            }
            tried.push(f);
            self.free[b] -= size;
            self.assign[item] = b;
            if self.run(pos + 1) {
                return true;
            }
            self.free[b] += size;
            if self.aborted {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn packs_into_unequal_bins() {
        let sizes = [r(1, 2), r(1, 3), r(1, 4), r(1, 4)];
        let caps = [r(1, 1), r(1, 2)];
        let out = mkp_pack_all(&sizes, &caps, r(1, 18)).unwrap();
        let MkpOutcome::Packed { assignment, .. } = out else {
            panic!("expected a packing, got {out:?}");
        };
        let mut load = [r(0, 1); 2];
        for (i, &b) in assignment.iter().enumerate() {
            load[b] += sizes[i];
        }
        assert!(load[0] <= caps[0] && load[1] <= caps[1]);
    }

    #[test]
    fn proves_infeasibility() {
        // Total fits, but two items above one half cannot share a unit bin
        // and the half bin takes neither.
        let sizes = [r(3, 5), r(3, 5)];
        let caps = [r(1, 1), r(1, 2), r(1, 2)];
        assert_eq!(mkp_pack_all(&sizes, &caps, r(1, 9)).unwrap(), MkpOutcome::Infeasible);
    }

    #[test]
    fn slack_hypothesis_is_checked() {
        let sizes = [r(1, 1)];
        let caps = [r(1, 1)];
        assert!(matches!(
            mkp_pack_all(&sizes, &caps, r(1, 9)),
            Err(Bp1dError::SlackViolated { .. })
        ));
    }
}
