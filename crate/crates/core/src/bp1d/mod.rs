//! One-dimensional bin packing.
//!
//! Sizes and capacities are exact rationals; internally everything is scaled
//! to a common denominator and handled as integers. Results are groupings:
//! one `Vec` of item indices per bin.

mod aptas;
mod exact;
mod ffd;
mod mkp;

pub use aptas::{aptas_bp, AptasOutcome};
pub use exact::{exact_bp, lower_bound, ExactBp};
pub use ffd::ffd;
pub use mkp::{mkp_pack_all, mkp_pack_all_with_budget, MkpOutcome};

use num_integer::Integer;

use crate::model::Rational;

/// Item indices per bin.
pub type Grouping = Vec<Vec<usize>>;

/// Node budget used when a caller does not pass one.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Bp1dError {
    #[error("capacity {0} must be positive")]
    InvalidCapacity(Rational),
    #[error("item {index} has size {size}, which must be positive and at most {capacity}")]
    ItemTooLarge {
        index: usize,
        size: Rational,
        capacity: Rational,
    },
    #[error("epsilon {0} must lie in (0, 1]")]
    InvalidEpsilon(Rational),
    #[error("total size {total} exceeds total capacity {capacity} minus slack {slack}")]
    SlackViolated {
        total: Rational,
        capacity: Rational,
        slack: Rational,
    },
    #[error("values are too large to scale to a common integer denominator")]
    Overflow,
}

/// Scales every value by the least common multiple of the denominators.
pub(crate) fn to_units(values: &[Rational]) -> Result<Vec<u64>, Bp1dError> {
    let mut lcm: i128 = 1;
    for v in values {
        lcm = lcm.lcm(&(*v.denom() as i128));
        if lcm > i64::MAX as i128 {
            return Err(Bp1dError::Overflow);
        }
    }
    values
        .iter()
        .map(|v| {
            let scaled = *v.numer() as i128 * (lcm / *v.denom() as i128);
            u64::try_from(scaled).map_err(|_| Bp1dError::Overflow)
        })
        .collect()
}

/// Integer sizes plus capacity, after validating every size.
pub(crate) fn scaled_items(sizes: &[Rational], capacity: Rational) -> Result<(Vec<u64>, u64), Bp1dError> {
    if capacity <= Rational::from_integer(0) {
        return Err(Bp1dError::InvalidCapacity(capacity));
    }
    for (index, &size) in sizes.iter().enumerate() {
        if size <= Rational::from_integer(0) || size > capacity {
            return Err(Bp1dError::ItemTooLarge { index, size, capacity });
        }
    }
    let mut all = sizes.to_vec();
    all.push(capacity);
    let mut units = to_units(&all)?;
    let cap = units.pop().expect("capacity was pushed");
    Ok((units, cap))
}

/// Item order used by every packer: largest first, ties by index.
pub(crate) fn decreasing_order(sizes: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    order
}

/// Checks a grouping covers every item once and respects the capacity.
pub fn grouping_is_valid(sizes: &[Rational], capacity: Rational, groups: &Grouping) -> bool {
    let mut seen = vec![false; sizes.len()];
    for group in groups {
        let mut total = Rational::from_integer(0);
        for &i in group {
            if i >= sizes.len() || seen[i] {
                return false;
            }
            seen[i] = true;
            total += sizes[i];
        }
        if total > capacity {
            return false;
        }
    }
    seen.into_iter().all(|s| s)
}
