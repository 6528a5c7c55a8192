use super::exact::{exact_units, ExactBp};
use super::{decreasing_order, scaled_items, Bp1dError, Grouping, DEFAULT_NODE_BUDGET};
use crate::model::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AptasOutcome {
    pub groups: Grouping,
    /// `max(area bound, number of items above half the capacity)`.
    pub lower_bound: usize,
    /// `groups.len() <= (1 + epsilon) * lower_bound + 1` holds. When false the
    /// packing may still be within the guarantee of the unknown optimum; the
    /// caller must treat it as uncertified.
    pub certified: bool,
    /// The rounded large-item instance was solved to optimality.
    pub rounded_exact: bool,
    pub large_items: usize,
    /// Items per linear-grouping class.
    pub class_size: usize,
}

/// Asymptotic scheme after de la Vega and Lueker.
///
/// With `d = epsilon / 2`: items above `d * capacity` are large. They are
/// sorted, cut into classes of `ceil(d^2 * L)` consecutive items, the first
/// class packed one item per bin and every other item rounded up to the
/// largest of its class. The rounded instance has few distinct sizes and is
/// packed exactly, then small items are added first fit. The result uses at
/// most `(1 + epsilon) * OPT + 1` bins when the rounded packing is exact.
pub fn aptas_bp(sizes: &[Rational], capacity: Rational, epsilon: Rational) -> Result<AptasOutcome, Bp1dError> {
    if epsilon <= Rational::from_integer(0) || epsilon > Rational::from_integer(1) {
        return Err(Bp1dError::InvalidEpsilon(epsilon));
    }
    let (units, cap) = scaled_items(sizes, capacity)?;
    let d = epsilon / 2;
    let (dn, dd) = (*d.numer() as u128, *d.denom() as u128);
    let is_large = |s: u64| s as u128 * dd > dn * cap as u128;

    let order = decreasing_order(&units);
    let large: Vec<usize> = order.iter().copied().filter(|&i| is_large(units[i])).collect();
    let small: Vec<usize> = order.iter().copied().filter(|&i| !is_large(units[i])).collect();

    let count = large.len() as u128;
    let class_size = if large.is_empty() {
        0
    } else {
        (dn * dn * count).div_ceil(dd * dd).max(1) as usize
    };

    let mut groups: Grouping = Vec::new();
    let mut rounded_exact = true;
    if !large.is_empty() {
        let (head, tail) = large.split_at(class_size.min(large.len()));
        groups.extend(head.iter().map(|&i| vec![i]));
        let rounded: Vec<u64> = tail
            .chunks(class_size)
            .flat_map(|class| std::iter::repeat_n(units[class[0]], class.len()))
            .collect();
        let packed = exact_units(&rounded, cap, DEFAULT_NODE_BUDGET);
        rounded_exact = matches!(packed, ExactBp::Optimal(_));
        for g in packed.groups() {
            groups.push(g.iter().map(|&r| tail[r]).collect());
        }
    }

    let mut free: Vec<u64> = groups
        .iter()
        .map(|g| cap - g.iter().map(|&i| units[i]).sum::<u64>())
        .collect();
    for i in small {
        match free.iter().position(|&f| f >= units[i]) {
            Some(b) => {
                free[b] -= units[i];
                groups[b].push(i);
            }
            None => {
                free.push(cap - units[i]);
                groups.push(vec![i]);
            }
        }
    }

    let total: u128 = units.iter().map(|&s| s as u128).sum();
    let halves = units.iter().filter(|&&s| 2 * s > cap).count();
    let lower_bound = (total.div_ceil(cap as u128) as usize).max(halves);
    let (en, ed) = (*epsilon.numer() as u128, *epsilon.denom() as u128);
    let certified = groups.len() as u128 * ed <= (ed + en) * lower_bound as u128 + ed;

    Ok(AptasOutcome {
        groups,
        lower_bound,
        certified,
        rounded_exact,
        large_items: large.len(),
        class_size,
    })
}
