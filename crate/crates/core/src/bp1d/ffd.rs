use super::{decreasing_order, scaled_items, Bp1dError, Grouping};
use crate::model::Rational;

/// First Fit Decreasing. Uses at most `floor(3/2 * OPT)` bins.
///
/// ```
/// use dbp_core::bp1d::ffd;
/// use dbp_core::Rational;
/// let sizes: Vec<Rational> = [5, 4, 3, 3, 2, 1].map(Rational::from_integer).to_vec();
/// let groups = ffd(&sizes, Rational::from_integer(6)).unwrap();
/// assert_eq!(groups.len(), 3);
/// ```
pub fn ffd(sizes: &[Rational], capacity: Rational) -> Result<Grouping, Bp1dError> {
    let (units, cap) = scaled_items(sizes, capacity)?;
    Ok(ffd_units(&units, cap))
}

pub(crate) fn ffd_units(sizes: &[u64], capacity: u64) -> Grouping {
    let mut groups: Grouping = Vec::new();
    let mut free: Vec<u64> = Vec::new();
    for i in decreasing_order(sizes) {
        match free.iter().position(|&f| f >= sizes[i]) {
            Some(b) => {
                free[b] -= sizes[i];
                groups[b].push(i);
            }
            None => {
                free.push(capacity - sizes[i]);
                groups.push(vec![i]);
            }
        }
    }
    groups
}
