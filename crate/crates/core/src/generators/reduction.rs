use super::GenError;
use crate::model::{Instance, Task};

/// Largest padded triple count accepted by [`gen_3part_squares`].
const MAX_PADDED_TRIPLES: u64 = 10_000;

/// Facts about a 3-Partition input `a_1..a_3z` with target `B = sum / z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionInfo {
    pub z: usize,
    pub target: u64,
    /// Every number satisfies `B/4 < a < B/2`.
    pub range_ok: bool,
}

fn validate(numbers: &[u64]) -> Result<ThreePartitionInfo, GenError> {
    if numbers.is_empty() || !numbers.len().is_multiple_of(3) {
        return Err(GenError::InvalidNumbers(format!(
            "need a positive multiple of three numbers, got {}",
            numbers.len()
        )));
    }
    if numbers.contains(&0) {
        return Err(GenError::InvalidNumbers("numbers must be positive".into()));
    }
    let z = numbers.len() / 3;
    let sum: u128 = numbers.iter().map(|&a| a as u128).sum();
    if !sum.is_multiple_of(z as u128) {
        return Err(GenError::InvalidNumbers(format!(
            "sum {sum} is not divisible by z = {z}"
        )));
    }
    let target = u64::try_from(sum / z as u128)
        .map_err(|_| GenError::InvalidNumbers("target does not fit 64 bits".into()))?;
    let range_ok = numbers
        .iter()
        .all(|&a| 4 * a as u128 > target as u128 && (2 * a as u128) < target as u128);
    Ok(ThreePartitionInfo { z, target, range_ok })
}

/// One bin with `T = B`, `C = z` and a task of width `a_i`, height 1 per
/// number. It fits in one bin exactly when the numbers split into `z` triples
/// of sum `B` (given the range condition).
///
/// ```
/// use dbp_core::generators::gen_3part_short;
/// let (inst, info) = gen_3part_short(&[4, 5, 6, 4, 5, 6]).unwrap();
/// assert_eq!((inst.horizon(), inst.capacity()), (15, 2));
/// assert!(info.range_ok);
/// ```
pub fn gen_3part_short(numbers: &[u64]) -> Result<(Instance, ThreePartitionInfo), GenError> {
    let info = validate(numbers)?;
    if let Some(&a) = numbers.iter().find(|&&a| a > info.target) {
        return Err(GenError::InvalidNumbers(format!(
            "number {a} exceeds the target {}",
            info.target
        )));
    }
    let tasks = numbers
        .iter()
        .enumerate()
        .map(|(i, &a)| Task::new(i as u64 + 1, a, 1))
        .collect();
    let instance = Instance::new(info.target, info.z as u64, tasks)?;
    Ok((instance, info))
}

/// Parameters of the square reduction, kept for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeungParams {
    pub original_triples: usize,
    /// Triples after padding with dummy triples; `x(x+1) - 1`.
    pub triples: u64,
    pub x: u64,
    /// Factor all numbers were multiplied by before building squares.
    pub scale: u64,
    /// Scaled target `B`.
    pub target: u64,
    pub dummy_triples: u64,
    /// `3B^3 + B`.
    pub unit: u64,
    /// Bin side `x(x+2) * unit`.
    pub side: u64,
    pub partition_squares: u64,
    pub enforcer_squares: u64,
    pub enforcer_side: u64,
    pub warnings: Vec<String>,
}

impl LeungParams {
    /// Arithmetic identities the construction relies on.
    pub fn identities_hold(&self) -> bool {
        let x = self.x as u128;
        let n = self.triples as u128;
        let b = self.target as u128;
        x * (x + 1) - 1 == n
            && x * (x + 2) == n + x + 1
            && self.unit as u128 == 3 * b * b * b + b
            && self.side as u128 == (n + x + 1) * self.unit as u128
            && self.partition_squares as u128 == 3 * n
            && self.enforcer_squares as u128 == 2 * n / 3
    }
}

/// Leung-style reduction from 3-Partition to packing squares in one square bin.
///
/// Numbers are scaled by 4 (by 8 when 4 leaves no integer room above `B/4`)
/// so dummy triples `(B/2 - 2, B/4 + 1, B/4 + 1)` are integral. Dummies pad
/// the triple count `n` to the next `x(x+1) - 1` with `x >= 2`. With
/// `D = 3B^3 + B` and `N = x(x+2) D` the squares are
///
/// - structure: one of side `nD`, `x` of side `(x+1)D`, `x+2` of side `xD`
/// - partition: side `B^3 + a` for every scaled number
/// - enforcers: `floor(2n/3)` of side `3B^3`
///
/// `2n/3` is never integral when `n = x(x+1) - 1`, so the count is floored and
/// a warning recorded.
pub fn gen_3part_squares(numbers: &[u64]) -> Result<(Instance, LeungParams), GenError> {
    let info = validate(numbers)?;
    let mut warnings = Vec::new();
    if !info.range_ok {
        warnings.push("numbers violate B/4 < a < B/2".to_string());
    }
    let roomy = numbers
        .iter()
        .all(|&a| 4 * a as u128 > info.target as u128 + 1);
    let scale: u64 = if roomy { 4 } else { 8 };
    let overflow = || GenError::InvalidNumbers("numbers too large for the square reduction".into());
    let target = info.target.checked_mul(scale).ok_or_else(overflow)?;

    let z = info.z as u64;
    let x = (2u64..)
        .find(|&x| x * (x + 1) > z)
        .expect("x grows without bound");
    let n = x * (x + 1) - 1;
    if n > MAX_PADDED_TRIPLES {
        return Err(GenError::InvalidParams(format!(
            "{z} triples pad to {n}, above the limit {MAX_PADDED_TRIPLES}"
        )));
    }
    let dummy_triples = n - z;
    let mut scaled: Vec<u64> = numbers.iter().map(|&a| a * scale).collect();
    for _ in 0..dummy_triples {
        scaled.extend([target / 2 - 2, target / 4 + 1, target / 4 + 1]);
    }

    let cube = target
        .checked_mul(target)
        .and_then(|v| v.checked_mul(target))
        .ok_or_else(overflow)?;
    let unit = cube
        .checked_mul(3)
        .and_then(|v| v.checked_add(target))
        .ok_or_else(overflow)?;
    let side = (x * (x + 2)).checked_mul(unit).ok_or_else(overflow)?;
    let enforcers = 2 * n / 3;
    if (2 * n) % 3 != 0 {
        warnings.push(format!(
            "enforcer count 2n/3 = {}/3 is not integral; using {enforcers}",
            2 * n
        ));
    }

    let mut sides: Vec<u64> = vec![n * unit];
    sides.extend(std::iter::repeat_n((x + 1) * unit, x as usize));
    sides.extend(std::iter::repeat_n(x * unit, x as usize + 2));
    sides.extend(scaled.iter().map(|&a| cube + a));
    sides.extend(std::iter::repeat_n(3 * cube, enforcers as usize));
    let tasks = sides
        .iter()
        .enumerate()
        .map(|(i, &s)| Task::new(i as u64 + 1, s, s))
        .collect();
    let instance = Instance::new(side, side, tasks)?;

    Ok((
        instance,
        LeungParams {
            original_triples: info.z,
            triples: n,
            x,
            scale,
            target,
            dummy_triples,
            unit,
            side,
            partition_squares: 3 * n,
            enforcer_squares: enforcers,
            enforcer_side: 3 * cube,
            warnings,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_reduction_rejects_bad_input() {
        assert!(gen_3part_short(&[1, 2]).is_err());
        assert!(gen_3part_short(&[1, 2, 3, 4, 5, 6]).is_err());
        assert!(gen_3part_short(&[0, 2, 4]).is_err());
        let (_, info) = gen_3part_short(&[1, 1, 10]).unwrap();
        assert!(!info.range_ok);
    }

    #[test]
    fn smallest_padding_uses_x_two() {
        let (inst, p) = gen_3part_squares(&[4, 5, 6]).unwrap();
        assert_eq!((p.x, p.triples, p.dummy_triples), (2, 5, 4));
        assert!(p.identities_hold());
        assert_eq!(p.side, 8 * p.unit);
        let big: Vec<u64> = inst.tasks()[..7].iter().map(|t| t.width / p.unit).collect();
        assert_eq!(big, vec![5, 3, 3, 2, 2, 2, 2]);
        assert_eq!(inst.len(), 7 + 15 + 3);
        assert_eq!(p.warnings.len(), 1);
    }
}
