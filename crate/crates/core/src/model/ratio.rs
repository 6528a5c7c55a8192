//! Exact comparisons between integers and rational fractions of integers.
//!
//! Every threshold test is done by cross-multiplication in `u128`/`i128`,
//! never in floating point.

use super::Rational;

/// `value <= fraction * whole`. Negative fractions compare as zero.
pub fn le_fraction_of(value: u128, fraction: Rational, whole: u128) -> bool {
    let (num, den) = parts(fraction);
    value * den <= num * whole
}

/// `value < fraction * whole`.
pub fn lt_fraction_of(value: u128, fraction: Rational, whole: u128) -> bool {
    let (num, den) = parts(fraction);
    value * den < num * whole
}

/// `value >= fraction * whole`.
pub fn ge_fraction_of(value: u128, fraction: Rational, whole: u128) -> bool {
    !lt_fraction_of(value, fraction, whole)
}

/// `value > fraction * whole`.
pub fn gt_fraction_of(value: u128, fraction: Rational, whole: u128) -> bool {
    !le_fraction_of(value, fraction, whole)
}

/// `numer / denom` as a reduced rational. Panics if `denom == 0` or either
/// side does not fit `i64`.
pub fn ratio_of(numer: u128, denom: u128) -> Rational {
    let n = i64::try_from(numer).expect("numerator exceeds i64");
    let d = i64::try_from(denom).expect("denominator exceeds i64");
    Rational::new(n, d)
}

pub fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

fn parts(fraction: Rational) -> (u128, u128) {
    let num = (*fraction.numer()).max(0) as u128;
    let den = *fraction.denom() as u128;
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirds_compare_exactly() {
        let third = Rational::new(1, 3);
        assert!(le_fraction_of(3, third, 9));
        assert!(!lt_fraction_of(3, third, 9));
        assert!(gt_fraction_of(4, third, 10));
        assert!(lt_fraction_of(3, third, 10));
        assert!(ge_fraction_of(4, third, 12));
    }

    #[test]
    fn ratio_reduces() {
        assert_eq!(ratio_of(6, 8), Rational::new(3, 4));
    }
}
