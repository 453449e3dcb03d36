//! Exact rationals.
//!
//! `Ratio<i128>` keeps values in lowest terms with a positive denominator.
//! Magnitudes stay far from the `i128` limits for grids up to `2^30` and
//! breakpoints with modest denominators; the workspace builds with overflow
//! checks so an overflow panics instead of silently wrapping.

use core::str::FromStr;

use num_rational::Ratio;

pub type Rational = Ratio<i128>;

/// `num / den` in lowest terms. Panics when `den == 0`.
pub fn rat(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

pub fn int(value: i128) -> Rational {
    Ratio::from_integer(value)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = i128::from_str(num.trim()).ok()?;
        let den = i128::from_str(den.trim()).ok()?;
        if den == 0 {
            return None;
        }
        Some(Ratio::new(num, den))
    } else {
        i128::from_str(text).ok().map(Ratio::from_integer)
    }
}
