//! The three-player moving-knife fixture and its perturbed family `C_x`.
//!
//! Values are unnormalised segment masses; only per-player comparisons matter.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{half, tenth, PiecewiseDensity, UtilityError, UtilityProfile};
use crate::rational::{int, Rational};

/// Shared utility of players A and B.
///
/// | segment     | mass |
/// |-------------|------|
/// | [0, 1/10]   | 0    |
/// | [1/10, 3/10]| 2    |
/// | [3/10, 4/10]| 100  |
/// | [4/10, 8/10]| 2    |
/// | [8/10, 9/10]| 100  |
/// | [9/10, 1]   | 0    |
pub fn fixture_ab() -> PiecewiseDensity {
    let bps = vec![int(0), tenth(1), tenth(3), tenth(4), tenth(8), tenth(9), int(1)];
    let masses = vec![int(0), int(2), int(100), int(2), int(100), int(0)];
    PiecewiseDensity::from_masses(bps, masses).unwrap()
}

/// Player C: masses `100 - delta, 2, 98, 4, 0` on
/// `[0, 1/10], [1/10, 3/10], [3/10, 4/10], [4/10, 6/10], [6/10, 1]`.
/// C shouts at `3/10 + delta / 1960`.
pub fn fixture_c(delta: Rational) -> PiecewiseDensity {
    let bps = vec![int(0), tenth(1), tenth(3), tenth(4), tenth(6), int(1)];
    let masses = vec![int(100) - delta, int(2), int(98), int(4), int(0)];
    PiecewiseDensity::from_masses(bps, masses).unwrap()
}

/// Variant of [`fixture_c`] with mass 2 on `[4/10, 5/10]` and nothing after.
/// C then shouts already at `1/5 + delta / 20`.
pub fn literal_c(delta: Rational) -> PiecewiseDensity {
    let bps = vec![int(0), tenth(1), tenth(3), tenth(4), tenth(5), int(1)];
    let masses = vec![int(100) - delta, int(2), int(98), int(2), int(0)];
    PiecewiseDensity::from_masses(bps, masses).unwrap()
}

/// `(u_A, u_B, u_C)`.
pub fn fixture_profile(delta: Rational) -> UtilityProfile {
    UtilityProfile::new_allow_zero(vec![fixture_ab(), fixture_ab(), fixture_c(delta)]).unwrap()
}

/// `C_x`: C with density raised by 1/2 on `(x - delta, x)` and lowered by 1/2
/// on `(x, x + delta)`. Total mass is unchanged; C_x shouts exactly at `x`.
pub fn adversary_c(x: Rational, delta: Rational) -> Result<PiecewiseDensity, UtilityError> {
    let (lo, hi) = (x - delta, x + delta);
    if delta <= Rational::zero() || lo < tenth(1) || hi > tenth(3) {
        return Err(UtilityError::Perturbation(lo, hi));
    }
    let base = fixture_c(delta);
    // density of the base on [1/10, 3/10]
    let mid = base.values()[1];
    let mut bps: Vec<Rational> = vec![int(0), tenth(1)];
    let mut values: Vec<Rational> = vec![base.values()[0]];
    if lo > tenth(1) {
        bps.push(lo);
        values.push(mid);
    }
    bps.extend([x, hi]);
    values.extend([mid + half(), mid - half()]);
    if hi < tenth(3) {
        bps.push(tenth(3));
        values.push(mid);
    }
    bps.extend_from_slice(&base.breakpoints()[3..]);
    values.extend_from_slice(&base.values()[2..]);
    PiecewiseDensity::new_allow_zero(bps, values)
}

/// `(u_A, u_B, C_x)`.
pub fn adversary_profile(x: Rational, delta: Rational) -> Result<UtilityProfile, UtilityError> {
    UtilityProfile::new_allow_zero(vec![fixture_ab(), fixture_ab(), adversary_c(x, delta)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn perturbation_conserves_mass_and_shifts_bump() {
        let (x, delta) = (tenth(2), rat(1, 100));
        let cx = adversary_c(x, delta).unwrap();
        let c = fixture_c(delta);
        assert_eq!(cx.total(), c.total());
        assert_eq!(cx.eval_interval(x - delta, x).unwrap(), c.eval_interval(x - delta, x).unwrap() + delta / int(2));
        assert_eq!(cx.eval_interval(x - delta, x + delta).unwrap(), c.eval_interval(x - delta, x + delta).unwrap());
        assert_eq!(cx.eval_interval(int(0), tenth(1)).unwrap(), int(100) - delta);
        assert_eq!(
            cx.eval_interval(x - delta / int(2), half()).unwrap()
                - c.eval_interval(x - delta / int(2), half()).unwrap(),
            -delta / int(4)
        );
    }

    #[test]
    fn perturbation_window_is_checked() {
        assert!(adversary_c(tenth(1), rat(1, 100)).is_err());
        assert!(adversary_c(tenth(3), rat(1, 100)).is_err());
        assert!(adversary_c(tenth(2), int(0)).is_err());
        // window touching the segment ends is allowed
        let edge = adversary_c(rat(11, 100), rat(1, 100)).unwrap();
        assert_eq!(edge.breakpoints()[1], tenth(1));
        assert_eq!(edge.breakpoints()[2], rat(11, 100));
    }

    #[test]
    fn fixture_table_values() {
        let a = fixture_ab();
        assert_eq!(a.eval_interval(int(0), tenth(1)).unwrap(), int(0));
        assert_eq!(a.eval_interval(tenth(4), tenth(8)).unwrap(), int(2));
        assert_eq!(a.total(), int(204));
        let c = fixture_c(rat(1, 1000));
        assert_eq!(c.eval_interval(int(0), tenth(1)).unwrap(), int(100) - rat(1, 1000));
        assert_eq!(literal_c(int(0)).total(), int(202));
    }
}
