use alloc::format;
use alloc::vec::Vec;

use super::index::region_index;
use super::{invariant, Coloring, ColoringOracle, Region, SolutionCell, SpernerError};
use crate::simplex::{cells_in_cube, CubePoint};

/// Divide and conquer: halve the region along the axes in turn, keeping a half
/// with nonzero index (odd parity for `d >= 3`), until a unit cube remains,
/// then scan its cells.
pub fn search_dnc<C: Coloring>(oracle: &mut ColoringOracle<C>) -> Result<SolutionCell, SpernerError> {
    let (d, n) = (oracle.dim(), oracle.scale());
    if n == 0 {
        return Err(SpernerError::EmptyGrid);
    }
    if !n.is_power_of_two() {
        return Err(SpernerError::NotPowerOfTwo(n));
    }
    let signed = d == 2;
    let mut region = Region::full(d, n);
    let mut index = region_index(&region, oracle)?;
    if index == 0 {
        return Err(invariant(&region, "the whole simplex has zero index"));
    }
    let mut next_axis = 0;
    while !region.is_unit() {
        let axis = (0..d).map(|k| (next_axis + k) % d).find(|&a| region.extent(a) > 1).unwrap();
        next_axis = (axis + 1) % d;
        let (low, high) = region.split(axis, region.lo[axis] + region.extent(axis) / 2);
        let low_index = region_index(&low, oracle)?;
        let high_index = region_index(&high, oracle)?;
        let consistent = if signed { low_index + high_index == index } else { low_index ^ high_index == index };
        if !consistent {
            return Err(invariant(
                &region,
                format!("halves have indices {low_index} and {high_index}, parent has {index}"),
            ));
        }
        (region, index) = if low_index != 0 {
            (low, low_index)
        } else if high_index != 0 {
            (high, high_index)
        } else {
            return Err(invariant(&region, "both halves have zero index"));
        };
    }
    for cell in cells_in_cube(&CubePoint::new(region.lo.clone())) {
        if !cell.in_simplex(n) {
            continue;
        }
        if let Some(solution) = SolutionCell::from_cell(&cell, oracle)? {
            return Ok(solution);
        }
    }
    Err(invariant(&region, "no fully colored cell in the final unit cube"))
}

/// Cells the brute force visits: `N^d d!`.
pub fn required_budget(d: usize, n: u32) -> u128 {
    let factorial: u128 = (1..=d as u128).product();
    u128::from(n).saturating_pow(d as u32).saturating_mul(factorial)
}

/// Every fully colored cell, in region cell order. Refuses to run when
/// `N^d d!` exceeds `budget`.
pub fn brute_force_search<C: Coloring>(
    oracle: &mut ColoringOracle<C>,
    budget: u128,
) -> Result<Vec<SolutionCell>, SpernerError> {
    let (d, n) = (oracle.dim(), oracle.scale());
    if n == 0 {
        return Err(SpernerError::EmptyGrid);
    }
    let required = required_budget(d, n);
    if required > budget {
        return Err(SpernerError::Budget { required, budget });
    }
    let mut out = Vec::new();
    for cell in Region::full(d, n).cells() {
        if let Some(solution) = SolutionCell::from_cell(&cell, oracle)? {
            out.push(solution);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sperner::index::{cell_sign_sum_2d, index_2d};
    use crate::sperner::{random_sperner_coloring, verify_envy_free, ProfileColoring};
    use crate::utility::random::random_profile;
    use crate::utility::UtilityProfile;
    use alloc::vec;

    #[test]
    fn uniform_solution_is_central() {
        let n = 16;
        let mut oracle = ColoringOracle::new(ProfileColoring::new(UtilityProfile::uniform(2), n));
        let solution = search_dnc(&mut oracle).unwrap();
        let brute = brute_force_search(&mut oracle, u128::MAX).unwrap();
        assert!(brute.contains(&solution));
        for v in &solution.vertices {
            for &c in v.coords() {
                assert!((c as i64 - (n as i64) / 3).abs() <= 2, "{v:?}");
            }
        }
    }

    #[test]
    fn smallest_instance_has_a_solution() {
        let mut oracle = ColoringOracle::new(random_sperner_coloring(2, 2, 0));
        assert!(!brute_force_search(&mut oracle, 100).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let mut oracle = ColoringOracle::new(random_sperner_coloring(3, 8, 0));
        assert_eq!(brute_force_search(&mut oracle, 10), Err(SpernerError::Budget { required: 3072, budget: 10 }));
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut oracle = ColoringOracle::new(random_sperner_coloring(2, 6, 0));
        assert_eq!(search_dnc(&mut oracle), Err(SpernerError::NotPowerOfTwo(6)));
    }

    #[test]
    fn brute_force_count_bounds_index() {
        for seed in 0..20 {
            let mut oracle = ColoringOracle::new(random_sperner_coloring(2, 8, seed));
            let whole = Region::full(2, 8);
            let idx = index_2d(&whole, &mut oracle).unwrap();
            let all = brute_force_search(&mut oracle, u128::MAX).unwrap();
            assert!(all.len() as i64 >= idx.abs());
            for s in &all {
                let c = &s.colors;
                assert_ne!(crate::sperner::sign_of_cell_2d([c[0], c[1], c[2]], s.cell.is_clockwise_2d()), 0);
            }
            assert_eq!(cell_sign_sum_2d(&whole, &mut oracle).unwrap(), idx);
        }
    }

    #[test]
    fn dnc_agrees_with_brute_force() {
        for (d, n) in [(2usize, 16u32), (3, 8), (4, 4)] {
            for seed in 0..8 {
                let mut oracle = ColoringOracle::new(random_sperner_coloring(d, n, seed));
                let solution = search_dnc(&mut oracle).unwrap();
                assert!(brute_force_search(&mut oracle, u128::MAX).unwrap().contains(&solution));
            }
        }
    }

    #[test]
    fn random_profiles_give_envy_free_cells() {
        for seed in 0..10 {
            let profile = random_profile(3, seed);
            let mut oracle = ColoringOracle::new(ProfileColoring::new(profile.clone(), 8));
            let solution = search_dnc(&mut oracle).unwrap();
            let report = verify_envy_free(&solution, &profile).unwrap();
            assert!(report.valid);
            assert!(report.within_bound());
            let mut pieces = solution.permutation.clone();
            pieces.sort();
            assert_eq!(pieces, vec![0, 1, 2, 3]);
        }
    }
}
