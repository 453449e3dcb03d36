//! Signed and mod-2 indices of regions.

use alloc::vec::Vec;

use super::{Coloring, ColoringOracle, Region, SpernerError};
use crate::simplex::BaseCell;

/// `+1` for an edge colored `0 -> 1`, `-1` for `1 -> 0`, else `0`.
pub fn sign_of_edge(from: usize, to: usize) -> i64 {
    match (from, to) {
        (0, 1) => 1,
        (1, 0) => -1,
        _ => 0,
    }
}

/// Sign of a 2D cell whose vertex colors are listed in construction order:
/// `+1` when `0, 1, 2` appear clockwise, `-1` counterclockwise, `0` otherwise.
pub fn sign_of_cell_2d(colors: [usize; 3], clockwise: bool) -> i64 {
    let cw = if clockwise { colors } else { [colors[0], colors[2], colors[1]] };
    sign_of_edge(cw[0], cw[1]) + sign_of_edge(cw[1], cw[2]) + sign_of_edge(cw[2], cw[0])
}

/// Signed 2D index: the sum of edge signs along the clockwise boundary.
pub fn index_2d<C: Coloring>(region: &Region, oracle: &mut ColoringOracle<C>) -> Result<i64, SpernerError> {
    let cycle = region.boundary_cycle_2d();
    let colors = cycle.iter().map(|p| oracle.color_at_cube(p)).collect::<Result<Vec<_>, _>>()?;
    let m = colors.len();
    Ok((0..m).map(|k| sign_of_edge(colors[k], colors[(k + 1) % m])).sum())
}

/// Sum of cell signs over the region (the interior form of the 2D index).
pub fn cell_sign_sum_2d<C: Coloring>(region: &Region, oracle: &mut ColoringOracle<C>) -> Result<i64, SpernerError> {
    let mut total = 0;
    for cell in region.cells() {
        let colors = cell_colors(&cell, oracle)?;
        total += sign_of_cell_2d([colors[0], colors[1], colors[2]], cell.is_clockwise_2d());
    }
    Ok(total)
}

/// Parity of the boundary `(d - 1)`-cells colored exactly `{0, .., d - 1}`.
pub fn index_mod2_boundary<C: Coloring>(region: &Region, oracle: &mut ColoringOracle<C>) -> Result<u8, SpernerError> {
    let d = region.dim();
    let mut parity = 0u8;
    for face in region.boundary_faces() {
        let mut seen = 0u64;
        for v in &face {
            seen |= 1 << oracle.color_at_cube(v)?;
        }
        if seen == (1u64 << d) - 1 {
            parity ^= 1;
        }
    }
    Ok(parity)
}

/// Parity of the fully colored cells of the region.
pub fn cell_index_mod2<C: Coloring>(region: &Region, oracle: &mut ColoringOracle<C>) -> Result<u8, SpernerError> {
    let d = region.dim();
    let mut parity = 0u8;
    for cell in region.cells() {
        let mut seen = 0u64;
        for c in cell_colors(&cell, oracle)? {
            seen |= 1 << c;
        }
        if seen == (1u64 << (d + 1)) - 1 {
            parity ^= 1;
        }
    }
    Ok(parity)
}

/// The index used by the search: signed in 2D, parity otherwise.
pub fn region_index<C: Coloring>(region: &Region, oracle: &mut ColoringOracle<C>) -> Result<i64, SpernerError> {
    if region.dim() == 2 {
        index_2d(region, oracle)
    } else {
        index_mod2_boundary(region, oracle).map(i64::from)
    }
}

pub(crate) fn cell_colors<C: Coloring>(
    cell: &BaseCell,
    oracle: &mut ColoringOracle<C>,
) -> Result<Vec<usize>, SpernerError> {
    cell.cube_vertices().iter().map(|v| oracle.color_at_cube(&v.coords)).collect()
}
