use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{SolutionCell, SpernerError};
use crate::rational::{int, Rational};
use crate::simplex::{adjacency, label, Adjacency};
use crate::utility::{lipschitz_constant, preference, UtilityProfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyReport {
    /// Recomputed preferences at the vertices form a bijection player -> piece
    /// that matches the reported colors.
    pub valid: bool,
    /// Worst envy under the allocation, over every vertex of the cell used as the cut.
    pub max_envy: Rational,
    /// `K (d + 1) / N`.
    pub bound: Rational,
    /// `preferred[player]`: piece that player prefers at the vertex they control.
    pub preferred: Vec<usize>,
}

impl EnvyReport {
    pub fn within_bound(&self) -> bool {
        self.max_envy <= self.bound
    }
}

pub fn verify_envy_free(cell: &SolutionCell, profile: &UtilityProfile) -> Result<EnvyReport, SpernerError> {
    let d = profile.dim();
    if cell.vertices.len() != d + 1 || cell.permutation.len() != d + 1 || cell.colors.len() != d + 1 {
        return Err(SpernerError::Dimension { expected: d + 1, found: cell.vertices.len() });
    }
    if let Some(v) = cell.vertices.iter().find(|v| v.dim() != d) {
        return Err(SpernerError::Dimension { expected: d, found: v.dim() });
    }
    for (i, x) in cell.vertices.iter().enumerate() {
        if cell.vertices[i + 1..].iter().any(|y| adjacency(x, y) != Adjacency::AffineAdjacent) {
            return Err(SpernerError::NotAdjacent);
        }
    }

    let mut preferred = vec![usize::MAX; d + 1];
    let mut valid = true;
    for (v, &color) in cell.vertices.iter().zip(&cell.colors) {
        let player = label(v);
        if preferred[player] != usize::MAX {
            valid = false;
            continue;
        }
        preferred[player] = preference(profile, player, v);
        valid &= preferred[player] == color;
    }
    let mut taken = vec![false; d + 1];
    for &piece in &preferred {
        if piece > d || taken[piece] {
            valid = false;
        } else {
            taken[piece] = true;
        }
    }
    valid &= preferred == cell.permutation;

    let mut max_envy = Rational::zero();
    for cut in &cell.vertices {
        for (player, &piece) in cell.permutation.iter().enumerate() {
            let values = profile.piece_values(player, cut);
            let own = values.get(piece).copied().unwrap_or_else(Rational::zero);
            let best = values.iter().copied().max().unwrap();
            if best - own > max_envy {
                max_envy = best - own;
            }
        }
    }
    let bound = lipschitz_constant(profile) * int((d + 1) as i128) / int(i128::from(cell.n));
    Ok(EnvyReport { valid, max_envy, bound, preferred })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::BarycentricPoint;
    use crate::sperner::{search_dnc, ColoringOracle, ProfileColoring};

    #[test]
    fn uniform_center_cell_is_within_bound() {
        let profile = UtilityProfile::uniform(2);
        for n in [16, 30, 64] {
            let mut oracle = ColoringOracle::new(ProfileColoring::new(profile.clone(), n));
            let solution = match search_dnc(&mut oracle) {
                Ok(s) => s,
                Err(_) => crate::sperner::brute_force_search(&mut oracle, u128::MAX).unwrap().remove(0),
            };
            let report = verify_envy_free(&solution, &profile).unwrap();
            assert!(report.valid);
            // vertices differ from the cut by at most one unit per piece
            assert!(report.max_envy <= int(2) / int(i128::from(n)));
            assert!(report.within_bound());
        }
    }

    #[test]
    fn repeated_colors_are_invalid() {
        let profile = UtilityProfile::uniform(2);
        let mut oracle = ColoringOracle::new(ProfileColoring::new(profile.clone(), 16));
        let mut solution = search_dnc(&mut oracle).unwrap();
        assert!(verify_envy_free(&solution, &profile).unwrap().valid);
        solution.colors[1] = solution.colors[0];
        assert!(!verify_envy_free(&solution, &profile).unwrap().valid);
    }

    #[test]
    fn far_vertices_are_rejected() {
        let profile = UtilityProfile::uniform(2);
        let mut oracle = ColoringOracle::new(ProfileColoring::new(profile.clone(), 16));
        let mut solution = search_dnc(&mut oracle).unwrap();
        solution.vertices[0] = BarycentricPoint::new(vec![16, 0, 0]);
        assert_eq!(verify_envy_free(&solution, &profile), Err(SpernerError::NotAdjacent));
    }
}
