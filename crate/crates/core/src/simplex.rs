//! Barycentric grid geometry and Kuhn's triangulation.
//!
//! Two coordinate systems are used for the same grid points:
//!
//! - barycentric `X = (x_0, .., x_d)`, `x_i >= 0`, `sum x_i = N` (a d-cut);
//! - cube `z = (z_1, .., z_d)` inside the big simplex `N >= z_1 >= .. >= z_d >= 0`,
//!   related by `X = (N - z_1, z_1 - z_2, .., z_{d-1} - z_d, z_d)`.
//!
//! In cube coordinates `z_a` is `N` times the distance from the `a`-th cut to
//! the right end of the cake, so `z` is the cut vector read from the right.
//! Kuhn cells are unit cubes split by permutations of the axes; only the cells
//! whose vertices all stay sorted belong to the big simplex.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("cube point {0:?} is not sorted nonincreasing within [0, {1}]")]
    OutsideSimplex(Vec<u32>, u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0:?} is not a permutation of 0..d")]
    NotPermutation(Vec<usize>),
}

/// A d-cut in barycentric coordinates. The grid scale is the coordinate sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarycentricPoint {
    coords: Vec<u32>,
}

impl BarycentricPoint {
    pub fn new(coords: Vec<u32>) -> Self {
        assert!(coords.len() >= 2, "a cut needs at least two pieces");
        Self { coords }
    }

    /// The `i`-th corner `N e_i` of the `d`-simplex.
    pub fn corner(d: usize, n: u32, i: usize) -> Self {
        let mut coords = vec![0; d + 1];
        coords[i] = n;
        Self { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn scale(&self) -> u64 {
        self.coords.iter().map(|&c| u64::from(c)).sum()
    }

    /// Cut positions scaled by `N`: `0, x_0, x_0 + x_1, .., N`.
    pub fn cut_offsets(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.coords.len() + 1);
        let mut acc = 0u64;
        out.push(0);
        for &c in &self.coords {
            acc += u64::from(c);
            out.push(acc);
        }
        out
    }
}

/// A grid point of the cube `[0, N]^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubePoint {
    pub coords: Vec<u32>,
}

impl CubePoint {
    pub fn new(coords: Vec<u32>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Whether the point lies in the canonical big simplex `N >= z_1 >= .. >= z_d`.
    pub fn in_simplex(&self, n: u32) -> bool {
        in_simplex(&self.coords, n)
    }
}

pub(crate) fn in_simplex(z: &[u32], n: u32) -> bool {
    z.first().map_or(true, |&first| first <= n) && z.windows(2).all(|w| w[0] >= w[1])
}

/// `W(X) = sum i x_i mod (d + 1)`: the player who controls vertex `X`.
pub fn label(x: &BarycentricPoint) -> usize {
    let modulus = x.coords.len() as u64;
    let weight = x
        .coords
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &c)| (acc + (i as u64 % modulus) * (u64::from(c) % modulus)) % modulus);
    weight as usize
}

pub fn cube_to_barycentric(z: &CubePoint, n: u32) -> Result<BarycentricPoint, GeometryError> {
    if !z.in_simplex(n) {
        return Err(GeometryError::OutsideSimplex(z.coords.clone(), n));
    }
    Ok(bary_from_cube(&z.coords, n))
}

pub(crate) fn bary_from_cube(z: &[u32], n: u32) -> BarycentricPoint {
    let d = z.len();
    let mut coords = Vec::with_capacity(d + 1);
    coords.push(n - z[0]);
    for a in 0..d - 1 {
        coords.push(z[a] - z[a + 1]);
    }
    coords.push(z[d - 1]);
    BarycentricPoint { coords }
}

pub fn barycentric_to_cube(x: &BarycentricPoint) -> CubePoint {
    let mut coords = vec![0u32; x.dim()];
    let mut acc = 0u32;
    for i in (1..=x.dim()).rev() {
        acc += x.coords[i];
        coords[i - 1] = acc;
    }
    CubePoint { coords }
}

/// A simplex of Kuhn's triangulation: `v^0 = corner`, `v^i = v^{i-1} + e_{perm[i-1]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseCell {
    pub corner: CubePoint,
    pub perm: Vec<usize>,
}

impl BaseCell {
    pub fn new(corner: CubePoint, perm: Vec<usize>) -> Result<Self, GeometryError> {
        if perm.len() != corner.dim() {
            return Err(GeometryError::Dimension { expected: corner.dim(), found: perm.len() });
        }
        if !is_permutation(&perm) {
            return Err(GeometryError::NotPermutation(perm));
        }
        Ok(Self { corner, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Vertices in construction order, in cube coordinates.
    pub fn cube_vertices(&self) -> Vec<CubePoint> {
        let mut out = Vec::with_capacity(self.dim() + 1);
        let mut current = self.corner.coords.clone();
        out.push(CubePoint::new(current.clone()));
        for &axis in &self.perm {
            current[axis] += 1;
            out.push(CubePoint::new(current.clone()));
        }
        out
    }

    /// True when every vertex lies in the big simplex of scale `n`.
    pub fn in_simplex(&self, n: u32) -> bool {
        self.cube_vertices().iter().all(|v| v.in_simplex(n))
    }

    /// Whether the construction order runs clockwise in the `(z_1, z_2)`
    /// plane (2D only): odd permutations are clockwise.
    pub fn is_clockwise_2d(&self) -> bool {
        debug_assert_eq!(self.dim(), 2);
        self.perm[0] == 1
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Barycentric vertices `v^0 .. v^d`; consecutive vertices differ by the
/// difference vector moving one unit of mass from `x_a` to `x_{a+1}`.
pub fn cell_vertices(cell: &BaseCell, n: u32) -> Result<Vec<BarycentricPoint>, GeometryError> {
    cell.cube_vertices().iter().map(|v| cube_to_barycentric(v, n)).collect()
}

/// All permutations of `0..d` in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..d).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..d).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// The `d!` Kuhn cells of the unit cube `[corner, corner + 1]`.
pub fn cells_in_cube(corner: &CubePoint) -> Vec<BaseCell> {
    permutations(corner.dim()).into_iter().map(|perm| BaseCell { corner: corner.clone(), perm }).collect()
}

/// Whether `x` (relative to the cube corner) lies in the interior of the Kuhn
/// simplex of `perm`: `1 > x_{perm[0]} > x_{perm[1]} > .. > x_{perm[d-1]} > 0`.
pub fn kuhn_interior_contains(perm: &[usize], x: &[crate::Rational]) -> bool {
    use num_traits::{One, Zero};
    let mut upper = crate::Rational::one();
    for &axis in perm {
        if x[axis] >= upper {
            return false;
        }
        upper = x[axis];
    }
    upper > crate::Rational::zero()
}

/// `max_{i} |x_i - y_i|` over a pair of points.
pub fn coordinate_gap(x: &BarycentricPoint, y: &BarycentricPoint) -> u32 {
    x.coords.iter().zip(&y.coords).map(|(&a, &b)| a.abs_diff(b)).max().unwrap_or(0)
}

/// Largest coordinate gap over all vertex pairs.
pub fn cell_diameter(vertices: &[BarycentricPoint]) -> u32 {
    let mut best = 0;
    for (i, x) in vertices.iter().enumerate() {
        for y in &vertices[i + 1..] {
            best = best.max(coordinate_gap(x, y));
        }
    }
    best
}

/// True iff the vertices are pairwise within gap 1 and not all identical.
pub fn cell_diameter_check(vertices: &[BarycentricPoint]) -> bool {
    cell_diameter(vertices) == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    /// `|x_i - y_i| <= 1` for every `i = 0..d`.
    AffineAdjacent,
    /// `|x_i - y_i| <= 1` for `i = 1..d` only.
    Adjacent,
    Neither,
}

pub fn adjacency(x: &BarycentricPoint, y: &BarycentricPoint) -> Adjacency {
    assert_eq!(x.coords.len(), y.coords.len());
    let close = |i: usize| x.coords[i].abs_diff(y.coords[i]) <= 1;
    if !(1..x.coords.len()).all(close) {
        Adjacency::Neither
    } else if close(0) {
        Adjacency::AffineAdjacent
    } else {
        Adjacency::Adjacent
    }
}

/// Every grid point of the `d`-simplex of scale `n`, in lexicographic order
/// of the barycentric coordinates.
pub fn simplex_points(d: usize, n: u32) -> Vec<BarycentricPoint> {
    fn rec(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<BarycentricPoint>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(BarycentricPoint::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for v in (0..=remaining).rev() {
            prefix.push(v);
            rec(prefix, remaining - v, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(d + 1), n, d + 1, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn bp(c: &[u32]) -> BarycentricPoint {
        BarycentricPoint::new(c.to_vec())
    }

    #[test]
    fn labels_of_first_boundary_vertices() {
        let n = 9;
        assert_eq!(label(&bp(&[n, 0, 0])), 0);
        assert_eq!(label(&bp(&[n - 1, 1, 0])), 1);
        assert_eq!(label(&bp(&[n - 2, 2, 0])), 2);
    }

    #[test]
    fn kuhn_cube_cells_match_listing() {
        let corner = CubePoint::new(vec![0, 0, 0]);
        let cells = cells_in_cube(&corner);
        assert_eq!(cells.len(), 6);
        let verts = |perm: &[usize]| -> Vec<Vec<u32>> {
            let cell = BaseCell::new(corner.clone(), perm.to_vec()).unwrap();
            cell.cube_vertices().into_iter().map(|v| v.coords).collect()
        };
        assert_eq!(verts(&[0, 1, 2]), vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        assert_eq!(verts(&[0, 2, 1]), vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 0, 1], vec![1, 1, 1]]);
        assert_eq!(verts(&[1, 0, 2]), vec![vec![0, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        assert_eq!(verts(&[1, 2, 0]), vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]);
        assert_eq!(verts(&[2, 0, 1]), vec![vec![0, 0, 0], vec![0, 0, 1], vec![1, 0, 1], vec![1, 1, 1]]);
        assert_eq!(verts(&[2, 1, 0]), vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        assert_eq!(cells_in_cube(&CubePoint::new(vec![3, 1])).len(), 2);
    }

    #[test]
    fn barycentric_cell_walk_shifts_unit_mass_right() {
        // identity permutation from the origin of a scale-1 grid
        let cell = BaseCell::new(CubePoint::new(vec![0, 0, 0]), vec![0, 1, 2]).unwrap();
        let verts = cell_vertices(&cell, 1).unwrap();
        assert_eq!(verts, vec![bp(&[1, 0, 0, 0]), bp(&[0, 1, 0, 0]), bp(&[0, 0, 1, 0]), bp(&[0, 0, 0, 1])]);
        let escaping = BaseCell::new(CubePoint::new(vec![0, 0]), vec![1, 0]).unwrap();
        assert!(cell_vertices(&escaping, 4).is_err());
    }

    #[test]
    fn transform_corners_and_errors() {
        let n = 7;
        assert_eq!(cube_to_barycentric(&CubePoint::new(vec![n, n, n]), n).unwrap(), bp(&[0, 0, 0, n]));
        assert_eq!(cube_to_barycentric(&CubePoint::new(vec![0, 0, 0]), n).unwrap(), bp(&[n, 0, 0, 0]));
        assert!(cube_to_barycentric(&CubePoint::new(vec![1, 2, 0]), n).is_err());
        assert!(cube_to_barycentric(&CubePoint::new(vec![8, 2, 0]), n).is_err());
        assert_eq!(barycentric_to_cube(&bp(&[2, 3, 1, 1])).coords, vec![5, 2, 1]);
    }

    #[test]
    fn interior_test_matches_orderings() {
        let x = [rat(1, 2), rat(1, 5), rat(3, 4)];
        let inside: Vec<_> = permutations(3).into_iter().filter(|p| kuhn_interior_contains(p, &x)).collect();
        assert_eq!(inside, vec![vec![2, 0, 1]]);
        // on a shared facet: no interior
        let tie = [rat(1, 2), rat(1, 2), rat(1, 4)];
        assert!(permutations(3).iter().all(|p| !kuhn_interior_contains(p, &tie)));
    }

    #[test]
    fn diameter_edge_cases() {
        assert!(!cell_diameter_check(&[bp(&[1, 1, 1])]));
        assert!(!cell_diameter_check(&[bp(&[3, 0, 0]), bp(&[1, 2, 0])]));
        assert!(cell_diameter_check(&[bp(&[3, 0, 0]), bp(&[2, 1, 0])]));
    }

    #[test]
    fn adjacency_cases() {
        let x = bp(&[2, 0, 1]);
        assert_eq!(adjacency(&x, &x), Adjacency::AffineAdjacent);
        // |x_1 - y_1| = |x_2 - y_2| = 1 but |x_0 - y_0| = 2
        assert_eq!(adjacency(&x, &bp(&[0, 1, 2])), Adjacency::Adjacent);
        assert_eq!(adjacency(&bp(&[3, 0, 0]), &bp(&[0, 3, 0])), Adjacency::Neither);
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn simplex_point_count() {
        assert_eq!(simplex_points(2, 4).len(), 15);
        assert_eq!(simplex_points(3, 2).len(), 10);
        assert!(simplex_points(3, 5).iter().all(|p| p.scale() == 5));
    }

    #[test]
    fn clockwise_fixture() {
        // cross product of (v1 - v0) x (v2 - v0) is negative for clockwise order
        for perm in permutations(2) {
            let cell = BaseCell::new(CubePoint::new(vec![3, 1]), perm).unwrap();
            let v = cell.cube_vertices();
            let (ax, ay) =
                (v[1].coords[0] as i64 - v[0].coords[0] as i64, v[1].coords[1] as i64 - v[0].coords[1] as i64);
            let (bx, by) =
                (v[2].coords[0] as i64 - v[0].coords[0] as i64, v[2].coords[1] as i64 - v[0].coords[1] as i64);
            assert_eq!(ax * by - ay * bx < 0, cell.is_clockwise_2d());
        }
    }
}
