use alloc::vec;
use alloc::vec::Vec;

use crate::simplex::{in_simplex, permutations, BaseCell, CubePoint};

/// An axis-aligned grid box `lo <= z <= hi` in cube coordinates, intersected
/// with the big simplex `N >= z_1 >= .. >= z_d >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub lo: Vec<u32>,
    pub hi: Vec<u32>,
    pub n: u32,
}

impl Region {
    pub fn new(lo: Vec<u32>, hi: Vec<u32>, n: u32) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(l, h)| l < h && *h <= n), "region box must be nondegenerate within [0, N]");
        Self { lo, hi, n }
    }

    /// The whole simplex.
    pub fn full(d: usize, n: u32) -> Self {
        Self::new(vec![0; d], vec![n; d], n)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn extent(&self, axis: usize) -> u32 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn is_unit(&self) -> bool {
        (0..self.dim()).all(|a| self.extent(a) == 1)
    }

    pub fn contains(&self, z: &[u32]) -> bool {
        z.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h) && in_simplex(z, self.n)
    }

    /// The two halves below and above `z_axis = at`.
    pub fn split(&self, axis: usize, at: u32) -> (Region, Region) {
        assert!(self.lo[axis] < at && at < self.hi[axis]);
        let mut low = self.clone();
        low.hi[axis] = at;
        let mut high = self.clone();
        high.lo[axis] = at;
        (low, high)
    }

    /// Grid points of the region.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut z = self.lo.clone();
        loop {
            if in_simplex(&z, self.n) {
                out.push(z.clone());
            }
            if !self.advance(&mut z, &self.lo, &self.hi) {
                return out;
            }
        }
    }

    /// Odometer step over the box `[lo, hi]`.
    fn advance(&self, z: &mut [u32], lo: &[u32], hi: &[u32]) -> bool {
        for a in (0..z.len()).rev() {
            if z[a] < hi[a] {
                z[a] += 1;
                return true;
            }
            z[a] = lo[a];
        }
        false
    }

    /// Kuhn cells of the region.
    pub fn cells(&self) -> Vec<BaseCell> {
        let d = self.dim();
        let perms = permutations(d);
        let top: Vec<u32> = self.hi.iter().map(|h| h - 1).collect();
        let mut out = Vec::new();
        let mut corner = self.lo.clone();
        loop {
            for perm in &perms {
                let cell = BaseCell { corner: CubePoint::new(corner.clone()), perm: perm.clone() };
                if cell.in_simplex(self.n) {
                    out.push(cell);
                }
            }
            if !self.advance(&mut corner, &self.lo, &top) {
                return out;
            }
        }
    }

    /// Lattice points on the boundary of a 2D region in clockwise order in the
    /// `(z_1, z_2)` plane, without repeating the start. Empty when the region
    /// has no area.
    pub fn boundary_cycle_2d(&self) -> Vec<[u32; 2]> {
        let polygon = self.polygon_2d();
        let mut out = Vec::new();
        for k in 0..polygon.len() {
            let (p, q) = (polygon[k], polygon[(k + 1) % polygon.len()]);
            let steps = p[0].abs_diff(q[0]).max(p[1].abs_diff(q[1]));
            for t in 0..steps {
                out.push([walk(p[0], q[0], t), walk(p[1], q[1], t)]);
            }
        }
        out
    }

    /// Corners of the 2D region in clockwise order; empty when it has no area.
    pub fn polygon_2d(&self) -> Vec<[u32; 2]> {
        assert_eq!(self.dim(), 2);
        let (l1, l2, h1, h2) = (self.lo[0], self.lo[1], self.hi[0], self.hi[1]);
        let polygon = clip_sorted(&[[l1, l2], [l1, h2], [h1, h2], [h1, l2]]);
        if polygon.len() < 3 {
            return Vec::new();
        }
        polygon
    }

    /// The `(d - 1)`-cells of the induced triangulation lying on the region
    /// boundary, each as its `d` cube vertices.
    pub fn boundary_faces(&self) -> Vec<Vec<Vec<u32>>> {
        let d = self.dim();
        let mut out = Vec::new();
        for a in 0..d {
            for fixed in [self.lo[a], self.hi[a]] {
                let generators: Vec<Vec<u32>> = (0..d).filter(|&b| b != a).map(|b| unit(d, &[b])).collect();
                let mut lo = self.lo.clone();
                let mut hi = self.hi.clone();
                lo[a] = fixed;
                hi[a] = fixed;
                self.faces_on_plane(&generators, &lo, &hi, |_| true, &mut out);
            }
        }
        // faces on the simplex walls z_a = z_{a+1} crossing the box
        for a in 0..d.saturating_sub(1) {
            let mut generators: Vec<Vec<u32>> =
                (0..d).filter(|&b| b != a && b != a + 1).map(|b| unit(d, &[b])).collect();
            generators.push(unit(d, &[a, a + 1]));
            let lo = self.lo.clone();
            let hi = self.hi.clone();
            self.faces_on_plane(&generators, &lo, &hi, |c| c[a] == c[a + 1], &mut out);
        }
        out
    }

    fn faces_on_plane(
        &self,
        generators: &[Vec<u32>],
        lo: &[u32],
        hi: &[u32],
        on_plane: impl Fn(&[u32]) -> bool,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        let perms = permutations(generators.len());
        let mut corner = lo.to_vec();
        loop {
            if on_plane(&corner) && self.contains(&corner) {
                for perm in &perms {
                    let mut current = corner.clone();
                    let mut face = vec![current.clone()];
                    let mut inside = true;
                    for &g in perm {
                        for (c, s) in current.iter_mut().zip(&generators[g]) {
                            *c += s;
                        }
                        if !self.contains(&current) {
                            inside = false;
                            break;
                        }
                        face.push(current.clone());
                    }
                    if inside {
                        out.push(face);
                    }
                }
            }
            if !self.advance(&mut corner, lo, hi) {
                return;
            }
        }
    }
}

fn unit(d: usize, axes: &[usize]) -> Vec<u32> {
    let mut v = vec![0; d];
    for &a in axes {
        v[a] = 1;
    }
    v
}

fn walk(from: u32, to: u32, t: u32) -> u32 {
    match to.cmp(&from) {
        core::cmp::Ordering::Greater => from + t,
        core::cmp::Ordering::Less => from - t,
        core::cmp::Ordering::Equal => from,
    }
}

/// Clips a rectangle (given clockwise) to the half-plane `z_1 >= z_2`.
/// Edges are axis-parallel, so intersections with `z_1 = z_2` are lattice points.
fn clip_sorted(rect: &[[u32; 2]; 4]) -> Vec<[u32; 2]> {
    let inside = |p: [u32; 2]| p[0] >= p[1];
    let mut out: Vec<[u32; 2]> = Vec::new();
    let push = |p: [u32; 2], out: &mut Vec<[u32; 2]>| {
        if out.last() != Some(&p) {
            out.push(p);
        }
    };
    for k in 0..4 {
        let (p, q) = (rect[k], rect[(k + 1) % 4]);
        let crossing = || if p[1] == q[1] { [p[1], p[1]] } else { [p[0], p[0]] };
        match (inside(p), inside(q)) {
            (true, true) => push(q, &mut out),
            (true, false) => push(crossing(), &mut out),
            (false, true) => {
                push(crossing(), &mut out);
                push(q, &mut out);
            }
            (false, false) => {}
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_triangle_cycle() {
        let r = Region::full(2, 3);
        let cycle = r.boundary_cycle_2d();
        assert_eq!(cycle.len(), 9);
        // diagonal up, then down the right side, then back along the bottom
        assert_eq!(&cycle[..4], &[[0, 0], [1, 1], [2, 2], [3, 3]]);
        assert_eq!(&cycle[4..7], &[[3, 2], [3, 1], [3, 0]]);
        assert_eq!(&cycle[7..], &[[2, 0], [1, 0]]);
    }

    #[test]
    fn box_below_diagonal_is_a_rectangle() {
        let r = Region::new(vec![4, 0], vec![6, 2], 8);
        assert_eq!(r.boundary_cycle_2d().len(), 8);
        assert_eq!(r.cells().len(), 8);
        assert_eq!(r.points().len(), 9);
        let empty = Region::new(vec![0, 4], vec![2, 6], 8);
        assert!(empty.boundary_cycle_2d().is_empty());
        assert!(empty.cells().is_empty());
    }

    #[test]
    fn cell_counts_of_full_simplex() {
        // N^d cells in the d-simplex of scale N
        assert_eq!(Region::full(2, 4).cells().len(), 16);
        assert_eq!(Region::full(3, 4).cells().len(), 64);
        assert_eq!(Region::full(3, 4).points().len(), 35);
    }

    #[test]
    fn boundary_faces_of_full_simplex() {
        // the boundary of the 3-simplex of scale N has 4 N^2 triangles
        assert_eq!(Region::full(3, 4).boundary_faces().len(), 64);
        assert_eq!(Region::full(2, 5).boundary_faces().len(), 15);
    }
}
