//! Instance generators from discrete fixed-point problems.
//!
//! A 2D BROUWER instance colors the grid `{0..N}^2` with `{0, 1, 2}` such that
//! `f(0, y) = 1`, `f(x, 0) = 2` for `x > 0` and `f(x, N) = f(N, y) = 0` for
//! `x, y > 0`; a solution is a unit square showing all three colors. It embeds
//! into the cake-cutting coloring on the triangle `(0,0), (2N,0), (2N,2N)` of
//! scale `2N`, where fully colored cells exist only inside the image of the
//! grid. Direction-preserving functions reduce to BROUWER instances by keeping
//! only the positive unit directions.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::simplex::BarycentricPoint;
use crate::sperner::{Coloring, SolutionCell};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("grid size {0} is too small")]
    TooSmall(u32),
    #[error("value grid has {found} entries, expected {expected}")]
    GridSize { expected: usize, found: usize },
    #[error("value {value} at ({x}, {y}) is not a color")]
    BadColor { x: u32, y: u32, value: u8 },
    #[error("boundary condition fails at ({x}, {y}): found {found}, expected {expected}")]
    Boundary { x: u32, y: u32, found: u8, expected: u8 },
    #[error("embedded coloring breaks the Sperner condition at {0} boundary points, first at {1:?}")]
    EmbeddedBoundary(usize, Vec<u32>),
    #[error("plant ({0}, {1}) must satisfy 1 <= p <= N - 2")]
    Plant(u32, u32),
    #[error("cell vertex {0:?} lies outside the embedded grid")]
    OutsideEmbedding(Vec<u32>),
    #[error("f({a:?}) and f({b:?}) point in opposite directions")]
    NotDirectionPreserving { a: [u32; 2], b: [u32; 2] },
    #[error("f({0:?}) leaves the grid")]
    Unbounded([u32; 2]),
    #[error("f({at:?}) = {found:?} breaks the boundary layer")]
    Layer { at: [u32; 2], found: [i8; 2] },
}

/// `f : {0..N}^2 -> {0, 1, 2}`, stored row-major in `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brouwer2DInstance {
    n: u32,
    values: Vec<u8>,
    plant: Option<(u32, u32)>,
}

impl Brouwer2DInstance {
    /// Validates the boundary condition.
    pub fn new(n: u32, values: Vec<u8>) -> Result<Self, ReductionError> {
        let inst = Self { n, values, plant: None };
        inst.validate()?;
        Ok(inst)
    }

    /// The unique solution is the square with lower-left corner `(px, py)`.
    pub fn planted(n: u32, px: u32, py: u32) -> Result<Self, ReductionError> {
        if n < 3 {
            return Err(ReductionError::TooSmall(n));
        }
        if !(1..=n - 2).contains(&px) || !(1..=n - 2).contains(&py) {
            return Err(ReductionError::Plant(px, py));
        }
        let side = (n + 1) as usize;
        let mut values = vec![0u8; side * side];
        for x in 0..=n {
            for y in 0..=n {
                values[x as usize * side + y as usize] = if x == 0 {
                    1
                } else if y == 0 {
                    2
                } else if x == n || y == n {
                    0
                } else if x <= px {
                    1
                } else if y <= py {
                    2
                } else {
                    0
                };
            }
        }
        Ok(Self { n, values, plant: Some((px, py)) })
    }

    /// A planted instance with the plant drawn from `seed`.
    pub fn planted_random(n: u32, seed: u64) -> Result<Self, ReductionError> {
        if n < 3 {
            return Err(ReductionError::TooSmall(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let px = rng.gen_range(1..=n - 2);
        let py = rng.gen_range(1..=n - 2);
        Self::planted(n, px, py)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn plant(&self) -> Option<(u32, u32)> {
        self.plant
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn f(&self, x: u32, y: u32) -> u8 {
        self.values[x as usize * (self.n as usize + 1) + y as usize]
    }

    fn validate(&self) -> Result<(), ReductionError> {
        let n = self.n;
        if n < 2 {
            return Err(ReductionError::TooSmall(n));
        }
        let expected = (n as usize + 1).pow(2);
        if self.values.len() != expected {
            return Err(ReductionError::GridSize { expected, found: self.values.len() });
        }
        for x in 0..=n {
            for y in 0..=n {
                let value = self.f(x, y);
                if value > 2 {
                    return Err(ReductionError::BadColor { x, y, value });
                }
                let forced = if x == 0 {
                    Some(1)
                } else if y == 0 {
                    Some(2)
                } else if x == n || y == n {
                    Some(0)
                } else {
                    None
                };
                if let Some(expected) = forced.filter(|&e| e != value) {
                    return Err(ReductionError::Boundary { x, y, found: value, expected });
                }
            }
        }
        Ok(())
    }

    /// Whether the unit square at `(x, y)` shows all three colors.
    pub fn is_solution(&self, square: BrouwerSquare) -> bool {
        let BrouwerSquare { x, y } = square;
        if x >= self.n || y >= self.n {
            return false;
        }
        let mut seen = [false; 3];
        for (a, b) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
            seen[self.f(a, b) as usize] = true;
        }
        seen == [true; 3]
    }

    /// All solutions, by scanning every square.
    pub fn solutions(&self) -> Vec<BrouwerSquare> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                let sq = BrouwerSquare { x, y };
                if self.is_solution(sq) {
                    out.push(sq);
                }
            }
        }
        out
    }
}

/// A unit square `{x, x+1} x {y, y+1}` of the BROUWER grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BrouwerSquare {
    pub x: u32,
    pub y: u32,
}

/// The embedded coloring on the simplex of scale `2N`.
///
/// A point `(x, y)` of the triangle `0 <= y <= x <= 2N` is the cut
/// `(y, x - y, 2N - x)`, so `(0,0)`, `(2N,0)`, `(2N,2N)` are the corners of
/// colors 2, 1 and 0.
#[derive(Debug, Clone)]
pub struct EmbeddedBrouwer {
    pub instance: Brouwer2DInstance,
}

impl EmbeddedBrouwer {
    /// Triangle coordinates `(x, y)` of a cut.
    pub fn triangle_coords(p: &BarycentricPoint) -> (u32, u32) {
        let c = p.coords();
        (c[0] + c[1], c[0])
    }

    pub fn color_xy(&self, x: u32, y: u32) -> usize {
        let n = self.instance.n;
        let color = if x >= n && y <= n {
            self.instance.f(2 * n - x, y)
        } else if y == 0 {
            2
        } else {
            0
        };
        color as usize
    }

    /// Boundary points of the triangle whose color is forbidden there.
    pub fn boundary_violations(&self) -> Vec<BarycentricPoint> {
        let m = 2 * self.instance.n;
        let mut out = Vec::new();
        for t in 0..=m {
            for p in [[0, t, m - t], [t, 0, m - t], [t, m - t, 0]] {
                let p = BarycentricPoint::new(p.to_vec());
                let color = self.color(&p);
                if p.coords()[color] == 0 {
                    out.push(p);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

impl Coloring for EmbeddedBrouwer {
    fn dim(&self) -> usize {
        2
    }

    fn scale(&self) -> u32 {
        2 * self.instance.n
    }

    fn color(&self, p: &BarycentricPoint) -> usize {
        let (x, y) = Self::triangle_coords(p);
        self.color_xy(x, y)
    }
}

/// Embeds the instance and checks the Sperner condition on the whole triangle boundary.
pub fn embed_brouwer(instance: Brouwer2DInstance) -> Result<EmbeddedBrouwer, ReductionError> {
    instance.validate()?;
    let embedded = EmbeddedBrouwer { instance };
    let violations = embedded.boundary_violations();
    if let Some(first) = violations.first() {
        return Err(ReductionError::EmbeddedBoundary(violations.len(), first.coords().to_vec()));
    }
    Ok(embedded)
}

/// Maps a fully colored cell back to the BROUWER square containing it.
pub fn extract_brouwer(cell: &SolutionCell, n: u32) -> Result<BrouwerSquare, ReductionError> {
    let mut grid = Vec::with_capacity(cell.vertices.len());
    for v in &cell.vertices {
        let (x, y) = EmbeddedBrouwer::triangle_coords(v);
        if x < n || y > n {
            return Err(ReductionError::OutsideEmbedding(v.coords().to_vec()));
        }
        grid.push((2 * n - x, y));
    }
    let x = grid.iter().map(|g| g.0).min().unwrap();
    let y = grid.iter().map(|g| g.1).min().unwrap();
    if x >= n || y >= n {
        return Err(ReductionError::OutsideEmbedding(cell.vertices[0].coords().to_vec()));
    }
    Ok(BrouwerSquare { x, y })
}

/// A unit direction `±e_1`, `±e_2` or zero, as `[f_1, f_2]`.
pub type Direction = [i8; 2];

/// `f : {0..N}^2 -> {0, ±e_1, ±e_2}` with a boundary layer pointing inwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionPreservingInstance {
    n: u32,
    values: Vec<Direction>,
    zero: Option<(u32, u32)>,
}

impl DirectionPreservingInstance {
    /// Checks boundedness, the boundary layer and direction preservation.
    pub fn new(n: u32, values: Vec<Direction>) -> Result<Self, ReductionError> {
        let inst = Self { n, values, zero: None };
        inst.validate()?;
        Ok(inst)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[Direction] {
        &self.values
    }

    /// The planted zero, when generated.
    pub fn planted_zero(&self) -> Option<(u32, u32)> {
        self.zero
    }

    pub fn f(&self, x1: u32, x2: u32) -> Direction {
        self.values[x1 as usize * (self.n as usize + 1) + x2 as usize]
    }

    /// The inward direction forced on the outer layer, `None` inside.
    pub fn layer(n: u32, x1: u32, x2: u32) -> Option<Direction> {
        if x1 == 0 {
            Some([1, 0])
        } else if x2 == 0 {
            Some([0, 1])
        } else if x1 == n {
            Some([-1, 0])
        } else if x2 == n {
            Some([0, -1])
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        let n = self.n;
        if n < 2 {
            return Err(ReductionError::TooSmall(n));
        }
        let expected = (n as usize + 1).pow(2);
        if self.values.len() != expected {
            return Err(ReductionError::GridSize { expected, found: self.values.len() });
        }
        for x1 in 0..=n {
            for x2 in 0..=n {
                let f = self.f(x1, x2);
                let unit = matches!(f, [0, 0] | [1, 0] | [-1, 0] | [0, 1] | [0, -1]);
                let moved = [i64::from(x1) + i64::from(f[0]), i64::from(x2) + i64::from(f[1])];
                if !unit || moved.iter().any(|&m| m < 0 || m > i64::from(n)) {
                    return Err(ReductionError::Unbounded([x1, x2]));
                }
                if let Some(forced) = Self::layer(n, x1, x2) {
                    if forced != f {
                        return Err(ReductionError::Layer { at: [x1, x2], found: f });
                    }
                }
            }
        }
        self.check_direction_preserving()
    }

    /// `f(a) . f(b) >= 0` for every pair with `|a - b|_inf <= 1`.
    pub fn check_direction_preserving(&self) -> Result<(), ReductionError> {
        let n = self.n;
        for x1 in 0..=n {
            for x2 in 0..=n {
                let a = self.f(x1, x2);
                for (d1, d2) in [(1i64, -1i64), (1, 0), (1, 1), (0, 1)] {
                    let (y1, y2) = (i64::from(x1) + d1, i64::from(x2) + d2);
                    if y1 < 0 || y2 < 0 || y1 > i64::from(n) || y2 > i64::from(n) {
                        continue;
                    }
                    let b = self.f(y1 as u32, y2 as u32);
                    if a[0] * b[0] + a[1] * b[1] < 0 {
                        return Err(ReductionError::NotDirectionPreserving { a: [x1, x2], b: [y1 as u32, y2 as u32] });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self, x1: u32, x2: u32) -> bool {
        self.f(x1, x2) == [0, 0]
    }

    /// Whether the unit square at `(x, y)` contains a zero of `f`.
    pub fn square_has_zero(&self, square: BrouwerSquare) -> bool {
        let BrouwerSquare { x, y } = square;
        [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)].iter().any(|&(a, b)| self.is_zero(a, b))
    }
}

/// A seeded instance with a zero planted at a random interior point.
///
/// Inside the layer `f` points along the first axis towards the plant's
/// column, then along the second axis towards the plant (axis roles swapped at
/// random); a few interior points are additionally set to zero.
pub fn random_dp_instance(n: u32, seed: u64) -> Result<DirectionPreservingInstance, ReductionError> {
    if n < 4 {
        return Err(ReductionError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = (rng.gen_range(1..n), rng.gen_range(1..n));
    let swap = rng.gen_bool(0.5);
    let side = n as usize + 1;
    let mut values = vec![[0i8; 2]; side * side];
    let toward = |from: u32, to: u32| -> i8 {
        match from.cmp(&to) {
            core::cmp::Ordering::Less => 1,
            core::cmp::Ordering::Greater => -1,
            core::cmp::Ordering::Equal => 0,
        }
    };
    for x1 in 0..=n {
        for x2 in 0..=n {
            let f = match DirectionPreservingInstance::layer(n, x1, x2) {
                Some(forced) => forced,
                None if rng.gen_ratio(1, 64) => [0, 0],
                None => {
                    let (a, b) = if swap { ((x2, zero.1), (x1, zero.0)) } else { ((x1, zero.0), (x2, zero.1)) };
                    let major = toward(a.0, a.1);
                    let minor = if major == 0 { toward(b.0, b.1) } else { 0 };
                    if swap {
                        [minor, major]
                    } else {
                        [major, minor]
                    }
                }
            };
            values[x1 as usize * side + x2 as usize] = f;
        }
    }
    let inst = DirectionPreservingInstance { n, values, zero: Some(zero) };
    inst.validate()?;
    Ok(inst)
}

/// `h(x) = i` where `f(x) = e_i`, and `0` where `f(x)` is zero or negative.
/// With the inward boundary layer `h` is a BROUWER instance.
pub fn dp_to_coloring(inst: &DirectionPreservingInstance) -> Result<Brouwer2DInstance, ReductionError> {
    inst.validate()?;
    let values = inst
        .values
        .iter()
        .map(|f| match f {
            [1, 0] => 1,
            [0, 1] => 2,
            _ => 0,
        })
        .collect();
    Brouwer2DInstance::new(inst.n, values)
}
