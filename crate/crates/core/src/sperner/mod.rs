//! Sperner colorings of the barycentric grid and the searches built on them.
//!
//! A coloring assigns each grid point a piece index. The coloring induced by a
//! utility profile asks the player who controls a vertex (its label) which
//! piece they prefer at that cut. Valid colorings never use color `j` where
//! `x_j = 0`, which forces an odd number of fully colored cells.

mod index;
mod region;
mod search;
mod verify;

pub use index::{
    cell_index_mod2, cell_sign_sum_2d, index_2d, index_mod2_boundary, region_index, sign_of_cell_2d, sign_of_edge,
};
pub use region::Region;
pub use search::{brute_force_search, required_budget, search_dnc};
pub use verify::{verify_envy_free, EnvyReport};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::oracle::{CountingOracle, Oracle};
use crate::simplex::{self, label, BarycentricPoint, BaseCell, GeometryError};
use crate::utility::{preference, UtilityProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpernerError {
    #[error("coloring is not Sperner-valid: point {point:?} has color {color}")]
    Violation { point: Vec<u32>, color: usize },
    #[error("brute force needs a budget of {required} cells, the limit is {budget}")]
    Budget { required: u128, budget: u128 },
    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(u32),
    #[error("grid size must be at least 1")]
    EmptyGrid,
    #[error("invariant violated in region lo={lo:?} hi={hi:?}: {reason}")]
    Invariant { lo: Vec<u32>, hi: Vec<u32>, reason: String },
    #[error("cell vertices are not pairwise affine adjacent")]
    NotAdjacent,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A coloring of the grid points of the `d`-simplex of scale `N`.
pub trait Coloring {
    fn dim(&self) -> usize;
    fn scale(&self) -> u32;
    fn color(&self, x: &BarycentricPoint) -> usize;
}

/// The coloring induced by preferences: vertex `X` gets the piece preferred by
/// player `label(X)` at cut `X`.
#[derive(Debug, Clone)]
pub struct ProfileColoring {
    pub profile: UtilityProfile,
    pub n: u32,
}

impl ProfileColoring {
    pub fn new(profile: UtilityProfile, n: u32) -> Self {
        Self { profile, n }
    }
}

impl Coloring for ProfileColoring {
    fn dim(&self) -> usize {
        self.profile.dim()
    }

    fn scale(&self) -> u32 {
        self.n
    }

    fn color(&self, x: &BarycentricPoint) -> usize {
        preference(&self.profile, label(x), x)
    }
}

/// An explicit color table; missing points get color 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableColoring {
    pub d: usize,
    pub n: u32,
    pub colors: BTreeMap<BarycentricPoint, usize>,
}

impl Coloring for TableColoring {
    fn dim(&self) -> usize {
        self.d
    }

    fn scale(&self) -> u32 {
        self.n
    }

    fn color(&self, x: &BarycentricPoint) -> usize {
        self.colors.get(x).copied().unwrap_or(0)
    }
}

/// A coloring given by a closure.
#[derive(Clone)]
pub struct FnColoring<F> {
    pub d: usize,
    pub n: u32,
    pub f: F,
}

impl<F: Fn(&BarycentricPoint) -> usize> Coloring for FnColoring<F> {
    fn dim(&self) -> usize {
        self.d
    }

    fn scale(&self) -> u32 {
        self.n
    }

    fn color(&self, x: &BarycentricPoint) -> usize {
        (self.f)(x)
    }
}

/// A uniformly random Sperner-valid coloring: each point picks one of its
/// nonzero coordinates.
pub fn random_sperner_coloring(d: usize, n: u32, seed: u64) -> TableColoring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors = simplex::simplex_points(d, n)
        .into_iter()
        .map(|p| {
            let support: Vec<usize> = (0..=d).filter(|&j| p.coords()[j] > 0).collect();
            let c = support[rng.gen_range(0..support.len())];
            (p, c)
        })
        .collect();
    TableColoring { d, n, colors }
}

/// Adapter turning a [`Coloring`] into an [`Oracle`] keyed by grid point.
#[derive(Debug, Clone)]
pub struct ColorQueries<C>(pub C);

impl<C: Coloring> Oracle for ColorQueries<C> {
    type Query = BarycentricPoint;
    type Answer = usize;

    fn answer(&self, query: &BarycentricPoint) -> usize {
        self.0.color(query)
    }
}

/// A counting color oracle that checks Sperner validity on every answer.
#[derive(Debug, Clone)]
pub struct ColoringOracle<C: Coloring> {
    counter: CountingOracle<ColorQueries<C>>,
}

impl<C: Coloring> ColoringOracle<C> {
    pub fn new(coloring: C) -> Self {
        Self { counter: CountingOracle::new(ColorQueries(coloring)) }
    }

    pub fn dim(&self) -> usize {
        self.coloring().dim()
    }

    pub fn scale(&self) -> u32 {
        self.coloring().scale()
    }

    pub fn coloring(&self) -> &C {
        &self.counter.inner().0
    }

    pub fn color_of(&mut self, x: &BarycentricPoint) -> Result<usize, SpernerError> {
        let color = self.counter.query(x);
        if color > x.dim() || x.coords()[color] == 0 {
            return Err(SpernerError::Violation { point: x.coords().to_vec(), color });
        }
        Ok(color)
    }

    /// Color of a cube point of the big simplex.
    pub fn color_at_cube(&mut self, z: &[u32]) -> Result<usize, SpernerError> {
        let x = simplex::bary_from_cube(z, self.scale());
        self.color_of(&x)
    }

    pub fn distinct_queries(&self) -> usize {
        self.counter.distinct_queries()
    }

    pub fn total_calls(&self) -> u64 {
        self.counter.total_calls()
    }

    pub fn queried_points(&self) -> impl Iterator<Item = (&BarycentricPoint, &usize)> {
        self.counter.seen()
    }

    pub fn reset(&mut self) {
        self.counter.reset();
    }
}

/// A fully colored base cell with its allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCell {
    pub cell: BaseCell,
    pub n: u32,
    /// Barycentric vertices in construction order.
    pub vertices: Vec<BarycentricPoint>,
    pub colors: Vec<usize>,
    /// `permutation[player]` is the piece assigned to `player`: the color at
    /// the vertex that player controls.
    pub permutation: Vec<usize>,
}

impl SolutionCell {
    /// Colors `cell` through the oracle; `None` when it is not fully colored.
    pub fn from_cell<C: Coloring>(
        cell: &BaseCell,
        oracle: &mut ColoringOracle<C>,
    ) -> Result<Option<Self>, SpernerError> {
        let n = oracle.scale();
        let vertices = simplex::cell_vertices(cell, n)?;
        let colors = vertices.iter().map(|v| oracle.color_of(v)).collect::<Result<Vec<_>, _>>()?;
        let d = cell.dim();
        let mut seen = alloc::vec![false; d + 1];
        for &c in &colors {
            seen[c] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Ok(None);
        }
        let mut permutation = alloc::vec![0; d + 1];
        for (v, &c) in vertices.iter().zip(&colors) {
            permutation[label(v)] = c;
        }
        Ok(Some(Self { cell: cell.clone(), n, vertices, colors, permutation }))
    }

    pub fn dim(&self) -> usize {
        self.cell.dim()
    }

    /// Barycentric centroid times `d + 1`.
    pub fn centroid_scaled(&self) -> Vec<u64> {
        let mut sum = alloc::vec![0u64; self.dim() + 1];
        for v in &self.vertices {
            for (s, &c) in sum.iter_mut().zip(v.coords()) {
                *s += u64::from(c);
            }
        }
        sum
    }
}

pub(crate) fn invariant(region: &Region, reason: impl Into<String>) -> SpernerError {
    SpernerError::Invariant { lo: region.lo.clone(), hi: region.hi.clone(), reason: reason.into() }
}
