//! Exact solvers for approximate envy-free cake cutting.
//!
//! The cake is `[0, 1]`, cut by `d` knives into `d + 1` contiguous pieces for
//! `d + 1` players. A cut is encoded as an integer barycentric vector
//! `(x_0, .., x_d)` with `sum x_i = N`, piece `i` having length `x_i / N`.
//!
//! The crate is organised bottom-up:
//!
//! - [`utility`]: piecewise-constant measures with exact rational arithmetic,
//!   preferences, Lipschitz constants and the moving-knife adversary family.
//! - [`oracle`]: the counting/caching oracle used to measure query complexity.
//! - [`simplex`]: barycentric grid geometry and Kuhn's triangulation.
//! - [`sperner`]: induced colorings, region indices, the divide-and-conquer
//!   search, brute force and envy-freeness verification.
//! - [`fast3`]: the `O(log^2 N)` bisection algorithm for three players.
//! - [`reductions`]: 2D Brouwer and direction-preserving instance generators.
//! - [`stromquist`]: exact event-driven moving-knife simulation.
//!
//! Everything is `no_std` + `alloc` and deterministic.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod fast3;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod simplex;
pub mod sperner;
pub mod stromquist;
pub mod utility;

pub use oracle::{CountingOracle, Oracle};
pub use rational::Rational;
pub use simplex::{BarycentricPoint, BaseCell, CubePoint};
pub use sperner::{ColoringOracle, SolutionCell};
pub use utility::{PiecewiseDensity, UtilityProfile};
