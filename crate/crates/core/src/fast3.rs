//! Three players in `O(log^2 N)` color queries.
//!
//! Points are written `(i, j, k) = (x_0, x_1, x_2)`. A region
//! `V(i1, i2, k1, k2)` is bounded by lines of three kinds only: `i = c`,
//! `k = c` and `j = 0`. Along such a line each player's colors are monotone
//! (for instance `2, 0, 1` on `i = c` as `j` grows), so two binary searches
//! per player and line recover every color on the line, and the signed index
//! of a region follows from its sides without scanning them.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::simplex::{cells_in_cube, label, BarycentricPoint, CubePoint};
use crate::sperner::{sign_of_edge, Coloring, ColoringOracle, Region, SolutionCell, SpernerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Fast3Error {
    #[error("fast3 needs d = 2, found d = {0}")]
    Dimension(usize),
    #[error("grid size must be at least 2, found {0}")]
    GridTooSmall(u32),
    #[error("colors of player {player} on line {line:?} are not monotone")]
    NonMonotone { line: BoundaryLine, player: usize },
    #[error("color {color} cannot appear on line {line:?}")]
    IllegalColor { line: BoundaryLine, color: usize },
    #[error("region side from {from:?} to {to:?} is not of kind i = c, k = c or j = 0")]
    IllegalSide { from: [u32; 2], to: [u32; 2] },
    #[error("invariant violated in {region:?}: {reason}")]
    Invariant { region: Region3, reason: String },
    #[error(transparent)]
    Sperner(#[from] SpernerError),
}

/// `V(i1, i2, k1, k2) = {(i, j, k) : i1 <= i <= i2, k1 <= k <= k2, i + j + k = N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region3 {
    pub i1: u32,
    pub i2: u32,
    pub k1: u32,
    pub k2: u32,
}

impl Region3 {
    pub fn whole(n: u32) -> Self {
        Self { i1: 0, i2: n, k1: 0, k2: n }
    }

    /// The same point set with `i2 <= N - k1` and `k2 <= N - i1`.
    pub fn clamped(self, n: u32) -> Self {
        Self { i2: self.i2.min(n - self.k1), k2: self.k2.min(n - self.i1), ..self }
    }

    /// The region as a cube-coordinate box: `z_1 = N - i`, `z_2 = k`.
    pub fn to_region(self, n: u32) -> Region {
        Region::new(vec![n - self.i2, self.k1], vec![n - self.i1, self.k2], n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineKind {
    /// `(c, p, N - c - p)`
    IFixed,
    /// `(p, N - c - p, c)`
    KFixed,
    /// `(p, 0, N - p)`
    JZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryLine {
    pub kind: LineKind,
    pub c: u32,
}

impl BoundaryLine {
    pub fn i_fixed(c: u32) -> Self {
        Self { kind: LineKind::IFixed, c }
    }

    pub fn k_fixed(c: u32) -> Self {
        Self { kind: LineKind::KFixed, c }
    }

    pub fn j_zero() -> Self {
        Self { kind: LineKind::JZero, c: 0 }
    }

    /// Largest parameter value inside the simplex.
    pub fn length(&self, n: u32) -> u32 {
        match self.kind {
            LineKind::IFixed | LineKind::KFixed => n - self.c,
            LineKind::JZero => n,
        }
    }

    pub fn point(&self, n: u32, p: u32) -> BarycentricPoint {
        let c = self.c;
        BarycentricPoint::new(match self.kind {
            LineKind::IFixed => vec![c, p, n - c - p],
            LineKind::KFixed => vec![p, n - c - p, c],
            LineKind::JZero => vec![p, 0, n - p],
        })
    }

    /// Colors in the order they appear as the parameter grows.
    pub fn color_order(&self) -> &'static [usize] {
        match self.kind {
            LineKind::IFixed => &[2, 0, 1],
            LineKind::KFixed => &[1, 2, 0],
            LineKind::JZero => &[2, 0],
        }
    }
}

/// Where one player's color changes along a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerChanges {
    pub player: usize,
    /// The player owns the points with `p = residue mod 3`.
    pub residue: u32,
    /// `thresholds[q]`: first owned `p` whose color is at least the `(q + 1)`-th of
    /// the line's order, or `length + 1` when there is none.
    pub thresholds: Vec<u32>,
}

/// Color change points of all players along a full line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangePoints {
    pub line: BoundaryLine,
    pub length: u32,
    /// Indexed by residue of `p` modulo 3.
    pub by_residue: [Option<PlayerChanges>; 3],
}

impl ChangePoints {
    pub fn color_at(&self, p: u32) -> usize {
        let owner = self.by_residue[(p % 3) as usize].as_ref().expect("point beyond the line");
        let rank = owner.thresholds.iter().filter(|&&t| t <= p).count();
        self.line.color_order()[rank]
    }

    /// Owned positions where `player`'s color differs from the previous owned point.
    pub fn changes(&self, player: usize) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .by_residue
            .iter()
            .flatten()
            .filter(|pc| pc.player == player)
            .flat_map(|pc| pc.thresholds.iter().copied().filter(|&t| t > pc.residue && t <= self.length))
            .collect();
        out.dedup();
        out
    }

    /// Sum of edge signs over `p = a .. b` in increasing `p`, in closed form.
    pub fn signed_sum(&self, a: u32, b: u32) -> i64 {
        debug_assert!(a <= b && b <= self.length);
        let mut cuts = vec![a, b];
        for pc in self.by_residue.iter().flatten() {
            for &t in &pc.thresholds {
                for x in [t.saturating_sub(1), t] {
                    if a < x && x < b {
                        cuts.push(x);
                    }
                }
            }
        }
        cuts.sort_unstable();
        cuts.dedup();
        let below = |x: u32, r: u32| if x <= r { 0 } else { i64::from((x - r).div_ceil(3)) };
        let mut total = 0;
        for w in cuts.windows(2) {
            let (u, v) = (w[0], w[1]);
            for r in 0..3u32 {
                let count = below(v, r) - below(u, r);
                if count == 0 {
                    continue;
                }
                let p = u + (r + 3 - u % 3) % 3;
                total += count * sign_of_edge(self.color_at(p), self.color_at(p + 1));
            }
        }
        total
    }

    /// Edge-by-edge version of [`ChangePoints::signed_sum`].
    pub fn signed_sum_linear(&self, a: u32, b: u32) -> i64 {
        (a..b).map(|p| sign_of_edge(self.color_at(p), self.color_at(p + 1))).sum()
    }
}

/// Binary searches for every player's change points on a line.
pub fn change_points<C: Coloring>(
    oracle: &mut ColoringOracle<C>,
    line: BoundaryLine,
) -> Result<ChangePoints, Fast3Error> {
    let n = oracle.scale();
    let length = line.length(n);
    let order = line.color_order();
    let mut by_residue: [Option<PlayerChanges>; 3] = [None, None, None];
    for residue in 0..3u32 {
        if residue > length {
            continue;
        }
        let player = label(&line.point(n, residue));
        let count = (length - residue) / 3 + 1;
        let mut probes: BTreeMap<u32, usize> = BTreeMap::new();
        let mut rank = |s: u32, oracle: &mut ColoringOracle<C>| -> Result<usize, Fast3Error> {
            if let Some(&r) = probes.get(&s) {
                return Ok(r);
            }
            let color = oracle.color_of(&line.point(n, residue + 3 * s))?;
            let r = order.iter().position(|&o| o == color).ok_or(Fast3Error::IllegalColor { line, color })?;
            probes.insert(s, r);
            Ok(r)
        };
        let mut thresholds = Vec::with_capacity(order.len() - 1);
        let mut start = 0;
        for q in 1..order.len() {
            // first sublattice index with rank >= q
            let (mut lo, mut hi) = (start, count);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if rank(mid, oracle)? >= q {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            start = lo;
            thresholds.push(if lo == count { length + 1 } else { residue + 3 * lo });
        }
        let ranks: Vec<usize> = probes.values().copied().collect();
        if ranks.windows(2).any(|w| w[0] > w[1]) {
            return Err(Fast3Error::NonMonotone { line, player });
        }
        by_residue[residue as usize] = Some(PlayerChanges { player, residue, thresholds });
    }
    Ok(ChangePoints { line, length, by_residue })
}

/// Change points, computed once per line.
#[derive(Debug, Clone, Default)]
pub struct LineCache {
    lines: BTreeMap<BoundaryLine, ChangePoints>,
}

impl LineCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get<C: Coloring>(
        &mut self,
        oracle: &mut ColoringOracle<C>,
        line: BoundaryLine,
    ) -> Result<&ChangePoints, Fast3Error> {
        Ok(match self.lines.entry(line) {
            Entry::Occupied(slot) => slot.into_mut(),
            Entry::Vacant(slot) => slot.insert(change_points(oracle, line)?),
        })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Signed index of `region` from the change points of its sides.
pub fn boundary_index3<C: Coloring>(
    oracle: &mut ColoringOracle<C>,
    cache: &mut LineCache,
    region: Region3,
) -> Result<i64, Fast3Error> {
    let n = oracle.scale();
    let polygon = region.clamped(n).to_region(n).polygon_2d();
    let mut total = 0;
    for e in 0..polygon.len() {
        let (from, to) = (polygon[e], polygon[(e + 1) % polygon.len()]);
        // cube (z1, z2) = (N - i, k)
        let (line, pa, pb) = if from[0] == to[0] {
            let c = n - from[0];
            (BoundaryLine::i_fixed(c), n - c - from[1], n - c - to[1])
        } else if from[1] == to[1] {
            (BoundaryLine::k_fixed(from[1]), n - from[0], n - to[0])
        } else if from[0] == from[1] && to[0] == to[1] {
            (BoundaryLine::j_zero(), n - from[0], n - to[0])
        } else {
            return Err(Fast3Error::IllegalSide { from, to });
        };
        let cp = cache.get(oracle, line)?;
        total += if pa <= pb { cp.signed_sum(pa, pb) } else { -cp.signed_sum(pb, pa) };
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutAxis {
    I,
    K,
}

/// One bisection step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub region: Region3,
    pub index: i64,
    pub axis: CutAxis,
    pub cut: u32,
    pub first_index: i64,
    pub second_index: i64,
    pub kept_first: bool,
    /// Distinct color queries after the step.
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solve3Outcome {
    pub solution: SolutionCell,
    pub rounds: Vec<Round>,
}

/// Bisects the longer side of the region, keeping a half of nonzero index,
/// until a unit square remains; then scans its (at most two) cells.
pub fn solve3<C: Coloring>(oracle: &mut ColoringOracle<C>) -> Result<Solve3Outcome, Fast3Error> {
    let (d, n) = (oracle.dim(), oracle.scale());
    if d != 2 {
        return Err(Fast3Error::Dimension(d));
    }
    if n < 2 {
        return Err(Fast3Error::GridTooSmall(n));
    }
    let mut cache = LineCache::new();
    let mut region = Region3::whole(n);
    let mut index = boundary_index3(oracle, &mut cache, region)?;
    let mut rounds = Vec::new();
    loop {
        region = region.clamped(n);
        let (di, dk) = (region.i2 - region.i1, region.k2 - region.k1);
        if index == 0 {
            return Err(Fast3Error::Invariant { region, reason: "region index is zero".into() });
        }
        if di <= 1 && dk <= 1 {
            break;
        }
        let (axis, first, second, cut) = if di >= dk {
            let cut = region.i1 + di / 2;
            (CutAxis::I, Region3 { i2: cut, ..region }, Region3 { i1: cut, ..region }, cut)
        } else {
            let cut = region.k1 + dk / 2;
            (CutAxis::K, Region3 { k2: cut, ..region }, Region3 { k1: cut, ..region }, cut)
        };
        let first_index = boundary_index3(oracle, &mut cache, first)?;
        let second_index = index - first_index;
        let kept_first = match (first_index, second_index) {
            (0, 0) => {
                return Err(Fast3Error::Invariant { region, reason: "both halves have zero index".into() });
            }
            (_, 0) => true,
            (0, _) => false,
            (a, b) => a.abs() >= b.abs(),
        };
        rounds.push(Round {
            region,
            index,
            axis,
            cut,
            first_index,
            second_index,
            kept_first,
            queries: oracle.distinct_queries(),
        });
        (region, index) = if kept_first { (first, first_index) } else { (second, second_index) };
    }
    let corner = CubePoint::new(vec![n - region.i2, region.k1]);
    for cell in cells_in_cube(&corner) {
        if cell.in_simplex(n) {
            if let Some(solution) = SolutionCell::from_cell(&cell, oracle)? {
                return Ok(Solve3Outcome { solution, rounds });
            }
        }
    }
    Err(Fast3Error::Invariant { region, reason: format!("no fully colored cell at corner {:?}", corner.coords) })
}
