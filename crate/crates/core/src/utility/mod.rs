//! Piecewise-constant utility measures on the cake `[0, 1]`.
//!
//! A [`PiecewiseDensity`] stores breakpoints and a constant density per
//! segment; interval values are exact. The cumulative mass at each breakpoint
//! is precomputed so that a value query costs one binary search per endpoint.

pub mod adversary;
pub mod random;

use alloc::vec::Vec;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::oracle::Oracle;
use crate::rational::{int, Rational};
use crate::simplex::BarycentricPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UtilityError {
    #[error("a density needs at least one segment")]
    Empty,
    #[error("breakpoints must start at 0 and end at 1")]
    Endpoints,
    #[error("breakpoints must be strictly increasing (at index {0})")]
    NotIncreasing(usize),
    #[error("expected {expected} density values (one per segment), found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error(
        "segment {segment} has density {value}: every nonempty piece must have positive value \
         (nonnegativity condition u(empty) = 0, u(nonempty) > 0)"
    )]
    NonPositive { segment: usize, value: Rational },
    #[error("segment {segment} has negative density {value}")]
    Negative { segment: usize, value: Rational },
    #[error("the density has zero total mass")]
    ZeroMass,
    #[error("interval [{0}, {1}] is not a subinterval of [0, 1]")]
    Domain(Rational, Rational),
    #[error("a profile for d = {d} needs {} players, found {found}", d + 1)]
    PlayerCount { d: usize, found: usize },
    #[error("a profile needs at least two players")]
    TooFewPlayers,
    #[error("perturbation window ({0}, {1}) must lie inside (1/10, 3/10)")]
    Perturbation(Rational, Rational),
}

/// An additive measure on `[0, 1]` with piecewise-constant density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseDensity {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
    /// Mass of `[0, breakpoints[i]]`.
    cumulative: Vec<Rational>,
}

impl PiecewiseDensity {
    /// Strictly positive densities only.
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, UtilityError> {
        let density = Self::new_allow_zero(breakpoints, values)?;
        if let Some((segment, value)) = density.values.iter().enumerate().find(|(_, v)| !v.is_positive_value()) {
            return Err(UtilityError::NonPositive { segment, value: *value });
        }
        Ok(density)
    }

    /// Nonnegative densities with positive total mass. Zero-density stretches
    /// break uniqueness of preferences, so the Sperner solvers refuse them;
    /// the moving-knife fixtures need them.
    pub fn new_allow_zero(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, UtilityError> {
        if values.is_empty() {
            return Err(UtilityError::Empty);
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(UtilityError::ValueCount {
                expected: breakpoints.len().saturating_sub(1),
                found: values.len(),
            });
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(UtilityError::Endpoints);
        }
        if let Some(i) = (1..breakpoints.len()).find(|&i| breakpoints[i] <= breakpoints[i - 1]) {
            return Err(UtilityError::NotIncreasing(i));
        }
        if let Some((segment, value)) = values.iter().enumerate().find(|(_, v)| **v < Rational::zero()) {
            return Err(UtilityError::Negative { segment, value: *value });
        }
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        cumulative.push(Rational::zero());
        for (k, value) in values.iter().enumerate() {
            let next = cumulative[k] + *value * (breakpoints[k + 1] - breakpoints[k]);
            cumulative.push(next);
        }
        if cumulative[values.len()].is_zero() {
            return Err(UtilityError::ZeroMass);
        }
        Ok(Self { breakpoints, values, cumulative })
    }

    /// Builds a density from segment masses instead of densities.
    pub fn from_masses(breakpoints: Vec<Rational>, masses: Vec<Rational>) -> Result<Self, UtilityError> {
        if breakpoints.len() != masses.len() + 1 {
            return Err(UtilityError::ValueCount {
                expected: breakpoints.len().saturating_sub(1),
                found: masses.len(),
            });
        }
        if let Some(i) = (1..breakpoints.len()).find(|&i| breakpoints[i] <= breakpoints[i - 1]) {
            return Err(UtilityError::NotIncreasing(i));
        }
        let values = masses.iter().enumerate().map(|(k, m)| *m / (breakpoints[k + 1] - breakpoints[k])).collect();
        Self::new_allow_zero(breakpoints, values)
    }

    pub fn uniform() -> Self {
        Self::new(alloc::vec![Rational::zero(), Rational::one()], alloc::vec![Rational::one()]).unwrap()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn segment_count(&self) -> usize {
        self.values.len()
    }

    pub fn total(&self) -> Rational {
        self.cumulative[self.values.len()]
    }

    pub fn max_density(&self) -> Rational {
        self.values.iter().copied().max().unwrap()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| v.is_positive_value())
    }

    /// Index of the segment containing `x` (the last one for `x = 1`).
    fn segment_of(&self, x: Rational) -> usize {
        let after = self.breakpoints.partition_point(|b| *b <= x);
        after.saturating_sub(1).min(self.values.len() - 1)
    }

    /// Mass of `[0, x]`, `x` clamped to `[0, 1]`.
    pub fn cdf(&self, x: Rational) -> Rational {
        if x <= Rational::zero() {
            return Rational::zero();
        }
        if x >= Rational::one() {
            return self.total();
        }
        let k = self.segment_of(x);
        self.cumulative[k] + self.values[k] * (x - self.breakpoints[k])
    }

    /// `u([a, b])`, exact.
    pub fn eval_interval(&self, a: Rational, b: Rational) -> Result<Rational, UtilityError> {
        if a < Rational::zero() || b > Rational::one() || a > b {
            return Err(UtilityError::Domain(a, b));
        }
        Ok(self.cdf(b) - self.cdf(a))
    }

    /// Smallest `x` with `cdf(x) >= v`.
    pub fn inverse_cdf_left(&self, v: Rational) -> Rational {
        for k in 0..self.values.len() {
            if v <= self.cumulative[k] {
                return self.breakpoints[k];
            }
            if v <= self.cumulative[k + 1] {
                return self.breakpoints[k] + (v - self.cumulative[k]) / self.values[k];
            }
        }
        Rational::one()
    }

    /// Largest `x` with `cdf(x) <= v`.
    pub fn inverse_cdf_right(&self, v: Rational) -> Rational {
        for k in (0..self.values.len()).rev() {
            if v >= self.cumulative[k + 1] {
                return self.breakpoints[k + 1];
            }
            if v >= self.cumulative[k] {
                return self.breakpoints[k] + (v - self.cumulative[k]) / self.values[k];
            }
        }
        Rational::zero()
    }

    /// The same measure multiplied by a positive factor.
    pub fn scaled(&self, factor: Rational) -> Self {
        assert!(factor.is_positive_value());
        let values = self.values.iter().map(|v| *v * factor).collect();
        Self::new_allow_zero(self.breakpoints.clone(), values).unwrap()
    }
}

trait PositiveValue {
    fn is_positive_value(&self) -> bool;
}

impl PositiveValue for Rational {
    fn is_positive_value(&self) -> bool {
        *self > Rational::zero()
    }
}

/// Utilities of the `d + 1` players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityProfile {
    players: Vec<PiecewiseDensity>,
}

impl UtilityProfile {
    /// Every player must have strictly positive density.
    pub fn new(players: Vec<PiecewiseDensity>) -> Result<Self, UtilityError> {
        let profile = Self::new_allow_zero(players)?;
        for p in &profile.players {
            if let Some((segment, value)) = p.values().iter().enumerate().find(|(_, v)| !v.is_positive_value()) {
                return Err(UtilityError::NonPositive { segment, value: *value });
            }
        }
        Ok(profile)
    }

    pub fn new_allow_zero(players: Vec<PiecewiseDensity>) -> Result<Self, UtilityError> {
        if players.len() < 2 {
            return Err(UtilityError::TooFewPlayers);
        }
        Ok(Self { players })
    }

    /// Same density for all `d + 1` players.
    pub fn identical(d: usize, density: PiecewiseDensity) -> Self {
        Self { players: alloc::vec![density; d + 1] }
    }

    pub fn uniform(d: usize) -> Self {
        Self::identical(d, PiecewiseDensity::uniform())
    }

    pub fn dim(&self) -> usize {
        self.players.len() - 1
    }

    pub fn players(&self) -> &[PiecewiseDensity] {
        &self.players
    }

    pub fn player(&self, i: usize) -> &PiecewiseDensity {
        &self.players[i]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.players.iter().all(PiecewiseDensity::is_strictly_positive)
    }

    /// Values of all `d + 1` pieces of `cut` for one player.
    pub fn piece_values(&self, player: usize, cut: &BarycentricPoint) -> Vec<Rational> {
        assert_eq!(cut.dim(), self.dim(), "cut dimension does not match the profile");
        let n = cut.scale() as i128;
        let density = &self.players[player];
        let cdfs: Vec<Rational> =
            cut.cut_offsets().into_iter().map(|o| density.cdf(Rational::new(o as i128, n))).collect();
        cdfs.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// The piece `player` values most at `cut`; ties go to the smallest index.
pub fn preference(profile: &UtilityProfile, player: usize, cut: &BarycentricPoint) -> usize {
    argmax_first(&profile.piece_values(player, cut))
}

pub(crate) fn argmax_first(values: &[Rational]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// `K = max density`: `u_i([x, y]) <= K (y - x)` for every player and interval.
pub fn lipschitz_constant(profile: &UtilityProfile) -> Rational {
    profile.players.iter().map(PiecewiseDensity::max_density).max().unwrap()
}

/// Value-query oracle: `(player, a, b) -> u_player([a, b])`.
#[derive(Debug, Clone)]
pub struct ValueQueries {
    pub profile: UtilityProfile,
}

impl Oracle for ValueQueries {
    type Query = (usize, Rational, Rational);
    type Answer = Rational;

    fn answer(&self, query: &Self::Query) -> Rational {
        let (player, a, b) = *query;
        self.profile.player(player).eval_interval(a, b).expect("value query outside [0, 1]")
    }
}

pub(crate) fn half() -> Rational {
    Rational::new(1, 2)
}

pub(crate) fn tenth(k: i128) -> Rational {
    Rational::new(k, 10)
}

#[allow(dead_code)]
pub(crate) fn integer(v: i128) -> Rational {
    int(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CountingOracle;
    use crate::rational::{int, rat};
    use adversary::{fixture_ab, fixture_c, fixture_profile};
    use alloc::vec;
    use proptest::prelude::*;

    fn bp(c: &[u32]) -> BarycentricPoint {
        BarycentricPoint::new(c.to_vec())
    }

    #[test]
    fn fixture_interval_values() {
        let a = fixture_ab();
        assert_eq!(a.eval_interval(tenth(3), tenth(4)).unwrap(), int(100));
        assert_eq!(a.eval_interval(rat(1, 20), rat(3, 20)).unwrap(), rat(1, 2));
        assert_eq!(a.eval_interval(rat(1, 3), rat(1, 3)).unwrap(), int(0));
        assert!(a.eval_interval(rat(-1, 3), rat(1, 3)).is_err());
        assert!(a.eval_interval(rat(1, 2), rat(1, 3)).is_err());
        assert!(a.eval_interval(rat(1, 2), rat(4, 3)).is_err());
    }

    #[test]
    fn validator_rejects_bad_densities() {
        let bps = vec![int(0), rat(1, 2), int(1)];
        let err = PiecewiseDensity::new(bps.clone(), vec![int(1), int(0)]).unwrap_err();
        assert!(matches!(err, UtilityError::NonPositive { segment: 1, .. }));
        assert!(alloc::format!("{err}").contains("nonnegativity"));
        assert!(PiecewiseDensity::new(bps.clone(), vec![int(1), int(-1)]).is_err());
        assert!(PiecewiseDensity::new_allow_zero(bps.clone(), vec![int(1), int(0)]).is_ok());
        assert!(matches!(
            PiecewiseDensity::new_allow_zero(bps.clone(), vec![int(0), int(0)]),
            Err(UtilityError::ZeroMass)
        ));
        assert!(matches!(
            PiecewiseDensity::new_allow_zero(bps, vec![int(1), int(-2)]),
            Err(UtilityError::Negative { .. })
        ));
        assert!(matches!(
            PiecewiseDensity::new(vec![int(0), rat(1, 2), rat(1, 2), int(1)], vec![int(1); 3]),
            Err(UtilityError::NotIncreasing(2))
        ));
        assert!(matches!(PiecewiseDensity::new(vec![rat(1, 9), int(1)], vec![int(1)]), Err(UtilityError::Endpoints)));
        assert!(matches!(
            PiecewiseDensity::new(vec![int(0), int(1)], vec![int(1), int(1)]),
            Err(UtilityError::ValueCount { .. })
        ));
        assert!(UtilityProfile::new(fixture_profile(int(0)).players().to_vec()).is_err());
        assert!(UtilityProfile::new(vec![PiecewiseDensity::uniform()]).is_err());
    }

    #[test]
    fn preference_examples() {
        let profile = fixture_profile(int(0));
        // pieces [0, 3/10], [3/10, 4/10], [4/10, 1]
        let cut = bp(&[3, 1, 6]);
        assert_eq!(profile.piece_values(0, &cut), vec![int(2), int(100), int(102)]);
        assert_eq!(preference(&profile, 0, &cut), 2);
        for player in 0..3 {
            assert_eq!(preference(&profile, player, &bp(&[0, 10, 0])), 1);
        }
        assert_eq!(preference(&UtilityProfile::uniform(2), 1, &bp(&[1, 1, 1])), 0);
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_constant(&fixture_profile(int(0))), int(1000));
        assert_eq!(lipschitz_constant(&UtilityProfile::uniform(3)), int(1));
        let spiky = PiecewiseDensity::new(vec![int(0), rat(1, 3), int(1)], vec![rat(5, 2), rat(3, 4)]).unwrap();
        let profile = UtilityProfile::new(vec![PiecewiseDensity::uniform(), spiky]).unwrap();
        assert_eq!(lipschitz_constant(&profile), rat(5, 2));
    }

    #[test]
    fn inverse_cdfs_bracket_flat_segments() {
        let a = fixture_ab();
        // zero density on [0, 1/10]
        assert_eq!(a.inverse_cdf_left(int(0)), int(0));
        assert_eq!(a.inverse_cdf_right(int(0)), tenth(1));
        assert_eq!(a.inverse_cdf_left(int(102)), tenth(4));
        assert_eq!(a.inverse_cdf_right(int(204)), int(1));
        assert_eq!(a.inverse_cdf_left(int(204)), tenth(9));
        let c = fixture_c(int(0));
        assert_eq!(c.inverse_cdf_left(c.total()), tenth(6));
    }

    #[test]
    fn oracle_counts_distinct_value_queries() {
        let mut oracle = CountingOracle::new(ValueQueries { profile: fixture_profile(int(0)) });
        let q = (2usize, tenth(1), tenth(3));
        let first = oracle.query(&q);
        let distinct = oracle.distinct_queries();
        let second = oracle.query(&q);
        assert_eq!(first, second);
        assert_eq!(oracle.distinct_queries(), distinct);
        assert_eq!(oracle.total_calls(), 2);
    }

    fn arb_density() -> impl Strategy<Value = PiecewiseDensity> {
        (proptest::collection::btree_set(1i128..64, 0..6), proptest::collection::vec(1i128..40, 7)).prop_map(
            |(cuts, vals)| {
                let mut bps = vec![int(0)];
                bps.extend(cuts.iter().map(|&c| rat(c, 64)));
                bps.push(int(1));
                let values = (0..bps.len() - 1).map(|k| rat(vals[k], 4)).collect();
                PiecewiseDensity::new(bps, values).unwrap()
            },
        )
    }

    fn arb_unit() -> impl Strategy<Value = Rational> {
        (0i128..=1000).prop_map(|k| rat(k, 1000))
    }

    proptest! {
        #[test]
        fn additive(d in arb_density(), mut pts in proptest::collection::vec(arb_unit(), 3)) {
            pts.sort();
            let (a, b, c) = (pts[0], pts[1], pts[2]);
            prop_assert_eq!(
                d.eval_interval(a, c).unwrap(),
                d.eval_interval(a, b).unwrap() + d.eval_interval(b, c).unwrap()
            );
        }

        #[test]
        fn strictly_monotone(d in arb_density(), mut pts in proptest::collection::vec(arb_unit(), 4)) {
            pts.sort();
            let inner = d.eval_interval(pts[1], pts[2]).unwrap();
            let outer = d.eval_interval(pts[0], pts[3]).unwrap();
            prop_assert!(inner <= outer);
            if pts[0] < pts[1] || pts[2] < pts[3] {
                prop_assert!(inner < outer);
            }
        }

        #[test]
        fn lipschitz_bound_holds(ds in proptest::collection::vec(arb_density(), 3), mut pts in proptest::collection::vec(arb_unit(), 2)) {
            pts.sort();
            let profile = UtilityProfile::new(ds).unwrap();
            let k = lipschitz_constant(&profile);
            for p in profile.players() {
                prop_assert!(p.eval_interval(pts[0], pts[1]).unwrap() <= k * (pts[1] - pts[0]));
            }
        }

        #[test]
        fn inverse_cdf_roundtrip(d in arb_density(), v in 0i128..=1000) {
            let target = d.total() * rat(v, 1000);
            prop_assert_eq!(d.cdf(d.inverse_cdf_left(target)), target);
            prop_assert_eq!(d.cdf(d.inverse_cdf_right(target)), target);
        }
    }
}
