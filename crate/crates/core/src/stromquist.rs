//! Exact simulation of Stromquist's moving-knife procedure for three players.
//!
//! A sword sweeps `[0, 1]` from the left. Each player holds a knife that
//! halves, in their own measure, the part right of the sword. The first player
//! to value `[0, s]` at least as much as both pieces cut by the middle knife
//! shouts and takes `[0, s]`.
//!
//! Between consecutive events (the sword or a knife crossing a density
//! breakpoint, two knives crossing) every knife is affine in `s`, so the
//! shout time is found by solving affine inequalities exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::{int, Rational};
use crate::utility::adversary::{adversary_c, fixture_c};
use crate::utility::{PiecewiseDensity, UtilityError, UtilityProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StromquistError {
    #[error("the procedure needs exactly 3 players, found {0}")]
    PlayerCount(usize),
    #[error("sword position {0} is outside [0, 1]")]
    Domain(Rational),
    #[error("nobody shouts before the sword reaches 1")]
    NoShout,
    #[error(transparent)]
    Utility(#[from] UtilityError),
}

/// `m` with `u([s, m]) = u([m, 1])`: the leftmost solution, never left of `s`.
pub fn knife_position(density: &PiecewiseDensity, s: Rational) -> Rational {
    let target = (density.cdf(s) + density.total()) / int(2);
    density.inverse_cdf_left(target).max(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnifeState {
    pub sword: Rational,
    pub knives: Vec<Rational>,
}

pub fn state_at(profile: &UtilityProfile, s: Rational) -> Result<KnifeState, StromquistError> {
    if s < Rational::zero() || s > Rational::one() {
        return Err(StromquistError::Domain(s));
    }
    Ok(KnifeState { sword: s, knives: profile.players().iter().map(|d| knife_position(d, s)).collect() })
}

/// Players sorted by `(knife, index)`.
fn knife_order(knives: &[Rational]) -> [usize; 3] {
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| knives[a].cmp(&knives[b]).then(a.cmp(&b)));
    order
}

/// `[2F(s) - F(mu), F(s) - (F(1) - F(mu))]`: the shout condition holds when both are `>= 0`.
fn shout_margins(profile: &UtilityProfile, player: usize, s: Rational) -> [Rational; 2] {
    let state = KnifeState { sword: s, knives: profile.players().iter().map(|d| knife_position(d, s)).collect() };
    let mu = state.knives[knife_order(&state.knives)[1]];
    let u = profile.player(player);
    let (fs, fm) = (u.cdf(s), u.cdf(mu));
    [int(2) * fs - fm, fs - (u.total() - fm)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShoutEvent {
    /// Lowest-index player among those shouting first.
    pub shouter: usize,
    /// Every player whose shout condition starts at the same instant.
    pub simultaneous: Vec<usize>,
    pub sword: Rational,
    /// False when the condition holds just after `sword` but not at it.
    pub attained: bool,
    pub knives: Vec<Rational>,
    pub middle_knife: Rational,
    pub middle_holder: usize,
    /// `pieces[player] = (a, b)`.
    pub pieces: Vec<(Rational, Rational)>,
}

fn affine_fit(s1: Rational, v1: Rational, s2: Rational, v2: Rational) -> (Rational, Rational) {
    let slope = (v2 - v1) / (s2 - s1);
    (v1 - slope * s1, slope)
}

/// Infimum of `{s in (a, b) : alpha_i + beta_i s >= 0 for all i}`, if nonempty.
fn infimum_open(a: Rational, b: Rational, constraints: &[(Rational, Rational)]) -> Option<Rational> {
    let (mut lo, mut lo_strict) = (a, true);
    let (mut hi, mut hi_strict) = (b, true);
    for &(alpha, beta) in constraints {
        if beta.is_zero() {
            if alpha < Rational::zero() {
                return None;
            }
            continue;
        }
        let root = -alpha / beta;
        if beta > Rational::zero() {
            if root > lo {
                (lo, lo_strict) = (root, false);
            }
        } else if root < hi {
            (hi, hi_strict) = (root, false);
        }
    }
    (lo < hi || (lo == hi && !lo_strict && !hi_strict)).then_some(lo)
}

/// Sword positions between which every knife is affine.
fn event_points(profile: &UtilityProfile) -> Vec<Rational> {
    let mut breakpoints: Vec<Rational> =
        profile.players().iter().flat_map(|d| d.breakpoints().iter().copied()).collect();
    breakpoints.sort();
    breakpoints.dedup();
    let mut points = breakpoints.clone();
    for d in profile.players() {
        for &b in &breakpoints {
            let v = int(2) * d.cdf(b) - d.total();
            if v >= Rational::zero() {
                points.push(d.inverse_cdf_left(v));
                points.push(d.inverse_cdf_right(v));
            }
        }
    }
    points.sort();
    points.dedup();
    // knife crossings
    let mut crossings = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (s1, s2) = (a + (b - a) / int(3), a + int(2) * (b - a) / int(3));
        let fits: Vec<(Rational, Rational)> = profile
            .players()
            .iter()
            .map(|d| affine_fit(s1, knife_position(d, s1), s2, knife_position(d, s2)))
            .collect();
        for p in 0..fits.len() {
            for q in p + 1..fits.len() {
                let (alpha, beta) = (fits[p].0 - fits[q].0, fits[p].1 - fits[q].1);
                if !beta.is_zero() {
                    let root = -alpha / beta;
                    if a < root && root < b {
                        crossings.push(root);
                    }
                }
            }
        }
    }
    points.extend(crossings);
    points.sort();
    points.dedup();
    points
}

pub fn simulate(profile: &UtilityProfile) -> Result<ShoutEvent, StromquistError> {
    if profile.players().len() != 3 {
        return Err(StromquistError::PlayerCount(profile.players().len()));
    }
    let points = event_points(profile);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let at_a: Vec<usize> =
            (0..3).filter(|&q| shout_margins(profile, q, a).iter().all(|g| *g >= Rational::zero())).collect();
        if !at_a.is_empty() {
            return Ok(event(profile, a, at_a, true));
        }
        let (s1, s2) = (a + (b - a) / int(3), a + int(2) * (b - a) / int(3));
        let mut best: Option<(Rational, Vec<usize>)> = None;
        for q in 0..3 {
            let (g1, g2) = (shout_margins(profile, q, s1), shout_margins(profile, q, s2));
            let constraints = [affine_fit(s1, g1[0], s2, g2[0]), affine_fit(s1, g1[1], s2, g2[1])];
            if let Some(t) = infimum_open(a, b, &constraints) {
                match &mut best {
                    Some((bt, players)) if *bt == t => players.push(q),
                    Some((bt, _)) if *bt < t => {}
                    _ => best = Some((t, vec![q])),
                }
            }
        }
        if let Some((t, players)) = best {
            let attained = players.iter().any(|&q| shout_margins(profile, q, t).iter().all(|g| *g >= Rational::zero()));
            return Ok(event(profile, t, players, attained));
        }
    }
    let last = *points.last().unwrap();
    let at_end: Vec<usize> =
        (0..3).filter(|&q| shout_margins(profile, q, last).iter().all(|g| *g >= Rational::zero())).collect();
    if at_end.is_empty() {
        return Err(StromquistError::NoShout);
    }
    Ok(event(profile, last, at_end, true))
}

fn event(profile: &UtilityProfile, s: Rational, players: Vec<usize>, attained: bool) -> ShoutEvent {
    let knives: Vec<Rational> = profile.players().iter().map(|d| knife_position(d, s)).collect();
    let order = knife_order(&knives);
    let middle_holder = order[1];
    let mu = knives[middle_holder];
    let shouter = players[0];
    let rest: Vec<usize> = order.iter().copied().filter(|&p| p != shouter).collect();
    let mut pieces = vec![(Rational::zero(), Rational::zero()); 3];
    pieces[shouter] = (Rational::zero(), s);
    pieces[rest[0]] = (s, mu);
    pieces[rest[1]] = (mu, Rational::one());
    ShoutEvent { shouter, simultaneous: players, sword: s, attained, knives, middle_knife: mu, middle_holder, pieces }
}

/// Per-query comparison of `C` and `C_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndistinguishabilityReport {
    pub x: Rational,
    pub delta: Rational,
    pub queries: usize,
    pub differing: Vec<bool>,
    pub distinguishing: usize,
    /// Queries with both endpoints outside `(x - delta, x + delta)` whose answers still differ.
    pub violations: usize,
}

impl IndistinguishabilityReport {
    pub fn fraction(&self) -> f64 {
        if self.queries == 0 {
            0.0
        } else {
            self.distinguishing as f64 / self.queries as f64
        }
    }
}

pub fn indistinguishability_experiment(
    x: Rational,
    delta: Rational,
    queries: &[(Rational, Rational)],
) -> Result<IndistinguishabilityReport, StromquistError> {
    let cx = adversary_c(x, delta)?;
    let c = fixture_c(delta);
    let inside = |e: Rational| x - delta < e && e < x + delta;
    let mut differing = Vec::with_capacity(queries.len());
    let mut violations = 0;
    for &(a, b) in queries {
        let differs = c.eval_interval(a, b)? != cx.eval_interval(a, b)?;
        if differs && !inside(a) && !inside(b) {
            violations += 1;
        }
        differing.push(differs);
    }
    let distinguishing = differing.iter().filter(|&&d| d).count();
    Ok(IndistinguishabilityReport { x, delta, queries: queries.len(), differing, distinguishing, violations })
}

/// `count` intervals with endpoints uniform on the grid `k / 2^bits`, sorted within each pair.
pub fn random_queries(count: usize, seed: u64, bits: u32) -> Vec<(Rational, Rational)> {
    assert!(bits <= 100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = 1i128 << bits;
    (0..count)
        .map(|_| {
            let a = Rational::new(rng.gen_range(0..=denom), denom);
            let b = Rational::new(rng.gen_range(0..=denom), denom);
            (a.min(b), a.max(b))
        })
        .collect()
}
