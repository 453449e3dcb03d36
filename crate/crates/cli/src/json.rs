//! File formats: instances, generated reduction instances and reports.
//! Rationals travel as `"p/q"` strings (or `"p"` for integers).

use std::fmt;

use envycut_core::rational::parse;
use envycut_core::reductions::Direction;
use envycut_core::{PiecewiseDensity, Rational, SolutionCell, UtilityProfile};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct QVisitor;
        impl Visitor<'_> for QVisitor {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a \"p/q\" or \"p\" string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse(v).map(Q).ok_or_else(|| E::custom(format!("not a rational: {v:?}")))
            }
        }
        deserializer.deserialize_str(QVisitor)
    }
}

fn qs(values: &[Rational]) -> Vec<Q> {
    values.iter().copied().map(Q).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerFile {
    pub breakpoints: Vec<Q>,
    pub values: Vec<Q>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub d: usize,
    pub players: Vec<PlayerFile>,
}

impl ProfileFile {
    pub fn from_profile(profile: &UtilityProfile) -> Self {
        let players = profile
            .players()
            .iter()
            .map(|p| PlayerFile { breakpoints: qs(p.breakpoints()), values: qs(p.values()) })
            .collect();
        Self { d: profile.dim(), players }
    }

    /// Builds the profile. `allow_zero` admits zero-density segments.
    pub fn to_profile(&self, allow_zero: bool) -> Result<UtilityProfile, CliError> {
        if self.players.len() != self.d + 1 {
            return Err(CliError::Instance(format!(
                "d = {} needs {} players, found {}",
                self.d,
                self.d + 1,
                self.players.len()
            )));
        }
        let densities = self
            .players
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let b = p.breakpoints.iter().map(|q| q.0).collect();
                let v = p.values.iter().map(|q| q.0).collect();
                let density =
                    if allow_zero { PiecewiseDensity::new_allow_zero(b, v) } else { PiecewiseDensity::new(b, v) };
                density.map_err(|e| CliError::Instance(format!("player {i}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let profile =
            if allow_zero { UtilityProfile::new_allow_zero(densities) } else { UtilityProfile::new(densities) };
        profile.map_err(|e| CliError::Instance(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Brouwer,
    Dp,
}

/// `values[x][y]`, either colors or `[f_1, f_2]` directions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Colors(Vec<Vec<u8>>),
    Directions(Vec<Vec<Direction>>),
}

pub const PROCEDURAL: &str = "seeded-v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenFile {
    pub kind: GenKind,
    pub n: u32,
    pub seed: u64,
    /// Planted solution square (BROUWER) or zero (direction preserving).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Grid>,
    /// Present instead of `values` for large grids; regenerate from `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub procedural: Option<String>,
}

pub enum InstanceFile {
    Profile(ProfileFile),
    Generated(GenFile),
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Instance(e.to_string()))?;
        let generated = value.get("kind").is_some();
        let out = if generated {
            serde_json::from_value(value).map(InstanceFile::Generated)
        } else {
            serde_json::from_value(value).map(InstanceFile::Profile)
        };
        out.map_err(|e| CliError::Instance(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellJson {
    pub corner: Vec<u32>,
    pub perm: Vec<usize>,
    pub vertices: Vec<Vec<u32>>,
    pub colors: Vec<usize>,
    pub permutation: Vec<usize>,
}

impl CellJson {
    pub fn new(cell: &SolutionCell) -> Self {
        Self {
            corner: cell.cell.corner.coords.clone(),
            perm: cell.cell.perm.clone(),
            vertices: cell.vertices.iter().map(|v| v.coords().to_vec()).collect(),
            colors: cell.colors.clone(),
            permutation: cell.permutation.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub player: usize,
    pub piece: usize,
    pub interval: [Q; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundJson {
    pub region: [u32; 4],
    pub index: i64,
    pub axis: String,
    pub cut: u32,
    pub first_index: i64,
    pub second_index: i64,
    pub kept_first: bool,
    pub queries: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub command: String,
    pub algo: String,
    pub d: usize,
    pub n: u32,
    /// Lipschitz constant used for the error bound.
    pub k: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Q>,
    pub solution: CellJson,
    /// Pieces at the cut given by the first vertex.
    pub allocation: Vec<PieceJson>,
    pub valid: bool,
    pub max_envy: Q,
    pub bound: Q,
    pub query_count: usize,
    pub total_calls: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions_found: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<RoundJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionReport {
    pub command: String,
    pub algo: String,
    pub kind: GenKind,
    pub n: u32,
    pub embedded_n: u32,
    pub solution: CellJson,
    /// Lower-left corner of the recovered unit square.
    pub square: [u32; 2],
    /// Instance values at the square corners `(x, y), (x+1, y), (x, y+1), (x+1, y+1)`.
    pub corner_colors: [u8; 4],
    pub is_solution: bool,
    pub query_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShoutJson {
    pub shouter: usize,
    pub simultaneous: Vec<usize>,
    pub sword: Q,
    pub attained: bool,
    pub knives: Vec<Q>,
    pub middle_knife: Q,
    pub middle_holder: usize,
    pub pieces: Vec<[Q; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentJson {
    pub x: Q,
    pub delta: Q,
    pub seed: u64,
    pub queries: usize,
    pub distinguishing: usize,
    pub fraction: f64,
    /// Differing answers for queries with both endpoints outside the window.
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StromquistReport {
    pub command: String,
    pub source: String,
    pub shout: ShoutJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub envy_free: bool,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_envy: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Q>,
}

/// The fields `verify` reads back from a solve report.
#[derive(Debug, Clone, Deserialize)]
pub struct SolutionInput {
    pub n: u32,
    pub solution: CellJson,
    #[serde(default)]
    pub square: Option<[u32; 2]>,
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}
