use std::fs;
use std::path::Path;

use envycut_core::fast3::{solve3, CutAxis, Fast3Error};
use envycut_core::rational::int;
use envycut_core::reductions::{
    dp_to_coloring, embed_brouwer, extract_brouwer, random_dp_instance, Brouwer2DInstance, BrouwerSquare,
    DirectionPreservingInstance, ReductionError,
};
use envycut_core::simplex::{cell_vertices, label, BarycentricPoint, BaseCell, CubePoint};
use envycut_core::sperner::{
    brute_force_search, search_dnc, verify_envy_free, ColoringOracle, ProfileColoring, SpernerError,
};
use envycut_core::stromquist::{indistinguishability_experiment, random_queries, simulate, ShoutEvent};
use envycut_core::utility::adversary::adversary_profile;
use envycut_core::utility::lipschitz_constant;
use envycut_core::{Rational, SolutionCell, UtilityProfile};

use crate::error::CliError;
use crate::json::{
    self, CellJson, ExperimentJson, GenFile, GenKind, Grid, InstanceFile, PieceJson, ReductionReport, RoundJson,
    ShoutJson, SolutionInput, SolveReport, StromquistReport, VerifyReport, PROCEDURAL, Q,
};
use crate::{Algo, MAX_N};

/// Largest grid stored as an explicit value table by `gen`.
pub const INLINE_GRID_LIMIT: u32 = 1024;

pub const DEFAULT_BUDGET: u128 = 50_000_000;

pub fn sperner_error(e: SpernerError) -> CliError {
    match e {
        SpernerError::Budget { .. } => CliError::Budget(e.to_string()),
        SpernerError::NotPowerOfTwo(_) | SpernerError::EmptyGrid => CliError::Usage(e.to_string()),
        SpernerError::Violation { .. } => CliError::Instance(e.to_string()),
        _ => CliError::Solver(e.to_string()),
    }
}

pub fn fast3_error(e: Fast3Error) -> CliError {
    match e {
        Fast3Error::Dimension(_) => CliError::Instance(e.to_string()),
        Fast3Error::GridTooSmall(_) => CliError::Usage(e.to_string()),
        Fast3Error::Sperner(inner) => sperner_error(inner),
        _ => CliError::Solver(e.to_string()),
    }
}

fn reduction_error(e: ReductionError) -> CliError {
    CliError::Instance(e.to_string())
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text)
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Brute-force cell budget from `ENVYCUT_BUDGET`.
pub fn budget() -> Result<u128, CliError> {
    match std::env::var("ENVYCUT_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("ENVYCUT_BUDGET={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `N = ceil(K / epsilon)` rounded up to a power of two, or `n` as given.
pub fn grid_size(n: Option<u32>, epsilon: Option<Q>, k: Rational) -> Result<u32, CliError> {
    match (n, epsilon) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --n or --epsilon, not both".into())),
        (Some(n), None) => Ok(n),
        (None, Some(Q(eps))) => {
            if eps <= int(0) {
                return Err(CliError::Usage("--epsilon must be positive".into()));
            }
            let raw = (k / eps).ceil().to_integer().max(1);
            let n = u128::try_from(raw).unwrap_or(u128::MAX).checked_next_power_of_two().unwrap_or(u128::MAX);
            u32::try_from(n)
                .ok()
                .filter(|&n| n <= MAX_N)
                .ok_or_else(|| CliError::Usage(format!("K / epsilon needs N = {n}, above the limit {MAX_N}")))
        }
        (None, None) => Err(CliError::Usage("give --n or --epsilon".into())),
    }
}

fn allocation(cell: &SolutionCell) -> Vec<PieceJson> {
    let cut = &cell.vertices[0];
    let offsets = cut.cut_offsets();
    let n = i128::from(cell.n);
    let at = |k: usize| Q(Rational::new(i128::from(offsets[k]), n));
    cell.permutation
        .iter()
        .enumerate()
        .map(|(player, &piece)| PieceJson { player, piece, interval: [at(piece), at(piece + 1)] })
        .collect()
}

fn profile_report(
    command: &str,
    algo: &str,
    profile: &UtilityProfile,
    k: Rational,
    epsilon: Option<Q>,
    cell: &SolutionCell,
    oracle: &ColoringOracle<ProfileColoring>,
) -> Result<SolveReport, CliError> {
    let envy = verify_envy_free(cell, profile).map_err(sperner_error)?;
    let d = profile.dim();
    Ok(SolveReport {
        command: command.into(),
        algo: algo.into(),
        d,
        n: cell.n,
        k: Q(k),
        epsilon,
        solution: CellJson::new(cell),
        allocation: allocation(cell),
        valid: envy.valid,
        max_envy: Q(envy.max_envy),
        bound: Q(k * int(d as i128 + 1) / int(i128::from(cell.n))),
        query_count: oracle.distinct_queries(),
        total_calls: oracle.total_calls(),
        solutions_found: None,
        rounds: None,
        trace: None,
    })
}

fn lipschitz_or(k: Option<Q>, profile: &UtilityProfile) -> Rational {
    k.map_or_else(|| lipschitz_constant(profile), |q| q.0)
}

pub struct SolveArgs<'a> {
    pub instance: &'a Path,
    pub n: Option<u32>,
    pub epsilon: Option<Q>,
    pub k: Option<Q>,
    pub algo: Algo,
    pub report: Option<&'a Path>,
}

pub fn solve(args: SolveArgs) -> Result<(), CliError> {
    let text = match read_instance(args.instance)? {
        InstanceFile::Profile(file) => {
            let profile = file.to_profile(false)?;
            let k = lipschitz_or(args.k, &profile);
            let n = grid_size(args.n, args.epsilon, k)?;
            let mut oracle = ColoringOracle::new(ProfileColoring::new(profile.clone(), n));
            let report = match args.algo {
                Algo::Dnc => {
                    let cell = search_dnc(&mut oracle).map_err(sperner_error)?;
                    profile_report("solve", "dnc", &profile, k, args.epsilon, &cell, &oracle)?
                }
                Algo::Brute => {
                    let all = brute_force_search(&mut oracle, budget()?).map_err(sperner_error)?;
                    let first = all.first().ok_or_else(|| CliError::Solver("no fully colored cell".into()))?;
                    let mut report = profile_report("solve", "brute", &profile, k, args.epsilon, first, &oracle)?;
                    report.solutions_found = Some(all.len());
                    report
                }
            };
            json::to_string(&report)
        }
        InstanceFile::Generated(file) => {
            if args.n.is_some() || args.epsilon.is_some() {
                return Err(CliError::Usage("generated instances fix their own grid; drop --n / --epsilon".into()));
            }
            json::to_string(&solve_generated(&file, args.algo)?)
        }
    };
    write_output(args.report, &text)
}

fn check_square<T>(n: u32, rows: &[Vec<T>]) -> Result<(), CliError> {
    let side = n as usize + 1;
    if rows.len() != side || rows.iter().any(|r| r.len() != side) {
        return Err(CliError::Instance(format!("value grid must be {side} x {side}")));
    }
    Ok(())
}

/// The BROUWER instance behind a generated file, with the direction-preserving
/// source when there is one.
pub fn load_generated(file: &GenFile) -> Result<(Brouwer2DInstance, Option<DirectionPreservingInstance>), CliError> {
    let n = file.n;
    match (file.kind, &file.values, file.procedural.as_deref()) {
        (GenKind::Brouwer, Some(Grid::Colors(rows)), None) => {
            check_square(n, rows)?;
            let inst = Brouwer2DInstance::new(n, rows.concat()).map_err(reduction_error)?;
            Ok((inst, None))
        }
        (GenKind::Dp, Some(Grid::Directions(rows)), None) => {
            check_square(n, rows)?;
            let dp = DirectionPreservingInstance::new(n, rows.concat()).map_err(reduction_error)?;
            Ok((dp_to_coloring(&dp).map_err(reduction_error)?, Some(dp)))
        }
        (GenKind::Brouwer, None, Some(PROCEDURAL)) => {
            Ok((Brouwer2DInstance::planted_random(n, file.seed).map_err(reduction_error)?, None))
        }
        (GenKind::Dp, None, Some(PROCEDURAL)) => {
            let dp = random_dp_instance(n, file.seed).map_err(reduction_error)?;
            Ok((dp_to_coloring(&dp).map_err(reduction_error)?, Some(dp)))
        }
        (_, None, None) => Err(CliError::Instance("needs either `values` or `procedural`".into())),
        (_, Some(_), Some(_)) => Err(CliError::Instance("`values` and `procedural` are exclusive".into())),
        (_, None, Some(other)) => Err(CliError::Instance(format!("unknown procedural generator {other:?}"))),
        (kind, Some(_), None) => Err(CliError::Instance(format!("value grid does not match kind {kind:?}"))),
    }
}

fn square_ok(inst: &Brouwer2DInstance, dp: Option<&DirectionPreservingInstance>, square: BrouwerSquare) -> bool {
    match dp {
        Some(dp) => dp.square_has_zero(square),
        None => inst.is_solution(square),
    }
}

fn solve_generated(file: &GenFile, algo: Algo) -> Result<ReductionReport, CliError> {
    let (inst, dp) = load_generated(file)?;
    let n = inst.n();
    let mut oracle = ColoringOracle::new(embed_brouwer(inst.clone()).map_err(reduction_error)?);
    let cell = match algo {
        Algo::Dnc => search_dnc(&mut oracle).map_err(sperner_error)?,
        Algo::Brute => brute_force_search(&mut oracle, budget()?)
            .map_err(sperner_error)?
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Solver("no fully colored cell".into()))?,
    };
    let square = extract_brouwer(&cell, n).map_err(|e| CliError::Solver(e.to_string()))?;
    let (x, y) = (square.x, square.y);
    let is_solution = square_ok(&inst, dp.as_ref(), square);
    if !is_solution {
        return Err(CliError::Solver(format!("recovered square ({x}, {y}) is not a solution")));
    }
    Ok(ReductionReport {
        command: "solve".into(),
        algo: algo.name().into(),
        kind: file.kind,
        n,
        embedded_n: oracle.scale(),
        solution: CellJson::new(&cell),
        square: [x, y],
        corner_colors: [inst.f(x, y), inst.f(x + 1, y), inst.f(x, y + 1), inst.f(x + 1, y + 1)],
        is_solution,
        query_count: oracle.distinct_queries(),
    })
}

pub struct Solve3Args<'a> {
    pub instance: &'a Path,
    pub n: Option<u32>,
    pub epsilon: Option<Q>,
    pub k: Option<Q>,
    pub trace: bool,
    pub report: Option<&'a Path>,
}

pub fn solve3_cmd(args: Solve3Args) -> Result<(), CliError> {
    let InstanceFile::Profile(file) = read_instance(args.instance)? else {
        return Err(CliError::Instance("solve3 needs a utility profile instance".into()));
    };
    let profile = file.to_profile(false)?;
    if profile.dim() != 2 {
        return Err(CliError::Instance(format!("solve3 needs 3 players, found {}", profile.dim() + 1)));
    }
    let k = lipschitz_or(args.k, &profile);
    let n = grid_size(args.n, args.epsilon, k)?;
    if n > MAX_N {
        return Err(CliError::Usage(format!("--n {n} is above the limit {MAX_N}")));
    }
    let mut oracle = ColoringOracle::new(ProfileColoring::new(profile.clone(), n));
    let outcome = solve3(&mut oracle).map_err(fast3_error)?;
    let mut report = profile_report("solve3", "fast3", &profile, k, args.epsilon, &outcome.solution, &oracle)?;
    report.rounds = Some(outcome.rounds.len());
    if args.trace {
        report.trace = Some(
            outcome
                .rounds
                .iter()
                .map(|r| RoundJson {
                    region: [r.region.i1, r.region.i2, r.region.k1, r.region.k2],
                    index: r.index,
                    axis: match r.axis {
                        CutAxis::I => "i".into(),
                        CutAxis::K => "k".into(),
                    },
                    cut: r.cut,
                    first_index: r.first_index,
                    second_index: r.second_index,
                    kept_first: r.kept_first,
                    queries: r.queries,
                })
                .collect(),
        );
    }
    write_output(args.report, &json::to_string(&report))
}

pub fn gen(kind: GenKind, n: u32, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let inline = n <= INLINE_GRID_LIMIT;
    let file = match kind {
        GenKind::Brouwer => {
            let inst = Brouwer2DInstance::planted_random(n, seed).map_err(reduction_error)?;
            let side = n as usize + 1;
            GenFile {
                kind,
                n,
                seed,
                plant: inst.plant().map(|(x, y)| [x, y]),
                values: inline.then(|| Grid::Colors(inst.values().chunks(side).map(<[u8]>::to_vec).collect())),
                procedural: (!inline).then(|| PROCEDURAL.into()),
            }
        }
        GenKind::Dp => {
            let inst = random_dp_instance(n, seed).map_err(reduction_error)?;
            let side = n as usize + 1;
            GenFile {
                kind,
                n,
                seed,
                plant: inst.planted_zero().map(|(x, y)| [x, y]),
                values: inline.then(|| Grid::Directions(inst.values().chunks(side).map(<[_]>::to_vec).collect())),
                procedural: (!inline).then(|| PROCEDURAL.into()),
            }
        }
    };
    // large value grids stay on one line
    let text =
        if inline { serde_json::to_string(&file).expect("grids serialize") + "\n" } else { json::to_string(&file) };
    write_output(out, &text)
}

fn shout_json(ev: &ShoutEvent) -> ShoutJson {
    ShoutJson {
        shouter: ev.shouter,
        simultaneous: ev.simultaneous.clone(),
        sword: Q(ev.sword),
        attained: ev.attained,
        knives: ev.knives.iter().copied().map(Q).collect(),
        middle_knife: Q(ev.middle_knife),
        middle_holder: ev.middle_holder,
        pieces: ev.pieces.iter().map(|&(a, b)| [Q(a), Q(b)]).collect(),
    }
}

/// Parses `x=<p/q>,delta=<p/q>`.
pub fn parse_adversary(text: &str) -> Result<(Rational, Rational), CliError> {
    let mut x = None;
    let mut delta = None;
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value in --adversary, found {part:?}")))?;
        let value = envycut_core::rational::parse(value)
            .ok_or_else(|| CliError::Usage(format!("{value:?} is not a rational")))?;
        match key.trim() {
            "x" => x = Some(value),
            "delta" => delta = Some(value),
            other => return Err(CliError::Usage(format!("unknown --adversary key {other:?}"))),
        }
    }
    match (x, delta) {
        (Some(x), Some(delta)) => Ok((x, delta)),
        _ => Err(CliError::Usage("--adversary needs both x and delta".into())),
    }
}

/// Random query endpoints lie on the dyadic grid `k / 2^QUERY_BITS`.
pub const QUERY_BITS: u32 = 40;

pub struct StromquistArgs<'a> {
    pub instance: Option<&'a Path>,
    pub adversary: Option<&'a str>,
    pub queries: Option<usize>,
    pub seed: u64,
    pub report: Option<&'a Path>,
}

pub fn stromquist(args: StromquistArgs) -> Result<(), CliError> {
    let (profile, source, window) = match (args.instance, args.adversary) {
        (Some(path), None) => {
            let InstanceFile::Profile(file) = read_instance(path)? else {
                return Err(CliError::Instance("stromquist needs a utility profile instance".into()));
            };
            (file.to_profile(true)?, path.display().to_string(), None)
        }
        (None, Some(text)) => {
            let (x, delta) = parse_adversary(text)?;
            let profile = adversary_profile(x, delta).map_err(|e| CliError::Instance(e.to_string()))?;
            (profile, format!("adversary x={x},delta={delta}"), Some((x, delta)))
        }
        _ => return Err(CliError::Usage("give exactly one of --instance and --adversary".into())),
    };
    let event = simulate(&profile).map_err(|e| CliError::Instance(e.to_string()))?;
    let experiment = match (args.queries, window) {
        (None, _) => None,
        (Some(_), None) => return Err(CliError::Usage("--queries compares C with C_x and needs --adversary".into())),
        (Some(count), Some((x, delta))) => {
            let queries = random_queries(count, args.seed, QUERY_BITS);
            let r =
                indistinguishability_experiment(x, delta, &queries).map_err(|e| CliError::Instance(e.to_string()))?;
            Some(ExperimentJson {
                x: Q(x),
                delta: Q(delta),
                seed: args.seed,
                queries: r.queries,
                distinguishing: r.distinguishing,
                fraction: r.fraction(),
                violations: r.violations,
            })
        }
    };
    let report = StromquistReport { command: "stromquist".into(), source, shout: shout_json(&event), experiment };
    write_output(args.report, &json::to_string(&report))
}

pub fn verify(instance: &Path, solution: &Path, report: Option<&Path>) -> Result<(), CliError> {
    let text = fs::read_to_string(solution).map_err(|e| CliError::Io(format!("{}: {e}", solution.display())))?;
    let input: SolutionInput = serde_json::from_str(&text).map_err(|e| CliError::Instance(e.to_string()))?;
    let outcome = match read_instance(instance)? {
        InstanceFile::Profile(file) => verify_profile(&file.to_profile(false)?, &input)?,
        InstanceFile::Generated(file) => verify_generated(&file, &input)?,
    };
    write_output(report, &json::to_string(&outcome))?;
    if outcome.envy_free {
        Ok(())
    } else {
        Err(CliError::NotEnvyFree(outcome.reason))
    }
}

fn rebuild_cell(input: &SolutionInput) -> Result<SolutionCell, String> {
    let s = &input.solution;
    let cell = BaseCell::new(CubePoint::new(s.corner.clone()), s.perm.clone()).map_err(|e| e.to_string())?;
    if !cell.in_simplex(input.n) {
        return Err("cell lies outside the simplex".into());
    }
    let vertices = cell_vertices(&cell, input.n).map_err(|e| e.to_string())?;
    let listed: Vec<BarycentricPoint> = s.vertices.iter().cloned().map(BarycentricPoint::new).collect();
    if vertices != listed {
        return Err("listed vertices are not the vertices of the cell".into());
    }
    Ok(SolutionCell { cell, n: input.n, vertices, colors: s.colors.clone(), permutation: s.permutation.clone() })
}

fn failed(reason: impl Into<String>) -> VerifyReport {
    VerifyReport { command: "verify".into(), envy_free: false, reason: reason.into(), max_envy: None, bound: None }
}

fn verify_profile(profile: &UtilityProfile, input: &SolutionInput) -> Result<VerifyReport, CliError> {
    let cell = match rebuild_cell(input) {
        Ok(cell) => cell,
        Err(reason) => return Ok(failed(reason)),
    };
    if cell.dim() != profile.dim() {
        return Ok(failed(format!("cell dimension {} does not match d = {}", cell.dim(), profile.dim())));
    }
    let report = match verify_envy_free(&cell, profile) {
        Ok(r) => r,
        Err(e) => return Ok(failed(e.to_string())),
    };
    let within = report.within_bound();
    let reason = match (report.valid, within) {
        (true, true) => "preferences at the cell vertices form the reported allocation".to_string(),
        (false, _) => "recomputed preferences do not match the reported colors and allocation".to_string(),
        (true, false) => "envy exceeds the bound".to_string(),
    };
    Ok(VerifyReport {
        command: "verify".into(),
        envy_free: report.valid && within,
        reason,
        max_envy: Some(Q(report.max_envy)),
        bound: Some(Q(report.bound)),
    })
}

fn verify_generated(file: &GenFile, input: &SolutionInput) -> Result<VerifyReport, CliError> {
    let (inst, dp) = load_generated(file)?;
    let Some([x, y]) = input.square else {
        return Ok(failed("report has no square"));
    };
    if x >= inst.n() || y >= inst.n() {
        return Ok(failed("square lies outside the grid"));
    }
    let ok = square_ok(&inst, dp.as_ref(), BrouwerSquare { x, y });
    let reason = if ok { "square is a solution" } else { "square is not a solution" };
    Ok(VerifyReport { command: "verify".into(), envy_free: ok, reason: reason.into(), max_envy: None, bound: None })
}

/// Text dump of the Kuhn cells of the whole simplex with vertex labels.
pub fn cells(d: usize, n: u32) -> Result<String, CliError> {
    const LIMIT: u128 = 100_000;
    let required = envycut_core::sperner::required_budget(d, n);
    if d == 0 || n == 0 || required > LIMIT {
        return Err(CliError::Usage(format!(
            "cells dumps at most {LIMIT} candidate cells; d={d} N={n} needs {required}"
        )));
    }
    let mut out = String::new();
    for cell in envycut_core::sperner::Region::full(d, n).cells() {
        let vertices = cell_vertices(&cell, n).map_err(|e| CliError::Solver(e.to_string()))?;
        let listed: Vec<String> = vertices.iter().map(|v| format!("{:?}:{}", v.coords(), label(v))).collect();
        out.push_str(&format!("corner={:?} perm={:?} {}\n", cell.corner.coords, cell.perm, listed.join(" ")));
    }
    Ok(out)
}

/// A coloring-oracle instance for the benchmarks: the seeded random profile.
pub fn bench_oracle(d: usize, n: u32, seed: u64) -> ColoringOracle<ProfileColoring> {
    ColoringOracle::new(ProfileColoring::new(envycut_core::utility::random::random_profile(d, seed), n))
}

/// Summary of a cell for CSV rows: vertex coordinates joined by `;`.
pub fn cell_summary(cell: &SolutionCell) -> String {
    cell.vertices.iter().map(|v| format!("{:?}", v.coords()).replace(", ", " ")).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use envycut_core::rational::rat;

    #[test]
    fn grid_size_rounds_up_to_powers_of_two() {
        assert_eq!(grid_size(None, Some(Q(rat(1, 100))), int(1)).unwrap(), 128);
        assert_eq!(grid_size(None, Some(Q(rat(1, 64))), int(1)).unwrap(), 64);
        assert_eq!(grid_size(None, Some(Q(rat(1, 10))), int(20)).unwrap(), 256);
        assert_eq!(grid_size(None, Some(Q(int(5))), int(1)).unwrap(), 1);
        assert_eq!(grid_size(Some(12), None, int(1)).unwrap(), 12);
        assert!(grid_size(None, None, int(1)).is_err());
        assert!(grid_size(None, Some(Q(int(0))), int(1)).is_err());
        assert!(grid_size(None, Some(Q(rat(1, 1 << 40))), int(1)).is_err());
    }

    #[test]
    fn adversary_spec_parses() {
        assert_eq!(parse_adversary("x=1/5,delta=1/1000000").unwrap(), (rat(1, 5), rat(1, 1_000_000)));
        assert_eq!(parse_adversary("delta=1/10, x=1/4").unwrap(), (rat(1, 4), rat(1, 10)));
        assert!(parse_adversary("x=1/5").is_err());
        assert!(parse_adversary("x=1/5,delta=abc").is_err());
        assert!(parse_adversary("y=1,delta=1").is_err());
    }

    #[test]
    fn cells_output_matches_cell_count() {
        assert_eq!(cells(2, 4).unwrap().lines().count(), 16);
        assert!(cells(5, 100).is_err());
    }
}
