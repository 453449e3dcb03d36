//! Scaling benchmarks. Each row runs in a child process so a slow row can be
//! killed at its deadline while the suite continues.

use std::collections::VecDeque;
use std::io::Read;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use envycut_core::fast3::solve3;
use envycut_core::sperner::search_dnc;
use serde::{Deserialize, Serialize};

use crate::commands::{bench_oracle, cell_summary, fast3_error, sperner_error};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    DncScaling,
    Fast3Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RowAlgo {
    Dnc,
    Fast3,
    /// The trailing summary row.
    Fit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub algo: RowAlgo,
    pub d: usize,
    pub n: u32,
    pub seed: u64,
    pub queries: Option<usize>,
    pub wall_ms: Option<f64>,
    /// `ok`, `timeout`, `error: ..` or `summary`.
    pub status: String,
    pub solution: String,
}

pub struct SuiteArgs {
    pub suite: Suite,
    pub d: Option<usize>,
    pub sizes: Option<Vec<u32>>,
    pub seeds: u64,
    pub seed_base: u64,
    pub timeout: Duration,
    pub jobs: usize,
}

/// Runs one benchmark row in this process.
pub fn run_row(algo: RowAlgo, d: usize, n: u32, seed: u64) -> Result<BenchmarkRow, CliError> {
    let mut oracle = bench_oracle(d, n, seed);
    let start = Instant::now();
    let cell = match algo {
        RowAlgo::Dnc => search_dnc(&mut oracle).map_err(sperner_error)?,
        RowAlgo::Fast3 => solve3(&mut oracle).map_err(fast3_error)?.solution,
        RowAlgo::Fit => return Err(CliError::Usage("fit rows are computed, not run".into())),
    };
    let wall = start.elapsed();
    Ok(BenchmarkRow {
        algo,
        d,
        n,
        seed,
        queries: Some(oracle.distinct_queries()),
        wall_ms: Some((wall.as_secs_f64() * 1e6).round() / 1e3),
        status: "ok".into(),
        solution: cell_summary(&cell),
    })
}

pub fn row_csv(row: &BenchmarkRow, header: bool) -> Result<String, CliError> {
    let mut writer = csv::WriterBuilder::new().has_headers(header).from_writer(Vec::new());
    writer.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

struct Job {
    slot: usize,
    algo: RowAlgo,
    d: usize,
    n: u32,
    seed: u64,
}

struct Running {
    job: Job,
    child: Child,
    started: Instant,
}

fn spawn(job: Job) -> Result<Running, CliError> {
    let exe = std::env::current_exe()?;
    let algo = match job.algo {
        RowAlgo::Dnc => "dnc",
        RowAlgo::Fast3 => "fast3",
        RowAlgo::Fit => unreachable!("fit rows are not spawned"),
    };
    let child = Command::new(exe)
        .args(["bench-row", "--algo", algo, "--d", &job.d.to_string(), "--n", &job.n.to_string()])
        .args(["--seed", &job.seed.to_string()])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    Ok(Running { job, child, started: Instant::now() })
}

fn failed_row(job: &Job, status: String) -> BenchmarkRow {
    BenchmarkRow {
        algo: job.algo,
        d: job.d,
        n: job.n,
        seed: job.seed,
        queries: None,
        wall_ms: None,
        status,
        solution: String::new(),
    }
}

fn collect(mut running: Running) -> BenchmarkRow {
    let mut out = String::new();
    let mut err = String::new();
    if let Some(s) = running.child.stdout.as_mut() {
        let _ = s.read_to_string(&mut out);
    }
    if let Some(s) = running.child.stderr.as_mut() {
        let _ = s.read_to_string(&mut err);
    }
    let parsed = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(out.as_bytes())
        .deserialize::<BenchmarkRow>()
        .next()
        .and_then(Result::ok);
    parsed.unwrap_or_else(|| failed_row(&running.job, format!("error: {}", err.trim().replace('\n', " "))))
}

/// Least-squares fit `y = a + b x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let m = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

fn summary(suite: Suite, d: usize, rows: &[BenchmarkRow]) -> BenchmarkRow {
    let ok = rows.iter().filter_map(|r| r.queries.map(|q| (f64::from(r.n), q as f64)));
    let text = match suite {
        Suite::DncScaling => {
            let points: Vec<_> = ok.map(|(n, q)| (n.ln(), q.ln())).collect();
            linear_fit(&points).map(|(_, b)| format!("slope={b:.4}"))
        }
        Suite::Fast3Scaling => {
            let points: Vec<_> = ok.map(|(n, q)| (n.log2().powi(2), q)).collect();
            linear_fit(&points).map(|(a, b)| format!("a={a:.4} b={b:.4}"))
        }
    };
    BenchmarkRow {
        algo: RowAlgo::Fit,
        d,
        n: 0,
        seed: 0,
        queries: None,
        wall_ms: None,
        status: "summary".into(),
        solution: text.unwrap_or_else(|| "insufficient rows".into()),
    }
}

pub fn run_suite(args: &SuiteArgs) -> Result<String, CliError> {
    let (algo, d, default_sizes): (_, _, Vec<u32>) = match args.suite {
        Suite::DncScaling => (RowAlgo::Dnc, args.d.unwrap_or(3), vec![8, 16, 32, 64]),
        Suite::Fast3Scaling => {
            if args.d.is_some_and(|d| d != 2) {
                return Err(CliError::Usage("fast3-scaling runs at d = 2".into()));
            }
            (RowAlgo::Fast3, 2, (8..=20).step_by(2).map(|k| 1 << k).collect())
        }
    };
    let sizes = args.sizes.clone().unwrap_or(default_sizes);
    if let Some(bad) = sizes.iter().find(|n| !n.is_power_of_two()) {
        return Err(CliError::Usage(format!("size {bad} is not a power of two")));
    }
    let mut pending: VecDeque<Job> = VecDeque::new();
    for &n in &sizes {
        for seed in args.seed_base..args.seed_base + args.seeds {
            pending.push_back(Job { slot: pending.len(), algo, d, n, seed });
        }
    }
    let mut rows: Vec<Option<BenchmarkRow>> = vec![None; pending.len()];
    let mut running: Vec<Running> = Vec::new();
    while !pending.is_empty() || !running.is_empty() {
        while running.len() < args.jobs.max(1) {
            match pending.pop_front() {
                Some(job) => running.push(spawn(job)?),
                None => break,
            }
        }
        let mut k = 0;
        while k < running.len() {
            let r = &mut running[k];
            if r.child.try_wait()?.is_some() {
                let r = running.swap_remove(k);
                let slot = r.job.slot;
                rows[slot] = Some(collect(r));
            } else if r.started.elapsed() > args.timeout {
                let _ = r.child.kill();
                let _ = r.child.wait();
                let r = running.swap_remove(k);
                rows[r.job.slot] = Some(failed_row(&r.job, "timeout".into()));
            } else {
                k += 1;
            }
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    let mut rows: Vec<BenchmarkRow> = rows.into_iter().map(|r| r.expect("every row finishes")).collect();
    rows.push(summary(args.suite, d, &rows));
    let mut out = String::new();
    for (k, row) in rows.iter().enumerate() {
        out.push_str(&row_csv(row, k == 0)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_fit_recovers_a_line() {
        let points: Vec<_> = (0..5).map(|x| (f64::from(x), 3.0 + 2.0 * f64::from(x))).collect();
        let (a, b) = linear_fit(&points).unwrap();
        assert!((a - 3.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
        assert!(linear_fit(&points[..1]).is_none());
    }

    #[test]
    fn rows_round_trip_through_csv() {
        let row = run_row(RowAlgo::Dnc, 2, 8, 1).unwrap();
        let text = row_csv(&row, false).unwrap();
        let back: BenchmarkRow = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes())
            .deserialize()
            .next()
            .unwrap()
            .unwrap();
        assert_eq!(back.queries, row.queries);
        assert_eq!(back.solution, row.solution);
    }
}
