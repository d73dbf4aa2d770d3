//! Timing harness: isomorphic and non-isomorphic random recursive tree pairs.
//!
//! For every `(case, size, trial)` a pair of trees is generated from a seed
//! derived from the base seed, then each selected algorithm is timed on that
//! pair. Only the decider call sits inside the timed region.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::exec::{map_indexed, with_threads, Execution};
use crate::iso::Algorithm;
use crate::tree::Tree;
use crate::treegen::{isomorphic_copy, random_recursive_tree, GenError, TreeRng};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no records to summarize")]
    EmptyInput,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    Iso,
    NonIso,
}

impl Case {
    pub const ALL: [Case; 2] = [Case::Iso, Case::NonIso];

    pub fn name(self) -> &'static str {
        match self {
            Case::Iso => "iso",
            Case::NonIso => "noniso",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown case {s:?} (expected iso or noniso)")))
    }
}

/// One timed decider call.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub case: Case,
    pub trial: usize,
    pub seed: u64,
    pub seconds: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Trials per `(case, size)` cell.
    pub trials: usize,
    /// Trials for sizes above [`BenchConfig::LARGE_SIZE`], when set.
    pub large_trials: Option<usize>,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub cases: Vec<Case>,
    /// Untimed decider calls before each measurement.
    pub warmup: usize,
    pub execution: Execution,
    /// Worker cap; `None` uses every available core.
    pub threads: Option<usize>,
}

impl BenchConfig {
    pub const LARGE_SIZE: usize = 100_000;

    pub fn trials_for(&self, n: usize) -> usize {
        match self.large_trials {
            Some(t) if n > Self::LARGE_SIZE => t,
            _ => self.trials,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: &str| Err(BenchError::Config(msg.to_string()));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return fail("sizes must be non-empty and each at least 1");
        }
        if self.trials == 0 || self.large_trials == Some(0) {
            return fail("trials must be at least 1");
        }
        if self.algorithms.is_empty() {
            return fail("at least one algorithm is required");
        }
        if self.cases.is_empty() {
            return fail("at least one case is required");
        }
        Ok(())
    }
}

impl Default for BenchConfig {
    /// Sizes `10^1..=10^6`, 100 trials per cell (20 above `10^5`), both
    /// algorithms, both cases.
    fn default() -> Self {
        Self {
            sizes: (1..=6).map(|i| 10usize.pow(i)).collect(),
            trials: 100,
            large_trials: Some(20),
            seed: 0,
            algorithms: vec![Algorithm::Primes, Algorithm::Original],
            cases: Case::ALL.to_vec(),
            warmup: 0,
            execution: Execution::Parallel,
            threads: None,
        }
    }
}

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial, independent of scheduling and of which other cells run.
pub fn trial_seed(base: u64, case: Case, n: usize, trial: usize) -> u64 {
    let case_tag = match case {
        Case::Iso => 1,
        Case::NonIso => 2,
    };
    mix64(mix64(mix64(base ^ case_tag) ^ n as u64) ^ trial as u64)
}

/// The pair of trees for one trial.
pub fn trial_pair(case: Case, n: usize, seed: u64) -> Result<(Tree, Tree), GenError> {
    let mut rng = TreeRng::seed_from(seed);
    let first = random_recursive_tree(n, &mut rng)?;
    let second = match case {
        Case::Iso => isomorphic_copy(&first, &mut rng),
        Case::NonIso => random_recursive_tree(n, &mut rng)?,
    };
    Ok((first, second))
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    run_bench_with(cfg, |algo, a, b| algo.decide(a, b))
}

/// [`run_bench`] with a caller-supplied decider, timed exactly like the real ones.
pub fn run_bench_with<F>(cfg: &BenchConfig, decide: F) -> Result<Vec<BenchRecord>, BenchError>
where
    F: Fn(Algorithm, &Tree, &Tree) -> bool + Sync + Send,
{
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &case in &cfg.cases {
        for &n in &cfg.sizes {
            for trial in 0..cfg.trials_for(n) {
                jobs.push((case, n, trial));
            }
        }
    }

    let results = with_threads(cfg.threads, || {
        map_indexed(cfg.execution, jobs.len(), |j| {
            let (case, n, trial) = jobs[j];
            let seed = trial_seed(cfg.seed, case, n, trial);
            let (t1, t2) = trial_pair(case, n, seed)?;
            let records = cfg
                .algorithms
                .iter()
                .map(|&algorithm| {
                    for _ in 0..cfg.warmup {
                        std::hint::black_box(decide(algorithm, &t1, &t2));
                    }
                    let start = Instant::now();
                    let verdict = decide(algorithm, std::hint::black_box(&t1), &t2);
                    let seconds = start.elapsed().as_secs_f64();
                    BenchRecord {
                        algorithm,
                        n,
                        case,
                        trial,
                        seed,
                        seconds,
                        verdict,
                    }
                })
                .collect::<Vec<_>>();
            Ok::<_, GenError>(records)
        })
    });

    let mut out = Vec::with_capacity(jobs.len() * cfg.algorithms.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    algorithm: &'a str,
    n: usize,
    case: &'a str,
    trial: usize,
    seed: u64,
    seconds: String,
    verdict: bool,
}

/// Header `algorithm,n,case,trial,seed,seconds,verdict`.
pub fn write_csv<W: Write>(records: &[BenchRecord], writer: W) -> Result<(), BenchError> {
    let mut csv = csv::Writer::from_writer(writer);
    for r in records {
        csv.serialize(CsvRow {
            algorithm: r.algorithm.name(),
            n: r.n,
            case: r.case.name(),
            trial: r.trial,
            seed: r.seed,
            seconds: format!("{:.9}", r.seconds),
            verdict: r.verdict,
        })?;
    }
    if records.is_empty() {
        csv.write_record(["algorithm", "n", "case", "trial", "seed", "seconds", "verdict"])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_csv_file(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

/// Timing statistics for one `(algorithm, n, case)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub algorithm: String,
    pub n: usize,
    pub case: String,
    pub trials: usize,
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    })
}

/// Per-cell statistics, ordered by case, size, then algorithm.
pub fn summarize(records: &[BenchRecord]) -> Result<Vec<CellSummary>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let mut cells: BTreeMap<(Case, usize, Algorithm), Vec<f64>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.case, r.n, r.algorithm))
            .or_default()
            .push(r.seconds);
    }
    Ok(cells
        .into_iter()
        .map(|((case, n, algorithm), mut times)| {
            let trials = times.len();
            let mean = times.iter().sum::<f64>() / trials as f64;
            let min = times.iter().copied().fold(f64::INFINITY, f64::min);
            let max = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            CellSummary {
                algorithm: algorithm.name().to_string(),
                n,
                case: case.name().to_string(),
                trials,
                median: median(&mut times).unwrap(),
                mean,
                min,
                max,
            }
        })
        .collect())
}

pub fn write_summary_csv<W: Write>(summary: &[CellSummary], writer: W) -> Result<(), BenchError> {
    let mut csv = csv::Writer::from_writer(writer);
    for cell in summary {
        csv.serialize(cell)?;
    }
    csv.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::canonical_string;

    fn tiny(trials: usize) -> BenchConfig {
        BenchConfig {
            sizes: vec![10],
            trials,
            large_trials: None,
            seed: 5,
            ..BenchConfig::default()
        }
    }

    fn record(seconds: f64) -> BenchRecord {
        BenchRecord {
            algorithm: Algorithm::Primes,
            n: 10,
            case: Case::Iso,
            trial: 0,
            seed: 0,
            seconds,
            verdict: true,
        }
    }

    #[test]
    fn record_count_and_order() {
        let records = run_bench(&tiny(2)).unwrap();
        assert_eq!(records.len(), 8);
        let keys: Vec<_> = records
            .iter()
            .map(|r| (r.case, r.n, r.trial, r.algorithm))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), keys.len());
        assert!(records.iter().all(|r| r.seconds > 0.0));
    }

    #[test]
    fn iso_cells_are_all_true() {
        let cfg = BenchConfig {
            sizes: vec![10, 100, 1000],
            trials: 5,
            ..tiny(5)
        };
        let records = run_bench(&cfg).unwrap();
        assert!(records.iter().filter(|r| r.case == Case::Iso).all(|r| r.verdict));
    }

    #[test]
    fn noniso_verdicts_are_truthful() {
        let cfg = BenchConfig {
            sizes: vec![8, 10_000],
            trials: 30,
            cases: vec![Case::NonIso],
            ..tiny(30)
        };
        let records = run_bench(&cfg).unwrap();
        for r in &records {
            let (a, b) = trial_pair(r.case, r.n, r.seed).unwrap();
            assert_eq!(r.verdict, canonical_string(&a) == canonical_string(&b));
        }
        let large_hits = records.iter().filter(|r| r.n == 10_000 && r.verdict).count();
        assert_eq!(large_hits, 0);
    }

    #[test]
    fn sequential_and_parallel_runs_agree_apart_from_timing() {
        let strip = |rs: Vec<BenchRecord>| -> Vec<_> {
            rs.into_iter()
                .map(|r| (r.algorithm, r.n, r.case, r.trial, r.seed, r.verdict))
                .collect()
        };
        let seq = run_bench(&BenchConfig {
            execution: Execution::Sequential,
            ..tiny(4)
        })
        .unwrap();
        let par = run_bench(&BenchConfig {
            execution: Execution::Parallel,
            threads: Some(3),
            ..tiny(4)
        })
        .unwrap();
        assert_eq!(strip(seq), strip(par));
    }

    #[test]
    fn timing_excludes_generation() {
        let cfg = BenchConfig {
            sizes: vec![200_000],
            trials: 2,
            ..tiny(2)
        };
        let records = run_bench_with(&cfg, |_, _, _| true).unwrap();
        // Building a 200k-node pair takes milliseconds; a no-op call does not.
        assert!(records.iter().all(|r| r.seconds < 1e-4), "{records:?}");
    }

    #[test]
    fn large_trials_apply_above_threshold() {
        let cfg = BenchConfig::default();
        assert_eq!(cfg.trials_for(100_000), 100);
        assert_eq!(cfg.trials_for(1_000_000), 20);
    }

    #[test]
    fn config_validation() {
        assert!(tiny(0).validate().is_err());
        assert!(BenchConfig {
            sizes: vec![],
            ..tiny(1)
        }
        .validate()
        .is_err());
        assert!(BenchConfig {
            sizes: vec![0],
            ..tiny(1)
        }
        .validate()
        .is_err());
        assert!(BenchConfig {
            algorithms: vec![],
            ..tiny(1)
        }
        .validate()
        .is_err());
        assert!(matches!(run_bench(&tiny(0)), Err(BenchError::Config(_))));
    }

    #[test]
    fn summary_statistics() {
        assert!(matches!(summarize(&[]), Err(BenchError::EmptyInput)));

        let one = summarize(&[record(0.5)]).unwrap();
        assert_eq!(one[0].median, 0.5);

        let two = summarize(&[record(1.0), record(3.0)]).unwrap();
        assert_eq!(two[0].median, 2.0);

        let constant = summarize(&vec![record(0.25); 7]).unwrap();
        assert_eq!(constant[0].mean, 0.25);
        assert_eq!(
            (constant[0].min, constant[0].max, constant[0].trials),
            (0.25, 0.25, 7)
        );
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[record(0.001)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "algorithm,n,case,trial,seed,seconds,verdict\nprimes,10,iso,0,0,0.001000000,true\n"
        );

        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert_eq!(
            String::from_utf8(empty).unwrap(),
            "algorithm,n,case,trial,seed,seconds,verdict\n"
        );
    }

    #[test]
    fn case_names() {
        assert_eq!("iso".parse::<Case>().unwrap(), Case::Iso);
        assert_eq!("noniso".parse::<Case>().unwrap(), Case::NonIso);
        assert!("both".parse::<Case>().is_err());
    }
}
