use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use isoforest::bench::{self, BenchConfig, Case};
use isoforest::codec::{parse_tree, to_parens};
use isoforest::exec::Execution;
use isoforest::primes::first_primes;
use isoforest::treegen::{self, TreeRng};
use isoforest::{Algorithm, Tree};

const THREADS_ENV: &str = "ISOFOREST_THREADS";

#[derive(Parser)]
#[command(
    name = "isoforest",
    version,
    about = "Rooted unordered tree isomorphism toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two trees are isomorphic (exit 0 = yes, 1 = no, 2 = bad input).
    Check {
        #[arg(long, value_enum, default_value = "primes")]
        algo: AlgoArg,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Print the first K primes, one per line.
    Primes {
        #[arg(long)]
        count: usize,
    },
    /// Generate a tree in parenthesis format.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Node count (recursive, path, star) or depth (kary).
        #[arg(long)]
        n: Option<usize>,
        /// Arity (kary) or width (extremal).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print one representative per isomorphism class of N-node trees.
    Enum {
        #[arg(long)]
        n: usize,
    },
    /// Time deciders on random recursive tree pairs and write a CSV.
    Bench {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "10,100,1000,10000,100000,1000000"
        )]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Trials for sizes above 100000 (defaults to 20, or --trials if given explicitly lower).
        #[arg(long)]
        large_trials: Option<usize>,
        #[arg(long, value_delimiter = ',', value_enum, default_value = "primes,original")]
        algos: Vec<AlgoArg>,
        #[arg(long, value_delimiter = ',', value_enum, default_value = "iso,noniso")]
        cases: Vec<CaseArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Untimed calls before each measurement.
        #[arg(long, default_value_t = 0)]
        warmup: usize,
        /// Run every trial on the calling thread.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Primes,
    Ideal,
    Original,
    Oracle,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Primes => Algorithm::Primes,
            AlgoArg::Ideal => Algorithm::Ideal,
            AlgoArg::Original => Algorithm::Original,
            AlgoArg::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Iso,
    Noniso,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Iso => Case::Iso,
            CaseArg::Noniso => Case::NonIso,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Recursive,
    Path,
    Star,
    Kary,
    Extremal,
}

fn read_tree(path: &Path) -> Result<Tree> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tree(&text).with_context(|| format!("parsing {}", path.display()))
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
            Ok(Some(n.max(1)))
        }
        _ => Ok(None),
    }
}

fn generate(kind: Kind, n: Option<usize>, k: Option<usize>, seed: u64) -> Result<Tree> {
    let need_n = || n.context("--n is required for this kind");
    let tree = match kind {
        Kind::Recursive => treegen::random_recursive_tree(need_n()?, &mut TreeRng::seed_from(seed))?,
        Kind::Path => treegen::path(need_n()?)?,
        Kind::Star => treegen::star(need_n()?)?,
        Kind::Kary => treegen::complete_kary(k.context("--k (arity) is required for kary")?, need_n()?)?,
        Kind::Extremal => {
            let width = k.or(n).context("--k (width) is required for extremal")?;
            treegen::extremal_width_tree(width)?
        }
    };
    Ok(tree)
}

fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    out.with_file_name(format!("{stem}.summary.csv"))
}

#[allow(clippy::too_many_arguments)]
fn run_bench(
    sizes: Vec<usize>,
    trials: usize,
    large_trials: Option<usize>,
    algos: Vec<AlgoArg>,
    cases: Vec<CaseArg>,
    seed: u64,
    out: &Path,
    warmup: usize,
    sequential: bool,
) -> Result<()> {
    let cfg = BenchConfig {
        sizes,
        trials,
        large_trials: Some(large_trials.unwrap_or(trials.min(20))),
        seed,
        algorithms: algos.into_iter().map(Algorithm::from).collect(),
        cases: cases.into_iter().map(Case::from).collect(),
        warmup,
        execution: if sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        threads: threads_from_env()?,
    };
    let records = bench::run_bench(&cfg)?;
    bench::write_csv_file(&records, out).with_context(|| format!("writing {}", out.display()))?;

    let summary = bench::summarize(&records)?;
    let summary_out = summary_path(out);
    let file =
        std::fs::File::create(&summary_out).with_context(|| format!("writing {}", summary_out.display()))?;
    bench::write_summary_csv(&summary, BufWriter::new(file))?;

    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    writeln!(
        w,
        "{:<9} {:>8} {:<7} {:>6} {:>13} {:>13}",
        "algorithm", "n", "case", "trials", "median_s", "mean_s"
    )?;
    for cell in &summary {
        writeln!(
            w,
            "{:<9} {:>8} {:<7} {:>6} {:>13.6e} {:>13.6e}",
            cell.algorithm, cell.n, cell.case, cell.trials, cell.median, cell.mean
        )?;
    }
    writeln!(w, "wrote {} and {}", out.display(), summary_out.display())?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { algo, file1, file2 } => {
            let t1 = read_tree(&file1)?;
            let t2 = read_tree(&file2)?;
            if Algorithm::from(algo).decide(&t1, &t2) {
                println!("isomorphic");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not isomorphic");
                Ok(ExitCode::from(1))
            }
        }
        Command::Primes { count } => {
            let mut w = BufWriter::new(std::io::stdout().lock());
            for p in first_primes(count) {
                writeln!(w, "{p}")?;
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { kind, n, k, seed } => {
            println!("{}", to_parens(&generate(kind, n, k, seed)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Enum { n } => {
            let mut w = BufWriter::new(std::io::stdout().lock());
            for t in treegen::enumerate_rooted_trees(n)? {
                writeln!(w, "{}", to_parens(&t))?;
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            sizes,
            trials,
            large_trials,
            algos,
            cases,
            seed,
            out,
            warmup,
            sequential,
        } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            run_bench(
                sizes,
                trials,
                large_trials,
                algos,
                cases,
                seed,
                &out,
                warmup,
                sequential,
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
