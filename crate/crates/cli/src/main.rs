use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dartminhash::experiment::{
    gen_pair, gen_set, run_estimation, run_timing, standard_grid, write_estimation_csv, write_timing_csv, Algorithm,
    ExperimentConfig, TimingCell,
};
use dartminhash::{one_bit, parse_sets, DartMinHash, LshIndex, LshParams, WeightedSet};

#[derive(Parser, Debug)]
#[command(name = "dartminhash", version, about = "Weighted minhash experiments and tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimation accuracy on synthetic pairs with a known Jaccard similarity.
    Estimate(EstimateArgs),
    /// Time per sketch over a grid of (k, l0, l1).
    Timing(TimingArgs),
    /// Sketch weighted sets read in the text format.
    Sketch(SketchArgs),
    /// Build an LSH index and query it.
    LshDemo(LshArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 256)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 256)]
    l0: usize,
    #[arg(long, default_value_t = 1.0)]
    l1: f64,
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 0.5)]
    target_j: f64,
    /// dartminhash, icws, icws-fast or bottomk.
    #[arg(long, default_value = "dartminhash")]
    algo: Algorithm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Grid {
    /// The single cell given by --k, --l0 and --l1.
    Cell,
    /// 15 cells over k, l0 and l1.
    Standard,
}

#[derive(Args, Debug)]
struct TimingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 256)]
    l0: usize,
    #[arg(long, default_value_t = 1.0)]
    l1: f64,
    /// Algorithms to time, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "dartminhash,icws,icws-fast,bottomk")]
    algo: Vec<Algorithm>,
    #[arg(long, value_enum, default_value_t = Grid::Cell)]
    grid: Grid,
    /// Random sets per cell.
    #[arg(long, default_value_t = 100)]
    sets: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SketchFormat {
    Csv,
    Binary,
}

#[derive(Args, Debug)]
struct SketchArgs {
    #[command(flatten)]
    common: Common,
    /// Sets, one per line as `id:weight` tokens; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SketchFormat::Csv)]
    format: SketchFormat,
    /// Keep only the lowest bit of every hash value.
    #[arg(long)]
    one_bit: bool,
}

#[derive(Args, Debug)]
struct LshArgs {
    #[command(flatten)]
    common: Common,
    /// Points to index, one set per line; point ids are 0-based line numbers.
    /// Synthetic points are generated when absent.
    #[arg(long, requires = "queries")]
    input: Option<PathBuf>,
    /// Query sets, one per line.
    #[arg(long, requires = "input")]
    queries: Option<PathBuf>,
    /// Number of tables L.
    #[arg(long, default_value_t = 16)]
    tables: usize,
    /// Hash values per table K.
    #[arg(long, default_value_t = 3)]
    hashes_per_table: usize,
    /// Similarity threshold that selects the probed weight classes.
    #[arg(long, default_value_t = 0.5)]
    j1: f64,
    #[arg(long, default_value_t = 256)]
    l0: usize,
    #[arg(long, default_value_t = 1.0)]
    l1: f64,
    /// Synthetic points, each with one planted query.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// Similarity of every planted query to its point.
    #[arg(long, default_value_t = 0.5)]
    target_j: f64,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn out_name(path: Option<&Path>) -> String {
    path.map_or_else(|| "standard output".to_string(), |p| p.display().to_string())
}

fn read_sets(path: Option<&Path>) -> Result<Vec<WeightedSet>> {
    let mut text = String::new();
    match path {
        Some(p) => {
            File::open(p)
                .and_then(|mut f| f.read_to_string(&mut text))
                .with_context(|| format!("reading {}", p.display()))?;
        }
        None => {
            io::stdin().read_to_string(&mut text).context("reading standard input")?;
        }
    }
    let name = path.map_or_else(|| "standard input".to_string(), |p| p.display().to_string());
    parse_sets(&text).with_context(|| format!("parsing {name}"))
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let config = ExperimentConfig {
        algorithm: args.algo,
        k: args.common.k,
        l0: args.l0,
        l1: args.l1,
        pairs: args.pairs,
        target_j: args.target_j,
        seed: args.common.seed,
    };
    let rows = run_estimation(&config)?;
    let out = args.common.out.as_deref();
    write_estimation_csv(open_output(out)?, &config, &rows).with_context(|| format!("writing {}", out_name(out)))
}

fn timing(args: TimingArgs) -> Result<()> {
    if args.sets == 0 {
        bail!("--sets must be positive");
    }
    let cells = match args.grid {
        Grid::Cell => vec![TimingCell { k: args.common.k, l0: args.l0, l1: args.l1 }],
        Grid::Standard => standard_grid(),
    };
    let rows = run_timing(&args.algo, &cells, args.sets, args.common.seed)?;
    let out = args.common.out.as_deref();
    write_timing_csv(open_output(out)?, args.common.seed, args.sets, &rows)
        .with_context(|| format!("writing {}", out_name(out)))
}

fn sketch(args: SketchArgs) -> Result<()> {
    let sets = read_sets(args.input.as_deref())?;
    let sketcher = DartMinHash::new(args.common.k, args.common.seed)?;
    let out = args.common.out.as_deref();
    let mut w = open_output(out)?;
    let write = |w: &mut dyn Write| -> Result<()> {
        match args.format {
            SketchFormat::Binary => {
                let mut buf = Vec::new();
                for (n, x) in sets.iter().enumerate() {
                    let s = sketcher.sketch(x).with_context(|| format!("sketching set {}", n + 1))?;
                    if args.one_bit {
                        one_bit(&s).encode_into(&mut buf);
                    } else {
                        s.encode_into(&mut buf);
                    }
                }
                w.write_all(&buf)?;
            }
            SketchFormat::Csv => {
                writeln!(w, "# seed={} k={}", args.common.seed, args.common.k)?;
                writeln!(w, "set,coordinate,value")?;
                for (n, x) in sets.iter().enumerate() {
                    let s = sketcher.sketch(x).with_context(|| format!("sketching set {}", n + 1))?;
                    if args.one_bit {
                        for (j, b) in one_bit(&s).bits().enumerate() {
                            writeln!(w, "{n},{j},{}", b as u8)?;
                        }
                    } else {
                        for (j, v) in s.values().iter().enumerate() {
                            writeln!(w, "{n},{j},{v:016x}")?;
                        }
                    }
                }
            }
        }
        w.flush()?;
        Ok(())
    };
    write(&mut w).with_context(|| format!("writing {}", out_name(out)))
}

fn lsh_demo(args: LshArgs) -> Result<()> {
    let params = LshParams::with_threshold(args.tables, args.hashes_per_table, args.j1)?;
    let seed = args.common.seed;
    let mut index = LshIndex::new(params, seed)?;
    let (points, queries, planted) = match (&args.input, &args.queries) {
        (Some(p), Some(q)) => (read_sets(Some(p))?, read_sets(Some(q))?, false),
        _ => {
            if args.pairs == 0 || args.l0 == 0 || !args.l1.is_finite() || args.l1 <= 0.0 {
                bail!("--pairs, --l0 and --l1 must be positive");
            }
            let mut g = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<WeightedSet> = (0..args.pairs).map(|_| gen_set(args.l0, args.l1, &mut g)).collect();
            let queries = points.iter().map(|x| gen_pair(x, args.target_j, &mut g)).collect::<Result<Vec<_>, _>>()?;
            (points, queries, true)
        }
    };
    for (id, x) in points.into_iter().enumerate() {
        if x.is_empty() {
            continue;
        }
        index.insert(id as u64, x).with_context(|| format!("indexing point {id}"))?;
    }

    let out = args.common.out.as_deref();
    let mut w = open_output(out)?;
    let mut found = 0;
    let mut write = |w: &mut dyn Write| -> Result<()> {
        writeln!(w, "# seed={seed} tables={} hashes_per_table={} j1={}", args.tables, args.hashes_per_table, args.j1)?;
        writeln!(w, "query,id,similarity")?;
        for (n, q) in queries.iter().enumerate() {
            let candidates = index.query(q).with_context(|| format!("query {n}"))?;
            if candidates.iter().any(|c| c.id == n as u64) {
                found += 1;
            }
            for c in candidates {
                writeln!(w, "{n},{},{}", c.id, c.similarity)?;
            }
        }
        w.flush()?;
        Ok(())
    };
    write(&mut w).with_context(|| format!("writing {}", out_name(out)))?;
    if planted {
        let n = queries.len();
        eprintln!("planted neighbors found: {found}/{n} ({:.3})", found as f64 / n as f64);
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Estimate(a) => estimate(a),
        Command::Timing(a) => timing(a),
        Command::Sketch(a) => sketch(a),
        Command::LshDemo(a) => lsh_demo(a),
    }
}
