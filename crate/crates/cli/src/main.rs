//! `sqo`: generate graphs, build and persist distance oracles, answer queries,
//! verify stretch against exact distances, and benchmark parameter sweeps.
//!
//! Exit codes: 0 success, 1 stretch violation found by `verify`, 2 usage
//! error, 3 I/O or format error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use subquad_oracle::harness::{bench_point, verify, VerifyMode};
use subquad_oracle::snapshot::{AnyOracle, BuildParams, OracleKind, Snapshot};
use subquad_oracle::{generate, parse_graph, write_graph, ApspTable, DistanceOracle, Epsilon, Graph, Model};

#[derive(Parser)]
#[command(name = "sqo", version, about = "Subquadratic-space distance oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Path,
    Grid,
    Gnp,
    Geometric,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    NearExact,
    Hierarchy,
}

impl From<OracleArg> for OracleKind {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::NearExact => OracleKind::NearExact,
            OracleArg::Hierarchy => OracleKind::Hierarchy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    AllPairs,
    Sample,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random or structured graph as an edge list.
    Generate {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Vertex count (path, gnp, geometric).
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability (gnp).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Connection radius in the unit square (geometric).
        #[arg(long)]
        radius: Option<f64>,
        /// Weights are integers drawn uniformly from 1..=wmax.
        #[arg(long, default_value_t = 1)]
        wmax: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an oracle over a graph file and write a snapshot.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        oracle: OracleArg,
        /// List length K.
        #[arg(long = "K")]
        k_cut: usize,
        /// Approximation parameter, e.g. 1, 1/2, 0.25.
        #[arg(long, default_value = "1")]
        eps: String,
        /// Hierarchy depth (hierarchy oracle only).
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Pivot sampling constant.
        #[arg(long = "C", default_value_t = 2.0)]
        sampling_c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer one distance query from a snapshot.
    Query {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// Also print a walk realizing the distance (near-exact snapshots only).
        #[arg(long)]
        path: bool,
    },
    /// Check every answer against exact distances recomputed from the snapshot's graph.
    Verify {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, value_enum, default_value = "all-pairs")]
        mode: ModeArg,
        /// Number of sampled pairs (sample mode).
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build and time oracles over a parameter sweep; one CSV row per point.
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        oracle: OracleArg,
        /// Comma-separated K values.
        #[arg(long = "sweep-K", default_value = "16")]
        sweep_k_cut: String,
        /// Comma-separated epsilon values.
        #[arg(long = "sweep-eps", default_value = "1")]
        sweep_eps: String,
        /// Comma-separated hierarchy depths (hierarchy oracle only).
        #[arg(long = "sweep-k", default_value = "2")]
        sweep_k: String,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long = "C", default_value_t = 2.0)]
        sampling_c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Violation,
    Usage(String),
    Io(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }
    fn io(e: impl std::fmt::Display) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            model,
            n,
            p,
            rows,
            cols,
            radius,
            wmax,
            seed,
            out,
        } => cmd_generate(model, n, p, rows, cols, radius, wmax, seed, out.as_deref()),
        Command::Build {
            graph,
            oracle,
            k_cut,
            eps,
            k,
            sampling_c,
            seed,
            out,
        } => cmd_build(&graph, oracle.into(), k_cut, &eps, k, sampling_c, seed, &out),
        Command::Query { snapshot, s, t, path } => cmd_query(&snapshot, s, t, path),
        Command::Verify {
            snapshot,
            mode,
            pairs,
            seed,
        } => cmd_verify(&snapshot, mode, pairs, seed),
        Command::Bench {
            graph,
            oracle,
            sweep_k_cut,
            sweep_eps,
            sweep_k,
            pairs,
            sampling_c,
            seed,
            csv,
        } => cmd_bench(
            &graph,
            oracle.into(),
            &sweep_k_cut,
            &sweep_eps,
            &sweep_k,
            pairs,
            sampling_c,
            seed,
            csv.as_deref(),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn required<T>(value: Option<T>, flag: &str, model: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --model {model}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    model: ModelArg,
    n: Option<usize>,
    p: Option<f64>,
    rows: Option<usize>,
    cols: Option<usize>,
    radius: Option<f64>,
    wmax: u32,
    seed: u64,
    out: Option<&Path>,
) -> Outcome {
    let model = match model {
        ModelArg::Path => Model::Path {
            n: required(n, "n", "path")?,
        },
        ModelArg::Grid => Model::Grid {
            rows: required(rows, "rows", "grid")?,
            cols: required(cols, "cols", "grid")?,
        },
        ModelArg::Gnp => Model::Gnp {
            n: required(n, "n", "gnp")?,
            p: required(p, "p", "gnp")?,
        },
        ModelArg::Geometric => Model::Geometric {
            n: required(n, "n", "geometric")?,
            radius: required(radius, "radius", "geometric")?,
        },
    };
    let g = generate(model, wmax, seed).map_err(Failure::usage)?;
    let text = write_graph(&g);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(Failure::io),
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn read_snapshot(path: &Path) -> Result<Snapshot, Failure> {
    Snapshot::read_file(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn parse_eps(s: &str) -> Result<Epsilon, Failure> {
    s.parse().map_err(Failure::usage)
}

fn stats_json(oracle: &AnyOracle) -> serde_json::Value {
    match oracle {
        AnyOracle::NearExact(o) => serde_json::to_value(o.stats()),
        AnyOracle::Hierarchy(o) => serde_json::to_value(o.stats()),
    }
    .expect("stats serialize")
}

#[allow(clippy::too_many_arguments)]
fn cmd_build(
    graph: &Path,
    kind: OracleKind,
    k_cut: usize,
    eps: &str,
    k: usize,
    sampling_c: f64,
    seed: u64,
    out: &Path,
) -> Outcome {
    let g = read_graph(graph)?;
    let params = BuildParams {
        kind,
        k_cut,
        epsilon: parse_eps(eps)?,
        k,
        sampling_c,
        seed,
    };
    let snap = Snapshot::build(g, params).map_err(Failure::usage)?;
    snap.write_file(out)
        .map_err(|e| Failure::io(format!("{}: {e}", out.display())))?;
    let mut stats = stats_json(&snap.oracle);
    stats["oracle"] = kind.to_string().into();
    stats["snapshot"] = out.display().to_string().into();
    println!("{}", serde_json::to_string_pretty(&stats).expect("json"));
    Ok(())
}

fn fmt_distance(d: f64) -> String {
    if d.is_infinite() {
        "inf".to_string()
    } else {
        format!("{d}")
    }
}

fn cmd_query(snapshot: &Path, s: u32, t: u32, with_path: bool) -> Outcome {
    let snap = read_snapshot(snapshot)?;
    let n = snap.graph.n();
    for v in [s, t] {
        if v as usize >= n {
            return Err(Failure::Usage(format!("vertex {v} out of range for n = {n}")));
        }
    }
    if !with_path {
        println!("{}", fmt_distance(snap.oracle.query(s, t)));
        return Ok(());
    }
    let AnyOracle::NearExact(o) = &snap.oracle else {
        return Err(Failure::Usage(
            "operation not supported: --path needs a near-exact snapshot".into(),
        ));
    };
    match o.query_path(s, t) {
        Ok((d, walk)) => {
            println!("{}", fmt_distance(d));
            let walk: Vec<String> = walk.iter().map(u32::to_string).collect();
            println!("path: {}", walk.join(" "));
        }
        Err(_) => {
            println!("inf");
            println!("path: none");
        }
    }
    Ok(())
}

fn cmd_verify(snapshot: &Path, mode: ModeArg, pairs: usize, seed: u64) -> Outcome {
    let snap = read_snapshot(snapshot)?;
    let apsp = ApspTable::build(&snap.graph);
    let mode = match mode {
        ModeArg::AllPairs => VerifyMode::AllPairs,
        ModeArg::Sample => VerifyMode::Sample { pairs, seed },
    };
    let r = verify(&snap.oracle, &apsp, mode);
    println!("oracle:            {} (n = {})", r.oracle, r.n);
    println!("bound:             d <= q <= {} * d + {}", r.alpha, r.beta);
    println!("pairs:             {}", r.pairs);
    println!(
        "violations:        {} ({} under, {} over)",
        r.violations, r.underestimates, r.overestimates
    );
    println!("max ratio:         {:.6} (plain q/d: {:.6})", r.max_ratio, r.max_plain_ratio);
    println!("mean ratio:        {:.6}", r.mean_ratio);
    println!("exact fraction:    {:.6}", r.exact_fraction);
    println!("time per query:    {:.3} us", r.seconds_per_query * 1e6);
    println!("relaxations/query: {:.1} (max {})", r.mean_relaxations, r.max_relaxations);
    if let Some(v) = &r.first_violation {
        println!(
            "first violation:   s = {} t = {} exact = {} estimate = {} ({})",
            v.s,
            v.t,
            fmt_distance(v.exact),
            fmt_distance(v.estimate),
            v.kind
        );
    }
    println!("{}", serde_json::to_string(&r).expect("json"));
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, flag: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse()
                .map_err(|_| Failure::Usage(format!("--{flag}: cannot parse {x:?}")))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    graph: &Path,
    kind: OracleKind,
    sweep_k_cut: &str,
    sweep_eps: &str,
    sweep_k: &str,
    pairs: usize,
    sampling_c: f64,
    seed: u64,
    csv_out: Option<&Path>,
) -> Outcome {
    let g = read_graph(graph)?;
    let k_cuts: Vec<usize> = parse_list(sweep_k_cut, "sweep-K")?;
    let epss: Vec<Epsilon> = sweep_eps
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(parse_eps)
        .collect::<Result<_, _>>()?;
    let ks: Vec<usize> = match kind {
        OracleKind::Hierarchy => parse_list(sweep_k, "sweep-k")?,
        OracleKind::NearExact => vec![1],
    };
    let sink: Box<dyn Write> = match csv_out {
        Some(path) => Box::new(
            fs::File::create(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for &k_cut in &k_cuts {
        for &epsilon in &epss {
            for &k in &ks {
                let params = BuildParams {
                    kind,
                    k_cut,
                    epsilon,
                    k,
                    sampling_c,
                    seed,
                };
                let row = bench_point(&g, &params, pairs, seed).map_err(Failure::usage)?;
                w.serialize(&row).map_err(Failure::io)?;
            }
        }
    }
    w.flush().map_err(Failure::io)
}
