//! Batch clustering from the command line.
//!
//! ```text
//! cluster -i points.txt -o result.txt --param algorithm=kmeans --param kmeans.k=2,3,..,8 --eval sse,silhouette
//! ```
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use clusterkit::io::{build_algorithm, evaluate, execute, parse_points, write_assignment, Algorithm, EvalMeasure, ParamSet};
use clusterkit::Execution;

#[derive(Parser)]
#[command(name = "cluster", version, about = "Hierarchical, k-means and k-medoids clustering of a vector file")]
struct Args {
    /// Input vectors, one point per line.
    #[arg(short, long)]
    input: PathBuf,
    /// Output file for the assignment lines.
    #[arg(short, long)]
    output: PathBuf,
    /// Algorithm parameter as key=value; repeatable.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Shorthand for --param seed=N.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated indices to report: sse, silhouette, simplified_silhouette, davies_bouldin, variance_ratio.
    #[arg(long, value_delimiter = ',')]
    eval: Vec<String>,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Config(String),
    Data(String),
}

fn run(args: Args) -> Result<(), Failure> {
    let config = |e: clusterkit::Error| Failure::Config(e.to_string());
    let mut params = ParamSet::new();
    for p in &args.params {
        params.push_assignment(p).map_err(config)?;
    }
    if let Some(seed) = args.seed {
        params.push("seed", seed.to_string()).map_err(config)?;
    }
    let desc = build_algorithm(&params).map_err(config)?;
    if matches!(desc.algorithm, Algorithm::Hierarchical { extraction: None, .. }) {
        return Err(Failure::Config("hierarchical runs need hac.k or hac.threshold".into()));
    }
    let measures: Vec<EvalMeasure> = args.eval.iter().map(|m| EvalMeasure::parse(m.trim())).collect::<Result<_, _>>().map_err(config)?;
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };

    let data = |e: String| Failure::Data(e);
    let file = File::open(&args.input).map_err(|e| data(format!("{}: {e}", args.input.display())))?;
    let points = parse_points(BufReader::new(file)).map_err(|e| data(format!("{}: {e}", args.input.display())))?;
    log::info!("read {} points of dimension {}", points.len(), points.dim());
    let outputs = execute(&desc, &points, exec).map_err(|e| data(e.to_string()))?;

    let mut text = String::new();
    for out in &outputs {
        for &m in &measures {
            text.push_str(&format!("# eval {} {}\n", m.name(), evaluate(m, &points, &out.clustering, exec)));
        }
        text.push_str(&write_assignment(&out.clustering, out.label().as_deref()).map_err(|e| data(e.to_string()))?);
    }
    std::fs::write(&args.output, text).map_err(|e| data(format!("{}: {e}", args.output.display())))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
