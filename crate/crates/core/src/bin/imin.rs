use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use imin::bench::{self, Evaluator, RunConfig};
use imin::io::{DatasetSpec, ProbModel, SeedSpec};
use imin::{Algorithm, CandidateKind, McsMode, Model};

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ic,
    Lt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbArg {
    Tr,
    Wc,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Node,
    Edge,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Exact,
    Rand,
    Outdeg,
    Bg,
    Ag,
    Gr,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalArg {
    Auto,
    Exact,
    Mcs,
}

#[derive(Clone, Copy, ValueEnum)]
enum McsModeArg {
    Crn,
    Fresh,
}

/// Choose nodes or edges to block so that the expected spread of a seed
/// set is minimized.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Edge list: "u v" or "u v p" per line, '#' comments.
    #[arg(long)]
    input: PathBuf,
    /// Treat every edge as bidirectional.
    #[arg(long)]
    undirected: bool,
    #[arg(long, value_enum, default_value = "ic")]
    model: ModelArg,
    /// Probability assignment; `file` reads the third column.
    #[arg(long, value_enum, default_value = "tr")]
    prob: ProbArg,
    /// Seed file path, `random:K`, or `ids:A,B,...`.
    #[arg(long)]
    seeds: String,
    #[arg(long, value_enum, default_value = "node")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "gr")]
    algo: AlgoArg,
    /// Budget or comma-separated budget sweep.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    budget: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    theta: u64,
    #[arg(long, default_value_t = 10_000)]
    mcs_rounds: u64,
    #[arg(long, default_value_t = 100_000)]
    eval_rounds: u64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Per run of the algorithm, in seconds.
    #[arg(long, default_value_t = 86_400.0)]
    time_limit: f64,
    /// JSON record; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV file to append rows to.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    eval: EvalArg,
    /// Print one decrease table as CSV instead of running the algorithm.
    #[arg(long)]
    inspect: bool,
    /// Greedy replace: top up a short blocker set with greedy rounds.
    #[arg(long)]
    fill_budget: bool,
    #[arg(long, value_enum, default_value = "crn")]
    mcs_mode: McsModeArg,
    /// Seed for TR probabilities; defaults to --rng-seed.
    #[arg(long)]
    prob_seed: Option<u64>,
    /// Work on an extracted subgraph of about this many nodes.
    #[arg(long)]
    extract_nodes: Option<usize>,
}

impl Cli {
    fn config(&self) -> imin::Result<RunConfig> {
        let dataset = DatasetSpec {
            path: self.input.clone(),
            directed: !self.undirected,
            prob_model: match self.prob {
                ProbArg::Tr => ProbModel::Tr,
                ProbArg::Wc => ProbModel::Wc,
                ProbArg::File => ProbModel::Explicit,
            },
            seed_spec: self.seeds.parse::<SeedSpec>()?,
        };
        let algorithm = match self.algo {
            AlgoArg::Exact => Algorithm::Exact,
            AlgoArg::Rand => Algorithm::Rand,
            AlgoArg::Outdeg => Algorithm::Outdeg,
            AlgoArg::Bg => Algorithm::Bg,
            AlgoArg::Ag => Algorithm::Ag,
            AlgoArg::Gr => Algorithm::Gr,
        };
        let mut c = RunConfig::new(dataset, algorithm, self.budget.clone());
        c.model = match self.model {
            ModelArg::Ic => Model::Ic,
            ModelArg::Lt => Model::Lt,
        };
        c.strategy = match self.strategy {
            StrategyArg::Node => CandidateKind::Node,
            StrategyArg::Edge => CandidateKind::Edge,
        };
        c.theta = self.theta;
        c.mcs_rounds = self.mcs_rounds;
        c.eval_rounds = self.eval_rounds;
        c.eval = match self.eval {
            EvalArg::Auto => Evaluator::Auto,
            EvalArg::Exact => Evaluator::Exact,
            EvalArg::Mcs => Evaluator::Mcs,
        };
        c.master_seed = self.rng_seed;
        c.prob_seed = self.prob_seed;
        c.repeats = self.repeats;
        c.time_limit_secs = self.time_limit;
        c.mcs_mode = match self.mcs_mode {
            McsModeArg::Crn => McsMode::Crn,
            McsModeArg::Fresh => McsMode::Fresh,
        };
        c.fill_budget = self.fill_budget;
        c.extract_nodes = self.extract_nodes;
        Ok(c)
    }
}

fn execute(cli: &Cli) -> imin::Result<bool> {
    let config = cli.config()?;
    if cli.inspect {
        bench::write_output(cli.out.as_deref(), &bench::inspect_delta(&config)?)?;
        return Ok(false);
    }
    let record = bench::run(&config)?;
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    bench::write_output(cli.out.as_deref(), &record.to_json()?)?;
    if let Some(csv) = &cli.csv {
        record.append_csv(csv)?;
    }
    Ok(record.timed_out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: time limit reached; the record is partial");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
