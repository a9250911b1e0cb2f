//! Drives the experiment harness programmatically: a budget sweep with
//! repeats, evaluated independently, written as JSON and CSV.

use imin::bench::{run, Evaluator, RunConfig};
use imin::io::{DatasetSpec, ProbModel, SeedSpec};
use imin::Algorithm;

fn main() -> imin::Result<()> {
    let dir = std::env::temp_dir();
    let spec = DatasetSpec {
        path: concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy.edges").into(),
        directed: true,
        prob_model: ProbModel::Explicit,
        seed_spec: SeedSpec::Ids(vec![1]),
    };
    for algorithm in [
        Algorithm::Outdeg,
        Algorithm::Ag,
        Algorithm::Gr,
        Algorithm::Exact,
    ] {
        let mut config = RunConfig::new(spec.clone(), algorithm, vec![1, 2, 3]);
        config.eval = Evaluator::Exact;
        config.repeats = 3;
        let record = run(&config)?;
        let csv = dir.join("imin_bench_run.csv");
        record.append_csv(&csv)?;
        let means: Vec<String> = record
            .budgets
            .iter()
            .map(|b| format!("b={}: {:.3}", b.b, b.mean_residual))
            .collect();
        println!(
            "{algorithm:<6} base {:.2}  {}",
            record.base_spread,
            means.join("  ")
        );
    }
    println!(
        "rows appended to {}",
        dir.join("imin_bench_run.csv").display()
    );
    Ok(())
}
