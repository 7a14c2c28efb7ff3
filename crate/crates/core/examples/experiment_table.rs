// A seeded experiment: how often random sets of each size contain a pair.
use fqconfig::harness::{run_experiment, ExperimentSpec, Generator, RSelection};

fn main() -> fqconfig::Result<()> {
    let mut spec = ExperimentSpec::new(7, 2, "star:2", Generator::UniformRandom);
    spec.sizes = vec![4, 6, 8, 12];
    spec.trials = 10;
    spec.seed = 42;
    spec.r_selection = RSelection::List(vec![1, 3]);
    let table = run_experiment(&spec)?;
    println!("size  r  found/trials  sample witness");
    for row in &table.rows {
        let sample = row.witness.as_ref().map(|w| format!("{:?} ~ {:?}", w.xs, w.ys)).unwrap_or_default();
        println!("{:>4} {:>2}  {:>5}/{:<6}  {sample}", row.size, row.r, row.successes, row.trials);
    }
    let csv = table.to_csv()?;
    println!("\nfirst CSV lines:");
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}
