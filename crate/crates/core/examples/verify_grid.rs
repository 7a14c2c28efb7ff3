// Running the invariant registry over a small grid, then with an injected fault.
use fqconfig::harness::{verify_all, Faults, VerifyGrid};

fn main() -> fqconfig::Result<()> {
    let grid = VerifyGrid { qs: vec![3, 5], ds: vec![2], ..Default::default() };
    let rep = verify_all(&grid)?;
    for c in &rep.checks {
        println!("{:<45} q={:<2} {} {}", c.name, c.q.map_or("-".into(), |q| q.to_string()), if c.passed { "ok  " } else { "FAIL" }, c.detail);
    }
    println!("violations: {}", rep.violations);

    let broken = VerifyGrid { faults: Faults { mu_zero: Some(5) }, qs: vec![5], random_sets: 1, ..grid };
    let rep = verify_all(&broken)?;
    let failed: Vec<_> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    println!("with μ(0) set to 5: exit code {}, failing {failed:?}", rep.exit_code());
    Ok(())
}
