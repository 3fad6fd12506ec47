//! A reduced version of the bundled simulation study: relative errors of
//! five selectors against the sample-wise oracle threshold.

use seqselect::harness::{run_monte_carlo, ProfileSpec, SimConfig};
use seqselect::selectors::SelectorId;

fn main() -> seqselect::Result<()> {
    for gamma in [0.25, 0.05] {
        let config = SimConfig {
            n: 200,
            gamma,
            profile: ProfileSpec::Linear { slope: 0.01 },
            signal_range: (-6.0, 6.0),
            n_reps: 200,
            seed: 42,
            selectors: vec![
                SelectorId::AdaptiveThreshold,
                SelectorId::Universal,
                SelectorId::SparseOracle,
                SelectorId::GreedyFullSubset,
                SelectorId::OracleSupport,
            ],
            fixed_signal: false,
        };
        let report = run_monte_carlo(&config)?;
        println!("gamma = {gamma}:");
        print!("{}", report.to_csv_string(4));
        println!();
    }
    Ok(())
}
