//! Monte Carlo evaluation of both sides of the oracle inequality for the
//! adaptive threshold rule on a fixed sparse signal.

use seqselect::harness::{check_oracle_inequality, ProfileSpec, SelectionFamily, SimConfig};

fn main() -> seqselect::Result<()> {
    let config = SimConfig {
        n: 200,
        gamma: 0.05,
        profile: ProfileSpec::Linear { slope: 0.01 },
        signal_range: (-6.0, 6.0),
        n_reps: 2000,
        seed: 7,
        selectors: vec![],
        fixed_signal: true,
    };
    for delta in [0.25, 0.5, 0.75] {
        let check = check_oracle_inequality(&config, delta, SelectionFamily::Threshold)?;
        println!(
            "delta = {delta}: lhs {:8.3} <= rhs {:8.3} (omega {:8.3})  {}",
            check.lhs,
            check.rhs,
            check.omega,
            if check.passes() { "PASS" } else { "FAIL" },
        );
    }
    Ok(())
}
