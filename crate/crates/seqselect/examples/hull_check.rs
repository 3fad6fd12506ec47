//! Monte Carlo check of the risk-hull majorant against its closed-form
//! ceiling.

use seqselect::harness::check_risk_hull;
use seqselect::seqmodel::NoiseProfile;

fn main() -> seqselect::Result<()> {
    println!("{:<24} {:>12} {:>12} {:>12}  result", "profile", "estimate", "3*stderr", "bound");
    for (name, profile) in [
        ("homogeneous n=1", NoiseProfile::homogeneous(1, 1.0)?),
        ("homogeneous n=10", NoiseProfile::homogeneous(10, 1.0)?),
        ("homogeneous n=200", NoiseProfile::homogeneous(200, 1.0)?),
        ("linear n=10", NoiseProfile::linear(10, 0.01)?),
        ("linear n=200", NoiseProfile::linear(200, 0.01)?),
    ] {
        let check = check_risk_hull(&profile, 10_000, 1)?;
        println!(
            "{:<24} {:>12.6} {:>12.6} {:>12.6}  {}",
            name,
            check.estimate,
            3.0 * check.stderr,
            check.bound,
            if check.passes() { "PASS" } else { "FAIL" },
        );
    }
    Ok(())
}
