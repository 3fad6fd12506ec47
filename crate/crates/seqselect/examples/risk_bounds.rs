//! Evaluate the minimax risk bounds on heterogeneous and homogeneous
//! profiles.

use seqselect::bounds;
use seqselect::seqmodel::NoiseProfile;

fn main() -> seqselect::Result<()> {
    let gamma = 0.05;

    let linear = NoiseProfile::linear(200, 0.01)?;
    let report = bounds::report(&linear, gamma, None, None)?;
    println!("linear profile (sigma = 0.01 lambda, n = 200, gamma = {gamma}):");
    println!("{}\n", report.rounded(6).to_json_string());

    // on a constant profile the uniform lower bound and the upper bound agree
    let flat = NoiseProfile::homogeneous(200, 1.0)?;
    let report = bounds::report(&flat, gamma, None, None)?;
    println!("homogeneous profile (sigma = 1):");
    println!(
        "lower_uniform = {:.6}, upper_minimax = {:.6}",
        report.lower_uniform, report.upper_minimax
    );

    // the entropy bound concentrates prior mass on noisy coordinates; sweep
    // the cube cap to see its effect
    println!("\nentropy bound vs cap c (linear profile):");
    for c in [0.5, 0.4, 0.3, 0.2, 0.1] {
        let (value, alphas) = bounds::lower_bound_entropy(&linear, gamma, c)?;
        let top = alphas.iter().cloned().fold(0.0f64, f64::max);
        println!("  c = {c:.2}: value {value:8.3}, largest weight {top:.4}");
    }
    Ok(())
}
