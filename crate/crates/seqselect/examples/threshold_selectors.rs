//! Run the threshold-family selectors on one simulated instance and compare
//! their selections against the signal support.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use seqselect::penalty::PenaltyContext;
use seqselect::selectors::{
    select_adaptive_threshold, select_sparse_oracle, select_universal,
};
use seqselect::seqmodel::{loss, observe, NoiseProfile, Signal};

fn main() -> seqselect::Result<()> {
    let n = 200;
    let gamma = 0.25;
    let profile = NoiseProfile::linear(n, 0.01)?;
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let signal = Signal::sample_uniform(n, gamma, -6.0, 6.0, &mut rng)?;
    let data = observe(&signal, &profile, &mut rng)?;
    let ctx = PenaltyContext::new(&profile);

    let results = [
        select_universal(&data)?,
        select_sparse_oracle(&data, gamma)?,
        select_adaptive_threshold(&data, &ctx)?,
    ];
    println!("{} non-zero coefficients in the signal\n", signal.support_size());
    println!("{:<20} {:>6} {:>12} {:>10} {:>10}", "selector", "|h|", "pen. risk", "loss", "thr");
    for r in &results {
        println!(
            "{:<20} {:>6} {:>12.3} {:>10.3} {:>10}",
            r.selector.to_string(),
            r.mask.count(),
            r.penalized_risk,
            loss(&signal, &r.fhat)?,
            r.threshold.map_or("-".into(), |t| format!("{t:.3}")),
        );
    }

    println!("\nadaptive threshold result as JSON:");
    println!("{}", results[2].to_json_string(4));
    Ok(())
}
