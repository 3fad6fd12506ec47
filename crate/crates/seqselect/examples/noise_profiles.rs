//! Build the bundled noise profiles and write a sampled observation set as
//! CSV to stdout.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use seqselect::seqmodel::{observe, write_sequence_csv, NoiseProfile, Signal};

fn main() -> seqselect::Result<()> {
    let linear = NoiseProfile::linear(200, 0.01)?;
    let fractional = NoiseProfile::fbm(200, 0.05, 0.25)?;
    let singular: Vec<f64> = (1..=200).map(|l| 1.0 / (l as f64).sqrt()).collect();
    let inverse = NoiseProfile::inverse(&singular, 0.05)?;

    for (name, p) in [("linear", &linear), ("fbm", &fractional), ("inverse", &inverse)] {
        eprintln!(
            "{name:8} sigma_1 = {:.4}  sigma_n = {:.4}  ||Sigma|| = {:.4}",
            p.sigma(0),
            p.sigma(p.n() - 1),
            p.sigma_norm()
        );
    }

    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let signal = Signal::sample_uniform(200, 0.25, -6.0, 6.0, &mut rng)?;
    eprintln!("signal: {} non-zero coefficients", signal.support_size());
    let data = observe(&signal, &linear, &mut rng)?;
    write_sequence_csv(&signal, &data, &mut std::io::stdout().lock(), 6)?;
    Ok(())
}
