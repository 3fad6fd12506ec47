//! How the rank-weighted penalty reacts to growing a selection one
//! coordinate at a time, and why insertion deltas are cheap to evaluate.

use seqselect::penalty::{insertion_delta, penalized_empirical_risk, penalty, PenaltyContext};
use seqselect::seqmodel::{NoiseProfile, SelectionMask, SequenceData};

fn main() -> seqselect::Result<()> {
    let profile = NoiseProfile::new(vec![2.0, 1.0, 1.0, 0.5, 0.25])?;
    let ctx = PenaltyContext::new(&profile);
    let data = SequenceData::new(vec![9.0, -4.0, 0.5, 3.0, -1.0], profile)?;

    let mut mask = SelectionMask::empty(5);
    println!("growing a selection greedily by most negative insertion delta:\n");
    loop {
        let mut best: Option<(f64, usize)> = None;
        for i in 0..5 {
            if mask.is_selected(i) {
                continue;
            }
            let d = insertion_delta(&data, &mask, i, &ctx)?;
            println!(
                "  insert lambda={} would change the penalized risk by {d:+.3}",
                i + 1
            );
            if d < 0.0 && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        let Some((_, i)) = best else { break };
        mask.set(i, true);
        println!(
            "-> take lambda={}: Pen = {:.3}, penalized risk = {:.3}\n",
            i + 1,
            penalty(&mask, &ctx)?,
            penalized_empirical_risk(&data, &mask, &ctx)?
        );
    }
    println!("\nno remaining insertion helps; final mask {:?}", mask.indices_1based());
    Ok(())
}
