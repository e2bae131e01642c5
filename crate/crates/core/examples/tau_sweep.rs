//! Output length against threshold on a noise-free synthetic utterance, and
//! the per-frame thresholds of one randomized resampling pass.

use rhythmkit::evalkit::{default_tau_grid, length_vs_tau_sweep};
use rhythmkit::resampler::{resample, ThresholdParams};
use rhythmkit::simrep::gram;
use rhythmkit::synthgen::{generate, RhythmStyle, SynthConfig};
use rhythmkit::rng;

fn main() -> rhythmkit::Result<()> {
    let utt = generate(&mut rng::seeded(1), &SynthConfig::default(), &RhythmStyle::default())?;
    let g = gram(&utt.seq)?;
    println!("{} phones, {} frames", utt.phones.len(), utt.seq.len());
    let mut taus = vec![0.5];
    taus.extend(default_tau_grid());
    for (tau, len) in length_vs_tau_sweep(&utt.seq, &g, &taus)? {
        println!("tau {tau:.2}: {len:>3} codes {}", "#".repeat(len / 2));
    }

    let noisy = generate(&mut rng::seeded(1), &SynthConfig::default(), &RhythmStyle { noise_sd: 0.2, ..Default::default() })?;
    for seed in 0..4 {
        let out = resample(&noisy.seq, &gram(&noisy.seq)?, &ThresholdParams::default(), &mut rng::seeded(seed))?;
        let (lo, hi) = out.tau_trace.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &t| (lo.min(t), hi.max(t)));
        println!(
            "randomized pass {seed} on noisy input: {} -> {} codes, thresholds in [{lo:.3}, {hi:.3}]",
            noisy.seq.len(),
            out.codes.len()
        );
    }
    Ok(())
}
