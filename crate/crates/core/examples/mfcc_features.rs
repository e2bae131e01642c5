//! MFCC extraction on a synthetic three-tone signal followed by similarity
//! resampling at a fixed threshold: steady tones collapse to few codes.

use std::f64::consts::PI;

use rhythmkit::feats::{mfcc, AudioSignal, FeatureConfig};
use rhythmkit::resampler::{resample, ThresholdParams};
use rhythmkit::simrep::gram;
use rhythmkit::rng;

fn main() -> rhythmkit::Result<()> {
    let sr = 16_000;
    let mut samples = Vec::new();
    for (freq, secs) in [(220.0, 0.30), (660.0, 0.15), (440.0, 0.45)] {
        let n = (secs * sr as f64) as usize;
        samples.extend((0..n).map(|i| 0.5 * (2.0 * PI * freq * i as f64 / sr as f64).sin()));
    }
    let audio = AudioSignal::new(samples, sr)?;
    let feats = mfcc(&audio, &FeatureConfig::default())?;
    println!("{:.2} s of audio -> {} frames x {} coefficients", audio.duration_s(), feats.len(), feats.dim());

    let g = gram(&feats)?;
    for tau in [0.9, 0.99] {
        let out = resample(&feats, &g, &ThresholdParams::fixed(tau), &mut rng::seeded(0))?;
        let lens: Vec<usize> = out.segmentation.segments().map(|(s, e, _)| e - s).collect();
        println!("tau = {tau}: {} codes, segment lengths {lens:?}", out.codes.len());
    }
    Ok(())
}
