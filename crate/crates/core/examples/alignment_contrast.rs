//! Alignment probability of similarity resampling against random resampling
//! on zero-noise parallel pairs that share content but not rhythm.

use rhythmkit::evalkit::{alignment_csv, alignment_probability, PairSource};
use rhythmkit::infotheory::{random_resample_mapper, similarity_mapper};
use rhythmkit::resampler::{RandomResampleConfig, ThresholdParams};

fn main() -> rhythmkit::Result<()> {
    let source = PairSource::disproportional(7);
    let (a, b) = source.pair(0)?;
    println!("pair 0: phones {:?}", a.phones);
    println!("  rhythm A {:?} ({} frames)", a.reps, a.seq.len());
    println!("  rhythm B {:?} ({} frames)", b.reps, b.seq.len());

    let sim = alignment_probability(
        |i| source.pair(i),
        similarity_mapper(ThresholdParams::fixed(0.5)),
        1000,
        1e-9,
        7,
    )?;
    let rr = alignment_probability(
        |i| source.pair(i),
        random_resample_mapper(RandomResampleConfig::default()),
        10_000,
        1e-9,
        7,
    )?;
    print!("{}", alignment_csv(&[("similarity", sim), ("rr_baseline", rr)]));
    Ok(())
}
