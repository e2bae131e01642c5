use super::toy::{convert, train_single_stage, train_two_stage, ToyConfig, ToyModel};
use crate::error::Result;
use crate::evalkit::DurationRecord;
use crate::frames::FrameSequence;
use crate::rng;
use crate::synthgen::{self, RhythmStyle, SynthConfig};

pub const FAST_DOMAIN: usize = 0;
pub const SLOW_DOMAIN: usize = 1;

/// Training schedule compared by the conversion experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    TwoStage,
    SingleStage,
}

impl Schedule {
    pub fn name(self) -> &'static str {
        match self {
            Self::TwoStage => "two-stage",
            Self::SingleStage => "single-stage",
        }
    }
}

/// A two-domain synthetic corpus and the toy model trained on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionSetup {
    pub synth: SynthConfig,
    pub fast: RhythmStyle,
    pub slow: RhythmStyle,
    pub per_domain: usize,
    pub toy: ToyConfig,
}

impl Default for ConversionSetup {
    fn default() -> Self {
        let noise_sd = 0.05;
        Self {
            synth: SynthConfig {
                alphabet_size: 6,
                length_range: (4, 7),
                base_reps: 4,
                dim: 8,
            },
            fast: RhythmStyle {
                rate: 1.0,
                vowel_stretch: 1.0,
                noise_sd,
            },
            slow: RhythmStyle {
                rate: 2.0,
                vowel_stretch: 1.0,
                noise_sd,
            },
            per_domain: 6,
            toy: ToyConfig::default(),
        }
    }
}

/// `per_domain` utterances of each style, tagged with their domain.
pub fn two_domain_corpus(setup: &ConversionSetup, seed: u64) -> Result<Vec<FrameSequence>> {
    let mut g = rng::stream(seed, 0);
    let mut out = Vec::with_capacity(2 * setup.per_domain);
    for (domain, style) in [(FAST_DOMAIN, &setup.fast), (SLOW_DOMAIN, &setup.slow)] {
        for i in 0..setup.per_domain {
            let utt = synthgen::generate(&mut g, &setup.synth, style)?;
            out.push(synthgen::tag(utt, format!("d{domain}_{i}"), Some(domain)).seq);
        }
    }
    Ok(out)
}

/// Held-out parallel pair: same phones in the fast and the slow style.
pub fn held_out_pair(setup: &ConversionSetup, seed: u64) -> Result<(FrameSequence, FrameSequence)> {
    let mut g = rng::stream(seed, 1);
    let phones = synthgen::sample_phones(&mut g, setup.synth.alphabet_size, setup.synth.length_range)?;
    let (fast, slow) =
        synthgen::parallel_pair(&mut g, &phones, &setup.fast, &setup.slow, setup.synth.base_reps, setup.synth.dim)?;
    Ok((fast.seq, slow.seq))
}

pub fn train(setup: &ConversionSetup, data: &[FrameSequence], seed: u64, schedule: Schedule) -> Result<ToyModel> {
    let cfg = ToyConfig { seed, ..setup.toy };
    Ok(match schedule {
        Schedule::TwoStage => train_two_stage(data, &cfg)?.1.model,
        Schedule::SingleStage => train_single_stage(data, &cfg)?.model,
    })
}

/// Train under `schedule`, convert the held-out pair both ways, and report
/// the fast-to-slow and slow-to-fast lengths.
pub fn conversion_trial(setup: &ConversionSetup, seed: u64, schedule: Schedule) -> Result<DurationRecord> {
    let data = two_domain_corpus(setup, seed)?;
    let model = train(setup, &data, seed, schedule)?;
    let (fast, slow) = held_out_pair(setup, seed)?;
    let f2s = convert(&model, &fast, SLOW_DOMAIN)?;
    let s2f = convert(&model, &slow, FAST_DOMAIN)?;
    DurationRecord::new(seed as usize, f2s.len(), s2f.len())
}
