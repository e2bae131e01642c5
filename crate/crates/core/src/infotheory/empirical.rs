use std::collections::BTreeMap;

use super::channel::{Code, Symbols, Tabulated};
use crate::error::Result;
use crate::frames::FrameSequence;
use crate::resampler::{resample, rr_baseline, RandomResampleConfig, ThresholdParams};
use crate::rng::{self, Rng};
use crate::simrep::gram;
use crate::synthgen;

/// Codes are rounded to this many units per 1.0 before comparison.
pub const QUANT_SCALE: f64 = 1e6;

/// Row count, then every value rounded to a multiple of `1 / QUANT_SCALE`.
pub fn quantize(seq: &FrameSequence) -> Code {
    let mut code = Vec::with_capacity(1 + seq.as_flat().len());
    code.push(seq.len() as i64);
    code.extend(seq.as_flat().iter().map(|v| (v * QUANT_SCALE).round() as i64));
    code
}

/// Noise-free rendering of a frame-level symbol sequence.
pub fn render_symbols(x: &[usize], dim: usize) -> Result<FrameSequence> {
    synthgen::render(x, &vec![1; x.len()], dim, 0.0, &mut rng::seeded(0))
}

/// Monte Carlo estimate of `P(z̃ | x)`: each input is rendered and passed
/// through `mapper` `samples` times; quantized outputs are counted.
pub fn empirical_channel<F>(inputs: &[Symbols], dim: usize, samples: usize, seed: u64, mut mapper: F) -> Result<Tabulated>
where
    F: FnMut(&FrameSequence, &mut Rng) -> Result<FrameSequence>,
{
    let mut table = Tabulated::new();
    for (i, x) in inputs.iter().enumerate() {
        let seq = render_symbols(x, dim)?;
        let mut g = rng::stream(seed, i as u64);
        let mut counts: BTreeMap<Code, usize> = BTreeMap::new();
        for _ in 0..samples {
            *counts.entry(quantize(&mapper(&seq, &mut g)?)).or_insert(0) += 1;
        }
        table.insert(
            x.clone(),
            counts.into_iter().map(|(z, c)| (z, c as f64 / samples as f64)),
        )?;
    }
    Ok(table)
}

/// The similarity resampler with the gram taken on the input itself.
pub fn similarity_mapper(params: ThresholdParams) -> impl FnMut(&FrameSequence, &mut Rng) -> Result<FrameSequence> {
    move |seq, g| Ok(resample(seq, &gram(seq)?, &params, g)?.codes)
}

pub fn random_resample_mapper(cfg: RandomResampleConfig) -> impl FnMut(&FrameSequence, &mut Rng) -> Result<FrameSequence> {
    move |seq, g| rr_baseline(seq, g, &cfg)
}

#[cfg(test)]
mod tests {
    use super::super::ensemble::{emit, information_report, DiscreteEnsemble};
    use super::super::pmf::DiscretePmf;
    use super::*;
    use crate::infotheory::Channel;

    fn two_phone_ensemble(max_rep: usize) -> DiscreteEnsemble {
        let mut pairs = Vec::new();
        for a in 1..=max_rep {
            for b in 1..=max_rep {
                pairs.push(((vec![0, 1], vec![a, b]), 1.0 / (max_rep * max_rep) as f64));
            }
        }
        DiscreteEnsemble::new(DiscretePmf::new(pairs).unwrap()).unwrap()
    }

    #[test]
    fn fixed_tau_rows_are_deterministic() {
        let ens = two_phone_ensemble(3);
        let ch = empirical_channel(&ens.x_support(), 4, 50, 1, similarity_mapper(ThresholdParams::fixed(0.5))).unwrap();
        for (_, row) in ch.rows() {
            assert_eq!(row.len(), 1);
            assert_eq!(row[0].1, 1.0);
        }
        // Every rhythm collapses to the two phone prototypes.
        let z = ch.law(&emit(&[0, 1], &[3, 1])).unwrap();
        assert_eq!(z[0].0[0], 2);
    }

    #[test]
    fn rows_sum_to_one() {
        let ens = two_phone_ensemble(2);
        let ch = empirical_channel(&ens.x_support(), 4, 10_000, 2, similarity_mapper(ThresholdParams::default())).unwrap();
        for (_, row) in ch.rows() {
            let total: f64 = row.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn similarity_resampler_leaks_less_than_random_resampling() {
        let ens = two_phone_ensemble(4);
        let xs = ens.x_support();
        let sim = empirical_channel(&xs, 4, 2000, 3, similarity_mapper(ThresholdParams::default())).unwrap();
        let rr = empirical_channel(&xs, 4, 2000, 3, random_resample_mapper(RandomResampleConfig::default())).unwrap();
        let i_sim = information_report(&ens, &sim).unwrap();
        let i_rr = information_report(&ens, &rr).unwrap();
        assert!(i_sim.i_rz < i_rr.i_rz, "{} vs {}", i_sim.i_rz, i_rr.i_rz);
        assert!(i_sim.data_processing_holds() && i_rr.data_processing_holds());
    }
}
