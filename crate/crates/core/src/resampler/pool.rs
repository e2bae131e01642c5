use super::segment::{segment, SegmentKind, Segmentation};
use super::threshold::ThresholdParams;
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::rng::Rng;
use crate::simrep::GramMatrix;

/// Resampled codes together with the segmentation that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampleResult {
    pub codes: FrameSequence,
    pub segmentation: Segmentation,
    /// `τ(t)` per input frame; empty when built by [`pool`] alone.
    pub tau_trace: Vec<f64>,
}

/// Mean-pool each normal segment; an inserted segment `[t, t)` takes the
/// input row at `t`.
pub fn pool(codes_in: &FrameSequence, seg: &Segmentation) -> Result<ResampleResult> {
    if seg.frames() != codes_in.len() {
        return Err(Error::LengthMismatch {
            expected: seg.frames(),
            got: codes_in.len(),
        });
    }
    let mut codes = codes_in.empty_like();
    let mut acc = vec![0.0; codes_in.dim()];
    for (start, end, kind) in seg.segments() {
        match kind {
            SegmentKind::Inserted => codes.push_row(codes_in.row(start)),
            SegmentKind::Normal if end - start == 1 => codes.push_row(codes_in.row(start)),
            SegmentKind::Normal => {
                acc.copy_from_slice(codes_in.row(start));
                for t in start + 1..end {
                    acc.iter_mut().zip(codes_in.row(t)).for_each(|(a, v)| *a += v);
                }
                let n = (end - start) as f64;
                acc.iter_mut().for_each(|a| *a /= n);
                codes.push_row(&acc);
            }
        }
    }
    Ok(ResampleResult {
        codes,
        segmentation: seg.clone(),
        tau_trace: Vec::new(),
    })
}

/// Segment with `gram` under `params`, then pool `codes_in`.
pub fn resample(
    codes_in: &FrameSequence,
    gram: &GramMatrix,
    params: &ThresholdParams,
    rng: &mut Rng,
) -> Result<ResampleResult> {
    if gram.len() != codes_in.len() {
        return Err(Error::LengthMismatch {
            expected: codes_in.len(),
            got: gram.len(),
        });
    }
    let (seg, trace) = segment(gram, params, rng)?;
    let mut out = pool(codes_in, &seg)?;
    out.tau_trace = trace;
    Ok(out)
}

/// Expand codes back to the input length: each normal code is repeated over
/// its segment and inserted codes are dropped.
pub fn realign(result: &ResampleResult) -> FrameSequence {
    let mut out = result.codes.empty_like();
    for (m, (start, end, kind)) in result.segmentation.segments().enumerate() {
        if kind == SegmentKind::Normal {
            for _ in start..end {
                out.push_row(result.codes.row(m));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::simrep::gram;
    use crate::synthgen::{self, RhythmStyle, SynthConfig};
    use proptest::prelude::*;
    use rand::Rng as _;

    fn toy_gram() -> GramMatrix {
        GramMatrix::with_pairs(4, 0.1, &[(1, 2, 0.99)]).unwrap()
    }

    fn rows(vals: &[f64]) -> FrameSequence {
        FrameSequence::from_flat(vals.to_vec(), 1, 0.01).unwrap()
    }

    #[test]
    fn singletons_copy() {
        let x = rows(&[1.0, -2.0, 0.5]);
        let out = pool(&x, &Segmentation::singletons(3)).unwrap();
        assert_eq!(out.codes, x);
    }

    #[test]
    fn two_row_mean() {
        let x = rows(&[0.0, 2.0]);
        let seg = Segmentation::new(vec![0, 2], vec![SegmentKind::Normal]).unwrap();
        assert_eq!(pool(&x, &seg).unwrap().codes.as_flat(), &[1.0]);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            pool(&rows(&[1.0, 2.0]), &Segmentation::singletons(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn upsampled_toy_duplicates_third_code() {
        let x = rows(&[10.0, 20.0, 30.0, 40.0]);
        let out = resample(&x, &toy_gram(), &ThresholdParams::fixed(1.05), &mut rng::seeded(0)).unwrap();
        assert_eq!(out.codes.as_flat(), &[10.0, 20.0, 30.0, 30.0, 40.0]);
        assert_eq!(out.codes.row(3), out.codes.row(2));
        assert_eq!(realign(&out), x);
    }

    #[test]
    fn downsampled_toy_realigns() {
        let x = rows(&[1.0, 2.0, 4.0, 8.0]);
        let out = resample(&x, &toy_gram(), &ThresholdParams::fixed(0.5), &mut rng::seeded(0)).unwrap();
        assert_eq!(out.codes.as_flat(), &[1.0, 3.0, 8.0]);
        assert_eq!(realign(&out).as_flat(), &[1.0, 3.0, 3.0, 8.0]);
    }

    #[test]
    fn unit_tau_is_identity() {
        let mut g = rng::seeded(1);
        for _ in 0..20 {
            let n = g.random_range(1..30);
            let data: Vec<f64> = (0..n * 3).map(|_| g.random_range(-5.0..5.0)).collect();
            let x = FrameSequence::from_flat(data, 3, 0.01).unwrap();
            let out = resample(&x, &gram(&x).unwrap(), &ThresholdParams::fixed(1.0), &mut g).unwrap();
            assert_eq!(out.codes, x);
            assert_eq!(realign(&out), x);
        }
    }

    #[test]
    fn half_tau_recovers_phones() {
        let cfg = SynthConfig::default();
        let mut g = rng::seeded(2);
        for _ in 0..20 {
            let u = synthgen::generate(&mut g, &cfg, &RhythmStyle::default()).unwrap();
            let out = resample(&u.seq, &gram(&u.seq).unwrap(), &ThresholdParams::fixed(0.5), &mut g).unwrap();
            assert_eq!(out.codes.len(), u.phones.len());
            for (m, &p) in u.phones.iter().enumerate() {
                let proto = synthgen::prototype(p, cfg.dim);
                let diff = out.codes.row(m).iter().zip(&proto).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(diff < 1e-12);
            }
            let starts: Vec<usize> = out.segmentation.boundaries()[..u.phones.len()].to_vec();
            assert_eq!(starts, u.phone_starts());
        }
    }

    #[test]
    fn randomized_rerun_is_equal() {
        let u = synthgen::generate(&mut rng::seeded(3), &SynthConfig::default(), &RhythmStyle::default()).unwrap();
        let gm = gram(&u.seq).unwrap();
        let p = ThresholdParams::default();
        let a = resample(&u.seq, &gm, &p, &mut rng::seeded(4)).unwrap();
        let b = resample(&u.seq, &gm, &p, &mut rng::seeded(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn realign_preserves_length_over_seeds() {
        let mut g = rng::seeded(5);
        let data: Vec<f64> = (0..200 * 4).map(|_| g.random_range(-1.0..1.0)).collect();
        let mut x = FrameSequence::from_flat(data, 4, 0.01).unwrap();
        // Smooth so that both regimes show up.
        for t in 1..200 {
            let prev = x.row(t - 1).to_vec();
            x.row_mut(t).iter_mut().zip(prev).for_each(|(v, p)| *v = 0.9 * p + 0.1 * *v);
        }
        let gm = gram(&x).unwrap();
        for seed in 0..100 {
            let out = resample(&x, &gm, &ThresholdParams::default(), &mut rng::seeded(seed)).unwrap();
            assert_eq!(realign(&out).len(), 200);
        }
    }

    fn brute_mean(x: &FrameSequence, a: usize, b: usize) -> Vec<f64> {
        (0..x.dim())
            .map(|k| (a..b).map(|t| x.row(t)[k]).sum::<f64>() / (b - a) as f64)
            .collect()
    }

    proptest! {
        #[test]
        fn pooled_codes_match_brute_means(
            data in prop::collection::vec(-10.0f64..10.0, 3..120),
            seed in any::<u64>(),
        ) {
            let n = data.len() / 3;
            let x = FrameSequence::from_flat(data[..n * 3].to_vec(), 3, 0.01).unwrap();
            let out = resample(&x, &gram(&x).unwrap(), &ThresholdParams::randomized(0.2, 1.2), &mut rng::seeded(seed)).unwrap();
            for (m, (a, b, kind)) in out.segmentation.segments().enumerate() {
                let want = if kind == SegmentKind::Normal { brute_mean(&x, a, b) } else { x.row(a).to_vec() };
                for (c, w) in out.codes.row(m).iter().zip(&want) {
                    prop_assert!((c - w).abs() < 1e-9);
                }
            }
            prop_assert_eq!(realign(&out).len(), n);
        }
    }
}
