//! Duration, alignment, and segmentation metrics.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::numfmt::fmt_g;
use crate::resampler::{resample, SegmentKind, Segmentation, ThresholdParams};
use crate::rng::{self, Rng};
use crate::simrep::GramMatrix;
use crate::synthgen::{self, PairSeeds, RhythmStyle, SynthConfig, SyntheticUtterance};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// `(L_f2s − L_s2f) / L_s2f`.
pub fn relative_duration_difference(l_f2s: usize, l_s2f: usize) -> Result<f64> {
    if l_f2s == 0 || l_s2f == 0 {
        return Err(Error::ZeroLength);
    }
    Ok((l_f2s as f64 - l_s2f as f64) / l_s2f as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationRecord {
    pub pair_id: usize,
    pub l_f2s: usize,
    pub l_s2f: usize,
    pub rdd: f64,
}

impl DurationRecord {
    pub fn new(pair_id: usize, l_f2s: usize, l_s2f: usize) -> Result<Self> {
        Ok(Self {
            pair_id,
            l_f2s,
            l_s2f,
            rdd: relative_duration_difference(l_f2s, l_s2f)?,
        })
    }
}

/// CSV with header `pair_id,L_f2s,L_s2f,rdd`.
pub fn duration_csv(records: &[DurationRecord]) -> String {
    let mut out = String::from("pair_id,L_f2s,L_s2f,rdd\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{}", r.pair_id, r.l_f2s, r.l_s2f, fmt_g(r.rdd, 12));
    }
    out
}

/// Wilson score interval at 95% for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentEstimate {
    pub trials: usize,
    pub successes: usize,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl AlignmentEstimate {
    pub fn from_counts(successes: usize, trials: usize) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(successes, trials);
        Self {
            trials,
            successes,
            p_hat: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_lo,
            ci_hi,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_lo <= p && p <= self.ci_hi
    }
}

/// True when both sequences have the same length and every entry agrees
/// within `tol`.
pub fn sequences_aligned(a: &FrameSequence, b: &FrameSequence, tol: f64) -> bool {
    a.max_abs_diff(b).is_some_and(|d| d <= tol)
}

/// Seeded source of parallel pairs with equal phones and different rhythm.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSource {
    pub synth: SynthConfig,
    pub style_a: RhythmStyle,
    pub style_b: RhythmStyle,
    pub seed: u64,
}

impl PairSource {
    /// Zero-noise pair of a plain and a slow, vowel-stretched style.
    pub fn disproportional(seed: u64) -> Self {
        Self {
            synth: SynthConfig::default(),
            style_a: RhythmStyle::default(),
            style_b: RhythmStyle {
                rate: 1.5,
                vowel_stretch: 2.5,
                noise_sd: 0.0,
            },
            seed,
        }
    }

    /// Pair number `index`. Rhythm draws are repeated until `R ≠ R'`.
    pub fn pair(&self, index: usize) -> Result<(SyntheticUtterance, SyntheticUtterance)> {
        let mut g = rng::stream(self.seed, index as u64);
        let phones = synthgen::sample_phones(&mut g, self.synth.alphabet_size, self.synth.length_range)?;
        for _ in 0..1000 {
            let seeds = PairSeeds {
                rhythm_a: rand::Rng::random(&mut g),
                rhythm_b: rand::Rng::random(&mut g),
                noise_a: rand::Rng::random(&mut g),
                noise_b: rand::Rng::random(&mut g),
            };
            let (a, b) = synthgen::parallel_pair_seeded(
                &phones,
                &self.style_a,
                &self.style_b,
                self.synth.base_reps,
                self.synth.dim,
                seeds,
            )?;
            if a.reps != b.reps {
                return Ok((a, b));
            }
        }
        Err(Error::DegenerateInput("styles never produced different rhythms"))
    }
}

/// Estimate `Pr(Z̃ = Z̃')` over `trials` pairs. Each utterance of pair `i`
/// is resampled with its own stream derived from `seed`.
pub fn alignment_probability<P, F>(mut pair_gen: P, mut resampler: F, trials: usize, tol: f64, seed: u64) -> Result<AlignmentEstimate>
where
    P: FnMut(usize) -> Result<(SyntheticUtterance, SyntheticUtterance)>,
    F: FnMut(&FrameSequence, &mut Rng) -> Result<FrameSequence>,
{
    if trials == 0 {
        return Err(Error::Config("alignment probability needs at least one trial".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::Config(format!("tolerance must be >= 0, got {tol}")));
    }
    let mut successes = 0;
    for i in 0..trials {
        let (a, b) = pair_gen(i)?;
        let za = resampler(&a.seq, &mut rng::stream(seed, 2 * i as u64))?;
        let zb = resampler(&b.seq, &mut rng::stream(seed, 2 * i as u64 + 1))?;
        if sequences_aligned(&za, &zb, tol) {
            successes += 1;
        }
    }
    Ok(AlignmentEstimate::from_counts(successes, trials))
}

/// CSV with header `method,trials,successes,p_hat,ci_lo,ci_hi`.
pub fn alignment_csv(rows: &[(&str, AlignmentEstimate)]) -> String {
    let mut out = String::from("method,trials,successes,p_hat,ci_lo,ci_hi\n");
    for (method, e) in rows {
        let _ = writeln!(
            out,
            "{method},{},{},{},{},{}",
            e.trials,
            e.successes,
            fmt_g(e.p_hat, 12),
            fmt_g(e.ci_lo, 12),
            fmt_g(e.ci_hi, 12)
        );
    }
    out
}

/// Ground-truth phone position labelling each segment: majority over its
/// frames (ties to the earlier phone), or the phone at its boundary for an
/// inserted segment.
pub fn segment_labels(utt: &SyntheticUtterance, seg: &Segmentation) -> Result<Vec<usize>> {
    let frame_phone = utt.frame_phone_index();
    if seg.frames() != frame_phone.len() {
        return Err(Error::LengthMismatch {
            expected: frame_phone.len(),
            got: seg.frames(),
        });
    }
    let mut labels = Vec::with_capacity(seg.len());
    for (start, end, kind) in seg.segments() {
        if kind == SegmentKind::Inserted {
            labels.push(frame_phone[start]);
            continue;
        }
        let mut counts = vec![0usize; utt.phones.len()];
        for &p in &frame_phone[start..end] {
            counts[p] += 1;
        }
        let best = counts.iter().enumerate().fold(0, |best, (i, &c)| if c > counts[best] { i } else { best });
        labels.push(best);
    }
    Ok(labels)
}

fn lcs_len(a: &[usize], b: &[usize]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    for x in a {
        let mut cur = vec![0usize; b.len() + 1];
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        prev = cur;
    }
    prev[b.len()]
}

/// `0.5 · [M_a = M_b] + 0.5 · LCS / max(M_a, M_b)` over segment phone labels.
pub fn boundary_correspondence(
    utt_a: &SyntheticUtterance,
    seg_a: &Segmentation,
    utt_b: &SyntheticUtterance,
    seg_b: &Segmentation,
) -> Result<f64> {
    if utt_a.phones != utt_b.phones {
        return Err(Error::ContentMismatch);
    }
    let la = segment_labels(utt_a, seg_a)?;
    let lb = segment_labels(utt_b, seg_b)?;
    let same_count = if la.len() == lb.len() { 0.5 } else { 0.0 };
    Ok(same_count + 0.5 * lcs_len(&la, &lb) as f64 / la.len().max(lb.len()) as f64)
}

/// Output length of a fixed-threshold resample at each `τ`, sorted by `τ`.
pub fn length_vs_tau_sweep(seq: &FrameSequence, gram: &GramMatrix, taus: &[f64]) -> Result<Vec<(f64, usize)>> {
    let mut taus = taus.to_vec();
    taus.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(taus.len());
    for tau in taus {
        if !(tau > 0.0 && tau < 2.0) {
            return Err(Error::Config(format!("sweep tau must lie in (0, 2), got {tau}")));
        }
        let out = resample(seq, gram, &ThresholdParams::fixed(tau), &mut rng::seeded(0))?;
        rows.push((tau, out.codes.len()));
    }
    Ok(rows)
}

/// CSV with header `tau,out_len`.
pub fn sweep_csv(rows: &[(f64, usize)]) -> String {
    let mut out = String::from("tau,out_len\n");
    for (tau, len) in rows {
        let _ = writeln!(out, "{},{len}", fmt_g(*tau, 12));
    }
    out
}

/// `0.90, 0.92, …, 1.10`.
pub fn default_tau_grid() -> Vec<f64> {
    (0..=10).map(|i| (90 + 2 * i) as f64 / 100.0).collect()
}
