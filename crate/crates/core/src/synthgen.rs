//! Synthetic utterances with known content (phone symbols) and rhythm
//! (per-phone frame repetitions).
//!
//! Each symbol id maps to a fixed unit-norm prototype vector; an utterance is
//! rendered by repeating each phone's prototype `rep` times and adding
//! optional Gaussian noise. Even symbol ids are treated as vowels and receive
//! an extra duration multiplier, which makes duration changes
//! disproportional across phones.

use std::fmt::Write as _;

use rand::Rng as _;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::frames::{FrameMeta, FrameSequence};
use crate::rng::{self, Rng};

/// Per-phone duration jitter range `u ~ U[0.75, 1.25]`.
pub const DEFAULT_JITTER: (f64, f64) = (0.75, 1.25);

const PROTOTYPE_SEED: u64 = 0x5eed_9a7e_0f0f_1234;

/// Rhythm style used to draw repetition counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhythmStyle {
    /// Global speech-rate multiplier on durations (larger is slower).
    pub rate: f64,
    /// Extra multiplier applied to vowel (even id) durations.
    pub vowel_stretch: f64,
    /// Standard deviation of per-entry Gaussian frame noise.
    pub noise_sd: f64,
}

impl Default for RhythmStyle {
    fn default() -> Self {
        Self {
            rate: 1.0,
            vowel_stretch: 1.0,
            noise_sd: 0.0,
        }
    }
}

impl RhythmStyle {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::Config(format!("rate must be positive, got {}", self.rate)));
        }
        if !(self.vowel_stretch >= 1.0 && self.vowel_stretch.is_finite()) {
            return Err(Error::Config(format!(
                "vowel_stretch must be >= 1, got {}",
                self.vowel_stretch
            )));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::Config(format!("noise_sd must be >= 0, got {}", self.noise_sd)));
        }
        Ok(())
    }
}

/// Ground-truth content `phones`, rhythm `reps`, and the rendered frames.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticUtterance {
    pub phones: Vec<usize>,
    pub reps: Vec<usize>,
    pub seq: FrameSequence,
    pub style: RhythmStyle,
}

impl SyntheticUtterance {
    /// Phone index (position in `phones`) of every frame.
    pub fn frame_phone_index(&self) -> Vec<usize> {
        self.reps
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| std::iter::repeat_n(i, r))
            .collect()
    }

    /// Phone symbol of every frame.
    pub fn frame_labels(&self) -> Vec<usize> {
        self.frame_phone_index().into_iter().map(|i| self.phones[i]).collect()
    }

    /// Frame offset at which each phone starts.
    pub fn phone_starts(&self) -> Vec<usize> {
        self.reps
            .iter()
            .scan(0, |acc, &r| {
                let s = *acc;
                *acc += r;
                Some(s)
            })
            .collect()
    }

    /// `phone_id,rep` CSV, one row per phone.
    pub fn reps_csv(&self) -> String {
        let mut out = String::from("phone_id,rep\n");
        for (p, r) in self.phones.iter().zip(&self.reps) {
            writeln!(out, "{p},{r}").unwrap();
        }
        out
    }
}

/// Vowel convention: even symbol ids.
pub fn is_vowel(symbol: usize) -> bool {
    symbol.is_multiple_of(2)
}

/// Uniformly random phone sequence with no two consecutive equal symbols.
pub fn sample_phones(rng: &mut Rng, alphabet_size: usize, length_range: (usize, usize)) -> Result<Vec<usize>> {
    let (lo, hi) = length_range;
    if alphabet_size < 2 {
        return Err(Error::Config(format!("alphabet size must be >= 2, got {alphabet_size}")));
    }
    if lo < 1 || lo > hi {
        return Err(Error::Config(format!("bad length range [{lo}, {hi}]")));
    }
    let len = rng.random_range(lo..=hi);
    let mut phones = Vec::with_capacity(len);
    phones.push(rng.random_range(0..alphabet_size));
    while phones.len() < len {
        let prev = *phones.last().unwrap();
        let mut s = rng.random_range(0..alphabet_size - 1);
        if s >= prev {
            s += 1;
        }
        phones.push(s);
    }
    Ok(phones)
}

/// Repetition counts for `phones` under `style` with the default jitter.
pub fn sample_rhythm(rng: &mut Rng, phones: &[usize], style: &RhythmStyle, base_reps: usize) -> Result<Vec<usize>> {
    sample_rhythm_with_jitter(rng, phones, style, base_reps, DEFAULT_JITTER)
}

/// Repetition counts with an explicit jitter range.
///
/// `rep = max(1, round(base_reps * rate * u * stretch))` with `u ~ U[lo, hi]`
/// and `stretch = vowel_stretch` for vowels, 1 otherwise. One uniform is
/// consumed per phone regardless of the range, so equal seeds give equal `u`
/// across styles.
pub fn sample_rhythm_with_jitter(
    rng: &mut Rng,
    phones: &[usize],
    style: &RhythmStyle,
    base_reps: usize,
    jitter: (f64, f64),
) -> Result<Vec<usize>> {
    style.validate()?;
    if phones.is_empty() {
        return Err(Error::EmptyInput("sample_rhythm needs at least one phone"));
    }
    if base_reps == 0 {
        return Err(Error::Config("base_reps must be positive".into()));
    }
    let (lo, hi) = jitter;
    if !(0.0 < lo && lo <= hi) {
        return Err(Error::Config(format!("bad jitter range [{lo}, {hi}]")));
    }
    Ok(phones
        .iter()
        .map(|&p| {
            let u = lo + (hi - lo) * rng.random::<f64>();
            let stretch = if is_vowel(p) { style.vowel_stretch } else { 1.0 };
            let r = (base_reps as f64 * style.rate * u * stretch).round();
            (r as usize).max(1)
        })
        .collect())
}

/// Deterministic unit-norm prototype for `symbol` in `dim` dimensions.
///
/// Symbols below `dim` get the corresponding vector of a Gram-Schmidt
/// orthonormalized set of seeded Gaussian vectors, so they are mutually
/// orthogonal; larger ids fall back to a seeded random direction.
pub fn prototype(symbol: usize, dim: usize) -> Vec<f64> {
    assert!(dim >= 1);
    let gaussian = |j: usize| -> Vec<f64> {
        let mut g = rng::stream(PROTOTYPE_SEED ^ dim as u64, j as u64);
        (0..dim).map(|_| StandardNormal.sample(&mut g)).collect()
    };
    let unit = |mut v: Vec<f64>| {
        let n = crate::frames::norm(&v);
        v.iter_mut().for_each(|x| *x /= n);
        v
    };
    if symbol >= dim {
        return unit(gaussian(symbol));
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(symbol + 1);
    for j in 0..=symbol {
        let mut v = gaussian(j);
        for b in &basis {
            let c = crate::frames::dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        basis.push(unit(v));
    }
    basis.pop().unwrap()
}

/// Render frames: each phone's prototype repeated `rep` times plus
/// `N(0, noise_sd^2)` noise per entry. No noise is drawn when `noise_sd == 0`.
pub fn render(phones: &[usize], reps: &[usize], dim: usize, noise_sd: f64, rng: &mut Rng) -> Result<FrameSequence> {
    if phones.len() != reps.len() {
        return Err(Error::LengthMismatch {
            expected: phones.len(),
            got: reps.len(),
        });
    }
    if reps.contains(&0) {
        return Err(Error::Config("every repetition count must be >= 1".into()));
    }
    if dim == 0 {
        return Err(Error::Config("prototype dimension must be >= 1".into()));
    }
    let noise = if noise_sd > 0.0 {
        Some(Normal::new(0.0, noise_sd).map_err(|e| Error::Config(e.to_string()))?)
    } else {
        None
    };
    let total: usize = reps.iter().sum();
    let mut data = Vec::with_capacity(total * dim);
    let mut cache: Vec<(usize, Vec<f64>)> = Vec::new();
    for (&p, &r) in phones.iter().zip(reps) {
        let proto = match cache.iter().find(|(s, _)| *s == p) {
            Some((_, v)) => v.clone(),
            None => {
                let v = prototype(p, dim);
                cache.push((p, v.clone()));
                v
            }
        };
        for _ in 0..r {
            match &noise {
                Some(n) => data.extend(proto.iter().map(|x| x + n.sample(rng))),
                None => data.extend_from_slice(&proto),
            }
        }
    }
    FrameSequence::from_flat(data, dim, crate::frames::DEFAULT_FRAME_PERIOD)
}

/// Generation parameters for whole utterances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub alphabet_size: usize,
    pub length_range: (usize, usize),
    pub base_reps: usize,
    pub dim: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            alphabet_size: 8,
            length_range: (5, 10),
            base_reps: 6,
            dim: 16,
        }
    }
}

/// Draw phones, rhythm and frames for one utterance.
pub fn generate(rng: &mut Rng, cfg: &SynthConfig, style: &RhythmStyle) -> Result<SyntheticUtterance> {
    let phones = sample_phones(rng, cfg.alphabet_size, cfg.length_range)?;
    utterance_for(rng, phones, cfg, style)
}

/// Draw rhythm and frames for fixed `phones`.
pub fn utterance_for(rng: &mut Rng, phones: Vec<usize>, cfg: &SynthConfig, style: &RhythmStyle) -> Result<SyntheticUtterance> {
    let reps = sample_rhythm(rng, &phones, style, cfg.base_reps)?;
    let seq = render(&phones, &reps, cfg.dim, style.noise_sd, rng)?;
    Ok(SyntheticUtterance {
        phones,
        reps,
        seq,
        style: *style,
    })
}

/// Seeds for the four random draws of a parallel pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSeeds {
    pub rhythm_a: u64,
    pub rhythm_b: u64,
    pub noise_a: u64,
    pub noise_b: u64,
}

/// Two utterances with identical phones and independently drawn rhythm and
/// noise. Prototypes are shared.
pub fn parallel_pair(
    rng: &mut Rng,
    phones: &[usize],
    style_a: &RhythmStyle,
    style_b: &RhythmStyle,
    base_reps: usize,
    dim: usize,
) -> Result<(SyntheticUtterance, SyntheticUtterance)> {
    let seeds = PairSeeds {
        rhythm_a: rng.random(),
        rhythm_b: rng.random(),
        noise_a: rng.random(),
        noise_b: rng.random(),
    };
    parallel_pair_seeded(phones, style_a, style_b, base_reps, dim, seeds)
}

/// [`parallel_pair`] with explicit per-draw seeds.
pub fn parallel_pair_seeded(
    phones: &[usize],
    style_a: &RhythmStyle,
    style_b: &RhythmStyle,
    base_reps: usize,
    dim: usize,
    seeds: PairSeeds,
) -> Result<(SyntheticUtterance, SyntheticUtterance)> {
    let make = |style: &RhythmStyle, rhythm_seed: u64, noise_seed: u64| -> Result<SyntheticUtterance> {
        let reps = sample_rhythm(&mut rng::seeded(rhythm_seed), phones, style, base_reps)?;
        let seq = render(phones, &reps, dim, style.noise_sd, &mut rng::seeded(noise_seed))?;
        Ok(SyntheticUtterance {
            phones: phones.to_vec(),
            reps,
            seq,
            style: *style,
        })
    };
    Ok((
        make(style_a, seeds.rhythm_a, seeds.noise_a)?,
        make(style_b, seeds.rhythm_b, seeds.noise_b)?,
    ))
}

/// Plain `key=value` manifest describing a generated corpus.
pub fn manifest(seed: u64, cfg: &SynthConfig, style: &RhythmStyle, count: usize) -> String {
    format!(
        "seed={seed}\ncount={count}\nalphabet_size={}\nlength_min={}\nlength_max={}\nbase_reps={}\ndim={}\nrate={}\nvowel_stretch={}\nnoise_sd={}\n",
        cfg.alphabet_size,
        cfg.length_range.0,
        cfg.length_range.1,
        cfg.base_reps,
        cfg.dim,
        style.rate,
        style.vowel_stretch,
        style.noise_sd
    )
}

/// Attach source and domain identifiers to an utterance's frames.
pub fn tag(mut utt: SyntheticUtterance, source_id: impl Into<String>, domain_id: Option<usize>) -> SyntheticUtterance {
    utt.seq.meta = FrameMeta {
        source_id: source_id.into(),
        domain_id,
    };
    utt
}
