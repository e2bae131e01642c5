use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::AudioSignal;
use crate::error::{Error, Result};
use crate::frames::FrameSequence;

/// Pre-emphasis coefficient applied before framing.
pub const PRE_EMPHASIS: f64 = 0.97;
/// Floor applied to mel energies before the logarithm.
pub const LOG_FLOOR: f64 = 1e-10;

/// Framing and filterbank parameters shared by [`mfcc`] and
/// [`log_mel_spectrogram`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub frame_len_s: f64,
    pub hop_s: f64,
    pub n_mels: usize,
    pub n_coeffs: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            frame_len_s: 0.025,
            hop_s: 0.010,
            n_mels: 40,
            n_coeffs: 13,
        }
    }
}

impl FeatureConfig {
    fn validate(&self) -> Result<()> {
        if !(self.hop_s > 0.0 && self.frame_len_s >= self.hop_s) {
            return Err(Error::Config(format!(
                "need frame_len_s >= hop_s > 0, got frame {} hop {}",
                self.frame_len_s, self.hop_s
            )));
        }
        if self.n_mels == 0 || self.n_coeffs == 0 || self.n_coeffs > self.n_mels {
            return Err(Error::Config(format!(
                "need 1 <= n_coeffs <= n_mels, got n_coeffs {} n_mels {}",
                self.n_coeffs, self.n_mels
            )));
        }
        Ok(())
    }

    /// Frame length and hop in samples at `sample_rate`.
    pub fn framing(&self, sample_rate: u32) -> Result<(usize, usize)> {
        self.validate()?;
        let sr = sample_rate as f64;
        let frame = (self.frame_len_s * sr).round() as usize;
        let hop = (self.hop_s * sr).round() as usize;
        if frame == 0 || hop == 0 {
            return Err(Error::Config("frame or hop shorter than one sample".into()));
        }
        Ok((frame, hop))
    }
}

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular filters spanning 0 Hz to Nyquist, evaluated on FFT bin
/// frequencies. Row `m` holds the weights of filter `m` over `n_bins` bins.
fn mel_filterbank(n_mels: usize, n_fft: usize, sample_rate: u32) -> Vec<Vec<f64>> {
    let sr = sample_rate as f64;
    let n_bins = n_fft / 2 + 1;
    let top = hz_to_mel(sr / 2.0);
    let edges: Vec<f64> = (0..n_mels + 2)
        .map(|i| mel_to_hz(top * i as f64 / (n_mels + 1) as f64))
        .collect();
    (0..n_mels)
        .map(|m| {
            let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
            (0..n_bins)
                .map(|k| {
                    let f = k as f64 * sr / n_fft as f64;
                    if f <= lo || f >= hi {
                        0.0
                    } else if f <= mid {
                        (f - lo) / (mid - lo)
                    } else {
                        (hi - f) / (hi - mid)
                    }
                })
                .collect()
        })
        .collect()
}

/// Mel energies (magnitude spectrum through the filterbank), one row per
/// frame, plus the frame period in seconds.
fn mel_energies(audio: &AudioSignal, cfg: &FeatureConfig) -> Result<(Vec<Vec<f64>>, f64)> {
    let (frame_len, hop) = cfg.framing(audio.sample_rate)?;
    let n = audio.samples.len();
    if n < frame_len {
        return Err(Error::EmptyInput("audio shorter than one frame"));
    }
    let n_frames = (n - frame_len) / hop + 1;

    let mut emphasized = Vec::with_capacity(n);
    emphasized.push(audio.samples[0]);
    emphasized.extend(audio.samples.windows(2).map(|w| w[1] - PRE_EMPHASIS * w[0]));

    let window: Vec<f64> = (0..frame_len)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / frame_len as f64).cos())
        .collect();
    let n_fft = frame_len.next_power_of_two();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_fft);
    let bank = mel_filterbank(cfg.n_mels, n_fft, audio.sample_rate);

    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];
    let mut energies = Vec::with_capacity(n_frames);
    for f in 0..n_frames {
        let start = f * hop;
        for (i, slot) in buf.iter_mut().enumerate() {
            *slot = if i < frame_len {
                Complex::new(emphasized[start + i] * window[i], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            };
        }
        fft.process(&mut buf);
        let mag: Vec<f64> = buf[..n_fft / 2 + 1].iter().map(|c| c.norm()).collect();
        energies.push(
            bank.iter()
                .map(|filt| filt.iter().zip(&mag).map(|(w, m)| w * m).sum())
                .collect(),
        );
    }
    Ok((energies, hop as f64 / audio.sample_rate as f64))
}

/// Log mel spectrogram: `ln(energy + 1e-10)`, `n_mels` values per frame.
pub fn log_mel_spectrogram(audio: &AudioSignal, cfg: &FeatureConfig) -> Result<FrameSequence> {
    let (energies, period) = mel_energies(audio, cfg)?;
    let data = energies
        .into_iter()
        .flatten()
        .map(|e| (e + LOG_FLOOR).ln())
        .collect();
    FrameSequence::from_flat(data, cfg.n_mels, period)
}

/// Mel-frequency cepstral coefficients.
///
/// Pipeline: pre-emphasis, Hann window, magnitude FFT, mel filterbank,
/// natural log floored at `1e-10`, orthonormal DCT-II keeping the first
/// `n_coeffs` coefficients.
pub fn mfcc(audio: &AudioSignal, cfg: &FeatureConfig) -> Result<FrameSequence> {
    let (energies, period) = mel_energies(audio, cfg)?;
    let n = cfg.n_mels;
    let basis: Vec<Vec<f64>> = (0..cfg.n_coeffs)
        .map(|k| {
            let scale = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
            (0..n)
                .map(|i| scale * (PI * k as f64 * (2 * i + 1) as f64 / (2 * n) as f64).cos())
                .collect()
        })
        .collect();
    let mut data = Vec::with_capacity(energies.len() * cfg.n_coeffs);
    for frame in energies {
        let logs: Vec<f64> = frame.iter().map(|e| e.max(LOG_FLOOR).ln()).collect();
        data.extend(basis.iter().map(|b| b.iter().zip(&logs).map(|(c, l)| c * l).sum::<f64>()));
    }
    FrameSequence::from_flat(data, cfg.n_coeffs, period)
}
