use rand::Rng as _;

use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::rng::Rng;

/// Random segment lengths and per-segment sampling rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomResampleConfig {
    pub seg_len_range: (usize, usize),
    pub rate_range: (f64, f64),
}

impl Default for RandomResampleConfig {
    fn default() -> Self {
        Self {
            seg_len_range: (19, 32),
            rate_range: (0.5, 1.5),
        }
    }
}

impl RandomResampleConfig {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.seg_len_range;
        if a == 0 || a > b {
            return Err(Error::Config(format!("bad segment length range [{a}, {b}]")));
        }
        let (lo, hi) = self.rate_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Config(format!("bad rate range [{lo}, {hi}]")));
        }
        Ok(())
    }
}

/// Linearly interpolate the `len` frames from `start` at
/// `round(len / rate)` evenly spaced positions `i * rate`.
pub fn resample_segment(seq: &FrameSequence, start: usize, len: usize, rate: f64, out: &mut FrameSequence) {
    let n_out = ((len as f64 / rate).round() as usize).max(1);
    let last = (len - 1) as f64;
    let mut row = vec![0.0; seq.dim()];
    for i in 0..n_out {
        let pos = (i as f64 * rate).min(last);
        let lo = pos.floor() as usize;
        let frac = pos - lo as f64;
        if frac == 0.0 {
            out.push_row(seq.row(start + lo));
            continue;
        }
        let (a, b) = (seq.row(start + lo), seq.row(start + lo + 1));
        row.iter_mut()
            .zip(a.iter().zip(b))
            .for_each(|(r, (x, y))| *r = x + frac * (y - x));
        out.push_row(&row);
    }
}

/// Random-resampling baseline: split into random-length chunks and stretch
/// each by its own random rate.
pub fn rr_baseline(seq: &FrameSequence, rng: &mut Rng, cfg: &RandomResampleConfig) -> Result<FrameSequence> {
    cfg.validate()?;
    if seq.is_empty() {
        return Err(Error::EmptyInput("rr_baseline needs at least one frame"));
    }
    let mut out = seq.empty_like();
    let mut start = 0;
    while start < seq.len() {
        let len = rng.random_range(cfg.seg_len_range.0..=cfg.seg_len_range.1).min(seq.len() - start);
        let (lo, hi) = cfg.rate_range;
        let rate = lo + (hi - lo) * rng.random::<f64>();
        resample_segment(seq, start, len, rate, &mut out);
        start += len;
    }
    Ok(out)
}
