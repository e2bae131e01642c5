//! Frame-level feature sequences.

use crate::error::{Error, Result};

/// Metadata carried alongside a feature sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameMeta {
    pub source_id: String,
    pub domain_id: Option<usize>,
}

/// A `T × d` matrix of per-frame features stored row-major.
///
/// Used for every frame-level quantity in the pipeline: input features,
/// similarity embeddings, encoder codes and resampled codes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    data: Vec<f64>,
    len: usize,
    dim: usize,
    frame_period: f64,
    pub meta: FrameMeta,
}

/// Default frame period (10 ms hop) for sequences not derived from audio.
pub const DEFAULT_FRAME_PERIOD: f64 = 0.01;

impl FrameSequence {
    /// Build from row-major data. Fails if any entry is non-finite, the data
    /// length is not a multiple of `dim`, or the period is not positive.
    pub fn from_flat(data: Vec<f64>, dim: usize, frame_period: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("frame dimension must be at least 1".into()));
        }
        if !(frame_period > 0.0 && frame_period.is_finite()) {
            return Err(Error::Config(format!("frame period must be positive, got {frame_period}")));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                got: data.len() % dim,
            });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite frame entry {bad}")));
        }
        Ok(Self {
            len: data.len() / dim,
            data,
            dim,
            frame_period,
            meta: FrameMeta::default(),
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], dim: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, dim, DEFAULT_FRAME_PERIOD)
    }

    pub fn zeros(len: usize, dim: usize) -> Self {
        Self {
            data: vec![0.0; len * dim],
            len,
            dim,
            frame_period: DEFAULT_FRAME_PERIOD,
            meta: FrameMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: FrameMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn with_frame_period(mut self, frame_period: f64) -> Self {
        assert!(frame_period > 0.0);
        self.frame_period = frame_period;
        self
    }

    /// Number of frames `T`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Feature dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame_period(&self) -> f64 {
        self.frame_period
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn row_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim, "row dimension");
        self.data.extend_from_slice(row);
        self.len += 1;
    }

    /// Empty sequence with the same dimension, period and metadata.
    pub fn empty_like(&self) -> Self {
        Self {
            data: Vec::new(),
            len: 0,
            dim: self.dim,
            frame_period: self.frame_period,
            meta: self.meta.clone(),
        }
    }

    /// Largest absolute entrywise difference, or `None` if shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.len != other.len || self.dim != other.dim {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Per-dimension z-score normalization over the utterance.
///
/// Dimensions whose standard deviation is below `1e-8` are mean-subtracted
/// only.
pub fn normalize(seq: &FrameSequence) -> Result<FrameSequence> {
    if seq.is_empty() {
        return Err(Error::EmptyInput("normalize needs at least one frame"));
    }
    let n = seq.len() as f64;
    let d = seq.dim();
    let mut mean = vec![0.0; d];
    for row in seq.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for row in seq.rows() {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let scale: Vec<f64> = var
        .iter()
        .map(|s| {
            let sd = (s / n).sqrt();
            if sd < 1e-8 {
                1.0
            } else {
                sd
            }
        })
        .collect();
    let mut out = seq.clone();
    for t in 0..out.len() {
        for ((v, m), s) in out.row_mut(t).iter_mut().zip(&mean).zip(&scale) {
            *v = (*v - m) / s;
        }
    }
    Ok(out)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_single_frame_is_zero() {
        let s = FrameSequence::from_rows(&[[3.0, 5.0]], 2).unwrap();
        let n = normalize(&s).unwrap();
        assert_eq!(n.row(0), &[0.0, 0.0]);
    }

    #[test]
    fn normalize_two_frames() {
        let s = FrameSequence::from_rows(&[[0.0], [2.0]], 1).unwrap();
        let n = normalize(&s).unwrap();
        assert_eq!(n.as_flat(), &[-1.0, 1.0]);
    }

    #[test]
    fn normalize_constant_column_has_no_nan() {
        let s = FrameSequence::from_rows(&[[4.0, 1.0], [4.0, 2.0], [4.0, 3.0]], 2).unwrap();
        let n = normalize(&s).unwrap();
        for row in n.rows() {
            assert_eq!(row[0], 0.0);
            assert!(row[1].is_finite());
        }
    }

    #[test]
    fn normalize_rejects_empty() {
        let s = FrameSequence::zeros(0, 3);
        assert!(matches!(normalize(&s), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(FrameSequence::from_flat(vec![1.0, f64::NAN], 1, 0.01).is_err());
        assert!(FrameSequence::from_flat(vec![1.0], 1, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn normalize_is_idempotent(rows in proptest::collection::vec(
            proptest::collection::vec(-100.0f64..100.0, 3), 1..20)) {
            let s = FrameSequence::from_rows(&rows, 3).unwrap();
            let once = normalize(&s).unwrap();
            let twice = normalize(&once).unwrap();
            proptest::prop_assert!(once.max_abs_diff(&twice).unwrap() < 1e-10);
        }
    }
}
