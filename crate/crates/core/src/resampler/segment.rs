use std::fmt::Write as _;

use super::threshold::{draw_tau, tau_from_quantile, ThresholdMode, ThresholdParams, UpsampleRule};
use crate::error::{Error, Result};
use crate::numfmt::fmt_g;
use crate::rng::Rng;
use crate::simrep::GramMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Normal,
    /// Zero-length segment created in the upsampling regime.
    Inserted,
}

impl SegmentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Normal => "normal",
            Self::Inserted => "inserted",
        }
    }
}

/// Ordered boundaries `[0, .., T]` with one kind tag per segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    boundaries: Vec<usize>,
    kinds: Vec<SegmentKind>,
}

impl Segmentation {
    pub fn new(boundaries: Vec<usize>, kinds: Vec<SegmentKind>) -> Result<Self> {
        if boundaries.len() < 2 || boundaries[0] != 0 {
            return Err(Error::Format("boundaries must start at 0 and hold at least two entries".into()));
        }
        if kinds.len() + 1 != boundaries.len() {
            return Err(Error::LengthMismatch {
                expected: boundaries.len() - 1,
                got: kinds.len(),
            });
        }
        for (m, kind) in kinds.iter().enumerate() {
            let (a, b) = (boundaries[m], boundaries[m + 1]);
            match kind {
                SegmentKind::Normal if b <= a => {
                    return Err(Error::Format(format!("normal segment {m} spans [{a}, {b})")));
                }
                SegmentKind::Inserted if b != a => {
                    return Err(Error::Format(format!("inserted segment {m} spans [{a}, {b})")));
                }
                SegmentKind::Inserted if m == 0 || kinds[m - 1] == SegmentKind::Inserted => {
                    return Err(Error::Format(format!("inserted segment {m} has no normal predecessor")));
                }
                _ => {}
            }
        }
        Ok(Self { boundaries, kinds })
    }

    /// Every frame its own segment.
    pub fn singletons(len: usize) -> Self {
        Self {
            boundaries: (0..=len).collect(),
            kinds: vec![SegmentKind::Normal; len],
        }
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn kinds(&self) -> &[SegmentKind] {
        &self.kinds
    }

    /// Number of segments `M`.
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// Number of input frames `T`.
    pub fn frames(&self) -> usize {
        *self.boundaries.last().unwrap()
    }

    /// `(t_start, t_end, kind)` of segment `m`.
    pub fn segment(&self, m: usize) -> (usize, usize, SegmentKind) {
        (self.boundaries[m], self.boundaries[m + 1], self.kinds[m])
    }

    pub fn segments(&self) -> impl Iterator<Item = (usize, usize, SegmentKind)> + '_ {
        (0..self.len()).map(|m| self.segment(m))
    }

    pub fn inserted_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == SegmentKind::Inserted).count()
    }

    /// CSV with header `m,t_start,t_end,kind`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,t_start,t_end,kind\n");
        for (m, (a, b, kind)) in self.segments().enumerate() {
            let _ = writeln!(out, "{m},{a},{b},{}", kind.name());
        }
        out
    }
}

/// CSV with header `t,tau`.
pub fn tau_trace_csv(trace: &[f64]) -> String {
    let mut out = String::from("t,tau\n");
    for (t, tau) in trace.iter().enumerate() {
        let _ = writeln!(out, "{t},{}", fmt_g(*tau, 17));
    }
    out
}

fn should_split(gram: &GramMatrix, anchor: usize, t: usize, tau: f64) -> bool {
    let next = (t + 1).min(gram.len() - 1);
    gram.get(anchor, t) <= tau && gram.get(anchor, next) <= tau
}

fn should_insert(gram: &GramMatrix, anchor: usize, t: usize, tau: f64, rule: UpsampleRule) -> bool {
    if tau <= 1.0 {
        return false;
    }
    match rule {
        UpsampleRule::HighSimilarity => gram.get(anchor, t) >= 2.0 - tau,
        UpsampleRule::TwoFrame => {
            let next = (t + 1).min(gram.len() - 1);
            gram.get(anchor, t) >= 1.0 - tau && gram.get(anchor, next) >= 1.0 - tau
        }
    }
}

/// Left-to-right similarity scan.
///
/// Returns the segmentation and the `τ(t)` evaluated at each frame (frame 0
/// is evaluated against itself and never decides anything).
pub fn segment(gram: &GramMatrix, params: &ThresholdParams, rng: &mut Rng) -> Result<(Segmentation, Vec<f64>)> {
    params.validate()?;
    let n = gram.len();
    if n == 0 {
        return Err(Error::EmptyInput("segment needs at least one frame"));
    }
    let levels = match params.mode {
        ThresholdMode::Fixed(_) => None,
        ThresholdMode::Randomized => Some(draw_tau(rng, n, params).levels),
    };
    let tau_at = |t: usize, anchor: usize| match (&levels, params.mode) {
        (_, ThresholdMode::Fixed(tau)) => tau,
        (Some(levels), _) => tau_from_quantile(gram, anchor, levels[t], params.window_b),
        (None, _) => unreachable!(),
    };

    let mut boundaries = vec![0];
    let mut kinds = Vec::new();
    let mut trace = Vec::with_capacity(n);
    trace.push(tau_at(0, 0));
    let mut anchor = 0;
    for t in 1..n {
        let tau = tau_at(t, anchor);
        trace.push(tau);
        let split = if tau < 1.0 {
            should_split(gram, anchor, t, tau)
        } else {
            true
        };
        if !split {
            continue;
        }
        kinds.push(SegmentKind::Normal);
        boundaries.push(t);
        if should_insert(gram, anchor, t, tau, params.upsample_rule) {
            kinds.push(SegmentKind::Inserted);
            boundaries.push(t);
        }
        anchor = t;
    }
    kinds.push(SegmentKind::Normal);
    boundaries.push(n);
    Ok((Segmentation::new(boundaries, kinds)?, trace))
}
