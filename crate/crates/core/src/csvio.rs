//! CSV dumps of frame sequences.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::numfmt::fmt_g;

/// Significant digits used for feature values in CSV output.
pub const FEATURE_SIG_DIGITS: usize = 9;

/// Render `seq` as CSV with header `t,c0,...,c{d-1}`, one row per frame.
pub fn features_to_csv(seq: &FrameSequence) -> String {
    let mut out = String::from("t");
    for c in 0..seq.dim() {
        write!(out, ",c{c}").unwrap();
    }
    out.push('\n');
    for (t, row) in seq.rows().enumerate() {
        write!(out, "{t}").unwrap();
        for v in row {
            out.push(',');
            out.push_str(&fmt_g(*v, FEATURE_SIG_DIGITS));
        }
        out.push('\n');
    }
    out
}

/// Parse a feature CSV produced by [`features_to_csv`].
pub fn features_from_csv(text: &str) -> Result<FrameSequence> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("feature csv has no header".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first().map(|c| c.trim()) != Some("t") || cols.len() < 2 {
        return Err(Error::Format(format!("bad feature csv header `{header}`")));
    }
    let dim = cols.len() - 1;
    let mut data = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(Error::Format(format!(
                "row {lineno}: expected {} fields, got {}",
                dim + 1,
                fields.len()
            )));
        }
        for f in &fields[1..] {
            let v: f64 = f
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("row {lineno}: bad number `{f}`")))?;
            data.push(v);
        }
    }
    FrameSequence::from_flat(data, dim, crate::frames::DEFAULT_FRAME_PERIOD)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_rows() {
        let s = FrameSequence::from_rows(&[[0.5, -1.0], [2.0, 1e-7]], 2).unwrap();
        let csv = features_to_csv(&s);
        assert_eq!(csv, "t,c0,c1\n0,0.5,-1\n1,2,1e-07\n");
        let back = features_from_csv(&csv).unwrap();
        assert_eq!(back.as_flat(), s.as_flat());
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(features_from_csv("t,c0,c1\n0,1\n").is_err());
        assert!(features_from_csv("x,c0\n0,1\n").is_err());
    }
}
