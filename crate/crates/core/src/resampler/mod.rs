mod baseline;
mod pool;
mod segment;
mod threshold;

pub use baseline::{resample_segment, rr_baseline, RandomResampleConfig};
pub use pool::{pool, realign, resample, ResampleResult};
pub use segment::{segment, tau_trace_csv, SegmentKind, Segmentation};
pub use threshold::{
    draw_tau, quantile_sorted, tau_from_quantile, TauDraw, ThresholdMode, ThresholdParams, UpsampleRule,
};
