//! Audio ingestion and frame-level feature extraction.

mod mfcc;
mod wav;

pub use mfcc::{log_mel_spectrogram, mfcc, FeatureConfig, LOG_FLOOR, PRE_EMPHASIS};
pub use wav::{load_wav, write_wav, AudioSignal};
