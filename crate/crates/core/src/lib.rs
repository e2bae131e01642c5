pub mod cli;
pub mod csvio;
pub mod error;
pub mod evalkit;
pub mod feats;
pub mod infotheory;
pub mod frames;
pub mod modelio;
pub mod numfmt;
pub mod resampler;
pub mod rng;
pub mod simrep;
pub mod synthgen;
pub mod trainkit;

pub use error::{Error, Result};
pub use frames::{FrameMeta, FrameSequence};
