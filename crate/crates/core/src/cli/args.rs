//! Flag grammar. Every option may also be set in the `--config` file under
//! its long name with dashes written as underscores; the flag wins.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "rhythmkit",
    version,
    about = "Similarity-based temporal resampling and rhythm-disentanglement experiments",
    after_help = "Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.\n\
                  The seed falls back to RHYTHM_KIT_SEED, then 0."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Directory receiving every output file (config key: output_dir)
    #[arg(long, short = 'o', value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// key=value config file; flags override its entries
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed for every random draw
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a synthetic corpus: feature CSVs, rhythm CSVs and a manifest
    Synth(SynthArgs),
    /// Convert a WAV file to an MFCC or log-mel feature CSV
    Features(FeaturesArgs),
    /// Train the self-expressive similarity model on feature CSVs
    SeaTrain(SeaTrainArgs),
    /// Segment and pool a feature CSV: codes, segmentation and threshold trace
    Resample(ResampleArgs),
    /// Output length of fixed-threshold resampling over a grid of thresholds
    SweepTau(SweepTauArgs),
    /// Alignment probability of the similarity resampler and the random baseline
    AlignProb(AlignProbArgs),
    /// Check both rhythm-information theorems on random discrete ensembles
    VerifyTheorems(VerifyTheoremsArgs),
    /// Train the toy two-domain converter and report duration differences
    TwoStage(TwoStageArgs),
    /// Relative duration difference table from a length CSV
    Rdd(RddArgs),
}

#[derive(Debug, Args)]
pub struct SynthShape {
    /// Phone alphabet size
    #[arg(long)]
    pub alphabet_size: Option<usize>,
    /// Minimum phones per utterance
    #[arg(long)]
    pub length_min: Option<usize>,
    /// Maximum phones per utterance
    #[arg(long)]
    pub length_max: Option<usize>,
    /// Nominal repetitions per phone at rate 1
    #[arg(long)]
    pub base_reps: Option<usize>,
    /// Feature dimension
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StyleArgs {
    /// Speech-rate multiplier on durations (larger is slower)
    #[arg(long)]
    pub rate: Option<f64>,
    /// Extra duration multiplier on vowels
    #[arg(long)]
    pub vowel_stretch: Option<f64>,
    /// Gaussian frame-noise standard deviation
    #[arg(long)]
    pub noise_sd: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of utterances
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub shape: SynthShape,
    #[command(flatten)]
    pub style: StyleArgs,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Input WAV file
    #[arg(long, value_name = "WAV")]
    pub input: Option<PathBuf>,
    /// Feature kind: mfcc or logmel
    #[arg(long)]
    pub kind: Option<String>,
    /// Mel filters
    #[arg(long)]
    pub n_mels: Option<usize>,
    /// Cepstral coefficients kept
    #[arg(long)]
    pub n_coeffs: Option<usize>,
    /// Analysis window length in seconds
    #[arg(long)]
    pub frame_len_s: Option<f64>,
    /// Hop in seconds
    #[arg(long)]
    pub hop_s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SeaTrainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Feature CSVs to train on (repeatable); a synthetic corpus is used if absent
    #[arg(long, value_name = "CSV")]
    pub input: Vec<PathBuf>,
    /// Synthetic utterances when no input is given
    #[arg(long)]
    pub count: Option<usize>,
    /// Hidden width
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Embedding dimension
    #[arg(long)]
    pub embed_dim: Option<usize>,
    /// Learning rate
    #[arg(long)]
    pub lr: Option<f64>,
    /// Full-batch epochs
    #[arg(long)]
    pub epochs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Fixed threshold; randomized thresholds are drawn when absent
    #[arg(long)]
    pub tau: Option<f64>,
    /// Lower end of the global quantile level range
    #[arg(long)]
    pub u_l: Option<f64>,
    /// Upper end of the global quantile level range
    #[arg(long)]
    pub u_r: Option<f64>,
    /// Half-width of the per-frame level jitter
    #[arg(long)]
    pub local_halfwidth: Option<f64>,
    /// Similarity window half-length for the quantile
    #[arg(long)]
    pub window_b: Option<usize>,
    /// Insertion rule above τ = 1: high-similarity or two-frame
    #[arg(long)]
    pub upsample_rule: Option<String>,
}

#[derive(Debug, Args)]
pub struct ResampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Feature CSV to pool
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,
    /// Feature CSV whose cosine Gram matrix drives segmentation (default: the input)
    #[arg(long, value_name = "CSV")]
    pub gram_input: Option<PathBuf>,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct SweepTauArgs {
    #[command(flatten)]
    pub common: Common,
    /// Feature CSV; a noise-free synthetic utterance is used if absent
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,
    /// Thresholds to sweep (comma-separated); default 0.90..1.10 step 0.02
    #[arg(long, value_delimiter = ',')]
    pub taus: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct AlignProbArgs {
    #[command(flatten)]
    pub common: Common,
    /// Pairs for the similarity resampler
    #[arg(long)]
    pub trials: Option<usize>,
    /// Pairs for the random-resampling baseline
    #[arg(long)]
    pub rr_trials: Option<usize>,
    /// Fixed threshold of the similarity resampler
    #[arg(long)]
    pub tau: Option<f64>,
    /// Max-norm tolerance for two codes to count as equal
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyTheoremsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of random ensembles
    #[arg(long)]
    pub seeds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TwoStageArgs {
    #[command(flatten)]
    pub common: Common,
    /// Independent seeded runs
    #[arg(long)]
    pub runs: Option<usize>,
    /// two-stage, single-stage, or both
    #[arg(long)]
    pub schedule: Option<String>,
    /// Training utterances per domain
    #[arg(long)]
    pub per_domain: Option<usize>,
    /// Speech rate of the slow domain
    #[arg(long)]
    pub slow_rate: Option<f64>,
    /// Frame noise of both domains
    #[arg(long)]
    pub noise_sd: Option<f64>,
    /// Epochs of the synchronous stage
    #[arg(long)]
    pub sync_epochs: Option<usize>,
    /// Epochs of the asynchronous stage
    #[arg(long)]
    pub async_epochs: Option<usize>,
    /// Learning rate
    #[arg(long)]
    pub lr: Option<f64>,
    /// Weight of the duration loss
    #[arg(long)]
    pub duration_weight: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RddArgs {
    #[command(flatten)]
    pub common: Common,
    /// CSV with columns pair_id,L_f2s,L_s2f (extra columns are ignored)
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,
}
