mod adam;
mod experiment;
mod tinynet;
mod toy;

pub use adam::Adam;
pub use experiment::{
    conversion_trial, held_out_pair, train, two_domain_corpus, ConversionSetup, Schedule, FAST_DOMAIN, SLOW_DOMAIN,
};
pub use tinynet::{max_relative_error, Activation, Gradients, Layer, TinyNet, Trace};
pub use toy::{
    context_window, convert, group_runs, loss_csv, train_async, train_single_stage, train_sync, train_sync_from,
    train_two_stage, GramSource, ToyConfig, ToyModel, TrainRun,
};
