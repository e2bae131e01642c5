//! Frame similarity representation: cosine Gram matrices, the
//! self-expressive combination of frames, and a small self-expressive
//! autoencoder that learns an embedding whose cosine structure separates
//! dissimilar frames.

mod gram;
mod sea;

pub use gram::{cosine, gram, GramMatrix, ZERO_NORM};
pub use sea::{embed, self_express, sea_gradients, sea_loss, train_sea, SeaConfig, SeaGradients, SeaModel, SeaTraining};
