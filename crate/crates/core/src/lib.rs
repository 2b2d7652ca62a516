pub mod analysis;
pub mod certainty;
pub mod corpus;
pub mod error;
pub mod gender;
pub mod network;
pub mod pipeline;
pub mod stats;
pub mod synth;
pub mod team;
pub mod text;

pub use error::{Error, Result};
