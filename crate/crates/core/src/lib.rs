//! Ferromagnetic Ising model at fixed magnetization on random d-regular
//! multigraphs.
//!
//! The crate combines three layers that check each other:
//!
//! * closed formulas for the infinite-tree model ([`tree`]) and the annealed
//!   free energy with its finite-n combinatorics ([`annealed`]),
//! * samplers and Markov chains on configuration-model multigraphs
//!   ([`graph`], [`planted`], [`dynamics`], [`stats`]),
//! * brute-force ground truth on tiny instances ([`oracle`]).
//!
//! All randomness flows through [`rng::CounterRng`], a counter-based
//! generator with explicit (seed, stream) derivation, so every experiment is
//! reproducible and replicas need no coordination.

pub mod annealed;
pub mod dynamics;
pub mod graph;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod planted;
pub mod rng;
pub mod stats;
pub mod tree;

mod error;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use rng::CounterRng;
