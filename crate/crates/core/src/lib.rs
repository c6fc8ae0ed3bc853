//! Plane trees under the Gibbs distribution `e^{-E(T)}/Z` with energy
//! `E(T) = α·d0 + β·d1 + γ·r`: exact counting, generating-function
//! coefficients, an exact sampler, subtree-additive properties and their
//! large-n scaling constants.

pub mod asymptotics;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod properties;
pub mod sampler;
pub mod series;
pub mod stats;
pub mod toll;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use tree::{join, stats, subtree_records, unjoin, PlaneTree, RootConvention, SubtreeRecord, TreeStats, TreeView};
