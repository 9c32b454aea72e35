//! Alternative-aware ASR scoring: normalization-rule filtering, edit-distance
//! alignment over alternative networks, lattice-derived alternatives, and
//! oracle error rates.

pub mod align;
pub mod error;
pub mod formats;
pub mod glm_filter;
pub mod lattice_ops;
pub mod network;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod segmentation;
pub mod synth;

pub use align::{align, aggregate, compute_metrics, AlignmentResult, CostModel, Metrics, Verdict};
pub use error::{Error, Result};
pub use network::{AltItem, AltNetwork, Alternative, NetWord, Slot};
