//! Spatially coupled LDPC base matrices, band splitting permutations and
//! burst-erasure analysis.
//!
//! The crate builds `(l, r, L)` coupled base matrices, permutes their
//! columns with a depth-`k` block interleaver that splits the single
//! diagonal band into `k` bands, lifts base matrices into parity-check
//! matrices, and measures burst-erasure capability: stopping sets, span,
//! maximal correctable burst length and ratio, and density-evolution
//! thresholds.
//!
//! Column and row indices are 1-based in every public interface.

pub mod construct;
pub mod de;
pub mod decode;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod permute;
pub mod rng;
pub mod stopping;

pub use construct::{build_base_matrix, design_rate, lift, CodeParams, LiftSpec, LiftStyle};
pub use decode::{burst_correctable, compute_wmax, peel, BurstReport, DecodeResult, ErasurePattern};
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, SparseParityCheck};
pub use permute::{apply_columns, bsp, map_index_set, random_permutation, Permutation};
pub use stopping::{BoundInterval, StoppingSet};

/// Exact rational used for rates and burst ratios.
pub type Rate = num_rational::Ratio<i64>;

/// Interval on the maximal correctable burst length.
pub type LengthInterval = stopping::BoundInterval<i64>;

/// Interval on the maximal correctable burst ratio.
pub type RateInterval = stopping::BoundInterval<Rate>;

pub type DeState64 = de::EdgeMessageState<f64>;
pub type DeState32 = de::EdgeMessageState<f32>;
pub type Threshold64 = de::ThresholdResult<f64>;
pub type Threshold32 = de::ThresholdResult<f32>;
