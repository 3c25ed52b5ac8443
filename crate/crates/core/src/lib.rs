//! Dynamic time warping for curves under edits.

pub mod curve;
pub mod dynamic;
pub mod error;
pub mod harness;
pub mod intermediary;
pub mod io;
pub mod metric;
pub mod monge;
pub mod oracle;
pub mod partition;
pub mod scalar;

pub use curve::{apply_edit, Curve, CurveEdit, EditKind, Side};
pub use dynamic::{DynamicConfig, DynamicDtw, RebuildMode};
pub use error::{Error, Result};
pub use metric::{distance, Metric, Point, PointDistance};
pub use oracle::{dtw, dtw_witness, monotone_distance, Traversal};
pub use scalar::{exact, Dist, Exact, Float, Scalar};
