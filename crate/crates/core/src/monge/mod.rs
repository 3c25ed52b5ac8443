//! Monge machinery: SMAWK, alignment graphs, boundary distance matrices and
//! the min-plus products built on them.

mod alignment;
mod boundary;
pub(crate) mod grid;
mod minplus;
pub mod smawk;

pub use alignment::{sink_index, sink_vertex, source_index, source_vertex, AlignmentGraph, Step};
pub use boundary::{build_boundary_matrix, BoundaryDistanceMatrix, BuildStrategy};
pub use minplus::{minplus_apply, minplus_naive};
pub use smawk::{smawk_column_minima, smawk_row_minima};
