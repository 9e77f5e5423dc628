//! Homological benchmarking of surface codes under erasure.
//!
//! A surface is a cellulation whose boundary edges are marked open or closed;
//! qubits sit on the non-open edges. An erasure is correctable exactly when it
//! covers no non-trivial cycle of the surface or of its dual, and that is
//! decided by counting connected components, in time linear in the size of
//! the surface.

pub mod benchmark;
pub mod cellulation;
pub mod generators;
pub mod homology;
pub mod report;
pub mod table;
mod union_find;

pub use benchmark::{Benchmark, Mode, PointResult, SweepConfig, SweepResult};
pub use cellulation::{BoundaryClass, DualSurface, Surface};
pub use homology::{
    induced_h1, is_correctable, logical_qubit_count, ErasurePattern, H1Rank, Verdict,
};
pub use report::CodeReport;
