//! Core model for the qcisc compiler toolkit: the circuit intermediate
//! representation, the instruction taxonomy, the physical cost model and the
//! block-library ingestion layer shared by the bounds, assembler, grape and
//! verification crates.
//!
//! All durations are dimensionless multiples of `1/J_ZZ`; all types are
//! immutable after construction.

pub mod circuit;
pub mod cost;
pub mod error;
pub mod instruction;
pub mod library;

pub use circuit::{Circuit, PlacedInstruction};
pub use cost::{CostModel, LocalPolicy, QualityFactor};
pub use error::CoreError;
pub use instruction::{InstructionKind, LocalUParams};
pub use library::{default_library, BlockEntry, BlockLibrary, BlockSource};
