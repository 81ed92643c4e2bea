//! Exact Khovanov homology of oriented links, with its full torsion.
//!
//! The chain complex is built from enhanced Kauffman states of a planar
//! diagram, boundary matrices are diagonalized exactly over the integers,
//! and the resulting tables feed the polynomial invariants, the thinness
//! classifications, and the verification suites.

pub mod census;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod record;
pub mod render;
pub mod unionfind;
pub mod verify;

pub use diagram::{LinkDiagram, LinkMetadata, Sign, State};
pub use error::{Error, Result};
pub use homology::{compute_table, ComputeOptions};
pub use invariants::HomologyTable;
pub use linalg::{AbelianGroup, SparseIntMatrix};
pub use par::Exec;
