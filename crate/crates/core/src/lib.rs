//! Structure theory of elementary abelian 2-hypergroups.
//!
//! [`ea2`] holds the structured representation (signatures and support
//! masks), [`classify`] the closed-subset algorithms, [`kernel`] a generic
//! finite-hypergroup table with brute-force reference algorithms, and
//! [`gf2`] the linear algebra both sides rely on. [`verify`] cross-checks
//! the structured side against the table side.

pub mod classify;
pub mod ea2;
pub mod error;
pub mod gf2;
pub mod kernel;
pub mod verify;

pub use classify::{AutDescriptor, ClosedDescriptor, IsoClassStat};
pub use ea2::{Element, ElementSet, Signature, SubsetStats};
pub use error::{Error, Result};
pub use gf2::{BigCount, Gf2Subspace, Gf2Vector};
pub use kernel::{Subset, TableHypergroup};
