pub mod bits;
pub mod dot;
pub mod enumerate;
pub mod error;
pub mod harness;
pub mod kalmbach;
pub mod lattice;
pub mod poset;
pub mod quotient;
pub mod space;
mod text;

pub use bits::Bits;
pub use error::{Error, Result};
pub use poset::{CompletionLattice, DownSet, Poset};
pub use lattice::{Hexagon, Ortholattice, ValidationReport};
pub use space::{Logic, OrthoSpace};
pub use quotient::{classify, Analysis, ClassificationReport, Quotient, QuotientSpace};
pub use kalmbach::{EvenChain, KalmbachLattice};
