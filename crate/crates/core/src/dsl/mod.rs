//! Construction trees for simple varieties.

pub mod classify;
pub mod library;
pub mod tree;
pub mod validate;

pub use classify::{classify, ClassTag, MembershipClass, NotInBEvidence};
pub use library::{example_library, standard_characters, LibraryArg, LIBRARY_NAMES};
pub use tree::{BlowupSquare, BundleDatum, ConstructionTree, Corner, NodePath, SheafDatum, Split};
pub use validate::{validate, Violation};
