//! Evaluation of construction trees.

pub mod degree0;
pub mod graded;
pub mod les;
pub mod ring;
pub mod sod;
pub mod verdict;

pub use degree0::{compute_degree0, Degree0Module};
pub use graded::{compute_graded, evaluate_degreewise, GradedModuleValue, Shape};
pub use les::{assemble_les, AssembledLes};
pub use ring::{ring_degree0, RingPresentation, TowerPresentation, UniPoly};
pub use sod::sod_count;
pub use verdict::{
    classify_with_evidence, decompose_positive_k, not_in_b_verdict, parshin_check, refute_membership_b, run_preset,
    verify_comparison, Comparison, Elsewhere, FiberProfile, Preset, Verdict, VerdictKind,
};
