//! Model transformations: nerve, up-down morphisms, filtration, cut and the
//! filtrate-then-cut pipeline.

pub mod chi;
pub mod cut;
pub mod filtration;
pub mod morphism;
pub mod nerve;
pub mod pipeline;

pub use chi::{chi, chi_disjunction, chi_lemma_check, reachable_classes, ChiError};
pub use cut::cut;
pub use filtration::{filtrate, preservation_failures, ClassModel, PreservationFailure};
pub use morphism::{is_updown_morphism, pullback_check, MorphismViolation, PullbackFailure};
pub use nerve::{nerve, NerveModel};
pub use pipeline::{plr_pipeline, NormalizationFailure, PipelineOutput, PreservationReport};
