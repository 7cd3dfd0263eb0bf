//! Finite preorder models and their semantics.

pub mod audit;
pub mod eval;
pub mod model;
pub mod path;
pub mod sample;
pub mod sat;

pub use audit::{axiom_suite, AuditConfig, AuditReport, SchemaCheck, Violation};
pub use eval::{
    evaluate, evaluate_with, holds_at, reach_components, reach_fixpoint, reach_oracle,
    reach_paths, validity, Evaluator, ReachRelation, ReachStrategy,
};
pub use model::{ModelError, PosetModel, PreorderModel, WorldId, WorldSet};
pub use path::{check_path, witness_path, UpDownPath};
pub use sample::{FormulaSampler, ModelSampler};
pub use sat::{bounded_sat, bounded_sat_stats, SatOutcome, SatStats, MAX_SAT_WORLDS};
