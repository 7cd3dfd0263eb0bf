//! Model checking and model transformations for the modal logic of
//! reachability on finite posets and polyhedra.

pub mod formula;
pub mod kripke;
pub mod geometry;
pub mod transforms;
pub mod report;
