//! Simplicial complexes, polyhedral models and their Kripke companions.

pub mod complex;
pub mod maze;
pub mod polyhedral;
pub mod realize;

pub use complex::{Crossing, GeometryError, Location, SimplexId, SimplicialComplex, VertexId, TOLERANCE};
pub use maze::{Maze, MazeError, Room, RoomWeights, SAFE_EXIT_QUERY};
pub use polyhedral::{evaluate_polyhedral, face_poset, path_witness_poly, PolyhedralModel};
pub use realize::realize;
