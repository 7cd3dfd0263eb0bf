//! Grid mazes as polyhedral models: unit squares split into two triangles,
//! each square's cells labeled with one room class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::complex::{SimplexId, SimplicialComplex};
use super::polyhedral::PolyhedralModel;

/// True at a red point iff a path through safe rooms leads to a green exit.
pub const SAFE_EXIT_QUERY: &str = "red & gamma(red | corridor | white, green)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Room {
    Red,
    Green,
    White,
    Gray,
    Corridor,
}

impl Room {
    pub const ALL: [Room; 5] = [Room::Red, Room::Green, Room::White, Room::Gray, Room::Corridor];

    pub fn atom(self) -> &'static str {
        match self {
            Room::Red => "red",
            Room::Green => "green",
            Room::White => "white",
            Room::Gray => "gray",
            Room::Corridor => "corridor",
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Room::Red => 'R',
            Room::Green => 'G',
            Room::White => 'W',
            Room::Gray => '#',
            Room::Corridor => 'C',
        }
    }

    pub fn from_symbol(c: char) -> Option<Room> {
        Room::ALL.into_iter().find(|r| r.symbol() == c)
    }
}

/// Relative frequencies of the room classes, in [`Room::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoomWeights(pub [f64; 5]);

impl Default for RoomWeights {
    fn default() -> Self {
        RoomWeights([0.1, 0.05, 0.45, 0.3, 0.1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MazeError {
    #[error("maze must be at least 1x1")]
    Empty,
    #[error("row {row} has length {found}, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("row {row}: unknown room symbol `{symbol}`")]
    UnknownSymbol { row: usize, symbol: char },
    #[error("room weights must be non-negative with a positive sum")]
    BadWeights,
}

/// Rooms in row-major order; row `y` covers the unit squares
/// `[x, x+1] x [y, y+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Maze {
    width: usize,
    height: usize,
    rooms: Vec<Room>,
}

impl Maze {
    pub fn filled(width: usize, height: usize, room: Room) -> Result<Self, MazeError> {
        if width == 0 || height == 0 {
            return Err(MazeError::Empty);
        }
        Ok(Maze { width, height, rooms: vec![room; width * height] })
    }

    /// Draws every room independently from `weights`, deterministically in
    /// `seed`.
    pub fn generate(
        width: usize,
        height: usize,
        seed: u64,
        weights: &RoomWeights,
    ) -> Result<Self, MazeError> {
        let mut maze = Maze::filled(width, height, Room::White)?;
        let dist = WeightedIndex::new(weights.0).map_err(|_| MazeError::BadWeights)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for room in maze.rooms.iter_mut() {
            *room = Room::ALL[dist.sample(&mut rng)];
        }
        Ok(maze)
    }

    /// One string per row, using the symbols `R G W # C`.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, MazeError> {
        let width = rows.first().map_or(0, |r| r.as_ref().chars().count());
        let mut maze = Maze::filled(width, rows.len(), Room::White)?;
        for (y, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            let found = row.chars().count();
            if found != width {
                return Err(MazeError::Ragged { row: y, found, expected: width });
            }
            for (x, c) in row.chars().enumerate() {
                let room = Room::from_symbol(c).ok_or(MazeError::UnknownSymbol { row: y, symbol: c })?;
                maze.set(x, y, room);
            }
        }
        Ok(maze)
    }

    pub fn parse(text: &str) -> Result<Self, MazeError> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        Maze::from_rows(&rows)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Room {
        self.rooms[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, room: Room) {
        self.rooms[y * self.width + x] = room;
    }

    pub fn squares(&self) -> impl Iterator<Item = (usize, usize, Room)> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).map(move |x| (x, y, self.get(x, y))))
    }

    fn vertex(x: usize, y: usize) -> String {
        format!("v{x}_{y}")
    }

    fn vertex_id(&self, x: usize, y: usize) -> usize {
        y * (self.width + 1) + x
    }

    /// The two triangle cells of square `(x, y)`: below and above its
    /// diagonal from `(x, y)` to `(x+1, y+1)`.
    pub fn triangles(&self, complex: &SimplicialComplex, x: usize, y: usize) -> [SimplexId; 2] {
        let (a, b, c, d) = (
            self.vertex_id(x, y),
            self.vertex_id(x + 1, y),
            self.vertex_id(x, y + 1),
            self.vertex_id(x + 1, y + 1),
        );
        [
            complex.simplex_id(&[a, b, d]).expect("lower triangle"),
            complex.simplex_id(&[a, c, d]).expect("upper triangle"),
        ]
    }

    /// Triangulated grid with full face closure. Every cell carries the
    /// class of each square whose closure contains it, so boundary cells
    /// carry several classes.
    pub fn polyhedral_model(&self) -> PolyhedralModel {
        let mut vertices = Vec::new();
        for y in 0..=self.height {
            for x in 0..=self.width {
                vertices.push((Maze::vertex(x, y), vec![x as f64, y as f64]));
            }
        }
        let mut simplices = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                let (a, b, c, d) = (
                    self.vertex_id(x, y),
                    self.vertex_id(x + 1, y),
                    self.vertex_id(x, y + 1),
                    self.vertex_id(x + 1, y + 1),
                );
                simplices.push(vec![a, b, d]);
                simplices.push(vec![a, c, d]);
            }
        }
        let complex = SimplicialComplex::new(vertices, simplices, true).expect("grid is well formed");
        let mut valuation: BTreeMap<String, BTreeSet<SimplexId>> = BTreeMap::new();
        for (x, y, room) in self.squares() {
            let cells = valuation.entry(room.atom().to_string()).or_default();
            for t in self.triangles(&complex, x, y) {
                for s in 0..complex.simplex_count() {
                    if complex.is_face(s, t) {
                        cells.insert(s);
                    }
                }
            }
        }
        PolyhedralModel::new(complex, valuation).expect("maze valuation is well formed")
    }
}

impl fmt::Display for Maze {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in 0..self.height {
            let row: String = (0..self.width).map(|x| self.get(x, y).symbol()).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}
