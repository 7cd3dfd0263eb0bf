use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::kripke::model::is_identifier;

pub type VertexId = usize;
pub type SimplexId = usize;

/// Absolute tolerance on coordinates scaled to the unit bounding box.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("line {line}: unknown directive `{directive}`")]
    UnknownDirective { line: usize, directive: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("atom `{0}` is reserved")]
    ReservedAtom(String),
    #[error("vertex `{name}` has {found} coordinates, expected {expected}")]
    DimensionMismatch { name: String, found: usize, expected: usize },
    #[error("simplex with no vertices")]
    EmptySimplex,
    #[error("no simplex named `{0}`")]
    UnknownSimplex(String),
    #[error("simplex name `{0}` is ambiguous; join vertex names with `+`")]
    AmbiguousName(String),
    #[error("simplex {simplex} is missing its face {face}")]
    MissingFace { simplex: String, face: String },
    #[error("vertices of {0} are affinely dependent")]
    AffinelyDependent(String),
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { found: usize, expected: usize },
    #[error("point lies outside the polyhedron")]
    PointOutside,
    #[error("point is ambiguous between cells {0}")]
    AmbiguousCell(String),
    #[error("{0}")]
    NotAnUpDownPath(String),
}

/// A finite geometric simplicial complex in `R^m`.
///
/// Simplices are sorted vertex-id lists, stored in order of size and then
/// lexicographically, so simplex ids are deterministic.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    names: Vec<String>,
    coords: Vec<Vec<f64>>,
    ambient: usize,
    scaled: Vec<DVector<f64>>,
    offset: Vec<f64>,
    scale: f64,
    simplices: Vec<Vec<VertexId>>,
    index: HashMap<Vec<VertexId>, SimplexId>,
    vertex_index: HashMap<String, VertexId>,
    maximal: Vec<SimplexId>,
}

/// Barycentric position of a point in its cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub cell: SimplexId,
    /// Strictly positive coordinates over the cell's vertices.
    pub barycentric: Vec<(VertexId, f64)>,
}

/// A witness that two simplices meet outside their common face.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub first: SimplexId,
    pub second: SimplexId,
    pub point: Vec<f64>,
}

impl SimplicialComplex {
    /// Builds a complex from named vertices and simplices given as vertex
    /// lists. Every vertex is a 0-simplex. With `complete_faces`, every
    /// non-empty subset of a simplex is added as well.
    ///
    /// Only ids and dimensions are checked here; see [`Self::validate`].
    pub fn new(
        vertices: Vec<(String, Vec<f64>)>,
        simplices: Vec<Vec<VertexId>>,
        complete_faces: bool,
    ) -> Result<Self, GeometryError> {
        let ambient = vertices.first().map_or(0, |(_, c)| c.len());
        let mut names = Vec::new();
        let mut coords = Vec::new();
        let mut vertex_index = HashMap::new();
        for (name, c) in vertices {
            if !is_identifier(&name) {
                return Err(GeometryError::InvalidIdentifier(name));
            }
            if c.len() != ambient {
                return Err(GeometryError::DimensionMismatch {
                    name,
                    found: c.len(),
                    expected: ambient,
                });
            }
            if vertex_index.insert(name.clone(), names.len()).is_some() {
                return Err(GeometryError::DuplicateVertex(name));
            }
            names.push(name);
            coords.push(c);
        }
        let n = names.len();
        let mut set: BTreeSet<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
        for mut s in simplices {
            if s.is_empty() {
                return Err(GeometryError::EmptySimplex);
            }
            if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                return Err(GeometryError::UnknownVertex(format!("#{bad}")));
            }
            s.sort_unstable();
            s.dedup();
            if complete_faces {
                for mask in 1u64..(1u64 << s.len()) {
                    set.insert(subset(&s, mask));
                }
            } else {
                set.insert(s);
            }
        }
        let mut simplices: Vec<Vec<VertexId>> = set.into_iter().collect();
        simplices.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let index: HashMap<Vec<VertexId>, SimplexId> =
            simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        let mut offset = vec![f64::INFINITY; ambient];
        let mut hi = vec![f64::NEG_INFINITY; ambient];
        for c in &coords {
            for (k, &x) in c.iter().enumerate() {
                offset[k] = offset[k].min(x);
                hi[k] = hi[k].max(x);
            }
        }
        let extent = offset.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
        let scale = if extent > 0.0 { extent } else { 1.0 };
        let mut complex = SimplicialComplex {
            names,
            coords,
            ambient,
            scaled: Vec::new(),
            offset,
            scale,
            simplices,
            index,
            vertex_index,
            maximal: Vec::new(),
        };
        complex.scaled = complex.coords.iter().map(|c| complex.scale_point(c)).collect();
        complex.maximal = complex.compute_maximal();
        Ok(complex)
    }

    fn compute_maximal(&self) -> Vec<SimplexId> {
        (0..self.simplices.len())
            .filter(|&i| {
                let s = &self.simplices[i];
                !self.simplices.iter().any(|t| t.len() > s.len() && is_sub(s, t))
            })
            .collect()
    }

    fn scale_point(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.ambient,
            x.iter().zip(&self.offset).map(|(v, o)| (v - o) / self.scale),
        )
    }

    pub fn ambient_dimension(&self) -> usize {
        self.ambient
    }

    /// Largest simplex dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn coordinates(&self, v: VertexId) -> &[f64] {
        &self.coords[v]
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices(&self) -> &[Vec<VertexId>] {
        &self.simplices
    }

    pub fn vertices_of(&self, s: SimplexId) -> &[VertexId] {
        &self.simplices[s]
    }

    pub fn simplex_id(&self, vertices: &[VertexId]) -> Option<SimplexId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        key.dedup();
        self.index.get(&key).copied()
    }

    pub fn maximal_simplices(&self) -> &[SimplexId] {
        &self.maximal
    }

    /// Vertex names sorted and joined by `+`.
    pub fn label(&self, s: SimplexId) -> String {
        self.label_of(&self.simplices[s])
    }

    fn label_of(&self, vertices: &[VertexId]) -> String {
        let mut names: Vec<&str> = vertices.iter().map(|&v| self.names[v].as_str()).collect();
        names.sort_unstable();
        names.join("+")
    }

    /// Resolves a simplex name: vertex names joined by `+`, or concatenated
    /// in sorted order.
    pub fn resolve(&self, name: &str) -> Result<SimplexId, GeometryError> {
        if name.contains('+') {
            let ids = name
                .split('+')
                .map(|v| self.vertex(v).ok_or_else(|| GeometryError::UnknownVertex(v.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            return self
                .simplex_id(&ids)
                .ok_or_else(|| GeometryError::UnknownSimplex(name.to_string()));
        }
        let mut found = None;
        for (i, s) in self.simplices.iter().enumerate() {
            let mut names: Vec<&str> = s.iter().map(|&v| self.names[v].as_str()).collect();
            names.sort_unstable();
            if names.concat() == name {
                if found.is_some() {
                    return Err(GeometryError::AmbiguousName(name.to_string()));
                }
                found = Some(i);
            }
        }
        found.ok_or_else(|| GeometryError::UnknownSimplex(name.to_string()))
    }

    /// `a` is a face of `b`.
    pub fn is_face(&self, a: SimplexId, b: SimplexId) -> bool {
        is_sub(&self.simplices[a], &self.simplices[b])
    }

    pub fn barycenter(&self, s: SimplexId) -> Vec<f64> {
        let vs = &self.simplices[s];
        let mut out = vec![0.0; self.ambient];
        for &v in vs {
            for (o, x) in out.iter_mut().zip(&self.coords[v]) {
                *o += x;
            }
        }
        out.iter_mut().for_each(|o| *o /= vs.len() as f64);
        out
    }

    /// Face closure, affine independence and the combinatorial intersection
    /// condition, in that order. Returns every issue found.
    pub fn structural_issues(&self) -> Vec<GeometryError> {
        let mut issues = Vec::new();
        for s in &self.simplices {
            for mask in 1u64..(1u64 << s.len()) - 1 {
                let face = subset(s, mask);
                if !self.index.contains_key(&face) {
                    issues.push(GeometryError::MissingFace {
                        simplex: self.label_of(s),
                        face: self.label_of(&face),
                    });
                    break;
                }
            }
        }
        for (i, s) in self.simplices.iter().enumerate() {
            if !self.affinely_independent(s) {
                issues.push(GeometryError::AffinelyDependent(self.label(i)));
            }
        }
        for (i, &a) in self.maximal.iter().enumerate() {
            for &b in &self.maximal[i + 1..] {
                let common: Vec<VertexId> = self.simplices[a]
                    .iter()
                    .copied()
                    .filter(|v| self.simplices[b].contains(v))
                    .collect();
                if !common.is_empty() && !self.index.contains_key(&common) {
                    issues.push(GeometryError::MissingFace {
                        simplex: self.label(a),
                        face: self.label_of(&common),
                    });
                }
            }
        }
        issues
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        match self.structural_issues().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    fn affinely_independent(&self, s: &[VertexId]) -> bool {
        if s.len() == 1 {
            return true;
        }
        if s.len() > self.ambient + 1 {
            return false;
        }
        let base = &self.scaled[s[0]];
        let m = DMatrix::from_fn(self.ambient, s.len() - 1, |r, c| self.scaled[s[c + 1]][r] - base[r]);
        m.svd(false, false).singular_values.iter().filter(|&&x| x > TOLERANCE).count() == s.len() - 1
    }

    /// Least-squares barycentric coordinates of a scaled point against the
    /// vertices of `s`, with the residual of the affine system.
    fn barycentric(&self, s: &[VertexId], x: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
        let rows = self.ambient + 1;
        let a = DMatrix::from_fn(rows, s.len(), |r, c| {
            if r < self.ambient {
                self.scaled[s[c]][r]
            } else {
                1.0
            }
        });
        let b = DVector::from_fn(rows, |r, _| if r < self.ambient { x[r] } else { 1.0 });
        let lambda = a.clone().svd(true, true).solve(&b, TOLERANCE).ok()?;
        let residual = (&a * &lambda - &b).norm();
        Some((lambda, residual))
    }

    /// The unique simplex whose relative interior contains `x`, with the
    /// barycentric coordinates of `x` in it.
    pub fn locate(&self, x: &[f64]) -> Result<Location, GeometryError> {
        if x.len() != self.ambient {
            return Err(GeometryError::PointDimension { found: x.len(), expected: self.ambient });
        }
        let sx = self.scale_point(x);
        let mut found: Option<Location> = None;
        let mut conflicts: BTreeSet<SimplexId> = BTreeSet::new();
        for &m in &self.maximal {
            let s = &self.simplices[m];
            let Some((lambda, residual)) = self.barycentric(s, &sx) else { continue };
            if residual > TOLERANCE || lambda.iter().any(|&l| l < -TOLERANCE) {
                continue;
            }
            let support: Vec<(VertexId, f64)> = s
                .iter()
                .zip(lambda.iter())
                .filter(|(_, &l)| l > TOLERANCE)
                .map(|(&v, &l)| (v, l))
                .collect();
            let ids: Vec<VertexId> = support.iter().map(|&(v, _)| v).collect();
            let Some(&cell) = self.index.get(&ids) else {
                return Err(GeometryError::UnknownSimplex(self.label_of(&ids)));
            };
            match &found {
                None => found = Some(Location { cell, barycentric: support }),
                Some(loc) if loc.cell == cell => {}
                Some(loc) => {
                    conflicts.insert(loc.cell);
                    conflicts.insert(cell);
                }
            }
        }
        if !conflicts.is_empty() {
            let labels: Vec<String> = conflicts.iter().map(|&c| self.label(c)).collect();
            return Err(GeometryError::AmbiguousCell(labels.join(", ")));
        }
        found.ok_or(GeometryError::PointOutside)
    }

    /// The cell map: the simplex whose relative interior contains `x`.
    pub fn cell_of(&self, x: &[f64]) -> Result<SimplexId, GeometryError> {
        self.locate(x).map(|l| l.cell)
    }

    /// Checks that any two maximal simplices meet exactly in the hull of
    /// their common vertices.
    ///
    /// Two simplices violate this iff some faces of them with disjoint vertex
    /// sets have intersecting hulls. Such an intersection, if any, contains
    /// an extreme point of the set of coefficient pairs; its support gives a
    /// pair of sub-faces whose coefficient system has full column rank, so
    /// solving every full-rank pair exactly is complete.
    pub fn geometric_audit(&self) -> Vec<Crossing> {
        let mut out = Vec::new();
        let boxes: Vec<(Vec<f64>, Vec<f64>)> = self
            .maximal
            .iter()
            .map(|&m| {
                let mut lo = vec![f64::INFINITY; self.ambient];
                let mut hi = vec![f64::NEG_INFINITY; self.ambient];
                for &v in &self.simplices[m] {
                    for k in 0..self.ambient {
                        lo[k] = lo[k].min(self.scaled[v][k]);
                        hi[k] = hi[k].max(self.scaled[v][k]);
                    }
                }
                (lo, hi)
            })
            .collect();
        for i in 0..self.maximal.len() {
            for j in i + 1..self.maximal.len() {
                let overlap = (0..self.ambient).all(|k| {
                    boxes[i].0[k] <= boxes[j].1[k] + TOLERANCE
                        && boxes[j].0[k] <= boxes[i].1[k] + TOLERANCE
                });
                if !overlap {
                    continue;
                }
                let (a, b) = (self.maximal[i], self.maximal[j]);
                if let Some(point) = self.crossing(&self.simplices[a], &self.simplices[b]) {
                    out.push(Crossing { first: a, second: b, point });
                }
            }
        }
        out
    }

    fn crossing(&self, s: &[VertexId], t: &[VertexId]) -> Option<Vec<f64>> {
        let m = self.ambient;
        for ma in 1u64..(1u64 << s.len()) {
            let alpha = subset(s, ma);
            for mb in 1u64..(1u64 << t.len()) {
                let beta = subset(t, mb);
                let cols = alpha.len() + beta.len();
                if cols > m + 2 || alpha.iter().any(|v| beta.contains(v)) {
                    continue;
                }
                // sum(l_i a_i) - sum(u_j b_j) = 0, sum(l) = 1, sum(u) = 1
                let mat = DMatrix::from_fn(m + 2, cols, |r, c| {
                    let (v, sign, side) = if c < alpha.len() {
                        (alpha[c], 1.0, 0)
                    } else {
                        (beta[c - alpha.len()], -1.0, 1)
                    };
                    if r < m {
                        sign * self.scaled[v][r]
                    } else if r - m == side {
                        1.0
                    } else {
                        0.0
                    }
                });
                let svd = mat.clone().svd(true, true);
                if svd.singular_values.iter().filter(|&&x| x > TOLERANCE).count() < cols {
                    continue;
                }
                let rhs = DVector::from_fn(m + 2, |r, _| if r < m { 0.0 } else { 1.0 });
                let Ok(coef) = svd.solve(&rhs, TOLERANCE) else { continue };
                if (&mat * &coef - &rhs).norm() > TOLERANCE
                    || coef.iter().any(|&c| c < -TOLERANCE)
                {
                    continue;
                }
                let mut point = vec![0.0; m];
                for (k, &v) in alpha.iter().enumerate() {
                    for (p, x) in point.iter_mut().zip(&self.coords[v]) {
                        *p += coef[k] * x;
                    }
                }
                return Some(point);
            }
        }
        None
    }
}

fn subset(s: &[VertexId], mask: u64) -> Vec<VertexId> {
    s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
}

/// Sorted-list inclusion.
fn is_sub(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}
