use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Formula, TRUTH_ATOM};
use crate::kripke::model::{is_identifier, PosetModel, PreorderModel};
use crate::kripke::path::{check_path, UpDownPath};
use crate::kripke::eval::Evaluator;

use super::complex::{GeometryError, SimplexId, SimplicialComplex, VertexId};

/// A simplicial complex with a valuation on its cells.
#[derive(Debug, Clone)]
pub struct PolyhedralModel {
    complex: SimplicialComplex,
    valuation: BTreeMap<String, BTreeSet<SimplexId>>,
}

impl PolyhedralModel {
    pub fn new(
        complex: SimplicialComplex,
        valuation: BTreeMap<String, BTreeSet<SimplexId>>,
    ) -> Result<Self, GeometryError> {
        for (atom, cells) in &valuation {
            if atom == TRUTH_ATOM {
                return Err(GeometryError::ReservedAtom(atom.clone()));
            }
            if !is_identifier(atom) {
                return Err(GeometryError::InvalidIdentifier(atom.clone()));
            }
            if let Some(&bad) = cells.iter().find(|&&c| c >= complex.simplex_count()) {
                return Err(GeometryError::UnknownSimplex(format!("#{bad}")));
            }
        }
        Ok(PolyhedralModel { complex, valuation })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<SimplexId>> {
        &self.valuation
    }

    /// Parses the complex text format.
    ///
    /// ```text
    /// vertex a 0 0
    /// vertex b 1 0
    /// simplex a b        # faces are added automatically
    /// valuation p ab a   # simplices named by sorted vertex names
    /// ```
    ///
    /// The directive `faces explicit` turns off face completion, so that
    /// [`SimplicialComplex::validate`] can report missing faces.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut vertices: Vec<(String, Vec<f64>)> = Vec::new();
        let mut names: BTreeMap<String, VertexId> = BTreeMap::new();
        let mut simplices: Vec<Vec<VertexId>> = Vec::new();
        let mut pending: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut complete = true;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            let mut parts = line.split_whitespace();
            let Some(directive) = parts.next() else { continue };
            let args: Vec<&str> = parts.collect();
            let syntax = |message: &str| GeometryError::Syntax { line: line_no, message: message.into() };
            match directive {
                "vertex" => {
                    let (name, coords) = args.split_first().ok_or_else(|| syntax("vertex needs a name"))?;
                    let coords = coords
                        .iter()
                        .map(|c| {
                            c.parse::<f64>()
                                .ok()
                                .filter(|x| x.is_finite())
                                .ok_or_else(|| syntax(&format!("bad coordinate `{c}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if coords.is_empty() {
                        return Err(syntax("vertex needs coordinates"));
                    }
                    names.insert(name.to_string(), vertices.len());
                    vertices.push((name.to_string(), coords));
                }
                "simplex" => {
                    if args.is_empty() {
                        return Err(syntax("simplex needs vertices"));
                    }
                    let ids = args
                        .iter()
                        .map(|v| names.get(*v).copied().ok_or_else(|| GeometryError::UnknownVertex(v.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    simplices.push(ids);
                }
                "valuation" => {
                    let (atom, cells) = args.split_first().ok_or_else(|| syntax("valuation needs an atom"))?;
                    pending.push((line_no, atom.to_string(), cells.iter().map(|s| s.to_string()).collect()));
                }
                "faces" => match args.as_slice() {
                    ["explicit"] => complete = false,
                    ["complete"] => complete = true,
                    _ => return Err(syntax("expected `faces explicit` or `faces complete`")),
                },
                other => {
                    return Err(GeometryError::UnknownDirective {
                        line: line_no,
                        directive: other.to_string(),
                    })
                }
            }
        }
        let complex = SimplicialComplex::new(vertices, simplices, complete)?;
        let mut valuation: BTreeMap<String, BTreeSet<SimplexId>> = BTreeMap::new();
        for (_, atom, cells) in pending {
            let entry = valuation.entry(atom).or_default();
            for c in cells {
                entry.insert(complex.resolve(&c)?);
            }
        }
        PolyhedralModel::new(complex, valuation)
    }

    /// Writes vertices, maximal simplices and the valuation, naming cells
    /// with `+`-joined vertex names.
    pub fn to_text(&self) -> String {
        let k = &self.complex;
        let mut out = String::new();
        for v in 0..k.vertex_count() {
            let coords: Vec<String> = k.coordinates(v).iter().map(|x| format!("{x}")).collect();
            out.push_str(&format!("vertex {} {}\n", k.vertex_name(v), coords.join(" ")));
        }
        for &m in k.maximal_simplices() {
            if k.vertices_of(m).len() > 1 {
                let names: Vec<&str> = k.vertices_of(m).iter().map(|&v| k.vertex_name(v)).collect();
                out.push_str(&format!("simplex {}\n", names.join(" ")));
            }
        }
        for (atom, cells) in &self.valuation {
            out.push_str("valuation ");
            out.push_str(atom);
            for &c in cells {
                out.push(' ');
                out.push_str(&k.label(c));
            }
            out.push('\n');
        }
        out
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        self.complex.validate()
    }

    /// The Kripke companion: the face poset with the cell valuation.
    pub fn companion(&self) -> PosetModel {
        let valuation = self
            .valuation
            .iter()
            .map(|(a, cells)| (a.clone(), cells.iter().copied().collect::<Vec<_>>()));
        face_poset_with(&self.complex, valuation)
    }

    pub fn cell_of(&self, x: &[f64]) -> Result<SimplexId, GeometryError> {
        self.complex.cell_of(x)
    }

    /// Truth of `f` at the point `x`, read off the companion at the cell of
    /// `x`.
    pub fn evaluate_at(&self, f: &Formula, x: &[f64]) -> Result<bool, GeometryError> {
        let cell = self.cell_of(x)?;
        let companion = self.companion();
        Ok(Evaluator::new(&companion).holds_at(f, cell))
    }

    /// Cells where `f` holds.
    pub fn extension(&self, f: &Formula) -> BTreeSet<SimplexId> {
        let companion = self.companion();
        Evaluator::new(&companion).eval(f).iter().collect()
    }
}

/// Simplices ordered by vertex-set inclusion. World ids equal simplex ids.
pub fn face_poset(k: &SimplicialComplex) -> PosetModel {
    face_poset_with(k, std::iter::empty())
}

fn face_poset_with<V>(k: &SimplicialComplex, valuation: V) -> PosetModel
where
    V: IntoIterator<Item = (String, Vec<SimplexId>)>,
{
    let names: Vec<String> = (0..k.simplex_count()).map(|s| k.label(s)).collect();
    let mut edges = Vec::new();
    for a in 0..k.simplex_count() {
        for b in 0..k.simplex_count() {
            if a != b && k.is_face(a, b) {
                edges.push((a, b));
            }
        }
    }
    PreorderModel::from_ids(names, edges, valuation)
        .and_then(PreorderModel::into_poset)
        .expect("face inclusion is a partial order")
}

/// Truth of `f` at `x` in `model`.
pub fn evaluate_polyhedral(
    model: &PolyhedralModel,
    f: &Formula,
    x: &[f64],
) -> Result<bool, GeometryError> {
    model.evaluate_at(f, x)
}

/// Breakpoints of a piecewise-linear path from `x` to `y` whose interior
/// runs through the relative interiors of the cells `through`, in order.
///
/// `(cell(x), through.., cell(y))` must form an up-down path in the face
/// poset. The polyline visits the barycenter of every listed cell; each
/// segment between comparable cells lies in the larger one.
pub fn path_witness_poly(
    model: &PolyhedralModel,
    x: &[f64],
    y: &[f64],
    through: &[SimplexId],
) -> Result<Vec<Vec<f64>>, GeometryError> {
    let k = model.complex();
    let start = k.cell_of(x)?;
    let end = k.cell_of(y)?;
    if let Some(&bad) = through.iter().find(|&&c| c >= k.simplex_count()) {
        return Err(GeometryError::UnknownSimplex(format!("#{bad}")));
    }
    let mut worlds = vec![start];
    worlds.extend_from_slice(through);
    worlds.push(end);
    let poset = face_poset(k);
    let all = poset.full_set();
    let path = UpDownPath::new(worlds);
    if !check_path(&poset, &path, &all) {
        return Err(GeometryError::NotAnUpDownPath(format!("{}", path.display(&poset))));
    }
    let mut out = vec![x.to_vec()];
    out.extend(through.iter().map(|&c| k.barycenter(c)));
    out.push(y.to_vec());
    Ok(out)
}
