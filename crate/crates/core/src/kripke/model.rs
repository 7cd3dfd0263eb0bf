use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Deref;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::formula::TRUTH_ATOM;

pub type WorldId = usize;

/// A set of worlds of one model, stored as a bitset over world ids.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WorldSet(FixedBitSet);

impl WorldSet {
    pub fn empty(size: usize) -> Self {
        WorldSet(FixedBitSet::with_capacity(size))
    }

    pub fn full(size: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(size);
        bits.insert_range(..);
        WorldSet(bits)
    }

    pub fn from_worlds<I: IntoIterator<Item = WorldId>>(size: usize, worlds: I) -> Self {
        let mut set = WorldSet::empty(size);
        for w in worlds {
            set.insert(w);
        }
        set
    }

    /// Number of worlds of the owning model.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, w: WorldId) -> bool {
        self.0.contains(w)
    }

    pub fn insert(&mut self, w: WorldId) {
        self.0.insert(w);
    }

    pub fn remove(&mut self, w: WorldId) {
        self.0.set(w, false);
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = WorldId> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<WorldId> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<WorldId> {
        self.0.minimum()
    }

    pub fn union_with(&mut self, other: &WorldSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &WorldSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn complement(&self) -> WorldSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: unknown directive `{directive}`")]
    UnknownDirective { line: usize, directive: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("atom `{0}` is reserved")]
    ReservedAtom(String),
    #[error("order is not antisymmetric: `{0}` and `{1}` form a cluster")]
    NotAPoset(String, String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<ModelError>,
    },
}

/// Atom and world identifiers: `[a-zA-Z][a-zA-Z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// World names additionally allow `+`-joined identifiers, which is how
/// derived models (chains, classes, simplices) name their worlds.
pub fn is_world_name(s: &str) -> bool {
    s.split('+').all(is_identifier)
}

/// A finite set of worlds with a reflexive, transitive order and a valuation.
#[derive(Clone, Debug)]
pub struct PreorderModel {
    names: Vec<String>,
    index: HashMap<String, WorldId>,
    base_edges: Vec<(WorldId, WorldId)>,
    up: Vec<WorldSet>,
    down: Vec<WorldSet>,
    valuation: BTreeMap<String, WorldSet>,
}

impl PreorderModel {
    /// Builds a model from named worlds, generator pairs `a ≼ b` and
    /// valuation entries. The order is the reflexive-transitive closure of
    /// the generators.
    pub fn new<W, E, V, A, S>(worlds: W, edges: E, valuation: V) -> Result<Self, ModelError>
    where
        W: IntoIterator,
        W::Item: Into<String>,
        E: IntoIterator<Item = (S, S)>,
        V: IntoIterator<Item = (A, Vec<S>)>,
        A: Into<String>,
        S: AsRef<str>,
    {
        let names: Vec<String> = worlds.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if !is_world_name(name) {
                return Err(ModelError::InvalidIdentifier(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(name.clone()));
            }
        }
        let lookup = |s: &str| {
            index.get(s).copied().ok_or_else(|| ModelError::UnknownWorld(s.to_string()))
        };
        let mut edge_ids = Vec::new();
        for (a, b) in edges {
            edge_ids.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        let mut val_ids = Vec::new();
        for (atom, ws) in valuation {
            let atom = atom.into();
            let ids = ws.iter().map(|w| lookup(w.as_ref())).collect::<Result<Vec<_>, _>>()?;
            val_ids.push((atom, ids));
        }
        Self::from_ids(names, edge_ids, val_ids)
    }

    /// Same as [`PreorderModel::new`] with world ids instead of names.
    pub fn from_ids<V>(
        names: Vec<String>,
        edges: Vec<(WorldId, WorldId)>,
        valuation: V,
    ) -> Result<Self, ModelError>
    where
        V: IntoIterator<Item = (String, Vec<WorldId>)>,
    {
        let n = names.len();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if !is_world_name(name) {
                return Err(ModelError::InvalidIdentifier(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(name.clone()));
            }
        }
        for &(a, b) in &edges {
            for w in [a, b] {
                if w >= n {
                    return Err(ModelError::UnknownWorld(format!("#{w}")));
                }
            }
        }
        let mut val: BTreeMap<String, WorldSet> = BTreeMap::new();
        for (atom, ws) in valuation {
            if atom == TRUTH_ATOM {
                return Err(ModelError::ReservedAtom(atom));
            }
            if !is_identifier(&atom) {
                return Err(ModelError::InvalidIdentifier(atom));
            }
            let entry = val.entry(atom).or_insert_with(|| WorldSet::empty(n));
            for w in ws {
                if w >= n {
                    return Err(ModelError::UnknownWorld(format!("#{w}")));
                }
                entry.insert(w);
            }
        }

        let mut up: Vec<WorldSet> = (0..n).map(|w| WorldSet::from_worlds(n, [w])).collect();
        for &(a, b) in &edges {
            up[a].insert(b);
        }
        // Warshall over bitset rows
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut down: Vec<WorldSet> = (0..n).map(|_| WorldSet::empty(n)).collect();
        for (w, row) in up.iter().enumerate() {
            for v in row.iter() {
                down[v].insert(w);
            }
        }
        Ok(PreorderModel { names, index, base_edges: edges, up, down, valuation: val })
    }

    pub fn world_count(&self) -> usize {
        self.names.len()
    }

    pub fn worlds(&self) -> std::ops::Range<WorldId> {
        0..self.names.len()
    }

    pub fn name(&self, w: WorldId) -> &str {
        &self.names[w]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Option<WorldId> {
        self.index.get(name).copied()
    }

    pub fn base_edges(&self) -> &[(WorldId, WorldId)] {
        &self.base_edges
    }

    /// `w ≼ v`
    pub fn le(&self, w: WorldId, v: WorldId) -> bool {
        self.up[w].contains(v)
    }

    /// `w ≺ v`: `w ≼ v` and not `v ≼ w`.
    pub fn lt(&self, w: WorldId, v: WorldId) -> bool {
        self.le(w, v) && !self.le(v, w)
    }

    /// `{v | w ≼ v}`
    pub fn up(&self, w: WorldId) -> &WorldSet {
        &self.up[w]
    }

    /// `{v | v ≼ w}`
    pub fn down(&self, w: WorldId) -> &WorldSet {
        &self.down[w]
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// Extension of an atom; atoms absent from the valuation are empty.
    pub fn atom(&self, name: &str) -> WorldSet {
        self.valuation
            .get(name)
            .cloned()
            .unwrap_or_else(|| WorldSet::empty(self.world_count()))
    }

    pub fn empty_set(&self) -> WorldSet {
        WorldSet::empty(self.world_count())
    }

    pub fn full_set(&self) -> WorldSet {
        WorldSet::full(self.world_count())
    }

    /// First pair of distinct worlds in a common cluster, if any.
    pub fn cluster_witness(&self) -> Option<(WorldId, WorldId)> {
        for w in self.worlds() {
            for v in self.up[w].iter() {
                if v != w && self.le(v, w) {
                    return Some((w, v));
                }
            }
        }
        None
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.cluster_witness().is_none()
    }

    /// Recomputes the closure of the stored order and compares.
    pub fn order_is_closed(&self) -> bool {
        self.worlds().all(|w| {
            self.up[w].contains(w)
                && self.up[w].iter().all(|v| self.up[v].is_subset(&self.up[w]))
        })
    }

    /// Comma-free display of a world set in name order: `{a, b}`.
    pub fn format_set(&self, set: &WorldSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|w| self.name(w)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(", "))
    }

    /// Generators written when serializing: cover pairs for posets, every
    /// non-reflexive pair otherwise.
    fn generators(&self) -> Vec<(WorldId, WorldId)> {
        let poset = self.is_antisymmetric();
        let mut out = Vec::new();
        for w in self.worlds() {
            for v in self.up[w].iter() {
                if v == w {
                    continue;
                }
                if poset {
                    let covered = self.up[w]
                        .iter()
                        .any(|z| z != w && z != v && self.le(z, v));
                    if covered {
                        continue;
                    }
                }
                out.push((w, v));
            }
        }
        out
    }

    /// Serializes in the line-oriented model format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("worlds");
        for name in &self.names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for (a, b) in self.generators() {
            out.push_str(&format!("order {} {}\n", self.names[a], self.names[b]));
        }
        for (atom, set) in &self.valuation {
            out.push_str("valuation ");
            out.push_str(atom);
            for w in set.iter() {
                out.push(' ');
                out.push_str(&self.names[w]);
            }
            out.push('\n');
        }
        out
    }

    /// Parses the line-oriented model format:
    ///
    /// ```text
    /// worlds a b c
    /// order a b          # a ≼ b
    /// valuation p a c
    /// ```
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut worlds: Vec<(usize, String)> = Vec::new();
        let mut edges: Vec<(usize, String, String)> = Vec::new();
        let mut valuation: Vec<(usize, String, Vec<String>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut words = content.split_whitespace();
            let Some(directive) = words.next() else { continue };
            let args: Vec<String> = words.map(str::to_string).collect();
            match directive {
                "worlds" => worlds.extend(args.into_iter().map(|w| (line, w))),
                "order" => {
                    if args.len() != 2 {
                        return Err(ModelError::Syntax {
                            line,
                            message: format!("`order` takes two worlds, got {}", args.len()),
                        });
                    }
                    edges.push((line, args[0].clone(), args[1].clone()));
                }
                "valuation" => {
                    let mut it = args.into_iter();
                    let Some(atom) = it.next() else {
                        return Err(ModelError::Syntax {
                            line,
                            message: "`valuation` needs an atom name".into(),
                        });
                    };
                    valuation.push((line, atom, it.collect()));
                }
                other => {
                    return Err(ModelError::UnknownDirective {
                        line,
                        directive: other.to_string(),
                    })
                }
            }
        }
        let at = |line: usize, e: ModelError| ModelError::AtLine { line, source: Box::new(e) };
        let mut index = HashMap::new();
        for (k, (line, name)) in worlds.iter().enumerate() {
            if !is_world_name(name) {
                return Err(at(*line, ModelError::InvalidIdentifier(name.clone())));
            }
            if index.insert(name.as_str(), k).is_some() {
                return Err(at(*line, ModelError::DuplicateWorld(name.clone())));
            }
        }
        let lookup = |line: usize, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| at(line, ModelError::UnknownWorld(name.to_string())))
        };
        let mut edge_ids = Vec::new();
        for (line, a, b) in &edges {
            edge_ids.push((lookup(*line, a)?, lookup(*line, b)?));
        }
        let mut val_ids = Vec::new();
        for (line, atom, ws) in &valuation {
            if atom == TRUTH_ATOM {
                return Err(at(*line, ModelError::ReservedAtom(atom.clone())));
            }
            if !is_identifier(atom) {
                return Err(at(*line, ModelError::InvalidIdentifier(atom.clone())));
            }
            let ids = ws.iter().map(|w| lookup(*line, w)).collect::<Result<Vec<_>, _>>()?;
            val_ids.push((atom.clone(), ids));
        }
        let names = worlds.into_iter().map(|(_, n)| n).collect();
        Self::from_ids(names, edge_ids, val_ids)
    }

    /// Same worlds and order with a different valuation.
    pub fn with_valuation<V>(&self, valuation: V) -> Result<Self, ModelError>
    where
        V: IntoIterator<Item = (String, Vec<WorldId>)>,
    {
        let mut model = Self::from_ids(self.names.clone(), Vec::new(), valuation)?;
        model.base_edges = self.base_edges.clone();
        model.up = self.up.clone();
        model.down = self.down.clone();
        Ok(model)
    }

    pub fn into_poset(self) -> Result<PosetModel, ModelError> {
        PosetModel::try_from(self)
    }
}

impl fmt::Display for PreorderModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A preorder model whose order is antisymmetric.
#[derive(Clone, Debug)]
pub struct PosetModel(PreorderModel);

impl TryFrom<PreorderModel> for PosetModel {
    type Error = ModelError;

    fn try_from(model: PreorderModel) -> Result<Self, ModelError> {
        if let Some((a, b)) = model.cluster_witness() {
            return Err(ModelError::NotAPoset(
                model.name(a).to_string(),
                model.name(b).to_string(),
            ));
        }
        Ok(PosetModel(model))
    }
}

impl Deref for PosetModel {
    type Target = PreorderModel;

    fn deref(&self) -> &PreorderModel {
        &self.0
    }
}

impl PosetModel {
    pub fn as_preorder(&self) -> &PreorderModel {
        &self.0
    }

    pub fn into_inner(self) -> PreorderModel {
        self.0
    }

    /// All non-empty chains, each as an increasing list of worlds, ordered
    /// by length and then lexicographically by world id.
    pub fn chains(&self) -> Vec<Vec<WorldId>> {
        let n = self.world_count();
        // a linear extension: sort by number of predecessors
        let mut order: Vec<WorldId> = self.worlds().collect();
        order.sort_by_key(|&w| (self.down(w).count(), w));
        let mut out = Vec::new();
        let mut stack: Vec<Vec<WorldId>> = order.iter().map(|&w| vec![w]).collect();
        while let Some(chain) = stack.pop() {
            let top = *chain.last().unwrap_or(&0);
            for v in self.up(top).iter() {
                if v != top {
                    let mut next = chain.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
            out.push(chain);
        }
        for chain in &mut out {
            chain.sort_by_key(|&w| self.down(w).count());
        }
        out.sort_by(|a, b| {
            let mut sa = a.clone();
            let mut sb = b.clone();
            sa.sort_unstable();
            sb.sort_unstable();
            (a.len(), sa).cmp(&(b.len(), sb))
        });
        debug_assert!(out.iter().all(|c| c.len() <= n));
        out
    }
}
