use std::collections::HashMap;

use crate::formula::{Formula, TRUTH_ATOM};

use super::model::{PreorderModel, WorldId, WorldSet};
use super::path;

/// How `gamma` nodes are evaluated. All strategies must agree; the
/// component shortcut is the default and the others are kept as oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReachStrategy {
    /// Connected components of the comparability graph restricted to the
    /// first argument's extension.
    #[default]
    Components,
    /// Least fixpoint of the inductive reachability relation.
    Fixpoint,
    /// Up-down path search from every world.
    Paths,
}

/// The reachability relation `R^A` as one row of successors per world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachRelation {
    rows: Vec<WorldSet>,
}

impl ReachRelation {
    pub fn contains(&self, w: WorldId, v: WorldId) -> bool {
        self.rows[w].contains(v)
    }

    pub fn successors(&self, w: WorldId) -> &WorldSet {
        &self.rows[w]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (WorldId, WorldId)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(w, row)| row.iter().map(move |v| (w, v)))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(WorldSet::is_empty)
    }

    /// `{w | ∃v ∈ target. w R v}`
    pub fn preimage(&self, target: &WorldSet) -> WorldSet {
        let mut out = WorldSet::empty(self.rows.len());
        for (w, row) in self.rows.iter().enumerate() {
            if row.intersects(target) {
                out.insert(w);
            }
        }
        out
    }
}

/// Least relation with `w R v` whenever `w ≼ u ≽ v` for some `u ∈ A`, closed
/// under composition through worlds of `A`.
pub fn reach_oracle(model: &PreorderModel, a: &WorldSet) -> ReachRelation {
    let n = model.world_count();
    let mut rows: Vec<WorldSet> = vec![WorldSet::empty(n); n];
    for u in a.iter() {
        let below = model.down(u);
        for w in below.iter() {
            rows[w].union_with(below);
        }
    }
    loop {
        let mut changed = false;
        for w in 0..n {
            let through: Vec<WorldId> = rows[w].intersection(a).iter().collect();
            for u in through {
                if u == w {
                    continue;
                }
                if !rows[u].is_subset(&rows[w]) {
                    let row_u = rows[u].clone();
                    rows[w].union_with(&row_u);
                    changed = true;
                }
            }
        }
        if !changed {
            return ReachRelation { rows };
        }
    }
}

/// `{w | ∃v ∈ b. w R^a v}` via comparability components of `a`.
///
/// `w` qualifies iff some component `C` of the comparability graph on `a`
/// has a member above `w` and a member above some world of `b`.
pub fn reach_components(model: &PreorderModel, a: &WorldSet, b: &WorldSet) -> WorldSet {
    let n = model.world_count();
    let mut out = WorldSet::empty(n);
    let mut seen = WorldSet::empty(n);
    for start in a.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut component = vec![start];
        seen.insert(start);
        let mut i = 0;
        while i < component.len() {
            let u = component[i];
            i += 1;
            let mut nbrs = model.up(u).union(model.down(u));
            nbrs.intersect_with(a);
            for v in nbrs.iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    component.push(v);
                }
            }
        }
        if component.iter().any(|&u| model.down(u).intersects(b)) {
            for &u in &component {
                out.union_with(model.down(u));
            }
        }
    }
    out
}

pub fn reach_fixpoint(model: &PreorderModel, a: &WorldSet, b: &WorldSet) -> WorldSet {
    reach_oracle(model, a).preimage(b)
}

pub fn reach_paths(model: &PreorderModel, a: &WorldSet, b: &WorldSet) -> WorldSet {
    WorldSet::from_worlds(
        model.world_count(),
        model.worlds().filter(|&w| path::witness_path(model, w, a, b).is_some()),
    )
}

/// Memoizing evaluator over one model.
pub struct Evaluator<'m> {
    model: &'m PreorderModel,
    strategy: ReachStrategy,
    cache: HashMap<Formula, WorldSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m PreorderModel) -> Self {
        Self::with_strategy(model, ReachStrategy::default())
    }

    pub fn with_strategy(model: &'m PreorderModel, strategy: ReachStrategy) -> Self {
        Evaluator { model, strategy, cache: HashMap::new() }
    }

    pub fn model(&self) -> &'m PreorderModel {
        self.model
    }

    pub fn eval(&mut self, f: &Formula) -> WorldSet {
        if let Some(hit) = self.cache.get(f) {
            return hit.clone();
        }
        let m = self.model;
        let result = match f {
            Formula::Atom(name) if &**name == TRUTH_ATOM => m.empty_set(),
            Formula::Atom(name) => m.atom(name),
            Formula::Not(g) => self.eval(g).complement(),
            Formula::And(a, b) => {
                let left = self.eval(a);
                left.intersection(&self.eval(b))
            }
            Formula::Box(g) => {
                let inner = self.eval(g);
                WorldSet::from_worlds(
                    m.world_count(),
                    m.worlds().filter(|&w| m.up(w).is_subset(&inner)),
                )
            }
            Formula::Reach(a, b) => {
                let through = self.eval(a);
                let target = self.eval(b);
                match self.strategy {
                    ReachStrategy::Components => reach_components(m, &through, &target),
                    ReachStrategy::Fixpoint => reach_fixpoint(m, &through, &target),
                    ReachStrategy::Paths => reach_paths(m, &through, &target),
                }
            }
        };
        self.cache.insert(f.clone(), result.clone());
        result
    }

    pub fn holds_at(&mut self, f: &Formula, w: WorldId) -> bool {
        self.eval(f).contains(w)
    }
}

/// Truth set of `f` in `model`.
pub fn evaluate(model: &PreorderModel, f: &Formula) -> WorldSet {
    Evaluator::new(model).eval(f)
}

pub fn evaluate_with(model: &PreorderModel, f: &Formula, strategy: ReachStrategy) -> WorldSet {
    Evaluator::with_strategy(model, strategy).eval(f)
}

pub fn holds_at(model: &PreorderModel, f: &Formula, w: WorldId) -> bool {
    evaluate(model, f).contains(w)
}

/// True iff `f` holds at every world.
pub fn validity(model: &PreorderModel, f: &Formula) -> bool {
    evaluate(model, f).is_full()
}
