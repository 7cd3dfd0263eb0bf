use std::collections::VecDeque;
use std::fmt;

use super::model::{PreorderModel, WorldId, WorldSet};

/// A sequence `w0 ≼ w1 ≻ w2 ≺ w3 ≻ … ≺ w(k-1) ≽ wk` of even length `k ≥ 2`.
///
/// The constructor does not validate; use [`check_path`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpDownPath(Vec<WorldId>);

impl UpDownPath {
    pub fn new(worlds: Vec<WorldId>) -> Self {
        UpDownPath(worlds)
    }

    pub fn worlds(&self) -> &[WorldId] {
        &self.0
    }

    pub fn start(&self) -> Option<WorldId> {
        self.0.first().copied()
    }

    pub fn end(&self) -> Option<WorldId> {
        self.0.last().copied()
    }

    /// Intermediate worlds `w1 … w(k-1)`.
    pub fn middle(&self) -> &[WorldId] {
        if self.0.len() < 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn display<'a>(&'a self, model: &'a PreorderModel) -> impl fmt::Display + 'a {
        PathDisplay { path: self, model }
    }
}

struct PathDisplay<'a> {
    path: &'a UpDownPath,
    model: &'a PreorderModel,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.path.0.iter().map(|&w| self.model.name(w)).collect();
        write!(f, "({})", names.join(","))
    }
}

/// Checks the up-down shape and that every intermediate world lies in `a`.
///
/// Endpoints use the non-strict order; interior turns must be strict.
pub fn check_path(model: &PreorderModel, path: &UpDownPath, a: &WorldSet) -> bool {
    let w = path.worlds();
    let len = w.len();
    if len < 3 || len % 2 == 0 {
        return false;
    }
    if w.iter().any(|&x| x >= model.world_count()) {
        return false;
    }
    let k = len - 1;
    if !model.le(w[0], w[1]) || !model.le(w[k], w[k - 1]) {
        return false;
    }
    let j = k / 2;
    for i in 1..j {
        if !(model.lt(w[2 * i], w[2 * i - 1]) && model.lt(w[2 * i], w[2 * i + 1])) {
            return false;
        }
    }
    path.middle().iter().all(|&x| a.contains(x))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Turn {
    Peak,
    Valley,
}

/// Shortest up-down path from `w` to some world of `b` whose intermediate
/// worlds all lie in `a`, if one exists.
pub fn witness_path(
    model: &PreorderModel,
    w: WorldId,
    a: &WorldSet,
    b: &WorldSet,
) -> Option<UpDownPath> {
    let n = model.world_count();
    // state index: world * 2 + (0 = peak, 1 = valley)
    let mut parent: Vec<Option<usize>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for u in model.up(w).intersection(a).iter() {
        seen[2 * u] = true;
        queue.push_back(2 * u);
    }
    while let Some(state) = queue.pop_front() {
        let u = state / 2;
        let turn = if state % 2 == 0 { Turn::Peak } else { Turn::Valley };
        let next: Vec<usize> = match turn {
            Turn::Peak => {
                if let Some(v) = model.down(u).intersection(b).first() {
                    let mut worlds = vec![v];
                    let mut cur = Some(state);
                    while let Some(s) = cur {
                        worlds.push(s / 2);
                        cur = parent[s];
                    }
                    worlds.push(w);
                    worlds.reverse();
                    return Some(UpDownPath(worlds));
                }
                model
                    .down(u)
                    .intersection(a)
                    .iter()
                    .filter(|&x| model.lt(x, u))
                    .map(|x| 2 * x + 1)
                    .collect()
            }
            Turn::Valley => model
                .up(u)
                .intersection(a)
                .iter()
                .filter(|&x| model.lt(u, x))
                .map(|x| 2 * x)
                .collect(),
        };
        for s in next {
            if !seen[s] {
                seen[s] = true;
                parent[s] = Some(state);
                queue.push_back(s);
            }
        }
    }
    None
}
