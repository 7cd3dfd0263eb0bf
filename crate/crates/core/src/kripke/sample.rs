//! Seeded random models and formulas for the randomized suites.

use rand::Rng;

use crate::formula::Formula;

use super::model::{PreorderModel, WorldId};

#[derive(Debug, Clone)]
pub struct ModelSampler {
    pub min_worlds: usize,
    pub max_worlds: usize,
    /// Probability of each candidate generator edge.
    pub edge_density: f64,
    pub atoms: Vec<String>,
    /// Probability that a world satisfies a given atom.
    pub valuation_density: f64,
    /// Only draw edges from lower to higher index, so the closure is a poset.
    pub poset: bool,
}

impl Default for ModelSampler {
    fn default() -> Self {
        ModelSampler {
            min_worlds: 1,
            max_worlds: 5,
            edge_density: 0.35,
            atoms: vec!["p".into(), "q".into()],
            valuation_density: 0.4,
            poset: true,
        }
    }
}

impl ModelSampler {
    pub fn posets(max_worlds: usize) -> Self {
        ModelSampler { max_worlds, ..Default::default() }
    }

    pub fn preorders(max_worlds: usize) -> Self {
        ModelSampler { max_worlds, poset: false, edge_density: 0.25, ..Default::default() }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> PreorderModel {
        let n = rng.gen_range(self.min_worlds..=self.max_worlds.max(self.min_worlds));
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let mut edges: Vec<(WorldId, WorldId)> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let candidate = if self.poset { a < b } else { a != b };
                if candidate && rng.gen_bool(self.edge_density) {
                    edges.push((a, b));
                }
            }
        }
        let valuation: Vec<(String, Vec<WorldId>)> = self
            .atoms
            .iter()
            .map(|atom| {
                let ws = (0..n).filter(|_| rng.gen_bool(self.valuation_density)).collect();
                (atom.clone(), ws)
            })
            .collect();
        PreorderModel::from_ids(names, edges, valuation).expect("sampled model is well formed")
    }
}

#[derive(Debug, Clone)]
pub struct FormulaSampler {
    pub atoms: Vec<String>,
    pub max_depth: usize,
    pub allow_reach: bool,
    /// Allow the constants `T` and `F` as leaves.
    pub allow_constants: bool,
}

impl Default for FormulaSampler {
    fn default() -> Self {
        FormulaSampler {
            atoms: vec!["p".into(), "q".into()],
            max_depth: 3,
            allow_reach: true,
            allow_constants: true,
        }
    }
}

impl FormulaSampler {
    pub fn with_depth(max_depth: usize) -> Self {
        FormulaSampler { max_depth, ..Default::default() }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Formula {
        self.sample_depth(rng, self.max_depth)
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        if self.allow_constants && rng.gen_bool(0.1) {
            return if rng.gen_bool(0.5) { Formula::top() } else { Formula::bottom() };
        }
        if self.atoms.is_empty() {
            return Formula::top();
        }
        Formula::atom(&self.atoms[rng.gen_range(0..self.atoms.len())])
    }

    fn sample_depth<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng);
        }
        let kinds = if self.allow_reach { 5 } else { 4 };
        match rng.gen_range(0..kinds) {
            0 => Formula::not(self.sample_depth(rng, depth - 1)),
            1 => Formula::and(self.sample_depth(rng, depth - 1), self.sample_depth(rng, depth - 1)),
            2 => Formula::boxed(self.sample_depth(rng, depth - 1)),
            3 => Formula::diamond(self.sample_depth(rng, depth - 1)),
            _ => Formula::reach(self.sample_depth(rng, depth - 1), self.sample_depth(rng, depth - 1)),
        }
    }
}
