use std::ops::Deref;

use crate::kripke::model::{PosetModel, PreorderModel, WorldId};

/// The poset of non-empty chains of a source poset, ordered by inclusion.
#[derive(Debug, Clone)]
pub struct NerveModel {
    model: PosetModel,
    chains: Vec<Vec<WorldId>>,
}

impl NerveModel {
    pub fn model(&self) -> &PosetModel {
        &self.model
    }

    pub fn into_model(self) -> PosetModel {
        self.model
    }

    /// Source worlds of each nerve world, in increasing order.
    pub fn chains(&self) -> &[Vec<WorldId>] {
        &self.chains
    }

    pub fn chain(&self, c: WorldId) -> &[WorldId] {
        &self.chains[c]
    }

    /// The nerve world of a chain given in any order.
    pub fn world_of(&self, chain: &[WorldId]) -> Option<WorldId> {
        let mut key = chain.to_vec();
        key.sort_unstable();
        self.chains.iter().position(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s == key
        })
    }

    /// `max` as a world map from the nerve to the source.
    pub fn max_map(&self) -> Vec<WorldId> {
        self.chains.iter().map(|c| *c.last().expect("chains are non-empty")).collect()
    }
}

impl Deref for NerveModel {
    type Target = PosetModel;

    fn deref(&self) -> &PosetModel {
        &self.model
    }
}

/// Chains of `m` ordered by inclusion; a chain carries `p` iff its maximum
/// does. Worlds are named by their members' names, sorted and joined by `+`.
pub fn nerve(m: &PosetModel) -> NerveModel {
    let chains = m.chains();
    let names: Vec<String> = chains
        .iter()
        .map(|c| {
            let mut ns: Vec<&str> = c.iter().map(|&w| m.name(w)).collect();
            ns.sort_unstable();
            ns.join("+")
        })
        .collect();
    // covers: chains differing by one element
    let mut edges = Vec::new();
    for (i, small) in chains.iter().enumerate() {
        for (j, big) in chains.iter().enumerate() {
            if big.len() == small.len() + 1 && small.iter().all(|w| big.contains(w)) {
                edges.push((i, j));
            }
        }
    }
    let valuation: Vec<(String, Vec<WorldId>)> = m
        .valuation()
        .iter()
        .map(|(atom, ws)| {
            let cells = chains
                .iter()
                .enumerate()
                .filter(|(_, c)| ws.contains(*c.last().expect("non-empty")))
                .map(|(i, _)| i)
                .collect();
            (atom.clone(), cells)
        })
        .collect();
    let model = PreorderModel::from_ids(names, edges, valuation)
        .and_then(PreorderModel::into_poset)
        .expect("chain inclusion is a partial order");
    NerveModel { model, chains }
}
