use std::collections::{BTreeMap, BTreeSet};

use crate::kripke::model::{is_identifier, PosetModel};

use super::complex::{SimplexId, SimplicialComplex};
use super::polyhedral::PolyhedralModel;

/// Geometric realization of the nerve of `m`.
///
/// World `w` becomes the basis vector `e_w` in `R^|W|` (vertex id `w`), and
/// every non-empty chain becomes the simplex on its vertices. A chain's cell
/// carries `p` iff the chain's maximum does. Vertices take the world names
/// when those are plain identifiers, and `e0, e1, ...` otherwise.
pub fn realize(m: &PosetModel) -> PolyhedralModel {
    let n = m.world_count();
    let plain = m.names().iter().all(|s| is_identifier(s));
    let vertices: Vec<(String, Vec<f64>)> = (0..n)
        .map(|w| {
            let name = if plain { m.name(w).to_string() } else { format!("e{w}") };
            let mut e = vec![0.0; n];
            e[w] = 1.0;
            (name, e)
        })
        .collect();
    let chains = m.chains();
    let complex = SimplicialComplex::new(vertices, chains.clone(), false)
        .expect("basis vectors are distinct and well formed");
    let mut valuation: BTreeMap<String, BTreeSet<SimplexId>> = BTreeMap::new();
    for (atom, ws) in m.valuation() {
        let cells = valuation.entry(atom.clone()).or_default();
        for chain in &chains {
            let top = *chain.last().expect("chains are non-empty");
            if ws.contains(top) {
                cells.insert(complex.simplex_id(chain).expect("every chain is a simplex"));
            }
        }
    }
    PolyhedralModel::new(complex, valuation).expect("valuation cells exist")
}
