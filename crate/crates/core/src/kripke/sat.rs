//! Bounded satisfiability search over finite posets.
//!
//! Posets on `n` worlds are enumerated as closures of edge sets over pairs
//! `i < j` (every finite poset has such a natural labeling), deduplicated by
//! their closure. Each poset is tried with every valuation of the formula's
//! atoms, evaluated on `u64` world masks.

use std::collections::{HashMap, HashSet};

use crate::formula::{Formula, TRUTH_ATOM};

use super::eval::holds_at;
use super::model::{PosetModel, PreorderModel, WorldId};

pub const MAX_SAT_WORLDS: usize = 8;

#[derive(Debug, Clone)]
pub enum SatOutcome {
    Sat { model: PosetModel, world: WorldId },
    /// No poset with at most `bound` worlds satisfies the formula. This is
    /// not a proof of unsatisfiability.
    UnsatUpTo { bound: usize },
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SatStats {
    pub posets: u64,
    pub valuations: u64,
}

#[derive(Clone, Copy)]
enum Op {
    Atom(usize),
    Empty,
    Not(usize),
    And(usize, usize),
    Box(usize),
    Reach(usize, usize),
}

/// The formula flattened into a topologically sorted node list with shared
/// subterms.
struct Compiled {
    ops: Vec<Op>,
    atoms: Vec<String>,
}

impl Compiled {
    fn new(f: &Formula) -> Self {
        let mut c = Compiled { ops: Vec::new(), atoms: Vec::new() };
        let mut memo = HashMap::new();
        c.push(f, &mut memo);
        c
    }

    fn push(&mut self, f: &Formula, memo: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let op = match f {
            Formula::Atom(name) if &**name == TRUTH_ATOM => Op::Empty,
            Formula::Atom(name) => {
                let i = match self.atoms.iter().position(|a| **a == **name) {
                    Some(i) => i,
                    None => {
                        self.atoms.push(name.to_string());
                        self.atoms.len() - 1
                    }
                };
                Op::Atom(i)
            }
            Formula::Not(g) => Op::Not(self.push(g, memo)),
            Formula::And(a, b) => {
                let a = self.push(a, memo);
                Op::And(a, self.push(b, memo))
            }
            Formula::Box(g) => Op::Box(self.push(g, memo)),
            Formula::Reach(a, b) => {
                let a = self.push(a, memo);
                Op::Reach(a, self.push(b, memo))
            }
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        memo.insert(f.clone(), i);
        i
    }

    /// Truth mask of the root node. `up[w]` and `down[w]` are masks of the
    /// reflexive order, `val[i]` the mask of atom `i`.
    fn eval(&self, n: usize, up: &[u64], down: &[u64], val: &[u64], scratch: &mut Vec<u64>) -> u64 {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        scratch.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Atom(i) => val[i],
                Op::Empty => 0,
                Op::Not(a) => !scratch[a] & full,
                Op::And(a, b) => scratch[a] & scratch[b],
                Op::Box(a) => {
                    let inner = scratch[a];
                    let mut out = 0;
                    for (w, &u) in up.iter().enumerate() {
                        if u & !inner == 0 {
                            out |= 1 << w;
                        }
                    }
                    out
                }
                Op::Reach(a, b) => reach_mask(up, down, scratch[a], scratch[b]),
            };
            scratch.push(v);
        }
        *scratch.last().expect("formula has at least one node")
    }
}

fn reach_mask(up: &[u64], down: &[u64], a: u64, b: u64) -> u64 {
    let mut out = 0;
    let mut left = a;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let grow = (up[x] | down[x]) & a & !comp;
            comp |= grow;
            frontier |= grow;
        }
        left &= !comp;
        let mut below = 0;
        let mut c = comp;
        while c != 0 {
            let x = c.trailing_zeros() as usize;
            c &= c - 1;
            below |= down[x];
        }
        if below & b != 0 {
            out |= below;
        }
    }
    out
}

/// Up-set masks of every poset on `n` naturally labeled worlds, one per
/// distinct order, in order of first appearance by edge mask.
fn posets(n: usize) -> Vec<Vec<u64>> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut up: Vec<u64> = (0..n).map(|w| 1u64 << w).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        // edges go from lower to higher index, so a reverse sweep closes
        for i in (0..n).rev() {
            let mut acc = up[i];
            let mut rest = up[i] & !(1u64 << i);
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                acc |= up[j];
            }
            up[i] = acc;
        }
        if seen.insert(up.clone()) {
            out.push(up);
        }
    }
    out
}

/// Searches posets with `1..=max_worlds` worlds for one satisfying `f`.
///
/// The search order is fixed, so the witness is deterministic. Every hit is
/// re-checked with the reference evaluator.
pub fn bounded_sat(f: &Formula, max_worlds: usize) -> SatOutcome {
    bounded_sat_stats(f, max_worlds).0
}

pub fn bounded_sat_stats(f: &Formula, max_worlds: usize) -> (SatOutcome, SatStats) {
    assert!(
        (1..=MAX_SAT_WORLDS).contains(&max_worlds),
        "max_worlds must be between 1 and {MAX_SAT_WORLDS}"
    );
    let compiled = Compiled::new(f);
    let k = compiled.atoms.len();
    assert!(max_worlds * k < 40, "too many atoms for exhaustive valuation search");
    let mut stats = SatStats::default();
    let mut scratch = Vec::with_capacity(compiled.ops.len());
    for n in 1..=max_worlds {
        let bits = n * k;
        for up in posets(n) {
            stats.posets += 1;
            let mut down = vec![0u64; n];
            for (w, &u) in up.iter().enumerate() {
                for (v, d) in down.iter_mut().enumerate() {
                    if u >> v & 1 == 1 {
                        *d |= 1 << w;
                    }
                }
            }
            let mut val = vec![0u64; k];
            for assignment in 0u64..(1u64 << bits) {
                stats.valuations += 1;
                for (i, v) in val.iter_mut().enumerate() {
                    *v = (assignment >> (i * n)) & ((1u64 << n) - 1);
                }
                let truth = compiled.eval(n, &up, &down, &val, &mut scratch);
                if truth != 0 {
                    let world = truth.trailing_zeros() as usize;
                    let model = to_model(n, &up, &compiled.atoms, &val);
                    assert!(
                        holds_at(&model, f, world),
                        "bounded_sat self-check failed for {f} on\n{model}"
                    );
                    let model = PosetModel::try_from(model).expect("enumerated order is a poset");
                    return (SatOutcome::Sat { model, world }, stats);
                }
            }
        }
    }
    (SatOutcome::UnsatUpTo { bound: max_worlds }, stats)
}

fn to_model(n: usize, up: &[u64], atoms: &[String], val: &[u64]) -> PreorderModel {
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut edges = Vec::new();
    for (i, &u) in up.iter().enumerate() {
        for j in 0..n {
            if i != j && u >> j & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    let valuation = atoms
        .iter()
        .zip(val)
        .map(|(a, &m)| (a.clone(), (0..n).filter(|&w| m >> w & 1 == 1).collect()));
    PreorderModel::from_ids(names, edges, valuation).expect("enumerated model is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn poset_counts_match_known_sequence() {
        // naturally labeled posets: 1, 2, 7, 40, 357
        let counts: Vec<usize> = (1..=5).map(|n| posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 40, 357]);
    }

    #[test]
    fn atom_is_satisfied_on_one_world() {
        match bounded_sat(&parse("p").unwrap(), 3) {
            SatOutcome::Sat { model, world } => {
                assert_eq!(model.world_count(), 1);
                assert!(model.atom("p").contains(world));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reach_without_diamond_target_needs_two_worlds() {
        // w0 < w1 with p at w1 and q at w0: w1 reaches down to q
        let f = parse("gamma(p,q) & ~<>q").unwrap();
        assert!(!bounded_sat(&f, 1).is_sat());
        match bounded_sat(&f, 4) {
            SatOutcome::Sat { model, world } => {
                assert_eq!(model.world_count(), 2);
                assert_eq!(model.format_set(&crate::kripke::evaluate(&model, &f)), "{w1}");
                assert_eq!(world, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradiction_is_unsat() {
        let out = bounded_sat(&parse("p & ~p").unwrap(), 3);
        assert!(matches!(out, SatOutcome::UnsatUpTo { bound: 3 }));
    }

    #[test]
    fn compiled_reach_matches_reference() {
        let f = parse("gamma(p | ~q, q) & ~gamma(q, p)").unwrap();
        let c = Compiled::new(&f);
        let mut scratch = Vec::new();
        for up in posets(4) {
            let mut down = vec![0u64; 4];
            for (w, &u) in up.iter().enumerate() {
                for (v, d) in down.iter_mut().enumerate() {
                    if u >> v & 1 == 1 {
                        *d |= 1 << w;
                    }
                }
            }
            for assignment in 0u64..256 {
                let val: Vec<u64> = (0..c.atoms.len()).map(|i| (assignment >> (4 * i)) & 15).collect();
                let truth = c.eval(4, &up, &down, &val, &mut scratch);
                let m = to_model(4, &up, &c.atoms, &val);
                let expected = crate::kripke::eval::evaluate(&m, &f);
                assert_eq!(truth, expected.iter().fold(0, |acc, w| acc | 1 << w));
            }
        }
    }
}
