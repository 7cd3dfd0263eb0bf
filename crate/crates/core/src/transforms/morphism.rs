use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::eval::{reach_oracle, Evaluator};
use crate::kripke::model::{PreorderModel, WorldId, WorldSet};

/// The clause of the up-down morphism definition that fails, with worlds
/// named in their models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismViolation {
    #[error("map has {found} entries for {expected} worlds")]
    NotTotal { expected: usize, found: usize },
    #[error("world {world} maps to #{image}, which does not exist")]
    OutOfRange { world: String, image: usize },
    #[error("atom {atom}: {world} and its image {image} disagree")]
    Atom { atom: String, world: String, image: String },
    #[error("forth: {lower} <= {upper} but {lower_image} is not below {upper_image}")]
    Forth { lower: String, upper: String, lower_image: String, upper_image: String },
    #[error("back: from {world}, no up-down path through the preimage of {peak} ends over {target}")]
    Back { world: String, peak: String, target: String },
}

/// Checks the atom, forth and back clauses for `f: m -> target`.
///
/// The atom clause is checked in both directions. Forth is checked on
/// pairs: `w <= u >= v` maps to `f(w) <= f(u) >= f(v)` for all triples iff
/// `f` is monotone. For back, an up-down path from `w` whose middle maps to
/// `u'` exists iff `w` relates to its end under the reachability relation
/// through `f^-1(u')`.
pub fn is_updown_morphism(
    f: &[WorldId],
    m: &PreorderModel,
    target: &PreorderModel,
) -> Result<(), MorphismViolation> {
    if f.len() != m.world_count() {
        return Err(MorphismViolation::NotTotal { expected: m.world_count(), found: f.len() });
    }
    if let Some((w, &image)) = f.iter().enumerate().find(|(_, &i)| i >= target.world_count()) {
        return Err(MorphismViolation::OutOfRange { world: m.name(w).into(), image });
    }
    let atoms: BTreeSet<&String> = m.valuation().keys().chain(target.valuation().keys()).collect();
    for atom in atoms {
        let here = m.atom(atom);
        let there = target.atom(atom);
        for w in m.worlds() {
            if here.contains(w) != there.contains(f[w]) {
                return Err(MorphismViolation::Atom {
                    atom: atom.clone(),
                    world: m.name(w).into(),
                    image: target.name(f[w]).into(),
                });
            }
        }
    }
    for w in m.worlds() {
        for u in m.up(w).iter() {
            if !target.le(f[w], f[u]) {
                return Err(MorphismViolation::Forth {
                    lower: m.name(w).into(),
                    upper: m.name(u).into(),
                    lower_image: target.name(f[w]).into(),
                    upper_image: target.name(f[u]).into(),
                });
            }
        }
    }
    for peak in target.worlds() {
        let preimage = WorldSet::from_worlds(m.world_count(), m.worlds().filter(|&w| f[w] == peak));
        let relation = reach_oracle(m, &preimage);
        let below = target.down(peak);
        for w in m.worlds().filter(|&w| below.contains(f[w])) {
            let reached: BTreeSet<WorldId> = relation.successors(w).iter().map(|v| f[v]).collect();
            if let Some(missing) = below.iter().find(|t| !reached.contains(t)) {
                return Err(MorphismViolation::Back {
                    world: m.name(w).into(),
                    peak: target.name(peak).into(),
                    target: target.name(missing).into(),
                });
            }
        }
    }
    Ok(())
}

/// A formula whose extension is not the preimage of its extension in the
/// target, with a world where they differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackFailure {
    pub formula: Formula,
    pub world: WorldId,
}

/// `[[phi]] = f^-1 [[phi]]'` for every listed formula.
pub fn pullback_check(
    f: &[WorldId],
    m: &PreorderModel,
    target: &PreorderModel,
    formulas: &[Formula],
) -> Result<(), PullbackFailure> {
    assert_eq!(f.len(), m.world_count(), "map must be total");
    let mut here = Evaluator::new(m);
    let mut there = Evaluator::new(target);
    for phi in formulas {
        let a = here.eval(phi);
        let b = there.eval(phi);
        if let Some(w) = m.worlds().find(|&w| a.contains(w) != b.contains(f[w])) {
            return Err(PullbackFailure { formula: phi.clone(), world: w });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::transforms::nerve::nerve;

    fn peak() -> PreorderModel {
        PreorderModel::parse("worlds a u v\norder a u\norder v u\nvaluation p u\nvaluation q v\n").unwrap()
    }

    #[test]
    fn identity_is_a_morphism() {
        let m = peak();
        let id: Vec<usize> = m.worlds().collect();
        assert_eq!(is_updown_morphism(&id, &m, &m), Ok(()));
        assert!(pullback_check(&id, &m, &m, &[parse("gamma(p,q)").unwrap()]).is_ok());
    }

    #[test]
    fn max_from_nerve_is_a_morphism() {
        let m = peak().into_poset().unwrap();
        let n = nerve(&m);
        let f = n.max_map();
        assert_eq!(is_updown_morphism(&f, &n, &m), Ok(()));
        let fs: Vec<Formula> =
            ["p", "gamma(p,q)", "[]~q", "gamma(~p, p)"].iter().map(|s| parse(s).unwrap()).collect();
        assert!(pullback_check(&f, &n, &m, &fs).is_ok());
    }

    #[test]
    fn constant_map_breaks_atoms() {
        let m = peak();
        let f = vec![0, 0, 0];
        assert!(matches!(is_updown_morphism(&f, &m, &m), Err(MorphismViolation::Atom { .. })));
    }

    #[test]
    fn not_total() {
        let m = peak();
        assert!(matches!(
            is_updown_morphism(&[0], &m, &m),
            Err(MorphismViolation::NotTotal { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn p_morphism_need_not_be_updown() {
        // two isolated worlds onto the top of x < y: a p-morphism, but no
        // path from a can end at a preimage of x
        let src = PreorderModel::parse("worlds a b\n").unwrap();
        let dst = PreorderModel::parse("worlds x y\norder x y\n").unwrap();
        let f = vec![1, 1];
        assert!(matches!(is_updown_morphism(&f, &src, &dst), Err(MorphismViolation::Back { .. })));
    }
}
