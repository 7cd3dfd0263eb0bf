use std::collections::{BTreeSet, HashMap};
use std::ops::Deref;

use crate::formula::{AdequateSet, Formula, TRUTH_ATOM};
use crate::kripke::eval::Evaluator;
use crate::kripke::model::{PreorderModel, WorldId};

/// Quotient of a model by agreement on a formula set.
#[derive(Debug, Clone)]
pub struct ClassModel {
    model: PreorderModel,
    class_map: Vec<WorldId>,
    members: Vec<Vec<WorldId>>,
    theories: Vec<BTreeSet<Formula>>,
    sigma: AdequateSet,
}

impl ClassModel {
    pub fn model(&self) -> &PreorderModel {
        &self.model
    }

    pub fn into_model(self) -> PreorderModel {
        self.model
    }

    /// Class of each source world.
    pub fn class_map(&self) -> &[WorldId] {
        &self.class_map
    }

    pub fn class_of(&self, w: WorldId) -> WorldId {
        self.class_map[w]
    }

    /// Source worlds of a class, in increasing order.
    pub fn members(&self, class: WorldId) -> &[WorldId] {
        &self.members[class]
    }

    /// Members of the formula set true throughout the class.
    pub fn theory(&self, class: WorldId) -> &BTreeSet<Formula> {
        &self.theories[class]
    }

    pub fn sigma(&self) -> &AdequateSet {
        &self.sigma
    }
}

impl Deref for ClassModel {
    type Target = PreorderModel;

    fn deref(&self) -> &PreorderModel {
        &self.model
    }
}

/// Groups worlds of `m` by the members of `sigma` true at them.
///
/// Class `T <= S` iff every box member true at `T` is true at `S`; an atom
/// holds on a class iff it is a member of `sigma` true there. Classes are
/// numbered by their least source world and named by their members' names,
/// sorted and joined by `+`.
pub fn filtrate(m: &PreorderModel, sigma: &AdequateSet) -> ClassModel {
    let mut eval = Evaluator::new(m);
    let extensions: Vec<(Formula, _)> = sigma.iter().map(|f| (f.clone(), eval.eval(f))).collect();
    let mut by_theory: HashMap<BTreeSet<Formula>, WorldId> = HashMap::new();
    let mut class_map = Vec::with_capacity(m.world_count());
    let mut members: Vec<Vec<WorldId>> = Vec::new();
    let mut theories: Vec<BTreeSet<Formula>> = Vec::new();
    for w in m.worlds() {
        let theory: BTreeSet<Formula> =
            extensions.iter().filter(|(_, ext)| ext.contains(w)).map(|(f, _)| f.clone()).collect();
        let class = *by_theory.entry(theory.clone()).or_insert_with(|| {
            members.push(Vec::new());
            theories.push(theory);
            members.len() - 1
        });
        members[class].push(w);
        class_map.push(class);
    }
    let k = members.len();
    let boxes: Vec<&Formula> = sigma.boxes().collect();
    let mut edges = Vec::new();
    for t in 0..k {
        for s in 0..k {
            if t != s && boxes.iter().all(|b| !theories[t].contains(*b) || theories[s].contains(*b)) {
                edges.push((t, s));
            }
        }
    }
    let names: Vec<String> = members
        .iter()
        .map(|ws| {
            let mut ns: Vec<&str> = ws.iter().map(|&w| m.name(w)).collect();
            ns.sort_unstable();
            ns.join("+")
        })
        .collect();
    let valuation: Vec<(String, Vec<WorldId>)> = sigma
        .iter()
        .filter_map(|f| match f {
            Formula::Atom(a) if &**a != TRUTH_ATOM => {
                Some((a.to_string(), (0..k).filter(|&c| theories[c].contains(f)).collect()))
            }
            _ => None,
        })
        .collect();
    let model = PreorderModel::from_ids(names, edges, valuation).expect("class names are valid");
    ClassModel { model, class_map, members, theories, sigma: sigma.clone() }
}

/// A formula whose truth at a source world differs from its truth at the
/// world's image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreservationFailure {
    pub formula: Formula,
    pub world: WorldId,
    pub source: bool,
    pub image: bool,
}

/// Compares `formulas` between each world of `m` and its image under `map`
/// in `target`.
pub fn preservation_failures<'a, I>(
    m: &PreorderModel,
    target: &PreorderModel,
    map: &[WorldId],
    formulas: I,
) -> Vec<PreservationFailure>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut here = Evaluator::new(m);
    let mut there = Evaluator::new(target);
    let mut out = Vec::new();
    for f in formulas {
        let a = here.eval(f);
        let b = there.eval(f);
        for w in m.worlds() {
            let (source, image) = (a.contains(w), b.contains(map[w]));
            if source != image {
                out.push(PreservationFailure { formula: f.clone(), world: w, source, image });
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{adequate_closure, parse};

    #[test]
    fn no_modal_members_gives_full_order() {
        let m = PreorderModel::parse("worlds a b c\norder a b\nvaluation p a c\n").unwrap();
        let cm = filtrate(&m, &adequate_closure(&[parse("p").unwrap()]));
        assert_eq!(cm.world_count(), 2);
        assert_eq!(cm.names(), &["a+c".to_string(), "b".to_string()]);
        assert!(cm.le(0, 1) && cm.le(1, 0));
        assert_eq!(cm.atom("p").to_vec(), vec![0]);
    }

    #[test]
    fn two_chain_box() {
        let m = PreorderModel::parse("worlds a b\norder a b\nvaluation p b\n").unwrap();
        let sigma = adequate_closure(&[parse("[]p").unwrap()]);
        let cm = filtrate(&m, &sigma);
        assert_eq!(cm.world_count(), 2);
        assert!(cm.lt(0, 1));
        assert!(preservation_failures(&m, &cm, cm.class_map(), sigma.iter()).is_empty());
    }

    #[test]
    fn truth_on_peak_with_reach() {
        let m = PreorderModel::parse("worlds a u v\norder a u\norder v u\nvaluation p u\nvaluation q v\n")
            .unwrap();
        let sigma = adequate_closure(&[parse("gamma(p,q)").unwrap()]);
        let cm = filtrate(&m, &sigma);
        assert!(cm.world_count() <= 3);
        assert!(preservation_failures(&m, &cm, cm.class_map(), sigma.iter()).is_empty());
    }
}
