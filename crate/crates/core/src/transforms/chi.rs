use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{AdequateSet, Formula};
use crate::kripke::eval::{reach_oracle, Evaluator};
use crate::kripke::model::{PreorderModel, WorldId, WorldSet};

use super::filtration::{filtrate, ClassModel};

/// Conjunction of a class theory, in formula order. Empty gives `T`.
pub fn chi<'a, I>(theory: I) -> Formula
where
    I: IntoIterator<Item = &'a Formula>,
{
    let sorted: BTreeSet<&Formula> = theory.into_iter().collect();
    Formula::conjunction(sorted.into_iter().cloned())
}

/// Classes reachable from `u` under the reachability relation through the
/// classes whose theory contains `phi`.
pub fn reachable_classes(cm: &ClassModel, u: WorldId, phi: &Formula) -> Vec<WorldId> {
    let through = WorldSet::from_worlds(
        cm.world_count(),
        cm.worlds().filter(|&c| cm.theory(c).contains(phi)),
    );
    reach_oracle(cm.model(), &through).successors(u).to_vec()
}

/// Disjunction of the class formulas of every class reachable from `u`
/// through `phi`. Empty gives `F`.
pub fn chi_disjunction(cm: &ClassModel, u: WorldId, phi: &Formula) -> Formula {
    Formula::disjunction(reachable_classes(cm, u, phi).into_iter().map(|s| chi(cm.theory(s))))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChiError {
    #[error("{0} is not a member of the formula set")]
    NotInSigma(Formula),
    #[error("no class #{0}")]
    UnknownClass(WorldId),
    #[error("{formula} fails at world {world}")]
    Invalid { formula: Formula, world: WorldId },
}

/// The two closure properties of `chi = chi_disjunction(U, phi)`, checked as
/// validities of `m`:
/// `<>(phi & chi) -> chi` and `phi & chi -> [](phi -> chi)`.
pub fn chi_lemma_check(
    m: &PreorderModel,
    sigma: &AdequateSet,
    u: WorldId,
    phi: &Formula,
) -> Result<(), ChiError> {
    if !sigma.contains(phi) {
        return Err(ChiError::NotInSigma(phi.clone()));
    }
    let cm = filtrate(m, sigma);
    if u >= cm.world_count() {
        return Err(ChiError::UnknownClass(u));
    }
    let x = chi_disjunction(&cm, u, phi);
    let phi_x = Formula::and(phi.clone(), x.clone());
    let lemmas = [
        Formula::implies(Formula::diamond(phi_x.clone()), x.clone()),
        Formula::implies(phi_x, Formula::boxed(Formula::implies(phi.clone(), x))),
    ];
    let mut eval = Evaluator::new(m);
    for formula in lemmas {
        if let Some(world) = eval.eval(&formula).complement().first() {
            return Err(ChiError::Invalid { formula, world });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{adequate_closure, parse};

    #[test]
    fn chi_of_small_theory() {
        let p = parse("p").unwrap();
        let nq = parse("~q").unwrap();
        assert_eq!(chi([&nq, &p]), parse("p & ~q").unwrap());
        assert!(chi(std::iter::empty()).is_top());
    }

    #[test]
    fn empty_reach_gives_bottom() {
        let m = PreorderModel::parse("worlds a b\norder a b\n").unwrap();
        let sigma = adequate_closure(&[parse("p").unwrap()]);
        let cm = filtrate(&m, &sigma);
        let p = parse("p").unwrap();
        assert!(chi_disjunction(&cm, 0, &p).is_bottom());
        assert_eq!(chi_lemma_check(&m, &sigma, 0, &p), Ok(()));
    }

    #[test]
    fn peak_with_reach() {
        let m = PreorderModel::parse("worlds a u v\norder a u\norder v u\nvaluation p u\nvaluation q v\n")
            .unwrap();
        let sigma = adequate_closure(&[parse("gamma(p,q)").unwrap()]);
        let cm = filtrate(&m, &sigma);
        for u in cm.worlds() {
            for phi in sigma.iter() {
                assert_eq!(chi_lemma_check(&m, &sigma, u, phi), Ok(()), "{phi}");
            }
        }
    }

    #[test]
    fn two_chain_reachable_classes() {
        let m = PreorderModel::parse("worlds a b\norder a b\nvaluation p b\n").unwrap();
        let sigma = adequate_closure(&[parse("[]p").unwrap()]);
        let cm = filtrate(&m, &sigma);
        let p = parse("p").unwrap();
        // b's class carries p and sits above a's class
        assert_eq!(reachable_classes(&cm, 0, &p), vec![0, 1]);
        let x = chi_disjunction(&cm, 0, &p);
        assert!(Evaluator::new(&m).eval(&x).is_full());
    }

    #[test]
    fn phi_outside_sigma_is_rejected() {
        let m = PreorderModel::parse("worlds a\n").unwrap();
        let sigma = adequate_closure(&[parse("p").unwrap()]);
        assert!(matches!(
            chi_lemma_check(&m, &sigma, 0, &parse("q").unwrap()),
            Err(ChiError::NotInSigma(_))
        ));
    }
}
