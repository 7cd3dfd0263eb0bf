use std::collections::BTreeSet;

use thiserror::Error;

use super::Formula;

/// A finite formula set closed under subformulas, single negations and the
/// two reachability companions `[](phi -> gamma(phi, psi))` and
/// `<>(phi & gamma(phi, psi))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdequateSet {
    members: BTreeSet<Formula>,
    origin: Vec<Formula>,
}

impl AdequateSet {
    pub fn members(&self) -> &BTreeSet<Formula> {
        &self.members
    }

    /// The generating set the closure was computed from.
    pub fn origin(&self) -> &[Formula] {
        &self.origin
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.members.iter()
    }

    /// Members of shape `[]phi`.
    pub fn boxes(&self) -> impl Iterator<Item = &Formula> {
        self.members.iter().filter(|f| matches!(f, Formula::Box(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdequacyViolation {
    #[error("subformula `{missing}` of `{member}` is missing")]
    Subformula { member: Formula, missing: Formula },
    #[error("single negation `{missing}` of `{member}` is missing")]
    Negation { member: Formula, missing: Formula },
    #[error("reachability companion `{missing}` of `{member}` is missing")]
    Companion { member: Formula, missing: Formula },
}

/// Least superset of `gamma` closed under immediate subterms.
pub fn subformulas<'a, I>(gamma: I) -> BTreeSet<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = BTreeSet::new();
    let mut stack: Vec<&Formula> = gamma.into_iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.children());
        }
    }
    out
}

/// Strips one negation if present, adds one otherwise.
pub fn single_negation(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::not(other.clone()),
    }
}

fn reach_companions(phi: &Formula, reach: &Formula) -> [Formula; 2] {
    [
        Formula::boxed(Formula::implies(phi.clone(), reach.clone())),
        Formula::diamond(Formula::and(phi.clone(), reach.clone())),
    ]
}

/// Smallest adequate set containing `gamma`.
///
/// Adds the reachability companions for every `gamma`-subformula, takes
/// subformulas again, then adds the single negation of every member that is
/// not itself a negation.
pub fn adequate_closure(gamma: &[Formula]) -> AdequateSet {
    let sub = subformulas(gamma);
    let mut with_companions: Vec<Formula> = gamma.to_vec();
    for f in &sub {
        if let Formula::Reach(phi, _) = f {
            with_companions.extend(reach_companions(phi, f));
        }
    }
    let mut members = subformulas(&with_companions);
    let negations: Vec<Formula> = members
        .iter()
        .filter(|f| !matches!(f, Formula::Not(_)))
        .map(single_negation)
        .collect();
    members.extend(negations);
    AdequateSet { members, origin: gamma.to_vec() }
}

/// The refined closure used before cutting clusters: every diamond member
/// `<>phi` contributes `<>(~phi & <>phi)` and every `gamma(phi, psi)`
/// contributes `<>(phi & ~psi)` together with `<>(~chi & <>chi)` for
/// `chi = phi & ~psi`; the result is closed again.
///
/// A member `~[]theta` counts as the diamond of `~theta`; its extra formula is
/// built as `<>(theta & ~[]theta)`, which is literally `<>(~phi & <>phi)` when
/// `theta = ~phi`.
pub fn hat_extension(sigma: &AdequateSet) -> AdequateSet {
    let mut seed: Vec<Formula> = sigma.members.iter().cloned().collect();
    for f in &sigma.members {
        match f {
            Formula::Not(inner) => {
                if let Formula::Box(theta) = &**inner {
                    seed.push(Formula::diamond(Formula::and((**theta).clone(), f.clone())));
                }
            }
            Formula::Reach(phi, psi) => {
                let x = Formula::and((**phi).clone(), Formula::not((**psi).clone()));
                let dx = Formula::diamond(x.clone());
                // the new diamond needs its own Grz witness, or a cluster above a
                // psi-world has no strict phi-successor to route the path through
                seed.push(Formula::diamond(Formula::and(Formula::not(x), dx.clone())));
                seed.push(dx);
            }
            _ => {}
        }
    }
    adequate_closure(&seed)
}

/// Scans a formula set for the adequacy closure conditions.
pub fn check_adequate(members: &BTreeSet<Formula>) -> Result<(), AdequacyViolation> {
    for f in members {
        for child in f.children() {
            if !members.contains(child) {
                return Err(AdequacyViolation::Subformula {
                    member: f.clone(),
                    missing: child.clone(),
                });
            }
        }
        let neg = single_negation(f);
        if !members.contains(&neg) {
            return Err(AdequacyViolation::Negation { member: f.clone(), missing: neg });
        }
        if let Formula::Reach(phi, _) = f {
            for companion in reach_companions(phi, f) {
                if !members.contains(&companion) {
                    return Err(AdequacyViolation::Companion {
                        member: f.clone(),
                        missing: companion,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    /// Naive fixpoint of the closure conditions, used as an independent
    /// reference for the member count.
    fn closure_fixpoint(gamma: &[Formula]) -> BTreeSet<Formula> {
        let mut current: BTreeSet<Formula> = gamma.iter().cloned().collect();
        loop {
            let mut next = current.clone();
            for g in &current {
                next.extend(g.children().into_iter().cloned());
                next.insert(single_negation(g));
                if let Formula::Reach(phi, _) = g {
                    next.extend(reach_companions(phi, g));
                }
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }

    #[test]
    fn subformula_examples() {
        assert_eq!(subformulas(&[f("[]p")]), set(&["[]p", "p"]));
        assert_eq!(subformulas(&[f("gamma(p,q)")]), set(&["gamma(p,q)", "p", "q"]));
        assert_eq!(
            subformulas(&[f("~(p & q)")]),
            set(&["~(p & q)", "p & q", "p", "q"])
        );
    }

    #[test]
    fn single_negation_examples() {
        assert_eq!(single_negation(&f("p")), f("~p"));
        assert_eq!(single_negation(&f("~p")), f("p"));
        assert_eq!(single_negation(&f("[]p")), f("~[]p"));
        assert_eq!(single_negation(&f("~~p")), f("~p"));
    }

    #[test]
    fn closure_of_atom() {
        assert_eq!(adequate_closure(&[f("p")]).members(), &set(&["p", "~p"]));
    }

    #[test]
    fn closure_of_box_and_its_negation() {
        let sigma = adequate_closure(&[f("[]p"), f("~[]p")]);
        assert_eq!(sigma.members(), &set(&["[]p", "~[]p", "p", "~p"]));
    }

    #[test]
    fn closure_of_reach_contains_companions() {
        let sigma = adequate_closure(&[f("gamma(p,q)")]);
        assert!(sigma.contains(&f("[](p -> gamma(p,q))")));
        assert!(sigma.contains(&f("<>(p & gamma(p,q))")));
        let reference = closure_fixpoint(&[f("gamma(p,q)")]);
        assert_eq!(sigma.members(), &reference);
        // frozen from the fixpoint reference above
        assert_eq!(sigma.len(), 14);
        check_adequate(sigma.members()).unwrap();
    }

    #[test]
    fn closure_matches_fixpoint_on_mixed_input() {
        let gamma = [f("gamma(p, <>q) -> []r"), f("~gamma(T, ~p)")];
        let sigma = adequate_closure(&gamma);
        assert_eq!(sigma.members(), &closure_fixpoint(&gamma));
        check_adequate(sigma.members()).unwrap();
    }

    #[test]
    fn hat_of_atom_is_unchanged() {
        let sigma = adequate_closure(&[f("p")]);
        assert_eq!(hat_extension(&sigma).members(), sigma.members());
    }

    #[test]
    fn hat_adds_grz_diamond() {
        let sigma = adequate_closure(&[f("<>p")]);
        let hat = hat_extension(&sigma);
        assert!(hat.contains(&f("<>(~p & <>p)")));
        assert!(hat.members().is_superset(sigma.members()));
        check_adequate(hat.members()).unwrap();
    }

    #[test]
    fn hat_adds_reach_diamond() {
        let sigma = adequate_closure(&[f("gamma(p,q)")]);
        let hat = hat_extension(&sigma);
        assert!(hat.contains(&f("<>(p & ~q)")));
        check_adequate(hat.members()).unwrap();
    }

    #[test]
    fn hat_treats_negated_box_as_diamond() {
        let sigma = adequate_closure(&[f("[]p")]);
        let hat = hat_extension(&sigma);
        // ~[]p is <>~p; its extension is <>(p & ~[]p)
        assert!(hat.contains(&f("<>(p & ~[]p)")));
    }

    #[test]
    fn violations_are_detected() {
        let missing_neg = set(&["p"]);
        assert!(matches!(
            check_adequate(&missing_neg),
            Err(AdequacyViolation::Negation { .. })
        ));
        let missing_sub = set(&["[]p", "~[]p"]);
        assert!(matches!(
            check_adequate(&missing_sub),
            Err(AdequacyViolation::Subformula { .. })
        ));
        let mut missing_companion = adequate_closure(&[f("gamma(p,q)")]).members().clone();
        missing_companion.remove(&f("<>(p & gamma(p,q))"));
        assert!(check_adequate(&missing_companion).is_err());
    }
}
