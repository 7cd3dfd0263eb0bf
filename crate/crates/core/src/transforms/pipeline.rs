use crate::formula::{adequate_closure, hat_extension, AdequateSet, Formula};
use crate::kripke::eval::Evaluator;
use crate::kripke::model::{PosetModel, PreorderModel, WorldId};
use crate::kripke::path::{check_path, witness_path, UpDownPath};

use super::cut::cut;
use super::filtration::{filtrate, preservation_failures, ClassModel, PreservationFailure};

/// A class where a reachability member holds in the quotient but no witness
/// path has only equal or strict steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationFailure {
    pub formula: Formula,
    pub class: WorldId,
}

#[derive(Debug, Clone)]
pub struct PreservationReport {
    /// The input was not a poset, so failures do not refute anything.
    pub advisory: bool,
    pub output_is_poset: bool,
    pub formulas_checked: usize,
    pub witnesses_checked: usize,
    pub preservation: Vec<PreservationFailure>,
    pub normalization: Vec<NormalizationFailure>,
}

impl PreservationReport {
    pub fn all_pass(&self) -> bool {
        self.output_is_poset && self.preservation.is_empty() && self.normalization.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub sigma: AdequateSet,
    pub sigma_hat: AdequateSet,
    pub classes: ClassModel,
    pub result: PosetModel,
    pub report: PreservationReport,
}

/// Filtrates `m` through the refined closure of `gamma`, cuts the quotient
/// and checks that every member of the plain closure keeps its truth value
/// between each source world and its class.
///
/// Also checks, for each reachability member and each class where it holds
/// in the quotient, that some witness path moves only by equal or strict
/// steps. Such paths are exactly the up-down paths of the cut order.
pub fn plr_pipeline(m: &PreorderModel, gamma: &[Formula]) -> PipelineOutput {
    let sigma = adequate_closure(gamma);
    let sigma_hat = hat_extension(&sigma);
    let classes = filtrate(m, &sigma_hat);
    let result = cut(classes.model());
    let preservation = preservation_failures(m, &result, classes.class_map(), sigma.iter());

    let quotient = classes.model();
    let mut eval = Evaluator::new(quotient);
    let mut normalization = Vec::new();
    let mut witnesses_checked = 0;
    for f in sigma.iter() {
        let Formula::Reach(phi, psi) = f else { continue };
        let holds = eval.eval(f);
        let a = eval.eval(phi);
        let b = eval.eval(psi);
        for class in holds.iter() {
            witnesses_checked += 1;
            let normalized = witness_path(&result, class, &a, &b)
                .filter(|p| check_path(quotient, p, &a) && has_strict_steps(quotient, p));
            if normalized.is_none() {
                normalization.push(NormalizationFailure { formula: f.clone(), class });
            }
        }
    }
    let report = PreservationReport {
        advisory: !m.is_antisymmetric(),
        output_is_poset: result.is_antisymmetric(),
        formulas_checked: sigma.len(),
        witnesses_checked,
        preservation,
        normalization,
    };
    PipelineOutput { sigma, sigma_hat, classes, result, report }
}

/// Every step is an equality or a strict move up or down.
fn has_strict_steps(m: &PreorderModel, p: &UpDownPath) -> bool {
    p.worlds().windows(2).all(|s| s[0] == s[1] || m.lt(s[0], s[1]) || m.lt(s[1], s[0]))
}
