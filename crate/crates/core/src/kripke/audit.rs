//! Semantic soundness checks: sampled instances of the reachability axioms
//! and rules, the S4 and Grz schemata, evaluated on a single model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

use super::eval::Evaluator;
use super::model::{PreorderModel, WorldId};
use super::sample::FormulaSampler;

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub seed: u64,
    /// Random instances per schema, on top of the deterministic atomic ones.
    pub instances: usize,
    pub max_depth: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { seed: 0, instances: 40, max_depth: 2 }
    }
}

/// A failed instance: the formula that is not valid and a world refuting it.
/// For rules, `premises` lists the (valid) premises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub instance: Formula,
    pub premises: Vec<Formula>,
    pub world: WorldId,
}

#[derive(Debug, Clone)]
pub struct SchemaCheck {
    pub name: &'static str,
    /// Whether the schema must hold on this model: Grz only binds posets.
    pub required: bool,
    pub instances: usize,
    /// For rules: instances whose premises were all valid.
    pub applicable: usize,
    pub violations: Vec<Violation>,
}

impl SchemaCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub checks: Vec<SchemaCheck>,
}

impl AuditReport {
    pub fn check(&self, name: &str) -> Option<&SchemaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Every check except Grz passes.
    pub fn alr_sound(&self) -> bool {
        self.checks.iter().filter(|c| c.name != GRZ).all(SchemaCheck::passed)
    }

    /// Every check passes.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(SchemaCheck::passed)
    }

    /// Every check that binds this model passes.
    pub fn required_passed(&self) -> bool {
        self.checks.iter().filter(|c| c.required).all(SchemaCheck::passed)
    }
}

pub const AXIOM_1: &str = "axiom-1";
pub const AXIOM_2: &str = "axiom-2";
pub const REACH_DIAMOND: &str = "reach-implies-diamond";
pub const RULE_1: &str = "rule-1";
pub const RULE_2: &str = "rule-2";
pub const S4_K: &str = "s4-k";
pub const S4_T: &str = "s4-t";
pub const S4_4: &str = "s4-4";
pub const GRZ: &str = "grz";

/// `psi | (phi & gamma(phi,psi)) -> [](phi -> gamma(phi,psi))`
pub fn axiom1(phi: &Formula, psi: &Formula) -> Formula {
    let reach = Formula::reach(phi.clone(), psi.clone());
    Formula::implies(
        Formula::or(psi.clone(), Formula::and(phi.clone(), reach.clone())),
        Formula::boxed(Formula::implies(phi.clone(), reach)),
    )
}

/// `<>(phi & gamma(phi,psi)) -> gamma(phi,psi)`
pub fn axiom2(phi: &Formula, psi: &Formula) -> Formula {
    let reach = Formula::reach(phi.clone(), psi.clone());
    Formula::implies(Formula::diamond(Formula::and(phi.clone(), reach.clone())), reach)
}

/// `gamma(phi,psi) -> <>phi`
pub fn reach_implies_diamond(phi: &Formula, psi: &Formula) -> Formula {
    Formula::implies(Formula::reach(phi.clone(), psi.clone()), Formula::diamond(phi.clone()))
}

/// `[]([](p -> []p) -> p) -> []p`
pub fn grz(p: &Formula) -> Formula {
    let inner = Formula::boxed(Formula::implies(p.clone(), Formula::boxed(p.clone())));
    Formula::implies(
        Formula::boxed(Formula::implies(inner, p.clone())),
        Formula::boxed(p.clone()),
    )
}

/// Premises and conclusion of the monotonicity rule.
pub fn rule1(
    phi: &Formula,
    phi2: &Formula,
    psi: &Formula,
    psi2: &Formula,
) -> (Vec<Formula>, Formula) {
    (
        vec![Formula::implies(phi.clone(), phi2.clone()), Formula::implies(psi.clone(), psi2.clone())],
        Formula::implies(
            Formula::reach(phi.clone(), psi.clone()),
            Formula::reach(phi2.clone(), psi2.clone()),
        ),
    )
}

/// Premises and conclusion of the induction rule.
pub fn rule2(phi: &Formula, psi: &Formula) -> (Vec<Formula>, Formula) {
    let phi_and_psi = Formula::and(phi.clone(), psi.clone());
    (
        vec![
            Formula::implies(psi.clone(), Formula::boxed(Formula::implies(phi.clone(), psi.clone()))),
            Formula::implies(
                Formula::and(phi.clone(), Formula::diamond(phi_and_psi.clone())),
                psi.clone(),
            ),
        ],
        Formula::implies(Formula::reach(phi.clone(), psi.clone()), Formula::diamond(phi_and_psi)),
    )
}

struct Runner<'m> {
    eval: Evaluator<'m>,
}

impl Runner<'_> {
    fn refuting_world(&mut self, f: &Formula) -> Option<WorldId> {
        self.eval.eval(f).complement().first()
    }

    fn schema(&mut self, name: &'static str, required: bool, instances: &[Formula]) -> SchemaCheck {
        let mut violations = Vec::new();
        for f in instances {
            if let Some(world) = self.refuting_world(f) {
                violations.push(Violation { instance: f.clone(), premises: vec![], world });
            }
        }
        SchemaCheck { name, required, instances: instances.len(), applicable: instances.len(), violations }
    }

    fn rule(&mut self, name: &'static str, instances: &[(Vec<Formula>, Formula)]) -> SchemaCheck {
        let mut violations = Vec::new();
        let mut applicable = 0;
        for (premises, conclusion) in instances {
            if premises.iter().any(|p| self.refuting_world(p).is_some()) {
                continue;
            }
            applicable += 1;
            if let Some(world) = self.refuting_world(conclusion) {
                violations.push(Violation {
                    instance: conclusion.clone(),
                    premises: premises.clone(),
                    world,
                });
            }
        }
        SchemaCheck { name, required: true, instances: instances.len(), applicable, violations }
    }
}

/// Runs every schema on `model` with seeded random substitution instances.
///
/// Atomic instances over the model's atoms (and their negations) come first,
/// so small countermodels are found deterministically.
pub fn axiom_suite(model: &PreorderModel, config: &AuditConfig) -> AuditReport {
    let mut atoms: Vec<String> = model.valuation().keys().cloned().collect();
    if atoms.is_empty() {
        atoms.push("p".into());
    }
    let sampler = FormulaSampler {
        atoms: atoms.clone(),
        max_depth: config.max_depth,
        allow_reach: true,
        allow_constants: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut basic: Vec<Formula> = Vec::new();
    for a in &atoms {
        basic.push(Formula::atom(a));
        basic.push(Formula::not(Formula::atom(a)));
    }
    basic.push(Formula::top());

    let mut pairs: Vec<(Formula, Formula)> = Vec::new();
    for x in &basic {
        for y in &basic {
            pairs.push((x.clone(), y.clone()));
        }
    }
    for _ in 0..config.instances {
        pairs.push((sampler.sample(&mut rng), sampler.sample(&mut rng)));
    }
    let mut singles = basic.clone();
    for _ in 0..config.instances {
        singles.push(sampler.sample(&mut rng));
    }

    let mut runner = Runner { eval: Evaluator::new(model) };
    let mut checks = Vec::new();
    let inst = |f: fn(&Formula, &Formula) -> Formula| -> Vec<Formula> {
        pairs.iter().map(|(a, b)| f(a, b)).collect()
    };
    checks.push(runner.schema(AXIOM_1, true, &inst(axiom1)));
    checks.push(runner.schema(AXIOM_2, true, &inst(axiom2)));
    checks.push(runner.schema(REACH_DIAMOND, true, &inst(reach_implies_diamond)));
    checks.push(runner.schema(
        S4_K,
        true,
        &inst(|a, b| {
            Formula::implies(
                Formula::boxed(Formula::implies(a.clone(), b.clone())),
                Formula::implies(Formula::boxed(a.clone()), Formula::boxed(b.clone())),
            )
        }),
    ));
    let t: Vec<Formula> = singles
        .iter()
        .map(|a| Formula::implies(Formula::boxed(a.clone()), a.clone()))
        .collect();
    checks.push(runner.schema(S4_T, true, &t));
    let four: Vec<Formula> = singles
        .iter()
        .map(|a| {
            Formula::implies(Formula::boxed(a.clone()), Formula::boxed(Formula::boxed(a.clone())))
        })
        .collect();
    checks.push(runner.schema(S4_4, true, &four));

    // Rule 1: random instances plus weakenings whose premises always hold.
    let mut r1 = Vec::new();
    for (a, b) in &pairs {
        let c = sampler.sample(&mut rng);
        let d = sampler.sample(&mut rng);
        r1.push(rule1(a, &c, b, &d));
        r1.push(rule1(a, &Formula::or(a.clone(), c.clone()), b, &Formula::or(b.clone(), d)));
    }
    checks.push(runner.rule(RULE_1, &r1));

    // Rule 2: random instances plus psi := chi | gamma(phi, chi), which
    // satisfies both premises on every model.
    let mut r2 = Vec::new();
    for (a, b) in &pairs {
        r2.push(rule2(a, b));
        let closed = Formula::or(b.clone(), Formula::reach(a.clone(), b.clone()));
        r2.push(rule2(a, &closed));
    }
    checks.push(runner.rule(RULE_2, &r2));

    let grz_instances: Vec<Formula> = singles.iter().map(grz).collect();
    checks.push(runner.schema(GRZ, model.is_antisymmetric(), &grz_instances));

    // keep the rng stream independent of the number of atoms
    let _ = rng.gen::<u64>();
    AuditReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::model::PreorderModel;

    #[test]
    fn poset_passes_everything() {
        let m = PreorderModel::parse(
            "worlds a u v\norder a u\norder v u\nvaluation p u\nvaluation q v\n",
        )
        .unwrap();
        let report = axiom_suite(&m, &AuditConfig::default());
        for c in &report.checks {
            assert!(c.passed(), "{} failed: {:?}", c.name, c.violations.first());
        }
        assert!(report.check(RULE_1).unwrap().applicable > 0);
        assert!(report.check(RULE_2).unwrap().applicable > 0);
    }

    #[test]
    fn cluster_refutes_grz_only() {
        let m = PreorderModel::parse("worlds a b\norder a b\norder b a\nvaluation p a\n").unwrap();
        let report = axiom_suite(&m, &AuditConfig::default());
        assert!(report.alr_sound());
        let g = report.check(GRZ).unwrap();
        assert!(!g.passed());
        assert!(!g.required);
        assert_eq!(g.violations[0].instance, grz(&Formula::atom("p")));
    }
}
