mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyreach::formula::{adequate_closure, check_adequate, hat_extension, parse, Formula};
use polyreach::kripke::{
    bounded_sat, check_path, evaluate, evaluate_with, holds_at, reach_components, reach_fixpoint,
    reach_oracle, reach_paths, witness_path, FormulaSampler, ModelSampler, PreorderModel,
    ReachStrategy, SatOutcome, WorldSet,
};
use polyreach::transforms::{cut, filtrate, nerve, plr_pipeline};

use common::{reach_by_search, to_set, zigzag_components};

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => prop::sample::select(vec!["p", "q", "r", "red", "x_1"]).prop_map(Formula::atom),
        1 => Just(Formula::top()),
        1 => Just(Formula::bottom()),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::diamond),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::reach(a, b)),
            inner.prop_map(Formula::pi),
        ]
    })
}

fn model(seed: u64, poset: bool, max_worlds: usize) -> PreorderModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = if poset { ModelSampler::posets(max_worlds) } else { ModelSampler::preorders(max_worlds) };
    sampler.sample(&mut rng)
}

fn set_from_mask(m: &PreorderModel, mask: u32) -> WorldSet {
    WorldSet::from_worlds(m.world_count(), m.worlds().filter(|w| mask >> w & 1 == 1))
}

fn sample_formula(seed: u64, depth: usize) -> Formula {
    FormulaSampler::with_depth(depth).sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(f in formula_strategy()) {
        let printed = f.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), f);
    }

    #[test]
    fn closure_contains_input_is_adequate_and_idempotent(fs in prop::collection::vec(formula_strategy(), 1..3)) {
        let sigma = adequate_closure(&fs);
        for f in &fs {
            prop_assert!(sigma.contains(f));
        }
        prop_assert!(check_adequate(sigma.members()).is_ok());
        let members: Vec<Formula> = sigma.iter().cloned().collect();
        let again = adequate_closure(&members);
        prop_assert_eq!(again.members(), sigma.members());
    }

    #[test]
    fn closure_is_monotone(a in formula_strategy(), b in formula_strategy()) {
        let small = adequate_closure(std::slice::from_ref(&a));
        let large = adequate_closure(&[a, b]);
        prop_assert!(small.members().is_subset(large.members()));
    }

    #[test]
    fn hat_extension_is_an_adequate_superset(f in formula_strategy()) {
        let sigma = adequate_closure(&[f]);
        let hat = hat_extension(&sigma);
        prop_assert!(sigma.members().is_subset(hat.members()));
        prop_assert!(check_adequate(hat.members()).is_ok());
    }

    #[test]
    fn reach_strategies_agree_with_search(seed in any::<u64>(), poset in any::<bool>(), a in any::<u32>(), b in any::<u32>()) {
        let m = model(seed, poset, 6);
        let (sa, sb) = (set_from_mask(&m, a), set_from_mask(&m, b));
        let expected = reach_by_search(&m, &to_set(&sa), &to_set(&sb));
        prop_assert_eq!(to_set(&reach_components(&m, &sa, &sb)), expected.clone());
        prop_assert_eq!(to_set(&reach_fixpoint(&m, &sa, &sb)), expected.clone());
        prop_assert_eq!(to_set(&reach_paths(&m, &sa, &sb)), expected.clone());
        let rel = reach_oracle(&m, &sa);
        let via_relation: BTreeSet<usize> = m.worlds().filter(|&w| rel.successors(w).intersects(&sb)).collect();
        prop_assert_eq!(via_relation, expected.clone());
        for w in m.worlds() {
            match witness_path(&m, w, &sa, &sb) {
                Some(path) => {
                    prop_assert!(expected.contains(&w));
                    prop_assert!(check_path(&m, &path, &sa));
                    prop_assert_eq!(path.start(), Some(w));
                    prop_assert!(sb.contains(path.end().unwrap()));
                }
                None => prop_assert!(!expected.contains(&w)),
            }
        }
    }

    #[test]
    fn reach_is_monotone_in_both_arguments(seed in any::<u64>(), a in any::<u32>(), b in any::<u32>(), a2 in any::<u32>(), b2 in any::<u32>()) {
        let m = model(seed, false, 6);
        let small = reach_components(&m, &set_from_mask(&m, a & a2), &set_from_mask(&m, b & b2));
        let large = reach_components(&m, &set_from_mask(&m, a), &set_from_mask(&m, b));
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn reach_with_top_is_diamond_and_implies_diamond(seed in any::<u64>(), poset in any::<bool>(), fseed in any::<u64>(), gseed in any::<u64>()) {
        let m = model(seed, poset, 6);
        let (f, g) = (sample_formula(fseed, 2), sample_formula(gseed, 2));
        let dia = evaluate(&m, &Formula::diamond(f.clone()));
        prop_assert_eq!(evaluate(&m, &Formula::reach(f.clone(), Formula::top())), dia.clone());
        prop_assert!(evaluate(&m, &Formula::reach(f, g)).is_subset(&dia));
    }

    #[test]
    fn pi_is_truth_on_the_whole_component(seed in any::<u64>(), fseed in any::<u64>()) {
        let m = model(seed, false, 6);
        let f = sample_formula(fseed, 2);
        let truth = evaluate(&m, &f);
        let comp = zigzag_components(&m);
        let got = evaluate(&m, &Formula::pi(f));
        for w in m.worlds() {
            let expected = m.worlds().filter(|&v| comp[v] == comp[w]).all(|v| truth.contains(v));
            prop_assert_eq!(got.contains(w), expected, "world {}", m.name(w));
        }
    }

    #[test]
    fn box_is_an_interior_operator(seed in any::<u64>(), fseed in any::<u64>(), gseed in any::<u64>()) {
        let m = model(seed, false, 6);
        let (f, g) = (sample_formula(fseed, 2), sample_formula(gseed, 2));
        let bf = evaluate(&m, &Formula::boxed(f.clone()));
        prop_assert!(bf.is_subset(&evaluate(&m, &f)));
        prop_assert_eq!(evaluate(&m, &Formula::boxed(Formula::boxed(f.clone()))), bf.clone());
        let both = evaluate(&m, &Formula::boxed(Formula::and(f, g.clone())));
        prop_assert_eq!(both, bf.intersection(&evaluate(&m, &Formula::boxed(g))));
    }

    #[test]
    fn strategies_agree_on_formulas(seed in any::<u64>(), fseed in any::<u64>()) {
        let m = model(seed, false, 6);
        let f = sample_formula(fseed, 3);
        let c = evaluate_with(&m, &f, ReachStrategy::Components);
        prop_assert_eq!(evaluate_with(&m, &f, ReachStrategy::Fixpoint), c.clone());
        prop_assert_eq!(evaluate_with(&m, &f, ReachStrategy::Paths), c);
    }

    #[test]
    fn cut_gives_a_poset_and_fixes_posets(seed in any::<u64>(), poset in any::<bool>()) {
        let m = model(seed, poset, 6);
        let c = cut(&m);
        prop_assert!(c.is_antisymmetric());
        prop_assert!(c.order_is_closed());
        for w in m.worlds() {
            for v in m.worlds() {
                let expected = w == v || m.lt(w, v);
                prop_assert_eq!(c.le(w, v), expected);
            }
        }
        if poset {
            prop_assert_eq!(c.to_text(), m.to_text());
        }
    }

    #[test]
    fn filtration_classes_respect_theories(seed in any::<u64>(), fseed in any::<u64>()) {
        let m = model(seed, false, 5);
        let sigma = adequate_closure(&[sample_formula(fseed, 2)]);
        let cm = filtrate(&m, &sigma);
        prop_assert!(cm.order_is_closed());
        let theory = |w: usize| -> BTreeSet<Formula> {
            sigma.iter().filter(|f| holds_at(&m, f, w)).cloned().collect()
        };
        for w in m.worlds() {
            for v in m.worlds() {
                prop_assert_eq!(cm.class_of(w) == cm.class_of(v), theory(w) == theory(v));
                if m.le(w, v) {
                    prop_assert!(cm.le(cm.class_of(w), cm.class_of(v)));
                }
            }
        }
    }

    #[test]
    fn text_round_trip_of_random_models(seed in any::<u64>(), poset in any::<bool>()) {
        let m = model(seed, poset, 7);
        let text = m.to_text();
        let back = PreorderModel::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        for w in m.worlds() {
            for v in m.worlds() {
                prop_assert_eq!(back.le(w, v), m.le(w, v));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bounded_sat_agrees_with_random_models(fseed in any::<u64>(), mseed in any::<u64>()) {
        let f = sample_formula(fseed, 2);
        match bounded_sat(&f, 3) {
            SatOutcome::Sat { model, world } => {
                prop_assert!(model.world_count() <= 3);
                prop_assert!(holds_at(&model, &f, world));
            }
            SatOutcome::UnsatUpTo { bound } => {
                prop_assert_eq!(bound, 3);
                let mut rng = ChaCha8Rng::seed_from_u64(mseed);
                let sampler = ModelSampler { max_worlds: 3, ..ModelSampler::default() };
                for _ in 0..20 {
                    let m = sampler.sample(&mut rng);
                    prop_assert!(evaluate(&m, &f).is_empty(), "{} holds on\n{}", f, m);
                }
            }
        }
    }

    #[test]
    fn nerve_worlds_are_the_chains(seed in any::<u64>()) {
        let m = model(seed, true, 5);
        let n = nerve(&m.clone().into_poset().unwrap());
        let mut got: Vec<BTreeSet<usize>> = n.chains().iter().map(|c| c.iter().copied().collect()).collect();
        got.sort();
        let mut expected = common::chains_by_subsets(&m);
        expected.sort();
        prop_assert_eq!(got, expected);
        prop_assert!(n.is_antisymmetric());
        for x in n.worlds() {
            for y in n.worlds() {
                let sub = n.chain(x).iter().all(|w| n.chain(y).contains(w));
                prop_assert_eq!(n.le(x, y), sub);
            }
        }
    }
}

#[test]
fn linear_chain_nerve_has_all_nonempty_subsets() {
    for len in 1..=5 {
        let names: Vec<String> = (0..len).map(|i| format!("c{i}")).collect();
        let edges: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
        let m = PreorderModel::from_ids(names, edges, Vec::<(String, Vec<usize>)>::new()).unwrap();
        let n = nerve(&m.into_poset().unwrap());
        assert_eq!(n.world_count(), (1 << len) - 1);
    }
}

#[test]
fn reach_closure_member_count_is_frozen() {
    // regression value from running the closure once
    let sigma = adequate_closure(&[parse("gamma(p, q)").unwrap()]);
    assert_eq!(sigma.len(), 14);
    assert!(sigma.contains(&parse("[](p -> gamma(p, q))").unwrap()));
    assert!(sigma.contains(&parse("<>(p & gamma(p, q))").unwrap()));
}

#[test]
fn pipeline_keeps_a_strict_successor_above_the_target() {
    // without the Grz witness for <>(phi & ~psi), w1 and w2 share a class
    // cluster, the cut separates them, and gamma is lost at w2
    let m = PreorderModel::parse(
        "worlds w0 w1 w2\norder w0 w1\norder w1 w2\nvaluation p w1 w2\nvaluation q w0 w1\n",
    )
    .unwrap();
    let gamma = parse("gamma(p & p, q & p)").unwrap();
    let out = plr_pipeline(&m, std::slice::from_ref(&gamma));
    assert!(out.report.all_pass(), "{:?}", out.report);
    assert!(holds_at(&out.result, &gamma, out.classes.class_of(2)));
}
