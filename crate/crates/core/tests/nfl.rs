mod common;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vclab::learners::{builtin, LookupTableLearner, BUILTIN_LEARNERS};
use vclab::nfl::{DEFAULT_CALL_BUDGET, EXTENDED_CALL_BUDGET};
use vclab::rational::{int, ratio};
use vclab::{build_nfl_instance, nfl_expected_errors, nfl_report, true_error, HypothesisSpace, LearningFunction, NflInstance, Rational};

fn brute_expected(learner: &dyn LearningFunction, inst: &NflInstance) -> Vec<Rational> {
    (0..inst.t())
        .map(|i| {
            let total: Rational = (0..inst.k())
                .map(|j| true_error(&learner.learn(&inst.multi_sample(i, j)).unwrap(), &inst.distributions[i]))
                .sum();
            total / int(inst.k() as i64)
        })
        .collect()
}

#[test]
fn builtins_match_brute_force() {
    for m in 1..=2 {
        let inst = build_nfl_instance(common::atoms(2 * m), m, None).unwrap();
        for name in BUILTIN_LEARNERS {
            let learner = builtin(name, inst.ambient()).unwrap();
            let got = nfl_expected_errors(learner.as_ref(), &inst, DEFAULT_CALL_BUDGET).unwrap();
            assert_eq!(got.expected, brute_expected(learner.as_ref(), &inst), "{name} m={m}");
            let report = nfl_report(learner.as_ref(), &inst, DEFAULT_CALL_BUDGET).unwrap();
            assert!(report.pass, "{name} m={m}");
            assert!(report.max_error >= ratio(1, 4));
            assert_eq!(report.opt_selected, int(0));
        }
    }
}

#[test]
fn constant_learner_errs_half_the_time() {
    let inst = build_nfl_instance(common::atoms(4), 2, None).unwrap();
    let c = builtin("const0", inst.ambient()).unwrap();
    let report = nfl_report(c.as_ref(), &inst, DEFAULT_CALL_BUDGET).unwrap();
    assert_eq!(report.average_error, ratio(1, 2));
    assert_eq!(report.max_error, int(1));
    assert_eq!(report.selected_labeling.to_string(), "1111");
}

#[test]
fn random_lookup_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let inst = build_nfl_instance(common::atoms(4), 2, None).unwrap();
    let hyps = common::listed(inst.ambient());
    for _ in 0..20 {
        let mut table = BTreeMap::new();
        for _ in 0..rng.random_range(0..40) {
            let i = rng.random_range(0..inst.t());
            let j = rng.random_range(0..inst.k());
            table.insert(inst.multi_sample(i, j), hyps[rng.random_range(0..hyps.len())].clone());
        }
        let l = LookupTableLearner::new(table, hyps[rng.random_range(0..hyps.len())].clone());
        let got = nfl_expected_errors(&l, &inst, DEFAULT_CALL_BUDGET).unwrap();
        assert_eq!(got.expected, brute_expected(&l, &inst));
        assert!(nfl_report(&l, &inst, DEFAULT_CALL_BUDGET).unwrap().pass);
    }
}

#[test]
fn works_on_a_shattered_subset_of_a_structured_class() {
    let inst = build_nfl_instance(common::ints([1, 2]), 1, Some(HypothesisSpace::intervals())).unwrap();
    let sem = builtin("sem", inst.ambient()).unwrap();
    assert!(nfl_report(sem.as_ref(), &inst, DEFAULT_CALL_BUDGET).unwrap().pass);
    assert!(build_nfl_instance(common::ints([1, 2]), 1, Some(HypothesisSpace::thresholds())).is_err());
}

#[test]
fn budgets() {
    let inst = build_nfl_instance(common::atoms(8), 4, None).unwrap();
    let c = builtin("const1", inst.ambient()).unwrap();
    assert!(matches!(
        nfl_expected_errors(c.as_ref(), &inst, DEFAULT_CALL_BUDGET),
        Err(vclab::Error::Budget { required: 1_048_576, .. })
    ));
    let report = nfl_report(c.as_ref(), &inst, EXTENDED_CALL_BUDGET).unwrap();
    assert!(report.pass);
    assert!(build_nfl_instance(common::atoms(3), 1, None).is_err());
    assert!(build_nfl_instance(vec![vclab::Instance::atom("a"); 2], 1, None).is_err());
}
