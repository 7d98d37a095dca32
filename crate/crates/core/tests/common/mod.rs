#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use vclab::{Hypothesis, HypothesisSpace, Instance, Labeling, MultiSample, Sample};

pub fn atoms(n: usize) -> Vec<Instance> {
    (0..n).map(|i| Instance::atom(format!("x{i}"))).collect()
}

pub fn ints(xs: impl IntoIterator<Item = i64>) -> Vec<Instance> {
    xs.into_iter().map(Instance::int).collect()
}

/// A finite class with `rows` drawn uniformly from `{0,1}^domain`.
pub fn random_rows(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Labeling> {
    (0..count)
        .map(|_| Labeling((0..n).map(|_| rng.random_bool(0.5)).collect()))
        .collect()
}

pub fn random_class(rng: &mut ChaCha8Rng, max_points: usize, max_hyps: usize) -> (Vec<Instance>, Vec<Labeling>, HypothesisSpace) {
    let n = rng.random_range(1..=max_points);
    let count = rng.random_range(1..=max_hyps);
    let domain = atoms(n);
    let rows = random_rows(rng, n, count);
    let space = HypothesisSpace::finite(domain.clone(), rows.clone()).unwrap();
    (domain, rows, space)
}

pub fn random_sample(rng: &mut ChaCha8Rng, domain: &[Instance], m: usize) -> MultiSample {
    MultiSample::new(
        (0..m)
            .map(|_| Sample::new(domain[rng.random_range(0..domain.len())].clone(), rng.random_bool(0.5)))
            .collect(),
    )
    .unwrap()
}

/// The listed hypotheses of a finite space.
pub fn listed(space: &HypothesisSpace) -> Vec<Hypothesis> {
    space.hypotheses().expect("finite space")
}
