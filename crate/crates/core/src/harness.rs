//! The U and V statistics, the symmetrized deviation, and seeded Monte Carlo
//! or exact estimation of uniform-convergence and PAC success probabilities
//! over a discrete distribution.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypothesis::Labeling;
use crate::learners::LearningFunction;
use crate::model::{
    approximation_error, loss, true_error, DiscreteDistribution, Flagged, Instance, MultiSample, Sample,
};
use crate::rational::{self, Rational};
use crate::space::{Dichotomies, HypothesisSpace};

/// Largest number of multi-samples enumerated in exact mode.
pub const EXACT_STATE_LIMIT: u128 = 1_000_000;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Identifier of the per-trial seed derivation recorded in every report.
pub const SEED_RULE: &str = "chacha8(splitmix64(seed + splitmix64(trial)))";

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The seed of trial `trial` under master seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(trial)))
}

fn union_instances(parts: &[&[Instance]]) -> Vec<Instance> {
    let mut v: Vec<Instance> = parts.iter().flat_map(|p| p.iter().cloned()).collect();
    v.sort();
    v.dedup();
    v
}

fn abs_max(values: impl Iterator<Item = Rational>) -> Rational {
    values.map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
}

/// `U(z̄) = sup_h |er_D(h) − êr_z̄(h)|`, exact as a maximum over the
/// dichotomies on `support(D) ∪ instances(z̄)`. With an inexact oracle the
/// value is a lower bound.
pub fn u_statistic(space: &HypothesisSpace, dist: &DiscreteDistribution, zbar: &MultiSample) -> Result<Flagged<Rational>> {
    let a = union_instances(&[&dist.instances(), &zbar.instances()]);
    let dich = space.realized_dichotomies(&a)?;
    let value = abs_max(
        dich.iter()
            .map(|(_, h)| true_error(h, dist) - crate::model::sample_error(h, zbar)),
    );
    Ok(Flagged {
        value,
        exact: dich.exact,
    })
}

fn check_lengths(a: &MultiSample, b: &MultiSample) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// `V(z̄, z̄′) = sup_h |êr_z̄′(h) − êr_z̄(h)|`.
pub fn v_statistic(space: &HypothesisSpace, zbar: &MultiSample, zbar2: &MultiSample) -> Result<Flagged<Rational>> {
    check_lengths(zbar, zbar2)?;
    let a = union_instances(&[&zbar.instances(), &zbar2.instances()]);
    let dich = space.realized_dichotomies(&a)?;
    let value = abs_max(
        dich.iter()
            .map(|(_, h)| crate::model::sample_error(h, zbar2) - crate::model::sample_error(h, zbar)),
    );
    Ok(Flagged {
        value,
        exact: dich.exact,
    })
}

fn check_sigma(sigma: &[i8], m: usize) -> Result<()> {
    if sigma.len() != m {
        return Err(Error::LengthMismatch {
            left: m,
            right: sigma.len(),
        });
    }
    if let Some(bad) = sigma.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::InvalidInput(format!("sign vector entries must be +1 or -1, got {bad}")));
    }
    Ok(())
}

/// `V_h(σ) = (1/m) Σ σᵢ (ℓ(h, z′ᵢ) − ℓ(h, zᵢ))`, signed.
pub fn v_h(
    h: &crate::hypothesis::Hypothesis,
    zbar: &MultiSample,
    zbar2: &MultiSample,
    sigma: &[i8],
) -> Result<Rational> {
    check_lengths(zbar, zbar2)?;
    check_sigma(sigma, zbar.len())?;
    let total: i64 = zbar
        .samples()
        .iter()
        .zip(zbar2.samples())
        .zip(sigma)
        .map(|((z, z2), &s)| i64::from(s) * (i64::from(loss(h, z2)) - i64::from(loss(h, z))))
        .sum();
    Ok(rational::ratio(total, zbar.len() as i64))
}

/// `max_h |V_h(σ)|` over the dichotomies on the union of both samples.
pub fn symmetrized_deviation(
    space: &HypothesisSpace,
    zbar: &MultiSample,
    zbar2: &MultiSample,
    sigma: &[i8],
) -> Result<Flagged<Rational>> {
    check_lengths(zbar, zbar2)?;
    check_sigma(sigma, zbar.len())?;
    let a = union_instances(&[&zbar.instances(), &zbar2.instances()]);
    let dich = space.realized_dichotomies(&a)?;
    let mut best = Rational::zero();
    for (_, h) in dich.iter() {
        let v = v_h(h, zbar, zbar2, sigma)?.abs();
        if v > best {
            best = v;
        }
    }
    Ok(Flagged {
        value: best,
        exact: dich.exact,
    })
}

/// Mean of `V_h(σ)` over all `2^m` sign vectors, computed exactly.
pub fn sigma_mean(h: &crate::hypothesis::Hypothesis, zbar: &MultiSample, zbar2: &MultiSample) -> Result<Rational> {
    check_lengths(zbar, zbar2)?;
    let m = zbar.len();
    if m > 20 {
        return Err(Error::Budget {
            required: 1u128 << m,
            allowed: 1 << 20,
        });
    }
    let mut sum = Rational::zero();
    for code in 0..1usize << m {
        let sigma: Vec<i8> = Labeling::from_code(code, m)
            .bits()
            .iter()
            .map(|&b| if b { 1 } else { -1 })
            .collect();
        sum += v_h(h, zbar, zbar2, &sigma)?;
    }
    Ok(sum / rational::int(1i64 << m))
}

/// Wilson score interval at 95% for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Outcome of a seeded Monte Carlo estimate.
#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub m: usize,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci95: (f64, f64),
    pub seed: u64,
    pub seed_rule: &'static str,
}

impl TrialReport {
    fn new(m: usize, trials: u64, successes: u64, seed: u64) -> Self {
        TrialReport {
            m,
            trials,
            successes,
            estimate: successes as f64 / trials as f64,
            ci95: wilson_interval(successes, trials),
            seed,
            seed_rule: SEED_RULE,
        }
    }

    /// Binomial standard error `√(p(1−p)/n)` of the estimate.
    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}

/// Exact probability of a success event under `Dᵐ`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactReport {
    pub m: usize,
    /// Number of enumerated multi-samples, `|support|^m`.
    pub states: u64,
    #[serde(serialize_with = "rational::text::serialize")]
    pub probability: Rational,
    pub probability_f64: f64,
}

/// Inverse-CDF sampler over the canonically ordered support.
struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(dist: &DiscreteDistribution) -> Self {
        let mut acc = Rational::zero();
        let mut cdf: Vec<f64> = dist
            .atoms()
            .iter()
            .map(|(_, w)| {
                acc += w;
                rational::to_f64(&acc)
            })
            .collect();
        *cdf.last_mut().expect("non-empty support") = 1.0;
        Sampler { cdf }
    }

    fn draw(&self, m: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..m)
            .map(|_| {
                let u: f64 = rng.random();
                self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
            })
            .collect()
    }
}

fn check_trials(m: usize, trials: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    Ok(())
}

/// `U` as a function of per-atom counts, with the dichotomies on the support
/// computed once.
struct UcpEvaluator {
    /// For each realized labeling: which support atoms it misclassifies.
    mistakes: Vec<Vec<bool>>,
    /// `er_D` of each realized labeling.
    errors: Vec<Rational>,
    exact: bool,
}

impl UcpEvaluator {
    fn new(space: &HypothesisSpace, dist: &DiscreteDistribution) -> Result<Self> {
        let dich: Dichotomies = space.realized_dichotomies(&dist.instances())?;
        let mut mistakes = Vec::with_capacity(dich.len());
        let mut errors = Vec::with_capacity(dich.len());
        for labeling in dich.labelings() {
            let row: Vec<bool> = dist
                .atoms()
                .iter()
                .map(|(z, _)| {
                    let pos = dich
                        .instances
                        .binary_search(&z.instance)
                        .expect("support instance in canonical set");
                    labeling.bits()[pos] != z.label
                })
                .collect();
            let er: Rational = row
                .iter()
                .zip(dist.atoms())
                .filter(|(&wrong, _)| wrong)
                .map(|(_, (_, w))| w.clone())
                .sum();
            mistakes.push(row);
            errors.push(er);
        }
        Ok(UcpEvaluator {
            mistakes,
            errors,
            exact: dich.exact,
        })
    }

    fn u(&self, counts: &[u64], m: usize) -> Rational {
        let m = BigInt::from(m);
        abs_max(self.mistakes.iter().zip(&self.errors).map(|(row, er)| {
            let k: u64 = row.iter().zip(counts).filter(|(&w, _)| w).map(|(_, &c)| c).sum();
            er - Rational::new(BigInt::from(k), m.clone())
        }))
    }
}

fn counts_of(indices: &[usize], n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n];
    for &i in indices {
        c[i] += 1;
    }
    c
}

/// Monte Carlo estimate of `Dᵐ({z̄ : U(z̄) ≤ ε})`. Trials run in parallel;
/// each trial draws from its own seed, so the count does not depend on
/// scheduling.
pub fn estimate_ucp_probability(
    space: &HypothesisSpace,
    dist: &DiscreteDistribution,
    m: usize,
    eps: &Rational,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    check_trials(m, trials)?;
    let eval = UcpEvaluator::new(space, dist)?;
    if !eval.exact {
        return Err(Error::InexactOracle);
    }
    let sampler = Sampler::new(dist);
    let n = dist.atoms().len();
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let idx = sampler.draw(m, trial_seed(seed, t));
            eval.u(&counts_of(&idx, n), m) <= *eps
        })
        .count() as u64;
    Ok(TrialReport::new(m, trials, successes, seed))
}

fn state_count(support: usize, m: usize) -> Result<u64> {
    let required = (support as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if required > EXACT_STATE_LIMIT {
        return Err(Error::Budget {
            required,
            allowed: EXACT_STATE_LIMIT,
        });
    }
    Ok(required as u64)
}

/// Index tuple number `code` of `{0..n}^m` in lexicographic order.
pub(crate) fn tuple_of(mut code: u64, n: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0usize; m];
    for slot in out.iter_mut().rev() {
        *slot = (code % n as u64) as usize;
        code /= n as u64;
    }
    out
}

fn tuple_weight(dist: &DiscreteDistribution, idx: &[usize]) -> Rational {
    idx.iter().fold(Rational::one(), |acc, &i| acc * &dist.atoms()[i].1)
}

fn exact_probability(
    dist: &DiscreteDistribution,
    m: usize,
    success: impl Fn(&[usize]) -> Result<bool> + Sync,
) -> Result<ExactReport> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    let n = dist.atoms().len();
    let states = state_count(n, m)?;
    let probability = (0..states)
        .into_par_iter()
        .map(|code| {
            let idx = tuple_of(code, n, m);
            Ok::<Rational, Error>(if success(&idx)? {
                tuple_weight(dist, &idx)
            } else {
                Rational::zero()
            })
        })
        .try_reduce(Rational::zero, |a, b| Ok(a + b))?;
    Ok(ExactReport {
        m,
        states,
        probability_f64: rational::to_f64(&probability),
        probability,
    })
}

/// `Dᵐ({z̄ : U(z̄) ≤ ε})` by enumerating all `|support|^m` multi-samples.
pub fn exact_ucp_probability(
    space: &HypothesisSpace,
    dist: &DiscreteDistribution,
    m: usize,
    eps: &Rational,
) -> Result<ExactReport> {
    let eval = UcpEvaluator::new(space, dist)?;
    if !eval.exact {
        return Err(Error::InexactOracle);
    }
    let n = dist.atoms().len();
    exact_probability(dist, m, |idx| Ok(eval.u(&counts_of(idx, n), m) <= *eps))
}

fn multi_sample(dist: &DiscreteDistribution, idx: &[usize]) -> MultiSample {
    let samples: Vec<Sample> = idx.iter().map(|&i| dist.atoms()[i].0.clone()).collect();
    MultiSample::new(samples).expect("m >= 1")
}

fn exact_opt(space: &HypothesisSpace, dist: &DiscreteDistribution) -> Result<Rational> {
    let opt = approximation_error(space, dist)?;
    if !opt.exact {
        return Err(Error::InexactOracle);
    }
    Ok(opt.value)
}

/// Monte Carlo estimate of `Dᵐ({z̄ : er_D(A(z̄)) − opt_D(H) ≤ ε})`.
pub fn estimate_pac_probability(
    learner: &dyn LearningFunction,
    space: &HypothesisSpace,
    dist: &DiscreteDistribution,
    m: usize,
    eps: &Rational,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    check_trials(m, trials)?;
    let opt = exact_opt(space, dist)?;
    let sampler = Sampler::new(dist);
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let zbar = multi_sample(dist, &sampler.draw(m, trial_seed(seed, t)));
            let h = learner.learn(&zbar)?;
            Ok(true_error(&h, dist) - &opt <= *eps)
        })
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|&&ok| ok).count() as u64;
    Ok(TrialReport::new(m, trials, successes, seed))
}

/// `Dᵐ({z̄ : er_D(A(z̄)) − opt_D(H) ≤ ε})` by full enumeration.
pub fn exact_pac_probability(
    learner: &dyn LearningFunction,
    space: &HypothesisSpace,
    dist: &DiscreteDistribution,
    m: usize,
    eps: &Rational,
) -> Result<ExactReport> {
    let opt = exact_opt(space, dist)?;
    exact_probability(dist, m, |idx| {
        let h = learner.learn(&multi_sample(dist, idx))?;
        Ok(true_error(&h, dist) - &opt <= *eps)
    })
}

/// Draws the multi-sample of trial `trial`; exposed so callers can replay a
/// single trial of a report.
pub fn draw_multi_sample(dist: &DiscreteDistribution, m: usize, seed: u64, trial: u64) -> Result<MultiSample> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    Ok(multi_sample(dist, &Sampler::new(dist).draw(m, trial_seed(seed, trial))))
}
