//! The No-Free-Lunch construction on a shattered set `S` of size `2m`: all
//! `T = 2^{2m}` labelings `f_i`, the distributions `D_i` uniform on the graph
//! of `f_i`, and exact expected errors of a learner over all `(2m)^m`
//! instance tuples.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{shatters, ShatterVerdict};
use crate::error::{Error, Result};
use crate::harness::tuple_of;
use crate::hypothesis::Labeling;
use crate::learners::LearningFunction;
use crate::model::{approximation_error, DiscreteDistribution, Instance, MultiSample, Sample};
use crate::rational::{self, Rational};
use crate::space::HypothesisSpace;

/// Learner-call budget that admits `m ≤ 3` (`6³·2⁶ = 13 824` calls).
pub const DEFAULT_CALL_BUDGET: u128 = 13_824;

/// Learner-call budget that admits `m = 4` (`8⁴·2⁸ = 1 048 576` calls).
pub const EXTENDED_CALL_BUDGET: u128 = 1_048_576;

#[derive(Clone, Debug)]
pub struct NflInstance {
    pub m: usize,
    pub points: Vec<Instance>,
    /// `f_0, …, f_{T−1}` in lexicographic bit order; bit `r` labels `points[r]`.
    pub labelings: Vec<Labeling>,
    pub distributions: Vec<DiscreteDistribution>,
    ambient: HypothesisSpace,
}

impl NflInstance {
    /// `T = 2^{2m}`.
    pub fn t(&self) -> usize {
        self.labelings.len()
    }

    /// `k = (2m)^m`.
    pub fn k(&self) -> u64 {
        (2 * self.m as u64).pow(self.m as u32)
    }

    /// Learner invocations needed for a full enumeration, `k·T`.
    pub fn learner_calls(&self) -> u128 {
        self.k() as u128 * self.t() as u128
    }

    pub fn ambient(&self) -> &HypothesisSpace {
        &self.ambient
    }

    /// The labeled multi-sample `z̄ⱼⁱ`: tuple `j` of `S^m` labeled by `f_i`.
    pub fn multi_sample(&self, i: usize, j: u64) -> MultiSample {
        let f = self.labelings[i].bits();
        let samples = tuple_of(j, self.points.len(), self.m)
            .into_iter()
            .map(|r| Sample::new(self.points[r].clone(), f[r]))
            .collect();
        MultiSample::new(samples).expect("m >= 1")
    }
}

/// Builds the construction on the ordered set `points`. When `ambient` is
/// given it must shatter the set; otherwise the full class `{0,1}^S` is used.
pub fn build_nfl_instance(points: Vec<Instance>, m: usize, ambient: Option<HypothesisSpace>) -> Result<NflInstance> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    if points.len() != 2 * m {
        return Err(Error::InvalidInput(format!(
            "the construction needs |S| = 2m = {}, got {}",
            2 * m,
            points.len()
        )));
    }
    if m > 8 {
        return Err(Error::Budget {
            required: 1u128 << (2 * m),
            allowed: 1 << 16,
        });
    }
    let mut sorted = points.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != points.len() {
        return Err(Error::InvalidInput("the points of S must be distinct".into()));
    }
    let ambient = match ambient {
        Some(space) => {
            match shatters(&space, &points)? {
                ShatterVerdict::Shattered(_) => {}
                ShatterVerdict::NotShattered => {
                    return Err(Error::InvalidInput("the hypothesis space does not shatter S".into()))
                }
                ShatterVerdict::NotFound => {
                    return Err(Error::InvalidInput("no shattering witnesses found for S".into()))
                }
            }
            space
        }
        None => HypothesisSpace::full(points.clone())?,
    };
    let labelings: Vec<Labeling> = Labeling::all(2 * m).collect();
    let w = rational::ratio(1, 2 * m as i64);
    let distributions = labelings
        .iter()
        .map(|f| {
            DiscreteDistribution::new(
                points
                    .iter()
                    .zip(f.bits())
                    .map(|(x, &y)| (Sample::new(x.clone(), y), w.clone())),
            )
        })
        .collect::<Result<_>>()?;
    Ok(NflInstance {
        m,
        points,
        labelings,
        distributions,
        ambient,
    })
}

/// Per-labeling results of the full enumeration.
#[derive(Clone, Debug)]
pub struct NflEnumeration {
    /// `E_i = (1/k) Σⱼ er_{D_i}(A(z̄ⱼⁱ))`.
    pub expected: Vec<Rational>,
    /// `outputs[i][j]`: the learner's restriction to `S` on `z̄ⱼⁱ`, bit `r`
    /// of the mask standing for `points[r]`.
    pub outputs: Vec<Vec<u16>>,
}

fn mask_of(labeling: &Labeling) -> u16 {
    labeling
        .bits()
        .iter()
        .enumerate()
        .fold(0, |acc, (r, &b)| acc | (u16::from(b) << r))
}

/// Computes every `E_i` exactly, refusing when `k·T` exceeds `budget`.
///
/// For each tuple `j` and each point `v_r` not occurring in it, the learner
/// sees identical input under `f_i` and under `f_i` with bit `r` flipped, so
/// exactly half of the labelings disagree with the output at `v_r`. This is
/// checked for every `(j, r)` and a violation is returned as an error.
pub fn nfl_expected_errors(
    learner: &dyn LearningFunction,
    inst: &NflInstance,
    budget: u128,
) -> Result<NflEnumeration> {
    let calls = inst.learner_calls();
    if calls > budget {
        return Err(Error::Budget {
            required: calls,
            allowed: budget,
        });
    }
    let k = inst.k();
    let t = inst.t();
    let n = inst.points.len();
    let outputs: Vec<Vec<u16>> = (0..t)
        .into_par_iter()
        .map(|i| {
            (0..k)
                .map(|j| {
                    let h = learner.learn(&inst.multi_sample(i, j))?;
                    Ok(mask_of(&h.restrict(&inst.points)))
                })
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<_>>()?;

    let f_masks: Vec<u16> = inst.labelings.iter().map(mask_of).collect();
    (0..k).into_par_iter().try_for_each(|j| {
        let seen = tuple_of(j, n, inst.m).into_iter().fold(0u16, |acc, r| acc | (1 << r));
        for r in (0..n).filter(|r| seen & (1 << r) == 0) {
            let count = (0..t)
                .filter(|&i| (f_masks[i] ^ outputs[i][j as usize]) & (1 << r) != 0)
                .count();
            if count != t / 2 {
                return Err(Error::PairingIdentity {
                    tuple: j as usize,
                    point: r,
                    count,
                    expected: t / 2,
                });
            }
        }
        Ok(())
    })?;

    let denom = num_bigint::BigInt::from(k) * num_bigint::BigInt::from(n);
    let expected = (0..t)
        .map(|i| {
            let wrong: u64 = outputs[i]
                .iter()
                .map(|&o| u64::from((o ^ f_masks[i]).count_ones()))
                .sum();
            Rational::new(wrong.into(), denom.clone())
        })
        .collect();
    Ok(NflEnumeration { expected, outputs })
}

#[derive(Clone, Debug, Serialize)]
pub struct NflReport {
    pub learner: String,
    pub m: usize,
    pub t: usize,
    pub k: u64,
    #[serde(serialize_with = "rational::text::serialize_vec")]
    pub expected_errors: Vec<Rational>,
    #[serde(serialize_with = "rational::text::serialize")]
    pub average_error: Rational,
    #[serde(serialize_with = "rational::text::serialize")]
    pub max_error: Rational,
    /// Index of the first labeling attaining the maximum.
    pub selected: usize,
    pub selected_labeling: Labeling,
    /// `D_i^m({z̄ : er_{D_i}(A(z̄)) > 1/8})` for the selected `i`.
    #[serde(serialize_with = "rational::text::serialize")]
    pub prob_error_above_eighth: Rational,
    /// `(E_i − 1/8)/(7/8)`, the Markov lower bound for that probability.
    #[serde(serialize_with = "rational::text::serialize")]
    pub markov_lower_bound: Rational,
    #[serde(serialize_with = "rational::text::serialize")]
    pub opt_selected: Rational,
    pub max_at_least_quarter: bool,
    pub average_at_least_quarter: bool,
    pub markov_holds: bool,
    pub prob_at_least_seventh: bool,
    pub opt_is_zero: bool,
    pub pass: bool,
}

/// Runs the enumeration and checks the lower bounds `max E_i ≥ 1/4`,
/// `P(er > 1/8) ≥ 1/7` and the Markov step for the maximizing labeling.
pub fn nfl_report(learner: &dyn LearningFunction, inst: &NflInstance, budget: u128) -> Result<NflReport> {
    let en = nfl_expected_errors(learner, inst, budget)?;
    let t = inst.t();
    let k = inst.k();
    let n = inst.points.len() as u32;
    let (selected, max_error) = en
        .expected
        .iter()
        .enumerate()
        .fold(None::<(usize, &Rational)>, |best, (i, e)| match best {
            Some((_, b)) if b >= e => best,
            _ => Some((i, e)),
        })
        .map(|(i, e)| (i, e.clone()))
        .expect("T >= 4");
    let average_error: Rational =
        en.expected.iter().fold(Rational::zero(), |a, e| a + e) / rational::int(t as i64);

    let f = mask_of(&inst.labelings[selected]);
    // er > 1/8 ⇔ 8·wrong > 2m
    let above = en.outputs[selected]
        .iter()
        .filter(|&&o| 8 * (o ^ f).count_ones() > n)
        .count();
    let prob = rational::ratio(above as i64, k as i64);
    let eighth = rational::ratio(1, 8);
    let markov_lower_bound = (&max_error - &eighth) / rational::ratio(7, 8);
    let quarter = rational::ratio(1, 4);

    let opt = approximation_error(&inst.ambient, &inst.distributions[selected])?;
    let opt_is_zero = opt.exact && opt.value.is_zero();

    let max_ok = max_error >= quarter;
    let avg_ok = average_error >= quarter;
    let markov_ok = prob >= markov_lower_bound;
    let seventh_ok = prob >= rational::ratio(1, 7);
    Ok(NflReport {
        learner: learner.name(),
        m: inst.m,
        t,
        k,
        expected_errors: en.expected,
        average_error,
        max_error,
        selected,
        selected_labeling: inst.labelings[selected].clone(),
        prob_error_above_eighth: prob,
        markov_lower_bound,
        opt_selected: opt.value,
        max_at_least_quarter: max_ok,
        average_at_least_quarter: avg_ok,
        markov_holds: markov_ok,
        prob_at_least_seventh: seventh_ok,
        opt_is_zero,
        pass: max_ok && avg_ok && markov_ok && seventh_ok && opt_is_zero,
    })
}
