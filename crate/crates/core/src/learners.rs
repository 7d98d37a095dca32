//! Learning functions `A: ∪ₘ Zᵐ → H`: the sample-error minimizer, a few
//! fixed reference learners, and table-driven learners loaded from JSON.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, Labeling};
use crate::model::{empirical_opt, sample_error, Flagged, Instance, MultiSample};
use crate::rational::{self, Rational};
use crate::space::HypothesisSpace;

/// A deterministic map from multi-samples to hypotheses.
///
/// Learners see only the multi-sample, never the distribution it came from.
pub trait LearningFunction: Send + Sync {
    /// Short identifier used in reports (`sem`, `const0`, `table`, ...).
    fn name(&self) -> String;

    fn learn(&self, zbar: &MultiSample) -> Result<Hypothesis>;

    /// Declared bound on `êr(A(z̄)) − ôpt(z̄)` for samples of length `m`.
    /// `None` means the learner makes no such promise.
    fn slack(&self, _m: usize) -> Option<Rational> {
        None
    }

    /// Smallest `m` from which the declared slack is at most `eps`.
    fn m0_nmse(&self, _eps: &Rational) -> Option<u64> {
        None
    }
}

/// Selects, among the labelings `H` realizes on the sample's instances, one
/// of least sample error; ties go to the lexicographically least labeling and
/// then to its canonical witness.
#[derive(Clone, Debug)]
pub struct SemLearner {
    space: HypothesisSpace,
    declared_slack: Option<Rational>,
}

impl SemLearner {
    /// Requires an exact restriction oracle so that the output provably
    /// attains `ôpt`.
    pub fn new(space: HypothesisSpace) -> Result<Self> {
        if !space.has_exact_oracle() {
            return Err(Error::InexactOracle);
        }
        Ok(SemLearner {
            space,
            declared_slack: None,
        })
    }

    /// Wraps a space whose oracle may be inexact; the caller vouches for the
    /// resulting slack.
    pub fn with_declared_slack(space: HypothesisSpace, slack: Rational) -> Self {
        SemLearner {
            space,
            declared_slack: Some(slack),
        }
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }
}

fn labeling_error(labeling: &Labeling, instances: &[Instance], zbar: &MultiSample) -> usize {
    zbar.samples()
        .iter()
        .filter(|z| {
            let pos = instances.binary_search(&z.instance).expect("sample instance in canonical set");
            labeling.bits()[pos] != z.label
        })
        .count()
}

impl LearningFunction for SemLearner {
    fn name(&self) -> String {
        "sem".into()
    }

    fn learn(&self, zbar: &MultiSample) -> Result<Hypothesis> {
        let dich = self.space.realized_dichotomies(&zbar.instances())?;
        let mut best: Option<(usize, &Hypothesis)> = None;
        for (labeling, h) in dich.iter() {
            let err = labeling_error(labeling, &dich.instances, zbar);
            if best.is_none_or(|(e, _)| err < e) {
                best = Some((err, h));
            }
        }
        Ok(best.expect("a hypothesis space is never empty").1.clone())
    }

    fn slack(&self, _m: usize) -> Option<Rational> {
        Some(self.declared_slack.clone().unwrap_or_else(rational::zero))
    }

    fn m0_nmse(&self, eps: &Rational) -> Option<u64> {
        match &self.declared_slack {
            None => Some(1),
            Some(s) if s <= eps => Some(1),
            Some(_) => None,
        }
    }
}

/// Ignores the sample and always returns the same hypothesis.
#[derive(Clone, Debug)]
pub struct ConstantLearner {
    name: String,
    output: Hypothesis,
}

impl ConstantLearner {
    pub fn new(name: impl Into<String>, output: Hypothesis) -> Self {
        ConstantLearner {
            name: name.into(),
            output,
        }
    }

    pub fn zero() -> Self {
        ConstantLearner::new("const0", Hypothesis::constant(false))
    }

    pub fn one() -> Self {
        ConstantLearner::new("const1", Hypothesis::constant(true))
    }
}

impl LearningFunction for ConstantLearner {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn learn(&self, _zbar: &MultiSample) -> Result<Hypothesis> {
        Ok(self.output.clone())
    }
}

/// Labels each seen instance with the label of its first occurrence
/// (`flip = false`) or the opposite label (`flip = true`); unseen instances
/// get 0.
#[derive(Clone, Copy, Debug)]
pub struct MemorizingLearner {
    flip: bool,
}

impl MemorizingLearner {
    pub fn memorize() -> Self {
        MemorizingLearner { flip: false }
    }

    pub fn contrarian() -> Self {
        MemorizingLearner { flip: true }
    }
}

impl LearningFunction for MemorizingLearner {
    fn name(&self) -> String {
        if self.flip { "contrarian" } else { "memorize" }.into()
    }

    fn learn(&self, zbar: &MultiSample) -> Result<Hypothesis> {
        let mut first: BTreeMap<&Instance, bool> = BTreeMap::new();
        for z in zbar.samples() {
            first.entry(&z.instance).or_insert(z.label);
        }
        Ok(Hypothesis::indicator(
            first
                .into_iter()
                .filter(|&(_, y)| y != self.flip)
                .map(|(x, _)| x.clone()),
        ))
    }
}

/// An explicit map from multi-samples to hypotheses with a default for
/// samples not in the table.
#[derive(Clone, Debug)]
pub struct LookupTableLearner {
    table: BTreeMap<MultiSample, Hypothesis>,
    default: Hypothesis,
}

impl LookupTableLearner {
    pub fn new(table: BTreeMap<MultiSample, Hypothesis>, default: Hypothesis) -> Self {
        LookupTableLearner { table, default }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Reads `{"default": k, "entries": [{"sample": [[x, y], ...], "hypothesis": k}, ...]}`
    /// where each `k` indexes the listed hypotheses of `space`.
    pub fn from_json(value: &Value, space: &HypothesisSpace) -> Result<Self> {
        let listed = space
            .hypotheses()
            .ok_or_else(|| Error::InvalidInput("lookup tables need a space with listed hypotheses".into()))?;
        let pick = |v: &Value| -> Result<Hypothesis> {
            let k = v
                .as_u64()
                .ok_or_else(|| Error::InvalidInput(format!("hypothesis index expected, got {v}")))?;
            listed
                .get(k as usize)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("hypothesis index {k} out of range")))
        };
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidInput("lookup table must be a JSON object".into()))?;
        let default = pick(
            obj.get("default")
                .ok_or_else(|| Error::InvalidInput("lookup table needs a \"default\"".into()))?,
        )?;
        let mut table = BTreeMap::new();
        let entries = match obj.get("entries") {
            None => &[][..],
            Some(Value::Array(items)) => &items[..],
            Some(other) => return Err(Error::InvalidInput(format!("\"entries\" must be an array, got {other}"))),
        };
        for entry in entries {
            let sample: MultiSample = serde_json::from_value(
                entry
                    .get("sample")
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("table entry needs a \"sample\"".into()))?,
            )?;
            let h = pick(
                entry
                    .get("hypothesis")
                    .ok_or_else(|| Error::InvalidInput("table entry needs a \"hypothesis\"".into()))?,
            )?;
            if table.insert(sample.clone(), h).is_some() {
                return Err(Error::InvalidInput(format!("duplicate table entry for {sample:?}")));
            }
        }
        Ok(LookupTableLearner { table, default })
    }
}

impl LearningFunction for LookupTableLearner {
    fn name(&self) -> String {
        "table".into()
    }

    fn learn(&self, zbar: &MultiSample) -> Result<Hypothesis> {
        Ok(self.table.get(zbar).unwrap_or(&self.default).clone())
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_LEARNERS: [&str; 5] = ["sem", "const0", "const1", "memorize", "contrarian"];

/// Constructs a built-in learner by name; `sem` minimizes over `space`.
pub fn builtin(name: &str, space: &HypothesisSpace) -> Result<Arc<dyn LearningFunction>> {
    Ok(match name {
        "sem" => Arc::new(SemLearner::new(space.clone())?),
        "const0" => Arc::new(ConstantLearner::zero()),
        "const1" => Arc::new(ConstantLearner::one()),
        "memorize" => Arc::new(MemorizingLearner::memorize()),
        "contrarian" => Arc::new(MemorizingLearner::contrarian()),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown learner {other:?}; expected one of {}",
                BUILTIN_LEARNERS.join(", ")
            )))
        }
    })
}

/// One learner invocation with the quantities the harness records.
#[derive(Clone, Debug, Serialize)]
pub struct ApplyRecord {
    pub hypothesis: Hypothesis,
    pub m: usize,
    #[serde(serialize_with = "rational::text::serialize")]
    pub sample_error: Rational,
    #[serde(serialize_with = "rational::text::serialize")]
    pub empirical_opt: Rational,
    pub opt_exact: bool,
}

/// Runs the learner and reports `(m, êr(A(z̄)), ôpt_z̄(H))`.
pub fn apply(learner: &dyn LearningFunction, space: &HypothesisSpace, zbar: &MultiSample) -> Result<ApplyRecord> {
    let hypothesis = learner.learn(zbar)?;
    let Flagged { value, exact } = empirical_opt(space, zbar)?;
    Ok(ApplyRecord {
        sample_error: sample_error(&hypothesis, zbar),
        hypothesis,
        m: zbar.len(),
        empirical_opt: value,
        opt_exact: exact,
    })
}
