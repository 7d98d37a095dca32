//! JSON readers for hypothesis spaces, distributions and instance lists.
//!
//! Spaces are either the finite-explicit form
//! `{"instances": [...], "hypotheses": [[0, 1, ...], ...]}` or an object with
//! a `"kind"` naming a closed-form family or a formula:
//!
//! ```json
//! {"kind": "thresholds"}
//! {"kind": "halfspaces", "dim": 2}
//! {"kind": "full", "instances": ["a", "b"]}
//! {"kind": "formula", "formula": "x != p", "objects": ["x"], "params": ["p"],
//!  "backend": "exact", "source": {"grid": [[0, 1, 2]]}}
//! ```
//!
//! Distributions are `{"support": [[instance, label], ...], "weights": [...]}`
//! with weights as rational strings (`"1/3"`) or numbers; omitting
//! `"weights"` gives the uniform distribution.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::formula::{parse_formula, DefinableSpace, ParameterSource};
use crate::hypothesis::{Hypothesis, Labeling};
use crate::model::{DiscreteDistribution, Instance, Sample};
use crate::rational::{self, Rational};
use crate::space::HypothesisSpace;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| invalid(format!("missing field {name:?}")))
}

/// Reads a JSON array of instances.
pub fn instances_from_json(v: &Value) -> Result<Vec<Instance>> {
    v.as_array()
        .ok_or_else(|| invalid("expected an array of instances"))?
        .iter()
        .map(Instance::from_json)
        .collect()
}

/// Reads a rational from a string (`"1/3"`, `"0.25"`) or a JSON number,
/// whose decimal text is converted exactly.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse_rational(s),
        Value::Number(n) => rational::parse_rational(&n.to_string()),
        other => Err(invalid(format!("expected a rational, got {other}"))),
    }
}

fn rational_rows(v: &Value) -> Result<Vec<Vec<Rational>>> {
    v.as_array()
        .ok_or_else(|| invalid("expected an array of arrays of numbers"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| invalid(format!("expected an array of numbers, got {row}")))?
                .iter()
                .map(rational_from_json)
                .collect()
        })
        .collect()
}

fn bit(v: &Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
        other => Err(invalid(format!("expected a bit, got {other}"))),
    }
}

fn labeling_from_json(v: &Value) -> Result<Labeling> {
    match v {
        Value::String(s) => s.parse(),
        Value::Array(bits) => Ok(Labeling(bits.iter().map(bit).collect::<Result<_>>()?)),
        other => Err(invalid(format!("expected a bit vector, got {other}"))),
    }
}

fn strings(v: &Value) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| invalid("expected an array of names"))?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| invalid(format!("expected a name, got {s}")))
        })
        .collect()
}

fn parameter_source(v: Option<&Value>) -> Result<ParameterSource> {
    let Some(v) = v else {
        return Ok(ParameterSource::Unrestricted {
            budget: 100_000,
            seed: 0,
        });
    };
    let obj = v.as_object().ok_or_else(|| invalid("\"source\" must be an object"))?;
    if let Some(list) = obj.get("list") {
        return Ok(ParameterSource::List(rational_rows(list)?));
    }
    if let Some(grid) = obj.get("grid") {
        return Ok(ParameterSource::Grid(rational_rows(grid)?));
    }
    if let Some(u) = obj.get("unrestricted") {
        let get = |name: &str, default: u64| -> Result<u64> {
            match u.get(name) {
                None => Ok(default),
                Some(x) => x.as_u64().ok_or_else(|| invalid(format!("{name:?} must be a non-negative integer"))),
            }
        };
        return Ok(ParameterSource::Unrestricted {
            budget: get("budget", 100_000)?,
            seed: get("seed", 0)?,
        });
    }
    Err(invalid("\"source\" needs one of \"list\", \"grid\" or \"unrestricted\""))
}

/// Reads a hypothesis space in any of the supported JSON forms.
pub fn space_from_json(v: &Value) -> Result<HypothesisSpace> {
    let obj = v.as_object().ok_or_else(|| invalid("a space must be a JSON object"))?;
    let Some(kind) = obj.get("kind") else {
        let domain = instances_from_json(field(obj, "instances")?)?;
        let rows = field(obj, "hypotheses")?
            .as_array()
            .ok_or_else(|| invalid("\"hypotheses\" must be an array"))?
            .iter()
            .map(labeling_from_json)
            .collect::<Result<Vec<_>>>()?;
        return HypothesisSpace::finite(domain, rows);
    };
    let kind = kind.as_str().ok_or_else(|| invalid("\"kind\" must be a string"))?;
    match kind {
        "finite" | "finite-explicit" => {
            let mut rest = obj.clone();
            rest.remove("kind");
            space_from_json(&Value::Object(rest))
        }
        "thresholds" | "threshold-family" => Ok(HypothesisSpace::thresholds()),
        "intervals" | "interval-family" => Ok(HypothesisSpace::intervals()),
        "co-singletons" | "co-singleton-family" => Ok(HypothesisSpace::co_singletons()),
        "halfspaces" | "halfspace-family" => {
            let dim = field(obj, "dim")?
                .as_u64()
                .ok_or_else(|| invalid("\"dim\" must be a positive integer"))?;
            HypothesisSpace::halfspaces(dim as usize)
        }
        "full" => HypothesisSpace::full(instances_from_json(field(obj, "instances")?)?),
        "constants" => HypothesisSpace::explicit(vec![Hypothesis::constant(false), Hypothesis::constant(true)]),
        "formula" | "formula-defined" => {
            let text = field(obj, "formula")?
                .as_str()
                .ok_or_else(|| invalid("\"formula\" must be a string"))?;
            let objects = strings(field(obj, "objects")?)?;
            let params = match obj.get("params") {
                Some(p) => strings(p)?,
                None => Vec::new(),
            };
            let formula = parse_formula(text, &objects, &params)?;
            let backend = match obj.get("backend") {
                None if formula.uses_exp() => crate::formula::Backend::Float,
                None => crate::formula::Backend::Exact,
                Some(b) => b
                    .as_str()
                    .ok_or_else(|| invalid("\"backend\" must be a string"))?
                    .parse()?,
            };
            let source = parameter_source(obj.get("source"))?;
            Ok(HypothesisSpace::formula(DefinableSpace::new(formula, source, backend)?))
        }
        other => Err(invalid(format!("unknown space kind {other:?}"))),
    }
}

/// Builtin spaces by name: `thresholds`, `intervals`, `co-singletons`,
/// `halfspaces:N`, `constants`.
pub fn builtin_space(name: &str) -> Result<HypothesisSpace> {
    if let Some(dim) = name.strip_prefix("halfspaces:") {
        let dim = dim
            .parse::<usize>()
            .map_err(|_| invalid(format!("bad halfspace dimension in {name:?}")))?;
        return HypothesisSpace::halfspaces(dim);
    }
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::String(name.into()));
    match name {
        "thresholds" | "intervals" | "co-singletons" | "constants" => space_from_json(&Value::Object(obj)),
        other => Err(invalid(format!("unknown builtin space {other:?}"))),
    }
}

/// Reads a discrete distribution. Weights that sum to one only within
/// `1e-9` are renormalized exactly.
pub fn distribution_from_json(v: &Value) -> Result<DiscreteDistribution> {
    let obj = v.as_object().ok_or_else(|| invalid("a distribution must be a JSON object"))?;
    let support: Vec<Sample> = serde_json::from_value(field(obj, "support")?.clone())?;
    if support.is_empty() {
        return Err(Error::InvalidDistribution("empty support".into()));
    }
    let Some(weights) = obj.get("weights") else {
        return DiscreteDistribution::uniform(support);
    };
    let weights: Vec<Rational> = weights
        .as_array()
        .ok_or_else(|| invalid("\"weights\" must be an array"))?
        .iter()
        .map(rational_from_json)
        .collect::<Result<_>>()?;
    if weights.len() != support.len() {
        return Err(Error::LengthMismatch {
            left: support.len(),
            right: weights.len(),
        });
    }
    let total: Rational = weights.iter().sum();
    let gap = rational::to_f64(&(&total - rational::one())).abs();
    if total != rational::one() && gap <= 1e-9 && gap > 0.0 {
        return DiscreteDistribution::new(support.into_iter().zip(weights).map(|(z, w)| (z, w / &total)));
    }
    DiscreteDistribution::new(support.into_iter().zip(weights))
}

/// Writes a distribution in the form read by [`distribution_from_json`].
pub fn distribution_to_json(d: &DiscreteDistribution) -> Value {
    let support: Vec<Value> = d.atoms().iter().map(|(z, _)| serde_json::to_value(z).expect("sample")).collect();
    let weights: Vec<Value> = d
        .atoms()
        .iter()
        .map(|(_, w)| Value::String(rational::format_rational(w)))
        .collect();
    serde_json::json!({ "support": support, "weights": weights })
}
