//! Instances, labeled samples, multi-samples and finitely supported
//! distributions on the sample space `X × {0,1}`, together with the loss and
//! the error quantities every other module builds on.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::rational::{self, Rational};
use crate::space::HypothesisSpace;

/// An element of the instance space: either an opaque symbol or a point of
/// `Q^n`. The derived order (atoms first, then points lexicographically) is
/// the canonical order used for tie-breaking and enumeration.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Instance {
    Atom(String),
    Point(Vec<Rational>),
}

impl Instance {
    pub fn atom(name: impl Into<String>) -> Self {
        Instance::Atom(name.into())
    }

    pub fn scalar(x: Rational) -> Self {
        Instance::Point(vec![x])
    }

    pub fn int(x: i64) -> Self {
        Instance::Point(vec![rational::int(x)])
    }

    pub fn point(coords: Vec<Rational>) -> Self {
        Instance::Point(coords)
    }

    /// The coordinates, if this is a point.
    pub fn coords(&self) -> Option<&[Rational]> {
        match self {
            Instance::Point(c) => Some(c),
            Instance::Atom(_) => None,
        }
    }

    /// The single coordinate of a one-dimensional point.
    pub fn as_scalar(&self) -> Option<&Rational> {
        match self {
            Instance::Point(c) if c.len() == 1 => Some(&c[0]),
            _ => None,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Atom(a) => f.write_str(a),
            Instance::Point(c) if c.len() == 1 => f.write_str(&rational::format_rational(&c[0])),
            Instance::Point(c) => {
                f.write_str("(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(&rational::format_rational(x))?;
                }
                f.write_str(")")
            }
        }
    }
}

fn coord_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Ok(n) = q.numer().to_string().parse::<i64>() {
            return Value::from(n);
        }
    }
    Value::String(rational::format_rational(q))
}

fn coord_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => rational::parse_rational(&n.to_string()),
        Value::String(s) => rational::parse_rational(s),
        other => Err(Error::InvalidInput(format!("expected a number, got {other}"))),
    }
}

impl Instance {
    /// JSON form: atoms are strings, points are arrays of numbers or
    /// rational strings. A bare number is read as a one-dimensional point.
    pub fn to_json(&self) -> Value {
        match self {
            Instance::Atom(a) => Value::String(a.clone()),
            Instance::Point(c) => Value::Array(c.iter().map(coord_to_json).collect()),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Ok(Instance::Atom(s.clone())),
            Value::Number(_) => Ok(Instance::Point(vec![coord_from_json(v)?])),
            Value::Array(items) if !items.is_empty() => Ok(Instance::Point(
                items.iter().map(coord_from_json).collect::<Result<_>>()?,
            )),
            other => Err(Error::InvalidInput(format!("not an instance: {other}"))),
        }
    }
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Instance::from_json(&v).map_err(de::Error::custom)
    }
}

/// A labeled example `z = (x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sample {
    pub instance: Instance,
    pub label: bool,
}

impl Sample {
    pub fn new(instance: Instance, label: bool) -> Self {
        Sample { instance, label }
    }
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.instance, u8::from(self.label))
    }
}

impl Serialize for Sample {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.instance, u8::from(self.label)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sample {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (instance, label) = <(Instance, u8)>::deserialize(d)?;
        match label {
            0 | 1 => Ok(Sample::new(instance, label == 1)),
            other => Err(de::Error::custom(format!("label must be 0 or 1, got {other}"))),
        }
    }
}

/// An ordered, non-empty sequence of samples. Repeats are allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct MultiSample(Vec<Sample>);

impl MultiSample {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(MultiSample(samples))
    }

    pub fn samples(&self) -> &[Sample] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct instances appearing in the sample, in canonical order.
    pub fn instances(&self) -> Vec<Instance> {
        let mut v: Vec<Instance> = self.0.iter().map(|z| z.instance.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl<'de> Deserialize<'de> for MultiSample {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Sample>::deserialize(d)?;
        MultiSample::new(v).map_err(de::Error::custom)
    }
}

/// A finitely supported probability measure on `X × {0,1}`.
///
/// Atoms are stored in canonical sample order with strictly positive exact
/// weights summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteDistribution {
    atoms: Vec<(Sample, Rational)>,
}

impl DiscreteDistribution {
    /// Builds a distribution from exact weights. Repeated support points have
    /// their weights accumulated; zero weights are dropped.
    pub fn new(atoms: impl IntoIterator<Item = (Sample, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Sample, Rational> = BTreeMap::new();
        for (z, w) in atoms {
            if w.is_negative() {
                return Err(Error::InvalidDistribution(format!("negative weight at {z}")));
            }
            *merged.entry(z).or_insert_with(Rational::zero) += w;
        }
        merged.retain(|_, w| !w.is_zero());
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {}, not 1",
                rational::format_rational(&total)
            )));
        }
        Ok(DiscreteDistribution {
            atoms: merged.into_iter().collect(),
        })
    }

    /// Float weights are accepted when they sum to one within `1e-9`; they are
    /// then converted exactly and renormalized so the stored total is exactly one.
    pub fn from_f64_weights(atoms: impl IntoIterator<Item = (Sample, f64)>) -> Result<Self> {
        let atoms: Vec<(Sample, f64)> = atoms.into_iter().collect();
        let total: f64 = atoms.iter().map(|(_, w)| *w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("float weights sum to {total}")));
        }
        let exact: Vec<(Sample, Rational)> = atoms
            .into_iter()
            .map(|(z, w)| Ok((z, rational::from_f64(w)?)))
            .collect::<Result<_>>()?;
        let sum: Rational = exact.iter().map(|(_, w)| w.clone()).sum();
        DiscreteDistribution::new(exact.into_iter().map(|(z, w)| (z, w / &sum)))
    }

    /// The point mass `δ_z`.
    pub fn dirac(z: Sample) -> Self {
        DiscreteDistribution {
            atoms: vec![(z, Rational::one())],
        }
    }

    /// Equal weight on each listed sample (repeats accumulate).
    pub fn uniform(samples: impl IntoIterator<Item = Sample>) -> Result<Self> {
        let samples: Vec<Sample> = samples.into_iter().collect();
        if samples.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let w = rational::ratio(1, samples.len() as i64);
        DiscreteDistribution::new(samples.into_iter().map(|z| (z, w.clone())))
    }

    pub fn atoms(&self) -> &[(Sample, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &Sample> {
        self.atoms.iter().map(|(z, _)| z)
    }

    pub fn weight(&self, z: &Sample) -> Rational {
        self.atoms
            .binary_search_by(|(s, _)| s.cmp(z))
            .map(|i| self.atoms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Distinct instances of the support, canonical order.
    pub fn instances(&self) -> Vec<Instance> {
        let mut v: Vec<Instance> = self.atoms.iter().map(|(z, _)| z.instance.clone()).collect();
        v.dedup();
        v
    }
}

/// The zero-one loss: 1 iff `h` misclassifies `z`.
pub fn loss(h: &Hypothesis, z: &Sample) -> u8 {
    u8::from(h.eval(&z.instance) != z.label)
}

/// `(1/m) Σ loss(h, z_i)` as an exact rational `k/m`.
pub fn sample_error(h: &Hypothesis, zbar: &MultiSample) -> Rational {
    let mistakes = zbar.samples().iter().filter(|z| loss(h, z) == 1).count();
    rational::ratio(mistakes as i64, zbar.len() as i64)
}

/// `D(Z ∖ Γ(h))`: the mass of the misclassified support points.
pub fn true_error(h: &Hypothesis, dist: &DiscreteDistribution) -> Rational {
    dist.atoms()
        .iter()
        .filter(|(z, _)| loss(h, z) == 1)
        .map(|(_, w)| w)
        .sum()
}

/// `Σ (1/m) δ_{z_i}`.
pub fn empirical_distribution(zbar: &MultiSample) -> DiscreteDistribution {
    let w = rational::ratio(1, zbar.len() as i64);
    DiscreteDistribution::new(zbar.samples().iter().map(|z| (z.clone(), w.clone())))
        .expect("empirical weights sum to one")
}

/// A value that is exact when `exact` is set and otherwise only a one-sided
/// bound (the direction is documented by the producing operation).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flagged<T> {
    pub value: T,
    pub exact: bool,
}

/// `opt_D(H) = inf_h er_D(h)`, computed as a minimum over the dichotomies
/// realized on the support instances. When the oracle is inexact the value
/// is an upper bound.
pub fn approximation_error(space: &HypothesisSpace, dist: &DiscreteDistribution) -> Result<Flagged<Rational>> {
    let dich = space.realized_dichotomies(&dist.instances())?;
    let value = dich
        .iter()
        .map(|(_, h)| true_error(h, dist))
        .min()
        .expect("a hypothesis space is never empty");
    Ok(Flagged {
        value,
        exact: dich.exact,
    })
}

/// `ôpt_z̄(H)`, the minimal sample error. Upper bound when inexact.
pub fn empirical_opt(space: &HypothesisSpace, zbar: &MultiSample) -> Result<Flagged<Rational>> {
    let dich = space.realized_dichotomies(&zbar.instances())?;
    let value = dich
        .iter()
        .map(|(_, h)| sample_error(h, zbar))
        .min()
        .expect("a hypothesis space is never empty");
    Ok(Flagged {
        value,
        exact: dich.exact,
    })
}
