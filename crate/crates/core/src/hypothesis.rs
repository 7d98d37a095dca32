//! Hypotheses (binary classifiers with a canonical identity key) and
//! labelings of finite instance sets.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::{Backend, Formula};
use crate::model::Instance;
use crate::rational::{self, Rational};

/// Identity of a hypothesis inside its space. Keys are totally ordered; the
/// least key among equivalent witnesses is the canonical one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HypothesisKey {
    Constant(bool),
    Index(usize),
    Params(Vec<Rational>),
    /// Indicator of a finite set of instances.
    Positives(Vec<Instance>),
}

impl fmt::Display for HypothesisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisKey::Constant(b) => write!(f, "const{}", u8::from(*b)),
            HypothesisKey::Index(i) => write!(f, "#{i}"),
            HypothesisKey::Params(p) => {
                let parts: Vec<String> = p.iter().map(rational::format_rational).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            HypothesisKey::Positives(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

impl Serialize for HypothesisKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HypothesisKey::Index(i) => s.serialize_u64(*i as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone)]
pub(crate) enum Rule {
    Constant(bool),
    /// Indicator of a finite set; everything else is labeled 0.
    Table(Arc<BTreeSet<Instance>>),
    /// `1_{[t, ∞)}`
    Threshold(Rational),
    /// `1_{[a, b]}`
    Interval(Rational, Rational),
    /// `1_{R ∖ {w}}`
    CoSingleton(Rational),
    /// `1 iff w·x + b ≥ 0`
    Halfspace(Vec<Rational>, Rational),
    Formula {
        formula: Arc<Formula>,
        params: Vec<Rational>,
        backend: Backend,
    },
}

/// A total classifier `X → {0,1}`.
///
/// Instances outside a hypothesis's natural domain (an atom given to a
/// threshold, a point of the wrong dimension given to a halfspace, an
/// instance not listed in a finite table) are labeled 0.
#[derive(Clone)]
pub struct Hypothesis {
    key: HypothesisKey,
    rule: Rule,
}

impl Hypothesis {
    pub(crate) fn from_parts(key: HypothesisKey, rule: Rule) -> Self {
        Hypothesis { key, rule }
    }

    pub fn constant(label: bool) -> Self {
        Hypothesis::from_parts(HypothesisKey::Constant(label), Rule::Constant(label))
    }

    pub fn threshold(at: Rational) -> Self {
        Hypothesis::from_parts(HypothesisKey::Params(vec![at.clone()]), Rule::Threshold(at))
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        Hypothesis::from_parts(
            HypothesisKey::Params(vec![lo.clone(), hi.clone()]),
            Rule::Interval(lo, hi),
        )
    }

    pub fn co_singleton(hole: Rational) -> Self {
        Hypothesis::from_parts(HypothesisKey::Params(vec![hole.clone()]), Rule::CoSingleton(hole))
    }

    pub fn halfspace(weights: Vec<Rational>, bias: Rational) -> Self {
        let mut key = weights.clone();
        key.push(bias.clone());
        Hypothesis::from_parts(HypothesisKey::Params(key), Rule::Halfspace(weights, bias))
    }

    /// Hypothesis number `index` of a finite table, positive exactly on `positives`.
    pub fn table(index: usize, positives: impl IntoIterator<Item = Instance>) -> Self {
        Hypothesis::from_parts(
            HypothesisKey::Index(index),
            Rule::Table(Arc::new(positives.into_iter().collect())),
        )
    }

    /// Indicator of a finite instance set, keyed by the set itself.
    pub fn indicator(positives: impl IntoIterator<Item = Instance>) -> Self {
        let set: BTreeSet<Instance> = positives.into_iter().collect();
        Hypothesis::from_parts(
            HypothesisKey::Positives(set.iter().cloned().collect()),
            Rule::Table(Arc::new(set)),
        )
    }

    pub fn key(&self) -> &HypothesisKey {
        &self.key
    }

    pub fn eval(&self, x: &Instance) -> bool {
        match &self.rule {
            Rule::Constant(b) => *b,
            Rule::Table(pos) => pos.contains(x),
            Rule::Threshold(t) => x.as_scalar().is_some_and(|v| v >= t),
            Rule::Interval(a, b) => x.as_scalar().is_some_and(|v| a <= v && v <= b),
            Rule::CoSingleton(w) => x.as_scalar().is_some_and(|v| v != w),
            Rule::Halfspace(w, b) => match x.coords() {
                Some(c) if c.len() == w.len() => {
                    let dot: Rational = w.iter().zip(c).map(|(wi, ci)| wi * ci).sum();
                    dot + b >= rational::zero()
                }
                _ => false,
            },
            Rule::Formula {
                formula,
                params,
                backend,
            } => match x.coords() {
                Some(c) => formula.eval(c, params, *backend).unwrap_or(false),
                None => false,
            },
        }
    }

    /// Restriction to an ordered instance list.
    pub fn restrict(&self, instances: &[Instance]) -> Labeling {
        Labeling(instances.iter().map(|x| self.eval(x)).collect())
    }
}

impl PartialEq for Hypothesis {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Hypothesis {}

impl PartialOrd for Hypothesis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hypothesis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl Hash for Hypothesis {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.rule {
            Rule::Constant(_) => "constant",
            Rule::Table(_) => "table",
            Rule::Threshold(_) => "threshold",
            Rule::Interval(..) => "interval",
            Rule::CoSingleton(_) => "co-singleton",
            Rule::Halfspace(..) => "halfspace",
            Rule::Formula { .. } => "formula",
        };
        write!(f, "Hypothesis({kind} {})", self.key)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.key, f)
    }
}

impl Serialize for Hypothesis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.key.serialize(s)
    }
}

/// A labeling of an ordered instance list; prints as a bit string such as `"011"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labeling(pub Vec<bool>);

impl Labeling {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// All `2^n` labelings in lexicographic order (`00…0` first).
    pub fn all(n: usize) -> impl Iterator<Item = Labeling> {
        assert!(n < usize::BITS as usize, "too many points to enumerate labelings");
        (0usize..1 << n).map(move |code| Labeling::from_code(code, n))
    }

    /// Labeling whose first bit is the most significant bit of `code`.
    pub fn from_code(code: usize, n: usize) -> Labeling {
        Labeling((0..n).map(|i| (code >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn code(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Labeling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("bad bit {other:?} in labeling"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Labeling)
    }
}

impl Serialize for Labeling {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn labeling_codes_are_msb_first() {
        let all: Vec<String> = Labeling::all(2).map(|l| l.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!("101".parse::<Labeling>().unwrap().code(), 5);
        assert_eq!(Labeling::from_code(5, 3).to_string(), "101");
    }

    #[test]
    fn closed_form_rules() {
        let t = Hypothesis::threshold(int(2));
        assert!(t.eval(&Instance::int(3)));
        assert!(t.eval(&Instance::int(2)));
        assert!(!t.eval(&Instance::int(1)));
        assert!(!t.eval(&Instance::atom("a")));
        let c = Hypothesis::co_singleton(int(1));
        assert!(!c.eval(&Instance::int(1)));
        assert!(c.eval(&Instance::int(5)));
        let h = Hypothesis::halfspace(vec![int(1), int(-1)], int(0));
        assert!(h.eval(&Instance::point(vec![int(2), int(1)])));
        assert!(!h.eval(&Instance::point(vec![int(1), int(2)])));
        assert!(!h.eval(&Instance::int(1)));
    }
}
