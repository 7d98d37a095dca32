//! Hypothesis spaces and their finite-restriction oracle `H|_A`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::DefinableSpace;
use crate::hypothesis::{Hypothesis, Labeling};
use crate::linsep;
use crate::model::Instance;
use crate::rational::{self, Rational};

/// Largest number of in-domain points for which halfspace labelings are
/// enumerated (each labeling is one exact feasibility problem).
pub const HALFSPACE_POINT_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    FiniteExplicit,
    ThresholdFamily,
    IntervalFamily,
    HalfspaceFamily,
    CoSingletonFamily,
    FormulaDefined,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceKind::FiniteExplicit => "finite-explicit",
            SpaceKind::ThresholdFamily => "threshold-family",
            SpaceKind::IntervalFamily => "interval-family",
            SpaceKind::HalfspaceFamily => "halfspace-family",
            SpaceKind::CoSingletonFamily => "co-singleton-family",
            SpaceKind::FormulaDefined => "formula-defined",
        };
        f.write_str(s)
    }
}

#[derive(Clone)]
enum Inner {
    Finite {
        domain: Option<Vec<Instance>>,
        hypotheses: Vec<Hypothesis>,
    },
    Thresholds,
    Intervals,
    CoSingletons,
    Halfspaces {
        dim: usize,
    },
    Formula(Arc<DefinableSpace>),
}

/// A non-empty family of classifiers together with its restriction oracle.
#[derive(Clone)]
pub struct HypothesisSpace {
    inner: Inner,
}

/// The labelings a space realizes on a finite instance set, each with a
/// witness hypothesis. When `exact` is false the map is a verified subset of
/// `H|_A` rather than all of it.
#[derive(Clone, Debug)]
pub struct Dichotomies {
    pub instances: Vec<Instance>,
    pub witnesses: BTreeMap<Labeling, Hypothesis>,
    pub exact: bool,
}

impl Dichotomies {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn contains(&self, labeling: &Labeling) -> bool {
        self.witnesses.contains_key(labeling)
    }

    /// Labelings in lexicographic order with their canonical witnesses.
    pub fn iter(&self) -> impl Iterator<Item = (&Labeling, &Hypothesis)> {
        self.witnesses.iter()
    }

    pub fn labelings(&self) -> impl Iterator<Item = &Labeling> {
        self.witnesses.keys()
    }

    pub(crate) fn insert_canonical(&mut self, labeling: Labeling, h: Hypothesis) {
        match self.witnesses.get(&labeling) {
            Some(existing) if existing <= &h => {}
            _ => {
                self.witnesses.insert(labeling, h);
            }
        }
    }
}

/// Sorts and deduplicates an instance set into canonical order.
pub fn canonical_set(instances: &[Instance]) -> Result<Vec<Instance>> {
    if instances.is_empty() {
        return Err(Error::EmptyInstanceSet);
    }
    let mut v = instances.to_vec();
    v.sort();
    v.dedup();
    Ok(v)
}

impl HypothesisSpace {
    /// Finite space over an explicit domain; row `i` is hypothesis `i` as a
    /// bit-vector aligned with `domain`. Duplicate rows are kept (they are
    /// distinct hypotheses with equal behaviour).
    pub fn finite(domain: Vec<Instance>, rows: Vec<Labeling>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("a hypothesis space must be non-empty".into()));
        }
        let mut seen = domain.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != domain.len() {
            return Err(Error::InvalidInput("duplicate instances in domain".into()));
        }
        let mut hypotheses = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != domain.len() {
                return Err(Error::Arity {
                    expected: domain.len(),
                    got: row.len(),
                });
            }
            let positives = domain
                .iter()
                .zip(row.bits())
                .filter(|(_, &b)| b)
                .map(|(x, _)| x.clone());
            hypotheses.push(Hypothesis::table(i, positives));
        }
        Ok(HypothesisSpace {
            inner: Inner::Finite {
                domain: Some(domain),
                hypotheses,
            },
        })
    }

    /// Finite space from arbitrary hypotheses (e.g. `{constant-0, constant-1}`).
    pub fn explicit(hypotheses: Vec<Hypothesis>) -> Result<Self> {
        if hypotheses.is_empty() {
            return Err(Error::InvalidInput("a hypothesis space must be non-empty".into()));
        }
        Ok(HypothesisSpace {
            inner: Inner::Finite {
                domain: None,
                hypotheses,
            },
        })
    }

    /// The full class `{0,1}^X` over a finite domain; hypothesis `i` is the
    /// labeling whose bit string read most-significant-first is `i`.
    pub fn full(domain: Vec<Instance>) -> Result<Self> {
        if domain.len() > 16 {
            return Err(Error::Budget {
                required: 1u128 << domain.len(),
                allowed: 1 << 16,
            });
        }
        let n = domain.len();
        HypothesisSpace::finite(domain, Labeling::all(n).collect())
    }

    pub fn thresholds() -> Self {
        HypothesisSpace {
            inner: Inner::Thresholds,
        }
    }

    pub fn intervals() -> Self {
        HypothesisSpace {
            inner: Inner::Intervals,
        }
    }

    pub fn co_singletons() -> Self {
        HypothesisSpace {
            inner: Inner::CoSingletons,
        }
    }

    pub fn halfspaces(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("halfspace dimension must be at least 1".into()));
        }
        Ok(HypothesisSpace {
            inner: Inner::Halfspaces { dim },
        })
    }

    pub(crate) fn formula(space: DefinableSpace) -> Self {
        HypothesisSpace {
            inner: Inner::Formula(Arc::new(space)),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match &self.inner {
            Inner::Finite { .. } => SpaceKind::FiniteExplicit,
            Inner::Thresholds => SpaceKind::ThresholdFamily,
            Inner::Intervals => SpaceKind::IntervalFamily,
            Inner::CoSingletons => SpaceKind::CoSingletonFamily,
            Inner::Halfspaces { .. } => SpaceKind::HalfspaceFamily,
            Inner::Formula(_) => SpaceKind::FormulaDefined,
        }
    }

    /// Whether `realized_dichotomies` is exact on every finite set.
    pub fn has_exact_oracle(&self) -> bool {
        match &self.inner {
            Inner::Formula(f) => f.has_exact_oracle(),
            _ => true,
        }
    }

    /// The listed hypotheses of a finite space (or of a formula space's
    /// parameter source).
    pub fn hypotheses(&self) -> Option<Vec<Hypothesis>> {
        match &self.inner {
            Inner::Finite { hypotheses, .. } => Some(hypotheses.clone()),
            Inner::Formula(f) => f.listed_hypotheses(),
            _ => None,
        }
    }

    /// Declared domain of a finite table space.
    pub fn domain(&self) -> Option<&[Instance]> {
        match &self.inner {
            Inner::Finite { domain, .. } => domain.as_deref(),
            _ => None,
        }
    }

    /// VC dimension over the whole instance space, when known in closed form.
    pub fn known_vc(&self) -> Option<usize> {
        match &self.inner {
            Inner::Thresholds | Inner::CoSingletons => Some(1),
            Inner::Intervals => Some(2),
            Inner::Halfspaces { dim } => Some(dim + 1),
            Inner::Formula(f) => f.known_vc(),
            Inner::Finite { .. } => None,
        }
    }

    /// `H|_A` with one canonical witness per labeling. Labelings are aligned
    /// with the canonical (sorted, deduplicated) order of `A`.
    pub fn realized_dichotomies(&self, instances: &[Instance]) -> Result<Dichotomies> {
        let instances = canonical_set(instances)?;
        let mut out = Dichotomies {
            instances: instances.clone(),
            witnesses: BTreeMap::new(),
            exact: true,
        };
        match &self.inner {
            Inner::Finite { hypotheses, .. } => {
                for h in hypotheses {
                    out.insert_canonical(h.restrict(&instances), h.clone());
                }
            }
            Inner::Thresholds => {
                for h in threshold_witnesses(&instances) {
                    out.insert_canonical(h.restrict(&instances), h);
                }
            }
            Inner::Intervals => {
                for h in interval_witnesses(&instances) {
                    out.insert_canonical(h.restrict(&instances), h);
                }
            }
            Inner::CoSingletons => {
                for h in co_singleton_witnesses(&instances) {
                    out.insert_canonical(h.restrict(&instances), h);
                }
            }
            Inner::Halfspaces { dim } => {
                for h in halfspace_witnesses(&instances, *dim)? {
                    out.insert_canonical(h.restrict(&instances), h);
                }
            }
            Inner::Formula(f) => return f.realized_dichotomies(&instances),
        }
        Ok(out)
    }
}

impl fmt::Debug for HypothesisSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            Inner::Finite { hypotheses, .. } => write!(f, "HypothesisSpace(finite, {} hypotheses)", hypotheses.len()),
            Inner::Halfspaces { dim } => write!(f, "HypothesisSpace(halfspaces in dimension {dim})"),
            _ => write!(f, "HypothesisSpace({})", self.kind()),
        }
    }
}

/// Distinct one-dimensional coordinates among `instances`, ascending.
fn scalars(instances: &[Instance]) -> Vec<Rational> {
    let mut v: Vec<Rational> = instances.iter().filter_map(|x| x.as_scalar().cloned()).collect();
    v.sort();
    v.dedup();
    v
}

fn beyond(points: &[Rational]) -> Rational {
    points.last().map_or_else(rational::zero, |m| m + Rational::one())
}

/// Thresholds on sorted points realize exactly the suffix labelings.
pub(crate) fn threshold_witnesses(instances: &[Instance]) -> Vec<Hypothesis> {
    let s = scalars(instances);
    let mut out: Vec<Hypothesis> = s.iter().cloned().map(Hypothesis::threshold).collect();
    out.push(Hypothesis::threshold(beyond(&s)));
    out
}

/// Contiguous blocks plus the empty labeling.
pub(crate) fn interval_witnesses(instances: &[Instance]) -> Vec<Hypothesis> {
    let s = scalars(instances);
    let mut out = Vec::new();
    for i in 0..s.len() {
        for j in i..s.len() {
            out.push(Hypothesis::interval(s[i].clone(), s[j].clone()));
        }
    }
    let b = beyond(&s);
    out.push(Hypothesis::interval(b.clone(), b));
    out
}

/// All-ones plus every single hole.
pub(crate) fn co_singleton_witnesses(instances: &[Instance]) -> Vec<Hypothesis> {
    let s = scalars(instances);
    let mut out: Vec<Hypothesis> = s.iter().cloned().map(Hypothesis::co_singleton).collect();
    out.push(Hypothesis::co_singleton(beyond(&s)));
    out
}

pub(crate) fn halfspace_witnesses(instances: &[Instance], dim: usize) -> Result<Vec<Hypothesis>> {
    let points: Vec<&[Rational]> = instances
        .iter()
        .filter_map(|x| x.coords().filter(|c| c.len() == dim))
        .collect();
    if points.len() > HALFSPACE_POINT_LIMIT {
        return Err(Error::Budget {
            required: 1u128 << points.len(),
            allowed: 1u128 << HALFSPACE_POINT_LIMIT,
        });
    }
    let mut out = Vec::new();
    for labeling in Labeling::all(points.len()) {
        if let Some((w, b)) = linsep::separate(&points, labeling.bits()) {
            out.push(Hypothesis::halfspace(w, b));
        }
    }
    Ok(out)
}
