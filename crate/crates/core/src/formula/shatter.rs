use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypothesis::Labeling;
use crate::rational::{self, Rational};

use super::ast::Formula;
use super::eval::Backend;

/// Limits and seed for a parameter search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Number of parameter tuples to evaluate.
    pub budget: u64,
    pub seed: u64,
    /// Per-parameter value lists tried (as a product) before anything else.
    /// A single list is reused for every parameter.
    pub grid: Option<Vec<Vec<Rational>>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 100_000,
            seed: 0,
            grid: None,
        }
    }
}

/// Values worth trying for a parameter given the instance coordinates:
/// the coordinates, midpoints between neighbours, a point beyond each end,
/// and `-1, 0, 1`.
pub(crate) fn candidate_values(instances: &[Vec<Rational>]) -> Vec<Rational> {
    let mut coords: Vec<Rational> = instances.iter().flatten().cloned().collect();
    coords.sort();
    coords.dedup();
    let mut v = coords.clone();
    for pair in coords.windows(2) {
        v.push((&pair[0] + &pair[1]) / rational::int(2));
    }
    if let (Some(lo), Some(hi)) = (coords.first(), coords.last()) {
        v.push(lo - rational::one());
        v.push(hi + rational::one());
    }
    v.extend([rational::int(-1), rational::zero(), rational::one()]);
    v.sort();
    v.dedup();
    v
}

/// Deterministic stream of parameter tuples: the grid (or the candidate
/// values) as a lexicographic product, then seeded random tuples.
pub(crate) struct ParamStream {
    axes: Vec<Vec<Rational>>,
    odometer: Option<Vec<usize>>,
    values: Vec<Rational>,
    rng: ChaCha8Rng,
    arity: usize,
    left: u64,
}

impl ParamStream {
    pub(crate) fn new(arity: usize, instances: &[Vec<Rational>], config: &SearchConfig) -> Self {
        let values = candidate_values(instances);
        let axes: Vec<Vec<Rational>> = match &config.grid {
            Some(g) if g.len() == arity => g.clone(),
            Some(g) if g.len() == 1 => vec![g[0].clone(); arity],
            _ => vec![values.clone(); arity],
        };
        let odometer = if axes.iter().any(|a| a.is_empty()) {
            None
        } else {
            Some(vec![0; arity])
        };
        ParamStream {
            axes,
            odometer,
            values,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            arity,
            left: config.budget,
        }
    }

    fn random_value(&mut self) -> Rational {
        if self.rng.random_bool(0.5) {
            let i = self.rng.random_range(0..self.values.len());
            return self.values[i].clone();
        }
        let den: i64 = 1 << self.rng.random_range(0..4);
        let span = 16 * den;
        let num = self.rng.random_range(-span..=span);
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Iterator for ParamStream {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        if let Some(idx) = self.odometer.take() {
            let tuple: Vec<Rational> = idx.iter().zip(&self.axes).map(|(&i, a)| a[i].clone()).collect();
            let mut next = idx;
            let mut pos = self.arity;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                next[pos] += 1;
                if next[pos] < self.axes[pos].len() {
                    self.odometer = Some(next);
                    break;
                }
                next[pos] = 0;
            }
            return Some(tuple);
        }
        if self.arity == 0 {
            self.left = 0;
            return None;
        }
        Some((0..self.arity).map(|_| self.random_value()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Shattered,
    /// The budget ran out before every labeling had a witness. This says
    /// nothing about whether the set is shattered.
    NotFound,
}

/// Result of a shattering witness search on an ordered instance list.
#[derive(Clone, Debug, Serialize)]
pub struct ShatterSearch {
    pub status: SearchStatus,
    #[serde(serialize_with = "serialize_witnesses")]
    pub witnesses: BTreeMap<Labeling, Vec<Rational>>,
    pub missing: Vec<Labeling>,
    pub tried: u64,
}

impl ShatterSearch {
    pub fn is_shattered(&self) -> bool {
        self.status == SearchStatus::Shattered
    }
}

fn serialize_witnesses<S: serde::Serializer>(
    map: &BTreeMap<Labeling, Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        let w: Vec<String> = v.iter().map(rational::format_rational).collect();
        m.serialize_entry(&k.to_string(), &w)?;
    }
    m.end()
}

/// Searches parameter tuples for a witness of every labeling of
/// `instances` (taken in the given order). Every reported witness is
/// re-evaluated before it is returned.
pub fn nip_shatter_search(
    formula: &Formula,
    instances: &[Vec<Rational>],
    backend: Backend,
    config: &SearchConfig,
) -> Result<ShatterSearch> {
    if instances.is_empty() {
        return Err(Error::EmptyInstanceSet);
    }
    if instances.len() > 20 {
        return Err(Error::Budget {
            required: 1u128 << instances.len(),
            allowed: 1 << 20,
        });
    }
    if backend == Backend::Exact && formula.uses_exp() {
        return Err(Error::ExactBackendExp);
    }
    for x in instances {
        if x.len() != formula.objects.len() {
            return Err(Error::Arity {
                expected: formula.objects.len(),
                got: x.len(),
            });
        }
    }
    let total = 1usize << instances.len();
    let mut found: BTreeMap<Labeling, Vec<Rational>> = BTreeMap::new();
    let mut tried = 0u64;
    for w in ParamStream::new(formula.params.len(), instances, config) {
        tried += 1;
        let bits = instances
            .iter()
            .map(|x| formula.eval(x, &w, backend))
            .collect::<Result<Vec<bool>>>()?;
        found.entry(Labeling(bits)).or_insert(w);
        if found.len() == total {
            break;
        }
    }
    found.retain(|labeling, w| {
        instances
            .iter()
            .zip(labeling.bits())
            .all(|(x, &b)| formula.eval(x, w, backend).is_ok_and(|v| v == b))
    });
    let missing: Vec<Labeling> = Labeling::all(instances.len()).filter(|l| !found.contains_key(l)).collect();
    Ok(ShatterSearch {
        status: if missing.is_empty() {
            SearchStatus::Shattered
        } else {
            SearchStatus::NotFound
        },
        witnesses: found,
        missing,
        tried,
    })
}
