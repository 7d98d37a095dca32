//! Shattering, VC dimension, the growth function and the Sauer–Shelah bounds.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, Labeling};
use crate::model::Instance;
use crate::space::{canonical_set, HypothesisSpace, SpaceKind};

/// Outcome of a shattering test. `NotFound` is only produced by inexact
/// oracles and never means "not shattered".
#[derive(Clone, Debug)]
pub enum ShatterVerdict {
    Shattered(BTreeMap<Labeling, Hypothesis>),
    NotShattered,
    NotFound,
}

impl ShatterVerdict {
    pub fn is_shattered(&self) -> bool {
        matches!(self, ShatterVerdict::Shattered(_))
    }
}

/// Whether `H|_A = {0,1}^A`, with one witness per labeling when it is.
pub fn shatters(space: &HypothesisSpace, set: &[Instance]) -> Result<ShatterVerdict> {
    let dich = space.realized_dichotomies(set)?;
    let full = 1usize
        .checked_shl(dich.instances.len() as u32)
        .ok_or_else(|| Error::InvalidInput("set too large to shatter".into()))?;
    Ok(if dich.len() == full {
        ShatterVerdict::Shattered(dich.witnesses)
    } else if dich.exact {
        ShatterVerdict::NotShattered
    } else {
        ShatterVerdict::NotFound
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VcStatus {
    Exact,
    LowerBound,
}

/// Result of a VC dimension search: the largest shattered subset of the pool
/// that was found, with its per-labeling witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct VcVerdict {
    pub value: usize,
    pub status: VcStatus,
    pub witness: Vec<Instance>,
    #[serde(serialize_with = "serialize_witness_map")]
    pub witnesses: BTreeMap<Labeling, Hypothesis>,
    pub subsets_examined: u64,
}

fn serialize_witness_map<S: serde::Serializer>(
    map: &BTreeMap<Labeling, Hypothesis>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(&k.to_string(), v)?;
    }
    m.end()
}

#[derive(Clone, Copy, Debug)]
pub struct VcSearch {
    /// Largest set size to try.
    pub limit: usize,
    /// Maximum number of candidate subsets to test.
    pub node_budget: u64,
}

impl VcSearch {
    pub fn new(limit: usize) -> Self {
        VcSearch {
            limit,
            node_budget: 2_000_000,
        }
    }
}

/// Lexicographic k-combinations of `0..n`.
pub(crate) struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn vc_dimension(space: &HypothesisSpace, pool: &[Instance], limit: usize) -> Result<VcVerdict> {
    vc_dimension_with(space, pool, VcSearch::new(limit))
}

/// Searches subsets of `pool` by increasing size, in lexicographic order,
/// stopping at the first shattered set of each size. A size with no shattered
/// set ends the search, since every subset of a shattered set is shattered.
pub fn vc_dimension_with(space: &HypothesisSpace, pool: &[Instance], search: VcSearch) -> Result<VcVerdict> {
    let pool = canonical_set(pool)?;
    let mut nodes = 0u64;
    let mut exhausted = false;
    let mut oracle_exact = true;
    let mut best = VcVerdict {
        value: 0,
        status: VcStatus::Exact,
        witness: Vec::new(),
        witnesses: BTreeMap::new(),
        subsets_examined: 0,
    };
    if let Some(h) = space.hypotheses().and_then(|v| v.into_iter().next()) {
        best.witnesses.insert(Labeling(Vec::new()), h);
    }

    // Points that are not shattered on their own can never belong to a
    // shattered set.
    let mut live: Vec<Instance> = Vec::new();
    let mut first_singleton: Option<(Instance, BTreeMap<Labeling, Hypothesis>)> = None;
    if search.limit >= 1 {
        for x in &pool {
            nodes += 1;
            match shatters(space, std::slice::from_ref(x))? {
                ShatterVerdict::Shattered(w) => {
                    live.push(x.clone());
                    if first_singleton.is_none() {
                        first_singleton = Some((x.clone(), w));
                    }
                }
                ShatterVerdict::NotFound => oracle_exact = false,
                ShatterVerdict::NotShattered => {}
            }
        }
    }
    let mut failed_next = first_singleton.is_none();
    if let Some((x, w)) = first_singleton {
        best.value = 1;
        best.witness = vec![x];
        best.witnesses = w;
        let top = search.limit.min(live.len());
        'sizes: for size in 2..=top {
            let mut found = false;
            for combo in Combinations::new(live.len(), size) {
                if nodes >= search.node_budget {
                    exhausted = true;
                    break 'sizes;
                }
                nodes += 1;
                let set: Vec<Instance> = combo.iter().map(|&i| live[i].clone()).collect();
                match shatters(space, &set)? {
                    ShatterVerdict::Shattered(w) => {
                        best.value = size;
                        best.witness = set;
                        best.witnesses = w;
                        found = true;
                        break;
                    }
                    ShatterVerdict::NotFound => oracle_exact = false,
                    ShatterVerdict::NotShattered => {}
                }
            }
            if !found {
                failed_next = true;
                break;
            }
        }
        if !failed_next && best.value == live.len() {
            failed_next = true;
        }
    }
    best.subsets_examined = nodes;

    let known = space.known_vc() == Some(best.value);
    let log_cap = space
        .hypotheses()
        .map(|h| usize::BITS as usize - 1 - h.len().leading_zeros() as usize)
        .is_some_and(|cap| cap == best.value);
    let domain_covered = space.kind() == SpaceKind::FiniteExplicit
        && space
            .domain()
            .is_some_and(|d| d.iter().all(|x| pool.binary_search(x).is_ok()));
    let proven = known || log_cap || (domain_covered && failed_next);
    best.status = if oracle_exact && !exhausted && proven {
        VcStatus::Exact
    } else {
        VcStatus::LowerBound
    };
    Ok(best)
}

/// `π_H(m)` relative to a pool: the largest `|H|_A|` over size-`m` subsets.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthValue {
    pub m: usize,
    pub value: usize,
    pub argmax: Vec<Instance>,
    pub exact: bool,
}

pub fn growth_function(space: &HypothesisSpace, m: usize, pool: &[Instance]) -> Result<GrowthValue> {
    let pool = canonical_set(pool)?;
    if m == 0 || m > pool.len() {
        return Err(Error::InvalidInput(format!(
            "growth function needs 1 <= m <= |pool| = {}, got m = {m}",
            pool.len()
        )));
    }
    let mut best: Option<GrowthValue> = None;
    let mut exact = true;
    for combo in Combinations::new(pool.len(), m) {
        let set: Vec<Instance> = combo.iter().map(|&i| pool[i].clone()).collect();
        let d = space.realized_dichotomies(&set)?;
        exact &= d.exact;
        if best.as_ref().is_none_or(|b| d.len() > b.value) {
            best = Some(GrowthValue {
                m,
                value: d.len(),
                argmax: set,
                exact: true,
            });
            if d.len() == 1 << m {
                break;
            }
        }
    }
    let mut best = best.expect("at least one subset");
    best.exact = exact;
    Ok(best)
}

/// `Σ_{i=0}^{d} C(m, i)`.
pub fn sauer_bound(d: u64, m: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut sum = BigUint::zero();
    for i in 0..=d.min(m) {
        sum += &term;
        term = term * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    sum
}

/// `(e·m/d)^d`, defined for `d ≥ 1` and `m > d + 1`.
pub fn sauer_poly_bound(d: u64, m: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidInput("polynomial Sauer bound needs d >= 1".into()));
    }
    if m <= d + 1 {
        return Err(Error::InvalidInput(format!(
            "polynomial Sauer bound needs m > d + 1 (d = {d}, m = {m})"
        )));
    }
    Ok((std::f64::consts::E * m as f64 / d as f64).powf(d as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(xs: impl IntoIterator<Item = i64>) -> Vec<Instance> {
        xs.into_iter().map(Instance::int).collect()
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn shatter_examples() {
        let full = HypothesisSpace::full(ints(0..3)).unwrap();
        assert!(shatters(&full, &ints(0..3)).unwrap().is_shattered());
        assert!(matches!(
            shatters(&HypothesisSpace::thresholds(), &ints([1, 2])).unwrap(),
            ShatterVerdict::NotShattered
        ));
        let single = HypothesisSpace::explicit(vec![Hypothesis::constant(true)]).unwrap();
        assert!(!shatters(&single, &ints([4])).unwrap().is_shattered());
    }

    #[test]
    fn vc_examples() {
        let single = HypothesisSpace::explicit(vec![Hypothesis::constant(true)]).unwrap();
        let v = vc_dimension(&single, &ints(0..4), 8).unwrap();
        assert_eq!((v.value, v.status), (0, VcStatus::Exact));

        let full = HypothesisSpace::full(ints(0..4)).unwrap();
        let v = vc_dimension(&full, &ints(0..4), 8).unwrap();
        assert_eq!((v.value, v.status), (4, VcStatus::Exact));

        let v = vc_dimension(&HypothesisSpace::thresholds(), &ints(1..=10), 8).unwrap();
        assert_eq!((v.value, v.status), (1, VcStatus::Exact));

        let v = vc_dimension(&HypothesisSpace::intervals(), &ints(1..=6), 8).unwrap();
        assert_eq!((v.value, v.status), (2, VcStatus::Exact));

        let plane: Vec<Instance> = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 2)]
            .iter()
            .map(|&(a, b)| Instance::point(vec![int(a), int(b)]))
            .collect();
        let v = vc_dimension(&HypothesisSpace::halfspaces(2).unwrap(), &plane, 8).unwrap();
        assert_eq!((v.value, v.status), (3, VcStatus::Exact));
    }

    #[test]
    fn limit_makes_lower_bound() {
        let full = HypothesisSpace::full(ints(0..4)).unwrap();
        let v = vc_dimension(&full, &ints(0..4), 2).unwrap();
        assert_eq!((v.value, v.status), (2, VcStatus::LowerBound));
    }

    #[test]
    fn growth_examples() {
        let full = HypothesisSpace::full(ints(0..3)).unwrap();
        assert_eq!(growth_function(&full, 3, &ints(0..3)).unwrap().value, 8);
        let t = growth_function(&HypothesisSpace::thresholds(), 3, &ints(1..=4)).unwrap();
        assert_eq!(t.value, 4);
        let c = growth_function(&HypothesisSpace::co_singletons(), 2, &ints(1..=4)).unwrap();
        assert_eq!(c.value, 3);
        assert!(growth_function(&full, 4, &ints(0..3)).is_err());
    }

    #[test]
    fn sauer_examples() {
        assert_eq!(sauer_bound(0, 7), BigUint::from(1u32));
        assert_eq!(sauer_bound(5, 3), BigUint::from(8u32));
        assert_eq!(sauer_bound(2, 5), BigUint::from(16u32));
        let e = std::f64::consts::E;
        assert!((sauer_poly_bound(1, 3).unwrap() - 3.0 * e).abs() < 1e-12);
        assert!((sauer_poly_bound(2, 4).unwrap() - (2.0 * e).powi(2)).abs() < 1e-9);
        assert!((sauer_poly_bound(2, 5).unwrap() - 46.181_6).abs() < 1e-3);
        assert!(sauer_poly_bound(2, 3).is_err());
        assert!(sauer_poly_bound(0, 5).is_err());
    }
}
