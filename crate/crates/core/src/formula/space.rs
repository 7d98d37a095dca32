use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, HypothesisKey, Rule};
use crate::model::Instance;
use crate::rational::{self, Rational};
use crate::space::{
    co_singleton_witnesses, halfspace_witnesses, interval_witnesses, threshold_witnesses, Dichotomies,
    HypothesisSpace,
};

use super::ast::{CmpOp, Expr, Formula, Term};
use super::eval::Backend;
use super::shatter::{ParamStream, SearchConfig};

/// Largest number of hypotheses a grid may expand to.
pub const GRID_LIMIT: usize = 1_000_000;

/// Which parameter tuples a formula space ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParameterSource {
    /// Exactly these tuples.
    List(Vec<Vec<Rational>>),
    /// The product of one value list per parameter.
    Grid(Vec<Vec<Rational>>),
    /// Every tuple of rationals. Restrictions come from the closed form
    /// when one is recognized, otherwise from a bounded seeded search.
    Unrestricted { budget: u64, seed: u64 },
}

/// Syntactic shapes whose restrictions are enumerated in closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "shape")]
pub enum ClosedForm {
    /// `p <= x`
    Threshold,
    /// `x != p`
    CoSingleton,
    /// `p_lo <= x and x <= p_hi`
    Interval { lo: usize, hi: usize },
    /// `Σ p_j * x_j + p_b >= 0`; `weights[j]` is the parameter multiplying `x_j`.
    Halfspace { weights: Vec<usize>, bias: usize },
}

impl ClosedForm {
    pub fn vc(&self) -> usize {
        match self {
            ClosedForm::Threshold | ClosedForm::CoSingleton => 1,
            ClosedForm::Interval { .. } => 2,
            ClosedForm::Halfspace { weights, .. } => weights.len() + 1,
        }
    }
}

fn is_lower(e: &Expr) -> Option<usize> {
    match e {
        Expr::Cmp(CmpOp::Le, Term::Param(p), Term::Object(0)) | Expr::Cmp(CmpOp::Ge, Term::Object(0), Term::Param(p)) => {
            Some(*p)
        }
        _ => None,
    }
}

fn is_upper(e: &Expr) -> Option<usize> {
    match e {
        Expr::Cmp(CmpOp::Le, Term::Object(0), Term::Param(p)) | Expr::Cmp(CmpOp::Ge, Term::Param(p), Term::Object(0)) => {
            Some(*p)
        }
        _ => None,
    }
}

fn summands<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Add(a, b) => {
            summands(a, out);
            summands(b, out);
        }
        other => out.push(other),
    }
}

fn detect_halfspace(f: &Formula) -> Option<ClosedForm> {
    let n = f.objects.len();
    if n == 0 || f.params.len() != n + 1 {
        return None;
    }
    let lhs = match &f.body {
        Expr::Cmp(CmpOp::Ge, lhs, Term::Const(c)) | Expr::Cmp(CmpOp::Le, Term::Const(c), lhs) if c.is_zero() => lhs,
        _ => return None,
    };
    let mut parts = Vec::new();
    summands(lhs, &mut parts);
    let mut weights = vec![None; n];
    let mut bias = None;
    let mut used = vec![false; n + 1];
    for part in parts {
        let (p, obj) = match part {
            Term::Mul(a, b) => match (&**a, &**b) {
                (Term::Param(p), Term::Object(j)) | (Term::Object(j), Term::Param(p)) => (*p, Some(*j)),
                _ => return None,
            },
            Term::Param(p) => (*p, None),
            _ => return None,
        };
        if std::mem::replace(&mut used[p], true) {
            return None;
        }
        match obj {
            Some(j) if weights[j].is_none() => weights[j] = Some(p),
            None if bias.is_none() => bias = Some(p),
            _ => return None,
        }
    }
    Some(ClosedForm::Halfspace {
        weights: weights.into_iter().collect::<Option<Vec<usize>>>()?,
        bias: bias?,
    })
}

/// Recognizes the closed-form shapes (up to the orientation of each
/// comparison).
pub fn detect_closed_form(f: &Formula) -> Option<ClosedForm> {
    if f.objects.len() == 1 && f.params.len() == 1 {
        let x = Term::Object(0);
        let p = Term::Param(0);
        return match &f.body {
            e if is_lower(e).is_some() => Some(ClosedForm::Threshold),
            Expr::Cmp(CmpOp::Ne, a, b) if (a == &x && b == &p) || (a == &p && b == &x) => Some(ClosedForm::CoSingleton),
            Expr::Not(inner) => match &**inner {
                Expr::Cmp(CmpOp::Eq, a, b) if (a == &x && b == &p) || (a == &p && b == &x) => {
                    Some(ClosedForm::CoSingleton)
                }
                _ => None,
            },
            _ => detect_halfspace(f),
        };
    }
    if f.objects.len() == 1 && f.params.len() == 2 {
        if let Expr::And(a, b) = &f.body {
            let pair = match (is_lower(a), is_upper(b), is_upper(a), is_lower(b)) {
                (Some(lo), Some(hi), _, _) | (_, _, Some(hi), Some(lo)) => Some((lo, hi)),
                _ => None,
            };
            if let Some((lo, hi)) = pair.filter(|(lo, hi)| lo != hi) {
                return Some(ClosedForm::Interval { lo, hi });
            }
        }
    }
    detect_halfspace(f)
}

/// The hypothesis family `{1_{φ(·; w̄)} : w̄ ∈ source}`.
#[derive(Clone, Debug)]
pub struct DefinableSpace {
    formula: Arc<Formula>,
    source: ParameterSource,
    backend: Backend,
    closed_form: Option<ClosedForm>,
    listed: Option<Vec<Vec<Rational>>>,
}

fn expand_grid(axes: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    out
}

impl DefinableSpace {
    pub fn new(formula: Formula, source: ParameterSource, backend: Backend) -> Result<Self> {
        if backend == Backend::Exact && formula.uses_exp() {
            return Err(Error::ExactBackendExp);
        }
        let arity = formula.params.len();
        let listed = match &source {
            ParameterSource::List(tuples) => {
                if tuples.is_empty() {
                    return Err(Error::InvalidInput("a hypothesis space must be non-empty".into()));
                }
                if let Some(bad) = tuples.iter().find(|t| t.len() != arity) {
                    return Err(Error::Arity {
                        expected: arity,
                        got: bad.len(),
                    });
                }
                let mut seen = std::collections::BTreeSet::new();
                Some(tuples.iter().filter(|t| seen.insert((*t).clone())).cloned().collect())
            }
            ParameterSource::Grid(axes) => {
                if axes.len() != arity {
                    return Err(Error::Arity {
                        expected: arity,
                        got: axes.len(),
                    });
                }
                if axes.iter().any(|a| a.is_empty()) {
                    return Err(Error::InvalidInput("a hypothesis space must be non-empty".into()));
                }
                let size = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
                match size {
                    Some(s) if s <= GRID_LIMIT => {}
                    _ => {
                        return Err(Error::Budget {
                            required: axes.iter().fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128)),
                            allowed: GRID_LIMIT as u128,
                        })
                    }
                }
                let mut axes = axes.clone();
                for a in &mut axes {
                    a.sort();
                    a.dedup();
                }
                Some(expand_grid(&axes))
            }
            ParameterSource::Unrestricted { .. } if arity == 0 => Some(vec![Vec::new()]),
            ParameterSource::Unrestricted { .. } => None,
        };
        let closed_form = if listed.is_none() {
            detect_closed_form(&formula)
        } else {
            None
        };
        Ok(DefinableSpace {
            formula: Arc::new(formula),
            source,
            backend,
            closed_form,
            listed,
        })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn source(&self) -> &ParameterSource {
        &self.source
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    /// `h_w̄` for a parameter tuple.
    pub fn hypothesis(&self, params: Vec<Rational>) -> Result<Hypothesis> {
        if params.len() != self.formula.params.len() {
            return Err(Error::Arity {
                expected: self.formula.params.len(),
                got: params.len(),
            });
        }
        Ok(self.make(params))
    }

    fn make(&self, params: Vec<Rational>) -> Hypothesis {
        Hypothesis::from_parts(
            HypothesisKey::Params(params.clone()),
            Rule::Formula {
                formula: Arc::clone(&self.formula),
                params,
                backend: self.backend,
            },
        )
    }

    pub fn has_exact_oracle(&self) -> bool {
        self.listed.is_some() || self.closed_form.is_some()
    }

    pub fn listed_hypotheses(&self) -> Option<Vec<Hypothesis>> {
        self.listed
            .as_ref()
            .map(|ts| ts.iter().map(|t| self.make(t.clone())).collect())
    }

    pub fn known_vc(&self) -> Option<usize> {
        self.closed_form.as_ref().map(ClosedForm::vc)
    }

    /// Maps a closed-form witness key to this formula's parameter order.
    fn closed_params(&self, form: &ClosedForm, key: &[Rational]) -> Vec<Rational> {
        let mut params = vec![rational::zero(); self.formula.params.len()];
        match form {
            ClosedForm::Threshold | ClosedForm::CoSingleton => params[0] = key[0].clone(),
            ClosedForm::Interval { lo, hi } => {
                params[*lo] = key[0].clone();
                params[*hi] = key[1].clone();
            }
            ClosedForm::Halfspace { weights, bias } => {
                for (j, &p) in weights.iter().enumerate() {
                    params[p] = key[j].clone();
                }
                params[*bias] = key[weights.len()].clone();
            }
        }
        params
    }

    pub(crate) fn realized_dichotomies(&self, instances: &[Instance]) -> Result<Dichotomies> {
        let mut out = Dichotomies {
            instances: instances.to_vec(),
            witnesses: BTreeMap::new(),
            exact: true,
        };
        if let Some(listed) = &self.listed {
            for t in listed {
                let h = self.make(t.clone());
                out.insert_canonical(h.restrict(instances), h);
            }
            return Ok(out);
        }
        if let Some(form) = &self.closed_form {
            let reference = match form {
                ClosedForm::Threshold => threshold_witnesses(instances),
                ClosedForm::CoSingleton => co_singleton_witnesses(instances),
                ClosedForm::Interval { .. } => interval_witnesses(instances),
                ClosedForm::Halfspace { weights, .. } => halfspace_witnesses(instances, weights.len())?,
            };
            for r in reference {
                let HypothesisKey::Params(key) = r.key() else {
                    unreachable!("closed-form witnesses are keyed by parameters")
                };
                let h = self.make(self.closed_params(form, key));
                let labeling = h.restrict(instances);
                if labeling == r.restrict(instances) {
                    out.insert_canonical(labeling, h);
                } else {
                    // float rounding moved a witness; fall back to a verified subset
                    out.exact = false;
                }
            }
            return Ok(out);
        }
        let ParameterSource::Unrestricted { budget, seed } = &self.source else {
            unreachable!("finite sources are listed")
        };
        out.exact = false;
        let arity = self.formula.objects.len();
        let coords: Vec<Vec<Rational>> = instances
            .iter()
            .filter_map(|x| x.coords().filter(|c| c.len() == arity).map(<[Rational]>::to_vec))
            .collect();
        let full = 1usize.checked_shl(instances.len() as u32).unwrap_or(usize::MAX);
        let config = SearchConfig {
            budget: *budget,
            seed: *seed,
            grid: None,
        };
        for w in ParamStream::new(self.formula.params.len(), &coords, &config) {
            let h = self.make(w);
            out.insert_canonical(h.restrict(instances), h);
            if out.len() == full {
                break;
            }
        }
        Ok(out)
    }
}

/// A formula-defined hypothesis space over instances of `instance_arity`
/// coordinates.
pub fn definable_space(
    formula: Formula,
    source: ParameterSource,
    instance_arity: usize,
    backend: Backend,
) -> Result<HypothesisSpace> {
    if formula.objects.len() != instance_arity {
        return Err(Error::Arity {
            expected: instance_arity,
            got: formula.objects.len(),
        });
    }
    Ok(HypothesisSpace::formula(DefinableSpace::new(formula, source, backend)?))
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;
    use crate::rational::int;

    fn f(text: &str, objects: &[&str], params: &[&str]) -> Formula {
        parse_formula(text, objects, params).unwrap()
    }

    #[test]
    fn detection() {
        assert_eq!(detect_closed_form(&f("p <= x", &["x"], &["p"])), Some(ClosedForm::Threshold));
        assert_eq!(detect_closed_form(&f("x >= p", &["x"], &["p"])), Some(ClosedForm::Threshold));
        assert_eq!(detect_closed_form(&f("x != p", &["x"], &["p"])), Some(ClosedForm::CoSingleton));
        assert_eq!(detect_closed_form(&f("not p = x", &["x"], &["p"])), Some(ClosedForm::CoSingleton));
        assert_eq!(
            detect_closed_form(&f("x <= b and a <= x", &["x"], &["a", "b"])),
            Some(ClosedForm::Interval { lo: 0, hi: 1 })
        );
        assert_eq!(
            detect_closed_form(&f("x * a + c + b * y >= 0", &["x", "y"], &["a", "b", "c"])),
            Some(ClosedForm::Halfspace {
                weights: vec![0, 1],
                bias: 2
            })
        );
        assert_eq!(detect_closed_form(&f("p < x", &["x"], &["p"])), None);
        assert_eq!(detect_closed_form(&f("x * a + a >= 0", &["x"], &["a", "b"])), None);
    }

    #[test]
    fn grid_of_co_singletons() {
        let space = definable_space(
            f("x != p", &["x"], &["p"]),
            ParameterSource::Grid(vec![vec![int(0), int(1), int(2)]]),
            1,
            Backend::Exact,
        )
        .unwrap();
        assert_eq!(space.hypotheses().unwrap().len(), 3);
        assert!(space.has_exact_oracle());
    }

    #[test]
    fn empty_list_rejected() {
        assert!(DefinableSpace::new(f("x != p", &["x"], &["p"]), ParameterSource::List(vec![]), Backend::Exact).is_err());
    }

    #[test]
    fn closed_form_co_singletons() {
        let space = definable_space(
            f("x != p", &["x"], &["p"]),
            ParameterSource::Unrestricted { budget: 10, seed: 0 },
            1,
            Backend::Exact,
        )
        .unwrap();
        let a: Vec<Instance> = (1..=3).map(Instance::int).collect();
        let d = space.realized_dichotomies(&a).unwrap();
        assert!(d.exact);
        let names: Vec<String> = d.labelings().map(|l| l.to_string()).collect();
        assert_eq!(names, ["011", "101", "110", "111"]);
    }

    #[test]
    fn search_oracle_is_flagged_inexact() {
        let space = definable_space(
            f("p < x", &["x"], &["p"]),
            ParameterSource::Unrestricted { budget: 500, seed: 1 },
            1,
            Backend::Exact,
        )
        .unwrap();
        let a: Vec<Instance> = (1..=3).map(Instance::int).collect();
        let d = space.realized_dichotomies(&a).unwrap();
        assert!(!d.exact);
        assert_eq!(d.len(), 4);
    }
}
