//! Exact feasibility of small systems of linear inequalities by
//! Fourier–Motzkin elimination, with witness recovery by back-substitution.
//!
//! Used to decide which labelings of a finite point set a closed halfspace
//! `{x : w·x + b ≥ 0}` realizes. Intended for the handful of points and
//! dimensions that exhaustive shattering searches can afford.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// `coeffs · v ≥ rhs`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Constraint {
    /// Scales so the largest absolute coefficient is one (or the rhs is ±1
    /// for constant rows), making duplicate detection effective.
    fn normalize(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .filter(|m| !m.is_zero())
            .or_else(|| Some(self.rhs.abs()).filter(|m| !m.is_zero()));
        if let Some(s) = scale {
            for c in &mut self.coeffs {
                *c /= &s;
            }
            self.rhs /= &s;
        }
        self
    }
}

/// Finds `v` with `rows[i] · v ≥ rhs[i]` for every `i`, or `None` if the
/// system is infeasible.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    let n = rows.first().map_or(0, Vec::len);
    let mut system: Vec<Constraint> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), n, "ragged constraint matrix");
            Constraint {
                coeffs: r.clone(),
                rhs: b.clone(),
            }
            .normalize()
        })
        .collect();
    system.sort();
    system.dedup();

    // stages[k] holds the system over variables 0..=k, before eliminating k.
    let mut stages: Vec<Vec<Constraint>> = Vec::with_capacity(n);
    for k in (0..n).rev() {
        stages.push(system.clone());
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in system {
            if c.coeffs[k].is_positive() {
                lower.push(c);
            } else if c.coeffs[k].is_negative() {
                upper.push(c);
            } else {
                rest.push(c);
            }
        }
        for lo in &lower {
            for up in &upper {
                let a = lo.coeffs[k].clone();
                let b = -up.coeffs[k].clone();
                let coeffs = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(x, y)| x / &a + y / &b)
                    .collect();
                rest.push(
                    Constraint {
                        coeffs,
                        rhs: &lo.rhs / &a + &up.rhs / &b,
                    }
                    .normalize(),
                );
            }
        }
        rest.sort();
        rest.dedup();
        system = rest;
    }
    if system.iter().any(|c| c.rhs.is_positive()) {
        return None;
    }

    stages.reverse();
    let mut value = vec![Rational::zero(); n];
    for (k, stage) in stages.iter().enumerate() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for c in stage {
            let a = &c.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let others: Rational = (0..k).map(|j| &c.coeffs[j] * &value[j]).sum();
            let bound = (&c.rhs - others) / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        value[k] = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
    }
    debug_assert!(rows
        .iter()
        .zip(rhs)
        .all(|(r, b)| r.iter().zip(&value).map(|(x, y)| x * y).sum::<Rational>() >= *b));
    Some(value)
}

/// Weights and bias of a closed halfspace `w·x + b ≥ 0` that is positive
/// exactly on the points labeled `true`, if one exists.
pub fn separate(points: &[&[Rational]], labels: &[bool]) -> Option<(Vec<Rational>, Rational)> {
    let dim = points.first().map_or(0, |p| p.len());
    let mut rows = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    for (p, &positive) in points.iter().zip(labels) {
        let mut row: Vec<Rational> = p.to_vec();
        row.push(Rational::from_integer(1.into()));
        if positive {
            rows.push(row);
            rhs.push(Rational::zero());
        } else {
            rows.push(row.into_iter().map(|c| -c).collect());
            rhs.push(Rational::from_integer(1.into()));
        }
    }
    let mut v = solve(&rows, &rhs)?;
    let bias = v.pop().unwrap_or_else(Rational::zero);
    debug_assert_eq!(v.len(), dim);
    Some((v, bias))
}
