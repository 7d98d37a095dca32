use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::ast::{Expr, Formula, Term};

/// How terms are evaluated. The exact backend uses rational arithmetic and
/// rejects `exp`; the float backend uses IEEE doubles with no tolerance in
/// comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::InvalidInput(format!("unknown backend {other:?}; use exact or float"))),
        }
    }
}

trait Field: Sized + PartialOrd {
    fn add(a: Self, b: Self) -> Self;
    fn sub(a: Self, b: Self) -> Self;
    fn mul(a: Self, b: Self) -> Self;
    fn neg(a: Self) -> Self;
    fn exp(a: Self) -> Result<Self>;
}

impl Field for Rational {
    fn add(a: Self, b: Self) -> Self {
        a + b
    }
    fn sub(a: Self, b: Self) -> Self {
        a - b
    }
    fn mul(a: Self, b: Self) -> Self {
        a * b
    }
    fn neg(a: Self) -> Self {
        -a
    }
    fn exp(_: Self) -> Result<Self> {
        Err(Error::ExactBackendExp)
    }
}

impl Field for f64 {
    fn add(a: Self, b: Self) -> Self {
        a + b
    }
    fn sub(a: Self, b: Self) -> Self {
        a - b
    }
    fn mul(a: Self, b: Self) -> Self {
        a * b
    }
    fn neg(a: Self) -> Self {
        -a
    }
    fn exp(a: Self) -> Result<Self> {
        Ok(a.exp())
    }
}

fn term<F: Field + Clone>(t: &Term, x: &[F], w: &[F], lit: &impl Fn(&Rational) -> F) -> Result<F> {
    Ok(match t {
        Term::Const(c) => lit(c),
        Term::Object(i) => x[*i].clone(),
        Term::Param(i) => w[*i].clone(),
        Term::Add(a, b) => F::add(term(a, x, w, lit)?, term(b, x, w, lit)?),
        Term::Sub(a, b) => F::sub(term(a, x, w, lit)?, term(b, x, w, lit)?),
        Term::Mul(a, b) => F::mul(term(a, x, w, lit)?, term(b, x, w, lit)?),
        Term::Neg(a) => F::neg(term(a, x, w, lit)?),
        Term::Exp(a) => F::exp(term(a, x, w, lit)?)?,
    })
}

fn expr<F: Field + Clone>(e: &Expr, x: &[F], w: &[F], lit: &impl Fn(&Rational) -> F) -> Result<bool> {
    Ok(match e {
        Expr::True => true,
        Expr::False => false,
        Expr::Cmp(op, a, b) => op.holds(&term(a, x, w, lit)?, &term(b, x, w, lit)?),
        Expr::Not(a) => !expr(a, x, w, lit)?,
        Expr::And(a, b) => expr(a, x, w, lit)? && expr(b, x, w, lit)?,
        Expr::Or(a, b) => expr(a, x, w, lit)? || expr(b, x, w, lit)?,
        Expr::Implies(a, b) => !expr(a, x, w, lit)? || expr(b, x, w, lit)?,
    })
}

impl Formula {
    fn check_arity(&self, x: usize, w: usize) -> Result<()> {
        if x != self.objects.len() {
            return Err(Error::Arity {
                expected: self.objects.len(),
                got: x,
            });
        }
        if w != self.params.len() {
            return Err(Error::Arity {
                expected: self.params.len(),
                got: w,
            });
        }
        Ok(())
    }

    /// Truth of `φ(x̄; w̄)`. With the float backend the rational inputs are
    /// rounded to the nearest double first.
    pub fn eval(&self, x: &[Rational], w: &[Rational], backend: Backend) -> Result<bool> {
        self.check_arity(x.len(), w.len())?;
        match backend {
            Backend::Exact => {
                if self.uses_exp() {
                    return Err(Error::ExactBackendExp);
                }
                expr(&self.body, x, w, &|c: &Rational| c.clone())
            }
            Backend::Float => {
                let xf: Vec<f64> = x.iter().map(rational::to_f64).collect();
                let wf: Vec<f64> = w.iter().map(rational::to_f64).collect();
                expr(&self.body, &xf, &wf, &rational::to_f64)
            }
        }
    }

    /// Float-backend evaluation on double inputs.
    pub fn eval_f64(&self, x: &[f64], w: &[f64]) -> Result<bool> {
        self.check_arity(x.len(), w.len())?;
        expr(&self.body, x, w, &rational::to_f64)
    }
}
