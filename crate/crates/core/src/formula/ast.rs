use std::fmt;

use crate::rational::{self, Rational};

/// Arithmetic terms over rationals with `exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Const(Rational),
    Object(usize),
    Param(usize),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Exp(Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds<T: PartialOrd>(self, a: &T, b: &T) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

/// Quantifier-free formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    True,
    False,
    Cmp(CmpOp, Term, Term),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
}

/// A partitioned formula `φ(x̄; p̄)`: object variables, parameter variables
/// and a body referring to them by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub objects: Vec<String>,
    pub params: Vec<String>,
    pub body: Expr,
}

impl Term {
    pub fn uses_exp(&self) -> bool {
        match self {
            Term::Const(_) | Term::Object(_) | Term::Param(_) => false,
            Term::Exp(_) => true,
            Term::Neg(a) => a.uses_exp(),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => a.uses_exp() || b.uses_exp(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Add(..) | Term::Sub(..) => 1,
            Term::Mul(..) => 2,
            Term::Neg(_) => 3,
            Term::Const(c) if c < &rational::zero() => 3,
            _ => 4,
        }
    }
}

impl Expr {
    pub fn uses_exp(&self) -> bool {
        match self {
            Expr::True | Expr::False => false,
            Expr::Cmp(_, a, b) => a.uses_exp() || b.uses_exp(),
            Expr::Not(a) => a.uses_exp(),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) => a.uses_exp() || b.uses_exp(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Implies(..) => 1,
            Expr::Or(..) => 2,
            Expr::And(..) => 3,
            Expr::Not(_) => 4,
            _ => 5,
        }
    }
}

impl Formula {
    pub fn uses_exp(&self) -> bool {
        self.body.uses_exp()
    }

    /// Canonical source text; parsing it yields an identical AST.
    pub fn format(&self) -> String {
        let mut out = String::new();
        Printer { f: self }.expr(&self.body, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

struct Printer<'a> {
    f: &'a Formula,
}

impl Printer<'_> {
    fn term_at(&self, t: &Term, min: u8, out: &mut String) {
        if t.precedence() < min {
            out.push('(');
            self.term(t, out);
            out.push(')');
        } else {
            self.term(t, out);
        }
    }

    fn term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Const(c) => out.push_str(&rational::format_rational(c)),
            Term::Object(i) => out.push_str(&self.f.objects[*i]),
            Term::Param(i) => out.push_str(&self.f.params[*i]),
            Term::Add(a, b) => {
                self.term_at(a, 1, out);
                out.push_str(" + ");
                self.term_at(b, 2, out);
            }
            Term::Sub(a, b) => {
                self.term_at(a, 1, out);
                out.push_str(" - ");
                self.term_at(b, 2, out);
            }
            Term::Mul(a, b) => {
                self.term_at(a, 2, out);
                out.push_str(" * ");
                self.term_at(b, 3, out);
            }
            Term::Neg(a) => {
                out.push('-');
                // A bare constant after '-' would be read back as a negative literal.
                let min = if matches!(**a, Term::Const(_)) { 5 } else { 4 };
                self.term_at(a, min, out);
            }
            Term::Exp(a) => {
                out.push_str("exp(");
                self.term(a, out);
                out.push(')');
            }
        }
    }

    fn expr_at(&self, e: &Expr, min: u8, out: &mut String) {
        if e.precedence() < min {
            out.push('(');
            self.expr(e, out);
            out.push(')');
        } else {
            self.expr(e, out);
        }
    }

    fn expr(&self, e: &Expr, out: &mut String) {
        match e {
            Expr::True => out.push_str("true"),
            Expr::False => out.push_str("false"),
            Expr::Cmp(op, a, b) => {
                self.term(a, out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                self.term(b, out);
            }
            Expr::Not(a) => {
                out.push_str("not ");
                self.expr_at(a, 4, out);
            }
            Expr::And(a, b) => {
                self.expr_at(a, 3, out);
                out.push_str(" and ");
                self.expr_at(b, 4, out);
            }
            Expr::Or(a, b) => {
                self.expr_at(a, 2, out);
                out.push_str(" or ");
                self.expr_at(b, 3, out);
            }
            Expr::Implies(a, b) => {
                self.expr_at(a, 2, out);
                out.push_str(" -> ");
                self.expr_at(b, 1, out);
            }
        }
    }
}
