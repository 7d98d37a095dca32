use std::fmt;

use crate::rational::{self, Rational};

use super::ast::{CmpOp, Expr, Formula, Term};

/// A lexing or parsing failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Cmp(CmpOp),
    Arrow,
    And,
    Or,
    Not,
    Exp,
    True,
    False,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number {}", rational::format_rational(q)),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Cmp(op) => format!("'{}'", op.symbol()),
            Tok::Arrow => "'->'".into(),
            Tok::And => "'and'".into(),
            Tok::Or => "'or'".into(),
            Tok::Not => "'not'".into(),
            Tok::Exp => "'exp'".into(),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn err(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if chars.get(i) == Some(&'/') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lexeme: String = chars[start..i].iter().collect();
            let value = rational::parse_rational(&lexeme).map_err(|_| err(pos, format!("malformed number {lexeme:?}")))?;
            Tok::Num(value)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                "exp" => Tok::Exp,
                "true" => Tok::True,
                "false" => Tok::False,
                "forall" | "exists" => {
                    return Err(err(pos, format!("quantifier '{word}' is not supported; formulas must be quantifier-free")))
                }
                _ => Tok::Ident(word),
            }
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Cmp(CmpOp::Le), 2),
                ('>', Some('=')) => (Tok::Cmp(CmpOp::Ge), 2),
                ('!', Some('=')) => (Tok::Cmp(CmpOp::Ne), 2),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('<', _) => (Tok::Cmp(CmpOp::Lt), 1),
                ('>', _) => (Tok::Cmp(CmpOp::Gt), 1),
                ('=', _) => (Tok::Cmp(CmpOp::Eq), 1),
                ('≤', _) => (Tok::Cmp(CmpOp::Le), 1),
                ('≥', _) => (Tok::Cmp(CmpOp::Ge), 1),
                ('≠', _) => (Tok::Cmp(CmpOp::Ne), 1),
                ('∧', _) => (Tok::And, 1),
                ('∨', _) => (Tok::Or, 1),
                ('¬', _) => (Tok::Not, 1),
                ('→', _) => (Tok::Arrow, 1),
                ('∀', _) | ('∃', _) => {
                    return Err(err(pos, "quantifiers are not supported; formulas must be quantifier-free"))
                }
                _ => return Err(err(pos, format!("unexpected character {c:?}"))),
            };
            i += len;
            tok
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    objects: &'a [String],
    params: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        err(self.pos(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn close(&mut self, open: Pos) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Err(err(open, "unclosed '('")),
            _ => Err(self.unexpected("')'")),
        }
    }

    fn formula(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::True => {
                self.bump();
                Ok(Expr::True)
            }
            Tok::False => {
                self.bump();
                Ok(Expr::False)
            }
            Tok::LParen => {
                // Either a parenthesized formula or a comparison whose left
                // term starts with '('; keep whichever parse gets further.
                let start = self.at;
                let open = self.pos();
                self.bump();
                let grouped = self.formula().and_then(|e| self.close(open).map(|_| e));
                match grouped {
                    Ok(e) if !self.continues_term() => Ok(e),
                    first => {
                        let reached = self.at;
                        self.at = start;
                        match self.comparison() {
                            Ok(e) => Ok(e),
                            Err(second) => match first {
                                Err(first) if reached > self.at => Err(first),
                                _ => Err(second),
                            },
                        }
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn continues_term(&self) -> bool {
        matches!(self.peek(), Tok::Plus | Tok::Minus | Tok::Star | Tok::Cmp(_))
    }

    fn comparison(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::Cmp(op) => *op,
            _ => return Err(self.unexpected("a comparison operator")),
        };
        self.bump();
        let rhs = self.term()?;
        if let Tok::Cmp(_) = self.peek() {
            return Err(err(self.pos(), "comparisons cannot be chained; use 'and'"));
        }
        Ok(Expr::Cmp(op, lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Term::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Term::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Term::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Minus => {
                if let Tok::Num(q) = self.peek() {
                    let q = -q.clone();
                    self.bump();
                    return Ok(Term::Const(q));
                }
                Ok(Term::Neg(Box::new(self.factor()?)))
            }
            Tok::Num(q) => Ok(Term::Const(q)),
            Tok::Ident(name) => self.variable(&name, pos),
            Tok::Exp => {
                if *self.peek() != Tok::LParen {
                    return Err(self.unexpected("'(' after exp"));
                }
                let open = self.pos();
                self.bump();
                let inner = self.group_term(open)?;
                Ok(Term::Exp(Box::new(inner)))
            }
            Tok::LParen => self.group_term(pos),
            Tok::Eof => Err(err(pos, "expected a term, found end of input")),
            other => Err(err(pos, format!("expected a term, found {}", other.describe()))),
        }
    }

    /// The term inside an already consumed '(' at `open`, and the ')'.
    fn group_term(&mut self, open: Pos) -> Result<Term, ParseError> {
        match self.term() {
            Ok(inner) => {
                self.close(open)?;
                Ok(inner)
            }
            Err(_) if *self.peek() == Tok::Eof => Err(err(open, "unclosed '('")),
            Err(e) => Err(e),
        }
    }

    fn variable(&self, name: &str, pos: Pos) -> Result<Term, ParseError> {
        if let Some(i) = self.objects.iter().position(|v| v == name) {
            return Ok(Term::Object(i));
        }
        if let Some(i) = self.params.iter().position(|v| v == name) {
            return Ok(Term::Param(i));
        }
        Err(err(pos, format!("undeclared variable {name:?}")))
    }
}

fn check_declarations(objects: &[String], params: &[String]) -> Result<(), ParseError> {
    let at = Pos { line: 1, col: 1 };
    let reserved = ["and", "or", "not", "exp", "true", "false", "forall", "exists"];
    let mut seen = std::collections::BTreeSet::new();
    for v in objects.iter().chain(params) {
        let valid = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_alphanumeric() || c == '_')
            && !reserved.contains(&v.as_str());
        if !valid {
            return Err(err(at, format!("invalid variable name {v:?}")));
        }
        if !seen.insert(v.as_str()) {
            return Err(err(at, format!("variable {v:?} declared twice")));
        }
    }
    Ok(())
}

/// Parses a quantifier-free formula whose object variables are `objects`
/// and whose parameter variables are `params`.
pub fn parse_formula<S: AsRef<str>>(text: &str, objects: &[S], params: &[S]) -> Result<Formula, ParseError> {
    let objects: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
    let params: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
    check_declarations(&objects, &params)?;
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        objects: &objects,
        params: &params,
    };
    let body = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(Formula {
        objects: objects.clone(),
        params: params.clone(),
        body,
    })
}
