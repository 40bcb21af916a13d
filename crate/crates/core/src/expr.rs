//! Arithmetic expressions in one variable `x`, used to describe potentials in
//! configuration files.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right associative
//! primary := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Tanh,
    Abs,
    /// Only produced by differentiating a power with variable exponent.
    Ln,
    /// Only produced by differentiating `abs`; accepted by the parser so derivatives print back.
    Sign,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
            Func::Ln => "ln",
            Func::Sign => "sign",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "tanh" => Func::Tanh,
            "abs" => Func::Abs,
            "ln" => Func::Ln,
            "sign" => Func::Sign,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Tanh => v.tanh(),
            Func::Abs => v.abs(),
            Func::Ln => v.ln(),
            Func::Sign => {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

use Expr::*;

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Num(v) => *v,
            X => x,
            Neg(a) => -a.eval(x),
            Add(a, b) => a.eval(x) + b.eval(x),
            Sub(a, b) => a.eval(x) - b.eval(x),
            Mul(a, b) => a.eval(x) * b.eval(x),
            Div(a, b) => a.eval(x) / b.eval(x),
            Pow(a, b) => {
                let base = a.eval(x);
                match **b {
                    Num(e) if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 => base.powi(e as i32),
                    _ => base.powf(b.eval(x)),
                }
            }
            Call(f, a) => f.apply(a.eval(x)),
        }
    }

    fn is_const(&self) -> bool {
        match self {
            Num(_) => true,
            X => false,
            Neg(a) | Call(_, a) => a.is_const(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => a.is_const() && b.is_const(),
        }
    }

    /// Symbolic derivative with respect to `x`, lightly simplified.
    pub fn derivative(&self) -> Expr {
        simplify(self.diff())
    }

    fn diff(&self) -> Expr {
        match self {
            Num(_) => Num(0.0),
            X => Num(1.0),
            Neg(a) => neg(a.diff()),
            Add(a, b) => add(a.diff(), b.diff()),
            Sub(a, b) => sub(a.diff(), b.diff()),
            Mul(a, b) => add(mul(a.diff(), (**b).clone()), mul((**a).clone(), b.diff())),
            Div(a, b) => div(
                sub(mul(a.diff(), (**b).clone()), mul((**a).clone(), b.diff())),
                pow((**b).clone(), Num(2.0)),
            ),
            Pow(a, b) => {
                if b.is_const() {
                    // c u^(c-1) u'
                    let c = (**b).clone();
                    mul(mul(c.clone(), pow((**a).clone(), sub(c, Num(1.0)))), a.diff())
                } else {
                    // u^v (v' ln u + v u'/u)
                    let u = (**a).clone();
                    let v = (**b).clone();
                    mul(
                        self.clone(),
                        add(
                            mul(v.diff(), Call(Func::Ln, Box::new(u.clone()))),
                            div(mul(v, u.diff()), u),
                        ),
                    )
                }
            }
            Call(f, a) => {
                let inner = a.diff();
                let outer = match f {
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => neg(Call(Func::Sin, a.clone())),
                    Func::Exp => Call(Func::Exp, a.clone()),
                    Func::Tanh => sub(Num(1.0), pow(Call(Func::Tanh, a.clone()), Num(2.0))),
                    Func::Abs => Call(Func::Sign, a.clone()),
                    Func::Ln => div(Num(1.0), (**a).clone()),
                    Func::Sign => Num(0.0),
                };
                mul(outer, inner)
            }
        }
    }
}

fn neg(a: Expr) -> Expr {
    Neg(Box::new(a))
}
fn add(a: Expr, b: Expr) -> Expr {
    Add(Box::new(a), Box::new(b))
}
fn sub(a: Expr, b: Expr) -> Expr {
    Sub(Box::new(a), Box::new(b))
}
fn mul(a: Expr, b: Expr) -> Expr {
    Mul(Box::new(a), Box::new(b))
}
fn div(a: Expr, b: Expr) -> Expr {
    Div(Box::new(a), Box::new(b))
}
fn pow(a: Expr, b: Expr) -> Expr {
    Pow(Box::new(a), Box::new(b))
}

fn simplify(e: Expr) -> Expr {
    match e {
        Num(_) | X => e,
        Neg(a) => match simplify(*a) {
            Num(v) => Num(-v),
            Neg(inner) => *inner,
            a => neg(a),
        },
        Add(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x + y),
            (Num(z), o) | (o, Num(z)) if z == 0.0 => o,
            (a, b) => add(a, b),
        },
        Sub(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x - y),
            (o, Num(z)) if z == 0.0 => o,
            (Num(z), o) if z == 0.0 => simplify(neg(o)),
            (a, b) => sub(a, b),
        },
        Mul(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x * y),
            (Num(z), _) | (_, Num(z)) if z == 0.0 => Num(0.0),
            (Num(o), other) | (other, Num(o)) if o == 1.0 => other,
            (a, b) => mul(a, b),
        },
        Div(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x / y),
            (Num(z), _) if z == 0.0 => Num(0.0),
            (o, Num(one)) if one == 1.0 => o,
            (a, b) => div(a, b),
        },
        Pow(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(pow(Num(x), Num(y)).eval(0.0)),
            (_, Num(z)) if z == 0.0 => Num(1.0),
            (o, Num(one)) if one == 1.0 => o,
            (a, b) => pow(a, b),
        },
        Call(f, a) => match simplify(*a) {
            Num(v) => Num(f.apply(v)),
            a => Call(f, Box::new(a)),
        },
    }
}

// ---------------------------------------------------------------------------
// printing

fn prec(e: &Expr) -> u8 {
    match e {
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(_) => 3,
        Pow(..) => 4,
        Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num(v) if v.is_sign_negative() => write!(f, "-{}", -v),
            Num(v) => write!(f, "{v}"),
            X => f.write_str("x"),
            Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 3)
            }
            Add(a, b) | Sub(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(if matches!(self, Add(..)) { " + " } else { " - " })?;
                write_at(f, b, 2)
            }
            Mul(a, b) | Div(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(if matches!(self, Mul(..)) { " * " } else { " / " })?;
                write_at(f, b, 3)
            }
            Pow(a, b) => {
                write_at(f, a, 5)?;
                f.write_str("^")?;
                write_at(f, b, 3)
            }
            Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                expected: "a number".into(),
                found: format!("`{text}`"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if b"+-*/^()".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(ParseError::Syntax {
                offset: i,
                expected: "an operator, operand or parenthesis".into(),
                found: format!("`{ch}`"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = mul(lhs, self.unary()?);
            } else if self.eat('/') {
                lhs = div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(neg(self.unary()?));
        }
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(pow(base, self.unary()?));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Num(v))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Ok(X),
                    "pi" => Ok(Num(std::f64::consts::PI)),
                    _ => match Func::from_name(&name) {
                        Some(f) => {
                            if !self.eat('(') {
                                return self.fail("`(` after function name");
                            }
                            let arg = self.expr()?;
                            if !self.eat(')') {
                                return self.fail("`)`");
                            }
                            Ok(Call(f, Box::new(arg)))
                        }
                        None => Err(ParseError::UnknownIdentifier { name, offset }),
                    },
                }
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.fail("`)`");
                }
                Ok(e)
            }
            _ => self.fail("a number, `x`, a function call or `(`"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// A parsed potential together with its symbolic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialExpression {
    pub source: String,
    pub ast: Expr,
    pub first: Expr,
    pub second: Expr,
}

impl PotentialExpression {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let ast = parse(source)?;
        let first = ast.derivative();
        let second = first.derivative();
        Ok(Self {
            source: source.to_string(),
            ast,
            first,
            second,
        })
    }
}
