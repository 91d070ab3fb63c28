//! A small expression language over the model.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | atom
//! atom    := rational | ident | call | literal | '(' expr ')'
//! rational:= INT ('/' INT)?
//! literal := 'fin' '{' (INT ':' srat (',' INT ':' srat)*)? '}'
//!          | 'evc' '(' '[' (srat (',' srat)*)? ']' ',' srat ')'
//!          | 'delta' '(' INT ')' | 'lim' '(' srat ')'
//!          | 'limf' '(' finlit ',' srat ')'
//! call    := FUNC '(' (expr (',' expr)*)? ')'
//! FUNC    := G | A | Ainv | pair | gap | member | invcert | pipeline | Tnl
//! srat    := '-'? rational
//! ```
//!
//! A `-` directly in front of a number is part of the literal. Identifiers
//! that are not followed by `(` are variables; the default environment
//! binds `e` to the all-ones sequence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::certificates::{
    closure_membership, counterexample_pipeline, inverse_type_d_certificate, type_d_gap, CertReport,
    GapReport, Membership, QuadOutcome,
};
use crate::exact::{pair_c_functional, pair_l1_c, EvConstSeq, FinSeq, LimFunctional, Linear, Rat};
use crate::operators::{apply_a, apply_g, apply_nonlinear, solve_a, NlPoint};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{0}")]
    Space(String),
    #[error("{0}")]
    Eval(String),
}

impl ExprError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ExprError::Syntax { .. } => "E-SYNTAX",
            ExprError::Space(_) => "E-SPACE",
            ExprError::Eval(_) => "E-EVAL",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    G,
    A,
    Ainv,
    Pair,
    Gap,
    Member,
    Invcert,
    Pipeline,
    Tnl,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::G,
        Func::A,
        Func::Ainv,
        Func::Pair,
        Func::Gap,
        Func::Member,
        Func::Invcert,
        Func::Pipeline,
        Func::Tnl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::G => "G",
            Func::A => "A",
            Func::Ainv => "Ainv",
            Func::Pair => "pair",
            Func::Gap => "gap",
            Func::Member => "member",
            Func::Invcert => "invcert",
            Func::Pipeline => "pipeline",
            Func::Tnl => "Tnl",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::G | Func::A | Func::Ainv => 1,
            Func::Pipeline => 0,
            _ => 2,
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rat(Rat),
    Fin(FinSeq),
    Evc(EvConstSeq),
    Delta(usize),
    Lim(Rat),
    Limf(FinSeq, Rat),
    Var(String),
    Call(Func, Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            _ => 3,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(r) => write!(f, "{r}"),
            Expr::Fin(x) => write!(f, "{x}"),
            Expr::Evc(y) => write!(f, "{y}"),
            Expr::Delta(i) => write!(f, "delta({i})"),
            Expr::Lim(r) => write!(f, "lim({r})"),
            Expr::Limf(a, r) => write!(f, "limf({a}, {r})"),
            Expr::Var(name) => f.write_str(name),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(" * ")?;
                write_operand(f, b, 3)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ExprError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Ident(s)
        } else if "(){}[],:/+-*".contains(c) {
            chars.next();
            column += 1;
            Tok::Sym(c)
        } else {
            return Err(ExprError::Syntax {
                line: l,
                column: col,
                expected: vec!["a token".into()],
                found: format!("`{c}`"),
            });
        };
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ExprError> {
        let s = &self.toks[self.pos];
        Err(ExprError::Syntax {
            line: s.line,
            column: s.column,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.to_string(),
        })
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == &Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ExprError> {
        if self.at_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{c}`")])
        }
    }

    fn int(&mut self) -> Result<BigInt, ExprError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error(&["integer"]),
        }
    }

    fn index(&mut self) -> Result<usize, ExprError> {
        match self.peek().clone() {
            Tok::Int(n) if n.is_positive() => {
                self.bump();
                n.to_usize().map_or_else(|| self.error(&["index that fits in memory"]), Ok)
            }
            _ => self.error(&["positive index"]),
        }
    }

    fn rational(&mut self) -> Result<Rat, ExprError> {
        let num = self.int()?;
        if self.at_sym('/') {
            self.bump();
            let den = match self.peek().clone() {
                Tok::Int(d) if !d.is_zero() => {
                    self.bump();
                    d
                }
                _ => return self.error(&["nonzero denominator"]),
            };
            Ok(Rat::new(num, den))
        } else {
            Ok(Rat::from_integer(num))
        }
    }

    fn signed_rational(&mut self) -> Result<Rat, ExprError> {
        if self.at_sym('-') {
            self.bump();
            Ok(-self.rational()?)
        } else {
            self.rational()
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.at_sym('+') {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.at_sym('-') {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.at_sym('*') {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.at_sym('-') {
            if matches!(self.peek_at(1), Tok::Int(_)) {
                self.bump();
                return Ok(Expr::Rat(-self.rational()?));
            }
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn fin_literal(&mut self) -> Result<FinSeq, ExprError> {
        self.expect_sym('{')?;
        let mut pairs = Vec::new();
        if !self.at_sym('}') {
            loop {
                let k = self.index()?;
                self.expect_sym(':')?;
                pairs.push((k, self.signed_rational()?));
                if self.at_sym(',') {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect_sym('}')?;
        Ok(FinSeq::from_pairs(pairs).expect("indices checked positive"))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(Expr::Rat(self.rational()?)),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "fin" => Ok(Expr::Fin(self.fin_literal()?)),
                    "evc" => {
                        self.expect_sym('(')?;
                        self.expect_sym('[')?;
                        let mut head = Vec::new();
                        if !self.at_sym(']') {
                            loop {
                                head.push(self.signed_rational()?);
                                if self.at_sym(',') {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                        }
                        self.expect_sym(']')?;
                        self.expect_sym(',')?;
                        let tail = self.signed_rational()?;
                        self.expect_sym(')')?;
                        Ok(Expr::Evc(EvConstSeq::new(head, tail)))
                    }
                    "delta" => {
                        self.expect_sym('(')?;
                        let i = self.index()?;
                        self.expect_sym(')')?;
                        Ok(Expr::Delta(i))
                    }
                    "lim" => {
                        self.expect_sym('(')?;
                        let r = self.signed_rational()?;
                        self.expect_sym(')')?;
                        Ok(Expr::Lim(r))
                    }
                    "limf" => {
                        self.expect_sym('(')?;
                        if self.peek() != &Tok::Ident("fin".into()) {
                            return self.error(&["`fin`"]);
                        }
                        self.bump();
                        let abs = self.fin_literal()?;
                        self.expect_sym(',')?;
                        let r = self.signed_rational()?;
                        self.expect_sym(')')?;
                        Ok(Expr::Limf(abs, r))
                    }
                    _ if self.at_sym('(') => {
                        let Some(func) = Func::from_name(&name) else {
                            self.pos -= 1;
                            let names: Vec<&str> = Func::ALL.iter().map(|f| f.name()).collect();
                            return self.error(&names);
                        };
                        self.bump();
                        let mut args = Vec::new();
                        if !self.at_sym(')') {
                            loop {
                                args.push(self.expr()?);
                                if self.at_sym(',') {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                        }
                        self.expect_sym(')')?;
                        Ok(Expr::Call(func, args))
                    }
                    _ => Ok(Expr::Var(name)),
                }
            }
            _ => self.error(&["number", "identifier", "`(`", "`-`"]),
        }
    }
}

/// Parses an expression. The result is syntactically valid but not yet
/// space-checked; see [`check`].
pub fn parse(source: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return p.error(&["operator", "end of input"]);
    }
    Ok(e)
}

/// The space a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Rat,
    FinSeq,
    EvConstSeq,
    LimFunctional,
    QuadOutcome,
    GapReport,
    Membership,
    CertReport,
    NlPoint,
}

impl Space {
    fn is_linear(self) -> bool {
        matches!(self, Space::Rat | Space::FinSeq | Space::EvConstSeq | Space::LimFunctional)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Rat(Rat),
    Fin(FinSeq),
    Evc(EvConstSeq),
    Lim(LimFunctional),
    Quad(QuadOutcome),
    Gap(GapReport),
    Member(Membership),
    Cert(CertReport),
    Nl(NlPoint),
}

impl Value {
    pub fn space(&self) -> Space {
        match self {
            Value::Rat(_) => Space::Rat,
            Value::Fin(_) => Space::FinSeq,
            Value::Evc(_) => Space::EvConstSeq,
            Value::Lim(_) => Space::LimFunctional,
            Value::Quad(_) => Space::QuadOutcome,
            Value::Gap(_) => Space::GapReport,
            Value::Member(_) => Space::Membership,
            Value::Cert(_) => Space::CertReport,
            Value::Nl(_) => Space::NlPoint,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(v) => write!(f, "{v}"),
            Value::Fin(v) => write!(f, "{v}"),
            Value::Evc(v) => write!(f, "{v}"),
            Value::Lim(v) => write!(f, "{v}"),
            Value::Quad(v) => write!(f, "{v}"),
            Value::Gap(v) => write!(f, "{v}"),
            Value::Member(v) => write!(f, "{v}"),
            Value::Cert(v) => write!(f, "beta: {}; pairing: {}; verdict: {}", v.beta, v.pairing, v.verdict),
            Value::Nl(p) => write!(f, "(({}, {}), ({}, {}))", p.y, p.t, p.xstar, p.s),
        }
    }
}

/// Variable bindings.
#[derive(Clone, Debug)]
pub struct Env {
    vars: BTreeMap<String, Value>,
}

impl Default for Env {
    fn default() -> Self {
        let mut vars = BTreeMap::new();
        vars.insert("e".to_string(), Value::Evc(EvConstSeq::ones()));
        Self { vars }
    }
}

impl Env {
    pub fn bind(&mut self, name: impl Into<String>, value: Value) {
        self.vars.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vars.get(name)
    }
}

fn space_err<T>(msg: String) -> Result<T, ExprError> {
    Err(ExprError::Space(msg))
}

/// Accepts `FinSeq` where an element of `c` is expected: a finitely
/// supported sequence embeds in `c₀ ⊂ c`.
fn is_c_like(s: Space) -> bool {
    matches!(s, Space::EvConstSeq | Space::FinSeq)
}

/// Assigns a space to every subexpression, rejecting ill-typed
/// applications.
pub fn check(expr: &Expr, env: &Env) -> Result<Space, ExprError> {
    Ok(match expr {
        Expr::Rat(_) => Space::Rat,
        Expr::Fin(_) | Expr::Delta(_) => Space::FinSeq,
        Expr::Evc(_) => Space::EvConstSeq,
        Expr::Lim(_) | Expr::Limf(..) => Space::LimFunctional,
        Expr::Var(name) => match env.get(name) {
            Some(v) => v.space(),
            None => return space_err(format!("unbound variable `{name}`")),
        },
        Expr::Neg(a) => {
            let s = check(a, env)?;
            if !s.is_linear() {
                return space_err(format!("cannot negate a {s} in `{expr}`"));
            }
            s
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            match (check(a, env)?, check(b, env)?) {
                (sa, sb) if sa.is_linear() && sa == sb => sa,
                // a FinSeq beside an element of c is read as an element of c₀
                (Space::FinSeq, Space::EvConstSeq) | (Space::EvConstSeq, Space::FinSeq) => Space::EvConstSeq,
                (sa, sb) => return space_err(format!("cannot combine {sa} with {sb} in `{expr}`")),
            }
        }
        Expr::Mul(a, b) => match (check(a, env)?, check(b, env)?) {
            (Space::Rat, s) | (s, Space::Rat) if s.is_linear() => s,
            (sa, sb) => return space_err(format!("`*` needs a scalar operand, got {sa} and {sb} in `{expr}`")),
        },
        Expr::Call(func, args) => {
            if args.len() != func.arity() {
                return space_err(format!(
                    "`{}` takes {} argument(s), got {}",
                    func.name(),
                    func.arity(),
                    args.len()
                ));
            }
            let spaces = args.iter().map(|a| check(a, env)).collect::<Result<Vec<_>, _>>()?;
            use Space::*;
            match (func, spaces.as_slice()) {
                (Func::G, [FinSeq]) => EvConstSeq,
                (Func::A | Func::Ainv, [FinSeq]) => FinSeq,
                (Func::Pair, [FinSeq, EvConstSeq] | [EvConstSeq, FinSeq]) => Rat,
                (Func::Pair, [EvConstSeq, LimFunctional] | [LimFunctional, EvConstSeq]) => Rat,
                (Func::Gap, [FinSeq, s]) if is_c_like(*s) => GapReport,
                (Func::Member, [s, FinSeq]) if is_c_like(*s) => Membership,
                (Func::Invcert, [s, LimFunctional]) if is_c_like(*s) => CertReport,
                (Func::Pipeline, []) => CertReport,
                (Func::Tnl, [FinSeq, Rat]) => NlPoint,
                (Func::Pair, _) => {
                    return space_err(format!(
                        "`pair` needs an l1 operand with a c operand, or a c operand with a functional; got {} in `{expr}`",
                        join_spaces(&spaces)
                    ))
                }
                _ => {
                    return space_err(format!(
                        "`{}` is not defined on ({}) in `{expr}`",
                        func.name(),
                        join_spaces(&spaces)
                    ))
                }
            }
        }
    })
}

fn join_spaces(spaces: &[Space]) -> String {
    spaces.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

fn as_c(v: Value) -> EvConstSeq {
    match v {
        Value::Evc(y) => y,
        Value::Fin(x) => x.to_evconst(),
        other => unreachable!("space check admitted {:?}", other.space()),
    }
}

macro_rules! take {
    ($v:expr, $variant:ident) => {
        match $v {
            Value::$variant(inner) => inner,
            other => unreachable!("space check admitted {:?}", other.space()),
        }
    };
}

fn combine(a: Value, b: Value, sign: &Rat) -> Value {
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y * sign),
        (Value::Fin(x), Value::Fin(y)) => Value::Fin(x.plus(&y.scaled(sign))),
        (Value::Evc(x), Value::Evc(y)) => Value::Evc(x.plus(&y.scaled(sign))),
        (Value::Lim(x), Value::Lim(y)) => Value::Lim(x.plus(&y.scaled(sign))),
        (Value::Fin(x), Value::Evc(y)) => Value::Evc(x.to_evconst().plus(&y.scaled(sign))),
        (Value::Evc(x), Value::Fin(y)) => Value::Evc(x.plus(&y.to_evconst().scaled(sign))),
        (a, _) => unreachable!("space check admitted {:?}", a.space()),
    }
}

fn scale(v: Value, c: &Rat) -> Value {
    match v {
        Value::Rat(x) => Value::Rat(x * c),
        Value::Fin(x) => Value::Fin(x.scaled(c)),
        Value::Evc(x) => Value::Evc(x.scaled(c)),
        Value::Lim(x) => Value::Lim(x.scaled(c)),
        other => unreachable!("space check admitted {:?}", other.space()),
    }
}

fn eval_checked(expr: &Expr, env: &Env) -> Result<Value, ExprError> {
    Ok(match expr {
        Expr::Rat(r) => Value::Rat(r.clone()),
        Expr::Fin(x) => Value::Fin(x.clone()),
        Expr::Evc(y) => Value::Evc(y.clone()),
        Expr::Delta(i) => Value::Fin(FinSeq::delta(*i)),
        Expr::Lim(r) => Value::Lim(LimFunctional::limit(r.clone())),
        Expr::Limf(a, r) => Value::Lim(LimFunctional::new(a.clone(), r.clone())),
        Expr::Var(name) => env.get(name).cloned().expect("space check binds variables"),
        Expr::Neg(a) => scale(eval_checked(a, env)?, &-Rat::one()),
        Expr::Add(a, b) => combine(eval_checked(a, env)?, eval_checked(b, env)?, &Rat::one()),
        Expr::Sub(a, b) => combine(eval_checked(a, env)?, eval_checked(b, env)?, &-Rat::one()),
        Expr::Mul(a, b) => match (eval_checked(a, env)?, eval_checked(b, env)?) {
            (Value::Rat(c), v) | (v, Value::Rat(c)) => scale(v, &c),
            (a, _) => unreachable!("space check admitted {:?}", a.space()),
        },
        Expr::Call(func, args) => {
            let mut vals = args
                .iter()
                .map(|a| eval_checked(a, env))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter();
            let mut next = || vals.next().expect("arity checked");
            match func {
                Func::G => Value::Evc(apply_g(&take!(next(), Fin))),
                Func::A => Value::Fin(apply_a(&take!(next(), Fin))),
                Func::Ainv => Value::Fin(solve_a(&take!(next(), Fin))),
                Func::Pair => match (next(), next()) {
                    (Value::Fin(x), Value::Evc(y)) | (Value::Evc(y), Value::Fin(x)) => {
                        Value::Rat(pair_l1_c(&x, &y))
                    }
                    (Value::Evc(y), Value::Lim(phi)) | (Value::Lim(phi), Value::Evc(y)) => {
                        Value::Rat(pair_c_functional(&y, &phi))
                    }
                    (a, _) => unreachable!("space check admitted {:?}", a.space()),
                },
                Func::Gap => {
                    let xstar = take!(next(), Fin);
                    Value::Gap(type_d_gap(&xstar, &as_c(next())))
                }
                Func::Member => {
                    let xss = as_c(next());
                    Value::Member(closure_membership(&xss, &take!(next(), Fin)))
                }
                Func::Invcert => {
                    let xss = as_c(next());
                    Value::Cert(inverse_type_d_certificate(&xss, &take!(next(), Lim)))
                }
                Func::Pipeline => {
                    Value::Cert(counterexample_pipeline().map_err(|e| ExprError::Eval(e.to_string()))?)
                }
                Func::Tnl => {
                    let y = take!(next(), Fin);
                    Value::Nl(apply_nonlinear(&y, &take!(next(), Rat)))
                }
            }
        }
    })
}

/// Space-checks and evaluates.
pub fn eval(expr: &Expr, env: &Env) -> Result<Value, ExprError> {
    check(expr, env)?;
    eval_checked(expr, env)
}

/// Parses and evaluates `source` in the default environment.
pub fn eval_str(source: &str) -> Result<Value, ExprError> {
    eval(&parse(source)?, &Env::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::Verdict;
    use crate::exact::{int, rat};

    #[test]
    fn parse_examples() {
        assert_eq!(eval_str("pair(delta(1), e)").unwrap(), Value::Rat(int(1)));
        assert_eq!(
            eval_str("A(fin{1: 1/2})").unwrap(),
            Value::Fin(FinSeq::scaled_delta(1, rat(1, 2)))
        );
        let err = eval_str("pair(e, e)").unwrap_err();
        assert_eq!(err.code(), "E-SPACE");
    }

    #[test]
    fn eval_examples() {
        let Value::Cert(r) = eval_str("invcert(e, lim(1))").unwrap() else {
            panic!("expected a certificate")
        };
        assert_eq!(r.beta.value(), Some(&rat(1, 4)));
        assert_eq!(r.pairing, int(1));
        assert_eq!(r.verdict, Verdict::TypeDFails);

        let Value::Gap(g) = eval_str("gap(fin{}, e)").unwrap() else {
            panic!("expected a gap report")
        };
        assert_eq!(g.outcome.value(), Some(&rat(1, 4)));
        assert!(g.criterion_holds);

        assert_eq!(
            eval_str("Ainv(fin{2: 1})").unwrap().to_string(),
            "fin{1: -2, 2: 1}"
        );
    }

    #[test]
    fn linear_combinations() {
        assert_eq!(eval_str("G(delta(1)) + 1 * e").unwrap(), Value::Evc(FinSeq::delta(1).to_evconst()));
        assert_eq!(eval_str("e - e").unwrap(), Value::Evc(EvConstSeq::zero()));
        assert_eq!(eval_str("delta(2) - e").unwrap().to_string(), "evc([-1, 0], -1)");
        assert_eq!(eval_str("2*delta(1) + 3*delta(2)").unwrap().to_string(), "fin{1: 2, 2: 3}");
        assert_eq!(eval_str("-1/2 * e").unwrap().to_string(), "evc([], -1/2)");
        assert_eq!(eval_str("-(1/2) + 1").unwrap(), Value::Rat(rat(1, 2)));
        assert_eq!(eval_str("lim(1) * 3 + limf(fin{2: 1}, 0)").unwrap().to_string(), "limf(fin{2: 1}, 3)");
    }

    #[test]
    fn space_errors() {
        for src in [
            "delta(1) + lim(1)",
            "e * e",
            "G(e)",
            "pair(delta(1), delta(2))",
            "pair(lim(1), delta(1))",
            "gap(e, e)",
            "pipeline(1)",
            "x",
            "-gap(fin{}, e)",
        ] {
            let err = eval_str(src).unwrap_err();
            assert_eq!(err.code(), "E-SPACE", "{src}: {err}");
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("pair(delta(1),\n  e").unwrap_err() {
            ExprError::Syntax { line, column, expected, .. } => {
                assert_eq!((line, column), (2, 4));
                assert!(expected.contains(&"`)`".to_string()));
            }
            other => panic!("{other:?}"),
        }
        for src in ["delta(0)", "fin{0: 1}", "1/0", "foo(1)", "evc([1], )", "1 2", "#", ""] {
            assert_eq!(parse(src).unwrap_err().code(), "E-SYNTAX", "{src}");
        }
    }

    #[test]
    fn coerces_c0_elements_in_certificate_calls() {
        assert_eq!(
            eval_str("member(A(delta(1)), delta(1))").unwrap(),
            Value::Member(Membership::Member)
        );
        let Value::Nl(p) = eval_str("Tnl(delta(2), -1)").unwrap() else {
            panic!()
        };
        assert_eq!(p.s, int(-1));
    }

    #[test]
    fn printer_round_trips() {
        for src in [
            "a - (b - c)",
            "-(a + b) * 2",
            "x * -1/2",
            "(a + b) * (c * d)",
            "1 - -1",
            "pair(fin{3: -1/2, 1: 2}, evc([1, 1], 1))",
            "limf(fin{}, -3) + lim(0)",
            "pipeline()",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{src} printed as {e}");
        }
    }
}
