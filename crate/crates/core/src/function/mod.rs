//! Positive test functions as exact expression trees.
//!
//! Text form (also what `Display` produces):
//!
//! ```text
//! const:3            mono:sigma=2        poly:c0,c1,...
//! expoly:c0,c1,...   sinpos:w,phi,lo,hi  logistic:c0,c1,...
//! ```
//!
//! combined with `+`, `*` (binding tighter) and parentheses. `expoly` is
//! `exp(c0 + c1 t + ...)`, `sinpos` is `lo + (hi - lo) sin²(w t + phi)` and
//! `logistic` is `1 / (1 + exp(-(c0 + c1 t + ...)))`.

mod generate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use generate::{generate_box_pair, generate_ratio_pair, BoxBounds, PairKind, PositivePair, MAX_COMPLEXITY};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// `t^sigma`
    Mono(f64),
    Poly(Vec<f64>),
    ExpPoly(Vec<f64>),
    SinPos { w: f64, phi: f64, lo: f64, hi: f64 },
    Logistic(Vec<f64>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck)
}

impl Expr {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Mono(s) => t.powf(*s),
            Expr::Poly(c) => horner(c, t),
            Expr::ExpPoly(c) => horner(c, t).exp(),
            Expr::SinPos { w, phi, lo, hi } => {
                let s = (w * t + phi).sin();
                lo + (hi - lo) * (s * s)
            }
            Expr::Logistic(c) => 1.0 / (1.0 + (-horner(c, t)).exp()),
            Expr::Sum(items) => items.iter().map(|e| e.value(t)).sum(),
            Expr::Product(items) => items.iter().map(|e| e.value(t)).product(),
        }
    }

    /// Builds a sum, dropping the wrapper for a single term.
    pub fn sum(mut items: Vec<Expr>) -> Expr {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::Sum(items)
        }
    }

    /// Builds a product, dropping the wrapper for a single factor.
    pub fn product(mut items: Vec<Expr>) -> Expr {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::Product(items)
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, c: &[f64]) -> fmt::Result {
    write!(f, "{name}:")?;
    for (i, v) in c.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "const:{c}"),
            Expr::Mono(s) => write!(f, "mono:sigma={s}"),
            Expr::Poly(c) => write_list(f, "poly", c),
            Expr::ExpPoly(c) => write_list(f, "expoly", c),
            Expr::SinPos { w, phi, lo, hi } => write!(f, "sinpos:{w},{phi},{lo},{hi}"),
            Expr::Logistic(c) => write_list(f, "logistic", c),
            Expr::Sum(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match e {
                        Expr::Sum(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            Expr::Product(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    match e {
                        Expr::Sum(_) | Expr::Product(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Atom(String),
    Plus,
    Star,
    Open,
    Close,
}

fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut atom = String::new();
    let flush = |atom: &mut String, out: &mut Vec<Token>| {
        if !atom.is_empty() {
            out.push(Token::Atom(std::mem::take(atom)));
        }
    };
    for ch in s.chars() {
        match ch {
            '+' if atom.ends_with(['e', 'E']) && atom.contains(':') => atom.push(ch),
            '+' | '*' | '(' | ')' => {
                flush(&mut atom, &mut out);
                out.push(match ch {
                    '+' => Token::Plus,
                    '*' => Token::Star,
                    '(' => Token::Open,
                    _ => Token::Close,
                });
            }
            c if c.is_whitespace() => flush(&mut atom, &mut out),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut out);
    out
}

fn parse_error(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn parse_number(token: &str, text: &str) -> Result<f64> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(parse_error(token, format!("`{text}` is not finite"))),
        Err(_) => Err(parse_error(token, format!("`{text}` is not a number"))),
    }
}

fn parse_list(token: &str, body: &str) -> Result<Vec<f64>> {
    if body.trim().is_empty() {
        return Err(parse_error(token, "expected at least one coefficient"));
    }
    body.split(',').map(|p| parse_number(token, p)).collect()
}

fn parse_atom(token: &str) -> Result<Expr> {
    let (name, body) = token
        .split_once(':')
        .ok_or_else(|| parse_error(token, "expected `kind:arguments`"))?;
    match name {
        "const" => Ok(Expr::Const(parse_number(token, body)?)),
        "mono" => {
            let v = body
                .strip_prefix("sigma=")
                .ok_or_else(|| parse_error(token, "expected `mono:sigma=<value>`"))?;
            Ok(Expr::Mono(parse_number(token, v)?))
        }
        "poly" => Ok(Expr::Poly(parse_list(token, body)?)),
        "expoly" => Ok(Expr::ExpPoly(parse_list(token, body)?)),
        "logistic" => Ok(Expr::Logistic(parse_list(token, body)?)),
        "sinpos" => {
            let v = parse_list(token, body)?;
            match v[..] {
                [w, phi, lo, hi] => Ok(Expr::SinPos { w, phi, lo, hi }),
                _ => Err(parse_error(token, format!("sinpos takes 4 values (w,phi,lo,hi), got {}", v.len()))),
            }
        }
        _ => Err(parse_error(token, format!("unknown function kind `{name}`"))),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn describe(t: Option<&Token>) -> String {
    match t {
        None => "<end>".into(),
        Some(Token::Atom(a)) => a.clone(),
        Some(Token::Plus) => "+".into(),
        Some(Token::Star) => "*".into(),
        Some(Token::Open) => "(".into(),
        Some(Token::Close) => ")".into(),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Token::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Token::Atom(a)) => parse_atom(&a),
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    other => Err(parse_error(&describe(other), "expected `)`")),
                }
            }
            other => Err(parse_error(&describe(other.as_ref()), "expected a function term")),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            tokens: tokenize(s),
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos < p.tokens.len() {
            return Err(parse_error(&describe(p.peek()), "unexpected trailing input"));
        }
        Ok(e)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidBounds(format!("interval [{lo}, {hi}] is empty or degenerate")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `n` equally spaced points including both ends; requires a finite interval.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = (self.hi - self.lo) / (n.max(2) - 1) as f64;
        let last = n.max(2) - 1;
        (0..=last).map(move |i| if i == last { self.hi } else { self.lo + step * i as f64 })
    }

    /// Finite window used for sampling checks on unbounded intervals.
    fn sampling_window(&self) -> Interval {
        const SPAN: f64 = 50.0;
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => *self,
            (true, false) => Interval { lo: self.lo, hi: self.lo + SPAN },
            (false, true) => Interval { lo: self.hi - SPAN, hi: self.hi },
            (false, false) => Interval { lo: -SPAN, hi: SPAN },
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

const POSITIVITY_GRID: usize = 1000;

/// An expression together with the interval it is certified positive on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub expr: Expr,
    pub domain: Interval,
}

impl TestFunction {
    /// Accepts `expr` if it is finite and positive at every interior point of a
    /// 1000-point grid (endpoints may vanish, e.g. `t^sigma` at 0).
    pub fn new(expr: Expr, domain: Interval) -> Result<Self> {
        let window = domain.sampling_window();
        let n = POSITIVITY_GRID;
        for t in window.grid(n).skip(1).take(n - 2) {
            let v = expr.value(t);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("`{expr}` is not positive at t = {t} (value {v})")));
            }
        }
        Ok(Self { expr, domain })
    }

    pub fn parse(spec: &str, domain: Interval) -> Result<Self> {
        Self::new(spec.parse()?, domain)
    }

    /// Unchecked evaluation, used on quadrature nodes.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        self.expr.value(t)
    }

    /// Evaluation that rejects points outside the domain.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        Ok(self.value(t))
    }

    /// Rate `c` when the function is exactly `exp(c0 + c t)`.
    pub fn exp_rate(&self) -> Option<f64> {
        match &self.expr {
            Expr::ExpPoly(c) if c.len() == 2 => Some(c[1]),
            _ => None,
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 10.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = TestFunction::parse("const:3", unit()).unwrap();
        assert_eq!(f.eval(0.5).unwrap(), 3.0);
        let f = TestFunction::parse("mono:sigma=2", unit()).unwrap();
        assert_eq!(f.eval(3.0).unwrap(), 9.0);
        let f = TestFunction::parse("expoly:0,0", unit()).unwrap();
        assert_eq!(f.eval(7.3).unwrap(), 1.0);
    }

    #[test]
    fn eval_outside_domain() {
        let f = TestFunction::parse("const:3", Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert!(matches!(f.eval(1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn operators_and_precedence() {
        let e: Expr = "const:1 + const:2 * mono:sigma=1".parse().unwrap();
        assert_eq!(e.value(3.0), 7.0);
        let e: Expr = "(const:1 + const:2) * mono:sigma=1".parse().unwrap();
        assert_eq!(e.value(3.0), 9.0);
        let e: Expr = "poly:1e+0,2E+0".parse().unwrap();
        assert_eq!(e, Expr::Poly(vec![1.0, 2.0]));
        let e: Expr = "sinpos:2,0.5,1,3".parse().unwrap();
        let s = (2.0 * 0.25 + 0.5_f64).sin();
        assert_eq!(e.value(0.25), 1.0 + 2.0 * s * s);
        let e: Expr = "logistic:0".parse().unwrap();
        assert_eq!(e.value(4.0), 0.5);
    }

    #[test]
    fn parse_errors_name_token() {
        let cases = [
            ("const:abc", "const:abc"),
            ("mono:2", "mono:2"),
            ("sinpos:1,2,3", "sinpos:1,2,3"),
            ("wavelet:1", "wavelet:1"),
            ("const:1 + ", "<end>"),
            ("(const:1", "<end>"),
            ("const:1 )", ")"),
            ("poly:", "poly:"),
        ];
        for (input, token) in cases {
            match input.parse::<Expr>() {
                Err(Error::Parse { token: t, .. }) => assert_eq!(t, token, "{input}"),
                other => panic!("{input}: {other:?}"),
            }
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "const:3",
            "mono:sigma=2.5",
            "poly:1,-0.25,3e-7",
            "(sinpos:1,0.5,0.1,2 + const:1) * expoly:0.1,-0.3",
            "const:1 + (logistic:0,1 * const:2)",
            "(const:1 * const:2) * const:3",
        ] {
            let e: Expr = s.parse().unwrap();
            let back: Expr = e.to_string().parse().unwrap();
            assert_eq!(e, back, "{s} -> {e}");
        }
    }

    #[test]
    fn positivity_is_enforced() {
        assert!(TestFunction::parse("poly:-1,1", unit()).is_err());
        assert!(TestFunction::parse("const:0", unit()).is_err());
        // vanishing only at the endpoint is allowed
        assert!(TestFunction::parse("mono:sigma=1", unit()).is_ok());
    }

    #[test]
    fn exp_rate_detection() {
        let f = TestFunction::parse("expoly:0.2,-0.7", unit()).unwrap();
        assert_eq!(f.exp_rate(), Some(-0.7));
        let f = TestFunction::parse("expoly:0.2,-0.7,0.1", unit()).unwrap();
        assert_eq!(f.exp_rate(), None);
    }

    #[test]
    fn serde_uses_text_form() {
        let f = TestFunction::parse("const:2 * mono:sigma=1", unit()).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"const:2 * mono:sigma=1\""), "{json}");
        let back: TestFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
