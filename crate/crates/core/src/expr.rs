//! Expressions in `x` and `u` for coefficients and right-hand sides.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | x | u | y | e | pi | func '(' sum ')' | '(' sum ')'
//! func    := exp | ln | sin | cos | sqrt
//! ```
//!
//! `y` is accepted as a synonym for `u`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("{func} is undefined for argument {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression references u but no value was supplied")]
    MissingU,
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> Result<f64, ExprError> {
        match self {
            Func::Exp => Ok(libm::exp(v)),
            Func::Ln if v <= 0.0 => Err(ExprError::Domain { func: "ln", arg: v }),
            Func::Ln => Ok(libm::log(v)),
            Func::Sin => Ok(libm::sin(v)),
            Func::Cos => Ok(libm::cos(v)),
            Func::Sqrt if v < 0.0 => Err(ExprError::Domain { func: "sqrt", arg: v }),
            Func::Sqrt => Ok(libm::sqrt(v)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    E,
    Pi,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    X,
    U,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Num(0.0)
    }

    /// Whether `u` occurs anywhere in the tree.
    pub fn references_u(&self) -> bool {
        match self {
            Expr::U => true,
            Expr::Num(_) | Expr::Const(_) | Expr::X => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.references_u(),
            Expr::Bin(_, a, b) => a.references_u() || b.references_u(),
        }
    }

    /// Whether `x` occurs anywhere in the tree.
    pub fn references_x(&self) -> bool {
        match self {
            Expr::X => true,
            Expr::Num(_) | Expr::Const(_) | Expr::U => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.references_x(),
            Expr::Bin(_, a, b) => a.references_x() || b.references_x(),
        }
    }

    pub fn eval(&self, x: f64, u: Option<f64>) -> Result<f64, ExprError> {
        let v = self.eval_inner(x, u)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFinite)
        }
    }

    fn eval_inner(&self, x: f64, u: Option<f64>) -> Result<f64, ExprError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Const(Constant::E) => core::f64::consts::E,
            Expr::Const(Constant::Pi) => core::f64::consts::PI,
            Expr::X => x,
            Expr::U => u.ok_or(ExprError::MissingU)?,
            Expr::Neg(e) => -e.eval_inner(x, u)?,
            Expr::Call(f, e) => f.apply(e.eval_inner(x, u)?)?,
            Expr::Bin(op, a, b) => {
                let a = a.eval_inner(x, u)?;
                let b = b.eval_inner(x, u)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(ExprError::DivisionByZero),
                    BinOp::Div => a / b,
                    BinOp::Pow => pow(a, b),
                }
            }
        })
    }
}

fn pow(a: f64, b: f64) -> f64 {
    // Small integer exponents are common (u^2, (1+x)^5); keep them exact.
    if b == libm::trunc(b) && b.abs() <= 64.0 {
        let mut acc = 1.0;
        for _ in 0..(b.abs() as u32) {
            acc *= a;
        }
        if b < 0.0 {
            1.0 / acc
        } else {
            acc
        }
    } else {
        libm::pow(a, b)
    }
}

/// Parse an expression string.
pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(ExprError::Syntax { pos: 0, msg: "empty expression".to_string() });
    }
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluate at `x` with an optional value bound to `u`.
pub fn eval_expression(e: &Expr, x: f64, u: Option<f64>) -> Result<f64, ExprError> {
    e.eval(x, u)
}

impl FromStr for Expr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.error(&alloc::format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        // Exponent only when followed by digits, so `2*e` and `2e` stay apart.
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = core::str::from_utf8(&s[start..i]).map_err(|_| self.error("invalid number"))?;
        let v: f64 = text
            .parse()
            .map_err(|_| ExprError::Syntax { pos: start, msg: alloc::format!("invalid number `{text}`") })?;
        self.pos = i;
        Ok(Expr::Num(v))
    }

    fn identifier(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match name {
            "x" => return Ok(Expr::X),
            "u" | "y" => return Ok(Expr::U),
            "e" => return Ok(Expr::Const(Constant::E)),
            "pi" => return Ok(Expr::Const(Constant::Pi)),
            _ => {}
        }
        let Some(func) = Func::from_name(name) else {
            return Err(ExprError::UnknownIdentifier { name: name.to_string(), pos: start });
        };
        if !self.eat(b'(') {
            return Err(self.error(&alloc::format!("expected `(` after `{name}`")));
        }
        let arg = self.sum()?;
        if !self.eat(b')') {
            return Err(self.error("expected `)`"));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if v.is_sign_negative() => write!(f, "({v})"),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::X => f.write_str("x"),
            Expr::U => f.write_str("u"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn ev(s: &str, x: f64, u: Option<f64>) -> Result<f64, ExprError> {
        parse_expression(s)?.eval(x, u)
    }

    #[test]
    fn linear_example_rhs() {
        let v = ev("y - 15*exp(x) - 10*x*exp(x)", 0.0, Some(0.0)).unwrap();
        assert_eq!(v, -15.0);
    }

    #[test]
    fn identity_variable() {
        assert_eq!(parse_expression("x").unwrap(), Expr::X);
        assert_eq!(ev("x", 0.5, None).unwrap(), 0.5);
    }

    #[test]
    fn nonlinear_term() {
        assert_eq!(ev("exp(-x)*u^2", 0.0, Some(2.0)).unwrap(), 4.0);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn reference_values() {
        assert!((ev("ln(1+x)", 1.0, None).unwrap() - 0.6931471806).abs() < 1e-10);
        assert!((ev("exp(x)", 0.5, None).unwrap() - 1.648721271).abs() < 1e-9);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(ev("ln(x)", 0.0, None), Err(ExprError::Domain { func: "ln", .. })));
        assert!(matches!(ev("sqrt(x - 1)", 0.0, None), Err(ExprError::Domain { func: "sqrt", .. })));
        assert_eq!(ev("1/x", 0.0, None), Err(ExprError::DivisionByZero));
        assert_eq!(ev("u + 1", 0.0, None), Err(ExprError::MissingU));
        assert_eq!(ev("exp(1000)", 0.0, None), Err(ExprError::NonFinite));
        assert_eq!(ev("sqrt(x)", 0.0, None), Ok(0.0));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2^3^2", 0.0, None).unwrap(), 512.0);
        assert_eq!(ev("-2^2", 0.0, None).unwrap(), -4.0);
        assert_eq!(ev("1 - 2 - 3", 0.0, None).unwrap(), -4.0);
        assert_eq!(ev("8 / 4 / 2", 0.0, None).unwrap(), 1.0);
        assert_eq!(ev("2 + 3 * 4", 0.0, None).unwrap(), 14.0);
        assert_eq!(ev("2^-1", 0.0, None).unwrap(), 0.5);
        assert_eq!(ev(" ( 1+2 ) *\t3 ", 0.0, None).unwrap(), 9.0);
        assert_eq!(ev("1.5e2 + 2*e - 2*e", 0.0, None).unwrap(), 150.0);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_expression("1 + * 2") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("(1 + 2"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression(""), Err(ExprError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_expression("1 2"), Err(ExprError::Syntax { .. })));
        match parse_expression("2 * foo(x)") {
            Err(ExprError::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "foo");
                assert_eq!(pos, 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn printed_form_reparses() {
        for s in ["-24*exp(-5*u) + 48/(1+x)^5", "-(x^2)", "--x", "2^3^2", "exp(-2*x)*y^2"] {
            let e = parse_expression(s).unwrap();
            let printed = format!("{e}");
            assert_eq!(parse_expression(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }

    #[test]
    fn u_detection() {
        assert!(parse_expression("exp(-x)*u^2").unwrap().references_u());
        assert!(!parse_expression("2*exp(x) + 1").unwrap().references_u());
        assert!(!parse_expression("ln(2)").unwrap().references_x());
    }
}
