//! Tokenizer and recursive-descent parser for session files and the
//! expressions passed on the command line.
//!
//! A session is line oriented:
//!
//! ```text
//! # comment
//! field elliptic(g2, g3) invariants(-g2, -g3)
//! L = D^4 - 12*wp*D^2 + 1
//! basis L: G1, G2
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, col: usize, name: String },
    #[error("{line}:{col}: `{name}` is only available over the exponential field")]
    SugarOutsideField { line: usize, col: usize, name: String },
    #[error("{line}:{col}: exponent must be an integer literal")]
    NonIntegerExponent { line: usize, col: usize },
}

impl ParseError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::SyntaxError {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    pub fn unknown(pos: Pos, name: &str) -> Self {
        ParseError::UnknownSymbol {
            line: pos.line,
            col: pos.col,
            name: name.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(BigRational),
    Sym(char),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// The literal was written with a decimal point.
    pub decimal: bool,
}

/// Splits one line (comments already stripped) into tokens.
pub fn tokenize(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col: i + 1 };
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
                decimal: false,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(int.parse::<BigInt>().unwrap());
            let mut decimal = false;
            if i < chars.len() && chars[i] == '.' {
                decimal = true;
                i += 1;
                let fstart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if fstart == i {
                    return Err(ParseError::syntax(Pos { line, col: i + 1 }, "digit expected after `.`"));
                }
                let frac: String = chars[fstart..i].iter().collect();
                let scale = BigInt::from(10u32).pow((i - fstart) as u32);
                value += BigRational::new(frac.parse::<BigInt>().unwrap(), scale);
            }
            out.push(Token {
                tok: Tok::Num(value),
                pos,
                decimal,
            });
        } else if "+-*/^(),:=".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                pos,
                decimal: false,
            });
            i += 1;
        } else {
            return Err(ParseError::syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var(String, Pos),
    Call(String, Box<Expr>, Pos),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
}

/// Cursor over the tokens of one line.
pub struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    /// Position reported when the line ends early.
    end: Pos,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], line: usize, line_len: usize) -> Self {
        Parser {
            toks,
            at: 0,
            end: Pos {
                line,
                col: line_len + 1,
            },
        }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at)
    }

    pub fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), format!("expected `{c}`")))
        }
    }

    pub fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(name),
                pos,
                ..
            }) => {
                let r = (name.clone(), *pos);
                self.at += 1;
                Ok(r)
            }
            _ => Err(ParseError::syntax(self.pos(), "expected a name")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), "unexpected trailing input"))
        }
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let k = self.exponent(pos)?;
        if matches!(self.peek(), Some(Token { tok: Tok::Sym('^'), .. })) {
            return Err(ParseError::syntax(self.pos(), "chained `^` needs parentheses"));
        }
        Ok(Expr::Pow(Box::new(base), k, pos))
    }

    /// `^` accepts an optionally signed integer literal, possibly in
    /// parentheses.
    fn exponent(&mut self, caret: Pos) -> Result<i64, ParseError> {
        let parens = self.eat_sym('(');
        let neg = self.eat_sym('-');
        let pos = self.pos();
        let value = match self.next() {
            Some(Token {
                tok: Tok::Num(q),
                decimal,
                ..
            }) if q.is_integer() && !decimal => q.to_integer(),
            Some(Token { tok: Tok::Num(_), .. }) | Some(Token { tok: Tok::Ident(_), .. }) => {
                return Err(ParseError::NonIntegerExponent {
                    line: pos.line,
                    col: pos.col,
                })
            }
            Some(Token { tok: Tok::Sym('('), .. }) => {
                return Err(ParseError::NonIntegerExponent {
                    line: pos.line,
                    col: pos.col,
                })
            }
            _ => return Err(ParseError::syntax(pos, "exponent expected after `^`")),
        };
        if parens && !self.eat_sym(')') {
            let p = self.pos();
            return Err(ParseError::NonIntegerExponent {
                line: p.line,
                col: p.col,
            });
        }
        let k: i64 = i64::try_from(&value)
            .ok()
            .filter(|k| *k <= 10_000)
            .ok_or_else(|| ParseError::syntax(caret, "exponent too large"))?;
        Ok(if neg { -k } else { k })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Token { tok: Tok::Num(q), .. }) => Ok(Expr::Num(q)),
            Some(Token {
                tok: Tok::Ident(name),
                ..
            }) => {
                if self.eat_sym('(') {
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(Expr::Call(name, Box::new(arg), pos))
                } else {
                    Ok(Expr::Var(name, pos))
                }
            }
            Some(Token { tok: Tok::Sym('('), .. }) => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Some(Token { tok: Tok::Sym(c), .. }) => {
                Err(ParseError::syntax(pos, format!("unexpected `{c}`")))
            }
            None => Err(ParseError::syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses a complete single-line expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    if text.contains('\n') {
        let col = text.find('\n').unwrap() + 1;
        return Err(ParseError::syntax(Pos { line: 1, col }, "expression spans several lines"));
    }
    let toks = tokenize(text, 1)?;
    let mut p = Parser::new(&toks, 1, text.chars().count());
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// The operations an expression is evaluated with.
pub trait Algebra {
    type Value: Clone;
    type Error: From<ParseError>;

    fn number(&self, q: &BigRational) -> Self::Value;
    fn symbol(&self, name: &str, pos: Pos) -> Result<Self::Value, Self::Error>;
    fn call(&self, name: &str, arg: &Expr, pos: Pos) -> Result<Self::Value, Self::Error>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value, pos: Pos) -> Result<Self::Value, Self::Error>;
    fn one(&self) -> Self::Value;
    /// `a⁻¹`, used for negative exponents.
    fn invert(&self, a: &Self::Value, pos: Pos) -> Result<Self::Value, Self::Error> {
        let one = self.one();
        self.div(&one, a, pos)
    }

    fn eval(&self, e: &Expr) -> Result<Self::Value, Self::Error> {
        match e {
            Expr::Num(q) => Ok(self.number(q)),
            Expr::Var(name, pos) => self.symbol(name, *pos),
            Expr::Call(name, arg, pos) => self.call(name, arg, *pos),
            Expr::Neg(a) => Ok(self.neg(&self.eval(a)?)),
            Expr::Bin(op, a, b, pos) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                Ok(match op {
                    BinOp::Add => self.add(&a, &b),
                    BinOp::Sub => self.add(&a, &self.neg(&b)),
                    BinOp::Mul => self.mul(&a, &b),
                    BinOp::Div => self.div(&a, &b, *pos)?,
                })
            }
            Expr::Pow(a, k, pos) => {
                let base = self.eval(a)?;
                let base = if *k < 0 { self.invert(&base, *pos)? } else { base };
                let mut acc = self.one();
                for _ in 0..k.unsigned_abs() {
                    acc = self.mul(&acc, &base);
                }
                Ok(acc)
            }
        }
    }
}

/// `Some(q)` when the expression is a rational constant written with
/// numbers only.
pub fn as_rational(e: &Expr) -> Option<BigRational> {
    match e {
        Expr::Num(q) => Some(q.clone()),
        Expr::Neg(a) => as_rational(a).map(|q| -q),
        Expr::Bin(op, a, b, _) => {
            let (a, b) = (as_rational(a)?, as_rational(b)?);
            match op {
                BinOp::Add => Some(a + b),
                BinOp::Sub => Some(a - b),
                BinOp::Mul => Some(a * b),
                BinOp::Div => (!b.is_zero()).then(|| a / b),
            }
        }
        Expr::Pow(a, k, _) => {
            let a = as_rational(a)?;
            if *k < 0 && a.is_zero() {
                return None;
            }
            let mut acc = BigRational::one();
            for _ in 0..k.unsigned_abs() {
                acc *= &a;
            }
            Some(if *k < 0 { acc.recip() } else { acc })
        }
        _ => None,
    }
}
