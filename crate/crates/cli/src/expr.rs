//! Integer expressions in `k` for custom growth sequences.
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := power (('*' | '×') power)*
//! power   := postfix ('^' power)?
//! postfix := atom '!'*
//! atom    := integer | 'k' | '(' expr ')' | 'factorial' '(' expr ')'
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

/// Exponents and factorial arguments above this are rejected at evaluation time.
pub const MAX_SMALL_ARG: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    K,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Factorial(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// Exponent or factorial argument is too large to evaluate.
    TooLarge(BigInt),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::TooLarge(n) => {
                write!(f, "argument {n} exceeds the limit {MAX_SMALL_ARG}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int(usize, usize),
    K,
    Factorial,
    Plus,
    Star,
    Caret,
    Bang,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        let tok = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    chars.next();
                }
                out.push((i, Tok::Int(i, end)));
                continue;
            }
            'a'..='z' | 'A'..='Z' => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if !c.is_ascii_alphabetic() {
                        break;
                    }
                    end = j + 1;
                    chars.next();
                }
                let tok = match &src[i..end] {
                    "k" => Tok::K,
                    "factorial" => Tok::Factorial,
                    word => {
                        return Err(ParseError {
                            offset: i,
                            message: format!("unknown name `{word}`"),
                        })
                    }
                };
                out.push((i, tok));
                continue;
            }
            '+' => Tok::Plus,
            '*' | '×' => Tok::Star,
            '^' => Tok::Caret,
            '!' => Tok::Bang,
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected `{other}`"),
                })
            }
        };
        out.push((i, tok));
        chars.next();
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.0)
    }

    fn fail<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek() == Some(Tok::Plus) {
            self.pos += 1;
            lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.postfix()?;
        if self.peek() == Some(Tok::Caret) {
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), Box::new(self.power()?)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.peek() == Some(Tok::Bang) {
            self.pos += 1;
            e = Expr::Factorial(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Int(a, b)) => {
                self.pos += 1;
                Ok(Expr::Int(self.src[a..b].parse().expect("lexed digits")))
            }
            Some(Tok::K) => {
                self.pos += 1;
                Ok(Expr::K)
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(e)
            }
            Some(Tok::Factorial) => {
                self.pos += 1;
                self.expect(Tok::Open, "`(` after factorial")?;
                let e = self.expr()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(Expr::Factorial(Box::new(e)))
            }
            _ => self.fail("expected an integer, `k`, `(` or `factorial`"),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let mut p = Parser {
            src,
            toks: lex(src)?,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.fail("trailing input");
        }
        Ok(e)
    }

    pub fn eval(&self, k: u64) -> Result<BigInt, EvalError> {
        Ok(match self {
            Expr::Int(n) => n.clone(),
            Expr::K => BigInt::from(k),
            Expr::Add(a, b) => a.eval(k)? + b.eval(k)?,
            Expr::Mul(a, b) => a.eval(k)? * b.eval(k)?,
            Expr::Pow(a, b) => {
                let exp = small(b.eval(k)?)?;
                num_traits::pow(a.eval(k)?, exp as usize)
            }
            Expr::Factorial(a) => {
                let n = small(a.eval(k)?)?;
                (2..=n).fold(BigInt::one(), |acc, j| acc * j)
            }
        })
    }

    /// Term function for [`lowdisc::GrowthSequence::custom`]. The expression
    /// must have been checked with [`Expr::eval`] over the needed range.
    pub fn into_term_fn(self) -> Arc<dyn Fn(u64) -> BigInt + Send + Sync> {
        Arc::new(move |k| self.eval(k).expect("expression validated before use"))
    }
}

fn small(n: BigInt) -> Result<u64, EvalError> {
    match n.to_u64() {
        Some(v) if v <= MAX_SMALL_ARG => Ok(v),
        _ => Err(EvalError::TooLarge(n)),
    }
}
