//! Surface syntax for trace maps: a recursive-descent parser and a
//! precedence-aware pretty printer.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' nat ('^' nat)*)?       exponents fold right-to-left
//! atom   := 'x' | 'I' | nat ('/' nat)?
//!         | 'tr' '(' expr ')' | 'det' '(' expr ')' | 'adj' '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! `/` only forms rational literals; it is not an operator.

use std::fmt;

use fident_core::polyring::Rat;
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    X,
    IdentityConst,
    Literal(Rat),
    Tr(Box<Expr>),
    Det(Box<Expr>),
    Adj(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Parse failure with 1-based position and the tokens that would have been
/// accepted at that point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Ident(String),
    Int(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(s) => format!("integer '{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek_char() {
                if c == '\n' {
                    self.advance();
                    self.line += 1;
                    self.column = 1;
                } else if c.is_whitespace() {
                    self.advance();
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let c = match self.peek_char() {
                Some(c) => c,
                None => {
                    out.push((Tok::Eof, line, column));
                    return Ok(out);
                }
            };
            let tok = match c {
                '+' => {
                    self.advance();
                    Tok::Plus
                }
                '-' => {
                    self.advance();
                    Tok::Minus
                }
                '*' => {
                    self.advance();
                    Tok::Star
                }
                '^' => {
                    self.advance();
                    Tok::Caret
                }
                '/' => {
                    self.advance();
                    Tok::Slash
                }
                '(' => {
                    self.advance();
                    Tok::LParen
                }
                ')' => {
                    self.advance();
                    Tok::RParen
                }
                c if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                        self.advance();
                    }
                    Tok::Int(self.src[start..self.pos].to_string())
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while self
                        .peek_char()
                        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                    {
                        self.advance();
                    }
                    Tok::Ident(self.src[start..self.pos].to_string())
                }
                other => {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("unexpected character '{other}'"),
                        expected: vec![],
                    })
                }
            };
            out.push((tok, line, column));
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn advance(&mut self) {
        if let Some(c) = self.peek_char() {
            self.pos += c.len_utf8();
            if c != '\n' {
                self.column += 1;
            }
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    index: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.index].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, line, column) = self.tokens[self.index];
        (line, column)
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.index].0.clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            line,
            column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(
                format!("found {}", self.peek().describe()),
                &[expected],
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == &Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let mut chain = vec![self.nat()?];
        while self.peek() == &Tok::Caret {
            self.bump();
            chain.push(self.nat()?);
        }
        // '^' is right-associative: fold the exponent tower from the top.
        let mut exponent: u64 = chain.pop().expect("nonempty") as u64;
        while let Some(base_e) = chain.pop() {
            exponent = (base_e as u64)
                .checked_pow(u32::try_from(exponent).map_err(|_| {
                    self.error("exponent tower is too large", &[])
                })?)
                .ok_or_else(|| self.error("exponent tower is too large", &[]))?;
        }
        let exponent = u32::try_from(exponent)
            .map_err(|_| self.error("exponent tower is too large", &[]))?;
        Ok(Expr::Pow(Box::new(base), exponent))
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Int(digits) => {
                let value = digits.parse::<u32>().map_err(|_| {
                    self.error(format!("integer '{digits}' is too large"), &[])
                })?;
                self.bump();
                Ok(value)
            }
            other => Err(self.error(
                format!("found {}", other.describe()),
                &["non-negative integer exponent"],
            )),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.bump();
                    Ok(Expr::X)
                }
                "I" => {
                    self.bump();
                    Ok(Expr::IdentityConst)
                }
                "tr" | "det" | "adj" => {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(match name.as_str() {
                        "tr" => Expr::Tr(Box::new(inner)),
                        "det" => Expr::Det(Box::new(inner)),
                        _ => Expr::Adj(Box::new(inner)),
                    })
                }
                other => Err(self.error(
                    format!("unknown identifier '{other}'"),
                    &["'x'", "'I'", "'tr'", "'det'", "'adj'"],
                )),
            },
            Tok::Int(digits) => {
                self.bump();
                let numerator: BigInt = digits.parse().expect("digits");
                if self.peek() == &Tok::Slash {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Int(denom_digits) => {
                            let denominator: BigInt = denom_digits.parse().expect("digits");
                            if denominator.is_zero() {
                                return Err(self.error("denominator is zero", &[]));
                            }
                            self.bump();
                            Ok(Expr::Literal(Rat::new(numerator, denominator)))
                        }
                        other => Err(self.error(
                            format!("found {}", other.describe()),
                            &["integer denominator"],
                        )),
                    }
                } else {
                    Ok(Expr::Literal(Rat::from_integer(numerator)))
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            other => Err(self.error(
                format!("found {}", other.describe()),
                &["'x'", "'I'", "literal", "'tr'", "'det'", "'adj'", "'('", "'-'"],
            )),
        }
    }
}

/// Parses one expression, requiring the whole input to be consumed.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, index: 0 };
    let expr = parser.expr()?;
    if parser.peek() != &Tok::Eof {
        return Err(parser.error(
            format!("trailing {}", parser.peek().describe()),
            &["end of input"],
        ));
    }
    Ok(expr)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let own = self.precedence();
        if own < min {
            write!(f, "(")?;
        }
        match self {
            Expr::X => write!(f, "x")?,
            Expr::IdentityConst => write!(f, "I")?,
            Expr::Literal(r) => write!(f, "{r}")?,
            Expr::Tr(e) => {
                write!(f, "tr(")?;
                e.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Det(e) => {
                write!(f, "det(")?;
                e.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Adj(e) => {
                write!(f, "adj(")?;
                e.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(base, e) => {
                base.fmt_prec(f, 5)?;
                write!(f, "^{e}")?;
            }
        }
        if own < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
