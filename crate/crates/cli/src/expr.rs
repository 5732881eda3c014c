//! Expression grammar shared by the batch commands and the REPL.
//!
//! Atoms: `q`, `i`, rationals `p/r`, `xi(a)`, `xb(a)`, `dxi(a)`, `dxb(a)`,
//! `a`, `ad`, `Nop`, `qN(s)`, `ket(n)`, `bra(n)`. Operators: `+ - * ^`
//! with explicit `*` (juxtaposition is not a product), parentheses, and
//! the call form `integrate(expr, generator)`. Errors carry 1-based
//! line/column positions.

use std::fmt;

use tg_core::grassmann::GenKind;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Rational(i64, i64),
    QUnit,
    IUnit,
    Gen(GenKind, usize),
    Diff(GenKind, usize),
    Annihilate,
    Create,
    Number,
    QN(i64),
    Ket(u8),
    Bra(u8),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Integrate(Box<Expr>, GenKind, usize),
}

#[derive(Clone, Debug)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(v) => write!(f, "{v}"),
            Token::Ident(s) => write!(f, "{s}"),
            Token::Plus => f.write_str("+"),
            Token::Minus => f.write_str("-"),
            Token::Star => f.write_str("*"),
            Token::Caret => f.write_str("^"),
            Token::Slash => f.write_str("/"),
            Token::LParen => f.write_str("("),
            Token::RParen => f.write_str(")"),
            Token::Comma => f.write_str(","),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn tokenize(mut self) -> Result<Vec<(Token, u32, u32)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let token = match c {
                '+' => {
                    self.bump();
                    Token::Plus
                }
                '-' => {
                    self.bump();
                    Token::Minus
                }
                '*' => {
                    self.bump();
                    Token::Star
                }
                '^' => {
                    self.bump();
                    Token::Caret
                }
                '/' => {
                    self.bump();
                    Token::Slash
                }
                '(' => {
                    self.bump();
                    Token::LParen
                }
                ')' => {
                    self.bump();
                    Token::RParen
                }
                ',' => {
                    self.bump();
                    Token::Comma
                }
                '0'..='9' => {
                    let mut value: i64 = 0;
                    while let Some(&d) = self.chars.peek() {
                        let Some(digit) = d.to_digit(10) else { break };
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(digit as i64))
                            .ok_or_else(|| self.error("integer literal too large"))?;
                        self.bump();
                    }
                    Token::Int(value)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut name = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            name.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Token::Ident(name)
                }
                other => return Err(self.error(format!("unexpected character '{other}'"))),
            };
            out.push((token, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Token, u32, u32)>,
    pos: usize,
    end: (u32, u32),
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let tokens = Lexer::new(text).tokenize()?;
        let end = tokens
            .last()
            .map(|(t, l, c)| (*l, c + t.to_string().chars().count() as u32))
            .unwrap_or((1, 1));
        Ok(Parser { tokens, pos: 0, end })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (u32, u32) {
        self.tokens.get(self.pos).map(|(_, l, c)| (*l, *c)).unwrap_or(self.end)
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.advance();
                Ok(())
            }
            Some(t) => Err(self.error_here(format!("expected '{want}', found '{t}'"))),
            None => Err(self.error_here(format!("expected '{want}', found end of input"))),
        }
    }

    fn expect_uint(&mut self, what: &str) -> Result<i64, ParseError> {
        match self.peek() {
            Some(Token::Int(_)) => {
                let Some(Token::Int(v)) = self.advance() else { unreachable!() };
                Ok(v)
            }
            Some(t) => Err(self.error_here(format!("expected {what}, found '{t}'"))),
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<i64, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.advance();
            Ok(-self.expect_uint(what)?)
        } else {
            self.expect_uint(what)
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.parse_term()?];
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    items.push(self.parse_term()?);
                }
                Some(Token::Minus) => {
                    self.advance();
                    items.push(Expr::Neg(Box::new(self.parse_term()?)));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Sum(items) })
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.parse_factor()?];
        while matches!(self.peek(), Some(Token::Star)) {
            self.advance();
            items.push(self.parse_factor()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Prod(items) })
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.parse_factor()?)));
        }
        let base = self.parse_base()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.advance();
            let exp = self.expect_uint("an integer exponent")?;
            let exp = u32::try_from(exp)
                .map_err(|_| self.error_here("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn indexed(&mut self, what: &str) -> Result<usize, ParseError> {
        self.expect(Token::LParen)?;
        let idx = self.expect_uint(what)?;
        let idx = usize::try_from(idx).map_err(|_| self.error_here("index out of range"))?;
        self.expect(Token::RParen)?;
        Ok(idx)
    }

    fn parse_base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Token::Int(_)) => {
                let Some(Token::Int(p)) = self.advance() else { unreachable!() };
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.advance();
                    let r = self.expect_uint("a denominator")?;
                    if r == 0 {
                        return Err(self.error_here("denominator must be nonzero"));
                    }
                    Ok(Expr::Rational(p, r))
                } else {
                    Ok(Expr::Rational(p, 1))
                }
            }
            Some(Token::LParen) => {
                self.advance();
                let inner = self.parse_expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Ident(_)) => {
                let Some(Token::Ident(name)) = self.advance() else { unreachable!() };
                match name.as_str() {
                    "q" => Ok(Expr::QUnit),
                    "i" => Ok(Expr::IUnit),
                    "a" => Ok(Expr::Annihilate),
                    "ad" => Ok(Expr::Create),
                    "Nop" => Ok(Expr::Number),
                    "xi" => Ok(Expr::Gen(GenKind::Unbarred, self.indexed("a generator index")?)),
                    "xb" => Ok(Expr::Gen(GenKind::Barred, self.indexed("a generator index")?)),
                    "dxi" => Ok(Expr::Diff(GenKind::Unbarred, self.indexed("a generator index")?)),
                    "dxb" => Ok(Expr::Diff(GenKind::Barred, self.indexed("a generator index")?)),
                    "qN" => {
                        self.expect(Token::LParen)?;
                        let s = self.expect_int("a phase exponent")?;
                        self.expect(Token::RParen)?;
                        Ok(Expr::QN(s))
                    }
                    "ket" | "bra" => {
                        let idx = self.indexed("a level 0..=2")?;
                        let n = u8::try_from(idx)
                            .ok()
                            .filter(|n| *n <= 2)
                            .ok_or_else(|| self.error_here("level must be 0, 1, or 2"))?;
                        Ok(if name == "ket" { Expr::Ket(n) } else { Expr::Bra(n) })
                    }
                    "integrate" => {
                        self.expect(Token::LParen)?;
                        let integrand = self.parse_expr()?;
                        self.expect(Token::Comma)?;
                        let var = self.parse_base()?;
                        let Expr::Gen(kind, idx) = var else {
                            return Err(self.error_here(
                                "integrate expects a generator like xi(0) as its second argument",
                            ));
                        };
                        self.expect(Token::RParen)?;
                        Ok(Expr::Integrate(Box::new(integrand), kind, idx))
                    }
                    other => Err(self.error_here(format!("unknown identifier '{other}'"))),
                }
            }
            Some(t) => Err(self.error_here(format!("expected an expression, found '{t}'"))),
            None => Err(self.error_here("expected an expression, found end of input")),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let expr = p.parse_expr()?;
    if let Some(t) = p.peek() {
        return Err(p.error_here(format!("unexpected trailing input '{t}'")));
    }
    Ok(expr)
}

/// Parse a parenthesized three-component tuple `(e0, e1, e2)`.
pub fn parse_tuple3(text: &str) -> Result<[Expr; 3], ParseError> {
    let mut p = Parser::new(text)?;
    p.expect(Token::LParen)?;
    let e0 = p.parse_expr()?;
    p.expect(Token::Comma)?;
    let e1 = p.parse_expr()?;
    p.expect(Token::Comma)?;
    let e2 = p.parse_expr()?;
    p.expect(Token::RParen)?;
    if let Some(t) = p.peek() {
        return Err(p.error_here(format!("unexpected trailing input '{t}'")));
    }
    Ok([e0, e1, e2])
}

fn needs_parens_in_product(e: &Expr) -> bool {
    matches!(e, Expr::Sum(_) | Expr::Neg(_))
}

fn needs_parens_in_power(e: &Expr) -> bool {
    matches!(e, Expr::Sum(_) | Expr::Prod(_) | Expr::Neg(_) | Expr::Pow(..))
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(p, 1) => write!(f, "{p}"),
            Expr::Rational(p, r) => write!(f, "{p}/{r}"),
            Expr::QUnit => f.write_str("q"),
            Expr::IUnit => f.write_str("i"),
            Expr::Gen(GenKind::Unbarred, a) => write!(f, "xi({a})"),
            Expr::Gen(GenKind::Barred, a) => write!(f, "xb({a})"),
            Expr::Diff(GenKind::Unbarred, a) => write!(f, "dxi({a})"),
            Expr::Diff(GenKind::Barred, a) => write!(f, "dxb({a})"),
            Expr::Annihilate => f.write_str("a"),
            Expr::Create => f.write_str("ad"),
            Expr::Number => f.write_str("Nop"),
            Expr::QN(s) => write!(f, "qN({s})"),
            Expr::Ket(n) => write!(f, "ket({n})"),
            Expr::Bra(n) => write!(f, "bra({n})"),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                write_wrapped(f, inner, matches!(**inner, Expr::Sum(_) | Expr::Prod(_)))
            }
            Expr::Sum(items) => {
                for (k, item) in items.iter().enumerate() {
                    if k == 0 {
                        write_wrapped(f, item, matches!(item, Expr::Sum(_)))?;
                        continue;
                    }
                    if let Expr::Neg(inner) = item {
                        f.write_str(" - ")?;
                        write_wrapped(f, inner, matches!(**inner, Expr::Sum(_)))?;
                    } else {
                        f.write_str(" + ")?;
                        write_wrapped(f, item, matches!(item, Expr::Sum(_)))?;
                    }
                }
                Ok(())
            }
            Expr::Prod(items) => {
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    let wrap = needs_parens_in_product(item) || matches!(item, Expr::Prod(_));
                    write_wrapped(f, item, wrap)?;
                }
                Ok(())
            }
            Expr::Pow(base, exp) => {
                write_wrapped(f, base, needs_parens_in_power(base))?;
                write!(f, "^{exp}")
            }
            Expr::Integrate(e, kind, idx) => {
                let var = match kind {
                    GenKind::Unbarred => format!("xi({idx})"),
                    GenKind::Barred => format!("xb({idx})"),
                };
                write!(f, "integrate({e}, {var})")
            }
        }
    }
}

/// Largest generator or differential index mentioned, if any.
pub fn max_generator_index(e: &Expr) -> Option<usize> {
    match e {
        Expr::Gen(_, a) | Expr::Diff(_, a) => Some(*a),
        Expr::Neg(inner) => max_generator_index(inner),
        Expr::Pow(inner, _) => max_generator_index(inner),
        Expr::Sum(items) | Expr::Prod(items) => {
            items.iter().filter_map(max_generator_index).max()
        }
        Expr::Integrate(inner, _, idx) => {
            Some(max_generator_index(inner).map_or(*idx, |m| m.max(*idx)))
        }
        _ => None,
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (1i64..=9, 1i64..=9).prop_map(|(p, r)| Expr::Rational(p, r)),
            Just(Expr::QUnit),
            Just(Expr::IUnit),
            (0usize..3).prop_map(|a| Expr::Gen(GenKind::Unbarred, a)),
            (0usize..3).prop_map(|a| Expr::Gen(GenKind::Barred, a)),
            (0usize..3).prop_map(|a| Expr::Diff(GenKind::Unbarred, a)),
            (0usize..3).prop_map(|a| Expr::Diff(GenKind::Barred, a)),
            Just(Expr::Annihilate),
            Just(Expr::Create),
            Just(Expr::Number),
            (-2i64..=2).prop_map(Expr::QN),
            (0u8..3).prop_map(Expr::Ket),
            (0u8..3).prop_map(Expr::Bra),
        ];
        leaf.prop_recursive(4, 32, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Sum),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Prod),
                (inner.clone(), 0u32..4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
                (inner, 0usize..3)
                    .prop_map(|(e, a)| Expr::Integrate(Box::new(e), GenKind::Barred, a)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_form_reparses_identically(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(e, reparsed);
        }
    }
}
