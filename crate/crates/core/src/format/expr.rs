//! Expression syntax shared by every value in a tower file.
//!
//! ```text
//! sum     = product { ("+" | "-") product }
//! product = unary { ("*" | "/") unary | unary }      juxtaposition multiplies
//! unary   = "-" unary | power
//! power   = atom [ "^" ["-"] integer ]
//! atom    = integer | name | call | "(" sum ")" | matrix
//! call    = ("gen" | "conj" | "inner" | "linear") "(" sum ")"
//! matrix  = "[" row { "," row } "]"
//! row     = "[" sum { "," sum } "]"
//! ```

/// Functions recognised before `(`.
pub(crate) const CALLS: [&str; 4] = ["gen", "conj", "inner", "linear"];

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Kind {
    Int(i64),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(String, Box<Expr>),
    Matrix(Vec<Vec<Expr>>),
}

/// Expression node with its byte offset in the source string.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Expr {
    pub kind: Kind,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Name(String),
    Sym(char),
}

/// Syntax error at a byte offset.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SyntaxError {
    pub pos: usize,
    pub message: String,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
            }
            out.push((Tok::Int(s), i));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                chars.next();
            }
            out.push((Tok::Name(s), i));
        } else if "+-*/^()[],".contains(c) {
            out.push((Tok::Sym(c), i));
            chars.next();
        } else {
            return Err(SyntaxError { pos: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos: self.pos(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn sum(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.product()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('+') {
                Kind::Add(Box::new(lhs), Box::new(self.product()?))
            } else if self.eat('-') {
                Kind::Sub(Box::new(lhs), Box::new(self.product()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { kind, pos };
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Name(_) | Tok::Sym('(' | '[')))
    }

    fn product(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('*') {
                Kind::Mul(Box::new(lhs), Box::new(self.unary()?))
            } else if self.eat('/') {
                Kind::Div(Box::new(lhs), Box::new(self.unary()?))
            } else if self.starts_atom() {
                Kind::Mul(Box::new(lhs), Box::new(self.power()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { kind, pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        if self.eat('-') {
            return Ok(Expr { kind: Kind::Neg(Box::new(self.unary()?)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let Some(Tok::Int(s)) = self.peek().cloned() else {
            return self.fail("expected an integer exponent");
        };
        let e: i64 = s.parse().or_else(|_| self.fail("exponent out of range"))?;
        self.at += 1;
        Ok(Expr { kind: Kind::Pow(Box::new(base), if negative { -e } else { e }), pos })
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                let n: i64 = s.parse().or_else(|_| self.fail("integer literal out of range"))?;
                self.at += 1;
                Ok(Expr { kind: Kind::Int(n), pos })
            }
            Some(Tok::Name(name)) => {
                self.at += 1;
                if CALLS.contains(&name.as_str()) && self.peek() == Some(&Tok::Sym('(')) {
                    self.at += 1;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    return Ok(Expr { kind: Kind::Call(name, Box::new(arg)), pos });
                }
                Ok(Expr { kind: Kind::Name(name), pos })
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.at += 1;
                let mut rows = Vec::new();
                loop {
                    self.expect('[')?;
                    let mut row = vec![self.sum()?];
                    while self.eat(',') {
                        row.push(self.sum()?);
                    }
                    self.expect(']')?;
                    rows.push(row);
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(']')?;
                Ok(Expr { kind: Kind::Matrix(rows), pos })
            }
            Some(Tok::Sym(c)) => self.fail(format!("unexpected `{c}`")),
            None => self.fail("unexpected end of expression"),
        }
    }
}

pub(crate) fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str, pos: usize) -> Box<Expr> {
        Box::new(Expr { kind: Kind::Name(s.into()), pos })
    }

    #[test]
    fn juxtaposition_binds_like_star() {
        let e = parse("x1 x2").unwrap();
        assert_eq!(e.kind, Kind::Mul(name("x1", 0), name("x2", 3)));
    }

    #[test]
    fn power_binds_tighter_than_minus() {
        let e = parse("-t^2").unwrap();
        let Kind::Neg(inner) = e.kind else { panic!("{e:?}") };
        assert!(matches!(inner.kind, Kind::Pow(_, 2)));
    }

    #[test]
    fn matrix_and_call() {
        let e = parse("conj([[1, 0], [0, q]])").unwrap();
        let Kind::Call(f, arg) = e.kind else { panic!() };
        assert_eq!(f, "conj");
        assert!(matches!(&arg.kind, Kind::Matrix(rows) if rows.len() == 2 && rows[1].len() == 2));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("x1 + ").unwrap_err().pos, 5);
        assert_eq!(parse("x1 # 2").unwrap_err().pos, 3);
        assert_eq!(parse("(x1").unwrap_err().message, "expected `)`");
    }
}
