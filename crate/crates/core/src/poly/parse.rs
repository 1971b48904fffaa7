//! Text grammar: integers, variables `x0..xN` or `t1..tN`, `+ - * ^` and parentheses.

use num_bigint::BigInt;

use super::{IntPoly, VarStyle};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoly {
    pub poly: IntPoly,
    pub style: VarStyle,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
}

/// Parses with the variable count inferred from the largest index used.
pub fn parse_poly(s: &str) -> Result<ParsedPoly> {
    parse_impl(s, None)
}

/// Parses into a ring with exactly `nvars` variables.
pub fn parse_poly_in(s: &str, nvars: usize) -> Result<ParsedPoly> {
    parse_impl(s, Some(nvars))
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(s: &str) -> Result<(Vec<(usize, Tok)>, Option<VarStyle>)> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut style = None;
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().unwrap())));
        } else if c == 'x' || c == 't' {
            let st = i;
            i += 1;
            let ds = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if ds == i {
                return Err(err(st, "variable needs an index"));
            }
            let idx: usize = s[ds..i].parse().map_err(|_| err(ds, "bad variable index"))?;
            let this = if c == 'x' { VarStyle::X } else { VarStyle::T };
            if style.is_some_and(|s| s != this) {
                return Err(err(st, "cannot mix x and t variables"));
            }
            style = Some(this);
            let idx = if this == VarStyle::T {
                if idx == 0 {
                    return Err(err(st, "t variables start at t1"));
                }
                idx - 1
            } else {
                idx
            };
            out.push((st, Tok::Var(idx)));
        } else if "+-*^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character '{c}'")));
        }
    }
    Ok((out, style))
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    i: usize,
    end: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.i += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op('*')) = self.peek() {
            self.i += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.i += 1;
                    let e: u32 = n.try_into().map_err(|_| err(pos, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(err(pos, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(IntPoly::constant(self.nvars, n))
            }
            Some(Tok::Var(v)) => {
                self.i += 1;
                Ok(IntPoly::var(self.nvars, v))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(err(self.pos(), "expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(_) => Err(err(pos, "unexpected token")),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

fn parse_impl(s: &str, nvars: Option<usize>) -> Result<ParsedPoly> {
    let (toks, style) = lex(s)?;
    let max_idx = toks.iter().filter_map(|t| if let Tok::Var(v) = t.1 { Some(v) } else { None }).max();
    let needed = max_idx.map_or(0, |m| m + 1);
    let nvars = match nvars {
        Some(n) if n < needed => {
            let pos = toks.iter().find(|t| matches!(t.1, Tok::Var(v) if v >= n)).unwrap().0;
            return Err(err(pos, format!("variable index exceeds the {n} declared variables")));
        }
        Some(n) => n,
        None => needed,
    };
    if toks.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut p = Parser { toks: &toks, i: 0, end: s.len(), nvars };
    let poly = p.expr()?;
    if p.i != toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(ParsedPoly { poly, style: style.unwrap_or_default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example() {
        let p = parse_poly("x0^3 + 2*x1*x2^2 - x3^3").unwrap();
        assert_eq!(p.poly.nvars(), 4);
        assert_eq!(p.poly.degree(), Some(3));
        assert_eq!(p.poly.num_terms(), 3);
        assert_eq!(p.style, VarStyle::X);
        let q = parse_poly(" ( x0 - x1 ) ^2 ").unwrap().poly;
        assert_eq!(q.to_string(), "x0^2 - 2*x0*x1 + x1^2");
        let t = parse_poly("t1 - t2^2").unwrap();
        assert_eq!(t.poly.nvars(), 2);
        assert_eq!(t.style, VarStyle::T);
        assert_eq!(parse_poly("-3").unwrap().poly.nvars(), 0);
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_poly("x0 + + "), Err(Error::Parse { pos: 7, msg: "unexpected end of input".into() }));
        assert!(matches!(parse_poly("x0 + y1"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_poly("x0 + t1"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_poly("x0^x1"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly("(x0"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly("x0 x1"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly_in("x0*x3", 3), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly("t0"), Err(Error::Parse { pos: 0, .. })));
    }
}
