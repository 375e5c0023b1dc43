//! Polynomial expressions over declared parameters.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      division only by nonzero constants
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! number := digits ('.' digits)?
//! ```

use std::sync::Arc;

use eigconf::rational::parse_rational;
use eigconf::{MultiPoly, Rational, VarTable};
use num_traits::Zero;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, CliError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(CliError::Input(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    table: &'a Arc<VarTable>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> CliError {
        CliError::Input(format!("{what} in expression {:?}", self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, CliError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, CliError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                let d = rhs
                    .as_constant()
                    .filter(|d| !d.is_zero())
                    .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                acc = acc.scale(&(Rational::from_integer(1.into()) / d));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, CliError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, CliError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.parse().map_err(|_| self.err("exponent must be a small non-negative integer"))?;
                    self.pos += 1;
                    return Ok(base.pow(k));
                }
                _ => return Err(self.err("expected an exponent after '^'")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, CliError> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => {
                let q = parse_rational(&n).map_err(|_| self.err(&format!("bad number {n:?}")))?;
                Ok(MultiPoly::constant(self.table, q))
            }
            Some(Tok::Ident(name)) => MultiPoly::var(self.table, &name)
                .map_err(|_| self.err(&format!("undeclared parameter {name:?}"))),
            Some(Tok::Op('(')) => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.err("expected a number, parameter or '('")),
        }
    }
}

pub fn parse_expr(src: &str, table: &Arc<VarTable>) -> Result<MultiPoly, CliError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(CliError::Input("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, table, src };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Arc<VarTable> {
        VarTable::single("p", vec!["p".into(), "q".into()]).unwrap()
    }

    #[test]
    fn precedence_and_powers() {
        let tb = t();
        let e = parse_expr("2*p^2 - (q + 1)/2 + -3", &tb).unwrap();
        assert_eq!(e.to_string(), "2*p^2 - 1/2*q - 7/2");
        assert_eq!(parse_expr("1.5", &tb).unwrap().as_constant().unwrap(), Rational::new(3.into(), 2.into()));
        assert_eq!(parse_expr("-p*-q", &tb).unwrap(), parse_expr("p*q", &tb).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let tb = t();
        for bad in ["", "p +", "r", "p/q", "1/0", "(p", "p q", "p ^ q", "3 $"] {
            assert!(parse_expr(bad, &tb).is_err(), "{bad}");
        }
    }
}
