//! Operator expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := int | 'x' idx ('^' int)? | 'd' idx '[' nat ']' | '(' expr ')'
//! ```

use std::fmt;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::scalars::{Fp, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    /// `x<var>^<exp>`, `var` 1-based.
    X {
        var: usize,
        exp: i64,
    },
    /// `d<var>[<order>]`.
    D {
        var: usize,
        order: u64,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

impl fmt::Display for Expr {
    /// Fully parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::X { var, exp: 1 } => write!(f, "x{var}"),
            Expr::X { var, exp } => write!(f, "x{var}^{exp}"),
            Expr::D { var, order } => write!(f, "d{var}[{order}]"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected '{}'", c as char)))
        }
    }

    fn unexpected(&mut self, what: &str) -> Error {
        match self.peek() {
            Some(c) => syntax(self.pos, format!("{what}, found '{}'", c as char)),
            None => syntax(self.pos, format!("{what}, found end of input")),
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("expected a natural number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| syntax(start, "number too large"))
    }

    fn int(&mut self) -> Result<i64> {
        let negative = self.eat(b'-');
        let start = self.pos;
        let v = self.nat()?;
        let v = i64::try_from(v).map_err(|_| syntax(start, "number too large"))?;
        Ok(if negative { -v } else { v })
    }

    fn index(&mut self) -> Result<usize> {
        // no whitespace between the variable letter and its index
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return Err(syntax(self.pos, "expected a variable index"));
        }
        let start = self.pos;
        let v = self.nat()?;
        if v == 0 {
            return Err(syntax(start, "variable indices start at 1"));
        }
        usize::try_from(v).map_err(|_| syntax(start, "index too large"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let atom = self.atom()?;
        if self.eat(b'^') {
            return Ok(Expr::Pow(Box::new(atom), self.nat()?));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let var = self.index()?;
                let exp = if self.eat(b'^') { self.int()? } else { 1 };
                Ok(Expr::X { var, exp })
            }
            Some(b'd') => {
                self.pos += 1;
                let var = self.index()?;
                self.expect(b'[')?;
                let order = self.nat()?;
                self.expect(b']')?;
                Ok(Expr::D { var, order })
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.nat()?)),
            _ => Err(self.unexpected("expected an operand")),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected("expected an operator"));
    }
    Ok(expr)
}

/// Normal form of an expression in `D(L_n)` over `F_p`.
pub fn eval(expr: &Expr, p: Prime, n: usize) -> Result<DiffOp> {
    let check = |var: usize| {
        if var > n {
            Err(Error::Invalid(format!(
                "variable index {var} exceeds n = {n}"
            )))
        } else {
            Ok(var - 1)
        }
    };
    Ok(match expr {
        Expr::Int(v) => DiffOp::one(p, n).scale(Fp::new((*v % p.get() as u64) as i64, p)),
        Expr::X { var, exp } => DiffOp::x_power(p, n, check(*var)?, *exp),
        Expr::D { var, order } => DiffOp::divided(p, n, check(*var)?, *order),
        Expr::Add(a, b) => &eval(a, p, n)? + &eval(b, p, n)?,
        Expr::Sub(a, b) => &eval(a, p, n)? - &eval(b, p, n)?,
        Expr::Mul(a, b) => &eval(a, p, n)? * &eval(b, p, n)?,
        Expr::Pow(a, e) => eval(a, p, n)?.pow(*e),
    })
}

/// `parse` then `eval`.
pub fn normalize(text: &str, p: Prime, n: usize) -> Result<DiffOp> {
    eval(&parse(text)?, p, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("d1[2]*x1").unwrap(),
            Expr::Mul(
                Box::new(Expr::D { var: 1, order: 2 }),
                Box::new(Expr::X { var: 1, exp: 1 })
            )
        );
        assert_eq!(parse("x1^-1").unwrap(), Expr::X { var: 1, exp: -1 });
        assert_eq!(
            parse(" ( x2 ^ 3 ) ^2 ").unwrap(),
            Expr::Pow(Box::new(Expr::X { var: 2, exp: 3 }), 2)
        );
        assert_eq!(parse("1 - 2 + 3").unwrap().to_string(), "((1 - 2) + 3)");
    }

    #[test]
    fn syntax_errors_report_offsets() {
        let offset = |s: &str| match parse(s) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(offset("d1[2]*"), 6);
        assert_eq!(offset("x1 x2"), 3);
        assert_eq!(offset("d1[2"), 4);
        assert_eq!(offset("x 1"), 1);
        assert_eq!(offset("x0"), 1);
        assert_eq!(offset("(x1"), 3);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("x1^-"), 4);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            normalize("d1[2]*x1", p(3), 1).unwrap().to_string(),
            "x1*d1[2] + d1[1]"
        );
        assert!(normalize("(d1[1]+x1^-1)^2", p(2), 1).unwrap().is_zero());
        assert!(normalize("d1[1]*d1[1]", p(2), 1).unwrap().is_zero());
        assert_eq!(normalize("7", p(5), 1).unwrap().to_string(), "2");
        assert!(matches!(normalize("x2", p(5), 1), Err(Error::Invalid(_))));
    }
}
