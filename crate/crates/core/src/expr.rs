//! Element expressions: a small grammar for writing tower elements on the
//! command line. Tokens: integer literals, `d` (the period delta), `z`
//! (zeta_p), `zN` (zeta_N for N dividing the ambient conductor), `+ - * ^`
//! and parentheses. `^` takes an integer exponent, possibly negative.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::cyclo::{coerce, CycloElement};
use crate::tower::TowerContext;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Int(#[serde(with = "crate::serde_util::big_int")] BigInt),
    Delta,
    ZetaP,
    Zeta(u64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// A parsed element expression, remembering its source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementExpr {
    pub source: String,
    pub ast: Expr,
}

/// Parse an expression; errors carry the byte offset of the offending token.
pub fn parse_element(text: &str) -> Result<ElementExpr> {
    let mut parser = Parser { text: text.as_bytes(), pos: 0 };
    parser.skip_ws();
    let ast = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(ElementExpr { source: text.to_string(), ast })
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { message: message.to_string(), offset: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    let rhs = self.term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    let rhs = self.term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                    let rhs = self.factor()?;
                    acc = Expr::Mul(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let negative = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let digits = self.integer_literal()?;
            let exp = digits
                .to_i64()
                .ok_or_else(|| self.error("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), if negative { -exp } else { exp }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.atom()?;
                Ok(Expr::Neg(Box::new(inner)))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer_literal()?)),
            Some(b'd') => {
                self.pos += 1;
                Ok(Expr::Delta)
            }
            Some(b'z') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == start {
                    Ok(Expr::ZetaP)
                } else {
                    let n: u64 = std::str::from_utf8(&self.text[start..self.pos])
                        .expect("digits")
                        .parse()
                        .map_err(|_| self.error("root-of-unity index out of range"))?;
                    Ok(Expr::Zeta(n))
                }
            }
            Some(_) => Err(self.error("expected a term")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer_literal(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("digits");
        s.parse().map_err(|_| self.error("bad integer literal"))
    }
}

impl ElementExpr {
    /// Evaluate in the tower's ambient field and validate membership in L.
    pub fn eval(&self, tower: &TowerContext) -> Result<CycloElement> {
        let value = eval_ast(&self.ast, tower)?;
        if !tower.in_l(&value) {
            return Err(Error::InvalidParameter(format!(
                "expression {:?} does not lie in L",
                self.source
            )));
        }
        Ok(value)
    }
}

fn eval_ast(ast: &Expr, tower: &TowerContext) -> Result<CycloElement> {
    let m = tower.conductor();
    match ast {
        Expr::Int(n) => {
            CycloElement::from_rational(m, num_rational::BigRational::from(n.clone()))
        }
        Expr::Delta => Ok(tower.delta().clone()),
        Expr::ZetaP => Ok(tower.zeta_p()),
        Expr::Zeta(n) => {
            if *n == 0 || m % n != 0 {
                return Err(Error::InvalidParameter(format!(
                    "zeta_{n} does not live in the ambient field of conductor {m}"
                )));
            }
            coerce(&CycloElement::zeta(*n)?, m)
        }
        Expr::Neg(inner) => Ok(eval_ast(inner, tower)?.neg()),
        Expr::Add(a, b) => eval_ast(a, tower)?.checked_add(&eval_ast(b, tower)?),
        Expr::Sub(a, b) => eval_ast(a, tower)?.checked_sub(&eval_ast(b, tower)?),
        Expr::Mul(a, b) => eval_ast(a, tower)?.checked_mul(&eval_ast(b, tower)?),
        Expr::Pow(a, n) => eval_ast(a, tower)?.pow(*n),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Delta => write!(f, "d"),
            Expr::ZetaP => write!(f, "z"),
            Expr::Zeta(n) => write!(f, "z{n}"),
            Expr::Neg(x) => write!(f, "(-{x})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, n) => {
                if *n < 0 {
                    write!(f, "({a}^-{})", -n)
                } else {
                    write!(f, "({a}^{n})")
                }
            }
        }
    }
}

impl fmt::Display for ElementExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ast)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{build_tower, TowerSpec};

    #[test]
    fn worked_inputs_evaluate() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        let x = parse_element("d + z").unwrap().eval(&ctx).unwrap();
        let expect = ctx.delta().checked_add(&ctx.zeta_p()).unwrap();
        assert_eq!(x, expect);

        let ctx9 = build_tower(&TowerSpec::zeta_p2(3)).unwrap();
        let x = parse_element("z9 + 2").unwrap().eval(&ctx9).unwrap();
        let expect = CycloElement::zeta(9)
            .unwrap()
            .checked_add(&CycloElement::from_integer(9, 2).unwrap())
            .unwrap();
        assert_eq!(x, expect);
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_element("d + + z").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 4),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_element("").is_err());
        assert!(parse_element("d +").is_err());
        assert!(parse_element("(d").is_err());
        assert!(parse_element("d )").is_err());
    }

    #[test]
    fn precedence_and_negatives() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        // 2*d + z^2 parses as (2*d) + (z^2)
        let a = parse_element("2*d + z^2").unwrap().eval(&ctx).unwrap();
        let expect = ctx
            .delta()
            .scale(&num_rational::BigRational::from(BigInt::from(2)))
            .checked_add(&ctx.zeta_p().pow(2).unwrap())
            .unwrap();
        assert_eq!(a, expect);
        // unary minus and negative exponents
        let b = parse_element("-d + z^-1").unwrap().eval(&ctx).unwrap();
        let expect = ctx
            .delta()
            .neg()
            .checked_add(&ctx.zeta_p().pow(-1).unwrap())
            .unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn membership_is_validated() {
        let ctx = build_tower(&TowerSpec::gauss(3, 7)).unwrap();
        // zeta_21 is in the ambient field but not in L
        assert!(parse_element("z21").unwrap().eval(&ctx).is_err());
        // zeta_5 is not in the ambient field at all
        assert!(parse_element("z5").unwrap().eval(&ctx).is_err());
        // zeta_7 lies in the ambient field but outside L as well
        assert!(parse_element("z7").unwrap().eval(&ctx).is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        for src in ["d + z", "2*d - z^2", "-(d + 1)*z", "d^-1 + 3", "z9 + 2"] {
            let parsed = parse_element(src).unwrap();
            let printed = parsed.to_string();
            let reparsed = parse_element(&printed).unwrap();
            assert_eq!(reparsed.ast, parsed.ast, "roundtrip of {src} via {printed}");
        }
    }
}
