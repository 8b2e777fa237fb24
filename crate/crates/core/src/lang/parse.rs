//! Recursive-descent parser for the expression syntax.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | factor
//! factor := base ('^' '-'? int)?
//! base   := number | 'i' | ident | call | '(' expr ')'
//! call   := ('sin' | 'cos' | 'cot' | 'conj') '(' expr ')'
//! ```

use crate::error::{EngineError, Result};
use crate::kernel::rational::{parse_rational, GaussianRational, Rational};
use crate::kernel::{TrigRational, Var};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Ident {
    Alpha,
    A,
    Abar,
    Rho,
    B,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Func {
    Sin,
    Cos,
    Cot,
    Conj,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Ast {
    Number(Rational),
    I,
    Var(Ident),
    Call(Func, Box<Ast>),
    Neg(Box<Ast>),
    /// A left-associative chain `first op1 x1 op2 x2 ...` of one precedence level.
    Chain(Box<Ast>, Vec<(BinOp, Ast)>),
    Pow(Box<Ast>, i32),
    Paren(Box<Ast>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

/// Deepest nesting of parentheses and calls accepted.
pub const MAX_DEPTH: usize = 256;

fn syntax(offset: usize, expected: &[&str]) -> EngineError {
    EngineError::Syntax {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

const OPERAND: &[&str] = &["number", "i", "identifier", "(", "-"];

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn chain(first: Ast, rest: Vec<(BinOp, Ast)>) -> Ast {
        if rest.is_empty() {
            first
        } else {
            Ast::Chain(Box::new(first), rest)
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let first = self.term()?;
        let mut rest = Vec::new();
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(Self::chain(first, rest)),
            };
            self.pos += 1;
            rest.push((op, self.term()?));
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let first = self.unary()?;
        let mut rest = Vec::new();
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(Self::chain(first, rest)),
            };
            self.pos += 1;
            rest.push((op, self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        let mut negative = false;
        loop {
            if self.eat('-') {
                negative = !negative;
            } else if !self.eat('+') {
                break;
            }
        }
        let f = self.factor()?;
        Ok(if negative { Ast::Neg(Box::new(f)) } else { f })
    }

    fn nested(&mut self) -> Result<Ast> {
        if self.depth == MAX_DEPTH {
            return Err(EngineError::Domain(format!(
                "nesting deeper than {MAX_DEPTH} at byte {}",
                self.pos
            )));
        }
        self.depth += 1;
        let inner = self.expr();
        self.depth -= 1;
        inner
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.base()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        let digits = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return Err(syntax(start, &["integer"]));
        }
        self.pos += digits;
        let e: i32 = self.src[start..self.pos]
            .parse()
            .map_err(|_| EngineError::Domain(format!("exponent at byte {start} is too large")))?;
        Ok(Ast::Pow(Box::new(base), if negative { -e } else { e }))
    }

    fn number(&mut self) -> Result<Ast> {
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut n = bytes.iter().take_while(|b| b.is_ascii_digit()).count();
        if n < bytes.len() && bytes[n] == b'.' {
            let frac = bytes[n + 1..].iter().take_while(|b| b.is_ascii_digit()).count();
            if frac == 0 {
                return Err(syntax(start + n + 1, &["digit"]));
            }
            n += 1 + frac;
        }
        self.pos += n;
        let q = parse_rational(&self.src[start..self.pos]).ok_or_else(|| syntax(start, &["number"]))?;
        Ok(Ast::Number(q))
    }

    fn base(&mut self) -> Result<Ast> {
        let Some(ch) = self.peek() else {
            return Err(syntax(self.pos, OPERAND));
        };
        if ch.is_ascii_digit() || ch == '.' {
            return self.number();
        }
        if ch == '(' {
            self.pos += 1;
            let inner = self.nested()?;
            if !self.eat(')') {
                return Err(syntax(self.pos, &[")", "+", "-", "*", "/", "^"]));
            }
            return Ok(Ast::Paren(Box::new(inner)));
        }
        let start = self.pos;
        let len: usize = self
            .rest()
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .map(|c| c.len_utf8())
            .sum();
        if len == 0 {
            return Err(syntax(start, OPERAND));
        }
        let word = &self.src[start..start + len];
        self.pos += len;
        let func = match word {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "cot" => Some(Func::Cot),
            "conj" => Some(Func::Conj),
            _ => None,
        };
        if let Some(f) = func {
            if !self.eat('(') {
                return Err(syntax(self.pos, &["("]));
            }
            let arg = self.nested()?;
            if !self.eat(')') {
                return Err(syntax(self.pos, &[")", "+", "-", "*", "/", "^"]));
            }
            return Ok(Ast::Call(f, Box::new(arg)));
        }
        let id = match word {
            "i" => return Ok(Ast::I),
            "alpha" | "α" => Ident::Alpha,
            "a" => Ident::A,
            "abar" | "ā" => Ident::Abar,
            "rho" | "ρ" => Ident::Rho,
            "b" => Ident::B,
            _ => {
                return Err(syntax(
                    start,
                    &["i", "alpha", "a", "abar", "rho", "b", "sin", "cos", "cot", "conj"],
                ))
            }
        };
        Ok(Ast::Var(id))
    }
}

pub fn parse(text: &str) -> Result<Ast> {
    let mut p = Parser { src: text, pos: 0, depth: 0 };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return Err(syntax(p.pos, &["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(ast)
}

fn is_alpha(ast: &Ast) -> bool {
    match ast {
        Ast::Var(Ident::Alpha) => true,
        Ast::Paren(inner) => is_alpha(inner),
        _ => false,
    }
}

/// Lower an AST to a kernel value.
pub fn lower(ast: &Ast) -> Result<TrigRational> {
    Ok(match ast {
        Ast::Number(q) => TrigRational::constant(GaussianRational::real(q.clone())),
        Ast::I => TrigRational::constant(GaussianRational::i()),
        Ast::Var(Ident::Alpha) => {
            return Err(EngineError::Domain(
                "alpha may appear only as the argument of sin, cos or cot".into(),
            ))
        }
        Ast::Var(Ident::A) => TrigRational::var(Var::A),
        Ast::Var(Ident::Abar) => TrigRational::var(Var::Abar),
        Ast::Var(Ident::Rho) => TrigRational::var(Var::Rho),
        Ast::Var(Ident::B) => TrigRational::var(Var::B),
        Ast::Call(Func::Conj, arg) => lower(arg)?.conjugate(),
        Ast::Call(f, arg) => {
            if !is_alpha(arg) {
                return Err(EngineError::Domain(
                    "trigonometric functions take exactly `alpha` as argument".into(),
                ));
            }
            match f {
                Func::Sin => TrigRational::var(Var::S),
                Func::Cos => TrigRational::var(Var::C),
                Func::Cot => TrigRational::var(Var::C).div(&TrigRational::var(Var::S))?,
                Func::Conj => unreachable!(),
            }
        }
        Ast::Neg(x) => lower(x)?.neg(),
        Ast::Paren(x) => lower(x)?,
        Ast::Pow(x, e) => lower(x)?.pow(*e)?,
        Ast::Chain(first, rest) => {
            let mut acc = lower(first)?;
            for (op, y) in rest {
                let y = lower(y)?;
                acc = match op {
                    BinOp::Add => acc.add(&y)?,
                    BinOp::Sub => acc.sub(&y)?,
                    BinOp::Mul => acc.mul(&y)?,
                    BinOp::Div => acc.div(&y)?,
                };
            }
            acc
        }
    })
}

/// Parse and lower in one step.
pub fn parse_expr(text: &str) -> Result<TrigRational> {
    lower(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared() {
        assert!(parse_expr("i^2").unwrap().equals(&TrigRational::from_int(-1)).unwrap());
    }

    #[test]
    fn pythagoras_vanishes() {
        assert!(parse_expr("sin(alpha)^2 + cos(alpha)^2 - 1").unwrap().is_zero());
    }

    #[test]
    fn unicode_alpha() {
        let x = parse_expr("cot(α)").unwrap();
        assert!(x.equals(&parse_expr("cos(alpha)/sin(alpha)").unwrap()).unwrap());
    }

    #[test]
    fn precedence() {
        let x = parse_expr("-a^2 + 2*b/4").unwrap();
        let y = parse_expr("(b - 2*a*a)/2").unwrap();
        assert!(x.equals(&y).unwrap());
        assert!(parse_expr("a^-2*a^2").unwrap().equals(&TrigRational::one()).unwrap());
    }

    #[test]
    fn errors_are_positioned() {
        match parse("a + * b") {
            Err(EngineError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("sin(alpha"), Err(EngineError::Syntax { offset: 9, .. })));
        assert!(matches!(parse_expr("alpha + 1"), Err(EngineError::Domain(_))));
        assert!(matches!(parse_expr("sin(a)"), Err(EngineError::Domain(_))));
        assert!(matches!(parse_expr("1/(a-a)"), Err(EngineError::ZeroDenominator)));
    }

    #[test]
    fn long_and_deep_inputs() {
        let long = vec!["a*b"; 20_000].join(" + ");
        assert!(parse_expr(&long).unwrap().equals(&parse_expr("20000*a*b").unwrap()).unwrap());
        assert!(parse_expr(&"-".repeat(100_001)).is_err());
        assert!(parse_expr(&format!("{}a", "-".repeat(100_001))).unwrap().equals(&parse_expr("-a").unwrap()).unwrap());
        let ok = format!("{}a{}", "(".repeat(MAX_DEPTH), ")".repeat(MAX_DEPTH));
        assert!(parse_expr(&ok).is_ok());
        let deep = format!("{}a{}", "(".repeat(100_000), ")".repeat(100_000));
        assert!(matches!(parse_expr(&deep), Err(EngineError::Domain(_))));
    }
}
