//! Infix text form of [`Expr`].
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' (int | '(' '-' int ')'))?
//! atom    := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! number  := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! Integer literals are exact rationals; literals with a fraction or exponent
//! are doubles. Functions: `sin cos sinh cosh tanh sqrt exp` (one argument)
//! and `ch shc thc` (two arguments, Λ first). `print` emits the canonical
//! form, and `parse(print(e)) == e` for every normalized tree.

use num_traits::{One, Signed};

use super::{Curv, Expr, Func};
use crate::error::{Error, Result};
use crate::scalar::Rational;

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

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
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(Expr::neg(self.term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = Expr::mul(vec![acc, rhs]);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = Expr::div(acc, rhs);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let n = if self.eat(b'(') {
            self.expect(b'-')?;
            let n = -self.integer()?;
            self.expect(b')')?;
            n
        } else {
            self.integer()?
        };
        Ok(Expr::pow(base, n))
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected integer exponent"))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while self.eat(b',') {
                        args.push(self.expr()?);
                    }
                    self.expect(b')')?;
                    self.call(&name, args)
                } else {
                    Ok(Expr::Var(name))
                }
            }
            _ => Err(self.err("expected expression")),
        }
    }

    fn call(&self, name: &str, mut args: Vec<Expr>) -> Result<Expr> {
        if let Some(f) = Func::ALL.into_iter().find(|f| f.name() == name) {
            if args.len() != 1 {
                return Err(self.err(&format!("`{name}` takes one argument")));
            }
            return Ok(Expr::func(f, args.pop().unwrap()));
        }
        if let Some(c) = Curv::ALL.into_iter().find(|c| c.name() == name) {
            if args.len() != 2 {
                return Err(self.err(&format!("`{name}` takes two arguments (Lambda, u)")));
            }
            let u = args.pop().unwrap();
            let l = args.pop().unwrap();
            return Ok(Expr::curv(c, l, u));
        }
        Err(self.err(&format!("unknown function `{name}`")))
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        let mut float = false;
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            float = true;
            self.pos += 1;
            digits(self);
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            float = true;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            digits(self);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if float {
            text.parse::<f64>().map(Expr::Float).map_err(|_| self.err("malformed number"))
        } else {
            text.parse::<num_bigint::BigInt>()
                .map(|n| Expr::Const(Rational::from_integer(n)))
                .map_err(|_| self.err("malformed integer"))
        }
    }
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_FACTOR: u8 = 3;
const PREC_BASE: u8 = 5;

pub fn print(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, 0, &mut out);
    out
}

fn paren(out: &mut String, wrap: bool, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}

fn write_const(c: &Rational, parent: u8, out: &mut String) {
    let compound = c.is_negative() || !c.denom().is_one();
    paren(out, compound && parent >= PREC_FACTOR, |out| out.push_str(&c.to_string()));
}

fn write_float(f: f64, parent: u8, out: &mut String) {
    paren(out, f < 0.0 && parent >= PREC_FACTOR, |out| out.push_str(&format!("{f:?}")));
}

fn write_expr(e: &Expr, parent: u8, out: &mut String) {
    match e {
        Expr::Const(c) => write_const(c, parent, out),
        Expr::Float(f) => write_float(*f, parent, out),
        Expr::Var(v) => out.push_str(v),
        Expr::Add(terms) => paren(out, parent > PREC_ADD, |out| {
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    write_expr(t, PREC_ADD, out);
                    continue;
                }
                match t {
                    Expr::Neg(inner) => {
                        out.push_str(" - ");
                        write_expr(inner, PREC_MUL, out);
                    }
                    Expr::Const(c) if c.is_negative() => {
                        out.push_str(" - ");
                        write_const(&-c.clone(), PREC_MUL, out);
                    }
                    Expr::Float(f) if *f < 0.0 => {
                        out.push_str(" - ");
                        write_float(-f, PREC_MUL, out);
                    }
                    Expr::Mul(fs) if leading_negative(fs) => {
                        out.push_str(" - ");
                        write_expr(&Expr::neg(t.clone()), PREC_MUL, out);
                    }
                    _ => {
                        out.push_str(" + ");
                        write_expr(t, PREC_ADD, out);
                    }
                }
            }
        }),
        Expr::Mul(fs) => paren(out, parent > PREC_MUL, |out| {
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                match f {
                    // a leading rational prints bare: `1/2*x` reads back as (1/2)*x
                    Expr::Const(c) if i == 0 => out.push_str(&c.to_string()),
                    Expr::Float(x) if i == 0 => out.push_str(&format!("{x:?}")),
                    _ => write_expr(f, PREC_FACTOR, out),
                }
            }
        }),
        Expr::Neg(inner) => paren(out, parent >= PREC_FACTOR, |out| {
            out.push('-');
            write_expr(inner, PREC_MUL, out);
        }),
        Expr::Div(a, b) => paren(out, parent > PREC_MUL, |out| {
            write_expr(a, PREC_MUL, out);
            out.push('/');
            write_expr(b, PREC_FACTOR, out);
        }),
        Expr::Pow(b, n) => paren(out, parent >= PREC_BASE, |out| {
            write_expr(b, PREC_BASE, out);
            if *n < 0 {
                out.push_str(&format!("^({n})"));
            } else {
                out.push_str(&format!("^{n}"));
            }
        }),
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(a, 0, out);
            out.push(')');
        }
        Expr::Curv(c, l, u) => {
            out.push_str(c.name());
            out.push('(');
            write_expr(l, 0, out);
            out.push_str(", ");
            write_expr(u, 0, out);
            out.push(')');
        }
    }
}

fn leading_negative(fs: &[Expr]) -> bool {
    match fs.first() {
        Some(Expr::Const(c)) => c.is_negative(),
        Some(Expr::Float(f)) => *f < 0.0,
        _ => false,
    }
}
