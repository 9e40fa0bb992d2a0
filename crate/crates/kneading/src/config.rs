//! Run configuration and the parameter grammar shared by the frontend.
//!
//! Parameters are exact: decimal literals and `p/q` become rationals, and the
//! names `golden` and `plastic` become exact algebraic numbers. They combine
//! with `+ - * /` and parentheses, e.g. `1/(1+plastic)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebraic::Algebraic;
use crate::entropy::SolverOptions;
use crate::error::{Error, Result};
use crate::inverse::InverseOptions;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    /// Requested working precision. Floating work runs in double-double
    /// (106 bits); the value is validated and recorded.
    pub precision_bits: u32,
    pub tol: f64,
    pub max_iter: usize,
    pub horizon_cap: usize,
    pub output: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision_bits: 128, tol: 1e-12, max_iter: 200, horizon_cap: 1_000_000, output: OutputFormat::Text }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::Config(format!("precision_bits must be at least 64, got {}", self.precision_bits)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if self.horizon_cap < 1 {
            return Err(Error::Config("horizon_cap must be at least 1".into()));
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, max_iter: self.max_iter, horizon_cap: self.horizon_cap }
    }

    pub fn inverse_options(&self) -> InverseOptions {
        InverseOptions { solver: self.solver_options(), ..InverseOptions::default() }
    }
}

/// Parses a parameter expression into an exact number.
pub fn parse_param(src: &str) -> Result<Algebraic> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let x = p.expr()?;
    if p.pos != toks.len() {
        return Err(bad(src, "trailing input"));
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Name(String),
    Op(char),
}

fn bad(src: &str, why: &str) -> Error {
    Error::BadParams(format!("cannot parse parameter {src:?}: {why}"))
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            if i < cs.len() && (cs[i] == 'e' || cs[i] == 'E') {
                i += 1;
                if i < cs.len() && (cs[i] == '+' || cs[i] == '-') {
                    i += 1;
                }
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&lit).ok_or_else(|| bad(src, &format!("bad number {lit:?}")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Name(cs[start..i].iter().collect()));
        } else {
            return Err(bad(src, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `0.43015970905` or `1.5e-3`.
fn parse_decimal(lit: &str) -> Option<BigRational> {
    let (mant, exp) = match lit.find(['e', 'E']) {
        Some(i) => (&lit[..i], i64::from_str(&lit[i + 1..]).ok()?),
        None => (lit, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, e.unsigned_abs() as usize);
    Some(if e >= 0 { BigRational::from_integer(digits * scale) } else { BigRational::new(digits, scale) })
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Algebraic> {
        let mut x = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let y = self.term()?;
            same_field(&x, &y)?;
            x = if op == '+' { x + y } else { x - y };
        }
        Ok(x)
    }

    fn term(&mut self) -> Result<Algebraic> {
        let mut x = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let y = self.factor()?;
            same_field(&x, &y)?;
            if op == '*' {
                x = x * y;
            } else {
                if y.is_zero() {
                    return Err(Error::BadParams("division by zero in parameter".into()));
                }
                x = x / y;
            }
        }
        Ok(x)
    }

    fn factor(&mut self) -> Result<Algebraic> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Op('-')) => Ok(-self.factor()?),
            Some(Tok::Op('+')) => self.factor(),
            Some(Tok::Op('(')) => {
                let x = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::BadParams("unbalanced parentheses in parameter".into()));
                }
                self.pos += 1;
                Ok(x)
            }
            Some(Tok::Num(q)) => Ok(Algebraic::from_rational(q)),
            Some(Tok::Name(n)) => match n.as_str() {
                "golden" => Ok(Algebraic::golden()),
                "plastic" => Ok(Algebraic::plastic()),
                _ => Err(Error::BadParams(format!("unknown constant {n:?}; expected golden or plastic"))),
            },
            Some(Tok::Op(c)) => Err(Error::BadParams(format!("unexpected {c:?} in parameter"))),
            None => Err(Error::BadParams("parameter expression ends early".into())),
        }
    }
}

fn same_field(a: &Algebraic, b: &Algebraic) -> Result<()> {
    match (a.field(), b.field()) {
        (Some(f), Some(g)) if !std::sync::Arc::ptr_eq(f, g) => {
            Err(Error::BadParams("cannot mix golden and plastic in one parameter".into()))
        }
        _ => Ok(()),
    }
}

/// Rational value of a parameter, when it has one.
pub fn as_rational(x: &Algebraic) -> Option<BigRational> {
    match x.repr().degree() {
        None => Some(BigRational::zero()),
        Some(0) => Some(x.repr().coeffs()[0].clone()),
        _ => None,
    }
}
