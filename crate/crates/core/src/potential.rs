//! Radial potentials: expression grammar, evaluation and constructed
//! potentials with a known ground state.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-' term | factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' number)?
//! atom   := number | 'r' | 'ln' '(' expr ')' | '(' expr ')'
//! number := decimal literal, optionally signed inside parentheses: r^(-0.5)
//! ```
//!
//! A leading minus negates the whole product that follows it, so `-1/r`
//! parses as `Neg(Div(1, r))`. Numeric constants are kept as decimal text
//! and only rounded when evaluated, which lets the same expression be run at
//! several precisions without re-parsing.

use std::fmt;

use thiserror::Error;

use crate::arith::{ArithError, BigReal, PowerSeries, PrecisionContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("syntax error at position {pos}: {message}")]
    SyntaxError { pos: usize, message: String },
    #[error("unknown symbol {name:?} at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("domain error: {0}")]
    DomainError(String),
}

/// A decimal constant stored exactly as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal(String);

impl Literal {
    pub fn new(text: &str) -> Result<Self, ArithError> {
        // Validate once at a cheap precision.
        PrecisionContext::default().parse(text)?;
        Ok(Self(text.trim().to_string()))
    }

    /// Literal with `ctx.digits()` significant digits of `value`.
    pub fn from_real(value: &BigReal, ctx: &PrecisionContext) -> Self {
        Self(value.to_short_string(ctx.digits() as usize))
    }

    pub fn from_int(v: i64) -> Self {
        Self(v.to_string())
    }

    pub fn text(&self) -> &str {
        &self.0
    }

    pub fn value(&self, ctx: &PrecisionContext) -> BigReal {
        ctx.parse(&self.0)
            .expect("literal validated at construction")
    }

    fn is_negative(&self) -> bool {
        self.0.starts_with('-')
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialExpr {
    Const(Literal),
    Var,
    Add(Box<PotentialExpr>, Box<PotentialExpr>),
    Sub(Box<PotentialExpr>, Box<PotentialExpr>),
    Mul(Box<PotentialExpr>, Box<PotentialExpr>),
    Div(Box<PotentialExpr>, Box<PotentialExpr>),
    PowConst(Box<PotentialExpr>, Literal),
    Ln(Box<PotentialExpr>),
    Neg(Box<PotentialExpr>),
}

use PotentialExpr as E;

#[allow(clippy::should_implement_trait)]
impl PotentialExpr {
    pub fn constant(v: i64) -> Self {
        E::Const(Literal::from_int(v))
    }

    pub fn add(a: Self, b: Self) -> Self {
        E::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Self, b: Self) -> Self {
        E::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Self, b: Self) -> Self {
        E::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Self, b: Self) -> Self {
        E::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Self, p: Literal) -> Self {
        E::PowConst(Box::new(a), p)
    }

    pub fn ln(a: Self) -> Self {
        E::Ln(Box::new(a))
    }

    pub fn neg(a: Self) -> Self {
        E::Neg(Box::new(a))
    }

    /// True when the expression does not mention `r`.
    pub fn is_constant(&self) -> bool {
        match self {
            E::Const(_) => true,
            E::Var => false,
            E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) | E::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            E::PowConst(a, _) | E::Ln(a) | E::Neg(a) => a.is_constant(),
        }
    }

    /// Replaces every occurrence of `r` by `replacement`.
    pub fn substitute_var(&self, replacement: &PotentialExpr) -> PotentialExpr {
        let s = |e: &PotentialExpr| Box::new(e.substitute_var(replacement));
        match self {
            E::Const(c) => E::Const(c.clone()),
            E::Var => replacement.clone(),
            E::Add(a, b) => E::Add(s(a), s(b)),
            E::Sub(a, b) => E::Sub(s(a), s(b)),
            E::Mul(a, b) => E::Mul(s(a), s(b)),
            E::Div(a, b) => E::Div(s(a), s(b)),
            E::PowConst(a, p) => E::PowConst(s(a), p.clone()),
            E::Ln(a) => E::Ln(s(a)),
            E::Neg(a) => E::Neg(s(a)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            E::Add(..) | E::Sub(..) | E::Neg(..) => 1,
            E::Mul(..) | E::Div(..) => 2,
            E::PowConst(..) => 3,
            E::Const(c) if c.is_negative() => 1,
            E::Const(_) | E::Var | E::Ln(_) => 4,
        }
    }

    fn write_prec(&self, out: &mut String, min: u8) {
        let paren = self.precedence() < min;
        if paren {
            out.push('(');
        }
        match self {
            E::Const(c) => out.push_str(c.text()),
            E::Var => out.push('r'),
            E::Add(a, b) => {
                a.write_prec(out, 1);
                out.push_str(" + ");
                b.write_prec(out, 2);
            }
            E::Sub(a, b) => {
                a.write_prec(out, 1);
                out.push_str(" - ");
                b.write_prec(out, 2);
            }
            E::Mul(a, b) => {
                a.write_prec(out, 2);
                out.push('*');
                b.write_prec(out, 3);
            }
            E::Div(a, b) => {
                a.write_prec(out, 2);
                out.push('/');
                b.write_prec(out, 3);
            }
            E::PowConst(a, p) => {
                a.write_prec(out, 4);
                out.push('^');
                if p.is_negative() {
                    out.push('(');
                    out.push_str(p.text());
                    out.push(')');
                } else {
                    out.push_str(p.text());
                }
            }
            E::Ln(a) => {
                out.push_str("ln(");
                a.write_prec(out, 0);
                out.push(')');
            }
            E::Neg(a) => {
                out.push('-');
                a.write_prec(out, 2);
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for PotentialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_prec(&mut s, 0);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PotentialError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
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
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            if lit.matches('.').count() > 1 || lit.starts_with("e") || lit == "." {
                return Err(PotentialError::SyntaxError {
                    pos: start,
                    message: format!("malformed number {lit:?}"),
                });
            }
            out.push((Tok::Num(lit), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(PotentialError::SyntaxError {
                pos: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PotentialError> {
        Err(PotentialError::SyntaxError {
            pos: self.here(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), PotentialError> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected '{op}'"))
        }
    }

    fn expr(&mut self) -> Result<PotentialExpr, PotentialError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = E::add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = E::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PotentialExpr, PotentialError> {
        if self.eat('-') {
            return Ok(E::neg(self.term()?));
        }
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = E::mul(lhs, self.factor()?);
            } else if self.eat('/') {
                lhs = E::div(lhs, self.factor()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<PotentialExpr, PotentialError> {
        if self.eat('-') {
            return Ok(E::neg(self.factor()?));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let p = self.exponent()?;
            return Ok(E::pow(base, p));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Literal, PotentialError> {
        if self.eat('(') {
            let sign = if self.eat('-') {
                "-"
            } else {
                self.eat('+');
                ""
            };
            let lit = self.number()?;
            self.expect(')')?;
            return self.literal(&format!("{sign}{lit}"));
        }
        let lit = self.number()?;
        self.literal(&lit)
    }

    fn number(&mut self) -> Result<String, PotentialError> {
        match self.peek() {
            Some(Tok::Num(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a number"),
        }
    }

    fn literal(&self, text: &str) -> Result<Literal, PotentialError> {
        Literal::new(text).map_err(|_| PotentialError::SyntaxError {
            pos: self.here(),
            message: format!("malformed number {text:?}"),
        })
    }

    fn atom(&mut self) -> Result<PotentialExpr, PotentialError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(E::Const(self.literal(&s)?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "r" => Ok(E::Var),
                    "ln" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(E::ln(inner))
                    }
                    _ => Err(PotentialError::UnknownSymbol { name, pos: at }),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_potential(text: &str) -> Result<PotentialExpr, PotentialError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn domain(msg: impl Into<String>) -> PotentialError {
    PotentialError::DomainError(msg.into())
}

/// Value of `e` at `r`.
pub fn eval_point(
    e: &PotentialExpr,
    r: &BigReal,
    ctx: &PrecisionContext,
) -> Result<BigReal, PotentialError> {
    let v = match e {
        E::Const(c) => c.value(ctx),
        E::Var => r.clone(),
        E::Add(a, b) => eval_point(a, r, ctx)? + eval_point(b, r, ctx)?,
        E::Sub(a, b) => eval_point(a, r, ctx)? - eval_point(b, r, ctx)?,
        E::Mul(a, b) => eval_point(a, r, ctx)? * eval_point(b, r, ctx)?,
        E::Div(a, b) => {
            let den = eval_point(b, r, ctx)?;
            if den.is_zero() || den.abs() < ctx.tolerance(0) {
                return Err(domain("division by zero"));
            }
            eval_point(a, r, ctx)? / den
        }
        E::PowConst(a, p) => {
            let base = eval_point(a, r, ctx)?;
            let pv = p.value(ctx);
            match pv.as_integer() {
                Some(n) if base.is_zero() && n < 0 => {
                    return Err(domain("zero raised to a negative power"))
                }
                Some(n) => base.powi(n),
                None if base.is_sign_negative() => {
                    return Err(domain("negative base with a fractional exponent"))
                }
                None if base.is_zero() && pv.is_sign_negative() => {
                    return Err(domain("zero raised to a negative power"))
                }
                None => base.powf(&pv),
            }
        }
        E::Ln(a) => {
            let x = eval_point(a, r, ctx)?;
            if !x.is_positive() {
                return Err(domain("logarithm of a non-positive value"));
            }
            x.ln()
        }
        E::Neg(a) => -eval_point(a, r, ctx)?,
    };
    if !v.is_finite() {
        return Err(domain("non-finite value"));
    }
    Ok(v)
}

fn series_err(err: ArithError, what: &str) -> PotentialError {
    domain(format!("{what}: {err}"))
}

/// Taylor coefficients of `e(center + u)` through `u^order`, computed by
/// composing series operations over the expression tree.
pub fn eval_series(
    e: &PotentialExpr,
    center: &BigReal,
    order: usize,
    ctx: &PrecisionContext,
) -> Result<PowerSeries, PotentialError> {
    if e.is_constant() {
        let v = eval_point(e, center, ctx)?;
        return Ok(PowerSeries::constant(ctx, v, order));
    }
    let rec = |x: &PotentialExpr| eval_series(x, center, order, ctx);
    Ok(match e {
        E::Const(_) => unreachable!("constant subtrees are folded above"),
        E::Var => PowerSeries::variable(ctx, center.clone(), order),
        E::Add(a, b) => rec(a)?.add(&rec(b)?),
        E::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        E::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        E::Div(a, b) => rec(a)?
            .div(&rec(b)?, ctx)
            .map_err(|err| series_err(err, "division"))?,
        E::PowConst(a, p) => {
            let base = rec(a)?;
            let pv = p.value(ctx);
            match pv.as_integer() {
                Some(n) => base
                    .pow_int(n, ctx)
                    .map_err(|err| series_err(err, "power"))?,
                None => base
                    .pow_real(&pv, ctx)
                    .map_err(|err| series_err(err, "power"))?,
            }
        }
        E::Ln(a) => rec(a)?
            .ln(ctx)
            .map_err(|err| series_err(err, "logarithm"))?,
        E::Neg(a) => rec(a)?.neg(),
    })
}

/// Kinetic-energy normalisation of the radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MassConvention {
    /// m = 1 = hbar: kinetic operator -1/2 d^2/dr^2.
    M1,
    /// 2m = 1 = hbar: kinetic operator -d^2/dr^2.
    TwoM1,
}

impl MassConvention {
    /// Prefactor of -d^2/dr^2 in the radial equation.
    pub fn kinetic_factor(self) -> f64 {
        match self {
            MassConvention::M1 => 0.5,
            MassConvention::TwoM1 => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MassConvention::M1 => "m1",
            MassConvention::TwoM1 => "2m1",
        }
    }
}

impl std::str::FromStr for MassConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m1" => Ok(MassConvention::M1),
            "2m1" => Ok(MassConvention::TwoM1),
            other => Err(format!(
                "unknown mass convention {other:?} (expected m1 or 2m1)"
            )),
        }
    }
}

impl fmt::Display for MassConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Three-dimensional s-wave potential whose ground state is exp(-r^a) with
/// eigenvalue exactly `energy`.
///
/// With kinetic factor κ (1/2 for [`MassConvention::M1`], 1 for
/// [`MassConvention::TwoM1`]) substituting φ = exp(-r^a) into
/// `-κ(φ'' + 2φ'/r) + Vφ = Eφ` gives
/// `V = E + κ a² r^(2a-2) - κ a(a+1) r^(a-2)`.
/// Terms are emitted in order of decreasing exponent, and an `r^0` term is
/// folded into the constant.
pub fn construct_potential(
    a: &BigReal,
    energy: &BigReal,
    mass: MassConvention,
    ctx: &PrecisionContext,
) -> PotentialExpr {
    let kappa = match mass {
        MassConvention::M1 => ctx.ratio(1, 2),
        MassConvention::TwoM1 => ctx.one(),
    };
    let a2 = a * a;
    let mut terms: Vec<(BigReal, BigReal)> = vec![
        (&kappa * &a2, a.mul_int(2) - 2),
        (-(&kappa * &(a * &(a + 1))), a - 2),
    ];
    let mut constant = energy.clone();
    terms.retain(|(c, p)| {
        if p.is_zero() {
            constant += c;
            false
        } else {
            !c.is_zero()
        }
    });
    terms.push((constant, ctx.zero()));
    terms.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("finite exponents"));

    let mut out: Option<PotentialExpr> = None;
    for (c, p) in terms {
        if c.is_zero() && out.is_some() {
            continue;
        }
        let negative = c.is_sign_negative();
        let body = monomial(&c.abs(), &p, ctx);
        out = Some(match (out, negative) {
            (None, false) => body,
            (None, true) => E::neg(body),
            (Some(acc), false) => E::add(acc, body),
            (Some(acc), true) => E::sub(acc, body),
        });
    }
    out.expect("at least the constant term is present")
}

fn monomial(c: &BigReal, p: &BigReal, ctx: &PrecisionContext) -> PotentialExpr {
    let coeff = E::Const(Literal::from_real(c, ctx));
    let unit = *c == 1;
    if p.is_zero() {
        coeff
    } else if *p == 1 {
        if unit {
            E::Var
        } else {
            E::mul(coeff, E::Var)
        }
    } else if *p == -1 {
        E::div(coeff, E::Var)
    } else {
        let power = E::pow(E::Var, Literal::from_real(p, ctx));
        if unit {
            power
        } else {
            E::mul(coeff, power)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn lit(s: &str) -> Literal {
        Literal::new(s).unwrap()
    }

    #[test]
    fn parses_coulomb() {
        let e = parse_potential("-1/r").unwrap();
        assert_eq!(e, E::neg(E::div(E::Const(lit("1")), E::Var)));
    }

    #[test]
    fn parses_rational_oscillator() {
        let e = parse_potential("r^2 + 0.1*r^2/(1+0.1*r^2)").unwrap();
        let r2 = || E::pow(E::Var, lit("2"));
        let expected = E::add(
            r2(),
            E::div(
                E::mul(E::Const(lit("0.1")), r2()),
                E::add(E::Const(lit("1")), E::mul(E::Const(lit("0.1")), r2())),
            ),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn unknown_symbol_reported() {
        assert_eq!(
            parse_potential("ln(q)"),
            Err(PotentialError::UnknownSymbol {
                name: "q".into(),
                pos: 3
            })
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_potential("r^") {
            Err(PotentialError::SyntaxError { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_potential("(r"),
            Err(PotentialError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_potential("r r"),
            Err(PotentialError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_potential("r # 2"),
            Err(PotentialError::SyntaxError { pos: 2, .. })
        ));
    }

    #[test]
    fn signed_exponent_in_parentheses() {
        let e = parse_potential("-2^1.7*r^(-0.2)").unwrap();
        assert_eq!(
            e,
            E::neg(E::mul(
                E::pow(E::Const(lit("2")), lit("1.7")),
                E::pow(E::Var, lit("-0.2"))
            ))
        );
        assert_eq!(e.to_string(), "-2^1.7*r^(-0.2)");
    }

    #[test]
    fn point_values() {
        let c = ctx();
        let tol = c.tolerance(3);
        let v = eval_point(&parse_potential("-1/r").unwrap(), &c.int(2), &c).unwrap();
        assert!((v + c.ratio(1, 2)).abs() < tol);
        let v = eval_point(&parse_potential("r^2").unwrap(), &c.int(3), &c).unwrap();
        assert!((v - c.int(9)).abs() < tol);
        let err = eval_point(&parse_potential("1/(1-r)").unwrap(), &c.int(1), &c);
        assert!(matches!(err, Err(PotentialError::DomainError(_))));
        let err = eval_point(&parse_potential("ln(r-2)").unwrap(), &c.int(1), &c);
        assert!(matches!(err, Err(PotentialError::DomainError(_))));
    }

    #[test]
    fn series_values() {
        let c = ctx();
        let tol = c.tolerance(3);
        let check = |text: &str, center: BigReal, expected: Vec<BigReal>| {
            let s = eval_series(
                &parse_potential(text).unwrap(),
                &center,
                expected.len() - 1,
                &c,
            )
            .unwrap();
            for (a, b) in s.coeffs().iter().zip(&expected) {
                assert!((a - b).abs() < tol, "{text}: {a:?} vs {b:?}");
            }
        };
        check("r^2", c.one(), vec![c.int(1), c.int(2), c.int(1)]);
        check(
            "1/r",
            c.int(2),
            vec![c.ratio(1, 2), c.ratio(-1, 4), c.ratio(1, 8)],
        );
        check(
            "ln(r)",
            c.one(),
            vec![c.zero(), c.one(), c.ratio(-1, 2), c.ratio(1, 3)],
        );
        // Integer powers of a negative base stay on the polynomial path.
        check("(r-3)^2", c.one(), vec![c.int(4), c.int(-4), c.int(1)]);
    }

    #[test]
    fn constructed_potentials_print_in_grammar() {
        let c = ctx();
        let one = c.one();
        let v = construct_potential(&c.int(1), &one, MassConvention::M1, &c);
        assert_eq!(v.to_string(), "1.5 - 1/r");
        let v = construct_potential(&c.int(2), &one, MassConvention::M1, &c);
        assert_eq!(v.to_string(), "2*r^2 - 2");
        let v = construct_potential(&c.parse("0.85").unwrap(), &one, MassConvention::TwoM1, &c);
        assert_eq!(v.to_string(), "1 + 0.7225*r^(-0.3) - 1.5725*r^(-1.15)");
        assert_eq!(parse_potential(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn printer_preserves_structure() {
        for text in [
            "-1/r",
            "r^2 + 0.1*r^2/(1 + 0.1*r^2)",
            "(r^2 - 16)^2/128",
            "-(r + 1)",
            "2*(-r)",
            "ln(r)/r - r^(-1.5)",
            "1 - (r - 2)",
            "(r^2)^0.5",
        ] {
            let e = parse_potential(text).unwrap();
            assert_eq!(parse_potential(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
