//! Arbitrary-precision reals and truncated power series.
//!
//! Every value carries the binary precision it was created with. Binary
//! operations produce a result at the larger of the two operand precisions,
//! so values created under one [`PrecisionContext`] stay at that precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

/// Smallest permitted number of working decimal digits.
pub const MIN_DIGITS: u32 = 30;

/// Default number of guard digits carried below the requested precision.
pub const DEFAULT_GUARD_DIGITS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("precision of {0} digits is below the minimum of {MIN_DIGITS}")]
    PrecisionTooLow(u32),
    #[error("series constant term is zero at working precision")]
    ZeroConstantTerm,
    #[error("series constant term is not positive")]
    NonpositiveConstantTerm,
    #[error("invalid decimal literal {0:?}")]
    InvalidNumber(String),
}

/// Working precision: `digits` significant decimal digits plus `guard_digits`
/// carried internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self, ArithError> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self, ArithError> {
        if digits < MIN_DIGITS {
            return Err(ArithError::PrecisionTooLow(digits));
        }
        Ok(Self {
            digits,
            guard_digits,
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Same guard digits, different working digits.
    pub fn with_digits(&self, digits: u32) -> Result<Self, ArithError> {
        Self::with_guard(digits, self.guard_digits)
    }

    /// Binary precision in bits covering `digits + guard_digits` decimal digits.
    pub fn bits(&self) -> u32 {
        let total = f64::from(self.digits + self.guard_digits);
        (total * std::f64::consts::LOG2_10).ceil() as u32 + 4
    }

    pub fn zero(&self) -> BigReal {
        BigReal(Float::new(self.bits()))
    }

    pub fn one(&self) -> BigReal {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> BigReal {
        BigReal(Float::with_val(self.bits(), v))
    }

    /// The rational p/q, correctly rounded.
    pub fn ratio(&self, p: i64, q: i64) -> BigReal {
        let num = Float::with_val(self.bits(), p);
        BigReal(num / q)
    }

    pub fn from_f64(&self, v: f64) -> BigReal {
        BigReal(Float::with_val(self.bits(), v))
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(&self, text: &str) -> Result<BigReal, ArithError> {
        let trimmed = text.trim();
        let valid = !trimmed.is_empty()
            && trimmed
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
        if !valid {
            return Err(ArithError::InvalidNumber(text.to_string()));
        }
        let parsed =
            Float::parse(trimmed).map_err(|_| ArithError::InvalidNumber(text.to_string()))?;
        Ok(BigReal(Float::with_val(self.bits(), parsed)))
    }

    /// 10^(-n), used for precision-relative thresholds.
    pub fn ten_pow_neg(&self, n: i64) -> BigReal {
        let ten = Float::with_val(self.bits(), 10);
        BigReal(ten.pow(-n))
    }

    /// Tolerance 10^(-(digits - drop)).
    pub fn tolerance(&self, drop: i64) -> BigReal {
        self.ten_pow_neg(i64::from(self.digits) - drop)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: 100,
            guard_digits: DEFAULT_GUARD_DIGITS,
        }
    }
}

/// An arbitrary-precision real number.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_sign_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_sign_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_sign_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn log10(&self) -> Self {
        BigReal(self.0.clone().log10())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn floor(&self) -> Self {
        BigReal(self.0.clone().floor())
    }

    pub fn powf(&self, p: &BigReal) -> Self {
        BigReal(Float::with_val(
            self.prec().max(p.prec()),
            (&self.0).pow(&p.0),
        ))
    }

    pub fn powi(&self, n: i64) -> Self {
        BigReal(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Nearest integer if the value is within 2^-64 relative of one.
    pub fn as_integer(&self) -> Option<i64> {
        if !self.0.is_finite() {
            return None;
        }
        let rounded = self.0.clone().round();
        let diff = Float::with_val(self.prec(), &self.0 - &rounded).abs();
        let scale = Float::with_val(
            self.prec(),
            rounded.clone().abs().max(&Float::with_val(53, 1)),
        );
        if diff > scale / Float::with_val(53, 2f64.powi(64)) {
            return None;
        }
        rounded.to_i32_saturating().map(i64::from)
    }

    /// `self += a * b` without an intermediate allocation.
    pub fn add_mul(&mut self, a: &BigReal, b: &BigReal) {
        self.0 += &a.0 * &b.0;
    }

    /// `self -= a * b` without an intermediate allocation.
    pub fn sub_mul(&mut self, a: &BigReal, b: &BigReal) {
        self.0 -= &a.0 * &b.0;
    }

    pub fn mul_int(&self, n: i64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 * n))
    }

    pub fn div_int(&self, n: i64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 / n))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Scientific notation with `sig` significant decimal digits, for example
    /// `-1.2500000000e-1`. Zero is written as `0`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        let (neg, mantissa, exp) =
            self.0
                .to_sign_string_exp_round(10, Some(sig.max(1)), Round::Nearest);
        let exp = exp.unwrap_or(0) - 1;
        let mut out = String::with_capacity(mantissa.len() + 8);
        if neg {
            out.push('-');
        }
        out.push_str(&mantissa[..1]);
        if mantissa.len() > 1 {
            out.push('.');
            out.push_str(&mantissa[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
        out
    }

    /// Plain or scientific decimal rounded to `sig` significant digits with
    /// trailing zeros removed, for example `0.7225` or `1.5e-30`.
    pub fn to_short_string(&self, sig: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let (neg, mantissa, exp) =
            self.0
                .to_sign_string_exp_round(10, Some(sig.max(1)), Round::Nearest);
        let digits = mantissa.trim_end_matches('0');
        let digits = if digits.is_empty() { "0" } else { digits };
        let exp = exp.unwrap_or(0);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        let n = digits.len() as i32;
        if exp > 0 && exp <= 30 {
            if exp >= n {
                out.push_str(digits);
                out.extend(std::iter::repeat_n('0', (exp - n) as usize));
            } else {
                out.push_str(&digits[..exp as usize]);
                out.push('.');
                out.push_str(&digits[exp as usize..]);
            }
        } else if exp <= 0 && exp > -6 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp) as usize));
            out.push_str(digits);
        } else {
            out.push_str(&digits[..1]);
            if n > 1 {
                out.push('.');
                out.push_str(&digits[1..]);
            }
            out.push('e');
            out.push_str(&(exp - 1).to_string());
        }
        out
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_sci_string(sig))
    }
}

fn result_prec(a: &BigReal, b: &BigReal) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign:ident, $assign_method:ident, $op:tt) => {
        impl<'a> $trait<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                BigReal(Float::with_val(result_prec(self, rhs), &self.0 $op &rhs.0))
            }
        }
        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(mut self, rhs: &'a BigReal) -> BigReal {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                $assign::$assign_method(&mut self.0, &rhs.0);
                self
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self $op &rhs
            }
        }
        impl<'a> $trait<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self $op &rhs
            }
        }
        impl $trait<i64> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                BigReal(Float::with_val(self.prec(), &self.0 $op rhs))
            }
        }
        impl $trait<i64> for BigReal {
            type Output = BigReal;
            fn $method(mut self, rhs: i64) -> BigReal {
                $assign::$assign_method(&mut self.0, rhs);
                self
            }
        }
        impl<'a> $assign<&'a BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: &'a BigReal) {
                $assign::$assign_method(&mut self.0, &rhs.0);
            }
        }
        impl $assign<BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: BigReal) {
                $assign::$assign_method(&mut self.0, &rhs.0);
            }
        }
        impl $assign<i64> for BigReal {
            fn $assign_method(&mut self, rhs: i64) {
                $assign::$assign_method(&mut self.0, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);
binop!(Div, div, DivAssign, div_assign, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(Float::with_val(self.prec(), -&self.0))
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

/// Truncated power series c_0 + c_1 u + ... + c_M u^M.
#[derive(Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<BigReal>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl PowerSeries {
    /// Builds a series from its coefficients; the truncation order is
    /// `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<BigReal>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a power series needs at least one coefficient"
        );
        Self { coeffs }
    }

    pub fn zero(ctx: &PrecisionContext, order: usize) -> Self {
        Self::new(vec![ctx.zero(); order + 1])
    }

    pub fn constant(ctx: &PrecisionContext, c: BigReal, order: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); order + 1];
        coeffs[0] = c;
        Self::new(coeffs)
    }

    /// The series of `center + u`.
    pub fn variable(ctx: &PrecisionContext, center: BigReal, order: usize) -> Self {
        let mut s = Self::constant(ctx, center, order);
        if order >= 1 {
            s.coeffs[1] = ctx.one();
        }
        s
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigReal {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<BigReal> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let m = order.min(self.trunc_order());
        Self::new(self.coeffs[..=m].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.trunc_order().min(other.trunc_order());
        Self::new(
            (0..=m)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.trunc_order().min(other.trunc_order());
        Self::new(
            (0..=m)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.trunc_order().min(other.trunc_order());
        let coeffs = (0..=m)
            .map(|n| {
                let mut acc = self.coeffs[0].clone() * &other.coeffs[n];
                for i in 1..=n {
                    acc.add_mul(&self.coeffs[i], &other.coeffs[n - i]);
                }
                acc
            })
            .collect();
        Self::new(coeffs)
    }

    /// Multiplicative inverse. The constant term must exceed 10^-digits in
    /// magnitude.
    pub fn recip(&self, ctx: &PrecisionContext) -> Result<Self, ArithError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() || c0.abs() < ctx.tolerance(0) {
            return Err(ArithError::ZeroConstantTerm);
        }
        let inv0 = c0.recip();
        let mut r: Vec<BigReal> = Vec::with_capacity(self.coeffs.len());
        r.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = ctx.zero();
            for i in 1..=n {
                acc.add_mul(&self.coeffs[i], &r[n - i]);
            }
            r.push(-(acc * &inv0));
        }
        Ok(Self::new(r))
    }

    pub fn div(&self, other: &Self, ctx: &PrecisionContext) -> Result<Self, ArithError> {
        Ok(self.mul(&other.recip(ctx)?))
    }

    /// Formal derivative; the result has order one less (order 0 maps to the
    /// zero series of order 0).
    pub fn derivative(&self, ctx: &PrecisionContext) -> Self {
        let m = self.trunc_order();
        if m == 0 {
            return Self::zero(ctx, 0);
        }
        Self::new((1..=m).map(|i| self.coeffs[i].mul_int(i as i64)).collect())
    }

    /// Natural logarithm via (ln a)' = a'/a.
    pub fn ln(&self, ctx: &PrecisionContext) -> Result<Self, ArithError> {
        let c0 = &self.coeffs[0];
        if !c0.is_positive() {
            return Err(ArithError::NonpositiveConstantTerm);
        }
        let m = self.trunc_order();
        let mut out = Vec::with_capacity(m + 1);
        out.push(c0.ln());
        if m > 0 {
            let q = self.derivative(ctx).div(&self.truncate(m - 1), ctx)?;
            for (i, c) in q.coeffs.iter().enumerate() {
                out.push(c.div_int(i as i64 + 1));
            }
        }
        Ok(Self::new(out))
    }

    /// Exponential via b' = a' b.
    pub fn exp(&self, ctx: &PrecisionContext) -> Self {
        let m = self.trunc_order();
        let mut b: Vec<BigReal> = Vec::with_capacity(m + 1);
        b.push(self.coeffs[0].exp());
        for n in 1..=m {
            let mut acc = ctx.zero();
            for k in 1..=n {
                let ka = self.coeffs[k].mul_int(k as i64);
                acc.add_mul(&ka, &b[n - k]);
            }
            b.push(acc.div_int(n as i64));
        }
        Self::new(b)
    }

    /// Real power exp(p ln a).
    pub fn pow_real(&self, p: &BigReal, ctx: &PrecisionContext) -> Result<Self, ArithError> {
        Ok(self.ln(ctx)?.scale(p).exp(ctx))
    }

    /// Integer power by repeated squaring; negative powers go through
    /// [`PowerSeries::recip`]. Works for any sign of the constant term.
    pub fn pow_int(&self, n: i64, ctx: &PrecisionContext) -> Result<Self, ArithError> {
        let base = if n < 0 {
            self.recip(ctx)?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut result = Self::constant(ctx, ctx.one(), self.trunc_order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    fn series(ctx: &PrecisionContext, v: &[i64]) -> PowerSeries {
        PowerSeries::new(v.iter().map(|&x| ctx.int(x)).collect())
    }

    fn assert_coeffs(s: &PowerSeries, expected: &[BigReal], tol: &BigReal) {
        assert_eq!(s.coeffs().len(), expected.len(), "length of {s:?}");
        for (i, (a, b)) in s.coeffs().iter().zip(expected).enumerate() {
            assert!((a - b).abs() <= *tol, "coefficient {i}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn rejects_low_precision() {
        assert_eq!(
            PrecisionContext::new(29),
            Err(ArithError::PrecisionTooLow(29))
        );
        assert!(PrecisionContext::new(30).is_ok());
    }

    #[test]
    fn add_cancels_and_truncates() {
        let c = ctx();
        let s = series(&c, &[1, 1]).add(&series(&c, &[1, -1]));
        assert_coeffs(&s, &[c.int(2), c.zero()], &c.tolerance(5));
        let a = series(&c, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(a.add(&PowerSeries::zero(&c, 5)), a);
        assert_eq!(a.add(&series(&c, &[1, 1, 1, 1])).trunc_order(), 3);
    }

    #[test]
    fn mul_examples() {
        let c = ctx();
        let tol = c.tolerance(5);
        let p = series(&c, &[1, 1, 0]).mul(&series(&c, &[1, -1, 0]));
        assert_coeffs(&p, &[c.int(1), c.zero(), c.int(-1)], &tol);
        let sq = series(&c, &[1, 1]).mul(&series(&c, &[1, 1]));
        assert_coeffs(&sq, &[c.int(1), c.int(2)], &tol);
        let geo = series(&c, &[1, 1, 1, 1, 1]).mul(&series(&c, &[1, -1, 0, 0, 0]));
        assert_coeffs(
            &geo,
            &[c.int(1), c.zero(), c.zero(), c.zero(), c.zero()],
            &tol,
        );
    }

    #[test]
    fn recip_examples() {
        let c = ctx();
        let tol = c.tolerance(5);
        let r = series(&c, &[2, 1, 0]).recip(&c).unwrap();
        assert_coeffs(&r, &[c.ratio(1, 2), c.ratio(-1, 4), c.ratio(1, 8)], &tol);
        let r = series(&c, &[1, 1, 0, 0]).recip(&c).unwrap();
        assert_coeffs(&r, &[c.int(1), c.int(-1), c.int(1), c.int(-1)], &tol);
        assert_eq!(
            PowerSeries::zero(&c, 3).recip(&c),
            Err(ArithError::ZeroConstantTerm)
        );
    }

    #[test]
    fn pow_real_examples() {
        let c = ctx();
        let tol = c.tolerance(5);
        let s = series(&c, &[1, 1, 0]).pow_real(&c.int(-2), &c).unwrap();
        assert_coeffs(&s, &[c.int(1), c.int(-2), c.int(3)], &tol);
        let s = series(&c, &[4, 1]).pow_real(&c.ratio(1, 2), &c).unwrap();
        assert_coeffs(&s, &[c.int(2), c.ratio(1, 4)], &tol);
        assert_eq!(
            series(&c, &[-1, 1]).pow_real(&c.ratio(1, 2), &c),
            Err(ArithError::NonpositiveConstantTerm)
        );
    }

    #[test]
    fn pow_int_handles_negative_base() {
        let c = ctx();
        let tol = c.tolerance(5);
        let s = series(&c, &[-2, 1, 0]).pow_int(2, &c).unwrap();
        assert_coeffs(&s, &[c.int(4), c.int(-4), c.int(1)], &tol);
        let s = series(&c, &[-1, 1, 0]).pow_int(-1, &c).unwrap();
        assert_coeffs(&s, &[c.int(-1), c.int(-1), c.int(-1)], &tol);
    }

    #[test]
    fn ln_examples() {
        let c = ctx();
        let tol = c.tolerance(5);
        let s = series(&c, &[1, 1, 0]).ln(&c).unwrap();
        assert_coeffs(&s, &[c.zero(), c.int(1), c.ratio(-1, 2)], &tol);
        let e = c.one().exp();
        let s = PowerSeries::constant(&c, e, 0).ln(&c).unwrap();
        assert_coeffs(&s, &[c.one()], &tol);
        let a = series(&c, &[2, 2, 0, 0]).ln(&c).unwrap();
        let b = series(&c, &[1, 1, 0, 0]).ln(&c).unwrap();
        let ln2 = c.int(2).ln();
        assert_coeffs(&a.sub(&b), &[ln2, c.zero(), c.zero(), c.zero()], &tol);
        assert_eq!(
            series(&c, &[0, 1]).ln(&c),
            Err(ArithError::NonpositiveConstantTerm)
        );
    }

    #[test]
    fn decimal_formats() {
        let c = ctx();
        assert_eq!(c.ratio(-1, 8).to_sci_string(5), "-1.2500e-1");
        assert_eq!(c.zero().to_sci_string(5), "0");
        assert_eq!(c.parse("0.7225").unwrap().to_short_string(50), "0.7225");
        assert_eq!(c.parse("1.5").unwrap().to_short_string(50), "1.5");
        assert_eq!(c.int(-2).to_short_string(50), "-2");
        assert_eq!(c.parse("1e-30").unwrap().to_short_string(50), "1e-30");
        assert_eq!(c.int(120).to_short_string(50), "120");
        assert!(c.parse("1.2.3").is_err());
        assert!(c.parse("abc").is_err());
    }

    #[test]
    fn integer_detection() {
        let c = ctx();
        assert_eq!(c.int(-3).as_integer(), Some(-3));
        assert_eq!(c.parse("2.0").unwrap().as_integer(), Some(2));
        assert_eq!(c.parse("0.5").unwrap().as_integer(), None);
    }
}
