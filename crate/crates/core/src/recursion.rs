//! Recursions for the energy coefficients of the ground, first and second
//! excited states.
//!
//! The wavefunction is written as ψ = P(x, y) e^{U(x)} with
//!
//! ```text
//! U'(x) = Σ D_m^n x^(2m-1) y^(2n) + Σ C_m^n x^(2m) y^(2n+1)
//! E     = Σ E^(n-1) y^(2n)
//! ```
//!
//! and P = 1, xy - A(y), or x²y² + xyC(y) + B(y) with node series
//! A = Σ a_n y^(2n), B = Σ b_n y^(2n), C = Σ c_n y^(2n). For excited states
//! the ground-state operator U'' + U'² - 2W + 2E no longer vanishes; its
//! Taylor coefficients T_m^n (x^(2m) y^(2n)) and S_m^n (x^(2m+1) y^(2n+1))
//! are carried along.
//!
//! All indices follow the notation X_m^n with the x-related index m first.
//! Reads outside the stored ranges are zero: D needs 1 ≤ m ≤ n+1, C needs
//! 0 ≤ m ≤ n+1, T and S need 0 ≤ m ≤ n.

use thiserror::Error;

use crate::arith::{BigReal, PrecisionContext};
use crate::expansion::{State, WTable};
use crate::potential::MassConvention;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecursionError {
    #[error("curvature coefficient W_2^0 is not positive")]
    WTwoNonpositive,
    #[error("node recursion denominator vanishes at working precision")]
    DegenerateDenominator,
    #[error("recursion read {table}[{m}][{n}] before computing it")]
    SchedulingCycle { table: &'static str, m: i64, n: i64 },
    #[error("W table built for order {built} cannot drive order {requested}")]
    TableTooShort { built: usize, requested: usize },
}

/// Sign of D_1^0 = ±√(2 W_2^0). Only the negative branch gives a
/// normalisable wavefunction; the positive one exists for regression tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Negative,
    Positive,
}

/// Recursion state. Rows are indexed by n, columns by m.
#[derive(Debug, Clone)]
pub struct CoeffTables {
    state: State,
    d: Vec<Vec<Option<BigReal>>>,
    c: Vec<Vec<Option<BigReal>>>,
    t: Vec<Vec<Option<BigReal>>>,
    s: Vec<Vec<Option<BigReal>>>,
    a: Vec<Option<BigReal>>,
    b: Vec<Option<BigReal>>,
    cn: Vec<Option<BigReal>>,
    zero: BigReal,
}

type Read<'a> = Result<&'a BigReal, RecursionError>;

fn fetch<'a>(
    rows: &'a [Vec<Option<BigReal>>],
    table: &'static str,
    m: i64,
    n: i64,
    max_m: i64,
    min_m: i64,
    zero: &'a BigReal,
) -> Read<'a> {
    if n < 0 || m < min_m || m > n + max_m {
        return Ok(zero);
    }
    rows.get(n as usize)
        .and_then(|row| row.get(m as usize))
        .and_then(|v| v.as_ref())
        .ok_or(RecursionError::SchedulingCycle { table, m, n })
}

fn fetch_node<'a>(
    v: &'a [Option<BigReal>],
    table: &'static str,
    k: i64,
    present: bool,
    zero: &'a BigReal,
) -> Read<'a> {
    if !present || k < 1 {
        return Ok(zero);
    }
    v.get(k as usize)
        .and_then(|x| x.as_ref())
        .ok_or(RecursionError::SchedulingCycle { table, m: k, n: 0 })
}

impl CoeffTables {
    fn new(state: State, ctx: &PrecisionContext) -> Self {
        Self {
            state,
            d: Vec::new(),
            c: Vec::new(),
            t: Vec::new(),
            s: Vec::new(),
            a: vec![None],
            b: vec![None],
            cn: vec![None],
            zero: ctx.zero(),
        }
    }

    fn open_row(&mut self) {
        let n = self.d.len();
        self.d.push(vec![None; n + 2]);
        self.c.push(vec![None; n + 2]);
        self.t.push(vec![None; n + 1]);
        self.s.push(vec![None; n + 1]);
        self.d[n][0] = Some(self.zero.clone());
    }

    pub fn state(&self) -> State {
        self.state
    }

    /// Number of completed rows.
    pub fn rows(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self, m: i64, n: i64) -> Read<'_> {
        fetch(&self.d, "D", m, n, 1, 1, &self.zero)
    }

    pub fn c(&self, m: i64, n: i64) -> Read<'_> {
        fetch(&self.c, "C", m, n, 1, 0, &self.zero)
    }

    pub fn t(&self, m: i64, n: i64) -> Read<'_> {
        if self.state == State::Ground {
            return Ok(&self.zero);
        }
        fetch(&self.t, "T", m, n, 0, 0, &self.zero)
    }

    pub fn s(&self, m: i64, n: i64) -> Read<'_> {
        if self.state == State::Ground {
            return Ok(&self.zero);
        }
        fetch(&self.s, "S", m, n, 0, 0, &self.zero)
    }

    /// Node coefficient a_k (first excited state), k ≥ 1. Zero for other
    /// states and for k < 1.
    pub fn a(&self, k: i64) -> Read<'_> {
        fetch_node(&self.a, "a", k, self.state == State::First, &self.zero)
    }

    /// Node coefficient b_k (second excited state), k ≥ 1.
    pub fn b(&self, k: i64) -> Read<'_> {
        fetch_node(&self.b, "b", k, self.state == State::Second, &self.zero)
    }

    /// Node coefficient c_k (second excited state), k ≥ 1.
    pub fn c_node(&self, k: i64) -> Read<'_> {
        fetch_node(&self.cn, "c", k, self.state == State::Second, &self.zero)
    }

    /// Overwrites D_m^n; meant for sensitivity probes.
    ///
    /// # Panics
    /// If the index is outside the stored range.
    pub fn set_d(&mut self, m: usize, n: usize, value: BigReal) {
        assert!(m >= 1 && m <= n + 1, "D index out of range");
        self.d[n][m] = Some(value);
    }

    /// Node series coefficients present for this state, as (a, b, c).
    pub fn node_series(&self) -> (Vec<BigReal>, Vec<BigReal>, Vec<BigReal>) {
        let collect = |v: &[Option<BigReal>]| v.iter().skip(1).flatten().cloned().collect();
        (collect(&self.a), collect(&self.b), collect(&self.cn))
    }
}

/// Energy coefficients E^(n-1), n = 0..order-1, in physical units.
#[derive(Debug, Clone)]
pub struct EnergySeries {
    pub e_minus2: BigReal,
    pub coeffs: Vec<BigReal>,
    pub state: State,
    pub k: BigReal,
    pub mass: MassConvention,
}

impl EnergySeries {
    /// Coefficients on the scale of the W table used by the recursion (the
    /// 2m1 convention doubles them on output).
    pub fn recursion_coeffs(&self) -> Vec<BigReal> {
        match self.mass {
            MassConvention::M1 => self.coeffs.clone(),
            MassConvention::TwoM1 => self.coeffs.iter().map(|c| c.div_int(2)).collect(),
        }
    }
}

pub fn recurse_ground(
    w: &WTable,
    order: usize,
) -> Result<(CoeffTables, EnergySeries), RecursionError> {
    recurse(w, order, State::Ground, Branch::Negative)
}

pub fn recurse_first(
    w: &WTable,
    order: usize,
) -> Result<(CoeffTables, EnergySeries), RecursionError> {
    recurse(w, order, State::First, Branch::Negative)
}

pub fn recurse_second(
    w: &WTable,
    order: usize,
) -> Result<(CoeffTables, EnergySeries), RecursionError> {
    recurse(w, order, State::Second, Branch::Negative)
}

/// Runs the recursion for `state` through `order` energy coefficients.
///
/// Per n the schedule is: node coefficients, then T_m and D_m for m from
/// n+1 down to 1, then T_0, then S_m and C_m for m from n+1 down to 0, then
/// E^(n-1). Every read of a same-row entry is checked against this order.
pub fn recurse(
    w: &WTable,
    order: usize,
    state: State,
    branch: Branch,
) -> Result<(CoeffTables, EnergySeries), RecursionError> {
    if w.order() < order {
        return Err(RecursionError::TableTooShort {
            built: w.order(),
            requested: order,
        });
    }
    let ctx = *w.ctx();
    let w20 = w.value(2, 0);
    if !w20.is_positive() {
        return Err(RecursionError::WTwoNonpositive);
    }
    let mut tb = CoeffTables::new(state, &ctx);
    tb.open_row();
    let root = w20.mul_int(2).sqrt();
    tb.d[0][1] = Some(match branch {
        Branch::Negative => -root,
        Branch::Positive => root,
    });
    let d10 = tb.d(1, 0)?.clone();
    // Every D and C update divides by -2 D_1^0.
    let pivot = (d10.mul_int(-2)).recip();
    let degenerate = ctx.tolerance(10);
    let mut energy = Vec::with_capacity(order);

    for n in 0..order as i64 {
        if n > 0 {
            tb.open_row();
        }
        let nu = n as usize;
        if n >= 1 {
            match state {
                State::Ground => {}
                State::First => {
                    let t00 = tb.t(0, 0)?.clone();
                    if t00.abs() < degenerate {
                        return Err(RecursionError::DegenerateDenominator);
                    }
                    let mut acc = tb.c(0, n - 1)?.mul_int(2);
                    for k in 1..n {
                        acc.sub_mul(tb.a(k)?, tb.t(0, n - k)?);
                    }
                    tb.a.push(Some(acc / &t00));
                }
                State::Second => {
                    let t00 = tb.t(0, 0)?.clone();
                    if t00.abs() < degenerate {
                        return Err(RecursionError::DegenerateDenominator);
                    }
                    let mut acc = if n == 1 { ctx.int(2) } else { ctx.zero() };
                    for k in 1..n {
                        let two_c = tb.c_node(k)?.mul_int(2);
                        acc.add_mul(&two_c, tb.c(0, n - k - 1)?);
                        acc.add_mul(tb.b(k)?, tb.t(0, n - k)?);
                    }
                    tb.b.push(Some(-(acc / &t00)));

                    let den = &t00 + &d10.mul_int(2);
                    if den.abs() < degenerate {
                        return Err(RecursionError::DegenerateDenominator);
                    }
                    let mut acc = tb.c(0, n - 1)?.mul_int(4);
                    for k in 1..n {
                        let f = tb.d(1, n - k)?.mul_int(2) + tb.t(0, n - k)?;
                        acc.add_mul(&f, tb.c_node(k)?);
                    }
                    for k in 1..=n {
                        acc.add_mul(tb.b(k)?, tb.s(0, n - k)?);
                    }
                    tb.cn.push(Some(-(acc / den)));
                }
            }
        }

        for m in (1..=n + 1).rev() {
            if state != State::Ground && m <= n {
                let v = t_value(&tb, state, m, n, &ctx)?;
                tb.t[nu][m as usize] = Some(v);
            }
            if n == 0 && m == 1 {
                continue;
            }
            let mut acc = -tb.t(m, n)?;
            acc -= &w.value(2 * m, 2 * n).mul_int(2);
            acc += &tb.d(m + 1, n)?.mul_int(2 * m + 1);
            for i in 1..n {
                for j in 1..=i + 1 {
                    acc.add_mul(tb.d(j, i)?, tb.d(m + 1 - j, n - i)?);
                }
            }
            for i in 0..n {
                for j in 0..=i + 1 {
                    acc.add_mul(tb.c(j, i)?, tb.c(m - j, n - i - 1)?);
                }
            }
            tb.d[nu][m as usize] = Some(acc * &pivot);
        }
        if state != State::Ground {
            let v = t_value(&tb, state, 0, n, &ctx)?;
            tb.t[nu][0] = Some(v);
        }

        for m in (0..=n + 1).rev() {
            if state != State::Ground && m <= n {
                let v = s_value(&tb, state, m, n, &ctx)?;
                tb.s[nu][m as usize] = Some(v);
            }
            let mut acc = -tb.s(m, n)?;
            acc -= &w.value(2 * m + 1, 2 * n + 1).mul_int(2);
            acc += &tb.c(m + 1, n)?.mul_int(2 * (m + 1));
            let mut cross = ctx.zero();
            for i in 1..=n {
                for j in 1..=i + 1 {
                    cross.add_mul(tb.d(j, i)?, tb.c(m + 1 - j, n - i)?);
                }
            }
            acc += &cross.mul_int(2);
            tb.c[nu][m as usize] = Some(acc * &pivot);
        }

        let mut e = tb.t(0, n)? - tb.d(1, n)?;
        e += &w.value(0, 2 * n).mul_int(2);
        for i in 0..n {
            e.sub_mul(tb.c(0, i)?, tb.c(0, n - i - 1)?);
        }
        energy.push(e.div_int(2));
    }

    let coeffs = match w.mass() {
        MassConvention::M1 => energy,
        MassConvention::TwoM1 => energy.into_iter().map(|e| e.mul_int(2)).collect(),
    };
    let series = EnergySeries {
        e_minus2: w.e_minus2().clone(),
        coeffs,
        state,
        k: w.k().clone(),
        mass: w.mass(),
    };
    Ok((tb, series))
}

fn t_value(
    tb: &CoeffTables,
    state: State,
    m: i64,
    n: i64,
    ctx: &PrecisionContext,
) -> Result<BigReal, RecursionError> {
    let mut acc = ctx.zero();
    match state {
        State::Ground => {}
        State::First => {
            for k in 1..=n - m {
                acc.add_mul(tb.a(k)?, tb.s(m, n - k)?);
            }
            acc -= &tb.d(m + 1, n)?.mul_int(2);
        }
        State::Second => {
            for k in 1..=n - m {
                let ck = tb.c_node(k)?;
                acc.add_mul(&ck.mul_int(2), tb.c(m + 1, n - k)?);
                acc.add_mul(tb.b(k)?, tb.t(m + 1, n - k + 1)?);
                acc.add_mul(ck, tb.s(m, n - k)?);
            }
            acc = -acc;
            acc -= &tb.d(m + 1, n)?.mul_int(4);
        }
    }
    Ok(acc)
}

fn s_value(
    tb: &CoeffTables,
    state: State,
    m: i64,
    n: i64,
    ctx: &PrecisionContext,
) -> Result<BigReal, RecursionError> {
    let mut acc = ctx.zero();
    match state {
        State::Ground => {}
        State::First => {
            for k in 1..=n - m {
                acc.add_mul(tb.a(k)?, tb.t(m + 1, n - k + 1)?);
            }
            acc -= &tb.c(m + 1, n)?.mul_int(2);
        }
        State::Second => {
            for k in 1..=n - m {
                let ck = tb.c_node(k)?;
                acc.add_mul(&ck.mul_int(2), tb.d(m + 2, n - k + 1)?);
                acc.add_mul(tb.b(k)?, tb.s(m + 1, n - k + 1)?);
                acc.add_mul(ck, tb.t(m + 1, n - k + 1)?);
            }
            acc = -acc;
            acc -= &tb.c(m + 1, n)?.mul_int(4);
        }
    }
    Ok(acc)
}

/// Dense bivariate polynomial truncated in y: rows[b][a] is the coefficient
/// of x^a y^b.
#[derive(Debug, Clone)]
struct Bivariate {
    rows: Vec<Vec<BigReal>>,
}

impl Bivariate {
    fn zero(ymax: usize) -> Self {
        Self {
            rows: vec![Vec::new(); ymax + 1],
        }
    }

    fn ymax(&self) -> usize {
        self.rows.len() - 1
    }

    fn add_term(&mut self, a: usize, b: usize, v: &BigReal, ctx: &PrecisionContext) {
        if b > self.ymax() {
            return;
        }
        let row = &mut self.rows[b];
        if row.len() <= a {
            row.resize(a + 1, ctx.zero());
        }
        row[a] += v;
    }

    fn add(&self, other: &Self, ctx: &PrecisionContext) -> Self {
        let mut out = self.clone();
        for (b, row) in other.rows.iter().enumerate() {
            for (a, v) in row.iter().enumerate() {
                out.add_term(a, b, v, ctx);
            }
        }
        out
    }

    fn scale(&self, s: i64) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|v| v.mul_int(s)).collect())
                .collect(),
        }
    }

    fn mul(&self, other: &Self, ctx: &PrecisionContext) -> Self {
        let ymax = self.ymax().min(other.ymax());
        let mut out = Self::zero(ymax);
        for (b1, r1) in self.rows.iter().enumerate() {
            for (b2, r2) in other.rows.iter().enumerate() {
                if b1 + b2 > ymax || r1.is_empty() || r2.is_empty() {
                    continue;
                }
                let row = &mut out.rows[b1 + b2];
                if row.len() < r1.len() + r2.len() - 1 {
                    row.resize(r1.len() + r2.len() - 1, ctx.zero());
                }
                for (a1, v1) in r1.iter().enumerate() {
                    if v1.is_zero() {
                        continue;
                    }
                    for (a2, v2) in r2.iter().enumerate() {
                        row[a1 + a2].add_mul(v1, v2);
                    }
                }
            }
        }
        out
    }

    fn d_dx(&self, ctx: &PrecisionContext) -> Self {
        let mut out = Self::zero(self.ymax());
        for (b, row) in self.rows.iter().enumerate() {
            for (a, v) in row.iter().enumerate().skip(1) {
                out.add_term(a - 1, b, &v.mul_int(a as i64), ctx);
            }
        }
        out
    }

    fn max_abs(&self) -> BigReal {
        let mut best: Option<BigReal> = None;
        for v in self.rows.iter().flatten() {
            let a = v.abs();
            best = Some(match best {
                Some(b) => b.max(a),
                None => a,
            });
        }
        best.expect("at least one coefficient")
    }
}

/// Substitutes the computed series into the differential equation of the
/// state and returns the largest coefficient of x^a y^b with
/// b ≤ 2·order - 1. The equation checked is
///
/// ```text
/// ground: L = 0
/// first:  (xy - A) L + 2y U' = 0
/// second: (x²y² + xyC + B) L + 2y² + 2(2xy² + yC) U' = 0
/// ```
///
/// with L = U'' + U'² - 2W + 2E built directly from D, C, E and W, so the
/// T and S tables are not trusted.
pub fn residual_check(
    tables: &CoeffTables,
    energy: &EnergySeries,
    w: &WTable,
    order: usize,
) -> Result<BigReal, RecursionError> {
    let ctx = *w.ctx();
    let ymax = 2 * order - 1;
    let mut du = Bivariate::zero(ymax);
    for n in 0..order as i64 {
        for m in 1..=n + 1 {
            du.add_term(
                (2 * m - 1) as usize,
                (2 * n) as usize,
                tables.d(m, n)?,
                &ctx,
            );
        }
        for m in 0..=n + 1 {
            du.add_term(
                (2 * m) as usize,
                (2 * n + 1) as usize,
                tables.c(m, n)?,
                &ctx,
            );
        }
    }
    let mut pot = Bivariate::zero(ymax);
    for m in 0..=w.max_power() as i64 {
        for n in [m - 2, m, m + 2] {
            if let Some(v) = w.get(m, n) {
                pot.add_term(m as usize, n as usize, v, &ctx);
            }
        }
    }
    let mut en = Bivariate::zero(ymax);
    for (n, e) in energy.recursion_coeffs().iter().enumerate() {
        en.add_term(0, 2 * n, e, &ctx);
    }
    let l = du
        .d_dx(&ctx)
        .add(&du.mul(&du, &ctx), &ctx)
        .add(&pot.scale(-2), &ctx)
        .add(&en.scale(2), &ctx);

    let one = ctx.one();
    let residual = match tables.state() {
        State::Ground => l,
        State::First => {
            let mut node = Bivariate::zero(ymax);
            node.add_term(1, 1, &one, &ctx);
            for k in 1..order as i64 {
                if let Ok(a) = tables.a(k) {
                    node.add_term(0, (2 * k) as usize, &(-a), &ctx);
                }
            }
            let mut two_y = Bivariate::zero(ymax);
            two_y.add_term(0, 1, &ctx.int(2), &ctx);
            node.mul(&l, &ctx).add(&two_y.mul(&du, &ctx), &ctx)
        }
        State::Second => {
            let mut node = Bivariate::zero(ymax);
            node.add_term(2, 2, &one, &ctx);
            let mut drift = Bivariate::zero(ymax);
            drift.add_term(1, 2, &ctx.int(4), &ctx);
            for k in 1..order as i64 {
                let kk = (2 * k) as usize;
                if let Ok(b) = tables.b(k) {
                    node.add_term(0, kk, b, &ctx);
                }
                if let Ok(c) = tables.c_node(k) {
                    node.add_term(1, kk + 1, c, &ctx);
                    drift.add_term(0, kk + 1, &c.mul_int(2), &ctx);
                }
            }
            let mut source = Bivariate::zero(ymax);
            source.add_term(0, 2, &ctx.int(2), &ctx);
            node.mul(&l, &ctx)
                .add(&source, &ctx)
                .add(&drift.mul(&du, &ctx), &ctx)
        }
    };
    Ok(residual.max_abs())
}
