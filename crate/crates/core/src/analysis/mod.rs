//! Partial sums of the energy series and the conventions used to read them:
//! divergence onset, oscillation bracket, Shanks extrapolation and a
//! dual-precision round-off audit.

mod fd;

pub use fd::{fd_eigensolve, FdError};

use thiserror::Error;

use crate::arith::{BigReal, PrecisionContext};
use crate::expansion::{
    build_w_table, scale_problem, ExpansionError, ProblemSpec, ScaledProblem, WTable,
};
use crate::potential::MassConvention;
use crate::recursion::{recurse, Branch, CoeffTables, EnergySeries, RecursionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("need at least {needed} partial sums, got {got}")]
    TooShort { needed: usize, got: usize },
}

/// Physical-energy partial sums P_1..P_order.
#[derive(Debug, Clone)]
pub struct PartialSumSequence {
    pub sums: Vec<BigReal>,
    pub k: BigReal,
    pub mass: MassConvention,
}

impl PartialSumSequence {
    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// P_j for 1-based `order`.
    pub fn at(&self, order: usize) -> &BigReal {
        &self.sums[order - 1]
    }

    pub fn last(&self) -> &BigReal {
        self.sums.last().expect("non-empty sequence")
    }

    /// Recovers E^(j-3) = (P_j - P_{j-1}) k^(j-2) for j ≥ 2.
    pub fn coefficients(&self) -> Vec<BigReal> {
        let mut kpow = self.k.powi(0);
        self.sums
            .windows(2)
            .map(|w| {
                let c = (&w[1] - &w[0]) * &kpow;
                kpow *= &self.k;
                c
            })
            .collect()
    }
}

/// P_1 = k E^(-2), P_j = P_{j-1} + E^(j-3) / k^(j-2).
///
/// The coefficients already carry the mass-convention factor; E^(-2) is the
/// classical minimum and is never rescaled.
pub fn assemble_partial_sums(e: &EnergySeries) -> PartialSumSequence {
    let mut sums = Vec::with_capacity(e.coeffs.len());
    let mut acc = &e.k * &e.e_minus2;
    let mut kpow = e.k.powi(0);
    if !e.coeffs.is_empty() {
        sums.push(acc.clone());
    }
    for c in e.coeffs.iter().take(e.coeffs.len().saturating_sub(1)) {
        acc += &(c / &kpow);
        kpow *= &e.k;
        sums.push(acc.clone());
    }
    PartialSumSequence {
        sums,
        k: e.k.clone(),
        mass: e.mass,
    }
}

/// One Shanks extrapolant S_n built from P_{n-1}, P_n, P_{n+1}.
#[derive(Debug, Clone)]
pub struct ShanksEntry {
    pub order: usize,
    pub value: Option<BigReal>,
}

/// S_n = (P_{n+1} P_{n-1} - P_n²) / (P_{n+1} + P_{n-1} - 2P_n) for every
/// interior n. Entries whose denominator is below 10^-(digits-10)·|P_n| are
/// left undefined.
pub fn shanks_transform(p: &[BigReal], ctx: &PrecisionContext) -> Vec<ShanksEntry> {
    let tol = ctx.tolerance(10);
    p.windows(3)
        .enumerate()
        .map(|(i, w)| {
            let den = &(&w[2] + &w[0]) - &w[1].mul_int(2);
            let value = if den.abs() <= &tol * &w[1].abs() || den.is_zero() {
                None
            } else {
                let num = &(&w[2] * &w[0]) - &(&w[1] * &w[1]);
                Some(num / den)
            };
            ShanksEntry {
                order: i + 2,
                value,
            }
        })
        .collect()
}

/// Default number of consecutive growing increments that marks divergence.
pub const DIVERGENCE_RUN: usize = 3;

/// Order n at which the series starts to diverge: the smallest n ≥ 2 such
/// that |P_{j+1} - P_j| > |P_j - P_{j-1}| for every j in n..n+K-1.
///
/// Increments below 10^-(digits-15) relative to the sums are round-off and
/// never count as growth.
pub fn detect_divergence(p: &[BigReal], run: usize, ctx: &PrecisionContext) -> Option<usize> {
    if p.len() < 3 || run == 0 {
        return None;
    }
    let scale = p.iter().fold(ctx.one(), |m, v| m.max(v.abs()));
    let floor = ctx.tolerance(15) * &scale;
    let inc: Vec<BigReal> = p.windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
    // inc[i] = |P_{i+2} - P_{i+1}| in 1-based orders.
    let grows = |order: usize| -> bool {
        let cur = &inc[order - 1];
        let prev = &inc[order - 2];
        cur > prev && *cur > floor
    };
    (2..p.len()).find(|&n| (n..n + run).all(|j| j < p.len() && grows(j)))
}

/// A pair of consecutive partial sums reported as the result of an
/// oscillating series. `low` is the value at `order_low`, the lower order.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub low: BigReal,
    pub high: BigReal,
    pub order_low: usize,
    pub order_high: usize,
}

impl Bracket {
    pub fn midpoint(&self) -> BigReal {
        (&self.low + &self.high).div_int(2)
    }

    pub fn straddles(&self, v: &BigReal) -> bool {
        let a = &self.low - v;
        let b = &self.high - v;
        a.signum() * b.signum() <= 0
    }
}

/// Number of trailing sums averaged to estimate the oscillation centre.
pub const CENTER_WINDOW: usize = 5;

/// Picks the pair of consecutive sums, before the divergence onset, that lie
/// on opposite sides of the centre with the smallest jump between them.
///
/// The centre is `reference` when given (an exact or independently computed
/// eigenvalue), otherwise the mean of the last five sums in the window. If
/// no pair straddles the centre the last two sums of the window are used.
pub fn oscillation_bracket(
    p: &[BigReal],
    onset: Option<usize>,
    reference: Option<&BigReal>,
) -> Result<Bracket, AnalysisError> {
    if p.len() < 4 {
        return Err(AnalysisError::TooShort {
            needed: 4,
            got: p.len(),
        });
    }
    let end = onset.map_or(p.len(), |n| (n - 1).clamp(2, p.len()));
    let window = &p[..end];
    let center = match reference {
        Some(c) => c.clone(),
        None => {
            let tail = &window[window.len().saturating_sub(CENTER_WINDOW)..];
            let mut sum = tail[0].clone();
            for v in &tail[1..] {
                sum += v;
            }
            sum.div_int(tail.len() as i64)
        }
    };
    let mut best: Option<(usize, BigReal)> = None;
    for j in 0..window.len() - 1 {
        let a = (&window[j] - &center).signum();
        let b = (&window[j + 1] - &center).signum();
        if a * b >= 0 {
            continue;
        }
        let jump = (&window[j + 1] - &window[j]).abs();
        if best.as_ref().is_none_or(|(_, bj)| jump <= *bj) {
            best = Some((j, jump));
        }
    }
    let j = best.map_or(window.len() - 2, |(j, _)| j);
    Ok(Bracket {
        low: window[j].clone(),
        high: window[j + 1].clone(),
        order_low: j + 1,
        order_high: j + 2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
}

impl SolveError {
    /// Stable machine-readable error name.
    pub fn name(&self) -> &'static str {
        use crate::potential::PotentialError as P;
        match self {
            SolveError::Expansion(e) => match e {
                ExpansionError::InvalidProblem(_) => "InvalidProblem",
                ExpansionError::NoMinimum => "NoMinimum",
                ExpansionError::NotAMinimum => "NotAMinimum",
                ExpansionError::NewtonDiverged => "NewtonDiverged",
                ExpansionError::WTwoNonpositive => "WTwoNonpositive",
                ExpansionError::Potential(P::DomainError(_)) => "DomainError",
                ExpansionError::Potential(P::SyntaxError { .. }) => "SyntaxError",
                ExpansionError::Potential(P::UnknownSymbol { .. }) => "UnknownSymbol",
                ExpansionError::Arith(_) => "ArithError",
            },
            SolveError::Recursion(e) => match e {
                RecursionError::WTwoNonpositive => "WTwoNonpositive",
                RecursionError::DegenerateDenominator => "DegenerateDenominator",
                RecursionError::SchedulingCycle { .. } => "SchedulingCycle",
                RecursionError::TableTooShort { .. } => "TableTooShort",
            },
        }
    }
}

/// Output of the full pipeline for one problem.
#[derive(Debug, Clone)]
pub struct Solution {
    pub scaled: ScaledProblem,
    pub w: WTable,
    pub tables: CoeffTables,
    pub energy: EnergySeries,
    pub sums: PartialSumSequence,
}

/// freeze → ρ₀ → W table → recursion → partial sums.
pub fn solve(spec: &ProblemSpec) -> Result<Solution, SolveError> {
    solve_with_branch(spec, Branch::Negative)
}

pub fn solve_with_branch(spec: &ProblemSpec, branch: Branch) -> Result<Solution, SolveError> {
    let scaled = scale_problem(spec)?;
    let w = build_w_table(&scaled, spec.order)?;
    let (tables, energy) = recurse(&w, spec.order, spec.state, branch)?;
    let sums = assemble_partial_sums(&energy);
    Ok(Solution {
        scaled,
        w,
        tables,
        energy,
        sums,
    })
}

/// Leading significant digits on which `a` and `b` agree, capped at `cap`.
pub fn agreeing_digits(a: &BigReal, b: &BigReal, cap: u32) -> u32 {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = a.abs().max(b.abs());
    if scale.is_zero() {
        return cap;
    }
    let rel = diff / scale;
    let d = -rel.log10().to_f64();
    if d.is_nan() || d <= 0.0 {
        0
    } else {
        (d.floor() as u32).min(cap)
    }
}

/// Runs the pipeline at the problem's precision and at twice that precision and
/// returns the number of leading digits on which every partial sum agrees
/// (at most the base precision).
pub fn precision_audit(spec: &ProblemSpec) -> Result<u32, SolveError> {
    let base = spec.ctx.digits();
    let doubled = spec.with_digits(base * 2)?;
    let (lo, hi) = std::thread::scope(|s| {
        let h = s.spawn(|| solve(&doubled));
        let lo = solve(spec);
        (lo, h.join().expect("audit worker panicked"))
    });
    let (lo, hi) = (lo?, hi?);
    let hi_ctx = doubled.ctx;
    Ok(lo
        .sums
        .sums
        .iter()
        .zip(&hi.sums.sums)
        .map(|(a, b)| {
            // Compare at the higher precision so `a` is taken exactly.
            let a_hi = hi_ctx.zero() + a;
            agreeing_digits(&a_hi, b, base)
        })
        .min()
        .unwrap_or(base))
}

/// Derived quantities reported alongside the partial sums.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub partial_sums: PartialSumSequence,
    pub divergence_order: Option<usize>,
    pub bracket: Option<Bracket>,
    pub shanks: Option<Vec<ShanksEntry>>,
    pub audit: Option<u32>,
}

pub fn report(
    sums: &PartialSumSequence,
    reference: Option<&BigReal>,
    with_shanks: bool,
    ctx: &PrecisionContext,
) -> SeriesReport {
    let divergence_order = detect_divergence(&sums.sums, DIVERGENCE_RUN, ctx);
    let bracket = oscillation_bracket(&sums.sums, divergence_order, reference).ok();
    let shanks = with_shanks.then(|| shanks_transform(&sums.sums, ctx));
    SeriesReport {
        partial_sums: sums.clone(),
        divergence_order,
        bracket,
        shanks,
        audit: None,
    }
}
