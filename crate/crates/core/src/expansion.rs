//! The scaled large-k problem.
//!
//! With k = N + 2l the radial equation is rewritten in ρ = r/√k, the
//! potential is frozen as V(ρ) = V̂(√k ρ)/k with k at its numeric value, and
//! the effective potential 1/(8ρ²) + V(ρ) is expanded about its minimum ρ₀
//! in x = √k (ρ - ρ₀). The resulting coefficients W_m^n of x^m y^n
//! (y = 1/√k) drive the recursions.

use std::fmt;

use thiserror::Error;

use crate::arith::{ArithError, BigReal, PowerSeries, PrecisionContext};
use crate::potential::{eval_series, Literal, MassConvention, PotentialError, PotentialExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("effective potential has no stationary point on [1e-3, 1e3]")]
    NoMinimum,
    #[error("every stationary point of the effective potential is a maximum or inflection")]
    NotAMinimum,
    #[error("Newton iteration for the effective-potential minimum did not converge")]
    NewtonDiverged,
    #[error("curvature coefficient W_2^0 is not positive")]
    WTwoNonpositive,
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which eigenstate of a given angular momentum is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum State {
    Ground,
    First,
    Second,
}

impl State {
    pub fn index(self) -> u8 {
        match self {
            State::Ground => 0,
            State::First => 1,
            State::Second => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(State::Ground),
            1 => Some(State::First),
            2 => Some(State::Second),
            _ => None,
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Everything needed to run one expansion.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub potential: PotentialExpr,
    pub n: u32,
    pub l: u32,
    pub state: State,
    pub mass: MassConvention,
    pub order: usize,
    pub ctx: PrecisionContext,
}

impl ProblemSpec {
    pub fn new(
        potential: PotentialExpr,
        n: u32,
        l: u32,
        state: State,
        mass: MassConvention,
        order: usize,
        ctx: PrecisionContext,
    ) -> Result<Self, ExpansionError> {
        if n < 2 {
            return Err(ExpansionError::InvalidProblem(format!(
                "dimension N = {n} must be at least 2"
            )));
        }
        if order < 1 {
            return Err(ExpansionError::InvalidProblem(
                "order must be at least 1".into(),
            ));
        }
        Ok(Self {
            potential,
            n,
            l,
            state,
            mass,
            order,
            ctx,
        })
    }

    /// k = N + 2l.
    pub fn k(&self) -> u32 {
        self.n + 2 * self.l
    }

    /// The same problem at another working precision.
    pub fn with_digits(&self, digits: u32) -> Result<Self, ExpansionError> {
        let mut out = self.clone();
        out.ctx = self.ctx.with_digits(digits)?;
        Ok(out)
    }
}

/// V(ρ) = V̂(√k ρ)/k with k = N + 2l held at its numeric value.
///
/// The mass convention does not enter here; it is applied to the W table.
pub fn freeze_potential(spec: &ProblemSpec) -> PotentialExpr {
    let k = PotentialExpr::Const(Literal::from_int(i64::from(spec.k())));
    let sqrt_k = PotentialExpr::pow(k.clone(), Literal::new("0.5").expect("valid literal"));
    let scaled_r = PotentialExpr::mul(sqrt_k, PotentialExpr::Var);
    PotentialExpr::div(spec.potential.substitute_var(&scaled_r), k)
}

/// Series of f(ρ₀ + u) = 1/(8ρ²) + V(ρ) through u^order.
pub fn effective_series(
    v: &PotentialExpr,
    rho: &BigReal,
    order: usize,
    ctx: &PrecisionContext,
) -> Result<PowerSeries, ExpansionError> {
    let pot = eval_series(v, rho, order, ctx)?;
    let inv_sq = PowerSeries::variable(ctx, rho.clone(), order).pow_int(-2, ctx)?;
    Ok(pot.add(&inv_sq.scale(&ctx.ratio(1, 8))))
}

const SCAN_POINTS_PER_DECADE: i64 = 50;
const SCAN_DECADES: i64 = 3;
const NEWTON_MAX_ITER: usize = 200;

enum Polish {
    Converged(BigReal),
    Failed,
}

/// Safeguarded Newton on f'(ρ) = 0 inside the bracket [lo, hi].
fn polish_root(
    v: &PotentialExpr,
    mut lo: BigReal,
    mut hi: BigReal,
    ctx: &PrecisionContext,
) -> Polish {
    let tol = ctx.tolerance(5);
    let slope = |r: &BigReal| effective_series(v, r, 2, ctx).ok();
    let lo_sign = match slope(&lo) {
        Some(s) => s.coeff(1).signum(),
        None => return Polish::Failed,
    };
    let mut r = (&lo + &hi).div_int(2);
    for _ in 0..NEWTON_MAX_ITER {
        let s = match slope(&r) {
            Some(s) => s,
            None => return Polish::Failed,
        };
        let d1 = s.coeff(1).clone();
        let d2 = s.coeff(2).mul_int(2);
        if d1.is_zero() {
            return Polish::Converged(r);
        }
        if d1.signum() == lo_sign {
            lo = r.clone();
        } else {
            hi = r.clone();
        }
        let newton = if d2.is_zero() {
            None
        } else {
            Some(&r - &(&d1 / &d2))
        };
        // A round-off sized step can land on a bracket end; take it as done.
        if let Some(x) = &newton {
            if (x - &r).abs() / &r < tol {
                return Polish::Converged(x.clone());
            }
        }
        let next = match newton {
            Some(x) if x > lo && x < hi => x,
            _ => (&lo + &hi).div_int(2),
        };
        let step = (&next - &r).abs() / &r;
        r = next;
        if step < tol {
            return Polish::Converged(r);
        }
    }
    Polish::Failed
}

/// Locates the global minimum ρ₀ of f(ρ) = 1/(8ρ²) + V(ρ) and returns
/// (ρ₀, f(ρ₀)).
///
/// f' is scanned on a logarithmic grid over [1e-3, 1e3]; every sign change
/// is polished by Newton's method. Among the converged points with f'' > 0
/// the one with the smallest f wins, ties going to the larger ρ.
pub fn find_rho0(
    v: &PotentialExpr,
    ctx: &PrecisionContext,
) -> Result<(BigReal, BigReal), ExpansionError> {
    let ten = ctx.int(10);
    let grid: Vec<BigReal> = (-SCAN_DECADES * SCAN_POINTS_PER_DECADE
        ..=SCAN_DECADES * SCAN_POINTS_PER_DECADE)
        .map(|i| ten.powf(&ctx.ratio(i, SCAN_POINTS_PER_DECADE)))
        .collect();
    let slopes: Vec<Option<i32>> = grid
        .iter()
        .map(|r| {
            effective_series(v, r, 2, ctx)
                .ok()
                .map(|s| s.coeff(1).signum())
        })
        .collect();

    let mut brackets = 0usize;
    let mut converged = 0usize;
    let mut best: Option<(BigReal, BigReal)> = None;
    let tie = ctx.tolerance(10);
    let consider = |r: BigReal, best: &mut Option<(BigReal, BigReal)>, converged: &mut usize| {
        let s = match effective_series(v, &r, 2, ctx) {
            Ok(s) => s,
            Err(_) => return,
        };
        *converged += 1;
        if !s.coeff(2).is_positive() {
            return;
        }
        let f = s.coeff(0).clone();
        let better = match best {
            None => true,
            Some((br, bf)) => {
                let scale = bf.abs().max(ctx.one());
                let gap = &f - &*bf;
                if gap.abs() <= &tie * &scale {
                    r > *br
                } else {
                    gap.is_sign_negative()
                }
            }
        };
        if better {
            *best = Some((r, f));
        }
    };

    for i in 0..grid.len() {
        if slopes[i] == Some(0) {
            brackets += 1;
            consider(grid[i].clone(), &mut best, &mut converged);
            continue;
        }
        if i + 1 == grid.len() {
            break;
        }
        let (Some(a), Some(b)) = (slopes[i], slopes[i + 1]) else {
            continue;
        };
        if a != 0 && b != 0 && a != b {
            brackets += 1;
            if let Polish::Converged(r) = polish_root(v, grid[i].clone(), grid[i + 1].clone(), ctx)
            {
                consider(r, &mut best, &mut converged);
            }
        }
    }

    match best {
        Some(found) => Ok(found),
        None if brackets == 0 => Err(ExpansionError::NoMinimum),
        None if converged == 0 => Err(ExpansionError::NewtonDiverged),
        None => Err(ExpansionError::NotAMinimum),
    }
}

/// The frozen problem anchored at the effective-potential minimum.
#[derive(Debug, Clone)]
pub struct ScaledProblem {
    pub k: BigReal,
    pub k_int: u32,
    pub y: BigReal,
    pub frozen_potential: PotentialExpr,
    pub rho0: BigReal,
    pub e_minus2: BigReal,
    pub mass: MassConvention,
    pub ctx: PrecisionContext,
}

pub fn scale_problem(spec: &ProblemSpec) -> Result<ScaledProblem, ExpansionError> {
    let ctx = spec.ctx;
    let frozen = freeze_potential(spec);
    let (rho0, e_minus2) = find_rho0(&frozen, &ctx)?;
    let k = ctx.int(i64::from(spec.k()));
    Ok(ScaledProblem {
        y: k.sqrt().recip(),
        k,
        k_int: spec.k(),
        frozen_potential: frozen,
        rho0,
        e_minus2,
        mass: spec.mass,
        ctx,
    })
}

/// Sparse coefficients W_m^n of x^m y^n, present only for n ∈ {m-2, m, m+2}.
#[derive(Debug, Clone)]
pub struct WTable {
    order: usize,
    /// entries[m] = [W_m^{m-2}, W_m^m, W_m^{m+2}]; the first is unused for m < 2.
    entries: Vec<[BigReal; 3]>,
    stationarity: BigReal,
    e_minus2: BigReal,
    k: BigReal,
    mass: MassConvention,
    ctx: PrecisionContext,
    zero: BigReal,
}

impl WTable {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Largest x-power stored.
    pub fn max_power(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn k(&self) -> &BigReal {
        &self.k
    }

    /// Minimum value of the effective potential, unaffected by the mass
    /// convention.
    pub fn e_minus2(&self) -> &BigReal {
        &self.e_minus2
    }

    pub fn mass(&self) -> MassConvention {
        self.mass
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// The first-derivative coefficient f_1 of the effective potential at ρ₀,
    /// which stationarity forces to vanish.
    pub fn stationarity_residual(&self) -> &BigReal {
        &self.stationarity
    }

    /// The entry W_m^n if it is structurally present.
    pub fn get(&self, m: i64, n: i64) -> Option<&BigReal> {
        if m < 0 || m as usize >= self.entries.len() {
            return None;
        }
        let row = &self.entries[m as usize];
        match n - m {
            -2 if m >= 2 => Some(&row[0]),
            0 => Some(&row[1]),
            2 => Some(&row[2]),
            _ => None,
        }
    }

    /// W_m^n, reading absent entries as zero.
    pub fn value(&self, m: i64, n: i64) -> &BigReal {
        self.get(m, n).unwrap_or(&self.zero)
    }
}

/// Builds W_j^{j-2} = f_j, W_j^j = -g_j/2, W_j^{j+2} = 3g_j/8 for
/// j ≤ 2·order + 3, where f_j and g_j are the Taylor coefficients of
/// 1/(8ρ²) + V(ρ) - E^(-2) and ρ^(-2) about ρ₀. Under the 2m1 convention the
/// whole table is halved.
pub fn build_w_table(scaled: &ScaledProblem, order: usize) -> Result<WTable, ExpansionError> {
    let ctx = scaled.ctx;
    let m = 2 * order + 3;
    let f = effective_series(&scaled.frozen_potential, &scaled.rho0, m, &ctx)?;
    let g = PowerSeries::variable(&ctx, scaled.rho0.clone(), m).pow_int(-2, &ctx)?;
    let half = ctx.ratio(1, 2);
    let three_eighths = ctx.ratio(3, 8);
    let scale = match scaled.mass {
        MassConvention::M1 => ctx.one(),
        MassConvention::TwoM1 => half.clone(),
    };
    let entries: Vec<[BigReal; 3]> = (0..=m)
        .map(|j| {
            let fj = if j >= 2 {
                f.coeff(j).clone()
            } else {
                ctx.zero()
            };
            [
                fj * &scale,
                -(g.coeff(j) * &half) * &scale,
                (g.coeff(j) * &three_eighths) * &scale,
            ]
        })
        .collect();
    if !entries[2][0].is_positive() {
        return Err(ExpansionError::WTwoNonpositive);
    }
    Ok(WTable {
        order,
        entries,
        stationarity: f.coeff(1).clone(),
        e_minus2: scaled.e_minus2.clone(),
        k: scaled.k.clone(),
        mass: scaled.mass,
        ctx,
        zero: ctx.zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{eval_point, parse_potential};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    fn spec(text: &str, l: u32, mass: MassConvention) -> ProblemSpec {
        ProblemSpec::new(
            parse_potential(text).unwrap(),
            3,
            l,
            State::Ground,
            mass,
            5,
            ctx(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_small_dimension() {
        let e = ProblemSpec::new(
            parse_potential("r").unwrap(),
            1,
            0,
            State::Ground,
            MassConvention::M1,
            5,
            ctx(),
        );
        assert!(matches!(e, Err(ExpansionError::InvalidProblem(_))));
    }

    #[test]
    fn frozen_coulomb_matches_substitution() {
        let c = ctx();
        let frozen = freeze_potential(&spec("-1/r", 0, MassConvention::M1));
        let rho = c.parse("0.7").unwrap();
        let got = eval_point(&frozen, &rho, &c).unwrap();
        let expected = -(c.one() / (c.int(3) * c.int(3).sqrt() * &rho));
        assert!((got - expected).abs() < c.tolerance(3));
    }

    #[test]
    fn frozen_log_matches_substitution() {
        let c = ctx();
        let frozen = freeze_potential(&spec("ln(r)", 0, MassConvention::M1));
        let rho = c.parse("1.3").unwrap();
        let got = eval_point(&frozen, &rho, &c).unwrap();
        let expected = (rho.ln() + c.int(3).ln().div_int(2)).div_int(3);
        assert!((got - expected).abs() < c.tolerance(3));
    }

    #[test]
    fn oscillator_minimum_closed_form() {
        let c = ctx();
        let (rho0, em2) = find_rho0(&parse_potential("0.5*r^2").unwrap(), &c).unwrap();
        assert!((rho0 - c.ratio(1, 2).sqrt()).abs() < c.tolerance(5));
        assert!((em2 - c.ratio(1, 2)).abs() < c.tolerance(5));
    }

    #[test]
    fn coulomb_minimum_closed_form() {
        let c = ctx();
        let s = scale_problem(&spec("-1/r", 0, MassConvention::M1)).unwrap();
        let expected = c.int(3) * c.int(3).sqrt() / c.int(4);
        assert!((&s.rho0 - &expected).abs() < c.tolerance(5));
        let p1 = &s.k * &s.e_minus2;
        assert!((p1 + c.ratio(2, 9)).abs() < c.tolerance(5));
    }

    #[test]
    fn repulsive_potential_has_no_minimum() {
        let c = ctx();
        assert_eq!(
            find_rho0(&parse_potential("1/r").unwrap(), &c),
            Err(ExpansionError::NoMinimum)
        );
    }

    #[test]
    fn maxima_are_rejected() {
        // f = -1/(8ρ²) - ρ² has a single stationary point, a maximum.
        let c = ctx();
        assert_eq!(
            find_rho0(&parse_potential("-0.25/r^2 - r^2").unwrap(), &c),
            Err(ExpansionError::NotAMinimum)
        );
    }

    #[test]
    fn double_well_picks_global_minimum() {
        let c = ctx();
        let v = parse_potential("(r^2 - 16)^2/128").unwrap();
        let (rho0, em2) = find_rho0(&v, &c).unwrap();
        let s = effective_series(&v, &rho0, 2, &c).unwrap();
        assert!(s.coeff(2).is_positive());
        assert!(s.coeff(1).abs() < c.tolerance(8));
        // No grid point does better than the polished minimum.
        for i in -150..=150 {
            let r = c.int(10).powf(&c.ratio(i, 50));
            let f = effective_series(&v, &r, 0, &c).unwrap();
            assert!(f.coeff(0) >= &(&em2 - &c.tolerance(10)));
        }
    }

    #[test]
    fn oscillator_w_table() {
        let c = ctx();
        let s = scale_problem(&spec("0.5*r^2", 0, MassConvention::M1)).unwrap();
        let w = build_w_table(&s, 4).unwrap();
        let tol = c.tolerance(5);
        assert!((w.value(2, 0) - c.int(2)).abs() < tol);
        assert!((w.value(0, 0) + c.one()).abs() < tol);
        let rho0_cubed_inv = s.rho0.powi(-3);
        assert!((w.value(1, 1) - rho0_cubed_inv).abs() < tol);
        assert!(w.get(1, -1).is_none());
        assert!(w.get(0, -2).is_none());
        assert!(w.get(3, 2).is_none());
        assert_eq!(w.max_power(), 11);
    }

    #[test]
    fn halving_for_two_m_one() {
        let c = ctx();
        let m1 = scale_problem(&spec("r^2", 0, MassConvention::M1)).unwrap();
        let m2 = scale_problem(&spec("r^2", 0, MassConvention::TwoM1)).unwrap();
        assert_eq!(m1.rho0, m2.rho0);
        assert_eq!(m1.e_minus2, m2.e_minus2);
        let w1 = build_w_table(&m1, 3).unwrap();
        let w2 = build_w_table(&m2, 3).unwrap();
        for j in 0..=w1.max_power() as i64 {
            for n in [j - 2, j, j + 2] {
                let a = w1.value(j, n).div_int(2);
                assert!((a - w2.value(j, n)).abs() < c.tolerance(5));
            }
        }
        assert!((w2.value(2, 0) - c.int(2)).abs() < c.tolerance(5));
    }
}
