//! Finite-difference eigenvalues of the radial equation, used as an
//! independent check on the series.
//!
//! The radial equation `κ(-u'' + L(L+1)/r² u) + V u = E u`, with
//! L = l + (N-3)/2, is solved on a uniform grid in t = ln r after the
//! substitution u = e^{t/2} w, which gives the symmetric pencil
//! `-κ w'' + [κ(L+½)² + e^{2t} V] w = E e^{2t} w`. Eigenvalues are located
//! by bisection on the Sturm count of the tridiagonal matrix, and two grid
//! spacings are combined by Richardson extrapolation.

use thiserror::Error;

use crate::potential::{MassConvention, PotentialExpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("no bound state with index {0} below the potential at the box edge")]
    NoBoundState(u32),
    #[error("eigenvalue did not settle as the box grew to r = {0}")]
    GridTooSmall(f64),
    #[error("potential is not finite at r = {0}")]
    NonFinite(f64),
}

const R_MIN: f64 = 1e-10;
const R_MAX_START: f64 = 16.0;
const R_MAX_LIMIT: f64 = 4096.0;
const STEP: f64 = 0.004;
const BOX_TOL: f64 = 1e-10;

fn eval_f64(e: &PotentialExpr, r: f64) -> f64 {
    use PotentialExpr as E;
    match e {
        E::Const(c) => c.text().parse::<f64>().unwrap_or(f64::NAN),
        E::Var => r,
        E::Add(a, b) => eval_f64(a, r) + eval_f64(b, r),
        E::Sub(a, b) => eval_f64(a, r) - eval_f64(b, r),
        E::Mul(a, b) => eval_f64(a, r) * eval_f64(b, r),
        E::Div(a, b) => eval_f64(a, r) / eval_f64(b, r),
        E::PowConst(a, p) => {
            let base = eval_f64(a, r);
            let p: f64 = p.text().parse().unwrap_or(f64::NAN);
            if p.fract() == 0.0 && p.abs() < 64.0 {
                base.powi(p as i32)
            } else {
                base.powf(p)
            }
        }
        E::Ln(a) => eval_f64(a, r).ln(),
        E::Neg(a) => -eval_f64(a, r),
    }
}

struct Pencil {
    diag: Vec<f64>,
    weight: Vec<f64>,
    off: f64,
    edge_potential: f64,
}

fn pencil(
    v: &PotentialExpr,
    kappa: f64,
    big_l: f64,
    r_max: f64,
    h: f64,
) -> Result<Pencil, FdError> {
    let t0 = R_MIN.ln();
    // keep h exact so that growing boxes share grid points
    let n = ((r_max.ln() - t0) / h).ceil() as usize;
    let centrifugal = kappa * (big_l + 0.5).powi(2);
    let mut diag = Vec::with_capacity(n - 1);
    let mut weight = Vec::with_capacity(n - 1);
    for i in 1..n {
        let t = t0 + i as f64 * h;
        let r = t.exp();
        let pot = eval_f64(v, r);
        if !pot.is_finite() {
            return Err(FdError::NonFinite(r));
        }
        let b = (2.0 * t).exp();
        diag.push(2.0 * kappa / (h * h) + centrifugal + b * pot);
        weight.push(b);
    }
    Ok(Pencil {
        diag,
        weight,
        off: -kappa / (h * h),
        edge_potential: eval_f64(v, r_max),
    })
}

impl Pencil {
    /// Number of eigenvalues below `e`.
    fn count_below(&self, e: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, (&a, &b)) in self.diag.iter().zip(&self.weight).enumerate() {
            let alpha = a - e * b;
            d = if i == 0 { alpha } else { alpha - off2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * alpha.abs().max(1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lower_bound(&self) -> f64 {
        self.diag
            .iter()
            .zip(&self.weight)
            .map(|(a, b)| (a - 2.0 * -self.off) / b)
            .fold(f64::INFINITY, f64::min)
    }

    fn eigenvalue(&self, index: usize) -> Option<f64> {
        let mut lo = self.lower_bound();
        let mut width = lo.abs().max(1.0);
        let mut hi = lo + width;
        let mut expansions = 0;
        while self.count_below(hi) <= index {
            lo = hi;
            width *= 2.0;
            hi = lo + width;
            expansions += 1;
            if expansions > 200 {
                return None;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

fn level(
    v: &PotentialExpr,
    kappa: f64,
    big_l: f64,
    r_max: f64,
    h: f64,
    index: usize,
) -> Result<(f64, f64), FdError> {
    let p = pencil(v, kappa, big_l, r_max, h)?;
    let e = p
        .eigenvalue(index)
        .ok_or(FdError::NoBoundState(index as u32))?;
    Ok((e, p.edge_potential))
}

/// Eigenvalue of the `state`-th radial level with angular momentum `l` in
/// `n` dimensions. Accurate to roughly 1e-8 for smooth confining or
/// Coulomb-like potentials.
pub fn fd_eigensolve(
    potential: &PotentialExpr,
    n: u32,
    l: u32,
    state: u32,
    mass: MassConvention,
) -> Result<f64, FdError> {
    let kappa = mass.kinetic_factor();
    let big_l = f64::from(l) + (f64::from(n) - 3.0) / 2.0;
    let index = state as usize;

    let mut r_max = R_MAX_START;
    let (mut prev, _) = level(potential, kappa, big_l, r_max, STEP, index)?;
    loop {
        let next_r = r_max * 2.0;
        if next_r > R_MAX_LIMIT {
            return Err(FdError::GridTooSmall(r_max));
        }
        let (e, edge) = level(potential, kappa, big_l, next_r, STEP, index)?;
        r_max = next_r;
        let settled = (e - prev).abs() <= BOX_TOL * e.abs().max(1.0);
        prev = e;
        if settled {
            if e.partial_cmp(&edge) != Some(std::cmp::Ordering::Less) {
                return Err(FdError::NoBoundState(state));
            }
            break;
        }
    }
    let (fine, _) = level(potential, kappa, big_l, r_max, STEP / 2.0, index)?;
    Ok((4.0 * fine - prev) / 3.0)
}
