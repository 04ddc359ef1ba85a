//! Two-piece budget for the unit-shell kernel: a strip `|xi_2| <= lambda`
//! around the degenerate line, and a stationary-phase remainder.

use super::kernel::bump_line_mass;
use super::phase::{hessian_det, PhaseSpec};
use super::stationary::{find_stationary, Annulus};
use crate::error::{invalid, Result};
use crate::littlewood_paley::bump;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitBound {
    /// `2 lambda int phi(xi_1, 0) d xi_1`, the bump mass of the strip to
    /// leading order in `lambda`.
    pub near: f64,
    /// `t^-1 sum_eta phi(eta) |det H(eta)|^{-1/2}` over stationary points
    /// outside the strip; for `alpha = 1` the weight is `|eta|^3 / |eta_2|`.
    pub far: f64,
}

impl SplitBound {
    pub fn total(&self) -> f64 {
        self.near + self.far
    }
}

fn check(t: f64, lambda: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("need t > 0, got {t}")));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(invalid("lambda", format!("need 0 < lambda <= 1, got {lambda}")));
    }
    Ok(())
}

pub fn near_budget(lambda: f64) -> f64 {
    2.0 * lambda * bump_line_mass()
}

/// Budget at the single velocity `v` of `p`.
pub fn split_bound(p: &PhaseSpec, t: f64, lambda: f64) -> Result<SplitBound> {
    check(t, lambda)?;
    let set = find_stationary(p, Annulus::UNIT_SHELL);
    let far = set
        .points
        .iter()
        .filter(|eta| eta.1.abs() > lambda)
        .map(|&eta| {
            let det = hessian_det(p, eta).expect("stationary points avoid the origin");
            bump(eta.0.hypot(eta.1)) / det.abs().sqrt()
        })
        .sum::<f64>()
        / t;
    Ok(SplitBound {
        near: near_budget(lambda),
        far,
    })
}

/// Budget maximized over the velocity, for `alpha = 1`.
///
/// Every `eta` with `eta_2 != 0` is stationary for exactly one velocity, whose
/// stationary set is `{eta, -eta}`. The far term is therefore
/// `2 t^-1 sup phi(eta) |eta|^3 / |eta_2|` over `|eta_2| > lambda`, attained as
/// `|eta_2|` decreases to `lambda`.
pub fn split_budget_sup(t: f64, lambda: f64) -> Result<SplitBound> {
    check(t, lambda)?;
    let n = 4096;
    let (lo, hi) = (lambda.max(0.5), 2.0);
    let best = (0..=n)
        .map(|i| {
            let r = lo + (hi - lo) * i as f64 / n as f64;
            bump(r) * r.powi(3) / lambda
        })
        .fold(0.0, f64::max);
    Ok(SplitBound {
        near: near_budget(lambda),
        far: 2.0 * best / t,
    })
}

/// Index of the smallest `near + far` on a `lambda` grid.
pub fn minimizing_lambda(t: f64, lambdas: &[f64]) -> Result<usize> {
    let mut best = (0, f64::INFINITY);
    for (i, &l) in lambdas.iter().enumerate() {
        let total = split_budget_sup(t, l)?.total();
        if total < best.1 {
            best = (i, total);
        }
    }
    Ok(best.0)
}
