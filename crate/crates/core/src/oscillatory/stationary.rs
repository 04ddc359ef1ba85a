use std::f64::consts::TAU;

use super::phase::{hessian_det, phase_gradient, phase_hessian, PhaseSpec};

/// Closed annulus `r_in <= |xi| <= r_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub r_in: f64,
    pub r_out: f64,
}

impl Annulus {
    pub const UNIT_SHELL: Annulus = Annulus { r_in: 0.5, r_out: 2.0 };

    pub fn contains(&self, xi: (f64, f64)) -> bool {
        let r = xi.0.hypot(xi.1);
        r >= self.r_in && r <= self.r_out
    }
}

/// A one-parameter family of stationary points, reported by representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuum {
    pub description: &'static str,
    pub representatives: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarySet {
    /// Isolated stationary points with `|grad phi| <= 1e-10`.
    pub points: Vec<(f64, f64)>,
    /// Set when a continuum is present or some point has `|det H| <= 1e-8`.
    pub degenerate: bool,
    pub continuum: Option<Continuum>,
}

impl StationarySet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

pub const GRADIENT_TOL: f64 = 1e-10;
const DEGENERATE_DET: f64 = 1e-8;
const DEDUP_DIST: f64 = 1e-6;
const SEEDS: usize = 64;
const MAX_NEWTON: usize = 60;

/// Newton's method for `grad phi = 0` from a `64 x 64` polar seed grid on the
/// shell. For `alpha = 1, v = 0` the gradient vanishes on the whole line
/// `xi_2 = 0`; that case is reported as a continuum.
pub fn find_stationary(p: &PhaseSpec, shell: Annulus) -> StationarySet {
    let v = p.v();
    if p.alpha() == 1.0 && v.0 == 0.0 && v.1 == 0.0 {
        let r_mid = (shell.r_in * shell.r_out).sqrt();
        return StationarySet {
            points: Vec::new(),
            degenerate: true,
            continuum: Some(Continuum {
                description: "line xi_2 = 0",
                representatives: vec![(r_mid, 0.0), (-r_mid, 0.0)],
            }),
        };
    }
    let mut points: Vec<(f64, f64)> = Vec::new();
    for ir in 0..SEEDS {
        let r = shell.r_in + (shell.r_out - shell.r_in) * (ir as f64 + 0.5) / SEEDS as f64;
        for it in 0..SEEDS {
            let th = TAU * (it as f64 + 0.5) / SEEDS as f64;
            let Some(xi) = newton(p, (r * th.cos(), r * th.sin())) else {
                continue;
            };
            if !shell.contains(xi) {
                continue;
            }
            if points
                .iter()
                .all(|q| (q.0 - xi.0).hypot(q.1 - xi.1) > DEDUP_DIST)
            {
                points.push(xi);
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
    let degenerate = points
        .iter()
        .any(|&xi| hessian_det(p, xi).expect("nonzero").abs() <= DEGENERATE_DET);
    StationarySet {
        points,
        degenerate,
        continuum: None,
    }
}

fn newton_step(p: &PhaseSpec, xi: (f64, f64), g: (f64, f64)) -> Option<(f64, f64)> {
    let h = phase_hessian(p, xi).ok()?;
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some((
        (h[1][1] * g.0 - h[0][1] * g.1) / det,
        (-h[1][0] * g.0 + h[0][0] * g.1) / det,
    ))
}

fn newton(p: &PhaseSpec, mut xi: (f64, f64)) -> Option<(f64, f64)> {
    for _ in 0..MAX_NEWTON {
        let g = phase_gradient(p, xi).ok()?;
        let gn = g.0.hypot(g.1);
        let (dx, dy) = newton_step(p, xi, g)?;
        if gn <= GRADIENT_TOL {
            // One polishing step, kept only if it helps.
            let polished = (xi.0 - dx, xi.1 - dy);
            let gp = phase_gradient(p, polished).ok()?;
            return Some(if gp.0.hypot(gp.1) < gn { polished } else { xi });
        }
        // Damp steps that would jump across the singular origin.
        let r = xi.0.hypot(xi.1);
        let step = dx.hypot(dy);
        let scale = if step > 0.5 * r { 0.5 * r / step } else { 1.0 };
        xi = (xi.0 - scale * dx, xi.1 - scale * dy);
        if !(xi.0.is_finite() && xi.1.is_finite()) || xi.0.hypot(xi.1) > 1e3 {
            return None;
        }
    }
    let g = phase_gradient(p, xi).ok()?;
    (g.0.hypot(g.1) <= GRADIENT_TOL).then_some(xi)
}
