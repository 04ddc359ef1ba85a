//! Perturbed Boussinesq system around the stratified states `rho = -y`
//! (stable) and `rho = +y` (unstable):
//!
//! ```text
//! d_t omega + u . grad omega = d_1 rho
//! d_t rho   + u . grad rho   = +-u_2,      u = grad^perp (-Delta)^-1 omega
//! ```
//!
//! With `mu = xi_1 / |xi|`, `w = omega_hat` and `sigma = |xi| rho_hat` the
//! linear part is `w' = i mu sigma`, `sigma' = +-i mu w` per mode.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::spectral::{Axis, Grid2D, Multiplier, SpectralField};
use crate::sqg::{w31_proxy, Termination, CFL_LIMIT};
use crate::transport::{advection_physical, tendencies, velocity_gradient_inf, Velocity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Background `rho = -y`, heavy fluid below.
    Stable,
    /// Background `rho = +y`.
    Unstable,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Stable => 1.0,
            Branch::Unstable => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stable" => Ok(Branch::Stable),
            "unstable" => Ok(Branch::Unstable),
            other => Err(invalid("branch", format!("expected stable or unstable, got {other:?}"))),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Stable => "stable",
            Branch::Unstable => "unstable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BoussState {
    pub omega: SpectralField,
    pub rho: SpectralField,
    pub time: f64,
}

impl BoussState {
    pub fn new(omega: SpectralField, rho: SpectralField) -> Result<Self> {
        if omega.grid() != rho.grid() {
            return Err(invalid("rho", "omega and rho live on different grids"));
        }
        Ok(Self { omega, rho, time: 0.0 })
    }
}

/// `E(k) = |omega_hat(k)|^2 + |xi_k|^2 |rho_hat(k)|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEnergy {
    pub per_mode: Vec<f64>,
}

impl ModeEnergy {
    pub fn of(state: &BoussState) -> Self {
        let grid = state.omega.grid();
        let per_mode = (0..grid.len())
            .map(|idx| {
                let (x1, x2) = grid.xi(idx);
                state.omega.coeffs()[idx].norm_sqr() + (x1 * x1 + x2 * x2) * state.rho.coeffs()[idx].norm_sqr()
            })
            .collect();
        Self { per_mode }
    }

    pub fn total(&self) -> f64 {
        self.per_mode.iter().sum()
    }
}

/// Exact per-mode linear flow over a fixed time.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: Grid2D,
    branch: Branch,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: &Grid2D, branch: Branch, t: f64) -> Self {
        let (mut cos, mut sin) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for idx in 0..grid.len() {
            let (x1, x2) = grid.xi(idx);
            let r = x1.hypot(x2);
            let arg = if r > 0.0 { t * x1 / r } else { 0.0 };
            let (s, c) = match branch {
                Branch::Stable => arg.sin_cos(),
                Branch::Unstable => (arg.sinh(), arg.cosh()),
            };
            let keep = !grid.is_nyquist(idx);
            cos.push(if keep { c } else { 0.0 });
            sin.push(if keep { s } else { 0.0 });
        }
        Self {
            grid: grid.clone(),
            branch,
            cos,
            sin,
        }
    }

    pub fn apply(&self, omega: &SpectralField, rho: &SpectralField) -> (SpectralField, SpectralField) {
        let i = Complex64::new(0.0, 1.0);
        let sign = self.branch.sign();
        let n = self.grid.len();
        let (mut w_out, mut r_out) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for idx in 0..n {
            let (x1, x2) = self.grid.xi(idx);
            let r = x1.hypot(x2);
            let (w, rh) = (omega.coeffs()[idx], rho.coeffs()[idx]);
            if r == 0.0 {
                w_out.push(w);
                r_out.push(rh);
                continue;
            }
            let (c, s) = (self.cos[idx], self.sin[idx]);
            let sigma = rh * r;
            w_out.push(w * c + i * sigma * s);
            r_out.push((sigma * c + i * w * (sign * s)) / r);
        }
        (
            SpectralField::from_coeffs(&self.grid, w_out).expect("grid-sized"),
            SpectralField::from_coeffs(&self.grid, r_out).expect("grid-sized"),
        )
    }
}

/// Exact solution of the linearized system at time `t >= 0`.
pub fn linear_propagator(state: &BoussState, t: f64, branch: Branch) -> Result<BoussState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("need finite t >= 0, got {t}")));
    }
    let (omega, rho) = Propagator::new(state.omega.grid(), branch, t).apply(&state.omega, &state.rho);
    Ok(BoussState {
        omega,
        rho,
        time: state.time + t,
    })
}

/// `u = (-d_2, d_1) (-Delta)^-1 omega`.
pub fn velocity(omega: &SpectralField) -> (SpectralField, SpectralField) {
    (
        omega.apply(&Multiplier::VelocityBouss(Axis::X1)),
        omega.apply(&Multiplier::VelocityBouss(Axis::X2)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoussParams {
    pub dt: f64,
    pub dealias: f64,
    pub branch: Branch,
}

impl Default for BoussParams {
    fn default() -> Self {
        Self {
            dt: 0.1,
            dealias: 2.0 / 3.0,
            branch: Branch::Stable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoussStepInfo {
    pub max_speed: f64,
    pub grad_rho_inf: f64,
}

pub struct BoussSolver {
    grid: Grid2D,
    params: BoussParams,
    full: Propagator,
    half: Propagator,
}

type Pair = (SpectralField, SpectralField);

fn axpy2(y: &Pair, a: f64, x: &Pair) -> Pair {
    (y.0.axpy(a, &x.0), y.1.axpy(a, &x.1))
}

impl BoussSolver {
    pub fn new(grid: &Grid2D, params: BoussParams) -> Result<Self> {
        if !(params.dt.is_finite() && params.dt != 0.0) {
            return Err(invalid("dt", format!("need finite nonzero step, got {}", params.dt)));
        }
        if !(params.dealias > 0.0 && params.dealias <= 1.0) {
            return Err(invalid("dealias", format!("{} outside (0, 1]", params.dealias)));
        }
        // Backward steps use the inverse flow, which the closed form covers
        // for negative times as well.
        Ok(Self {
            grid: grid.clone(),
            params,
            full: Propagator::new(grid, params.branch, params.dt),
            half: Propagator::new(grid, params.branch, 0.5 * params.dt),
        })
    }

    pub fn params(&self) -> BoussParams {
        self.params
    }

    /// `(-P(u . grad omega), -P(u . grad rho))`.
    pub fn nonlinear(&self, omega: &SpectralField, rho: &SpectralField) -> (Pair, BoussStepInfo) {
        let (u1, u2) = velocity(omega);
        let vel = Velocity::from_spectral(&u1, &u2);
        let (pw, _) = advection_physical(&vel, omega);
        let (pr, grad_rho_inf) = advection_physical(&vel, rho);
        let info = BoussStepInfo {
            max_speed: vel.max_speed(),
            grad_rho_inf,
        };
        (tendencies(&self.grid, &pw, &pr, self.params.dealias), info)
    }

    fn prop(&self, p: &Pair, half: bool) -> Pair {
        if half { &self.half } else { &self.full }.apply(&p.0, &p.1)
    }

    /// One Lawson RK4 step with the exact linear flow as integrating factor.
    pub fn step(&self, state: &BoussState) -> Result<(BoussState, BoussStepInfo)> {
        let h = self.params.dt;
        let y = (state.omega.clone(), state.rho.clone());
        let (k1, info) = self.nonlinear(&y.0, &y.1);
        let max_dt = if info.max_speed == 0.0 {
            f64::INFINITY
        } else {
            CFL_LIMIT / (info.max_speed * self.grid.k_max())
        };
        if h.abs() > max_dt {
            return Err(Error::CflViolation { dt: h.abs(), max_dt });
        }
        let a = self.prop(&axpy2(&y, 0.5 * h, &k1), true);
        let (k2, _) = self.nonlinear(&a.0, &a.1);
        let b = axpy2(&self.prop(&y, true), 0.5 * h, &k2);
        let (k3, _) = self.nonlinear(&b.0, &b.1);
        let ey = self.prop(&y, false);
        let c = axpy2(&ey, h, &self.prop(&k3, true));
        let (k4, _) = self.nonlinear(&c.0, &c.1);
        let mid = self.prop(&(&k2.0 + &k3.0, &k2.1 + &k3.1), true);
        let incr = axpy2(&axpy2(&self.prop(&k1, false), 2.0, &mid), 1.0, &k4);
        let next = axpy2(&ey, h / 6.0, &incr);
        let finite = |f: &SpectralField| f.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !(finite(&next.0) && finite(&next.1)) {
            return Err(Error::NonFinite { time: state.time + h });
        }
        Ok((
            BoussState {
                omega: next.0.without_mean(),
                rho: next.1.without_mean(),
                time: state.time + h,
            },
            info,
        ))
    }
}

/// Settings of the perturbation experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConfig {
    pub n: usize,
    pub l: f64,
    pub dt: f64,
    /// Profile amplitude; the data are `eps * amplitude * profile`.
    pub amplitude: f64,
    pub delta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub output_every: f64,
    pub stop_at_exit: bool,
    pub blowup_factor: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            n: 128,
            l: 20.0,
            dt: 0.1,
            amplitude: 5.0,
            delta: 0.5,
            gamma: 0.5,
            mu: 0.5,
            output_every: 1.0,
            stop_at_exit: true,
            blowup_factor: 1e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoussRecord {
    pub t: f64,
    pub hs_omega: f64,
    pub hs1_rho: f64,
    pub e_total: f64,
    pub grad_u_inf: f64,
    pub grad_rho_inf: f64,
    pub integral: f64,
}

/// Norms of the initial perturbation, as named in the smallness hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialNorms {
    pub omega_hs: f64,
    pub omega_h_minus1: f64,
    pub omega_w31: f64,
    pub rho_hs1: f64,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub eps: f64,
    pub branch: Branch,
    pub records: Vec<BoussRecord>,
    pub initial: InitialNorms,
    pub exit_time: Option<f64>,
    pub termination: Termination,
    /// `(t, sqrt E)` at the lattice mode `(1, 0)`, sampled every step.
    pub dominant_mode: Vec<(f64, f64)>,
    pub final_state: BoussState,
}

impl StabilityReport {
    /// Least-squares slope of `ln sqrt E(1, 0)` over `window`.
    pub fn growth_rate(&self, window: (f64, f64)) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .dominant_mode
            .iter()
            .filter(|(t, a)| *t >= window.0 && *t <= window.1 && *a > 0.0)
            .map(|&(t, a)| (t, a.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
        Some(sxy / sxx)
    }
}

pub fn stability_experiment(eps: f64, t_final: f64, branch: Branch, cfg: StabilityConfig) -> Result<StabilityReport> {
    if !(0.0..=0.1).contains(&eps) {
        return Err(invalid("eps", format!("need 0 <= eps <= 0.1, got {eps}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(invalid("T", format!("need finite T > 0, got {t_final}")));
    }
    let grid = Grid2D::new(cfg.n, cfg.l)?;
    let (w0, r0) = crate::profiles::bouss_pair(&grid);
    let scale = eps * cfg.amplitude;
    let state0 = BoussState::new(w0.scaled(scale), r0.scaled(scale))?;
    let solver = BoussSolver::new(&grid, BoussParams { dt: cfg.dt, branch, ..BoussParams::default() })?;
    let (s_w, s_r) = (4.0 + cfg.delta, 5.0 + cfg.gamma);
    let norm = |s: &BoussState| s.omega.sobolev_norm(s_w).expect("index") + s.rho.sobolev_norm(s_r).expect("index");
    let initial = InitialNorms {
        omega_hs: state0.omega.sobolev_norm(s_w)?,
        omega_h_minus1: state0.omega.sobolev_norm(-1.0)?,
        omega_w31: w31_proxy(&state0.omega, cfg.mu),
        rho_hs1: state0.rho.sobolev_norm(s_r)?,
    };
    let n0 = norm(&state0);
    let dominant = grid.index_of(1, 0);
    let n_steps = (t_final / cfg.dt).round() as usize;
    let stride = ((cfg.output_every / cfg.dt).round() as usize).max(1);

    let mut state = state0;
    let mut records = Vec::new();
    let mut dominant_mode = Vec::new();
    let mut integral = 0.0;
    let mut prev_g: Option<f64> = None;
    let mut exit_time = None;
    let mut termination = Termination::Completed;
    for n in 0..=n_steps {
        let now = norm(&state);
        let energy = ModeEnergy::of(&state);
        dominant_mode.push((state.time, energy.per_mode[dominant].sqrt()));
        let (u1, u2) = velocity(&state.omega);
        let gu = velocity_gradient_inf(&u1, &u2);
        let step = (n < n_steps).then(|| solver.step(&state));
        let gr = match &step {
            Some(Ok((_, info))) => info.grad_rho_inf,
            _ => solver.nonlinear(&state.omega, &state.rho).1.grad_rho_inf,
        };
        let g = gu + gr;
        if let Some(pg) = prev_g {
            integral += 0.5 * cfg.dt * (pg + g);
        }
        prev_g = Some(g);
        let record = BoussRecord {
            t: state.time,
            hs_omega: state.omega.sobolev_norm(s_w)?,
            hs1_rho: state.rho.sobolev_norm(s_r)?,
            e_total: energy.total(),
            grad_u_inf: gu,
            grad_rho_inf: gr,
            integral,
        };
        let mut stop = None;
        if exit_time.is_none() && n0 > 0.0 && now > 2.0 * n0 {
            exit_time = Some(state.time);
            if cfg.stop_at_exit {
                stop = Some(Termination::BootstrapExit);
            }
        }
        if stop.is_none() && n0 > 0.0 && now > cfg.blowup_factor * n0 {
            stop = Some(Termination::BlowUp {
                time: state.time,
                reason: format!("norm above {}x initial", cfg.blowup_factor),
            });
        }
        if stop.is_none() {
            match &step {
                Some(Err(Error::NonFinite { time })) => {
                    stop = Some(Termination::BlowUp {
                        time: *time,
                        reason: "non-finite state".into(),
                    })
                }
                Some(Err(e)) => stop = Some(Termination::Rejected(e.clone())),
                _ => {}
            }
        }
        if n % stride == 0 || n == n_steps || stop.is_some() {
            records.push(record);
        }
        if let Some(t) = stop {
            termination = t;
            break;
        }
        match step {
            Some(Ok((next, _))) => {
                state = next;
                state.time = (n + 1) as f64 * cfg.dt;
            }
            _ => break,
        }
    }
    Ok(StabilityReport {
        eps,
        branch,
        records,
        initial,
        exit_time,
        termination,
        dominant_mode,
        final_state: state,
    })
}
