//! Dispersive SQG: `d_t theta + u . grad theta = R_1 theta` with
//! `u = (-R_2 theta, R_1 theta)`, and its `alpha`-family.
//!
//! Time stepping is the integrating-factor (Lawson) RK4 scheme: the linear
//! propagator is applied exactly and only the transport term is discretized.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::semigroup::check_alpha;
use crate::spectral::{dispersion, Axis, Grid2D, Multiplier, SpectralField};
use crate::transport::{advection_physical, tendency, velocity_gradient_inf, Velocity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqgParams {
    pub alpha: f64,
    pub dt: f64,
    /// Fraction of the half-spectrum kept per axis (2/3 rule by default).
    pub dealias: f64,
}

impl Default for SqgParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            dt: 1e-2,
            dealias: 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SqgState {
    pub theta: SpectralField,
    pub time: f64,
}

/// Largest stable Courant number `dt max|u| pi N / L`.
pub const CFL_LIMIT: f64 = 0.5;

/// Quantities of the input state computed during a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub max_speed: f64,
    pub grad_theta_inf: f64,
}

/// `u = (u_1, u_2)` with symbols `(i xi_2, -i xi_1) / |xi|^alpha`.
pub fn velocity(theta: &SpectralField, alpha: f64) -> (SpectralField, SpectralField) {
    (
        theta.apply(&Multiplier::VelocitySqg { component: Axis::X1, alpha }),
        theta.apply(&Multiplier::VelocitySqg { component: Axis::X2, alpha }),
    )
}

pub struct SqgSolver {
    grid: Grid2D,
    params: SqgParams,
    e_full: Vec<Complex64>,
    e_half: Vec<Complex64>,
}

impl SqgSolver {
    pub fn new(grid: &Grid2D, params: SqgParams) -> Result<Self> {
        check_alpha(params.alpha)?;
        if !(params.dt.is_finite() && params.dt != 0.0) {
            return Err(invalid("dt", format!("need finite nonzero step, got {}", params.dt)));
        }
        if !(params.dealias > 0.0 && params.dealias <= 1.0) {
            return Err(invalid("dealias", format!("{} outside (0, 1]", params.dealias)));
        }
        let phase = |h: f64| -> Vec<Complex64> {
            (0..grid.len())
                .map(|idx| {
                    if grid.is_nyquist(idx) {
                        Complex64::default()
                    } else {
                        Complex64::from_polar(1.0, -h * dispersion(grid.xi(idx), params.alpha))
                    }
                })
                .collect()
        };
        Ok(Self {
            grid: grid.clone(),
            params,
            e_full: phase(params.dt),
            e_half: phase(0.5 * params.dt),
        })
    }

    pub fn params(&self) -> SqgParams {
        self.params
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// `-P(u . grad theta)` with the dealiasing projection `P`.
    pub fn nonlinear(&self, theta: &SpectralField) -> (SpectralField, StepInfo) {
        let (u1, u2) = velocity(theta, self.params.alpha);
        let vel = Velocity::from_spectral(&u1, &u2);
        let (prod, grad_theta_inf) = advection_physical(&vel, theta);
        let info = StepInfo {
            max_speed: vel.max_speed(),
            grad_theta_inf,
        };
        (tendency(&self.grid, &prod, self.params.dealias), info)
    }

    fn propagate(&self, f: &SpectralField, half: bool) -> SpectralField {
        let e = if half { &self.e_half } else { &self.e_full };
        let c = f.coeffs().iter().zip(e).map(|(a, b)| a * b).collect();
        SpectralField::from_coeffs(&self.grid, c).expect("grid-sized")
    }

    pub fn max_dt(&self, max_speed: f64) -> f64 {
        if max_speed == 0.0 {
            f64::INFINITY
        } else {
            CFL_LIMIT / (max_speed * self.grid.k_max())
        }
    }

    /// One Lawson RK4 step.
    pub fn step(&self, state: &SqgState) -> Result<(SqgState, StepInfo)> {
        let h = self.params.dt;
        let y = &state.theta;
        let (k1, info) = self.nonlinear(y);
        let max_dt = self.max_dt(info.max_speed);
        if h.abs() > max_dt {
            return Err(Error::CflViolation { dt: h.abs(), max_dt });
        }
        let ey_half = self.propagate(y, true);
        let a = self.propagate(&y.axpy(0.5 * h, &k1), true);
        let (k2, _) = self.nonlinear(&a);
        let b = ey_half.axpy(0.5 * h, &k2);
        let (k3, _) = self.nonlinear(&b);
        let c = self.propagate(y, false).axpy(h, &self.propagate(&k3, true));
        let (k4, _) = self.nonlinear(&c);
        let incr = self
            .propagate(&k1, false)
            .axpy(2.0, &self.propagate(&(&k2 + &k3), true))
            .axpy(1.0, &k4);
        let next = self.propagate(y, false).axpy(h / 6.0, &incr).without_mean();
        if next.coeffs().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { time: state.time + h });
        }
        Ok((
            SqgState {
                theta: next,
                time: state.time + h,
            },
            info,
        ))
    }
}

/// Diagnostic run settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub t_final: f64,
    /// Spacing of recorded rows; every step is still monitored.
    pub output_every: f64,
    /// Sobolev index of the bootstrap norm, `4 + delta`.
    pub sobolev: f64,
    /// `mu` of the `W^{3+mu,1}` proxy.
    pub mu: f64,
    pub stop_at_exit: bool,
    /// Blow-up cap on `||theta||_{H^s}` relative to its initial value.
    pub blowup_factor: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t_final: 10.0,
            output_every: 0.5,
            sobolev: 4.5,
            mu: 0.5,
            stop_at_exit: false,
            blowup_factor: 1e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqgRecord {
    pub t: f64,
    pub h_s: f64,
    pub l2: f64,
    pub grad_u_inf: f64,
    pub grad_theta_inf: f64,
    pub integral: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    BootstrapExit,
    /// Non-finite values or the norm cap; `reason` says which.
    BlowUp { time: f64, reason: String },
    Rejected(Error),
}

#[derive(Debug, Clone)]
pub struct BootstrapDiagnostics {
    pub records: Vec<SqgRecord>,
    pub hs0: f64,
    pub l2_0: f64,
    /// `W^{3+mu,1}` proxy of the data.
    pub w_norm0: f64,
    /// Smallest `c` with `||theta(t)||_{H^s} <= ||theta_0||_{H^s} exp(c I(t))`
    /// at every monitored step, `I` the running integral.
    pub c_fit: f64,
    pub exit_time: Option<f64>,
    pub max_l2_drift: f64,
    pub termination: Termination,
    pub final_state: SqgState,
}

impl BootstrapDiagnostics {
    pub fn envelope_dominates(&self) -> bool {
        self.records.iter().all(|r| r.h_s <= r.envelope * (1.0 + 1e-12) + 1e-300)
    }
}

/// `sum_{|beta| <= 3} ||d^beta f||_{L^1} + || |grad|^{3+mu} f ||_{L^1}`.
pub fn w31_proxy(f: &SpectralField, mu: f64) -> f64 {
    let mut total = 0.0;
    for order in 0..=3u32 {
        for a in 0..=order {
            let b = order - a;
            let g = f.map_symbol(|(x1, x2)| {
                let i = Complex64::new(0.0, 1.0);
                (i * x1).powu(a) * (i * x2).powu(b)
            });
            total += g.l1_norm();
        }
    }
    total + f.apply(&Multiplier::FracLap(0.5 * (3.0 + mu))).l1_norm()
}

pub fn run_and_diagnose(solver: &SqgSolver, theta0: &SpectralField, cfg: RunConfig) -> BootstrapDiagnostics {
    let alpha = solver.params().alpha;
    let dt = solver.params().dt;
    let hs = |f: &SpectralField| f.sobolev_norm(cfg.sobolev).expect("index in range");
    let hs0 = hs(theta0);
    let l2_0 = theta0.l2_norm();
    let grad_u = |f: &SpectralField| {
        let (u1, u2) = velocity(f, alpha);
        velocity_gradient_inf(&u1, &u2)
    };
    let n_steps = (cfg.t_final / dt).round() as usize;
    let out_stride = ((cfg.output_every / dt).round() as usize).max(1);

    let mut state = SqgState {
        theta: theta0.clone(),
        time: 0.0,
    };
    let mut records = Vec::new();
    let mut integral = 0.0;
    let mut exit_time = None;
    let mut max_l2_drift = 0.0f64;
    let mut c_fit = 0.0f64;
    let mut termination = Termination::Completed;
    let mut prev_g: Option<f64> = None;

    for n in 0..=n_steps {
        let h_now = hs(&state.theta);
        let l2 = state.theta.l2_norm();
        if l2_0 > 0.0 {
            max_l2_drift = max_l2_drift.max((l2 - l2_0).abs() / l2_0);
        }
        let gu = grad_u(&state.theta);
        let step = if n < n_steps { Some(solver.step(&state)) } else { None };
        let gt = match &step {
            Some(Ok((_, info))) => info.grad_theta_inf,
            _ => {
                let (_, info) = solver.nonlinear(&state.theta);
                info.grad_theta_inf
            }
        };
        let g = gu + gt;
        if let Some(pg) = prev_g {
            integral += 0.5 * dt.abs() * (pg + g);
        }
        prev_g = Some(g);
        if hs0 > 0.0 && integral > 0.0 {
            c_fit = c_fit.max((h_now / hs0).ln() / integral);
        }
        if n % out_stride == 0 || n == n_steps {
            records.push(SqgRecord {
                t: state.time,
                h_s: h_now,
                l2,
                grad_u_inf: gu,
                grad_theta_inf: gt,
                integral,
                envelope: 0.0,
            });
        }
        if exit_time.is_none() && hs0 > 0.0 && h_now > 2.0 * hs0 {
            exit_time = Some(state.time);
            if cfg.stop_at_exit {
                termination = Termination::BootstrapExit;
                push_last(&mut records, &state, h_now, l2, gu, gt, integral);
                break;
            }
        }
        if hs0 > 0.0 && h_now > cfg.blowup_factor * hs0 {
            termination = Termination::BlowUp {
                time: state.time,
                reason: format!("H^s norm above {}x initial", cfg.blowup_factor),
            };
            push_last(&mut records, &state, h_now, l2, gu, gt, integral);
            break;
        }
        match step {
            None => break,
            Some(Ok((next, _))) => {
                state = next;
                // Avoid drift from accumulating dt.
                state.time = (n + 1) as f64 * dt;
            }
            Some(Err(Error::NonFinite { time })) => {
                termination = Termination::BlowUp {
                    time,
                    reason: "non-finite state".into(),
                };
                push_last(&mut records, &state, h_now, l2, gu, gt, integral);
                break;
            }
            Some(Err(e)) => {
                termination = Termination::Rejected(e);
                push_last(&mut records, &state, h_now, l2, gu, gt, integral);
                break;
            }
        }
    }
    for r in &mut records {
        r.envelope = hs0 * (c_fit * r.integral).exp();
    }
    BootstrapDiagnostics {
        records,
        hs0,
        l2_0,
        w_norm0: w31_proxy(theta0, cfg.mu),
        c_fit,
        exit_time,
        max_l2_drift,
        termination,
        final_state: state,
    }
}

fn push_last(records: &mut Vec<SqgRecord>, state: &SqgState, h_s: f64, l2: f64, gu: f64, gt: f64, integral: f64) {
    if records.last().is_some_and(|r| r.t == state.time) {
        return;
    }
    records.push(SqgRecord {
        t: state.time,
        h_s,
        l2,
        grad_u_inf: gu,
        grad_theta_inf: gt,
        integral,
        envelope: 0.0,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles;
    use crate::semigroup::{evolve_linear, SemigroupParams};

    #[test]
    fn plane_wave_velocity() {
        let g = Grid2D::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let th = profiles::plane_wave(&g, 1, 0);
        let (u1, u2) = velocity(&th, 1.0);
        assert!(u1.l2_norm() < 1e-14);
        assert!((u2.coeff(1, 0) - Complex64::new(0.0, -0.5)).norm() < 1e-14);
    }

    #[test]
    fn velocity_is_isometric_and_divergence_free() {
        let g = Grid2D::new(64, 10.0).unwrap();
        let th = profiles::random_band(&g, 0.5, 8.0, 21);
        let (u1, u2) = velocity(&th, 1.0);
        let speed = (u1.l2_norm().powi(2) + u2.l2_norm().powi(2)).sqrt();
        assert!((speed - th.l2_norm()).abs() <= 1e-12 * th.l2_norm());
        let div = &u1.apply(&Multiplier::Deriv(Axis::X1)) + &u2.apply(&Multiplier::Deriv(Axis::X2));
        let h1 = (u1.sobolev_norm(1.0).unwrap().powi(2) + u2.sobolev_norm(1.0).unwrap().powi(2)).sqrt();
        assert!(div.l2_norm() <= 1e-10 * h1);
    }

    #[test]
    fn single_wave_steps_linearly() {
        let g = Grid2D::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let th = profiles::plane_wave(&g, 2, 1).scaled(0.3);
        let solver = SqgSolver::new(&g, SqgParams { dt: 0.05, ..SqgParams::default() }).unwrap();
        let mut s = SqgState { theta: th.clone(), time: 0.0 };
        for _ in 0..20 {
            s = solver.step(&s).unwrap().0;
        }
        let lin = evolve_linear(&th, SemigroupParams::new(1.0, s.time).unwrap());
        assert!((&s.theta - &lin).l2_norm() <= 1e-12 * th.l2_norm());
    }

    #[test]
    fn forward_backward_returns() {
        let g = Grid2D::new(64, 20.0).unwrap();
        let th = profiles::sqg_pair(&g).scaled(0.5);
        let fwd = SqgSolver::new(&g, SqgParams { dt: 0.02, ..SqgParams::default() }).unwrap();
        let bwd = SqgSolver::new(&g, SqgParams { dt: -0.02, ..SqgParams::default() }).unwrap();
        let mut s = SqgState { theta: th.clone(), time: 0.0 };
        for _ in 0..10 {
            s = fwd.step(&s).unwrap().0;
        }
        for _ in 0..10 {
            s = bwd.step(&s).unwrap().0;
        }
        assert!((&s.theta - &th).linf_norm() <= 1e-6);
    }

    #[test]
    fn cfl_violation_reports_admissible_step() {
        let g = Grid2D::new(32, 10.0).unwrap();
        let th = profiles::sqg_pair(&g).scaled(50.0);
        let solver = SqgSolver::new(&g, SqgParams { dt: 1.0, ..SqgParams::default() }).unwrap();
        match solver.step(&SqgState { theta: th, time: 0.0 }) {
            Err(Error::CflViolation { dt, max_dt }) => assert!(max_dt < dt),
            other => panic!("expected CFL rejection, got {other:?}"),
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid2D::new(32, 10.0).unwrap();
        let solver = SqgSolver::new(&g, SqgParams::default()).unwrap();
        let d = run_and_diagnose(&solver, &SpectralField::zeros(&g), RunConfig { t_final: 1.0, ..RunConfig::default() });
        assert_eq!(d.termination, Termination::Completed);
        for r in &d.records {
            assert_eq!((r.h_s, r.l2, r.grad_u_inf, r.grad_theta_inf, r.integral, r.envelope), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn diagnostics_are_consistent() {
        let g = Grid2D::new(64, 20.0).unwrap();
        let solver = SqgSolver::new(&g, SqgParams { dt: 0.05, ..SqgParams::default() }).unwrap();
        let th = profiles::sqg_pair(&g).scaled(0.2);
        let d = run_and_diagnose(&solver, &th, RunConfig { t_final: 2.0, ..RunConfig::default() });
        assert!(d.records.windows(2).all(|w| w[1].integral >= w[0].integral));
        assert!(d.envelope_dominates());
        assert!(d.w_norm0 > 0.0 && d.c_fit >= 0.0);
        assert_eq!(d.records.len(), 5);
    }
}
