//! Configuration-driven experiment runner.

mod config;
mod report;

use rayon::prelude::*;

pub use config::{
    BoussConfig, BranchName, DecayProfile, Experiment, ExperimentConfig, GridConfig, KernelConfig, LinDecayConfig,
    SharpnessConfig, SqgConfig, SqgProfile, SweepConfig, SweepTarget,
};
pub use report::{config_hash, fmt_value, CheckResult, ExperimentReport, FittedConstant, Metadata, Series};

use crate::boussinesq::{stability_experiment, Branch, StabilityConfig};
use crate::error::{invalid, Error, Result};
use crate::fit::{fit_power_law, geomspace, linspace};
use crate::littlewood_paley::LPBank;
use crate::oscillatory::{kernel_direct, minimizing_lambda, split_budget_sup, PhaseSpec, Quadrature};
use crate::profiles;
use crate::semigroup::{measure_decay, sharpness_check};
use crate::spectral::{read_dump, write_dump, Grid2D, SpectralField};
use crate::sqg::{run_and_diagnose, RunConfig, SqgParams, SqgSolver, Termination};

/// Runs `exp` with `jobs` worker threads for sweeps. Results do not depend
/// on `jobs`.
pub fn run(exp: Experiment, config: &ExperimentConfig, jobs: usize) -> Result<ExperimentReport> {
    config.validate(exp)?;
    if jobs == 0 {
        return Err(invalid("jobs", "need at least one job"));
    }
    match exp {
        Experiment::LinDecay => lin_decay(config),
        Experiment::Sharpness => sharpness(config),
        Experiment::Kernel => kernel(config),
        Experiment::Sqg => sqg(config, config.sqg.eps),
        Experiment::Bouss => bouss(config, config.bouss.eps),
        Experiment::Sweep => sweep(config, jobs),
    }
}

fn grid_report(exp: Experiment, config: &ExperimentConfig) -> Result<(Grid2D, ExperimentReport)> {
    let g = config.grid_for(exp).expect("grid experiment");
    let grid = g.build()?;
    let j = LPBank::new(&grid).j_range();
    Ok((grid.clone(), ExperimentReport::new(exp, config, Some((g.n, g.l)), Some(j))))
}

fn range_check(x: f64, r: (f64, f64)) -> bool {
    x >= r.0 && x <= r.1
}

fn lin_decay(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let c = &config.lin_decay;
    let (grid, mut report) = grid_report(Experiment::LinDecay, config)?;
    let f = match c.profile {
        DecayProfile::Gaussian => profiles::gaussian(&grid, c.width),
        DecayProfile::CompactBump => profiles::compact_bump(&grid, c.radius),
        DecayProfile::Random => profiles::random_band(&grid, 0.5, 4.0, config.seed),
    };
    let times = geomspace(c.t_min, c.t_max, c.samples);
    let window = c.window.unwrap_or((c.t_min, c.t_max));
    let rep = measure_decay(&f, c.alpha, &times, Some(window), &LPBank::new(&grid))?;
    let mut s = Series::new("decay", &["t", "linf", "fitted", "fitted_slope"]);
    for (&t, &y) in rep.times.iter().zip(&rep.linf_values) {
        s.push(vec![t, y, (rep.fit.intercept + rep.fit.slope * t.ln()).exp(), rep.fit.slope]);
    }
    report.series.push(s);
    report.constant("slope", rep.fit.slope, rep.fit.window, rep.fit.residual);
    report.constant("decay_constant", rep.constant, rep.fit.window, rep.fit.residual);
    report.constant("besov_norm", rep.besov, (0.0, 0.0), 0.0);
    let range = c.slope_range();
    report.check(
        "slope",
        range_check(rep.fit.slope, range),
        format!("{:.4} in [{}, {}]", rep.fit.slope, range.0, range.1),
    );
    report.check(
        "window reliable",
        !rep.boundary_contaminated,
        format!("box faithful to t = {:.1}", rep.reliable_t_max),
    );
    Ok(report)
}

fn sharpness(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let c = &config.sharpness;
    let (grid, mut report) = grid_report(Experiment::Sharpness, config)?;
    let f = profiles::band_pass_gaussian(&grid, c.width, c.power);
    let times = linspace(0.0, c.t_max, c.samples);
    let rep = sharpness_check(&f, &times, c.window, c.agree_t_max)?;
    let mut trace = Series::new("trace", &["t", "direct", "radial", "envelope"]);
    for i in 0..rep.times.len() {
        trace.push(vec![rep.times[i], rep.direct[i], rep.radial[i], rep.envelope[i]]);
    }
    let mut peaks = Series::new("peaks", &["t", "ratio"]);
    rep.peaks.iter().for_each(|&(t, r)| peaks.push(vec![t, r]));
    let mut zeros = Series::new("zeros", &["t", "offset"]);
    rep.zeros.iter().for_each(|&(t, d)| zeros.push(vec![t, d]));
    report.series.extend([trace, peaks, zeros]);
    let peak = rep.worst_peak_deviation();
    let zero = rep.worst_zero_offset();
    report.check("peaks", !rep.peaks.is_empty() && peak <= c.peak_tol, format!("{} peaks, worst |ratio - 1| {peak:.4}", rep.peaks.len()));
    report.check("zeros", !rep.zeros.is_empty() && zero <= c.zero_tol, format!("{} zeros, worst offset {zero:.4}", rep.zeros.len()));
    report.check(
        "two paths",
        rep.two_path_error <= c.two_path_tol,
        format!("{:.2e} for t <= {}", rep.two_path_error, rep.agree_t_max),
    );
    report.check("bessel", rep.bessel_agreement <= c.bessel_tol, format!("series vs quadrature {:.2e}", rep.bessel_agreement));
    Ok(report)
}

fn kernel(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let c = &config.kernel;
    let mut report = ExperimentReport::new(Experiment::Kernel, config, None, None);
    let q = Quadrature { tol: c.quad_tol, ..Quadrature::default() };
    let times = geomspace(c.t_min, c.t_max, c.samples);
    let with_budget = c.alpha == 1.0;
    let mut s = Series::new("kernel", &["t", "v1", "v2", "abs_kernel", "budget"]);
    let mut sup = Vec::new();
    let mut worst = 0.0f64;
    for &t in &times {
        let budget = if with_budget { split_budget_sup(t, t.powf(-0.5))?.total() } else { f64::NAN };
        let mut m = 0.0f64;
        for &v in &c.velocities {
            let k = kernel_direct(&PhaseSpec::new(v, c.alpha)?, t, q)?.norm();
            m = m.max(k);
            s.push(vec![t, v.0, v.1, k, budget]);
            worst = worst.max(k / budget);
        }
        sup.push(m);
    }
    report.series.push(s);
    if times.len() >= 5 {
        let fit = fit_power_law(&times, &sup, (c.t_min, c.t_max))?;
        report.constant("sup_kernel_slope", fit.slope, fit.window, fit.residual);
    }
    if with_budget {
        report.check("kernel within budget", worst <= c.factor, format!("max |kernel| / budget {worst:.3} <= {}", c.factor));
        let lambdas = geomspace(c.lambda_min, c.lambda_max, c.lambda_points);
        let cell = (c.lambda_max / c.lambda_min).ln() / (c.lambda_points - 1) as f64;
        let mut split = Series::new("split", &["t", "lambda", "near", "far", "total"]);
        for &t in &c.lambda_times {
            for &l in &lambdas {
                let b = split_budget_sup(t, l)?;
                split.push(vec![t, l, b.near, b.far, b.total()]);
            }
            let i = minimizing_lambda(t, &lambdas)?;
            let target = (t.powf(-0.5) / c.lambda_min).ln() / cell;
            report.check(
                format!("argmin lambda at t = {t}"),
                (i as f64 - target).abs() <= 1.0,
                format!("{:.4} (cell {i}) vs t^-1/2 {:.4} (cell {target:.2})", lambdas[i], t.powf(-0.5)),
            );
        }
        report.series.push(split);
    }
    Ok(report)
}

fn sqg_initial(config: &ExperimentConfig, grid: &Grid2D, eps: f64) -> Result<SpectralField> {
    let c = &config.sqg;
    if let Some(path) = &c.initial {
        let f = read_dump(std::fs::File::open(path)?)?;
        if f.grid() != grid {
            return Err(invalid("initial", format!("dump grid {:?} differs from run grid {grid:?}", f.grid())));
        }
        return Ok(f.without_mean());
    }
    let profile = match c.profile {
        SqgProfile::SqgPair => profiles::sqg_pair(grid),
        SqgProfile::Gaussian => profiles::gaussian(grid, c.width).truncated(c.dealias),
        SqgProfile::Random => profiles::random_band(grid, 0.5, 4.0, config.seed).truncated(c.dealias),
    };
    Ok(profile.scaled(eps * c.amplitude))
}

fn termination_failure(t: &Termination) -> Option<String> {
    match t {
        Termination::Completed | Termination::BootstrapExit => None,
        Termination::BlowUp { time, reason } => Some(format!("blow-up at t = {time}: {reason}")),
        Termination::Rejected(e) => Some(e.to_string()),
    }
}

fn finite_or_inf(t: Option<f64>) -> f64 {
    t.unwrap_or(f64::INFINITY)
}

fn sqg(config: &ExperimentConfig, eps: f64) -> Result<ExperimentReport> {
    let c = &config.sqg;
    let (grid, mut report) = grid_report(Experiment::Sqg, config)?;
    let theta0 = sqg_initial(config, &grid, eps)?;
    let solver = SqgSolver::new(&grid, SqgParams { alpha: c.alpha, dt: c.dt, dealias: c.dealias })?;
    let d = run_and_diagnose(
        &solver,
        &theta0,
        RunConfig {
            t_final: c.t_final,
            output_every: c.output_every,
            sobolev: 4.0 + c.delta,
            mu: c.mu,
            stop_at_exit: c.stop_at_exit,
            blowup_factor: 1e3,
        },
    );
    let mut s = Series::new("sqg", &["t", "H_s", "L2", "gradU_inf", "gradTheta_inf", "integral", "envelope"]);
    for r in &d.records {
        s.push(vec![r.t, r.h_s, r.l2, r.grad_u_inf, r.grad_theta_inf, r.integral, r.envelope]);
    }
    let mut init = Series::new("initial", &["eps", "H_s", "L2", "W31"]);
    init.push(vec![eps, d.hs0, d.l2_0, d.w_norm0]);
    let mut boot = Series::new("bootstrap", &["eps", "exit_time", "c_fit"]);
    boot.push(vec![eps, finite_or_inf(d.exit_time), d.c_fit]);
    report.series.extend([s, init, boot]);

    let t_end = d.final_state.time;
    let slack: Vec<f64> = d
        .records
        .iter()
        .filter(|r| r.integral > 0.0 && d.hs0 > 0.0)
        .map(|r| (r.h_s / d.hs0).ln() - d.c_fit * r.integral)
        .collect();
    let rms = if slack.is_empty() { 0.0 } else { (slack.iter().map(|x| x * x).sum::<f64>() / slack.len() as f64).sqrt() };
    report.constant("gronwall_c", d.c_fit, (0.0, t_end), rms);
    report.check("envelope dominates", d.envelope_dominates(), format!("c = {:.4}", d.c_fit));
    let drift = if t_end > 0.0 { d.max_l2_drift / t_end } else { 0.0 };
    report.check("L2 conservation", drift <= c.l2_drift_tol, format!("relative drift {drift:.2e} per unit time"));
    report.numeric_failure = termination_failure(&d.termination);
    if c.checkpoint {
        let mut bytes = Vec::new();
        write_dump(&d.final_state.theta, &mut bytes)?;
        report.binaries.push(("theta_final.bin".into(), bytes));
    }
    Ok(report)
}

fn bouss(config: &ExperimentConfig, eps: f64) -> Result<ExperimentReport> {
    let c = &config.bouss;
    let (grid, mut report) = grid_report(Experiment::Bouss, config)?;
    let branch: Branch = c.branch.into();
    let rep = stability_experiment(
        eps,
        c.t_final,
        branch,
        StabilityConfig {
            n: grid.n(),
            l: grid.l(),
            dt: c.dt,
            amplitude: c.amplitude,
            delta: c.delta,
            gamma: c.gamma,
            mu: c.mu,
            output_every: c.output_every,
            stop_at_exit: c.stop_at_exit,
            blowup_factor: 1e3,
        },
    )?;
    let mut s = Series::new("bouss", &["t", "Hs_omega", "Hs1_rho", "E_total", "gradU_inf", "gradRho_inf", "integral"]);
    for r in &rep.records {
        s.push(vec![r.t, r.hs_omega, r.hs1_rho, r.e_total, r.grad_u_inf, r.grad_rho_inf, r.integral]);
    }
    let mut init = Series::new("initial", &["eps", "omega_Hs", "omega_Hm1", "omega_W31", "rho_Hs1"]);
    let i = rep.initial;
    init.push(vec![eps, i.omega_hs, i.omega_h_minus1, i.omega_w31, i.rho_hs1]);
    let mut boot = Series::new("bootstrap", &["eps", "exit_time"]);
    boot.push(vec![eps, finite_or_inf(rep.exit_time)]);
    report.series.extend([s, init, boot]);
    let t_end = rep.final_state.time;
    if branch == Branch::Unstable && eps > 0.0 {
        let window = c.growth_window.unwrap_or((0.0, t_end));
        if let Some(rate) = rep.growth_rate(window) {
            report.constant("growth_rate", rate, window, 0.0);
            if c.growth_window.is_some() {
                report.check(
                    "growth rate",
                    (rate - 1.0).abs() <= c.growth_tol,
                    format!("{rate:.4} vs 1 within {}", c.growth_tol),
                );
            }
        }
    }
    report.numeric_failure = termination_failure(&rep.termination);
    Ok(report)
}

fn sweep(config: &ExperimentConfig, jobs: usize) -> Result<ExperimentReport> {
    let member = config.sweep_member();
    let g = config.grid_for(member).expect("grid experiment");
    let grid = g.build()?;
    let mut report = ExperimentReport::new(Experiment::Sweep, config, Some((g.n, g.l)), Some(LPBank::new(&grid).j_range()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let runs: Vec<Result<ExperimentReport>> = pool.install(|| {
        config
            .sweep
            .eps
            .par_iter()
            .map(|&eps| {
                let mut sub = config.clone();
                sub.experiment = Some(member);
                match member {
                    Experiment::Sqg => {
                        sub.sqg.eps = eps;
                        sqg(&sub, eps)
                    }
                    _ => {
                        sub.bouss.eps = eps;
                        bouss(&sub, eps)
                    }
                }
            })
            .collect()
    });
    let mut trend = Series::new("trend", &["eps", "exit_time"]);
    let mut points = Vec::new();
    for (&eps, run) in config.sweep.eps.iter().zip(runs) {
        let sub = run?;
        let exit = sub
            .series("bootstrap")
            .and_then(|s| s.column("exit_time"))
            .map_or(f64::NAN, |c| c[0]);
        trend.push(vec![eps, exit]);
        points.push((eps, exit));
        report.members.push((format!("eps_{}", fmt_value(eps)), sub));
    }
    points.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = points.windows(2).all(|w| w[1].1 >= w[0].1);
    let shown: Vec<String> = points
        .iter()
        .map(|(e, t)| format!("eps {}: {}", fmt_value(*e), if t.is_finite() { format!("{t:.3}") } else { "censored".into() }))
        .collect();
    report.check("exit time nondecreasing as eps decreases", monotone, shown.join(", "));
    report.series.push(trend);
    Ok(report)
}
