//! Structural properties across modules: operator algebra, Littlewood-Paley
//! consistency, decay invariances and solver behaviour.

use anisodisp::boussinesq::{linear_propagator, stability_experiment, BoussParams, BoussSolver, BoussState, Branch, StabilityConfig};
use anisodisp::fit::{fit_power_law, geomspace};
use anisodisp::littlewood_paley::{Exponent, LPBank};
use anisodisp::oscillatory::{kernel_direct, PhaseSpec, Quadrature};
use anisodisp::profiles;
use anisodisp::semigroup::{evolve_linear, measure_decay, SemigroupParams};
use anisodisp::spectral::{to_physical_pair, Axis, Grid2D, Multiplier, SpectralField};
use anisodisp::sqg::{run_and_diagnose, velocity, RunConfig, SqgParams, SqgSolver, SqgState};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn multipliers() -> Vec<Multiplier> {
    vec![
        Multiplier::Riesz(Axis::X1),
        Multiplier::Riesz(Axis::X2),
        Multiplier::FracLap(0.75),
        Multiplier::InvFracLap(0.5),
        Multiplier::Deriv(Axis::X1),
        Multiplier::Deriv(Axis::X2),
        Multiplier::SemigroupPhase { alpha: 1.5, t: 3.0 },
        Multiplier::VelocitySqg { component: Axis::X1, alpha: 1.0 },
        Multiplier::VelocityBouss(Axis::X2),
    ]
}

fn small_grid() -> Grid2D {
    Grid2D::new(32, 10.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multipliers_commute(seed in 0u64..1000) {
        let g = small_grid();
        let f = profiles::random_band(&g, 0.5, 6.0, seed);
        let ms = multipliers();
        for a in &ms {
            for b in &ms {
                let ab = f.apply(a).apply(b);
                let ba = f.apply(b).apply(a);
                let scale = ab.l2_norm().max(1e-300);
                prop_assert!((&ab - &ba).l2_norm() <= 1e-12 * scale, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn riesz_is_skew_adjoint(s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = small_grid();
        let f = profiles::random_band(&g, 0.5, 6.0, s1);
        let h = profiles::random_band(&g, 0.5, 6.0, s2);
        for axis in [Axis::X1, Axis::X2] {
            let r = Multiplier::Riesz(axis);
            let lhs = f.inner(&h.apply(&r));
            let rhs = -f.apply(&r).inner(&h);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * f.l2_norm() * h.l2_norm());
        }
        prop_assert!(f.inner(&f.apply(&Multiplier::Riesz(Axis::X1))).abs() <= 1e-12 * f.l2_norm().powi(2));
    }

    #[test]
    fn parseval_and_round_trip(seed in 0u64..1000) {
        let g = small_grid();
        let x = profiles::random_physical(&g, seed);
        let f = SpectralField::from_physical(&g, &x).unwrap();
        let physical = (x.iter().map(|v| v * v).sum::<f64>() * g.cell_area()).sqrt();
        prop_assert!((physical - f.l2_norm()).abs() <= 1e-12 * physical);
        let back = f.to_physical();
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * x.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }

    #[test]
    fn semigroup_is_unitary_real_and_commutes(seed in 0u64..1000, t in 0.0f64..50.0, alpha in 1.0f64..=2.0) {
        let g = small_grid();
        let f = profiles::random_band(&g, 0.5, 6.0, seed);
        let p = SemigroupParams::new(alpha, t).unwrap();
        let e = evolve_linear(&f, p);
        prop_assert!((e.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        prop_assert!(e.hermitian_defect() <= 1e-12 * f.l2_norm());
        for m in multipliers() {
            let a = evolve_linear(&f.apply(&m), p);
            let b = e.apply(&m);
            prop_assert!((&a - &b).l2_norm() <= 1e-12 * b.l2_norm().max(1e-300), "{m:?}");
        }
    }

    #[test]
    fn sqg_velocity_divergence_free(seed in 0u64..1000) {
        let g = small_grid();
        let th = profiles::random_band(&g, 0.5, 6.0, seed);
        let (u1, u2) = velocity(&th, 1.0);
        let div = &u1.apply(&Multiplier::Deriv(Axis::X1)) + &u2.apply(&Multiplier::Deriv(Axis::X2));
        let h1 = (u1.sobolev_norm(1.0).unwrap().powi(2) + u2.sobolev_norm(1.0).unwrap().powi(2)).sqrt();
        prop_assert!(div.l2_norm() <= 1e-10 * h1);
    }
}

#[test]
fn bernstein_constant_is_stable() {
    // Localized shell-j fields: P_j of a Gaussian of width 2^-j / 2 at a
    // random centre.
    let g = Grid2D::new(512, 40.0).unwrap();
    let bank = LPBank::new(&g);
    let mut cs = Vec::new();
    for j in 0..=2 {
        for seed in 0..6 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (cx, cy): (f64, f64) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let w = 0.5 * 2f64.powi(-j);
            let f = SpectralField::from_fn(&g, |x, y| (-((x - cx).powi(2) + (y - cy).powi(2)) / (w * w)).exp());
            let p = bank.project(&f, j, false).unwrap();
            cs.push(p.linf_norm() / (4f64.powi(j) * p.l1_norm()));
        }
    }
    let c = cs.iter().sum::<f64>() / cs.len() as f64;
    for &x in &cs {
        assert!((x / c - 1.0).abs() <= 0.1, "C = {c}, sample {x}");
    }
}

#[test]
fn besov_norm_converges_under_refinement() {
    let coarse = Grid2D::new(256, 40.0).unwrap();
    let fine = Grid2D::new(512, 40.0).unwrap();
    let a = LPBank::new(&coarse).besov_211(&profiles::gaussian(&coarse, 1.0));
    let b = LPBank::new(&fine).besov_211(&profiles::gaussian(&fine, 1.0));
    assert!((a - b).abs() <= 0.01 * b, "{a} vs {b}");
}

#[test]
fn besov_norm_grows_with_shell_range() {
    let g = Grid2D::new(128, 40.0).unwrap();
    let f = profiles::gaussian(&g, 0.5);
    let (lo, hi) = LPBank::new(&g).j_range();
    let mut prev = 0.0;
    for k in 0..=3 {
        let bank = LPBank::with_range(lo + 3 - k, hi - 3 + k).unwrap();
        let v = bank.besov_norm(&f, 2.0, Exponent::One, Exponent::One).unwrap();
        assert!(v >= prev, "range {k}: {v} < {prev}");
        prev = v;
    }
}

#[test]
fn dilation_shifts_shells_by_one() {
    // The same coefficients on a box of half the size sit at doubled
    // wavenumbers: f_hat(xi / 2), i.e. f(2x).
    let g = Grid2D::new(128, 40.0).unwrap();
    let half = Grid2D::new(128, 20.0).unwrap();
    let f = profiles::gaussian(&g, 1.0);
    let h = SpectralField::from_coeffs(&half, f.coeffs().to_vec()).unwrap();
    let bank = LPBank::with_range(-3, 4).unwrap();
    let a = bank.shell_norms(&f, Exponent::One);
    let b = bank.shell_norms(&h, Exponent::One);
    for &(j, v) in &a {
        if v < 1e-8 * a.iter().map(|x| x.1).fold(0.0, f64::max) {
            continue;
        }
        if let Some(&(_, w)) = b.iter().find(|x| x.0 == j + 1) {
            // L1 scales by the area ratio 1/4.
            assert!((w / v - 0.25).abs() <= 1e-10, "shell {j}: {}", w / v);
        }
    }
}

#[test]
fn decay_slope_is_data_independent() {
    let g = Grid2D::new(1024, 40.0).unwrap();
    let bank = LPBank::new(&g);
    let times = geomspace(10.0, 100.0, 40);
    let slope = |f: &SpectralField| measure_decay(f, 1.0, &times, Some((10.0, 100.0)), &bank).unwrap().fit.slope;
    let a = slope(&profiles::gaussian(&g, 0.18));
    let b = slope(&profiles::compact_bump(&g, 0.45));
    assert!((a - b).abs() <= 0.05, "gaussian {a}, bump {b}");
}

#[test]
fn degenerate_kernel_decays_like_inverse_sqrt() {
    // v = 0 sits on the degenerate line; |K| t^{1/2} neither grows nor
    // collapses over [10, 200].
    let q = Quadrature::default();
    let p = PhaseSpec::new((0.0, 0.0), 1.0).unwrap();
    let scaled: Vec<(f64, f64)> = geomspace(10.0, 200.0, 8)
        .into_iter()
        .map(|t| (t, kernel_direct(&p, t, q).unwrap().norm() * t.sqrt()))
        .collect();
    let early = scaled.iter().filter(|x| x.0 <= 30.0).map(|x| x.1).fold(0.0, f64::max);
    let late = scaled.iter().filter(|x| x.0 >= 100.0).map(|x| x.1).fold(0.0, f64::max);
    let mid = scaled.iter().filter(|x| x.0 > 30.0).map(|x| x.1).fold(0.0, f64::max);
    assert!(mid <= early, "{scaled:?}");
    assert!(late >= 0.25 * early, "{scaled:?}");
}

#[test]
fn small_sqg_gradient_decays() {
    let g = Grid2D::new(128, 20.0).unwrap();
    let solver = SqgSolver::new(&g, SqgParams { dt: 0.02, ..SqgParams::default() }).unwrap();
    let theta0 = profiles::sqg_pair(&g).scaled(0.01);
    let d = run_and_diagnose(&solver, &theta0, RunConfig { t_final: 30.0, output_every: 0.5, ..RunConfig::default() });
    let first = d.records[0].grad_theta_inf;
    for r in &d.records {
        assert!(r.grad_theta_inf * (r.t + 1.0).sqrt() <= 5.0 * first, "t = {}", r.t);
    }
    assert!(d.records.last().unwrap().t >= 30.0 - 1e-9);
}

#[test]
fn sqg_sup_norm_does_not_grow() {
    let g = Grid2D::new(64, 20.0).unwrap();
    let solver = SqgSolver::new(&g, SqgParams { dt: 0.02, ..SqgParams::default() }).unwrap();
    let mut s = SqgState { theta: profiles::sqg_pair(&g).scaled(0.5), time: 0.0 };
    let m0 = s.theta.linf_norm();
    for _ in 0..250 {
        s = solver.step(&s).unwrap().0;
        assert!(s.theta.linf_norm() <= 1.02 * m0);
    }
}

#[test]
fn velocity_gradient_embedding_constant_is_stable() {
    let g = Grid2D::new(64, 20.0).unwrap();
    let ratio = |seed: u64| {
        let th = profiles::random_band(&g, 0.3, 3.0, seed);
        let (u1, u2) = velocity(&th, 1.0);
        let d = [
            u1.apply(&Multiplier::Deriv(Axis::X1)),
            u1.apply(&Multiplier::Deriv(Axis::X2)),
            u2.apply(&Multiplier::Deriv(Axis::X1)),
        ]
        .iter()
        .map(|f| f.linf_norm())
        .fold(0.0, f64::max);
        d / th.sobolev_norm(4.5).unwrap()
    };
    let c_gn = (0..6).map(ratio).fold(0.0, f64::max);
    for seed in 6..18 {
        assert!(ratio(seed) <= 1.25 * c_gn, "seed {seed}");
    }
}

#[test]
fn linear_boussinesq_decays_like_inverse_sqrt() {
    let g = Grid2D::new(1024, 40.0).unwrap();
    let s0 = BoussState::new(profiles::gaussian(&g, 0.18), SpectralField::zeros(&g)).unwrap();
    let times = geomspace(10.0, 100.0, 24);
    let sup: Vec<f64> = times
        .iter()
        .map(|&t| {
            let s = linear_propagator(&s0, t, Branch::Stable).unwrap();
            let (a, b) = to_physical_pair(&s.omega, &s.rho.apply(&Multiplier::FracLap(0.5)));
            a.iter().zip(&b).map(|(x, y)| x.hypot(*y)).fold(0.0, f64::max)
        })
        .collect();
    let slope = fit_power_law(&times, &sup, (10.0, 100.0)).unwrap().slope;
    assert!((-0.6..=-0.4).contains(&slope), "{slope}");
}

#[test]
fn boussinesq_step_is_fourth_order() {
    let g = Grid2D::new(64, 20.0).unwrap();
    let (w, r) = profiles::bouss_pair(&g);
    let s0 = BoussState::new(w.scaled(0.5), r.scaled(0.5)).unwrap();
    let run = |dt: f64| {
        let solver = BoussSolver::new(&g, BoussParams { dt, ..BoussParams::default() }).unwrap();
        let mut s = s0.clone();
        for _ in 0..(2.0 / dt).round() as usize {
            s = solver.step(&s).unwrap().0;
        }
        s
    };
    let (a, b, c) = (run(0.1), run(0.05), run(0.025));
    let e1 = (&a.omega - &b.omega).l2_norm() + (&a.rho - &b.rho).l2_norm();
    let e2 = (&b.omega - &c.omega).l2_norm() + (&b.rho - &c.rho).l2_norm();
    assert!((13.0..=19.0).contains(&(e1 / e2)), "{}", e1 / e2);
}

#[test]
fn unstable_branch_grows_at_linear_rate() {
    let cfg = StabilityConfig { stop_at_exit: false, ..StabilityConfig::default() };
    let r = stability_experiment(0.01, 6.0, Branch::Unstable, cfg).unwrap();
    let rate = r.growth_rate((2.0, 6.0)).unwrap();
    assert!((rate - 1.0).abs() <= 0.2, "{rate}");
    assert!(r.exit_time.is_some());
}

#[test]
fn runs_are_deterministic() {
    let g = Grid2D::new(32, 20.0).unwrap();
    let solver = SqgSolver::new(&g, SqgParams { dt: 0.05, ..SqgParams::default() }).unwrap();
    let theta0 = profiles::random_band(&g, 0.3, 3.0, 99).scaled(0.1);
    let cfg = RunConfig { t_final: 2.0, ..RunConfig::default() };
    let a = run_and_diagnose(&solver, &theta0, cfg);
    let b = run_and_diagnose(&solver, &theta0, cfg);
    assert_eq!(a.records, b.records);
    assert_eq!(a.final_state.theta.coeffs(), b.final_state.theta.coeffs());
}
