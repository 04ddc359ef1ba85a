//! Two independent evaluations of the Bessel function `J_0`.

use std::f64::consts::PI;

use twofloat::TwoFloat;

use crate::error::{invalid, Error, Result};

/// Largest argument accepted by [`j0_series`]. The alternating terms peak
/// near `e^t / (2 pi t)`, so double-double accumulation keeps absolute error
/// below `1e-11` up to here.
pub const SERIES_MAX_T: f64 = 50.0;

const QUADRATURE_BUDGET: usize = 1 << 16;

/// `sum_m (-1)^m (t/2)^{2m} / (m!)^2`, accumulated in double-double.
pub fn j0_series(t: f64) -> Result<f64> {
    if !(0.0..=SERIES_MAX_T).contains(&t) {
        return Err(invalid("t", format!("series valid on [0, {SERIES_MAX_T}], got {t}")));
    }
    let x = TwoFloat::from(t) * TwoFloat::from(t) / 4.0;
    let mut term = TwoFloat::from(1.0);
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term = -term * x / (m * m);
        sum += term;
        if m > x.hi().sqrt() + 5.0 && term.hi().abs() < 1e-34 * sum.hi().abs().max(1e-300) {
            break;
        }
        if term.hi() == 0.0 {
            break;
        }
        m += 1.0;
    }
    Ok(sum.hi() + sum.lo())
}

/// `(1/2pi) int_0^{2pi} cos(t cos theta) d theta` by the periodic trapezoid
/// rule, doubling the node count until successive values agree to `1e-15`.
pub fn j0_quadrature(t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", format!("need finite t >= 0, got {t}")));
    }
    let mut n = 16usize;
    let mut prev = trapezoid(t, n);
    while n < QUADRATURE_BUDGET {
        n *= 2;
        let next = trapezoid(t, n);
        if (next - prev).abs() <= 1e-15 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureBudgetExceeded {
        budget: QUADRATURE_BUDGET,
        last_change: f64::NAN,
    })
}

fn trapezoid(t: f64, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| (t * (k as f64 * h).cos()).cos()).sum::<f64>() / n as f64
}

/// `J_0(t)`: series where valid, quadrature beyond.
pub fn bessel_j0(t: f64) -> f64 {
    if (0.0..=SERIES_MAX_T).contains(&t) {
        j0_series(t).expect("range checked")
    } else {
        j0_quadrature(t).expect("J0 quadrature converges for moderate t")
    }
}

/// Leading large-argument form `sqrt(2/(pi t)) cos(t - pi/4)`.
pub fn j0_asymptotic(t: f64) -> f64 {
    (2.0 / (PI * t)).sqrt() * (t - PI / 4.0).cos()
}

pub fn j0_envelope(t: f64) -> f64 {
    (2.0 / (PI * t)).sqrt()
}

/// The `k`-th positive zero of `J_0` (`k >= 1`), bracketed around the
/// McMahon estimate and refined by bisection.
pub fn j0_zero(k: usize) -> f64 {
    assert!(k >= 1, "zeros are numbered from 1");
    let beta = (k as f64 - 0.25) * PI;
    let guess = beta + 1.0 / (8.0 * beta);
    let (mut a, mut b) = (guess - 0.3, guess + 0.3);
    let mut fa = bessel_j0(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = bessel_j0(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        assert_eq!(j0_series(0.0).unwrap(), 1.0);
        assert!((j0_quadrature(0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn methods_agree() {
        for &t in &[0.5, 1.0, 2.404825557695773, 10.0, 12.0, 25.0, 37.7, 50.0] {
            let s = j0_series(t).unwrap();
            let q = j0_quadrature(t).unwrap();
            assert!((s - q).abs() <= 1e-10, "t = {t}: {s} vs {q}");
        }
    }

    #[test]
    fn known_values() {
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j0(10.0) + 0.245_935_764_451_348_3).abs() < 1e-13);
        assert!((j0_zero(1) - 2.404_825_557_695_773).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_form_at_fifty() {
        let t = 50.0;
        assert!((bessel_j0(t) - j0_asymptotic(t)).abs() <= 0.02 * j0_envelope(t));
    }

    #[test]
    fn ode_residual() {
        let h = 1e-3;
        for &t in &[1.0, 5.0, 20.0] {
            let (m, c, p) = (bessel_j0(t - h), bessel_j0(t), bessel_j0(t + h));
            let d2 = (p - 2.0 * c + m) / (h * h);
            let d1 = (p - m) / (2.0 * h);
            assert!((d2 + d1 / t + c).abs() <= 1e-6, "t = {t}");
        }
    }

    #[test]
    fn series_domain_enforced() {
        assert!(j0_series(51.0).is_err());
        assert!(bessel_j0(80.0).abs() < 0.1);
    }
}
