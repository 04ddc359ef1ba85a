//! Log-log least squares.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    /// Natural log of the prefactor.
    pub intercept: f64,
    /// RMS residual in log space.
    pub residual: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Fits `y = exp(intercept) * t^slope` to the samples with `t` in `window`.
pub fn fit_power_law(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<PowerLawFit> {
    if t.len() != y.len() {
        return Err(invalid("series", "t and y differ in length"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&ti, &yi) in t.iter().zip(y) {
        if ti < window.0 || ti > window.1 {
            continue;
        }
        if !(yi > 0.0) || !(ti > 0.0) {
            return Err(invalid("series", format!("nonpositive sample ({ti}, {yi}) in window")));
        }
        xs.push(ti.ln());
        ys.push(yi.ln());
    }
    if xs.len() < 5 {
        return Err(invalid(
            "window",
            format!("{} points in [{}, {}], need at least 5", xs.len(), window.0, window.1),
        ));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(PowerLawFit {
        slope,
        intercept,
        residual: (ss / m).sqrt(),
        window,
        points: xs.len(),
    })
}

/// `n` logarithmically spaced points from `a` to `b` inclusive.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && a > 0.0 && b > a, "geomspace needs 0 < a < b and n >= 2");
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs n >= 2");
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_square_root() {
        let t = geomspace(1.0, 100.0, 20);
        let y: Vec<f64> = t.iter().map(|t| t.powf(-0.5)).collect();
        let f = fit_power_law(&t, &y, (1.0, 100.0)).unwrap();
        assert!((f.slope + 0.5).abs() <= 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn prefactor_recovered() {
        let t = geomspace(2.0, 50.0, 12);
        let y: Vec<f64> = t.iter().map(|t| 3.0 / t).collect();
        let f = fit_power_law(&t, &y, (0.0, 1e9)).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn modulated_decay() {
        let t = linspace(10.0, 100.0, 200);
        let y: Vec<f64> = t.iter().map(|t| t.powf(-0.5) * (1.0 + 0.1 * t.sin())).collect();
        let f = fit_power_law(&t, &y, (10.0, 100.0)).unwrap();
        assert!((-0.55..=-0.45).contains(&f.slope), "{}", f.slope);
    }

    #[test]
    fn rejects_bad_input() {
        let t = linspace(1.0, 10.0, 10);
        let mut y = vec![1.0; 10];
        y[3] = 0.0;
        assert!(fit_power_law(&t, &y, (1.0, 10.0)).is_err());
        assert!(fit_power_law(&t, &[1.0; 10], (1.0, 3.0)).is_err());
    }
}
