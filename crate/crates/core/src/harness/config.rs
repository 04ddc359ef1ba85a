use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boussinesq::Branch;
use crate::error::{invalid, Error, Result};
use crate::spectral::Grid2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    LinDecay,
    Sharpness,
    Kernel,
    Sqg,
    Bouss,
    Sweep,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::LinDecay,
        Experiment::Sharpness,
        Experiment::Kernel,
        Experiment::Sqg,
        Experiment::Bouss,
        Experiment::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::LinDecay => "lin-decay",
            Experiment::Sharpness => "sharpness",
            Experiment::Kernel => "kernel",
            Experiment::Sqg => "sqg",
            Experiment::Bouss => "bouss",
            Experiment::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| invalid("experiment", format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub l: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid2D> {
        Grid2D::new(self.n, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayProfile {
    Gaussian,
    CompactBump,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinDecayConfig {
    pub alpha: f64,
    pub profile: DecayProfile,
    pub width: f64,
    pub radius: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_range: Option<(f64, f64)>,
}

impl Default for LinDecayConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            profile: DecayProfile::Gaussian,
            width: 0.18,
            radius: 2.0,
            t_min: 10.0,
            t_max: 100.0,
            samples: 40,
            window: None,
            slope_range: None,
        }
    }
}

impl LinDecayConfig {
    /// Accepted slope interval; the defaults bracket `-1/2` for `alpha = 1`
    /// and `-1` otherwise.
    pub fn slope_range(&self) -> (f64, f64) {
        self.slope_range.unwrap_or(if self.alpha == 1.0 {
            (-0.6, -0.4)
        } else if self.alpha == 2.0 {
            (-1.1, -0.9)
        } else {
            (-1.15, -0.85)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpnessConfig {
    pub width: f64,
    pub power: u32,
    pub t_max: f64,
    pub samples: usize,
    pub window: (f64, f64),
    pub agree_t_max: f64,
    pub peak_tol: f64,
    pub zero_tol: f64,
    pub two_path_tol: f64,
    pub bessel_tol: f64,
}

impl Default for SharpnessConfig {
    fn default() -> Self {
        Self {
            width: 0.5,
            power: 3,
            t_max: 100.0,
            samples: 101,
            window: (20.0, 100.0),
            agree_t_max: 50.0,
            peak_tol: 0.05,
            zero_tol: 0.05,
            two_path_tol: 1e-6,
            bessel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub alpha: f64,
    pub velocities: Vec<(f64, f64)>,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub factor: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub lambda_times: Vec<f64>,
    pub quad_tol: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            velocities: vec![(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.0, 0.5), (-0.4, 0.3), (0.25, 0.25)],
            t_min: 10.0,
            t_max: 100.0,
            samples: 7,
            factor: 3.0,
            lambda_min: 0.01,
            lambda_max: 1.0,
            lambda_points: 30,
            lambda_times: vec![10.0, 30.0, 100.0],
            quad_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SqgProfile {
    SqgPair,
    Gaussian,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SqgConfig {
    pub alpha: f64,
    pub eps: f64,
    pub amplitude: f64,
    pub dt: f64,
    pub t_final: f64,
    pub output_every: f64,
    pub delta: f64,
    pub mu: f64,
    pub dealias: f64,
    pub profile: SqgProfile,
    pub width: f64,
    pub stop_at_exit: bool,
    pub l2_drift_tol: f64,
    /// Field dump to start from instead of the profile.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    /// Write the final state as `theta_final.bin`.
    pub checkpoint: bool,
}

impl Default for SqgConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            eps: 0.04,
            amplitude: 25.0,
            dt: 0.02,
            t_final: 10.0,
            output_every: 0.5,
            delta: 0.5,
            mu: 0.5,
            dealias: 2.0 / 3.0,
            profile: SqgProfile::SqgPair,
            width: 1.0,
            stop_at_exit: false,
            l2_drift_tol: 1e-8,
            initial: None,
            checkpoint: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoussConfig {
    pub eps: f64,
    pub amplitude: f64,
    pub dt: f64,
    pub t_final: f64,
    pub output_every: f64,
    pub branch: BranchName,
    pub delta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub stop_at_exit: bool,
    /// Fit window for the growth rate of the `(1, 0)` mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_window: Option<(f64, f64)>,
    pub growth_tol: f64,
}

impl Default for BoussConfig {
    fn default() -> Self {
        Self {
            eps: 0.01,
            amplitude: 5.0,
            dt: 0.1,
            t_final: 50.0,
            output_every: 1.0,
            branch: BranchName::Stable,
            delta: 0.5,
            gamma: 0.5,
            mu: 0.5,
            stop_at_exit: true,
            growth_window: None,
            growth_tol: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchName {
    Stable,
    Unstable,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Stable => Branch::Stable,
            BranchName::Unstable => Branch::Unstable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepTarget {
    Sqg,
    Bouss,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub target: SweepTarget,
    pub eps: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            target: SweepTarget::Sqg,
            eps: vec![0.04, 0.02, 0.01],
        }
    }
}

/// Whole configuration file. Sections not used by the chosen experiment keep
/// their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    pub lin_decay: LinDecayConfig,
    pub sharpness: SharpnessConfig,
    pub kernel: KernelConfig,
    pub sqg: SqgConfig,
    pub bouss: BoussConfig,
    pub sweep: SweepConfig,
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and positive, got {x}")))
    }
}

fn ordered(name: &'static str, w: (f64, f64)) -> Result<()> {
    if w.0 < w.1 && w.0.is_finite() && w.1.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("need lo < hi, got {w:?}")))
    }
}

fn alpha_ok(alpha: f64) -> Result<()> {
    if (1.0..=2.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} outside [1, 2]")))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Grid for `exp`: the `[grid]` section if present, else the experiment
    /// default.
    pub fn grid_for(&self, exp: Experiment) -> Option<GridConfig> {
        let default = match exp {
            Experiment::LinDecay => GridConfig { n: 1024, l: 40.0 },
            Experiment::Sharpness => GridConfig { n: 512, l: 64.0 },
            Experiment::Kernel => return None,
            Experiment::Sqg | Experiment::Bouss => GridConfig { n: 128, l: 20.0 },
            Experiment::Sweep => return self.grid_for(self.sweep_member()),
        };
        Some(self.grid.unwrap_or(default))
    }

    pub fn sweep_member(&self) -> Experiment {
        match self.sweep.target {
            SweepTarget::Sqg => Experiment::Sqg,
            SweepTarget::Bouss => Experiment::Bouss,
        }
    }

    /// Checks every field the experiment reads.
    pub fn validate(&self, exp: Experiment) -> Result<()> {
        if let Some(e) = self.experiment {
            if e != exp {
                return Err(invalid("experiment", format!("config is for {e}, command asked for {exp}")));
            }
        }
        if let Some(g) = self.grid_for(exp) {
            g.build()?;
        }
        match exp {
            Experiment::LinDecay => {
                let c = &self.lin_decay;
                alpha_ok(c.alpha)?;
                positive("width", c.width)?;
                positive("radius", c.radius)?;
                positive("t_min", c.t_min)?;
                ordered("t_min/t_max", (c.t_min, c.t_max))?;
                if c.samples < 5 {
                    return Err(invalid("samples", "need at least 5"));
                }
                if let Some(w) = c.window {
                    ordered("window", w)?;
                }
                ordered("slope_range", c.slope_range())?;
            }
            Experiment::Sharpness => {
                let c = &self.sharpness;
                positive("width", c.width)?;
                positive("t_max", c.t_max)?;
                ordered("window", c.window)?;
                if c.samples < 2 {
                    return Err(invalid("samples", "need at least 2"));
                }
                positive("agree_t_max", c.agree_t_max)?;
            }
            Experiment::Kernel => {
                let c = &self.kernel;
                alpha_ok(c.alpha)?;
                if c.velocities.is_empty() {
                    return Err(invalid("velocities", "need at least one velocity"));
                }
                positive("t_min", c.t_min)?;
                ordered("t_min/t_max", (c.t_min, c.t_max))?;
                positive("factor", c.factor)?;
                positive("lambda_min", c.lambda_min)?;
                ordered("lambda_min/lambda_max", (c.lambda_min, c.lambda_max))?;
                if c.lambda_max > 1.0 {
                    return Err(invalid("lambda_max", "must not exceed 1"));
                }
                if c.lambda_points < 2 || c.samples < 1 {
                    return Err(invalid("lambda_points", "need at least 2 lambdas and 1 time"));
                }
                for &t in &c.lambda_times {
                    positive("lambda_times", t)?;
                }
                positive("quad_tol", c.quad_tol)?;
            }
            Experiment::Sqg => self.validate_sqg(self.sqg.eps)?,
            Experiment::Bouss => self.validate_bouss(self.bouss.eps)?,
            Experiment::Sweep => {
                if self.sweep.eps.is_empty() {
                    return Err(invalid("eps", "sweep needs at least one value"));
                }
                for &eps in &self.sweep.eps {
                    match self.sweep.target {
                        SweepTarget::Sqg => self.validate_sqg(eps)?,
                        SweepTarget::Bouss => self.validate_bouss(eps)?,
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_sqg(&self, eps: f64) -> Result<()> {
        let c = &self.sqg;
        alpha_ok(c.alpha)?;
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(invalid("eps", format!("need finite eps >= 0, got {eps}")));
        }
        positive("amplitude", c.amplitude)?;
        positive("dt", c.dt)?;
        positive("t_final", c.t_final)?;
        positive("output_every", c.output_every)?;
        positive("delta", c.delta)?;
        positive("mu", c.mu)?;
        positive("width", c.width)?;
        positive("l2_drift_tol", c.l2_drift_tol)?;
        if !(c.dealias > 0.0 && c.dealias <= 1.0) {
            return Err(invalid("dealias", format!("{} outside (0, 1]", c.dealias)));
        }
        Ok(())
    }

    fn validate_bouss(&self, eps: f64) -> Result<()> {
        let c = &self.bouss;
        if !(0.0..=0.1).contains(&eps) {
            return Err(invalid("eps", format!("need 0 <= eps <= 0.1, got {eps}")));
        }
        positive("amplitude", c.amplitude)?;
        positive("dt", c.dt)?;
        positive("t_final", c.t_final)?;
        positive("output_every", c.output_every)?;
        positive("delta", c.delta)?;
        positive("gamma", c.gamma)?;
        positive("mu", c.mu)?;
        positive("growth_tol", c.growth_tol)?;
        if let Some(w) = c.growth_window {
            ordered("growth_window", w)?;
        }
        Ok(())
    }
}
