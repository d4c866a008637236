//! Instantaneous and ergodic capacity of the IM/DD link.
//!
//! Three independent evaluation routes are provided:
//!
//! - [`ergodic_capacity_angle`]: nested adaptive quadrature over the transmitter
//!   tilt and receiver incidence angles.
//! - [`ergodic_capacity_gain`]: a single quadrature over the channel gain, with
//!   the gain density built by change of variables ([`gain_density_h`]).
//! - [`monte_carlo_capacity`]: seeded, chunked Monte-Carlo averaging.
//!
//! The capacity approximation is `½·log₂(1 + (e/2π)·γ)` where `e` is Euler's
//! number. Reading `e` as the electron charge would make every capacity
//! vanish (≈1e-13 bits/s/Hz at any range).

mod angle;
mod gain;
mod monte_carlo;
mod sweep;

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

pub use angle::{ergodic_capacity_angle, ergodic_capacity_angle_with_budget};
pub use gain::{
    conditional_gain_density, ergodic_capacity_gain, gain_density_h, tilt_factor_density,
};
pub use monte_carlo::{monte_carlo_capacity, MC_CHUNK_SIZE, MIN_MC_SAMPLES};
pub use sweep::{capacity_sweep, SweepAxis, SweepPoint};

use crate::channel::{Environment, LinkBudget, LinkGeometry, RxModel, TxModel};
use crate::error::{Error, Result};
use crate::fitting::RegressionKind;
use crate::quad::QuadSpec;
use crate::surface::{ModifiedWeibullModel, RxTiltModel, SlopeModel};

/// Complete description of one link configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkScenario {
    pub geometry: LinkGeometry,
    pub tx: TxModel,
    pub rx: RxModel,
    pub env: Environment,
    pub slope_model: SlopeModel,
    pub rx_tilt: RxTiltModel,
}

impl Default for LinkScenario {
    /// Baseline: Z = 20 m split evenly, m = 20, FoV = 15°, modified Weibull
    /// surface at U = 10 m/s, σ_φr = 10°, L_t = 0.025 W·m⁻²·nm⁻¹·sr⁻¹.
    fn default() -> Self {
        Self {
            geometry: LinkGeometry {
                depth_m: 10.0,
                height_m: 10.0,
            },
            tx: TxModel::default(),
            rx: RxModel::default(),
            env: Environment::default(),
            slope_model: SlopeModel::ModifiedWeibull(
                ModifiedWeibullModel::from_wind(10.0, RegressionKind::Linear)
                    .expect("valid wind speed"),
            ),
            rx_tilt: RxTiltModel::new(10.0).expect("valid sigma"),
        }
    }
}

impl LinkScenario {
    pub fn budget(&self) -> Result<LinkBudget> {
        LinkBudget::new(&self.geometry, &self.tx, &self.rx, &self.env)
    }

    pub fn fov_deg(&self) -> f64 {
        self.rx.fov_deg
    }

    /// Same scenario at total range `range_m`, split evenly between water and air.
    pub fn with_range(&self, range_m: f64) -> Result<Self> {
        Ok(Self {
            geometry: LinkGeometry::symmetric(range_m)?,
            ..self.clone()
        })
    }

    pub fn warnings(&self) -> Vec<String> {
        self.slope_model
            .warning()
            .map(|w| w.to_string())
            .into_iter()
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    AngleQuadrature,
    GainDensity,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::AngleQuadrature => "angle_quadrature",
            Method::GainDensity => "gain_density",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "angle" | "angle_quadrature" | "quadrature" => Ok(Method::AngleQuadrature),
            "gain" | "gain_density" => Ok(Method::GainDensity),
            "mc" | "monte_carlo" => Ok(Method::MonteCarlo),
            other => Err(Error::Config(format!("unknown capacity method `{other}`"))),
        }
    }
}

/// Ergodic capacity with its evaluation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityEstimate {
    /// bits/s/Hz
    pub c_erg: f64,
    pub method: Method,
    pub p_in: f64,
    pub p_out: f64,
    /// Monte-Carlo only.
    pub std_error: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub warnings: Vec<String>,
}

impl CapacityEstimate {
    pub(crate) fn deterministic(
        c_erg: f64,
        method: Method,
        p_in: f64,
        warnings: Vec<String>,
    ) -> Self {
        Self {
            c_erg,
            method,
            p_in,
            p_out: 1.0 - p_in,
            std_error: None,
            seed: None,
            samples: None,
            warnings,
        }
    }
}

/// How to evaluate an ergodic capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    Angle(QuadSpec),
    Gain(QuadSpec),
    MonteCarlo { samples: usize, seed: u64 },
}

impl Evaluation {
    pub fn method(&self) -> Method {
        match self {
            Evaluation::Angle(_) => Method::AngleQuadrature,
            Evaluation::Gain(_) => Method::GainDensity,
            Evaluation::MonteCarlo { .. } => Method::MonteCarlo,
        }
    }

    pub fn from_method(method: Method, samples: usize, seed: u64) -> Self {
        match method {
            Method::AngleQuadrature => Evaluation::Angle(QuadSpec::default()),
            Method::GainDensity => Evaluation::Gain(QuadSpec::default()),
            Method::MonteCarlo => Evaluation::MonteCarlo { samples, seed },
        }
    }
}

pub fn evaluate(scenario: &LinkScenario, how: &Evaluation) -> Result<CapacityEstimate> {
    match *how {
        Evaluation::Angle(spec) => ergodic_capacity_angle(scenario, spec),
        Evaluation::Gain(spec) => ergodic_capacity_gain(scenario, spec),
        Evaluation::MonteCarlo { samples, seed } => monte_carlo_capacity(scenario, samples, seed),
    }
}

/// `½·log₂(1 + (e/2π)·γ)` in bits/s/Hz.
pub fn instantaneous_capacity(snr: f64) -> f64 {
    if snr <= 0.0 {
        return 0.0;
    }
    0.5 * (E / (2.0 * PI) * snr).ln_1p() / std::f64::consts::LN_2
}
