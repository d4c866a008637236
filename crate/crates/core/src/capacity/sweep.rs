use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{evaluate, CapacityEstimate, Evaluation, LinkScenario};
use crate::channel::LinkGeometry;
use crate::error::{Error, Result};
use crate::surface::RxTiltModel;

/// Scenario parameter varied by [`capacity_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// Total range Z in metres, split evenly between water and air.
    Range,
    /// Wind speed U in m/s; the slope model keeps its family.
    Wind,
    /// Receiver FoV in degrees.
    Fov,
    /// Receiver tilt σ in degrees.
    RxSigma,
    /// Upwelling radiance L_t in W·m⁻²·nm⁻¹·sr⁻¹.
    Radiance,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::Range,
        SweepAxis::Wind,
        SweepAxis::Fov,
        SweepAxis::RxSigma,
        SweepAxis::Radiance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Range => "Z",
            SweepAxis::Wind => "U",
            SweepAxis::Fov => "fov",
            SweepAxis::RxSigma => "sigma_r",
            SweepAxis::Radiance => "L_t",
        }
    }

    pub fn apply(self, template: &LinkScenario, value: f64) -> Result<LinkScenario> {
        let mut s = template.clone();
        match self {
            SweepAxis::Range => s.geometry = LinkGeometry::new(value / 2.0, value / 2.0)?,
            SweepAxis::Wind => s.slope_model = s.slope_model.with_wind(value)?,
            SweepAxis::Fov => {
                if !(value > 0.0 && value <= 90.0) {
                    return Err(Error::domain("field of view", value, "(0, 90] deg"));
                }
                s.rx.fov_deg = value;
            }
            SweepAxis::RxSigma => s.rx_tilt = RxTiltModel::new(value)?,
            SweepAxis::Radiance => {
                if !(value >= 0.0 && value.is_finite()) {
                    return Err(Error::domain("upwelling radiance", value, "[0, inf)"));
                }
                s.env.upwelling_radiance = value;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" | "range" => Ok(SweepAxis::Range),
            "u" | "wind" => Ok(SweepAxis::Wind),
            "fov" => Ok(SweepAxis::Fov),
            "sigma_r" | "rx_sigma" | "sigma" => Ok(SweepAxis::RxSigma),
            "l_t" | "lt" | "radiance" => Ok(SweepAxis::Radiance),
            other => Err(Error::Config(format!(
                "unknown sweep axis `{other}` (expected one of Z, U, fov, sigma_r, L_t)"
            ))),
        }
    }
}

#[derive(Debug)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub estimate: Result<CapacityEstimate>,
}

/// Evaluates the template at each axis value, concurrently; output order
/// follows `values`. A failing point is recorded and the sweep continues.
pub fn capacity_sweep(
    template: &LinkScenario,
    axis: SweepAxis,
    values: &[f64],
    how: &Evaluation,
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep needs at least one value".into(),
        ));
    }
    Ok(values
        .par_iter()
        .map(|&v| SweepPoint {
            axis_value: v,
            estimate: axis.apply(template, v).and_then(|s| evaluate(&s, how)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadSpec;

    #[test]
    fn axis_names_round_trip() {
        for a in SweepAxis::ALL {
            assert_eq!(a.name().parse::<SweepAxis>().unwrap(), a);
        }
        assert!("depth".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn range_split_is_even() {
        let s = SweepAxis::Range
            .apply(&LinkScenario::default(), 50.0)
            .unwrap();
        assert_eq!(s.geometry.depth_m, 25.0);
        assert_eq!(s.geometry.height_m, 25.0);
    }

    #[test]
    fn single_value_single_row_and_errors_recorded() {
        let how = Evaluation::Angle(QuadSpec::default());
        let rows = capacity_sweep(&LinkScenario::default(), SweepAxis::Fov, &[15.0], &how).unwrap();
        assert_eq!(rows.len(), 1);
        let rows = capacity_sweep(
            &LinkScenario::default(),
            SweepAxis::Range,
            &[-5.0, 40.0],
            &how,
        )
        .unwrap();
        assert!(rows[0].estimate.is_err());
        assert!(rows[1].estimate.is_ok());
        assert!(capacity_sweep(&LinkScenario::default(), SweepAxis::Range, &[], &how).is_err());
    }
}
