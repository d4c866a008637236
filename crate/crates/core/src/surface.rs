//! Transmitter tilt-angle models driven by sea-surface slope, and the
//! receiver incidence-angle model.
//!
//! Public angles are in degrees unless a name says `_rad`. Densities returned
//! by `pdf_deg` are per degree; `pdf_rad` is per radian.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fitting::{
    regress_linear, regress_power, EmpiricalPdf, RegressionKind, RegressionModel,
};

const DEG: f64 = PI / 180.0;

/// Wind-speed range over which the Cox-Munk slope law was measured.
pub const COX_MUNK_WIND_RANGE: (f64, f64) = (1.0, 14.0);
/// Wind-speed range over which the modified Weibull law was calibrated and validated.
pub const MODIFIED_WEIBULL_WIND_RANGE: (f64, f64) = (6.0, 15.2);

/// Attached to models built for a wind speed outside their validity range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindWarning {
    pub model: &'static str,
    pub wind_speed_mps: f64,
    pub valid_range: (f64, f64),
}

impl fmt::Display for WindWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} model used at U = {} m/s, outside its {}-{} m/s validity range",
            self.model, self.wind_speed_mps, self.valid_range.0, self.valid_range.1
        )
    }
}

fn wind_warning(model: &'static str, wind: f64, range: (f64, f64)) -> Option<WindWarning> {
    (wind < range.0 || wind > range.1).then_some(WindWarning {
        model,
        wind_speed_mps: wind,
        valid_range: range,
    })
}

fn check_wind(wind_speed_mps: f64) -> Result<()> {
    if !(wind_speed_mps >= 0.0 && wind_speed_mps.is_finite()) {
        return Err(Error::domain("wind speed", wind_speed_mps, "[0, inf) m/s"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Cox-Munk
// ---------------------------------------------------------------------------

/// Isotropic Gaussian slope statistics with variance `0.003 + 0.00512·U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoxMunkModel {
    wind_speed_mps: f64,
    slope_variance: f64,
}

impl CoxMunkModel {
    pub fn from_wind(wind_speed_mps: f64) -> Result<Self> {
        check_wind(wind_speed_mps)?;
        Ok(Self {
            wind_speed_mps,
            slope_variance: 0.003 + 0.00512 * wind_speed_mps,
        })
    }

    /// Builds the model directly from a slope variance; the wind speed is the one
    /// the linear law would associate with it.
    pub fn with_slope_variance(slope_variance: f64) -> Result<Self> {
        if !(slope_variance > 0.0 && slope_variance.is_finite()) {
            return Err(Error::domain("slope variance", slope_variance, "(0, inf)"));
        }
        Ok(Self {
            wind_speed_mps: (slope_variance - 0.003) / 0.00512,
            slope_variance,
        })
    }

    pub fn wind_speed_mps(&self) -> f64 {
        self.wind_speed_mps
    }

    pub fn slope_variance(&self) -> f64 {
        self.slope_variance
    }

    pub fn warning(&self) -> Option<WindWarning> {
        wind_warning("Cox-Munk", self.wind_speed_mps, COX_MUNK_WIND_RANGE)
    }

    /// Normalized CDF of the tilt angle: `1 − exp(−tan²φ / 2σ²)`.
    pub fn cdf_rad(&self, tilt_rad: f64) -> f64 {
        if tilt_rad <= 0.0 {
            return 0.0;
        }
        if tilt_rad >= FRAC_PI_2 {
            return 1.0;
        }
        let t = tilt_rad.tan();
        -(-t * t / (2.0 * self.slope_variance)).exp_m1()
    }
}

/// Cox-Munk tilt density in 1/radian.
///
/// With `normalized = false` this is the joint-slope form whose prefactor is
/// `1/(2πσ²)`; it integrates to `1/(2π)` over `[0, π/2)`. With
/// `normalized = true` the marginal is scaled by `2π` to unit mass.
pub fn cm_pdf(tilt_rad: f64, model: &CoxMunkModel, normalized: bool) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&tilt_rad) {
        return Err(Error::domain("tilt angle", tilt_rad, "[0, pi/2) rad"));
    }
    let s2 = model.slope_variance;
    let t = tilt_rad.tan();
    let density = t * (1.0 + t * t) / s2 * (-t * t / (2.0 * s2)).exp();
    Ok(if normalized {
        density
    } else {
        density / (2.0 * PI)
    })
}

/// Exact inverse-CDF draw from the normalized Cox-Munk tilt density (radians).
pub fn cm_sample(uniform: f64, model: &CoxMunkModel) -> f64 {
    (-2.0 * model.slope_variance * (-uniform).ln_1p())
        .sqrt()
        .atan()
}

// ---------------------------------------------------------------------------
// Modified Weibull
// ---------------------------------------------------------------------------

/// Wind-speed dependence of the Weibull shape and scale (degrees).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullLaw {
    pub shape: RegressionModel,
    pub scale_deg: RegressionModel,
}

/// Weibull (U [m/s], shape, scale [deg]) fits of ECKV tilt statistics at three
/// Black Sea wind speeds; the calibration set for [`WeibullLaw`].
pub const REFERENCE_WEIBULL_FITS: [(f64, f64, f64); 3] = [
    (6.1, 1.7671, 15.2100),
    (8.7, 1.8373, 15.6100),
    (15.2, 1.8446, 17.3429),
];

impl WeibullLaw {
    /// Published coefficients, rounded to four decimals.
    pub fn published(kind: RegressionKind) -> Self {
        match kind {
            RegressionKind::Linear => Self {
                shape: RegressionModel::linear(1.7454, 0.0071),
                scale_deg: RegressionModel::linear(13.6485, 0.2406),
            },
            RegressionKind::Power => Self {
                shape: RegressionModel {
                    kind: RegressionKind::Power,
                    a: 1.6506,
                    b: 0.0428,
                },
                scale_deg: RegressionModel {
                    kind: RegressionKind::Power,
                    a: 11.4724,
                    b: 0.1499,
                },
            },
        }
    }

    /// Regresses shape and scale on wind speed from `(U, shape, scale)` fits.
    pub fn calibrate(fits: &[(f64, f64, f64)], kind: RegressionKind) -> Result<Self> {
        let shape: Vec<(f64, f64)> = fits.iter().map(|f| (f.0, f.1)).collect();
        let scale: Vec<(f64, f64)> = fits.iter().map(|f| (f.0, f.2)).collect();
        let fit = |pts: &[(f64, f64)]| match kind {
            RegressionKind::Linear => regress_linear(pts),
            RegressionKind::Power => regress_power(pts),
        };
        Ok(Self {
            shape: fit(&shape)?,
            scale_deg: fit(&scale)?,
        })
    }

    /// `(shape, scale_deg)` at `wind_speed_mps`.
    pub fn params(&self, wind_speed_mps: f64) -> (f64, f64) {
        (
            self.shape.predict(wind_speed_mps),
            self.scale_deg.predict(wind_speed_mps),
        )
    }
}

/// Shape and scale (degrees) from the published linear or power law.
pub fn mw_params(wind_speed_mps: f64, law: RegressionKind) -> (f64, f64) {
    WeibullLaw::published(law).params(wind_speed_mps)
}

/// Weibull tilt density in degrees, truncated at 90° without renormalization
/// (the discarded tail is below 1e-9 over the calibrated wind range).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedWeibullModel {
    wind_speed_mps: Option<f64>,
    law: Option<WeibullLaw>,
    shape: f64,
    scale_deg: f64,
}

impl ModifiedWeibullModel {
    pub fn new(shape: f64, scale_deg: f64) -> Result<Self> {
        if !(shape > 1.0 && shape.is_finite()) {
            return Err(Error::domain("Weibull shape", shape, "(1, inf)"));
        }
        if !(scale_deg > 0.0 && scale_deg.is_finite()) {
            return Err(Error::domain("Weibull scale", scale_deg, "(0, inf) deg"));
        }
        Ok(Self {
            wind_speed_mps: None,
            law: None,
            shape,
            scale_deg,
        })
    }

    pub fn from_wind(wind_speed_mps: f64, law: RegressionKind) -> Result<Self> {
        Self::from_law(wind_speed_mps, &WeibullLaw::published(law))
    }

    pub fn from_law(wind_speed_mps: f64, law: &WeibullLaw) -> Result<Self> {
        check_wind(wind_speed_mps)?;
        let (shape, scale) = law.params(wind_speed_mps);
        Ok(Self {
            wind_speed_mps: Some(wind_speed_mps),
            law: Some(*law),
            ..Self::new(shape, scale)?
        })
    }

    pub fn wind_speed_mps(&self) -> Option<f64> {
        self.wind_speed_mps
    }

    /// The wind law this model was built from, if any.
    pub fn law(&self) -> Option<&WeibullLaw> {
        self.law.as_ref()
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale_deg(&self) -> f64 {
        self.scale_deg
    }

    pub fn warning(&self) -> Option<WindWarning> {
        self.wind_speed_mps
            .and_then(|u| wind_warning("modified Weibull", u, MODIFIED_WEIBULL_WIND_RANGE))
    }

    /// Closed-form mode `λ(1 − 1/k)^(1/k)` in degrees.
    pub fn mode_deg(&self) -> f64 {
        self.scale_deg * (1.0 - 1.0 / self.shape).powf(1.0 / self.shape)
    }

    pub fn mean_deg(&self) -> f64 {
        self.scale_deg * libm::tgamma(1.0 + 1.0 / self.shape)
    }

    pub fn cdf_deg(&self, tilt_deg: f64) -> f64 {
        let x = tilt_deg.clamp(0.0, 90.0) / self.scale_deg;
        -(-x.powf(self.shape)).exp_m1()
    }

    /// Untruncated Weibull quantile.
    pub fn quantile_deg(&self, uniform: f64) -> f64 {
        self.scale_deg * (-(-uniform).ln_1p()).powf(1.0 / self.shape)
    }
}

/// Modified Weibull density in 1/degree; zero beyond 90°.
pub fn mw_pdf(tilt_deg: f64, model: &ModifiedWeibullModel) -> Result<f64> {
    if !(tilt_deg >= 0.0) {
        return Err(Error::domain("tilt angle", tilt_deg, "[0, 90] deg"));
    }
    if tilt_deg > 90.0 {
        return Ok(0.0);
    }
    if tilt_deg == 0.0 {
        return Ok(0.0);
    }
    let (k, lambda) = (model.shape, model.scale_deg);
    let r = tilt_deg / lambda;
    Ok(k / lambda * r.powf(k - 1.0) * (-r.powf(k)).exp())
}

/// Weibull inverse-CDF draw in degrees, redrawn while above 90°.
pub fn mw_sample<R: Rng + ?Sized>(rng: &mut R, model: &ModifiedWeibullModel) -> f64 {
    loop {
        let x = model.quantile_deg(rng.random::<f64>());
        if x <= 90.0 {
            return x;
        }
    }
}

// ---------------------------------------------------------------------------
// Empirical
// ---------------------------------------------------------------------------

/// Tilt density given as a sampled curve, interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSlopeModel {
    pdf: EmpiricalPdf,
    // Cumulative trapezoid mass at each node, scaled to end at 1.
    cumulative: Vec<f64>,
}

impl EmpiricalSlopeModel {
    pub const AREA_RANGE: (f64, f64) = (0.98, 1.02);

    pub fn new(pdf: EmpiricalPdf) -> Result<Self> {
        let area = pdf.area();
        if !(Self::AREA_RANGE.0..=Self::AREA_RANGE.1).contains(&area) {
            return Err(Error::InvalidParameter(format!(
                "empirical tilt pdf has area {area:.4}, expected within [{}, {}]",
                Self::AREA_RANGE.0,
                Self::AREA_RANGE.1
            )));
        }
        let a = pdf.angles_deg();
        if a[0] < 0.0 || a[a.len() - 1] > 90.0 {
            return Err(Error::InvalidParameter(format!(
                "empirical tilt angles must lie in [0, 90] deg, got [{}, {}]",
                a[0],
                a[a.len() - 1]
            )));
        }
        let d = pdf.densities();
        let mut cumulative = Vec::with_capacity(a.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 1..a.len() {
            acc += 0.5 * (a[i] - a[i - 1]) * (d[i] + d[i - 1]);
            cumulative.push(acc);
        }
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(Self { pdf, cumulative })
    }

    pub fn pdf(&self) -> &EmpiricalPdf {
        &self.pdf
    }

    pub fn pdf_deg(&self, tilt_deg: f64) -> f64 {
        self.pdf.interpolate(tilt_deg)
    }

    /// Inverse of the normalized piecewise-linear CDF.
    pub fn quantile_deg(&self, uniform: f64) -> f64 {
        let a = self.pdf.angles_deg();
        let d = self.pdf.densities();
        let u = uniform.clamp(0.0, 1.0);
        let i = self
            .cumulative
            .partition_point(|&c| c < u)
            .clamp(1, a.len() - 1);
        let total = self.pdf.area();
        let (x0, x1) = (a[i - 1], a[i]);
        let (y0, y1) = (d[i - 1] / total, d[i] / total);
        let target = u - self.cumulative[i - 1];
        let h = x1 - x0;
        let slope = (y1 - y0) / h;
        // Solve y0·t + slope·t²/2 = target for t ∈ [0, h].
        let disc = (y0 * y0 + 2.0 * slope * target).max(0.0);
        let denom = y0 + disc.sqrt();
        let t = if denom > 0.0 {
            2.0 * target / denom
        } else {
            0.0
        };
        (x0 + t.clamp(0.0, h)).min(x1)
    }
}

// ---------------------------------------------------------------------------
// Receiver tilt
// ---------------------------------------------------------------------------

/// Folded zero-mean Gaussian receiver incidence angle (degrees).
///
/// `sigma_deg = 0` is accepted and means a perfectly stabilized receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxTiltModel {
    sigma_deg: f64,
}

impl RxTiltModel {
    pub fn new(sigma_deg: f64) -> Result<Self> {
        if !(sigma_deg >= 0.0 && sigma_deg.is_finite()) {
            return Err(Error::domain(
                "receiver tilt sigma",
                sigma_deg,
                "[0, inf) deg",
            ));
        }
        Ok(Self { sigma_deg })
    }

    pub fn sigma_deg(&self) -> f64 {
        self.sigma_deg
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma_deg == 0.0
    }

    /// Folded-normal density in 1/degree on `[0, ∞)`.
    pub fn pdf_deg(&self, angle_deg: f64) -> f64 {
        if angle_deg < 0.0 || self.sigma_deg == 0.0 {
            return 0.0;
        }
        let z = angle_deg / self.sigma_deg;
        (2.0 / PI).sqrt() / self.sigma_deg * (-0.5 * z * z).exp()
    }

    pub fn pdf_rad(&self, angle_rad: f64) -> f64 {
        self.pdf_deg(angle_rad / DEG) / DEG
    }

    pub fn cdf_deg(&self, angle_deg: f64) -> f64 {
        if angle_deg < 0.0 {
            return 0.0;
        }
        if self.sigma_deg == 0.0 {
            return 1.0;
        }
        libm::erf(angle_deg / (self.sigma_deg * std::f64::consts::SQRT_2))
    }
}

/// `|N(0, σ²)|` clamped to `[0°, 90°]`. Draws outside the receiver FoV are kept.
pub fn rx_sample<R: Rng + ?Sized>(rng: &mut R, model: &RxTiltModel) -> f64 {
    if model.sigma_deg == 0.0 {
        return 0.0;
    }
    let z: f64 = rng.sample(StandardNormal);
    (z.abs() * model.sigma_deg).min(90.0)
}

/// Probability that the receiver incidence angle lies inside the FoV.
pub fn p_in(sigma_deg: f64, fov_deg: f64) -> Result<f64> {
    if !(fov_deg > 0.0 && fov_deg <= 90.0) {
        return Err(Error::domain("field of view", fov_deg, "(0, 90] deg"));
    }
    Ok(RxTiltModel::new(sigma_deg)?.cdf_deg(fov_deg))
}

// ---------------------------------------------------------------------------
// Tagged model
// ---------------------------------------------------------------------------

/// Transmitter tilt-angle distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum SlopeModel {
    CoxMunk(CoxMunkModel),
    ModifiedWeibull(ModifiedWeibullModel),
    Empirical(EmpiricalSlopeModel),
    /// Flat surface: all mass at zero tilt.
    Aligned,
}

impl SlopeModel {
    pub fn name(&self) -> &'static str {
        match self {
            SlopeModel::CoxMunk(_) => "cox-munk",
            SlopeModel::ModifiedWeibull(_) => "modified-weibull",
            SlopeModel::Empirical(_) => "empirical",
            SlopeModel::Aligned => "aligned",
        }
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self, SlopeModel::Aligned)
    }

    pub fn warning(&self) -> Option<WindWarning> {
        match self {
            SlopeModel::CoxMunk(m) => m.warning(),
            SlopeModel::ModifiedWeibull(m) => m.warning(),
            _ => None,
        }
    }

    /// Density in 1/degree (zero everywhere for [`SlopeModel::Aligned`]).
    pub fn pdf_deg(&self, tilt_deg: f64) -> f64 {
        if !(0.0..=90.0).contains(&tilt_deg) {
            return 0.0;
        }
        match self {
            SlopeModel::CoxMunk(m) => {
                if tilt_deg >= 90.0 {
                    0.0
                } else {
                    cm_pdf(tilt_deg * DEG, m, true).unwrap_or(0.0) * DEG
                }
            }
            SlopeModel::ModifiedWeibull(m) => mw_pdf(tilt_deg, m).unwrap_or(0.0),
            SlopeModel::Empirical(m) => m.pdf_deg(tilt_deg),
            SlopeModel::Aligned => 0.0,
        }
    }

    /// Density in 1/radian.
    pub fn pdf_rad(&self, tilt_rad: f64) -> f64 {
        self.pdf_deg(tilt_rad / DEG) / DEG
    }

    /// Points where the density has kinks, spanning its support, in degrees.
    pub fn breakpoints_deg(&self) -> Vec<f64> {
        match self {
            SlopeModel::Empirical(m) => {
                let a = m.pdf().angles_deg();
                let mut b = Vec::with_capacity(a.len() + 2);
                if a[0] > 0.0 {
                    b.push(0.0);
                }
                b.extend_from_slice(a);
                b
            }
            SlopeModel::ModifiedWeibull(m) => {
                // Split at the mode so the cusp at the origin gets its own panel.
                vec![0.0, m.mode_deg().min(45.0), 90.0]
            }
            _ => vec![0.0, 90.0],
        }
    }

    /// One tilt draw in degrees.
    pub fn sample_deg<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            SlopeModel::CoxMunk(m) => cm_sample(rng.random::<f64>(), m) / DEG,
            SlopeModel::ModifiedWeibull(m) => mw_sample(rng, m),
            SlopeModel::Empirical(m) => m.quantile_deg(rng.random::<f64>()),
            SlopeModel::Aligned => 0.0,
        }
    }

    /// The same family re-evaluated at another wind speed. Weibull models keep
    /// their wind law (the published linear law if they were built from raw parameters).
    pub fn with_wind(&self, wind_speed_mps: f64) -> Result<SlopeModel> {
        match self {
            SlopeModel::CoxMunk(_) => Ok(SlopeModel::CoxMunk(CoxMunkModel::from_wind(
                wind_speed_mps,
            )?)),
            SlopeModel::ModifiedWeibull(m) => {
                let law = m
                    .law
                    .unwrap_or_else(|| WeibullLaw::published(RegressionKind::Linear));
                Ok(SlopeModel::ModifiedWeibull(ModifiedWeibullModel::from_law(
                    wind_speed_mps,
                    &law,
                )?))
            }
            other => Err(Error::InvalidParameter(format!(
                "the {} slope model has no wind-speed dependence",
                other.name()
            ))),
        }
    }
}
