//! Deterministic link budget of the vertical water-to-air link: path loss,
//! misalignment factors, FoV gate, background light and receiver noise.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// Elementary charge, C.
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Receiver temperature used for thermal noise when none is given, K.
pub const DEFAULT_TEMPERATURE_K: f64 = 300.0;

const DEG: f64 = PI / 180.0;

/// Converts an attenuation in dB/km to a natural-log coefficient in 1/m.
pub fn db_per_km_to_per_m(db_per_km: f64) -> f64 {
    db_per_km / (10.0 * std::f64::consts::LOG10_E * 1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub depth_m: f64,
    pub height_m: f64,
}

impl LinkGeometry {
    pub fn new(depth_m: f64, height_m: f64) -> Result<Self> {
        if !(depth_m >= 0.0 && height_m >= 0.0 && depth_m.is_finite() && height_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "depth and height must be non-negative, got {depth_m} m and {height_m} m"
            )));
        }
        if depth_m + height_m <= 0.0 {
            return Err(Error::InvalidParameter(
                "total link range must be positive".into(),
            ));
        }
        Ok(Self { depth_m, height_m })
    }

    /// Equal water and air legs, `Z_w = Z_a = Z/2`.
    pub fn symmetric(range_m: f64) -> Result<Self> {
        Self::new(0.5 * range_m, 0.5 * range_m)
    }

    pub fn range_m(&self) -> f64 {
        self.depth_m + self.height_m
    }
}

/// Lambertian LED transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxModel {
    pub lambertian_order: f64,
    pub power_w: f64,
    pub wavelength_nm: f64,
}

impl TxModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambertian_order >= 1.0) {
            return Err(Error::domain(
                "Lambertian order",
                self.lambertian_order,
                "[1, inf)",
            ));
        }
        if !(self.power_w > 0.0) {
            return Err(Error::domain("transmit power", self.power_w, "(0, inf) W"));
        }
        Ok(())
    }
}

impl Default for TxModel {
    fn default() -> Self {
        Self {
            lambertian_order: 20.0,
            power_w: 20.0,
            wavelength_nm: 470.0,
        }
    }
}

/// SiPM receiver with concentrator, optical filter and TIA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxModel {
    pub area_m2: f64,
    /// Transmittance applied to the signal in the path loss.
    pub signal_transmittance: f64,
    /// Atmospheric and filter transmittances applied to background light.
    pub atmospheric_transmittance: f64,
    pub filter_transmittance: f64,
    pub optical_bandwidth_nm: f64,
    pub refractive_index: f64,
    /// Full field of view used by the concentrator gain, the FoV gate and the
    /// background solid angle, degrees.
    pub fov_deg: f64,
    pub gain: f64,
    pub excess_noise: f64,
    pub responsivity_a_per_w: f64,
    pub dark_current_a: f64,
    pub load_resistance_ohm: f64,
    pub electrical_bandwidth_hz: f64,
}

impl Default for RxModel {
    fn default() -> Self {
        Self {
            area_m2: 9e-6,
            signal_transmittance: 1.0,
            atmospheric_transmittance: 0.98,
            filter_transmittance: 1.0,
            optical_bandwidth_nm: 20.0,
            refractive_index: 1.5,
            fov_deg: 15.0,
            gain: 1e6,
            excess_noise: 1.1,
            responsivity_a_per_w: 9e4,
            dark_current_a: 1.1e-6,
            load_resistance_ohm: 1e3,
            electrical_bandwidth_hz: 5e6,
        }
    }
}

impl RxModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("photodetector area", self.area_m2),
            ("atmospheric transmittance", self.atmospheric_transmittance),
            ("filter transmittance", self.filter_transmittance),
            ("optical bandwidth", self.optical_bandwidth_nm),
            ("refractive index", self.refractive_index),
            ("gain", self.gain),
            ("excess noise factor", self.excess_noise),
            ("responsivity", self.responsivity_a_per_w),
            ("dark current", self.dark_current_a),
            ("load resistance", self.load_resistance_ohm),
            ("electrical bandwidth", self.electrical_bandwidth_hz),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.signal_transmittance >= 0.0) {
            return Err(Error::domain(
                "signal transmittance",
                self.signal_transmittance,
                "[0, inf)",
            ));
        }
        if !(self.fov_deg > 0.0 && self.fov_deg <= 90.0) {
            return Err(Error::domain("field of view", self.fov_deg, "(0, 90] deg"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub water_attenuation_per_m: f64,
    pub air_attenuation_db_per_km: f64,
    /// Upwelling radiance, W·m⁻²·nm⁻¹·sr⁻¹.
    pub upwelling_radiance: f64,
    pub temperature_k: f64,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            water_attenuation_per_m: 0.08,
            air_attenuation_db_per_km: 0.19,
            upwelling_radiance: 0.025,
            temperature_k: DEFAULT_TEMPERATURE_K,
        }
    }
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(self.water_attenuation_per_m >= 0.0 && self.air_attenuation_db_per_km >= 0.0) {
            return Err(Error::InvalidParameter(
                "attenuation coefficients must be non-negative".into(),
            ));
        }
        if !(self.upwelling_radiance >= 0.0) {
            return Err(Error::domain(
                "upwelling radiance",
                self.upwelling_radiance,
                "[0, inf)",
            ));
        }
        if !(self.temperature_k >= 0.0) {
            return Err(Error::domain(
                "temperature",
                self.temperature_k,
                "[0, inf) K",
            ));
        }
        Ok(())
    }
}

/// Coefficients of `γ = μ²h² / (αh + β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCoeffs {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Range-weighted attenuation `(K_w·Z_w + K_a·Z_a) / Z` in 1/m.
pub fn k_eff(env: &Environment, geometry: &LinkGeometry) -> Result<f64> {
    let z = geometry.range_m();
    if !(z > 0.0) {
        return Err(Error::domain("link range", z, "(0, inf) m"));
    }
    let ka = db_per_km_to_per_m(env.air_attenuation_db_per_km);
    Ok((env.water_attenuation_per_m * geometry.depth_m + ka * geometry.height_m) / z)
}

/// Non-imaging concentrator gain `n² / sin²(FoV)`.
pub fn concentrator_gain(refractive_index: f64, fov_deg: f64) -> Result<f64> {
    if !(fov_deg > 0.0 && fov_deg <= 90.0) {
        return Err(Error::domain("field of view", fov_deg, "(0, 90] deg"));
    }
    Ok(refractive_index.powi(2) / (fov_deg * DEG).sin().powi(2))
}

/// Deterministic path loss `h_c` for perfect alignment.
pub fn path_loss(
    geometry: &LinkGeometry,
    tx: &TxModel,
    rx: &RxModel,
    env: &Environment,
) -> Result<f64> {
    let z = geometry.range_m();
    let g = concentrator_gain(rx.refractive_index, rx.fov_deg)?;
    let k = k_eff(env, geometry)?;
    let m = tx.lambertian_order;
    Ok(
        (m + 1.0) / (2.0 * PI) * rx.area_m2 * rx.signal_transmittance * g / (z * z)
            * (-z * k).exp(),
    )
}

/// `h_c·cosᵐ(φ_t)·cos(φ_r)` inside the FoV, zero outside.
pub fn channel_gain(
    path_loss: f64,
    tilt_deg: f64,
    incidence_deg: f64,
    lambertian_order: f64,
    fov_deg: f64,
) -> f64 {
    if incidence_deg > fov_deg {
        return 0.0;
    }
    path_loss
        * (tilt_deg * DEG).cos().max(0.0).powf(lambertian_order)
        * (incidence_deg * DEG).cos().max(0.0)
}

/// Lambertian order whose half-power half-angle is `half_angle_deg`.
pub fn lambertian_order_from_half_angle(half_angle_deg: f64) -> Result<f64> {
    if !(half_angle_deg > 0.0 && half_angle_deg < 90.0) {
        return Err(Error::domain(
            "half-power half-angle",
            half_angle_deg,
            "(0, 90) deg",
        ));
    }
    Ok(-LN_2 / (half_angle_deg * DEG).cos().ln())
}

/// Solid angle of a cone with full apex angle `fov_deg`, steradians.
pub fn solid_angle(fov_deg: f64) -> f64 {
    2.0 * PI * (1.0 - (0.5 * fov_deg * DEG).cos())
}

/// Photocurrent induced by upwelling background light, amperes.
pub fn background_current(rx: &RxModel, upwelling_radiance: f64, fov_deg: f64) -> f64 {
    rx.responsivity_a_per_w
        * upwelling_radiance
        * solid_angle(fov_deg)
        * rx.atmospheric_transmittance
        * rx.filter_transmittance
        * rx.optical_bandwidth_nm
        * rx.area_m2
}

/// Signal scale and the signal-dependent / signal-independent noise terms.
pub fn noise_coeffs(
    tx: &TxModel,
    rx: &RxModel,
    background_current_a: f64,
    temperature_k: f64,
) -> NoiseCoeffs {
    let mu = rx.load_resistance_ohm * rx.responsivity_a_per_w * tx.power_w;
    let shot = 2.0 * ELECTRON_CHARGE * rx.gain * rx.excess_noise * rx.electrical_bandwidth_hz;
    let alpha = shot * rx.load_resistance_ohm * mu;
    let beta = rx.load_resistance_ohm.powi(2) * shot * (rx.dark_current_a + background_current_a)
        + 4.0 * BOLTZMANN * temperature_k * rx.electrical_bandwidth_hz * rx.load_resistance_ohm;
    NoiseCoeffs { mu, alpha, beta }
}

/// Electrical SNR `μ²h² / (αh + β)`.
pub fn snr(h: f64, coeffs: &NoiseCoeffs) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    let s = coeffs.mu * h;
    s * s / (coeffs.alpha * h + coeffs.beta)
}

/// Every derived quantity of one link configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub k_eff_per_m: f64,
    pub concentrator_gain: f64,
    pub path_loss: f64,
    pub solid_angle_sr: f64,
    pub background_current_a: f64,
    pub noise: NoiseCoeffs,
    pub lambertian_order: f64,
}

impl LinkBudget {
    pub fn new(
        geometry: &LinkGeometry,
        tx: &TxModel,
        rx: &RxModel,
        env: &Environment,
    ) -> Result<Self> {
        tx.validate()?;
        rx.validate()?;
        env.validate()?;
        let background = background_current(rx, env.upwelling_radiance, rx.fov_deg);
        Ok(Self {
            k_eff_per_m: k_eff(env, geometry)?,
            concentrator_gain: concentrator_gain(rx.refractive_index, rx.fov_deg)?,
            path_loss: path_loss(geometry, tx, rx, env)?,
            solid_angle_sr: solid_angle(rx.fov_deg),
            background_current_a: background,
            noise: noise_coeffs(tx, rx, background, env.temperature_k),
            lambertian_order: tx.lambertian_order,
        })
    }

    /// SNR for given tilt and incidence angles (degrees) inside the gate.
    pub fn snr_at(&self, tilt_deg: f64, incidence_deg: f64) -> f64 {
        snr(
            channel_gain(
                self.path_loss,
                tilt_deg,
                incidence_deg,
                self.lambertian_order,
                90.0,
            ),
            &self.noise,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn k_eff_values() {
        let env = Environment::default();
        let geo = LinkGeometry::new(10.0, 10.0).unwrap();
        let k = k_eff(&env, &geo).unwrap();
        assert!((db_per_km_to_per_m(0.19) - 4.375e-5).abs() < 1e-8);
        assert!((k - 0.04002).abs() < 1e-5, "{k}");
        let water_only = LinkGeometry::new(10.0, 0.0).unwrap();
        assert!((k_eff(&env, &water_only).unwrap() - 0.08).abs() < 1e-15);
        let same = Environment {
            water_attenuation_per_m: db_per_km_to_per_m(3.0),
            air_attenuation_db_per_km: 3.0,
            ..env
        };
        let split = LinkGeometry::new(3.0, 17.0).unwrap();
        assert!(close(
            k_eff(&same, &split).unwrap(),
            db_per_km_to_per_m(3.0),
            1e-14
        ));
    }

    #[test]
    fn zero_range_rejected() {
        assert!(LinkGeometry::new(0.0, 0.0).is_err());
        assert!(LinkGeometry::new(-1.0, 3.0).is_err());
    }

    #[test]
    fn concentrator_values() {
        assert!(close(concentrator_gain(1.5, 15.0).unwrap(), 33.59, 1e-3));
        assert!(close(concentrator_gain(1.5, 90.0).unwrap(), 2.25, 1e-15));
        assert!(close(concentrator_gain(1.0, 30.0).unwrap(), 4.0, 1e-14));
        assert!(concentrator_gain(1.5, 0.0).is_err());
    }

    #[test]
    fn path_loss_reference_value() {
        let geo = LinkGeometry::symmetric(20.0).unwrap();
        let h = path_loss(
            &geo,
            &TxModel::default(),
            &RxModel::default(),
            &Environment::default(),
        )
        .unwrap();
        assert!(close(h, 1.13e-6, 5e-3), "{h:e}");
    }

    #[test]
    fn inverse_square_and_zero_transmittance() {
        let env = Environment {
            water_attenuation_per_m: 0.0,
            air_attenuation_db_per_km: 0.0,
            ..Default::default()
        };
        let tx = TxModel::default();
        let rx = RxModel::default();
        let h1 = path_loss(&LinkGeometry::symmetric(20.0).unwrap(), &tx, &rx, &env).unwrap();
        let h2 = path_loss(&LinkGeometry::symmetric(40.0).unwrap(), &tx, &rx, &env).unwrap();
        assert!(close(h2, h1 / 4.0, 1e-14));
        let dark = RxModel {
            signal_transmittance: 0.0,
            ..rx
        };
        assert_eq!(
            path_loss(&LinkGeometry::symmetric(20.0).unwrap(), &tx, &dark, &env).unwrap(),
            0.0
        );
    }

    #[test]
    fn gain_factors_and_gate() {
        let hc = 1e-6;
        assert_eq!(channel_gain(hc, 0.0, 0.0, 20.0, 15.0), hc);
        assert_eq!(channel_gain(hc, 0.0, 15.0 + 1e-9, 20.0, 15.0), 0.0);
        let half = channel_gain(hc, 15.0, 0.0, 20.0, 15.0) / hc;
        assert!((half - 0.5).abs() < 0.01, "{half}");
        let inside = channel_gain(hc, 0.0, 15.0, 20.0, 15.0);
        assert!(close(inside, hc * (15.0 * DEG).cos(), 1e-15));
    }

    #[test]
    fn lambertian_orders() {
        assert!((lambertian_order_from_half_angle(15.0).unwrap() - 20.0).abs() < 0.3);
        assert!((lambertian_order_from_half_angle(11.0).unwrap() - 37.38).abs() < 0.01);
        assert!((lambertian_order_from_half_angle(60.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(lambertian_order_from_half_angle(0.0).is_err());
        assert!(lambertian_order_from_half_angle(90.0).is_err());
    }

    #[test]
    fn solid_angles() {
        assert!(close(solid_angle(30.0), 0.2141, 5e-4));
        assert!(close(solid_angle(360.0), 4.0 * PI, 1e-15));
        assert_eq!(solid_angle(0.0), 0.0);
    }

    #[test]
    fn background_current_reference_and_linearity() {
        let rx = RxModel::default();
        let ib = background_current(&rx, 0.025, 30.0);
        assert!(close(ib, 0.085, 0.01), "{ib}");
        assert_eq!(background_current(&rx, 0.0, 30.0), 0.0);
        assert!(close(background_current(&rx, 0.25, 30.0), 10.0 * ib, 1e-14));
    }

    #[test]
    fn noise_reference_values() {
        let rx = RxModel::default();
        let c = noise_coeffs(&TxModel::default(), &rx, 0.085, 300.0);
        assert!(close(c.mu, 1.8e9, 1e-15));
        assert!(close(c.alpha, 3.17e6, 2e-3), "{}", c.alpha);
        assert!(close(c.beta, 0.150, 3e-3), "{}", c.beta);
        let silent = RxModel {
            dark_current_a: 1e-300,
            ..rx
        };
        assert!(noise_coeffs(&TxModel::default(), &silent, 0.0, 0.0).beta < 1e-290);
        let wide = RxModel {
            electrical_bandwidth_hz: 2.0 * rx.electrical_bandwidth_hz,
            ..rx
        };
        let c2 = noise_coeffs(&TxModel::default(), &wide, 0.085, 300.0);
        assert!(close(c2.alpha, 2.0 * c.alpha, 1e-14) && close(c2.beta, 2.0 * c.beta, 1e-14));
    }

    #[test]
    fn thermal_noise_is_negligible() {
        let rx = RxModel::default();
        let thermal = 4.0 * BOLTZMANN * 300.0 * rx.electrical_bandwidth_hz * rx.load_resistance_ohm;
        let c = noise_coeffs(&TxModel::default(), &rx, 0.085, 300.0);
        assert!(thermal / c.beta < 1e-8);
    }

    #[test]
    fn snr_values() {
        let c = noise_coeffs(&TxModel::default(), &RxModel::default(), 0.085, 300.0);
        assert_eq!(snr(0.0, &c), 0.0);
        let budget = LinkBudget::new(
            &LinkGeometry::symmetric(20.0).unwrap(),
            &TxModel::default(),
            &RxModel::default(),
            &Environment::default(),
        )
        .unwrap();
        let g = budget.snr_at(0.0, 0.0);
        assert!(close(g, 1.1e6, 0.05), "{g:e}");
        let shot_only = NoiseCoeffs { beta: 0.0, ..c };
        assert!(close(
            snr(1e-7, &shot_only),
            c.mu * c.mu * 1e-7 / c.alpha,
            1e-14
        ));
    }
}
