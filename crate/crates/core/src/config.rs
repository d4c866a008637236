//! Flat scenario configuration.
//!
//! Keys follow the usual link-budget symbols. Values are SI except where
//! the key carries a unit suffix (`_deg`, `_nm`, `K_a_dB_per_km`). Every key is
//! optional and defaults to the baseline scenario; unknown keys are rejected.
//!
//! ```toml
//! Z_w = 30.0              # water path, m
//! Z_a = 30.0              # air path, m
//! m = 20.0                # Lambertian order
//! FoV_deg = 15.0
//! L_t = 0.025             # W m^-2 nm^-1 sr^-1
//! slope_model = "modified-weibull"   # cox-munk | modified-weibull | empirical | aligned
//! U = 10.0                # wind speed, m/s
//! wind_law = "linear"     # linear | power
//! sigma_r_deg = 10.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::capacity::LinkScenario;
use crate::channel::{Environment, LinkGeometry, RxModel, TxModel};
use crate::error::{Error, Result};
use crate::fitting::{EmpiricalPdf, RegressionKind};
use crate::surface::{
    CoxMunkModel, EmpiricalSlopeModel, ModifiedWeibullModel, RxTiltModel, SlopeModel,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    #[serde(rename = "Z_w")]
    pub z_w: f64,
    #[serde(rename = "Z_a")]
    pub z_a: f64,

    pub m: f64,
    #[serde(rename = "P_tx")]
    pub p_tx: f64,
    pub lambda_nm: f64,

    #[serde(rename = "A_PD")]
    pub a_pd: f64,
    #[serde(rename = "T_s")]
    pub t_s: f64,
    #[serde(rename = "T_a")]
    pub t_a: f64,
    #[serde(rename = "T_f")]
    pub t_f: f64,
    #[serde(rename = "B_o_nm")]
    pub b_o_nm: f64,
    pub n_rf: f64,
    #[serde(rename = "FoV_deg")]
    pub fov_deg: f64,
    #[serde(rename = "G")]
    pub gain: f64,
    #[serde(rename = "F")]
    pub excess_noise: f64,
    #[serde(rename = "R_e")]
    pub r_e: f64,
    #[serde(rename = "I_d")]
    pub i_d: f64,
    #[serde(rename = "R_L")]
    pub r_l: f64,
    #[serde(rename = "B_e")]
    pub b_e: f64,

    #[serde(rename = "K_w")]
    pub k_w: f64,
    #[serde(rename = "K_a_dB_per_km")]
    pub k_a_db_per_km: f64,
    #[serde(rename = "L_t")]
    pub l_t: f64,
    #[serde(rename = "T")]
    pub temperature: f64,

    pub slope_model: String,
    #[serde(rename = "U")]
    pub wind_speed: f64,
    pub wind_law: String,
    /// Tilt PDF table for `slope_model = "empirical"`, relative to the config file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_csv: Option<PathBuf>,
    pub sigma_r_deg: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let tx = TxModel::default();
        let rx = RxModel::default();
        let env = Environment::default();
        Self {
            z_w: 10.0,
            z_a: 10.0,
            m: tx.lambertian_order,
            p_tx: tx.power_w,
            lambda_nm: tx.wavelength_nm,
            a_pd: rx.area_m2,
            t_s: rx.signal_transmittance,
            t_a: rx.atmospheric_transmittance,
            t_f: rx.filter_transmittance,
            b_o_nm: rx.optical_bandwidth_nm,
            n_rf: rx.refractive_index,
            fov_deg: rx.fov_deg,
            gain: rx.gain,
            excess_noise: rx.excess_noise,
            r_e: rx.responsivity_a_per_w,
            i_d: rx.dark_current_a,
            r_l: rx.load_resistance_ohm,
            b_e: rx.electrical_bandwidth_hz,
            k_w: env.water_attenuation_per_m,
            k_a_db_per_km: env.air_attenuation_db_per_km,
            l_t: env.upwelling_radiance,
            temperature: env.temperature_k,
            slope_model: "modified-weibull".into(),
            wind_speed: 10.0,
            wind_law: "linear".into(),
            slope_csv: None,
            sigma_r_deg: 10.0,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file; a relative `slope_csv` is resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        if let (Some(csv), Some(dir)) = (&cfg.slope_csv, path.parent()) {
            if csv.is_relative() {
                cfg.slope_csv = Some(dir.join(csv));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization, hex encoded. Equal for any two
    /// files that resolve to the same parameters.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn wind_law(&self) -> Result<RegressionKind> {
        self.wind_law.parse()
    }

    pub fn slope(&self) -> Result<SlopeModel> {
        let model = match self.slope_model.trim().to_ascii_lowercase().as_str() {
            "cox-munk" | "cm" => SlopeModel::CoxMunk(CoxMunkModel::from_wind(self.wind_speed)?),
            "modified-weibull" | "mw" => {
                SlopeModel::ModifiedWeibull(ModifiedWeibullModel::from_wind(self.wind_speed, self.wind_law()?)?)
            }
            "empirical" => {
                let path = self
                    .slope_csv
                    .as_ref()
                    .ok_or_else(|| Error::Config("slope_model = \"empirical\" needs slope_csv".into()))?;
                SlopeModel::Empirical(EmpiricalSlopeModel::new(EmpiricalPdf::read_csv(path)?)?)
            }
            "aligned" => SlopeModel::Aligned,
            other => {
                return Err(Error::Config(format!(
                    "unknown slope_model `{other}` (expected cox-munk, modified-weibull, empirical or aligned)"
                )))
            }
        };
        Ok(model)
    }

    pub fn to_scenario(&self) -> Result<LinkScenario> {
        let scenario = LinkScenario {
            geometry: LinkGeometry::new(self.z_w, self.z_a)?,
            tx: TxModel {
                lambertian_order: self.m,
                power_w: self.p_tx,
                wavelength_nm: self.lambda_nm,
            },
            rx: RxModel {
                area_m2: self.a_pd,
                signal_transmittance: self.t_s,
                atmospheric_transmittance: self.t_a,
                filter_transmittance: self.t_f,
                optical_bandwidth_nm: self.b_o_nm,
                refractive_index: self.n_rf,
                fov_deg: self.fov_deg,
                gain: self.gain,
                excess_noise: self.excess_noise,
                responsivity_a_per_w: self.r_e,
                dark_current_a: self.i_d,
                load_resistance_ohm: self.r_l,
                electrical_bandwidth_hz: self.b_e,
            },
            env: Environment {
                water_attenuation_per_m: self.k_w,
                air_attenuation_db_per_km: self.k_a_db_per_km,
                upwelling_radiance: self.l_t,
                temperature_k: self.temperature,
            },
            slope_model: self.slope()?,
            rx_tilt: RxTiltModel::new(self.sigma_r_deg)?,
        };
        scenario.budget()?;
        Ok(scenario)
    }
}
