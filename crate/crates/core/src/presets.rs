//! Scenario families used by the capacity studies: each preset is a set of
//! labelled curves evaluated along the range axis.

use crate::capacity::LinkScenario;
use crate::fitting::RegressionKind;
use crate::surface::{CoxMunkModel, ModifiedWeibullModel, RxTiltModel, SlopeModel};

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub scenario: LinkScenario,
}

/// Range axis `Z = 10, 20, …, 100` m.
pub fn range_axis() -> Vec<f64> {
    (1..=10).map(|i| 10.0 * i as f64).collect()
}

fn baseline(fov_deg: f64) -> LinkScenario {
    let mut s = LinkScenario::default();
    s.rx.fov_deg = fov_deg;
    s
}

fn mw(u: f64) -> SlopeModel {
    SlopeModel::ModifiedWeibull(
        ModifiedWeibullModel::from_wind(u, RegressionKind::Linear).expect("wind speed in range"),
    )
}

/// Wind speed U ∈ {6, 10, 14}: modified Weibull with a 15° FoV against
/// Cox-Munk with a 30° FoV; m = 20, σ_r = 10°, L_t = 0.025.
pub fn wind_study() -> Vec<Curve> {
    let mut curves = Vec::new();
    for u in [6.0, 10.0, 14.0] {
        curves.push(Curve {
            label: format!("mw_fov15_U{u}"),
            scenario: LinkScenario {
                slope_model: mw(u),
                ..baseline(15.0)
            },
        });
        curves.push(Curve {
            label: format!("cm_fov30_U{u}"),
            scenario: LinkScenario {
                slope_model: SlopeModel::CoxMunk(
                    CoxMunkModel::from_wind(u).expect("wind speed in range"),
                ),
                ..baseline(30.0)
            },
        });
    }
    curves
}

/// Receiver misalignment σ_r ∈ {10°, 20°}, Lambertian order m ∈ {20, 40} and
/// FoV ∈ {15°, 30°}; modified Weibull at U = 10, L_t = 0.025.
pub fn misalignment_study() -> Vec<Curve> {
    let mut curves = Vec::new();
    for sigma in [10.0, 20.0] {
        for m in [20.0, 40.0] {
            for fov in [15.0, 30.0] {
                let mut s = baseline(fov);
                s.tx.lambertian_order = m;
                s.rx_tilt = RxTiltModel::new(sigma).expect("positive sigma");
                curves.push(Curve {
                    label: format!("sigma{sigma}_m{m}_fov{fov}"),
                    scenario: s,
                });
            }
        }
    }
    curves
}

/// Upwelling radiance L_t ∈ {0.025, 0.25} and FoV ∈ {15°, 30°}; modified
/// Weibull at U = 10, m = 20, σ_r = 10°.
pub fn radiance_study() -> Vec<Curve> {
    let mut curves = Vec::new();
    for lt in [0.025, 0.25] {
        for fov in [15.0, 30.0] {
            let mut s = baseline(fov);
            s.env.upwelling_radiance = lt;
            curves.push(Curve {
                label: format!("Lt{lt}_fov{fov}"),
                scenario: s,
            });
        }
    }
    curves
}
