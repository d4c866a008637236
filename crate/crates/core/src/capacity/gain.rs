//! Gain-domain route: the density of `h = h_c·X·Y` with `X = cosᵐ(φ_t)` and
//! `Y = cos(φ_r)` restricted to the FoV, built by change of variables.

use std::cell::RefCell;

use super::{instantaneous_capacity, CapacityEstimate, LinkScenario, Method};
use crate::channel::{snr, LinkBudget};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_piecewise, QuadSpec};
use crate::surface::{RxTiltModel, SlopeModel};

const DEG: f64 = std::f64::consts::PI / 180.0;

/// Density of `X = cosᵐ(φ_t)` on `(0, 1)`.
///
/// `f_X(x) = f_φt(arccos x^{1/m})·x^{1/m − 1} / (m·sin φ_t)`.
pub fn tilt_factor_density(slope: &SlopeModel, lambertian_order: f64, x: f64) -> f64 {
    if !(x > 0.0 && x < 1.0) || slope.is_point_mass() {
        return 0.0;
    }
    let m = lambertian_order;
    let c = x.powf(1.0 / m);
    let tilt = c.acos();
    let s = tilt.sin();
    if s <= 0.0 {
        return 0.0;
    }
    slope.pdf_rad(tilt) * c / (x * m * s)
}

struct GainModel<'a> {
    slope: &'a SlopeModel,
    rx: RxTiltModel,
    m: f64,
    fov: f64,
    p_in: f64,
}

impl GainModel<'_> {
    fn new<'a>(scenario: &'a LinkScenario, budget: &LinkBudget) -> Result<GainModel<'a>> {
        let fov = scenario.fov_deg() * DEG;
        let rx = scenario.rx_tilt;
        Ok(GainModel {
            slope: &scenario.slope_model,
            rx,
            m: budget.lambertian_order,
            fov,
            p_in: rx.cdf_deg(scenario.fov_deg()),
        })
    }

    fn u_min(&self) -> f64 {
        if self.slope.is_point_mass() {
            self.fov.cos()
        } else {
            0.0
        }
    }

    /// Density of `U = h/h_c` given the beam is inside the FoV.
    fn density_u(&self, u: f64, spec: QuadSpec) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Ok(0.0);
        }
        match (self.slope.is_point_mass(), self.rx.is_degenerate()) {
            (true, true) => Ok(0.0),
            (false, true) => Ok(tilt_factor_density(self.slope, self.m, u)),
            (true, false) => {
                let r = u.acos();
                if r > self.fov || r <= 0.0 {
                    return Ok(0.0);
                }
                Ok(self.rx.pdf_rad(r) / (self.p_in * r.sin()))
            }
            (false, false) => {
                let upper = self.fov.min(u.acos());
                if upper <= 0.0 {
                    return Ok(0.0);
                }
                let integrand = |r: f64| {
                    let y = r.cos();
                    tilt_factor_density(self.slope, self.m, u / y) * self.rx.pdf_rad(r) / y
                };
                Ok(integrate(integrand, 0.0, upper, spec)?.value / self.p_in)
            }
        }
    }

    fn breaks_u(&self) -> Vec<f64> {
        let mut b = vec![self.u_min(), 1.0];
        if !self.rx.is_degenerate() && !self.slope.is_point_mass() {
            b.push(self.fov.cos());
        }
        if !self.slope.is_point_mass() {
            for t in self.slope.breakpoints_deg() {
                let u = (t * DEG).cos().powf(self.m);
                if u > 0.0 && u < 1.0 {
                    b.push(u);
                }
            }
        }
        b.sort_by(f64::total_cmp);
        b.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        b
    }
}

fn inner_spec(spec: QuadSpec) -> QuadSpec {
    QuadSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        max_intervals: spec.max_intervals.max(4000),
    }
}

/// Conditional (in-FoV) density `f_h'(h)` of the channel gain.
///
/// Zero outside `(0, h_c]`. When both the surface and the receiver are
/// perfectly aligned all mass sits at `h_c` and the density part is zero.
pub fn conditional_gain_density(scenario: &LinkScenario, h: f64) -> Result<f64> {
    let budget = scenario.budget()?;
    let model = GainModel::new(scenario, &budget)?;
    let hc = budget.path_loss;
    Ok(model.density_u(h / hc, inner_spec(QuadSpec::default()))? / hc)
}

/// Continuous part of the gain density, `P_in·f_h'(h)`.
pub fn gain_density_h(scenario: &LinkScenario, h: f64) -> Result<f64> {
    let p_in = scenario.rx_tilt.cdf_deg(scenario.fov_deg());
    Ok(p_in * conditional_gain_density(scenario, h)?)
}

/// Ergodic capacity as `P_in·∫ C(γ(h))·f_h'(h) dh`, integrated in `u = h/h_c`.
pub fn ergodic_capacity_gain(scenario: &LinkScenario, spec: QuadSpec) -> Result<CapacityEstimate> {
    let budget = scenario.budget()?;
    let model = GainModel::new(scenario, &budget)?;
    let hc = budget.path_loss;
    let cap = |u: f64| instantaneous_capacity(snr(hc * u, &budget.noise));
    let warnings = scenario.warnings();

    if model.slope.is_point_mass() && model.rx.is_degenerate() {
        return Ok(CapacityEstimate::deterministic(
            cap(1.0),
            Method::GainDensity,
            1.0,
            warnings,
        ));
    }

    let ispec = inner_spec(spec);
    let first_err: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |u: f64| match model.density_u(u, ispec) {
        Ok(d) => cap(u) * d,
        Err(e) => {
            first_err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let outer = integrate_piecewise(integrand, &model.breaks_u(), spec);
    if let Some(e) = first_err.into_inner() {
        return Err(e);
    }
    let c_erg = model.p_in * outer?.value;
    Ok(CapacityEstimate::deterministic(
        c_erg.max(0.0),
        Method::GainDensity,
        model.p_in,
        warnings,
    ))
}
