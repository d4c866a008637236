use std::cell::RefCell;

use super::{instantaneous_capacity, CapacityEstimate, LinkScenario, Method};
use crate::channel::{snr, LinkBudget};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_piecewise, QuadSpec};

const DEG: f64 = std::f64::consts::PI / 180.0;

/// Ergodic capacity by nested quadrature over (φ_t, φ_r), in radians.
///
/// The outer integral spans the tilt support split at the slope model's
/// breakpoints; the inner one spans `[0, FoV]`. Out-of-FoV incidence
/// contributes zero capacity.
pub fn ergodic_capacity_angle(scenario: &LinkScenario, spec: QuadSpec) -> Result<CapacityEstimate> {
    let budget = scenario.budget()?;
    ergodic_capacity_angle_with_budget(scenario, &budget, scenario.fov_deg(), spec)
}

/// As [`ergodic_capacity_angle`], with a fixed link budget and an independent
/// gate angle. Useful for isolating the effect of the FoV gate from the
/// FoV-dependent concentrator gain and background noise.
pub fn ergodic_capacity_angle_with_budget(
    scenario: &LinkScenario,
    budget: &LinkBudget,
    gate_fov_deg: f64,
    spec: QuadSpec,
) -> Result<CapacityEstimate> {
    if !(gate_fov_deg > 0.0 && gate_fov_deg <= 90.0) {
        return Err(Error::domain("field of view", gate_fov_deg, "(0, 90] deg"));
    }
    let fov = gate_fov_deg * DEG;
    let m = budget.lambertian_order;
    let hc = budget.path_loss;
    let cap = |tilt: f64, inc: f64| {
        instantaneous_capacity(snr(
            hc * tilt.cos().max(0.0).powf(m) * inc.cos(),
            &budget.noise,
        ))
    };
    let rx = scenario.rx_tilt;
    let slope = &scenario.slope_model;
    let warnings = scenario.warnings();
    let inner_spec = spec
        .with_rel_tol(spec.rel_tol * 0.1)
        .with_abs_tol(spec.abs_tol * 0.1);

    let p_in = if rx.is_degenerate() {
        1.0
    } else {
        integrate(
            |r| rx.pdf_rad(r),
            0.0,
            fov,
            QuadSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-15),
        )?
        .value
    };

    // Averages over the incidence angle for a given tilt.
    let first_err: RefCell<Option<Error>> = RefCell::new(None);
    let over_incidence = |tilt: f64| -> f64 {
        if rx.is_degenerate() {
            return cap(tilt, 0.0);
        }
        match integrate(|r| cap(tilt, r) * rx.pdf_rad(r), 0.0, fov, inner_spec) {
            Ok(r) => r.value,
            Err(e) => {
                first_err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };

    let c_erg = if slope.is_point_mass() {
        over_incidence(0.0)
    } else {
        let breaks: Vec<f64> = slope.breakpoints_deg().iter().map(|b| b * DEG).collect();
        let outer = integrate_piecewise(|t| over_incidence(t) * slope.pdf_rad(t), &breaks, spec);
        if let Some(e) = first_err.borrow_mut().take() {
            return Err(e);
        }
        outer?.value
    };
    if let Some(e) = first_err.into_inner() {
        return Err(e);
    }
    Ok(CapacityEstimate::deterministic(
        c_erg.max(0.0),
        Method::AngleQuadrature,
        p_in,
        warnings,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{RxTiltModel, SlopeModel};

    #[test]
    fn fully_aligned_equals_peak_capacity() {
        let s = LinkScenario {
            slope_model: SlopeModel::Aligned,
            rx_tilt: RxTiltModel::new(0.0).unwrap(),
            ..LinkScenario::default()
        };
        let b = s.budget().unwrap();
        let est = ergodic_capacity_angle(&s, QuadSpec::default()).unwrap();
        let peak = instantaneous_capacity(snr(b.path_loss, &b.noise));
        assert!((est.c_erg - peak).abs() < 1e-12);
        assert_eq!(est.p_in, 1.0);
    }

    #[test]
    fn p_in_matches_erf() {
        let s = LinkScenario::default();
        let est = ergodic_capacity_angle(&s, QuadSpec::default()).unwrap();
        let erf = libm::erf(15.0 / (10.0 * 2f64.sqrt()));
        assert!((est.p_in - erf).abs() < 1e-9);
        assert!((est.p_in + est.p_out - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_gate_gives_tiny_capacity() {
        let s = LinkScenario::default();
        let b = s.budget().unwrap();
        let est = ergodic_capacity_angle_with_budget(&s, &b, 1e-3, QuadSpec::default()).unwrap();
        assert!(est.c_erg < 1e-3, "{}", est.c_erg);
        assert!(ergodic_capacity_angle_with_budget(&s, &b, 0.0, QuadSpec::default()).is_err());
    }
}
