//! Least-squares fitting of candidate families to empirical tilt-angle PDFs,
//! family ranking, and wind-speed regression of the fitted parameters.
//!
//! The fit objective is the pointwise mean squared error between the family
//! density and the sampled densities on the curve's own grid. Densities are
//! treated as absolute: rescaling the input changes the ranking unless the
//! caller rescales candidates too.

mod empirical;
mod families;
mod regression;
pub mod simplex;

use rayon::prelude::*;

pub use empirical::{EmpiricalPdf, CSV_HEADER};
pub use families::Family;
pub use regression::{
    mae, regress_linear, regress_power, regress_power_loglog, RegressionKind, RegressionModel,
};

use crate::error::{Error, Result};
use simplex::{minimize, SimplexOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub family: Family,
    pub params: Vec<f64>,
    pub mse: f64,
}

impl FitResult {
    pub fn pdf(&self, angle_deg: f64) -> f64 {
        self.family.pdf(angle_deg, &self.params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub simplex: SimplexOptions,
    /// Restarts from jittered moment seeds, including the unjittered one.
    pub restarts: usize,
    /// Offsets (in optimizer coordinates) probed by the coarse grid restart.
    pub grid_half_width: f64,
    pub grid_points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            simplex: SimplexOptions::default(),
            restarts: 5,
            grid_half_width: 1.5,
            grid_points: 7,
        }
    }
}

/// Mean over grid points of the squared density difference.
pub fn mse_curve(pdf: &EmpiricalPdf, family: Family, params: &[f64]) -> f64 {
    let sum: f64 = pdf
        .angles_deg()
        .iter()
        .zip(pdf.densities())
        .map(|(&a, &d)| (family.pdf(a, params) - d).powi(2))
        .sum();
    let mse = sum / pdf.len() as f64;
    if mse.is_nan() {
        f64::INFINITY
    } else {
        mse
    }
}

// Deterministic jitter pattern for restarts beyond the first.
const JITTER: [(f64, f64); 4] = [(0.3, 0.3), (-0.3, 0.3), (0.3, -0.3), (-0.3, -0.3)];

/// Fits `family` to `pdf` by minimizing [`mse_curve`].
///
/// Runs the simplex from the moment seed, from jittered copies of it, and
/// from the best point of a coarse grid around it. Fails when no run meets
/// the simplex tolerances, the best parameters leave the family domain, or
/// the fitted density no longer carries the data's mass on the grid.
pub fn fit_family(pdf: &EmpiricalPdf, family: Family) -> Result<FitResult> {
    fit_family_with(pdf, family, FitOptions::default())
}

pub fn fit_family_with(pdf: &EmpiricalPdf, family: Family, opts: FitOptions) -> Result<FitResult> {
    let seed = family.moment_seed(pdf.mean(), pdf.variance());
    let seed_free = family.to_free(&seed);
    let objective = |free: &[f64]| -> f64 {
        let params = family.params_from_free(free);
        if !family.valid_params(&params) {
            return f64::INFINITY;
        }
        mse_curve(pdf, family, &params)
    };

    let mut starts: Vec<Vec<f64>> = vec![seed_free.clone()];
    for &(d0, d1) in JITTER.iter().cycle().take(opts.restarts.saturating_sub(1)) {
        let mut s = seed_free.clone();
        s[0] += d0;
        if s.len() > 1 {
            s[1] += d1;
        }
        starts.push(s);
    }
    starts.push(grid_start(&objective, &seed_free, opts));

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut any_converged = false;
    for start in &starts {
        let out = minimize(objective, start, opts.simplex);
        any_converged |= out.converged;
        if best.as_ref().is_none_or(|b| out.value < b.1) {
            best = Some((out.x, out.value));
        }
    }
    let (free, mse) = best.expect("at least one start");
    let result = FitResult {
        family,
        params: family.params_from_free(&free),
        mse,
    };
    if !any_converged
        || !mse.is_finite()
        || !family.valid_params(&result.params)
        || !keeps_mass(pdf, &result)
    {
        return Err(Error::FitNonConvergence {
            family: family.name(),
            restarts: starts.len(),
            best: Box::new(result),
        });
    }
    Ok(result)
}

// A fit whose density has slipped between the grid points (or blown up at
// one) can still be a simplex fixed point; reject it.
const MASS_TOLERANCE: f64 = 0.5;

fn keeps_mass(pdf: &EmpiricalPdf, fit: &FitResult) -> bool {
    let a = pdf.angles_deg();
    let fitted: f64 = a
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]) * (fit.pdf(w[0]) + fit.pdf(w[1])))
        .sum();
    (fitted / pdf.area() - 1.0).abs() <= MASS_TOLERANCE
}

fn grid_start(objective: &impl Fn(&[f64]) -> f64, center: &[f64], opts: FitOptions) -> Vec<f64> {
    let n = opts.grid_points.max(2);
    let offsets: Vec<f64> = (0..n)
        .map(|i| -opts.grid_half_width + 2.0 * opts.grid_half_width * i as f64 / (n - 1) as f64)
        .collect();
    let mut best = (center.to_vec(), objective(center));
    let second: &[f64] = if center.len() > 1 { &offsets } else { &[0.0] };
    for &o0 in &offsets {
        for &o1 in second {
            let mut p = center.to_vec();
            p[0] += o0;
            if p.len() > 1 {
                p[1] += o1;
            }
            let v = objective(&p);
            if v < best.1 {
                best = (p, v);
            }
        }
    }
    best.0
}

/// Outcome of [`rank_families`]: successful fits in ascending-MSE order, and
/// families whose fit failed.
#[derive(Debug)]
pub struct Ranking {
    pub ranked: Vec<FitResult>,
    pub failures: Vec<(Family, Error)>,
}

/// Fits each family (concurrently) and orders the fits by MSE, ties broken by family order.
pub fn rank_families(pdf: &EmpiricalPdf, families: &[Family]) -> Result<Ranking> {
    if families.is_empty() {
        return Err(Error::InvalidParameter("no families to rank".into()));
    }
    let mut families = families.to_vec();
    families.sort();
    families.dedup();
    let outcomes: Vec<(Family, Result<FitResult>)> = families
        .par_iter()
        .map(|&f| (f, fit_family(pdf, f)))
        .collect();
    let mut ranked = Vec::new();
    let mut failures = Vec::new();
    for (family, outcome) in outcomes {
        match outcome {
            Ok(fit) => ranked.push(fit),
            Err(e) => failures.push((family, e)),
        }
    }
    ranked.sort_by(|a, b| a.mse.total_cmp(&b.mse).then(a.family.cmp(&b.family)));
    Ok(Ranking { ranked, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weibull_curve(k: f64, lambda: f64) -> EmpiricalPdf {
        let angles: Vec<f64> = (0..=180).map(|i| i as f64 * 0.5).collect();
        EmpiricalPdf::from_fn(angles, |a| Family::Weibull.pdf(a, &[k, lambda])).unwrap()
    }

    #[test]
    fn mse_identities() {
        let pdf = weibull_curve(1.84, 15.61);
        assert_eq!(mse_curve(&pdf, Family::Weibull, &[1.84, 15.61]), 0.0);
        let eps = 1e-3;
        let shifted = EmpiricalPdf::new(
            pdf.angles_deg().to_vec(),
            pdf.densities().iter().map(|d| d + eps).collect(),
        )
        .unwrap();
        let mse = mse_curve(&shifted, Family::Weibull, &[1.84, 15.61]);
        assert!((mse - eps * eps).abs() < 1e-15, "{mse}");
    }

    #[test]
    fn weibull_round_trip() {
        let pdf = weibull_curve(1.84, 15.61);
        let fit = fit_family(&pdf, Family::Weibull).unwrap();
        assert!((fit.params[0] / 1.84 - 1.0).abs() < 5e-3, "{fit:?}");
        assert!((fit.params[1] / 15.61 - 1.0).abs() < 5e-3, "{fit:?}");
        assert!(fit.mse < 1e-9);
    }

    #[test]
    fn optimizer_never_worsens_seed() {
        let pdf = weibull_curve(1.84, 15.61);
        for f in Family::ALL {
            let seed = f.moment_seed(pdf.mean(), pdf.variance());
            let seed_mse = mse_curve(&pdf, f, &seed);
            if let Ok(fit) = fit_family(&pdf, f) {
                assert!(fit.mse <= seed_mse, "{f}");
            }
        }
    }

    #[test]
    fn single_family_ranking() {
        let pdf = weibull_curve(1.84, 15.61);
        let r = rank_families(&pdf, &[Family::Gamma]).unwrap();
        assert_eq!(r.ranked.len() + r.failures.len(), 1);
        assert!(rank_families(&pdf, &[]).is_err());
    }
}
