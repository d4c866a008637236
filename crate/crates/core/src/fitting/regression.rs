use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegressionKind {
    /// `y = a + b·x`
    Linear,
    /// `y = a·x^b`
    Power,
}

impl RegressionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegressionKind::Linear => "linear",
            RegressionKind::Power => "power",
        }
    }
}

impl fmt::Display for RegressionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegressionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(RegressionKind::Linear),
            "power" | "power-law" => Ok(RegressionKind::Power),
            other => Err(Error::Config(format!("unknown regression kind `{other}`"))),
        }
    }
}

/// A fitted wind-speed law: intercept/slope for [`RegressionKind::Linear`],
/// prefactor/exponent for [`RegressionKind::Power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionModel {
    pub kind: RegressionKind,
    pub a: f64,
    pub b: f64,
}

impl RegressionModel {
    pub fn linear(a: f64, b: f64) -> Self {
        Self {
            kind: RegressionKind::Linear,
            a,
            b,
        }
    }

    pub fn power(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power-law prefactor must be positive, got {a}"
            )));
        }
        Ok(Self {
            kind: RegressionKind::Power,
            a,
            b,
        })
    }

    pub fn predict(&self, x: f64) -> f64 {
        match self.kind {
            RegressionKind::Linear => self.a + self.b * x,
            RegressionKind::Power => self.a * x.powf(self.b),
        }
    }

    pub fn fit(kind: RegressionKind, points: &[(f64, f64)]) -> Result<Self> {
        match kind {
            RegressionKind::Linear => regress_linear(points),
            RegressionKind::Power => regress_power(points),
        }
    }
}

/// Ordinary least squares `y = a + b·x` in closed form.
pub fn regress_linear(points: &[(f64, f64)]) -> Result<RegressionModel> {
    if points.len() < 2 {
        return Err(Error::Singular(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) || sxx <= 1e-24 * points.iter().map(|p| p.0 * p.0).sum::<f64>() {
        return Err(Error::Singular("all abscissae are equal".into()));
    }
    let b = sxy / sxx;
    Ok(RegressionModel::linear(my - b * mx, b))
}

/// Least squares in log-log space: `ln y = ln a + b·ln x`.
pub fn regress_power_loglog(points: &[(f64, f64)]) -> Result<RegressionModel> {
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "power-law regression needs strictly positive data, got ({}, {})",
            p.0, p.1
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    let line = regress_linear(&logs)?;
    RegressionModel::power(line.a.exp(), line.b)
}

/// Least squares `y = a·x^b` minimizing residuals in the original units.
///
/// Gauss–Newton with step halving, started from the log-log estimate.
pub fn regress_power(points: &[(f64, f64)]) -> Result<RegressionModel> {
    let start = regress_power_loglog(points)?;
    let sse = |a: f64, b: f64| -> f64 {
        points
            .iter()
            .map(|&(x, y)| (y - a * x.powf(b)).powi(2))
            .sum()
    };
    let (mut a, mut b) = (start.a, start.b);
    let mut current = sse(a, b);
    for _ in 0..200 {
        // Normal equations for the linearized residual r ≈ r0 − J·δ.
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in points {
            let xb = x.powf(b);
            let da = xb;
            let db = a * xb * x.ln();
            let r = y - a * xb;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        let det = jaa * jbb - jab * jab;
        if !(det.abs() > 0.0) {
            break;
        }
        let da = (jbb * ga - jab * gb) / det;
        let db = (jaa * gb - jab * ga) / det;
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let (na, nb) = (a + t * da, b + t * db);
            let s = sse(na, nb);
            if na > 0.0 && s <= current {
                a = na;
                b = nb;
                improved = s < current;
                current = s;
                break;
            }
            t *= 0.5;
        }
        if !improved || (da.abs() <= 1e-15 * a.abs() && db.abs() <= 1e-15 * b.abs().max(1e-300)) {
            break;
        }
    }
    RegressionModel::power(a, b)
}

/// Mean absolute error between paired lists.
pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.is_empty() {
        return Err(Error::InvalidParameter("mae of empty input".into()));
    }
    if actual.len() != predicted.len() {
        return Err(Error::InvalidParameter(format!(
            "mae needs equal lengths, got {} and {}",
            actual.len(),
            predicted.len()
        )));
    }
    Ok(actual
        .iter()
        .zip(predicted)
        .map(|(a, p)| (a - p).abs())
        .sum::<f64>()
        / actual.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_through_two_points() {
        let m = regress_linear(&[(1.0, 1.0), (3.0, 3.0)]).unwrap();
        assert!(m.a.abs() < 1e-15 && (m.b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_abscissae_are_singular() {
        assert!(matches!(
            regress_linear(&[(2.0, 1.0), (2.0, 5.0), (2.0, 3.0)]),
            Err(Error::Singular(_))
        ));
        assert!(matches!(
            regress_linear(&[(2.0, 1.0)]),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 5.0, 9.0].iter().map(|&u| (u, 2.0 * u)).collect();
        let m = regress_power(&pts).unwrap();
        assert!((m.a - 2.0).abs() < 1e-14, "{m:?}");
        assert!((m.b - 1.0).abs() < 1e-14, "{m:?}");
    }

    #[test]
    fn power_rejects_non_positive() {
        assert!(regress_power(&[(1.0, 1.0), (2.0, 0.0)]).is_err());
        assert!(regress_power(&[(0.0, 1.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn nonlinear_fit_beats_loglog_in_linear_residuals() {
        let pts = [(1.0, 2.2), (2.0, 2.9), (4.0, 4.4), (8.0, 5.2)];
        let sse = |m: &RegressionModel| {
            pts.iter()
                .map(|&(x, y)| (y - m.predict(x)).powi(2))
                .sum::<f64>()
        };
        let nl = regress_power(&pts).unwrap();
        let ll = regress_power_loglog(&pts).unwrap();
        assert!(sse(&nl) <= sse(&ll));
    }

    #[test]
    fn mae_basics() {
        assert_eq!(mae(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((mae(&[1.0, 2.0], &[2.0, 0.0]).unwrap() - 1.5).abs() < 1e-15);
        assert!(mae(&[], &[]).is_err());
        assert!(mae(&[1.0], &[1.0, 2.0]).is_err());
    }
}
