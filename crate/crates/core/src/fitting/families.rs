use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Candidate parametric families for a tilt-angle density (angles in degrees).
///
/// The declaration order is the tie-break order used when ranking fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Lognormal,
    Gaussian,
    Exponential,
    Gamma,
    Weibull,
    BirnbaumSaunders,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Lognormal,
        Family::Gaussian,
        Family::Exponential,
        Family::Gamma,
        Family::Weibull,
        Family::BirnbaumSaunders,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Lognormal => "lognormal",
            Family::Gaussian => "gaussian",
            Family::Exponential => "exponential",
            Family::Gamma => "gamma",
            Family::Weibull => "weibull",
            Family::BirnbaumSaunders => "birnbaum-saunders",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Family::Exponential => 1,
            _ => 2,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Lognormal => &["mu", "sigma"],
            Family::Gaussian => &["mean", "sd"],
            Family::Exponential => &["rate"],
            Family::Gamma => &["shape", "scale"],
            Family::Weibull => &["shape", "scale"],
            Family::BirnbaumSaunders => &["alpha", "beta"],
        }
    }

    /// Whether `params` lie inside the family's domain.
    pub fn valid_params(self, params: &[f64]) -> bool {
        params.len() == self.arity()
            && params.iter().all(|p| p.is_finite())
            && match self {
                Family::Gaussian => params[1] > 0.0,
                _ => params.iter().all(|&p| p > 0.0),
            }
    }

    /// Density at `x` (degrees). Returns `+inf` where the density diverges.
    pub fn pdf(self, x: f64, params: &[f64]) -> f64 {
        match self {
            Family::Lognormal => {
                let (mu, sigma) = (params[0], params[1]);
                if x <= 0.0 {
                    return 0.0;
                }
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / (x * sigma * (2.0 * PI).sqrt())
            }
            Family::Gaussian => {
                let (mean, sd) = (params[0], params[1]);
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
            }
            Family::Exponential => {
                let rate = params[0];
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Family::Gamma => {
                let (shape, scale) = (params[0], params[1]);
                if x < 0.0 {
                    return 0.0;
                }
                if x == 0.0 {
                    return origin_value(shape, 1.0 / scale);
                }
                ((shape - 1.0) * x.ln() - x / scale - libm::lgamma(shape) - shape * scale.ln())
                    .exp()
            }
            Family::Weibull => {
                let (shape, scale) = (params[0], params[1]);
                if x < 0.0 {
                    return 0.0;
                }
                if x == 0.0 {
                    return origin_value(shape, 1.0 / scale);
                }
                let r = x / scale;
                shape / scale * r.powf(shape - 1.0) * (-r.powf(shape)).exp()
            }
            Family::BirnbaumSaunders => {
                let (alpha, beta) = (params[0], params[1]);
                if x <= 0.0 {
                    return 0.0;
                }
                let (s, t) = ((x / beta).sqrt(), (beta / x).sqrt());
                let z = (s - t) / alpha;
                (s + t) / (2.0 * alpha * x) * (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
            }
        }
    }

    /// Method-of-moments parameters matching `mean` and `variance` (degrees, degrees²).
    pub fn moment_seed(self, mean: f64, variance: f64) -> Vec<f64> {
        let mean = mean.max(1e-6);
        let variance = variance.max(1e-12);
        let cv2 = variance / (mean * mean);
        match self {
            Family::Lognormal => {
                let s2 = (1.0 + cv2).ln();
                vec![mean.ln() - 0.5 * s2, s2.sqrt()]
            }
            Family::Gaussian => vec![mean, variance.sqrt()],
            Family::Exponential => vec![1.0 / mean],
            Family::Gamma => vec![1.0 / cv2, variance / mean],
            Family::Weibull => {
                let cv2_of = |k: f64| {
                    let g1 = libm::tgamma(1.0 + 1.0 / k);
                    libm::tgamma(1.0 + 2.0 / k) / (g1 * g1) - 1.0
                };
                // cv² is decreasing in the shape parameter.
                let k = bisect(|k| cv2_of(k) - cv2, 0.2, 60.0);
                vec![k, mean / libm::tgamma(1.0 + 1.0 / k)]
            }
            Family::BirnbaumSaunders => {
                let cv2_of = |a: f64| {
                    let a2 = a * a;
                    a2 * (1.0 + 1.25 * a2) / (1.0 + 0.5 * a2).powi(2)
                };
                // cv² rises from 0 towards 5 as alpha grows.
                let alpha = bisect(|a| cv2 - cv2_of(a), 1e-4, 50.0);
                vec![alpha, mean / (1.0 + 0.5 * alpha * alpha)]
            }
        }
    }

    /// Maps parameters to unconstrained optimizer coordinates.
    pub(crate) fn to_free(self, params: &[f64]) -> Vec<f64> {
        match self {
            Family::Gaussian => vec![params[0], params[1].ln()],
            _ => params.iter().map(|p| p.ln()).collect(),
        }
    }

    pub(crate) fn params_from_free(self, free: &[f64]) -> Vec<f64> {
        match self {
            Family::Gaussian => vec![free[0], free[1].exp()],
            _ => free.iter().map(|p| p.exp()).collect(),
        }
    }
}

fn origin_value(shape: f64, unit_shape_value: f64) -> f64 {
    match shape.partial_cmp(&1.0) {
        Some(std::cmp::Ordering::Greater) => 0.0,
        Some(std::cmp::Ordering::Equal) => unit_shape_value,
        _ => f64::INFINITY,
    }
}

/// Root of a function that is positive at `lo` and negative at `hi`; clamps to an end otherwise.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    if f(lo) <= 0.0 {
        return lo;
    }
    if f(hi) >= 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        Ok(match key.as_str() {
            "lognormal" | "log-normal" => Family::Lognormal,
            "gaussian" | "normal" => Family::Gaussian,
            "exponential" | "exp" => Family::Exponential,
            "gamma" => Family::Gamma,
            "weibull" => Family::Weibull,
            "birnbaum-saunders" | "bs" | "b-s" => Family::BirnbaumSaunders,
            _ => return Err(Error::Config(format!("unknown distribution family `{s}`"))),
        })
    }
}
