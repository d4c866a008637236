//! Elfouhaily unified directional wave spectrum and the slope statistics
//! derived from it.
//!
//! The directional spectrum is `ψ(k, φ) = S(k)·D(k, φ)/k` with `S` the
//! omnidirectional elevation-variance spectrum and `D` the angular spreading
//! function. Both pieces sit behind traits so other parameterizations can
//! reuse the log-grid integrals.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Wavenumber of the gravity-capillary spectral minimum, rad/m.
pub const K_M: f64 = 370.0;
/// Phase speed at `K_M`, m/s.
pub const C_M: f64 = 0.23;
pub const VON_KARMAN: f64 = 0.4;
/// Inverse wave age of a fully developed sea.
pub const FULLY_DEVELOPED: f64 = 0.84;
pub const STANDARD_GRAVITY: f64 = 9.81;
pub const INVERSE_WAVE_AGE_RANGE: (f64, f64) = (0.83, 5.0);

/// Omnidirectional elevation-variance spectrum `S(k)`, m³/rad.
pub trait OmnidirectionalSpectrum: Sync {
    fn spectrum(&self, k: f64) -> f64;
}

/// Angular spreading `D(k, φ)`, normalized over `φ ∈ [−π, π]`.
pub trait Spreading: Sync {
    fn spreading(&self, k: f64, phi: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EckvParams {
    pub wind_speed_mps: f64,
    pub inverse_wave_age: f64,
    pub gravity: f64,
}

impl EckvParams {
    pub fn new(wind_speed_mps: f64) -> Result<Self> {
        Self::with_wave_age(wind_speed_mps, FULLY_DEVELOPED)
    }

    pub fn with_wave_age(wind_speed_mps: f64, inverse_wave_age: f64) -> Result<Self> {
        let p = Self {
            wind_speed_mps,
            inverse_wave_age,
            gravity: STANDARD_GRAVITY,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wind_speed_mps > 0.0 && self.wind_speed_mps.is_finite()) {
            return Err(Error::domain(
                "wind speed U10",
                self.wind_speed_mps,
                "(0, inf) m/s",
            ));
        }
        let (lo, hi) = INVERSE_WAVE_AGE_RANGE;
        if !(lo..=hi).contains(&self.inverse_wave_age) {
            return Err(Error::domain(
                "inverse wave age",
                self.inverse_wave_age,
                "[0.83, 5]",
            ));
        }
        if !(self.gravity > 0.0 && self.gravity.is_finite()) {
            return Err(Error::domain("gravity", self.gravity, "(0, inf) m/s^2"));
        }
        Ok(())
    }
}

/// One point of the directional spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    /// rad/m
    pub k: f64,
    /// radians from the wind direction
    pub phi: f64,
    /// m⁴/rad
    pub psi: f64,
}

/// The Elfouhaily et al. unified spectrum with its own spreading function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElfouhailySpectrum {
    params: EckvParams,
    k_p: f64,
    c_p: f64,
    alpha_p: f64,
    alpha_m: f64,
    gamma: f64,
    sigma: f64,
    friction_velocity: f64,
}

impl ElfouhailySpectrum {
    pub fn new(params: EckvParams) -> Result<Self> {
        params.validate()?;
        let EckvParams {
            wind_speed_mps: u,
            inverse_wave_age: omega,
            gravity: g,
        } = params;
        let k_p = g * omega * omega / (u * u);
        let c_p = phase_speed(k_p, g);
        let z0 = 3.7e-5 * u * u / g * (u / c_p).powf(0.9);
        let friction_velocity = VON_KARMAN * u / (10.0 / z0).ln();
        let ratio = (friction_velocity / C_M).ln();
        // The light-wind branch turns negative below u* = c_m / e.
        let alpha_m = if friction_velocity < C_M {
            (1e-2 * (1.0 + ratio)).max(0.0)
        } else {
            1e-2 * (1.0 + 3.0 * ratio)
        };
        Ok(Self {
            params,
            k_p,
            c_p,
            alpha_p: 6e-3 * omega.sqrt(),
            alpha_m,
            gamma: if omega < 1.0 {
                1.7
            } else {
                1.7 + 6.0 * omega.log10()
            },
            sigma: 0.08 * (1.0 + 4.0 / omega.powi(3)),
            friction_velocity,
        })
    }

    pub fn params(&self) -> &EckvParams {
        &self.params
    }

    /// Spectral peak wavenumber, rad/m.
    pub fn peak_wavenumber(&self) -> f64 {
        self.k_p
    }

    /// Friction velocity u*, m/s.
    pub fn friction_velocity(&self) -> f64 {
        self.friction_velocity
    }

    pub fn phase_speed(&self, k: f64) -> f64 {
        phase_speed(k, self.params.gravity)
    }

    /// Long-wave and short-wave curvature spectra `(B_l, B_h)`.
    pub fn curvature(&self, k: f64) -> (f64, f64) {
        if !(k > 0.0) {
            return (0.0, 0.0);
        }
        let omega = self.params.inverse_wave_age;
        let c = self.phase_speed(k);
        let r = (k / self.k_p).sqrt() - 1.0;
        let l_pm = (-1.25 * (self.k_p / k).powi(2)).exp();
        let j_p = self
            .gamma
            .powf((-r * r / (2.0 * self.sigma * self.sigma)).exp());
        let f_p = l_pm * j_p * (-omega / 10f64.sqrt() * r).exp();
        let f_m = l_pm * j_p * (-0.25 * (k / K_M - 1.0).powi(2)).exp();
        (
            0.5 * self.alpha_p * self.c_p / c * f_p,
            0.5 * self.alpha_m * C_M / c * f_m,
        )
    }

    pub fn sample(&self, k: f64, phi: f64) -> SpectrumSample {
        SpectrumSample {
            k,
            phi,
            psi: psi(self, self, k, phi),
        }
    }
}

impl OmnidirectionalSpectrum for ElfouhailySpectrum {
    fn spectrum(&self, k: f64) -> f64 {
        if !(k > 0.0) || !k.is_finite() {
            return 0.0;
        }
        let (bl, bh) = self.curvature(k);
        let s = (bl + bh) / k.powi(3);
        if s.is_finite() {
            s
        } else {
            0.0
        }
    }
}

impl Spreading for ElfouhailySpectrum {
    fn spreading(&self, k: f64, phi: f64) -> f64 {
        let c = self.phase_speed(k);
        let a_m = 0.13 * self.friction_velocity / C_M;
        let delta =
            (LN_2 / 4.0 + 4.0 * (c / self.c_p).powf(2.5) + a_m * (C_M / c).powf(2.5)).tanh();
        (1.0 + delta * (2.0 * phi).cos()) / (2.0 * PI)
    }
}

/// Linear dispersion with surface tension, `c = √(g/k·(1 + (k/k_m)²))`.
pub fn phase_speed(k: f64, gravity: f64) -> f64 {
    (gravity / k * (1.0 + (k / K_M).powi(2))).sqrt()
}

/// `ψ(k, φ) = S(k)·D(k, φ)/k`.
pub fn psi(s: &impl OmnidirectionalSpectrum, d: &impl Spreading, k: f64, phi: f64) -> f64 {
    if !(k > 0.0) {
        return 0.0;
    }
    s.spectrum(k) * d.spreading(k, phi) / k
}

pub fn omnidirectional_spectrum(k: f64, params: &EckvParams) -> Result<f64> {
    Ok(ElfouhailySpectrum::new(*params)?.spectrum(k))
}

pub fn spreading(k: f64, phi: f64, params: &EckvParams) -> Result<f64> {
    Ok(ElfouhailySpectrum::new(*params)?.spreading(k, phi))
}

/// Log-spaced wavenumber grid for spectral moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub k_min: f64,
    pub k_max: f64,
    /// Starting resolution; doubled until converged.
    pub points_per_decade: usize,
    pub rel_tol: f64,
    pub max_doublings: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        Self {
            k_min: 1e-3,
            k_max: 1e5,
            points_per_decade: 16,
            rel_tol: 1e-4,
            max_doublings: 10,
        }
    }
}

impl LogGrid {
    fn validate(&self) -> Result<()> {
        if !(self.k_min > 0.0 && self.k_max > self.k_min && self.k_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "wavenumber grid needs 0 < k_min < k_max, got [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        if self.points_per_decade < 2 {
            return Err(Error::InvalidParameter(
                "need at least 2 points per decade".into(),
            ));
        }
        Ok(())
    }

    /// Composite Simpson in `ln k` at a fixed resolution. Each decade is a
    /// panel evaluated concurrently; panels are summed in order.
    pub fn simpson(&self, f: impl Fn(f64) -> f64 + Sync, points_per_decade: usize) -> f64 {
        let (a, b) = (self.k_min.ln(), self.k_max.ln());
        let panels = ((b - a) / 10f64.ln()).ceil().max(1.0) as usize;
        let width = (b - a) / panels as f64;
        let n = 2 * points_per_decade.div_ceil(2);
        let h = width / n as f64;
        let values: Vec<f64> = (0..panels)
            .into_par_iter()
            .map(|p| {
                let x0 = a + p as f64 * width;
                let g = |i: usize| {
                    let k = (x0 + i as f64 * h).exp();
                    k * f(k)
                };
                let mut s = g(0) + g(n);
                for i in 1..n {
                    s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i);
                }
                s * h / 3.0
            })
            .collect();
        values.iter().sum()
    }

    /// `∫ f(k) dk`, doubling the resolution until two successive estimates
    /// agree to `rel_tol`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
        self.validate()?;
        let mut ppd = self.points_per_decade;
        let mut partial = vec![self.simpson(&f, ppd)];
        for _ in 0..self.max_doublings {
            ppd *= 2;
            let next = self.simpson(&f, ppd);
            let prev = *partial.last().expect("non-empty");
            partial.push(next);
            if (next - prev).abs() <= self.rel_tol * next.abs() {
                return Ok(next);
            }
        }
        Err(Error::GridNonConvergence {
            doublings: self.max_doublings,
            partial,
        })
    }
}

/// Mean square slope `∫ k²·S(k) dk` of any omnidirectional spectrum.
pub fn mean_square_slope_of(s: &impl OmnidirectionalSpectrum, grid: &LogGrid) -> Result<f64> {
    grid.integrate(|k| k * k * s.spectrum(k))
}

/// Elevation variance `∫ S(k) dk`, m².
pub fn elevation_variance_of(s: &impl OmnidirectionalSpectrum, grid: &LogGrid) -> Result<f64> {
    grid.integrate(|k| s.spectrum(k))
}

pub fn mean_square_slope(params: &EckvParams) -> Result<f64> {
    mean_square_slope_of(&ElfouhailySpectrum::new(*params)?, &LogGrid::default())
}

pub fn elevation_variance(params: &EckvParams) -> Result<f64> {
    elevation_variance_of(&ElfouhailySpectrum::new(*params)?, &LogGrid::default())
}

/// `4·√variance`, metres.
pub fn significant_wave_height(params: &EckvParams) -> Result<f64> {
    Ok(4.0 * elevation_variance(params)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadSpec};

    fn spec10() -> ElfouhailySpectrum {
        ElfouhailySpectrum::new(EckvParams::new(10.0).unwrap()).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(EckvParams::new(0.0).is_err());
        assert!(EckvParams::with_wave_age(10.0, 0.5).is_err());
        assert!(EckvParams::with_wave_age(10.0, 5.0).is_ok());
        assert!(EckvParams::with_wave_age(10.0, 5.1).is_err());
    }

    #[test]
    fn spectrum_vanishes_at_both_ends() {
        let s = spec10();
        assert!(s.spectrum(1e-4) < 1e-30);
        assert!(s.spectrum(1e6) < 1e-20);
        assert_eq!(s.spectrum(0.0), 0.0);
        assert!(s.spectrum(s.peak_wavenumber()) > 0.0);
    }

    #[test]
    fn spreading_is_normalized_and_symmetric() {
        let s = spec10();
        for k in [0.01, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4] {
            let r = integrate(
                |p| s.spreading(k, p),
                -PI,
                PI,
                QuadSpec::default().with_rel_tol(1e-12),
            )
            .unwrap();
            assert!((r.value - 1.0).abs() < 1e-6, "k={k}");
            assert_eq!(s.spreading(k, 0.7), s.spreading(k, -0.7));
            assert!(s.spreading(k, 0.0) >= 0.0 && s.spreading(k, PI / 2.0) >= 0.0);
        }
        let kp = s.peak_wavenumber();
        assert!(s.spreading(kp, 0.0) > s.spreading(kp, PI / 2.0));
    }

    #[test]
    fn psi_composition() {
        let s = spec10();
        let k = 0.3;
        let slice = integrate(
            |p| psi(&s, &s, k, p) * k,
            -PI,
            PI,
            QuadSpec::default().with_rel_tol(1e-12),
        )
        .unwrap();
        assert!((slice.value - s.spectrum(k)).abs() < 1e-9 * s.spectrum(k));
        let sample = s.sample(k, 0.4);
        assert_eq!(sample.psi, s.spectrum(k) * s.spreading(k, 0.4) / k);
        assert!(s.sample(k, 0.0).psi >= s.sample(k, PI / 2.0).psi);
    }

    #[test]
    fn wave_height_at_ten_metres_per_second() {
        let hs = significant_wave_height(&EckvParams::new(10.0).unwrap()).unwrap();
        assert!((2.2..=2.7).contains(&hs), "{hs}");
    }

    #[test]
    fn mss_near_cox_munk_and_increasing() {
        let mut last = 0.0;
        for u in 3..=16 {
            let mss = mean_square_slope(&EckvParams::new(u as f64).unwrap()).unwrap();
            assert!(mss > last, "U={u}");
            last = mss;
        }
        for u in [5.0, 12.0] {
            let mss = mean_square_slope(&EckvParams::new(u).unwrap()).unwrap();
            let cm = 0.003 + 0.00512 * u;
            assert!((mss / cm - 1.0).abs() < 0.25, "U={u}: {mss} vs {cm}");
        }
    }

    #[test]
    fn grid_refinement_invariance() {
        let s = spec10();
        let grid = LogGrid::default();
        let f = |k: f64| k * k * s.spectrum(k);
        let a = grid.simpson(f, 64);
        let b = grid.simpson(f, 128);
        assert!((a - b).abs() < 1e-3 * b);
    }

    #[test]
    fn non_convergence_reports_partial_sums() {
        let grid = LogGrid {
            max_doublings: 1,
            rel_tol: 1e-15,
            points_per_decade: 2,
            ..LogGrid::default()
        };
        match mean_square_slope_of(&spec10(), &grid) {
            Err(Error::GridNonConvergence { doublings, partial }) => {
                assert_eq!(doublings, 1);
                assert_eq!(partial.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn light_wind_spectrum_stays_non_negative() {
        let p = EckvParams::new(0.5).unwrap();
        let s = ElfouhailySpectrum::new(p).unwrap();
        for i in 0..=80 {
            let k = 10f64.powf(-3.0 + 0.1 * i as f64);
            assert!(s.spectrum(k) >= 0.0, "S({k}) < 0");
        }
        assert!(mean_square_slope(&p).unwrap() > 0.0);
    }
}
