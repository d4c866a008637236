use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{instantaneous_capacity, CapacityEstimate, LinkScenario, Method};
use crate::channel::{channel_gain, snr};
use crate::error::{Error, Result};
use crate::surface::rx_sample;

/// Draws per chunk; each chunk owns the ChaCha stream numbered by its index.
pub const MC_CHUNK_SIZE: usize = 65_536;
pub const MIN_MC_SAMPLES: usize = 1_000;

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * self.n as f64 * other.n as f64 / n as f64;
        Moments { n, mean, m2 }
    }
}

/// Sample-mean ergodic capacity over `n` independent (φ_t, φ_r) draws.
///
/// Results depend only on `(scenario, n, seed)`: chunk `i` draws from stream
/// `i` of a ChaCha8 generator keyed by `seed`, and chunk moments are merged in
/// index order whatever the thread count. `p_in` is the exact in-FoV probability.
pub fn monte_carlo_capacity(
    scenario: &LinkScenario,
    n: usize,
    seed: u64,
) -> Result<CapacityEstimate> {
    if n < MIN_MC_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "Monte-Carlo needs at least {MIN_MC_SAMPLES} samples, got {n}"
        )));
    }
    let budget = scenario.budget()?;
    let fov = scenario.fov_deg();
    let chunks = n.div_ceil(MC_CHUNK_SIZE);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let len = MC_CHUNK_SIZE.min(n - chunk * MC_CHUNK_SIZE);
            let mut acc = Moments::default();
            for _ in 0..len {
                let tilt = scenario.slope_model.sample_deg(&mut rng);
                let inc = rx_sample(&mut rng, &scenario.rx_tilt);
                let h = channel_gain(budget.path_loss, tilt, inc, budget.lambertian_order, fov);
                acc.push(instantaneous_capacity(snr(h, &budget.noise)));
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(Moments::default(), Moments::merge);
    let variance = if total.n > 1 {
        total.m2 / (total.n - 1) as f64
    } else {
        0.0
    };
    let p_in = scenario.rx_tilt.cdf_deg(fov);
    Ok(CapacityEstimate {
        c_erg: total.mean.max(0.0),
        method: Method::MonteCarlo,
        p_in,
        p_out: 1.0 - p_in,
        std_error: Some((variance / total.n as f64).sqrt()),
        seed: Some(seed),
        samples: Some(n),
        warnings: scenario.warnings(),
    })
}
