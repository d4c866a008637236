//! The three ergodic-capacity evaluators on the same link.

use std::time::Instant;

use airsea_owc::capacity::{evaluate, Evaluation, LinkScenario, Method};

fn main() -> airsea_owc::Result<()> {
    let z: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(60.0);
    let scenario = LinkScenario::default().with_range(z)?;
    println!(
        "Z = {z} m, FoV = {} deg, sigma_r = {} deg",
        scenario.fov_deg(),
        scenario.rx_tilt.sigma_deg()
    );
    for method in [
        Method::AngleQuadrature,
        Method::GainDensity,
        Method::MonteCarlo,
    ] {
        let t = Instant::now();
        let est = evaluate(&scenario, &Evaluation::from_method(method, 1_000_000, 7))?;
        let se = est
            .std_error
            .map_or(String::new(), |s| format!(" +/- {s:.1e}"));
        println!(
            "{:<17} C = {:.6}{se:<12} bit/s/Hz  P_in = {:.4}  ({:.1?})",
            method.name(),
            est.c_erg,
            est.p_in,
            t.elapsed()
        );
    }
    Ok(())
}
