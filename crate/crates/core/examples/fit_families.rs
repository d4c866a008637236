//! Fits six candidate families to a modified Weibull tilt curve and ranks
//! them by mean squared error.

use airsea_owc::fitting::{rank_families, EmpiricalPdf, Family, RegressionKind};
use airsea_owc::surface::{ModifiedWeibullModel, SlopeModel};

fn main() -> airsea_owc::Result<()> {
    let u = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10.0);
    let model =
        SlopeModel::ModifiedWeibull(ModifiedWeibullModel::from_wind(u, RegressionKind::Linear)?);
    let angles: Vec<f64> = (0..=180).map(|i| i as f64 * 0.5).collect();
    let curve = EmpiricalPdf::from_fn(angles, |a| model.pdf_deg(a))?;

    let ranking = rank_families(&curve, &Family::ALL)?;
    println!(
        "tilt curve at U = {u} m/s, {} points, area {:.6}",
        curve.len(),
        curve.area()
    );
    println!(
        "{:<4}{:<20}{:>24}{:>12}",
        "#", "family", "parameters", "mse"
    );
    for (i, fit) in ranking.ranked.iter().enumerate() {
        let params: Vec<String> = fit
            .family
            .param_names()
            .iter()
            .zip(&fit.params)
            .map(|(n, v)| format!("{n}={v:.4}"))
            .collect();
        println!(
            "{:<4}{:<20}{:>24}{:>12.3e}",
            i + 1,
            fit.family.name(),
            params.join(" "),
            fit.mse
        );
    }
    for (family, err) in &ranking.failures {
        println!("failed: {family}: {err}");
    }
    Ok(())
}
