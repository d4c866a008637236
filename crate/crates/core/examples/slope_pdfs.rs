//! Tilt-angle densities of the Cox-Munk and modified Weibull surface models
//! at three wind speeds, with their modes.

use airsea_owc::fitting::RegressionKind;
use airsea_owc::surface::{CoxMunkModel, ModifiedWeibullModel, SlopeModel};

fn main() -> airsea_owc::Result<()> {
    let winds = [6.0, 10.0, 14.0];
    let models: Vec<(String, SlopeModel)> = winds
        .iter()
        .flat_map(|&u| {
            [
                (
                    format!("CM U={u}"),
                    CoxMunkModel::from_wind(u).map(SlopeModel::CoxMunk),
                ),
                (
                    format!("MW U={u}"),
                    ModifiedWeibullModel::from_wind(u, RegressionKind::Linear)
                        .map(SlopeModel::ModifiedWeibull),
                ),
            ]
        })
        .map(|(name, m)| m.map(|m| (name, m)))
        .collect::<Result<_, _>>()?;

    print!("{:>6}", "deg");
    for (name, _) in &models {
        print!("{name:>11}");
    }
    println!();
    for step in 0..=12 {
        let a = 5.0 * step as f64;
        print!("{a:>6.1}");
        for (_, m) in &models {
            print!("{:>11.5}", m.pdf_deg(a));
        }
        println!();
    }

    println!();
    for (name, m) in &models {
        let mode = (0..=60_000)
            .map(|i| i as f64 * 1e-3)
            .max_by(|a, b| m.pdf_deg(*a).total_cmp(&m.pdf_deg(*b)))
            .unwrap();
        println!("{name:<9} mode {mode:6.2} deg");
    }
    Ok(())
}
