//! Spectrum-derived slope and elevation statistics against the Cox-Munk
//! slope variance.

use airsea_owc::eckv::{
    elevation_variance, mean_square_slope, significant_wave_height, EckvParams,
};

fn main() -> airsea_owc::Result<()> {
    println!(
        "{:>5} {:>9} {:>9} {:>7} {:>11} {:>7}",
        "U10", "mss", "CM s^2", "ratio", "eta^2 m^2", "Hs m"
    );
    for u in [3.0, 5.0, 8.0, 10.0, 12.0, 16.0] {
        let p = EckvParams::new(u)?;
        let mss = mean_square_slope(&p)?;
        let cm = 0.003 + 0.00512 * u;
        println!(
            "{u:>5} {mss:>9.5} {cm:>9.5} {:>7.3} {:>11.4e} {:>7.3}",
            mss / cm,
            elevation_variance(&p)?,
            significant_wave_height(&p)?
        );
    }
    let young = EckvParams::with_wave_age(10.0, 2.0)?;
    println!(
        "young sea (inverse wave age 2) at U10 = 10: mss {:.5}",
        mean_square_slope(&young)?
    );
    Ok(())
}
