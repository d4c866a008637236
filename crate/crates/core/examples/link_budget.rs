//! Derived link-budget quantities of the baseline scenario at a few ranges
//! and both receiver fields of view.

use airsea_owc::capacity::LinkScenario;

fn main() -> airsea_owc::Result<()> {
    println!(
        "{:>5} {:>5} {:>9} {:>8} {:>11} {:>8} {:>10} {:>10}",
        "Z_m", "FoV", "K_eff", "g", "h_c", "Omega", "I_b_mA", "SNR_0"
    );
    for fov in [15.0, 30.0] {
        for z in [20.0, 60.0, 100.0] {
            let mut s = LinkScenario::default().with_range(z)?;
            s.rx.fov_deg = fov;
            let b = s.budget()?;
            println!(
                "{z:>5} {fov:>5} {:>9.4} {:>8.2} {:>11.4e} {:>8.4} {:>10.3} {:>10.3e}",
                b.k_eff_per_m,
                b.concentrator_gain,
                b.path_loss,
                b.solid_angle_sr,
                b.background_current_a * 1e3,
                b.snr_at(0.0, 0.0)
            );
        }
    }
    Ok(())
}
