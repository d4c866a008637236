//! Builds a scenario from TOML, evaluates it and prints the provenance hash.

use airsea_owc::capacity::{ergodic_capacity_angle, ergodic_capacity_gain};
use airsea_owc::config::ScenarioConfig;
use airsea_owc::quad::QuadSpec;

const SCENARIO: &str = r#"
Z_w = 15.0
Z_a = 25.0
FoV_deg = 30.0
slope_model = "cox-munk"
U = 8.0
sigma_r_deg = 5.0
L_t = 0.1
"#;

fn main() -> airsea_owc::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ScenarioConfig::load(path.as_ref())?,
        None => ScenarioConfig::from_toml_str(SCENARIO)?,
    };
    let scenario = cfg.to_scenario()?;
    println!("scenario sha256 {}", cfg.hash_hex());
    println!(
        "range {} m, slope model {}",
        scenario.geometry.range_m(),
        scenario.slope_model.name()
    );
    for w in scenario.warnings() {
        println!("warning: {w}");
    }
    let a = ergodic_capacity_angle(&scenario, QuadSpec::default())?;
    let g = ergodic_capacity_gain(&scenario, QuadSpec::default())?;
    println!("C = {:.6} (angle), {:.6} (gain density)", a.c_erg, g.c_erg);
    println!("\ncanonical form:\n{}", cfg.to_toml_string());
    Ok(())
}
