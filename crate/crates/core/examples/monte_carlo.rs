//! Monte-Carlo convergence towards the quadrature value.

use airsea_owc::capacity::{ergodic_capacity_angle, monte_carlo_capacity, LinkScenario};
use airsea_owc::quad::QuadSpec;

fn main() -> airsea_owc::Result<()> {
    let scenario = LinkScenario::default().with_range(40.0)?;
    let exact = ergodic_capacity_angle(&scenario, QuadSpec::default())?.c_erg;
    println!("quadrature: {exact:.6}");
    println!("{:>9} {:>10} {:>10} {:>8}", "n", "C_mc", "SE", "z");
    for n in [1_000, 10_000, 100_000, 1_000_000, 4_000_000] {
        let est = monte_carlo_capacity(&scenario, n, 2024)?;
        let se = est.std_error.unwrap();
        println!(
            "{n:>9} {:>10.6} {se:>10.2e} {:>8.2}",
            est.c_erg,
            (est.c_erg - exact) / se
        );
    }
    Ok(())
}
