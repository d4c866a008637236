//! Capacity along one axis of the baseline scenario, evaluated in parallel.
//!
//! Usage: `capacity_sweep [axis] [start:stop:step]`, e.g. `capacity_sweep U 6:14:2`.

use airsea_owc::capacity::{capacity_sweep, Evaluation, LinkScenario, Method, SweepAxis};
use airsea_owc::cli::parse_values;

fn main() -> airsea_owc::Result<()> {
    let mut args = std::env::args().skip(1);
    let axis: SweepAxis = args.next().as_deref().unwrap_or("Z").parse()?;
    let values = parse_values(args.next().as_deref().unwrap_or("10:100:10"))?;
    let how = Evaluation::from_method(Method::AngleQuadrature, 0, 0);
    for point in capacity_sweep(&LinkScenario::default(), axis, &values, &how)? {
        match point.estimate {
            Ok(e) => println!(
                "{}={:<8} C = {:.4} bit/s/Hz",
                axis.name(),
                point.axis_value,
                e.c_erg
            ),
            Err(err) => println!("{}={:<8} error: {err}", axis.name(), point.axis_value),
        }
    }
    Ok(())
}
