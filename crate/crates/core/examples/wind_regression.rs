//! Wind-speed laws for the Weibull shape and scale, calibrated from the
//! reference fits, with their mean absolute errors.

use airsea_owc::fitting::{mae, RegressionKind};
use airsea_owc::surface::{WeibullLaw, REFERENCE_WEIBULL_FITS};

fn main() -> airsea_owc::Result<()> {
    let fits = REFERENCE_WEIBULL_FITS;
    for kind in [RegressionKind::Linear, RegressionKind::Power] {
        let law = WeibullLaw::calibrate(&fits, kind)?;
        let form = match kind {
            RegressionKind::Linear => |a: f64, b: f64| format!("{a:.4} + {b:.4} U"),
            RegressionKind::Power => |a: f64, b: f64| format!("{a:.4} U^{b:.4}"),
        };
        let k_actual: Vec<f64> = fits.iter().map(|f| f.1).collect();
        let l_actual: Vec<f64> = fits.iter().map(|f| f.2).collect();
        let k_pred: Vec<f64> = fits.iter().map(|f| law.params(f.0).0).collect();
        let l_pred: Vec<f64> = fits.iter().map(|f| law.params(f.0).1).collect();
        println!("{} law", kind.name());
        println!(
            "  k      = {:<22} MAE {:.4}",
            form(law.shape.a, law.shape.b),
            mae(&k_actual, &k_pred)?
        );
        println!(
            "  lambda = {:<22} MAE {:.4}",
            form(law.scale_deg.a, law.scale_deg.b),
            mae(&l_actual, &l_pred)?
        );
        for (i, f) in fits.iter().enumerate() {
            println!(
                "    U={:>5}: k {:.4} -> {:.4}   lambda {:.4} -> {:.4}",
                f.0, f.1, k_pred[i], f.2, l_pred[i]
            );
        }
    }
    Ok(())
}
