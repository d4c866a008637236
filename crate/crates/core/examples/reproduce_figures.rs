//! Regenerates the data behind every figure as CSV files.
//!
//! Usage: `reproduce_figures [out_dir]` (default `figures/`). Writes
//! `slope_pdfs.csv`, `wind_study.csv`, `misalignment_study.csv` and
//! `radiance_study.csv`. Capacity curves carry the quadrature value and a
//! seeded Monte-Carlo check at every range.

use std::path::PathBuf;
use std::time::Instant;

use airsea_owc::capacity::{ergodic_capacity_angle, monte_carlo_capacity};
use airsea_owc::fitting::RegressionKind;
use airsea_owc::presets::{misalignment_study, radiance_study, range_axis, wind_study, Curve};
use airsea_owc::quad::QuadSpec;
use airsea_owc::surface::{CoxMunkModel, ModifiedWeibullModel, SlopeModel};
use airsea_owc::table::{Provenance, ResultTable};
use rayon::prelude::*;

const MC_SAMPLES: usize = 200_000;
const SEED: u64 = 1;

fn provenance(what: &str, seed: Option<u64>) -> Provenance {
    Provenance {
        command: format!("reproduce_figures ({what})"),
        seed,
        scenario_hash: None,
        notes: Vec::new(),
    }
}

fn slope_pdfs() -> airsea_owc::Result<ResultTable> {
    let mut t = ResultTable::new(
        ["model", "U_mps", "angle_deg", "density_per_deg"],
        provenance("slope pdfs", None),
    );
    for u in [6.0, 10.0, 14.0] {
        let models = [
            ("cm", SlopeModel::CoxMunk(CoxMunkModel::from_wind(u)?)),
            (
                "mw",
                SlopeModel::ModifiedWeibull(ModifiedWeibullModel::from_wind(
                    u,
                    RegressionKind::Linear,
                )?),
            ),
            (
                "mw-power",
                SlopeModel::ModifiedWeibull(ModifiedWeibullModel::from_wind(
                    u,
                    RegressionKind::Power,
                )?),
            ),
        ];
        for (name, m) in &models {
            for i in 0..=240 {
                let a = i as f64 * 0.25;
                t.push(vec![
                    (*name).into(),
                    u.into(),
                    a.into(),
                    m.pdf_deg(a).into(),
                ])?;
            }
        }
    }
    Ok(t)
}

fn study(name: &str, curves: Vec<Curve>) -> airsea_owc::Result<ResultTable> {
    let mut t = ResultTable::new(
        ["curve", "Z_m", "c_erg_bpshz", "c_mc_bpshz", "mc_std_err"],
        provenance(name, Some(SEED)),
    );
    t.provenance
        .notes
        .push(format!("monte_carlo_samples: {MC_SAMPLES}"));
    let jobs: Vec<(&Curve, f64)> = curves
        .iter()
        .flat_map(|c| range_axis().into_iter().map(move |z| (c, z)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(c, z)| {
            let s = c.scenario.with_range(z)?;
            let q = ergodic_capacity_angle(&s, QuadSpec::default())?;
            let mc = monte_carlo_capacity(&s, MC_SAMPLES, SEED)?;
            Ok(vec![
                c.label.clone().into(),
                z.into(),
                q.c_erg.into(),
                mc.c_erg.into(),
                mc.std_error.into(),
            ])
        })
        .collect::<airsea_owc::Result<Vec<_>>>()?;
    for row in rows {
        t.push(row)?;
    }
    Ok(t)
}

fn main() -> airsea_owc::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    let start = Instant::now();
    let outputs = [
        ("slope_pdfs.csv", slope_pdfs()?),
        ("wind_study.csv", study("wind study", wind_study())?),
        (
            "misalignment_study.csv",
            study("misalignment study", misalignment_study())?,
        ),
        (
            "radiance_study.csv",
            study("radiance study", radiance_study())?,
        ),
    ];
    for (file, table) in &outputs {
        let path = dir.join(file);
        table.write_atomic(&path)?;
        println!("{:<28} {:>5} rows", path.display(), table.rows().len());
    }
    println!("done in {:.1?}", start.elapsed());
    Ok(())
}
