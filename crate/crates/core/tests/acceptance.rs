use std::io::Write;
use std::process::Command;
use std::time::Instant;

use airsea_owc::capacity::{
    ergodic_capacity_angle, ergodic_capacity_gain, monte_carlo_capacity, LinkScenario,
};
use airsea_owc::channel::{background_current, solid_angle, RxModel};
use airsea_owc::eckv::{mean_square_slope, EckvParams};
use airsea_owc::fitting::{
    rank_families, regress_linear, regress_power, EmpiricalPdf, Family, RegressionKind,
};
use airsea_owc::presets::{radiance_study, range_axis, wind_study};
use airsea_owc::quad::{integrate_piecewise, QuadSpec};
use airsea_owc::surface::{
    CoxMunkModel, ModifiedWeibullModel, RxTiltModel, SlopeModel, WeibullLaw, REFERENCE_WEIBULL_FITS,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn shape_points() -> Vec<(f64, f64)> {
    REFERENCE_WEIBULL_FITS.iter().map(|f| (f.0, f.1)).collect()
}

fn scale_points() -> Vec<(f64, f64)> {
    REFERENCE_WEIBULL_FITS.iter().map(|f| (f.0, f.2)).collect()
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn linear_regression() -> Outcome {
    let t = Instant::now();
    let k = regress_linear(&shape_points()).map_err(|e| e.to_string())?;
    let l = regress_linear(&scale_points()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let got = [round4(k.a), round4(k.b), round4(l.a), round4(l.b)];
    let want = [1.7454, 0.0071, 13.6485, 0.2406];
    check(
        got == want && elapsed.as_secs_f64() < 1e-3,
        format!(
            "k = {:.4} + {:.4}U, lambda = {:.4} + {:.4}U in {elapsed:?}",
            k.a, k.b, l.a, l.b
        ),
    )
}

fn power_regression() -> Outcome {
    let k = regress_power(&shape_points()).map_err(|e| e.to_string())?;
    let l = regress_power(&scale_points()).map_err(|e| e.to_string())?;
    let rel = |x: f64, y: f64| (x / y - 1.0).abs();
    let worst = [
        rel(k.a, 1.6506),
        rel(k.b, 0.0428),
        rel(l.a, 11.4724),
        rel(l.b, 0.1499),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    check(
        worst < 0.01,
        format!(
            "k = {:.4}U^{:.4}, lambda = {:.4}U^{:.4}, worst rel err {worst:.2e}",
            k.a, k.b, l.a, l.b
        ),
    )
}

fn weibull_table() -> Outcome {
    let expected: [(f64, [f64; 4]); 3] = [
        (6.1, [1.7887, 1.7835, 15.1160, 15.0444]),
        (8.7, [1.8071, 1.8108, 15.7415, 15.8668]),
        (15.2, [1.8532, 1.8546, 17.3053, 17.2509]),
    ];
    // Each printed entry must equal, to 4 d.p., the full-precision calibrated
    // law or the law with its coefficients rounded as printed.
    let mut mismatches = Vec::new();
    let mut from_rounded = 0;
    for (kind, col) in [(RegressionKind::Linear, 0), (RegressionKind::Power, 1)] {
        let calibrated =
            WeibullLaw::calibrate(&REFERENCE_WEIBULL_FITS, kind).map_err(|e| e.to_string())?;
        let rounded = WeibullLaw::published(kind);
        for (u, row) in expected {
            let (kc, lc) = calibrated.params(u);
            let (kr, lr) = rounded.params(u);
            for (name, c, r, want) in [("k", kc, kr, row[col]), ("lambda", lc, lr, row[col + 2])] {
                if round4(c) == want {
                    continue;
                }
                if round4(r) == want {
                    from_rounded += 1;
                } else {
                    mismatches.push(format!("{name} {kind:?} U={u}: {c:.5} vs {want}"));
                }
            }
        }
    }
    check(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("12/12 predicted entries match to 4 d.p. ({from_rounded} via the rounded coefficients)")
        } else {
            mismatches.join("; ")
        },
    )
}

fn link_budget_values() -> Outcome {
    let omega = solid_angle(30.0);
    let rx = RxModel::default();
    let ib = background_current(&rx, 0.025, 30.0);
    check(
        (omega / 0.2141 - 1.0).abs() < 5e-3 && (ib / 0.085 - 1.0).abs() < 1e-2,
        format!("Omega(30 deg) = {omega:.4} sr, I_b = {:.2} mA", ib * 1e3),
    )
}

fn route_scenarios() -> Vec<(String, LinkScenario)> {
    let mut out = Vec::new();
    let mut add = |label: &str, z: f64, f: &dyn Fn(&mut LinkScenario)| {
        let mut s = LinkScenario::default().with_range(z).unwrap();
        f(&mut s);
        out.push((format!("{label} Z={z}"), s));
    };
    let mw = |u: f64| {
        SlopeModel::ModifiedWeibull(
            ModifiedWeibullModel::from_wind(u, RegressionKind::Linear).unwrap(),
        )
    };
    let cm = |u: f64| SlopeModel::CoxMunk(CoxMunkModel::from_wind(u).unwrap());
    add("mw U6 fov15", 20.0, &|s| s.slope_model = mw(6.0));
    add("mw U14 fov15", 50.0, &|s| s.slope_model = mw(14.0));
    add("cm U6 fov30", 30.0, &|s| {
        s.slope_model = cm(6.0);
        s.rx.fov_deg = 30.0;
    });
    add("cm U14 fov30", 80.0, &|s| {
        s.slope_model = cm(14.0);
        s.rx.fov_deg = 30.0;
    });
    add("sigma20 m20 fov15", 50.0, &|s| {
        s.rx_tilt = RxTiltModel::new(20.0).unwrap()
    });
    add("sigma10 m40 fov30", 60.0, &|s| {
        s.tx.lambertian_order = 40.0;
        s.rx.fov_deg = 30.0;
    });
    add("sigma20 m40 fov30", 90.0, &|s| {
        s.tx.lambertian_order = 40.0;
        s.rx.fov_deg = 30.0;
        s.rx_tilt = RxTiltModel::new(20.0).unwrap();
    });
    add("Lt0.025 fov15", 60.0, &|_| {});
    add("Lt0.25 fov30", 60.0, &|s| {
        s.env.upwelling_radiance = 0.25;
        s.rx.fov_deg = 30.0;
    });
    add("Lt0.25 fov15", 100.0, &|s| s.env.upwelling_radiance = 0.25);
    out
}

fn route_equivalence() -> Outcome {
    let t = Instant::now();
    let mut worst_rel: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, (label, s)) in route_scenarios().iter().enumerate() {
        let a =
            ergodic_capacity_angle(s, QuadSpec::default()).map_err(|e| format!("{label}: {e}"))?;
        let g =
            ergodic_capacity_gain(s, QuadSpec::default()).map_err(|e| format!("{label}: {e}"))?;
        let mc = monte_carlo_capacity(s, 1_000_000, 1000 + i as u64)
            .map_err(|e| format!("{label}: {e}"))?;
        let rel = (a.c_erg - g.c_erg).abs() / a.c_erg;
        let z = (mc.c_erg - a.c_erg).abs() / mc.std_error.unwrap();
        worst_rel = worst_rel.max(rel);
        worst_z = worst_z.max(z);
        if rel > 1e-3 || z > 3.0 {
            failures.push(format!(
                "{label}: angle {:.5} gain {:.5} mc {:.5} ({z:.2} se)",
                a.c_erg, g.c_erg, mc.c_erg
            ));
        }
    }
    let elapsed = t.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        failures.push(format!("runtime {elapsed:?}"));
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("10 scenarios: angle/gain max rel diff {worst_rel:.1e}, MC max {worst_z:.2} se, {elapsed:.1?}")
        } else {
            failures.join("; ")
        },
    )
}

fn capacity_at(s: &LinkScenario, z: f64) -> f64 {
    ergodic_capacity_angle(&s.with_range(z).unwrap(), QuadSpec::default())
        .unwrap()
        .c_erg
}

fn crossing(a: &LinkScenario, b: &LinkScenario) -> Option<f64> {
    let d = |z: f64| capacity_at(a, z) - capacity_at(b, z);
    let grid: Vec<f64> = (4..=20).map(|i| 5.0 * i as f64).collect();
    let w = grid
        .windows(2)
        .find(|w| d(w[0]).signum() != d(w[1]).signum())?;
    let (mut lo, mut hi) = (w[0], w[1]);
    let sign_lo = d(lo).signum();
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if d(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn figure_values() -> Outcome {
    let base = LinkScenario::default();
    let narrow = capacity_at(&base, 60.0);
    let mut wide_s = base.clone();
    wide_s.rx.fov_deg = 30.0;
    let wide = capacity_at(&wide_s, 60.0);

    let mut a = base.clone();
    a.rx_tilt = RxTiltModel::new(20.0).unwrap();
    let mut b = a.clone();
    b.rx.fov_deg = 30.0;
    let cross = crossing(&a, &b);
    let cross_ok = cross.is_some_and(|z| (45.0..=70.0).contains(&z));
    check(
        (narrow - 5.0).abs() <= 0.75 && (wide - 3.0).abs() <= 0.75 && cross_ok,
        format!(
            "Z=60: {narrow:.3} (FoV 15), {wide:.3} (FoV 30); sigma_r=20 curves cross at Z = {}",
            cross.map_or("none".into(), |z| format!("{z:.1} m"))
        ),
    )
}

fn qualitative_trends() -> Outcome {
    let zs = range_axis();
    let mut failures = Vec::new();
    for curve in wind_study() {
        let c: Vec<f64> = zs
            .iter()
            .map(|&z| capacity_at(&curve.scenario, z))
            .collect();
        if !c.windows(2).all(|w| w[1] < w[0]) {
            failures.push(format!("{} not strictly decreasing: {c:.3?}", curve.label));
        }
    }
    let radiance = radiance_study();
    for fov in [15.0, 30.0] {
        let low = radiance
            .iter()
            .find(|c| c.scenario.env.upwelling_radiance == 0.025 && c.scenario.rx.fov_deg == fov)
            .unwrap();
        let high = radiance
            .iter()
            .find(|c| c.scenario.env.upwelling_radiance == 0.25 && c.scenario.rx.fov_deg == fov)
            .unwrap();
        for &z in &zs {
            let (l, h) = (
                capacity_at(&low.scenario, z),
                capacity_at(&high.scenario, z),
            );
            if h >= l {
                failures.push(format!("FoV {fov} Z {z}: L_t=0.25 gives {h:.4} >= {l:.4}"));
            }
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "6 wind-study curves strictly decreasing over Z=10..100; L_t x10 lowers capacity at all 20 points".into()
        } else {
            failures.join("; ")
        },
    )
}

fn grid_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| lo + i as f64 * step)
        .max_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap()
}

fn surface_statistics() -> Outcome {
    let cm = |u: f64| SlopeModel::CoxMunk(CoxMunkModel::from_wind(u).unwrap());
    let mw =
        |u: f64, k| SlopeModel::ModifiedWeibull(ModifiedWeibullModel::from_wind(u, k).unwrap());
    let mode = |m: &SlopeModel| grid_argmax(|a| m.pdf_deg(a), 0.0, 60.0, 1e-3);
    let (cm6, cm14) = (mode(&cm(6.0)), mode(&cm(14.0)));
    let (mw6, mw14) = (
        mode(&mw(6.0, RegressionKind::Linear)),
        mode(&mw(14.0, RegressionKind::Linear)),
    );
    let modes_ok = (10.0..=12.0).contains(&cm6)
        && (15.0..=18.0).contains(&cm14)
        && (9.0..=11.0).contains(&mw6)
        && (10.0..=12.0).contains(&mw14);
    let mut worst_mass: f64 = 0.0;
    for u in [6.0, 10.0, 14.0] {
        for m in [
            cm(u),
            mw(u, RegressionKind::Linear),
            mw(u, RegressionKind::Power),
        ] {
            let r = integrate_piecewise(
                |a| m.pdf_deg(a),
                &m.breakpoints_deg(),
                QuadSpec::default().with_rel_tol(1e-10),
            )
            .map_err(|e| e.to_string())?;
            worst_mass = worst_mass.max((r.value - 1.0).abs());
        }
    }
    check(
        modes_ok && worst_mass <= 1e-6,
        format!("modes CM {cm6:.2}->{cm14:.2} deg, MW {mw6:.2}->{mw14:.2} deg; max |mass-1| = {worst_mass:.1e}"),
    )
}

fn fitting_round_trip() -> Outcome {
    let (k, lambda) = (1.84, 15.61);
    let angles: Vec<f64> = (0..=180).map(|i| i as f64 * 0.5).collect();
    let pdf = EmpiricalPdf::from_fn(angles, |a| Family::Weibull.pdf(a, &[k, lambda]))
        .map_err(|e| e.to_string())?;
    let ranking = rank_families(&pdf, &Family::ALL).map_err(|e| e.to_string())?;
    let best = ranking.ranked.first().ok_or("no family fitted")?;
    let ok = best.family == Family::Weibull
        && (best.params[0] / k - 1.0).abs() < 5e-3
        && (best.params[1] / lambda - 1.0).abs() < 5e-3
        && best.mse < 1e-8;
    let order: Vec<&str> = ranking.ranked.iter().map(|f| f.family.name()).collect();
    check(
        ok,
        format!(
            "first {} (k={:.4}, lambda={:.4}, mse={:.1e}); order {}",
            best.family,
            best.params[0],
            best.params[1],
            best.mse,
            order.join(" < ")
        ),
    )
}

fn spectrum_cross_check() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for u in [5.0, 8.0, 12.0] {
        let mss = mean_square_slope(&EckvParams::new(u).unwrap()).map_err(|e| e.to_string())?;
        let cm = 0.003 + 0.00512 * u;
        ok &= (mss / cm - 1.0).abs() <= 0.25;
        detail.push(format!("U={u}: {mss:.4}/{cm:.4}"));
    }
    let scan: Vec<f64> = (3..=16)
        .map(|u| mean_square_slope(&EckvParams::new(u as f64).unwrap()).unwrap())
        .collect();
    let monotone = scan.windows(2).all(|w| w[1] > w[0]);
    check(
        ok && monotone,
        format!("{}; monotone over U=3..16: {monotone}", detail.join(", ")),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_airsea-owc"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 3] = [
        &[
            "--seed",
            "11",
            "--samples",
            "200000",
            "--threads",
            "2",
            "mc",
            "--sizes",
            "10000,200000",
        ],
        &[
            "--seed",
            "11",
            "--samples",
            "50000",
            "--threads",
            "2",
            "sweep",
            "--axis",
            "Z",
            "--values",
            "20,60,100",
            "--method",
            "mc",
        ],
        &[
            "--seed",
            "11",
            "--samples",
            "100000",
            "--threads",
            "2",
            "capacity",
            "--method",
            "mc",
        ],
    ];
    for args in commands {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        if first != second {
            return Err(format!("{args:?} differs between runs"));
        }
    }
    // The thread count does not enter the result either.
    let one = run_cli(&[
        "--seed",
        "5",
        "--samples",
        "300000",
        "--threads",
        "1",
        "capacity",
        "--method",
        "mc",
    ])?;
    let four = run_cli(&[
        "--seed",
        "5",
        "--samples",
        "300000",
        "--threads",
        "4",
        "capacity",
        "--method",
        "mc",
    ])?;
    let body = |b: &[u8]| {
        String::from_utf8_lossy(b)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    check(
        body(&one) == body(&four),
        "3 Monte-Carlo commands byte-identical on rerun; table body identical for 1 and 4 threads"
            .into(),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("linear wind regression", linear_regression),
        ("power-law wind regression", power_regression),
        ("Weibull parameter table", weibull_table),
        ("link-budget constants", link_budget_values),
        ("route equivalence", route_equivalence),
        ("reference capacity values", figure_values),
        ("qualitative trends", qualitative_trends),
        ("surface-model statistics", surface_statistics),
        ("fitting round trip", fitting_round_trip),
        ("spectrum slope cross-check", spectrum_cross_check),
        ("Monte-Carlo determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(i + 1);
                ("FAIL", d)
            }
        };
        writeln!(err, "{tag} {:>2} {name}: {detail}", i + 1).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
