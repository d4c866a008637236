//! Command implementations behind the `airsea-owc` binary. Each returns a
//! [`ResultTable`] so the commands can also be driven from code.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::capacity::{
    capacity_sweep, ergodic_capacity_angle, evaluate, monte_carlo_capacity, Evaluation,
    LinkScenario, Method, SweepAxis,
};
use crate::channel::{background_current, solid_angle};
use crate::config::ScenarioConfig;
use crate::eckv::{mean_square_slope, EckvParams};
use crate::error::{Error, Result};
use crate::fitting::{mae, rank_families, EmpiricalPdf, Family, RegressionKind};
use crate::quad::QuadSpec;
use crate::surface::{
    CoxMunkModel, ModifiedWeibullModel, SlopeModel, WeibullLaw, REFERENCE_WEIBULL_FITS,
};
use crate::table::{Cell, Provenance, ResultTable};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_WINDS: [f64; 3] = [6.0, 10.0, 14.0];

/// Global options shared by every command.
#[derive(Debug, Clone)]
pub struct RunContext {
    /// Command line echoed into the provenance header.
    pub command: String,
    pub config: ScenarioConfig,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunContext {
    fn default() -> Self {
        Self {
            command: String::new(),
            config: ScenarioConfig::default(),
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl RunContext {
    pub fn new(
        command: impl Into<String>,
        config_path: Option<&Path>,
        seed: u64,
        samples: usize,
    ) -> Result<Self> {
        let config = match config_path {
            Some(p) => ScenarioConfig::load(p)?,
            None => ScenarioConfig::default(),
        };
        Ok(Self {
            command: command.into(),
            config,
            seed,
            samples,
        })
    }

    pub fn scenario(&self) -> Result<LinkScenario> {
        self.config.to_scenario()
    }

    fn provenance(&self, seed: Option<u64>, input_hash: Option<String>) -> Provenance {
        Provenance {
            command: self.command.clone(),
            seed,
            scenario_hash: input_hash,
            notes: Vec::new(),
        }
    }

    fn scenario_provenance(&self, seed: Option<u64>, scenario: &LinkScenario) -> Provenance {
        let mut p = self.provenance(seed, Some(self.config.hash_hex()));
        p.notes.extend(
            scenario
                .warnings()
                .into_iter()
                .map(|w| format!("warning: {w}")),
        );
        p
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Parses `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::Config(format!("cannot parse values `{spec}`: {what}"));
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("`{}` is not a number", s.trim())))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("ranges are start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(bad("too many points"));
        }
        return Ok((0..=n).map(|i| start + i as f64 * step).collect());
    }
    let values = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(num)
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(bad("no values"));
    }
    Ok(values)
}

/// Tilt model families offered by `slope-pdf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeKind {
    CoxMunk,
    ModifiedWeibull,
    ModifiedWeibullPower,
}

impl SlopeKind {
    pub fn name(self) -> &'static str {
        match self {
            SlopeKind::CoxMunk => "cox-munk",
            SlopeKind::ModifiedWeibull => "modified-weibull",
            SlopeKind::ModifiedWeibullPower => "modified-weibull-power",
        }
    }

    pub fn at_wind(self, wind_speed_mps: f64) -> Result<SlopeModel> {
        Ok(match self {
            SlopeKind::CoxMunk => SlopeModel::CoxMunk(CoxMunkModel::from_wind(wind_speed_mps)?),
            SlopeKind::ModifiedWeibull => SlopeModel::ModifiedWeibull(
                ModifiedWeibullModel::from_wind(wind_speed_mps, RegressionKind::Linear)?,
            ),
            SlopeKind::ModifiedWeibullPower => SlopeModel::ModifiedWeibull(
                ModifiedWeibullModel::from_wind(wind_speed_mps, RegressionKind::Power)?,
            ),
        })
    }
}

impl fmt::Display for SlopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SlopeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cm" | "cox-munk" => Ok(SlopeKind::CoxMunk),
            "mw" | "modified-weibull" => Ok(SlopeKind::ModifiedWeibull),
            "mw-power" | "modified-weibull-power" => Ok(SlopeKind::ModifiedWeibullPower),
            other => Err(Error::Config(format!(
                "unknown slope model `{other}` (expected cm, mw or mw-power)"
            ))),
        }
    }
}

/// Tilt PDFs (per degree) on `grid_deg` for every model and wind speed.
pub fn cmd_slope_pdf(
    ctx: &RunContext,
    models: &[SlopeKind],
    winds: &[f64],
    grid_deg: &[f64],
) -> Result<ResultTable> {
    if models.is_empty() || winds.is_empty() || grid_deg.is_empty() {
        return Err(Error::Config(
            "slope-pdf needs at least one model, wind speed and angle".into(),
        ));
    }
    if let Some(a) = grid_deg.iter().find(|a| !(0.0..=90.0).contains(*a)) {
        return Err(Error::Config(format!("angle {a} outside [0, 90] degrees")));
    }
    let mut t = ResultTable::new(
        ["model", "U_mps", "angle_deg", "density_per_deg"],
        ctx.provenance(None, None),
    );
    for &kind in models {
        for &u in winds {
            let model = kind.at_wind(u)?;
            if let Some(w) = model.warning() {
                t.provenance.notes.push(format!("warning: {w}"));
            }
            for &a in grid_deg {
                t.push(vec![
                    kind.name().into(),
                    u.into(),
                    a.into(),
                    model.pdf_deg(a).into(),
                ])?;
            }
        }
    }
    Ok(t)
}

/// Fits and ranks `families` against the tilt PDF in `input`.
pub fn cmd_fit(ctx: &RunContext, input: &Path, families: &[Family]) -> Result<ResultTable> {
    let bytes = std::fs::read(input)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", input.display())))?;
    let pdf = EmpiricalPdf::from_csv_reader(bytes.as_slice(), input)?;
    let families = if families.is_empty() {
        &Family::ALL[..]
    } else {
        families
    };
    let ranking = rank_families(&pdf, families)?;
    let mut t = ResultTable::new(
        ["family", "param1", "param2", "mse", "rank"],
        ctx.provenance(None, Some(sha256_hex(&bytes))),
    );
    for (i, fit) in ranking.ranked.iter().enumerate() {
        t.push(vec![
            fit.family.name().into(),
            fit.params[0].into(),
            fit.params.get(1).copied().into(),
            fit.mse.into(),
            (i + 1).into(),
        ])?;
    }
    for (family, err) in &ranking.failures {
        t.provenance.notes.push(format!("failed: {family}: {err}"));
    }
    Ok(t)
}

/// Reads `(U, k, λ)` triples from a CSV with header `U,k,lambda`.
pub fn read_weibull_fits(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_error(path, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["U", "k", "lambda"] {
        return Err(parse_error(
            path,
            1,
            format!("expected header U,k,lambda, found {}", header.join(",")),
        ));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record
            .map_err(|e| parse_error(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| -> Result<f64> {
            record
                .get(i)
                .ok_or_else(|| parse_error(path, line, "missing field".into()))?
                .parse()
                .map_err(|_| parse_error(path, line, format!("`{}` is not a number", &record[i])))
        };
        out.push((cell(0)?, cell(1)?, cell(2)?));
    }
    Ok(out)
}

fn parse_error(path: &Path, line: u64, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}

/// Linear and power wind laws for the Weibull shape and scale, with their MAE.
pub fn cmd_regress(ctx: &RunContext, input: Option<&Path>) -> Result<ResultTable> {
    let (fits, hash) = match input {
        Some(p) => {
            let bytes = std::fs::read(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            (read_weibull_fits(p)?, Some(sha256_hex(&bytes)))
        }
        None => (REFERENCE_WEIBULL_FITS.to_vec(), None),
    };
    let mut t = ResultTable::new(
        ["quantity", "law", "a", "b", "mae"],
        ctx.provenance(None, hash),
    );
    for kind in [RegressionKind::Linear, RegressionKind::Power] {
        let law = WeibullLaw::calibrate(&fits, kind)?;
        for (name, model, actual) in [
            ("k", law.shape, fits.iter().map(|f| f.1).collect::<Vec<_>>()),
            (
                "lambda_deg",
                law.scale_deg,
                fits.iter().map(|f| f.2).collect(),
            ),
        ] {
            let predicted: Vec<f64> = fits.iter().map(|f| model.predict(f.0)).collect();
            t.push(vec![
                name.into(),
                kind.name().into(),
                model.a.into(),
                model.b.into(),
                mae(&actual, &predicted)?.into(),
            ])?;
        }
    }
    Ok(t)
}

/// Audit of every derived link-budget quantity for the configured scenario.
pub fn cmd_link_budget(ctx: &RunContext) -> Result<ResultTable> {
    let scenario = ctx.scenario()?;
    let b = scenario.budget()?;
    let mut t = ResultTable::new(
        ["quantity", "value", "unit"],
        ctx.scenario_provenance(None, &scenario),
    );
    let fov = scenario.fov_deg();
    let ref_fov = 30.0;
    let rows: [(&str, f64, &str); 13] = [
        ("Z", scenario.geometry.range_m(), "m"),
        ("FoV", fov, "deg"),
        ("K_eff", b.k_eff_per_m, "1/m"),
        ("g", b.concentrator_gain, "1"),
        ("h_c", b.path_loss, "1"),
        ("Omega", b.solid_angle_sr, "sr"),
        ("I_b", b.background_current_a, "A"),
        ("Omega_FoV30", solid_angle(ref_fov), "sr"),
        (
            "I_b_FoV30",
            background_current(&scenario.rx, scenario.env.upwelling_radiance, ref_fov),
            "A",
        ),
        ("mu", b.noise.mu, "V/W"),
        ("alpha", b.noise.alpha, "V^2"),
        ("beta", b.noise.beta, "V^2"),
        ("P_in", scenario.rx_tilt.cdf_deg(fov), "1"),
    ];
    for (q, v, u) in rows {
        t.push(vec![q.into(), v.into(), u.into()])?;
    }
    Ok(t)
}

fn estimate_row(axis_value: Option<f64>, est: &crate::capacity::CapacityEstimate) -> Vec<Cell> {
    vec![
        axis_value.into(),
        est.c_erg.into(),
        est.p_in.into(),
        est.std_error.into(),
        est.method.name().into(),
        est.seed.into(),
    ]
}

const CAPACITY_COLUMNS: [&str; 6] = [
    "axis_value",
    "c_erg_bpshz",
    "p_in",
    "std_err",
    "method",
    "seed",
];

/// Ergodic capacity of the configured scenario.
pub fn cmd_capacity(ctx: &RunContext, method: Method) -> Result<ResultTable> {
    let scenario = ctx.scenario()?;
    let how = Evaluation::from_method(method, ctx.samples, ctx.seed);
    let est = evaluate(&scenario, &how)?;
    let seed = (method == Method::MonteCarlo).then_some(ctx.seed);
    let mut t = ResultTable::new(CAPACITY_COLUMNS, ctx.scenario_provenance(seed, &scenario));
    t.push(estimate_row(None, &est))?;
    Ok(t)
}

/// Capacity along one scenario axis; failing points fill the `error` column.
pub fn cmd_sweep(
    ctx: &RunContext,
    axis: SweepAxis,
    values: &[f64],
    method: Method,
) -> Result<ResultTable> {
    let scenario = ctx.scenario()?;
    let how = Evaluation::from_method(method, ctx.samples, ctx.seed);
    let points = capacity_sweep(&scenario, axis, values, &how)?;
    let seed = (method == Method::MonteCarlo).then_some(ctx.seed);
    let mut p = ctx.scenario_provenance(seed, &scenario);
    p.notes.push(format!("axis: {}", axis.name()));
    let mut columns = CAPACITY_COLUMNS.to_vec();
    columns.push("error");
    let mut t = ResultTable::new(columns, p);
    for point in points {
        match &point.estimate {
            Ok(est) => {
                let mut row = estimate_row(Some(point.axis_value), est);
                row.push(Cell::Empty);
                t.push(row)?;
            }
            Err(e) => t.push(vec![
                point.axis_value.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                method.name().into(),
                seed.into(),
                e.to_string().into(),
            ])?,
        }
    }
    Ok(t)
}

/// Monte-Carlo estimates at each sample size, with the quadrature value and
/// the deviation in standard errors.
pub fn cmd_mc(ctx: &RunContext, sample_sizes: &[usize]) -> Result<ResultTable> {
    let scenario = ctx.scenario()?;
    let reference = ergodic_capacity_angle(&scenario, QuadSpec::default())?.c_erg;
    let sizes = if sample_sizes.is_empty() {
        &[ctx.samples][..]
    } else {
        sample_sizes
    };
    let mut t = ResultTable::new(
        [
            "samples",
            "seed",
            "c_erg_bpshz",
            "std_err",
            "c_erg_quadrature",
            "z_score",
        ],
        ctx.scenario_provenance(Some(ctx.seed), &scenario),
    );
    for &n in sizes {
        let est = monte_carlo_capacity(&scenario, n, ctx.seed)?;
        let se = est.std_error.unwrap_or(0.0);
        let z = if se > 0.0 {
            (est.c_erg - reference) / se
        } else {
            0.0
        };
        t.push(vec![
            n.into(),
            ctx.seed.into(),
            est.c_erg.into(),
            se.into(),
            reference.into(),
            z.into(),
        ])?;
    }
    Ok(t)
}

/// Spectrum mean square slope against the Cox-Munk slope variance.
pub fn cmd_eckv_mss(ctx: &RunContext, winds: &[f64], inverse_wave_age: f64) -> Result<ResultTable> {
    if winds.is_empty() {
        return Err(Error::Config(
            "eckv-mss needs at least one wind speed".into(),
        ));
    }
    let mut t = ResultTable::new(
        ["U10", "mss", "cox_munk_sigma2", "ratio"],
        ctx.provenance(None, None),
    );
    t.provenance
        .notes
        .push(format!("inverse_wave_age: {inverse_wave_age}"));
    for &u in winds {
        let mss = mean_square_slope(&EckvParams::with_wave_age(u, inverse_wave_age)?)?;
        let cm = CoxMunkModel::from_wind(u)?.slope_variance();
        t.push(vec![u.into(), mss.into(), cm.into(), (mss / cm).into()])?;
    }
    Ok(t)
}

/// Writes `table` atomically to `out`, or to stdout when `out` is `None`.
pub fn emit(table: &ResultTable, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => table.write_atomic(path),
        None => table.write_to(std::io::stdout().lock()),
    }
}
