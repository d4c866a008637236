use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 2] = ["angle_deg", "density_per_deg"];

/// A sampled tilt-angle density curve: angles in degrees (strictly ascending),
/// densities in 1/degree.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPdf {
    angles_deg: Vec<f64>,
    densities: Vec<f64>,
    metadata: BTreeMap<String, String>,
}

impl EmpiricalPdf {
    pub const MIN_POINTS: usize = 8;
    pub const AREA_RANGE: (f64, f64) = (0.9, 1.1);

    pub fn new(angles_deg: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if angles_deg.len() != densities.len() {
            return Err(Error::InvalidParameter(format!(
                "{} angles but {} densities",
                angles_deg.len(),
                densities.len()
            )));
        }
        if angles_deg.len() < Self::MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "empirical pdf needs at least {} points, got {}",
                Self::MIN_POINTS,
                angles_deg.len()
            )));
        }
        if angles_deg.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("non-finite angle".into()));
        }
        if let Some(w) = angles_deg.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(format!(
                "angles must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(d) = densities.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density {d} is negative or non-finite"
            )));
        }
        let pdf = Self {
            angles_deg,
            densities,
            metadata: BTreeMap::new(),
        };
        let area = pdf.area();
        if !(Self::AREA_RANGE.0..=Self::AREA_RANGE.1).contains(&area) {
            return Err(Error::InvalidParameter(format!(
                "trapezoidal area {area:.4} outside [{}, {}]",
                Self::AREA_RANGE.0,
                Self::AREA_RANGE.1
            )));
        }
        Ok(pdf)
    }

    /// Samples `density` on `angles_deg`.
    pub fn from_fn(angles_deg: Vec<f64>, density: impl Fn(f64) -> f64) -> Result<Self> {
        let densities = angles_deg.iter().map(|&a| density(a)).collect();
        Self::new(angles_deg, densities)
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_deg.is_empty()
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    /// Returns a copy with every density multiplied by `factor` (no re-validation of area).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            densities: self.densities.iter().map(|d| d * factor).collect(),
            ..self.clone()
        }
    }

    pub fn area(&self) -> f64 {
        self.trapezoid(|_, d| d)
    }

    pub fn mean(&self) -> f64 {
        self.trapezoid(|a, d| a * d) / self.area()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.trapezoid(|a, d| (a - mean).powi(2) * d) / self.area()
    }

    /// Median grid spacing in degrees.
    pub fn resolution_deg(&self) -> f64 {
        let mut steps: Vec<f64> = self.angles_deg.windows(2).map(|w| w[1] - w[0]).collect();
        steps.sort_by(f64::total_cmp);
        steps[steps.len() / 2]
    }

    /// Piecewise-linear interpolation; zero outside the sampled range.
    pub fn interpolate(&self, angle_deg: f64) -> f64 {
        let a = &self.angles_deg;
        if angle_deg < a[0] || angle_deg > a[a.len() - 1] || angle_deg.is_nan() {
            return 0.0;
        }
        let i = a.partition_point(|&x| x <= angle_deg).clamp(1, a.len() - 1);
        let (x0, x1) = (a[i - 1], a[i]);
        let (y0, y1) = (self.densities[i - 1], self.densities[i]);
        y0 + (y1 - y0) * (angle_deg - x0) / (x1 - x0)
    }

    fn trapezoid(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        self.angles_deg
            .windows(2)
            .zip(self.densities.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (g(x[0], y[0]) + g(x[1], y[1])))
            .sum()
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file, path)
    }

    /// Parses the `angle_deg,density_per_deg` format; `origin` labels parse errors.
    pub fn from_csv_reader(reader: impl Read, origin: impl Into<PathBuf>) -> Result<Self> {
        let origin = origin.into();
        let parse_err = |line: u64, message: String| Error::Parse {
            path: origin.clone(),
            line,
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| parse_err(1, e.to_string()))?
            .clone();
        if header.iter().collect::<Vec<_>>() != CSV_HEADER {
            return Err(parse_err(
                1,
                format!(
                    "expected header `{}`, found `{}`",
                    CSV_HEADER.join(","),
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            ));
        }
        let mut angles = Vec::new();
        let mut densities = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                parse_err(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let field = |i: usize| -> Result<f64> {
                let raw = record.get(i).unwrap_or("");
                raw.parse::<f64>().map_err(|_| {
                    parse_err(
                        line,
                        format!("column {} is not a number: `{raw}`", CSV_HEADER[i]),
                    )
                })
            };
            angles.push(field(0)?);
            densities.push(field(1)?);
        }
        let pdf = Self::new(angles, densities).map_err(|e| parse_err(0, e.to_string()))?;
        let resolution = pdf.resolution_deg();
        Ok(pdf
            .with_metadata("source", origin.display().to_string())
            .with_metadata("resolution_deg", resolution.to_string()))
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "{}", CSV_HEADER.join(","))?;
        for (a, d) in self.angles_deg.iter().zip(&self.densities) {
            writeln!(out, "{a},{d}")?;
        }
        Ok(())
    }
}
