//! Run configuration: defaults, a flat `key = value` file, then flag overrides.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use kepler2d::operators::RefinementPreset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn parse(s: &str) -> Result<Self, UsageError> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(UsageError(format!(
                "unknown format '{other}' (expected csv, json or svg)"
            ))),
        }
    }
}

/// A configuration or usage problem. Maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_max: u32,
    pub spectrum_n_max: u32,
    pub x_values: Vec<f64>,
    pub integral_tol: f64,
    pub spectrum_tol: f64,
    pub degeneracy_tol: f64,
    pub radial_points: usize,
    pub radial_r_max: f64,
    pub grid_order: usize,
    pub fock_n: u32,
    pub fock_n_max: u32,
    pub cluster_tol: f64,
    pub preset: String,
    pub a_psi00_tol: f64,
    pub consistency_tol: f64,
    pub out: PathBuf,
    pub formats: BTreeSet<Format>,
    pub parallel: bool,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_max: 8,
            spectrum_n_max: 4,
            x_values: vec![0.1, 0.5, 1.0, 2.0, 5.0, 10.0],
            integral_tol: 1e-8,
            spectrum_tol: 1e-6,
            degeneracy_tol: 1e-5,
            radial_points: kepler2d::radial::DEFAULT_POINTS,
            radial_r_max: kepler2d::radial::DEFAULT_R_MAX,
            grid_order: 30,
            fock_n: 2,
            fock_n_max: 4,
            cluster_tol: 1e-3,
            preset: "default".to_string(),
            a_psi00_tol: 1e-3,
            consistency_tol: 1e-6,
            out: PathBuf::from("."),
            formats: [Format::Csv, Format::Json].into_iter().collect(),
            parallel: false,
            timing: true,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
    value
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("invalid value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, UsageError> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(UsageError(format!("invalid boolean '{value}' for '{key}'"))),
    }
}

pub fn parse_n(key: &str, v: i64) -> Result<u32, UsageError> {
    u32::try_from(v).map_err(|_| UsageError(format!("{key} must be a non-negative integer, got {v}")))
}

pub fn parse_formats(list: &str) -> Result<BTreeSet<Format>, UsageError> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Format::parse)
        .collect()
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        match key {
            "n_max" => self.n_max = parse_n(key, parse_num(key, value)?)?,
            "spectrum_n_max" => self.spectrum_n_max = parse_n(key, parse_num(key, value)?)?,
            "x" => self.x_values = value.split(',').map(|s| parse_num(key, s)).collect::<Result<_, _>>()?,
            "tol" | "integral_tol" => self.integral_tol = parse_num(key, value)?,
            "spectrum_tol" => self.spectrum_tol = parse_num(key, value)?,
            "degeneracy_tol" => self.degeneracy_tol = parse_num(key, value)?,
            "radial_points" => self.radial_points = parse_num(key, value)?,
            "radial_r_max" => self.radial_r_max = parse_num(key, value)?,
            "grid_order" => self.grid_order = parse_num(key, value)?,
            "fock_n" => self.fock_n = parse_n(key, parse_num(key, value)?)?,
            "fock_n_max" => self.fock_n_max = parse_n(key, parse_num(key, value)?)?,
            "cluster_tol" => self.cluster_tol = parse_num(key, value)?,
            "preset" => self.preset = value.trim().to_string(),
            "a_psi00_tol" => self.a_psi00_tol = parse_num(key, value)?,
            "consistency_tol" => self.consistency_tol = parse_num(key, value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "format" => self.formats = parse_formats(value)?,
            "parallel" => self.parallel = parse_bool(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            _ => return Err(UsageError(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Read a flat configuration file. Blank lines and `#` comments are skipped.
    pub fn load(&mut self, path: &Path) -> Result<(), UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let tolerances = [
            ("tol", self.integral_tol),
            ("spectrum_tol", self.spectrum_tol),
            ("degeneracy_tol", self.degeneracy_tol),
            ("cluster_tol", self.cluster_tol),
            ("a_psi00_tol", self.a_psi00_tol),
            ("consistency_tol", self.consistency_tol),
        ];
        for (key, t) in tolerances {
            if !(t > 0.0 && t.is_finite()) {
                return Err(UsageError(format!("{key} must be positive, got {t}")));
            }
        }
        if self.x_values.is_empty() || self.x_values.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(UsageError("x values must be positive and finite".into()));
        }
        if self.radial_points < 16 || !(self.radial_r_max > 0.0 && self.radial_r_max.is_finite()) {
            return Err(UsageError("radial grid needs at least 16 points and r_max > 0".into()));
        }
        RefinementPreset::named(&self.preset).map_err(|e| UsageError(e.to_string()))?;
        if !self.out.is_dir() {
            return Err(UsageError(format!(
                "output directory {} does not exist",
                self.out.display()
            )));
        }
        Ok(())
    }

    pub fn fock_precondition(&self, n: u32) -> Result<(), UsageError> {
        let need = 2 * (n as usize + 1);
        if self.grid_order < need {
            return Err(UsageError(format!(
                "grid order {} too small for n = {n} (need at least {need})",
                self.grid_order
            )));
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}
