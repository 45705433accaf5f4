//! Run configuration shared by command-line flags and JSON config files.

use clap::Args;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use trarep_core::recursion::{CoefficientStream, InitialValues};
use trarep_core::systems::{coefficient_stream, SystemClass};

use crate::error::CliError;

/// An initial value given either as a number or as the reference token.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParam", into = "RawParam")]
pub enum InitParam {
    Reference,
    Value(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawParam {
    Number(f64),
    Text(String),
}

impl FromStr for InitParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "ref" | "reference" => Ok(InitParam::Reference),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(InitParam::Value)
                .ok_or_else(|| format!("expected a number or `ref`, got `{s}`")),
        }
    }
}

impl TryFrom<RawParam> for InitParam {
    type Error = String;

    fn try_from(raw: RawParam) -> Result<Self, Self::Error> {
        match raw {
            RawParam::Number(v) => Ok(InitParam::Value(v)),
            RawParam::Text(s) => s.parse(),
        }
    }
}

impl From<InitParam> for RawParam {
    fn from(p: InitParam) -> Self {
        match p {
            InitParam::Reference => RawParam::Text("ref".into()),
            InitParam::Value(v) => RawParam::Number(v),
        }
    }
}

/// Uniform grid `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("grid must look like lo:hi:n, got `{s}`");
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() || (n > 1 && !(hi > lo)) {
            return Err(bad());
        }
        Ok(Grid { lo, hi, n })
    }
}

impl TryFrom<String> for Grid {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> Self {
        format!("{}:{}:{}", g.lo, g.hi, g.n)
    }
}

/// Every knob of the `compute` commands. Flags and config-file keys share the
/// same names; values from `--config` take precedence.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// free1d-even, free1d-odd, free3d, oscillator3d, morse or cheb.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// A number or `ref`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<InitParam>,
    /// A number or `ref`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<InitParam>,
    /// `lo:hi:n`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_size: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Energy of a continuum wavefunction.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    /// Index of a bound-state wavefunction.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Term count of the fallback partial sum.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_to: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// CSV output path; the sidecar takes the same stem with `.json`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    /// Values present in `top` replace those of `self`.
    pub fn overlaid_with(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(
            base, top, class, l, kappa, mu, nu, lambda, alpha, beta, grid, matrix_size, quad_order, tol, energy,
            level, terms, alpha_from, alpha_to, steps, out
        )
    }

    pub fn from_json_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    pub fn system_class(&self) -> Result<SystemClass, CliError> {
        let name = self.class.as_deref().ok_or_else(|| CliError::Config("--class is required".into()))?;
        let lambda = self.lambda.unwrap_or(1.0);
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| CliError::Config(format!("class {name} needs --{flag}")))
        };
        let class = match name {
            "free1d-even" => SystemClass::Free1DEven { lambda },
            "free1d-odd" => SystemClass::Free1DOdd { lambda },
            "free3d" => SystemClass::Free3D { lambda, l: self.l.unwrap_or(0) },
            "oscillator3d" => SystemClass::Oscillator3D { lambda, l: self.l.unwrap_or(0), kappa: need(self.kappa, "kappa")? },
            "morse" | "morse1d" => SystemClass::Morse1D { lambda, mu: need(self.mu, "mu")?, nu: need(self.nu, "nu")? },
            "cheb" => SystemClass::Chebyshev,
            other => return Err(CliError::Config(format!("unknown class `{other}`"))),
        };
        class.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(class)
    }

    /// Resolves the `ref` tokens; both values default to the reference pair.
    pub fn initial_values(&self, class: &SystemClass) -> Result<InitialValues, CliError> {
        let reference = coefficient_stream(class).map_err(|e| CliError::Config(e.to_string()))?.reference_init();
        let pick = |p: Option<InitParam>, r: f64| match p {
            None | Some(InitParam::Reference) => r,
            Some(InitParam::Value(v)) => v,
        };
        InitialValues::new(pick(self.alpha, reference.alpha), pick(self.beta, reference.beta))
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// `β` for a sweep over `α`, with the reference token resolved.
    pub fn sweep_beta(&self, class: &SystemClass) -> Result<f64, CliError> {
        let reference = coefficient_stream(class).map_err(|e| CliError::Config(e.to_string()))?.beta_hat();
        Ok(match self.beta {
            None | Some(InitParam::Reference) => reference,
            Some(InitParam::Value(v)) => v,
        })
    }

    pub fn grid_points(&self) -> Result<Vec<f64>, CliError> {
        self.grid.map(|g| g.points()).ok_or_else(|| CliError::Config("--grid lo:hi:n is required".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_tokens() {
        assert_eq!("ref".parse::<InitParam>().unwrap(), InitParam::Reference);
        assert_eq!("-0.03".parse::<InitParam>().unwrap(), InitParam::Value(-0.03));
        assert!("nan".parse::<InitParam>().is_err());
        let cfg: RunConfig = serde_json::from_str(r#"{"alpha": "ref", "beta": 2.5}"#).unwrap();
        assert_eq!(cfg.alpha, Some(InitParam::Reference));
        assert_eq!(cfg.beta, Some(InitParam::Value(2.5)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"clas": "free3d"}"#).is_err());
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:6:300".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 300);
        assert_eq!((p[0], p[299]), (0.0, 6.0));
        assert!("1:0:5".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn file_values_win() {
        let flags = RunConfig { class: Some("free3d".into()), l: Some(1), ..Default::default() };
        let file = RunConfig { l: Some(2), ..Default::default() };
        let merged = flags.overlaid_with(file);
        assert_eq!(merged.class.as_deref(), Some("free3d"));
        assert_eq!(merged.l, Some(2));
    }
}
