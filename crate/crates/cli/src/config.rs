use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use oscint::{Complex64, StochasticScheme, TruncationPolicy};
use serde::Deserialize;

/// A problem in the configuration or flags; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemId {
    Linear,
    Nonlinear,
    Power,
    Freqdep,
    CustomFourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Exact,
    Rk4,
    None,
}

/// Accepts `1.5` or `"1.5,-0.2"` in JSON.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ComplexValue {
    Number(f64),
    Text(String),
}

/// Flat configuration; every key can also be given as a flag of the same
/// name, and flags win.
#[derive(Debug, Clone, Default, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunArgs {
    /// Problem to integrate
    #[arg(long, value_enum)]
    pub problem: Option<ProblemId>,
    /// Oscillator frequency
    #[arg(long)]
    pub omega: Option<f64>,
    /// Oscillator phase
    #[arg(long)]
    pub phi: Option<f64>,
    /// Amplitude exponent: the oscillator is scaled by omega^-nu
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Forcing strength
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Drift rate "re,im" or "re"
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "complex_text")]
    pub alpha: Option<String>,
    /// Exponent gamma in b = mu u^(1 - gamma)
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<i32>,
    /// Initial state "re,im" or "re"
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "complex_text")]
    pub u0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tend: Option<f64>,
    /// Macro step
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Regime exponent: 1/omega ~ h^rho
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub kappa0: Option<f64>,
    #[arg(long)]
    pub kappa1: Option<f64>,
    /// Average each coefficient over the oscillator phase
    #[arg(long)]
    #[serde(default)]
    pub phase_averaged: bool,
    /// Emit one column per retained word
    #[arg(long)]
    #[serde(default)]
    pub contributions: bool,
    #[arg(long, value_enum)]
    pub oracle: Option<OracleKind>,
    /// Fourier coefficients "k:re,im;k:re,im" for custom-fourier
    #[arg(long, allow_hyphen_values = true)]
    pub fourier: Option<String>,
    /// Step sizes "h1,h2,..." for converge and bounds
    #[arg(long)]
    pub hs: Option<String>,
    /// Frequencies "w1,w2,..." for bounds
    #[arg(long)]
    pub omegas: Option<String>,
    /// Couple omega = 1 / (coupling h^rho) in converge
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Number of equally spaced phases; converge reports the largest error
    #[arg(long)]
    pub phases: Option<usize>,
    /// Bound constant K; estimated over a box when absent
    #[arg(long)]
    pub k: Option<f64>,
    /// Half-width in u of the box used to estimate K
    #[arg(long)]
    pub box_radius: Option<f64>,
    /// Stochastic scheme for stochastic-check
    #[arg(long)]
    pub scheme: Option<String>,
    /// rho' for stochastic-check; defaults to rho
    #[arg(long)]
    pub rho_prime: Option<f64>,
    /// JSON file with the same keys as the flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write CSV here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident: $($field:ident),*) => {
        $( if $dst.$field.is_none() { $dst.$field = $src.$field; } )*
    };
}

impl RunArgs {
    /// Flags merged over the JSON file named by `--config`, if any.
    pub fn resolve(self) -> anyhow::Result<RunArgs> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load(&path)?;
        let mut merged = self;
        overlay!(merged, file: problem, omega, phi, nu, mu, alpha, gamma, u0, t0, tend, h, kappa, rho,
            kappa0, kappa1, oracle, fourier, hs, omegas, coupling, phases, k, box_radius, scheme, rho_prime, out);
        merged.phase_averaged |= file.phase_averaged;
        merged.contributions |= file.contributions;
        Ok(merged)
    }

    pub fn problem(&self) -> ProblemId {
        self.problem.unwrap_or(ProblemId::Linear)
    }

    pub fn t0(&self) -> f64 {
        self.t0.unwrap_or(0.0)
    }

    pub fn h(&self) -> anyhow::Result<f64> {
        let h = self.h.unwrap_or(0.1);
        if !(h.is_finite() && h > 0.0) {
            return Err(config_error(format!("h must be positive, got {h}")));
        }
        Ok(h)
    }

    pub fn tend(&self) -> anyhow::Result<f64> {
        let t0 = self.t0();
        let tend = self.tend.unwrap_or(t0 + 1.0);
        if !(tend > t0) {
            return Err(config_error(format!("tend ({tend}) must exceed t0 ({t0})")));
        }
        Ok(tend)
    }

    pub fn u0(&self) -> anyhow::Result<Complex64> {
        self.u0.as_deref().map_or(Ok(Complex64::new(1.0, 0.0)), parse_complex)
    }

    pub fn alpha(&self) -> anyhow::Result<Option<Complex64>> {
        self.alpha.as_deref().map(parse_complex).transpose()
    }

    pub fn oracle(&self) -> OracleKind {
        self.oracle.unwrap_or(OracleKind::None)
    }

    /// `(kappa0, kappa1)` when given, else the regime `(kappa, rho)` with the
    /// problem's amplitude exponent.
    pub fn policy(&self, nu: f64) -> anyhow::Result<TruncationPolicy> {
        let policy = match (self.kappa0, self.kappa1) {
            (Some(k0), Some(k1)) => {
                if self.kappa.is_some() || self.rho.is_some() {
                    return Err(config_error("give either kappa0/kappa1 or kappa/rho, not both"));
                }
                TruncationPolicy::new(k0, k1)
            }
            (None, None) => TruncationPolicy::from_regime(self.kappa.unwrap_or(4.0), self.rho.unwrap_or(2.0), nu),
            _ => return Err(config_error("kappa0 and kappa1 must be given together")),
        };
        policy.map_err(|e| config_error(e.to_string()))
    }

    pub fn scheme(&self) -> anyhow::Result<StochasticScheme> {
        self.scheme
            .as_deref()
            .unwrap_or("euler")
            .parse()
            .map_err(|e: oscint::Error| config_error(e.to_string()))
    }

    pub fn hs(&self, default: &[f64]) -> anyhow::Result<Vec<f64>> {
        let hs = match &self.hs {
            Some(list) => parse_list(list, "hs")?,
            None => default.to_vec(),
        };
        if hs.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(config_error("every h must be positive"));
        }
        Ok(hs)
    }

    pub fn omegas(&self, default: &[f64]) -> anyhow::Result<Vec<f64>> {
        match &self.omegas {
            Some(list) => parse_list(list, "omegas"),
            None => Ok(default.to_vec()),
        }
    }

    pub fn fourier(&self) -> anyhow::Result<Option<BTreeMap<i32, Complex64>>> {
        let Some(text) = &self.fourier else {
            return Ok(None);
        };
        let mut coeffs = BTreeMap::new();
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, value) = item
                .split_once(':')
                .ok_or_else(|| config_error(format!("fourier term {item:?} is not k:re,im")))?;
            let k: i32 = k
                .trim()
                .parse()
                .map_err(|_| config_error(format!("bad harmonic {k:?} in fourier term")))?;
            coeffs.insert(k, parse_complex(value)?);
        }
        Ok(Some(coeffs))
    }
}

fn load(path: &Path) -> anyhow::Result<RunArgs> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_error(format!("bad config {}: {e}", path.display())))
}

fn complex_text<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Ok(Option::<ComplexValue>::deserialize(d)?.map(|v| match v {
        ComplexValue::Number(x) => x.to_string(),
        ComplexValue::Text(s) => s,
    }))
}

/// Parses `"re"` or `"re,im"`.
pub fn parse_complex(text: &str) -> anyhow::Result<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| config_error(format!("cannot parse {text:?} as a complex number \"re,im\"")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(config_error(format!("cannot parse {text:?} as a complex number \"re,im\""))),
    }
}

fn parse_list(text: &str, name: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| config_error(format!("bad value {s:?} in {name}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("1, -2").unwrap(), Complex64::new(1.0, -2.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn fourier_parsing() {
        let args = RunArgs {
            fourier: Some("1:0.5,0; -1:0.5,0;0:0.2".into()),
            ..Default::default()
        };
        let coeffs = args.fourier().unwrap().unwrap();
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[&0], Complex64::new(0.2, 0.0));
    }

    #[test]
    fn policy_selection() {
        let args = RunArgs::default();
        let p = args.policy(0.0).unwrap();
        assert_eq!((p.kappa0(), p.kappa1()), (4.0, 2.0));
        let args = RunArgs {
            kappa0: Some(1.0),
            ..Default::default()
        };
        assert!(args.policy(0.0).is_err());
    }
}
