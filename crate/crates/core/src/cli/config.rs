//! Parameter resolution: built-in defaults, then a `key = value` file, then flags.

use std::fs;
use std::path::Path;

use clap::Args;
use serde::Serialize;

use crate::cli::CliError;
use crate::constants::FULLERENE;
use crate::model::{Coherence, EnvironmentSpec, ProbeSpec};
use crate::thermometry::{temperature_from_lambda, ScatteringGas};

/// Scattering constant used when neither Λ nor T is given, m⁻²s⁻¹.
pub const DEFAULT_LAMBDA: f64 = 1e15;
/// Interaction time used when none is given, s.
pub const DEFAULT_TIME: f64 = 50e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Plain,
    Time,
    Length,
}

// Divisors rather than factors: 50 / 1e6 rounds correctly, 50 * 1e-6 does not.
const TIME_SUFFIXES: [(&str, f64); 5] = [("ms", 1e3), ("us", 1e6), ("μs", 1e6), ("ns", 1e9), ("s", 1.0)];
const LENGTH_SUFFIXES: [(&str, f64); 6] = [
    ("mm", 1e3),
    ("um", 1e6),
    ("μm", 1e6),
    ("nm", 1e9),
    ("pm", 1e12),
    ("m", 1.0),
];

/// Parses a number with an optional unit suffix, returning SI.
pub fn parse_quantity(name: &str, raw: &str, unit: Unit) -> Result<f64, CliError> {
    let raw = raw.trim();
    let table: &[(&str, f64)] = match unit {
        Unit::Plain => &[],
        Unit::Time => &TIME_SUFFIXES,
        Unit::Length => &LENGTH_SUFFIXES,
    };
    let (number, scale) = table
        .iter()
        .find_map(|&(suffix, scale)| raw.strip_suffix(suffix).map(|n| (n.trim_end(), scale)))
        .unwrap_or((raw, 1.0));
    let value: f64 = number
        .parse()
        .map_err(|_| CliError::Usage(format!("{name}: cannot parse `{raw}` as a number")))?;
    Ok(value / scale)
}

/// Flags shared by every physics subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Probe mass, kg
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<String>,
    /// Initial packet width (m; nm/um suffixes accepted)
    #[arg(long, allow_negative_numbers = true)]
    pub sigma0: Option<String>,
    /// Initial coherence length (m, suffixes accepted, or `inf`)
    #[arg(long, allow_negative_numbers = true)]
    pub ell0: Option<String>,
    /// Position-momentum correlation γ
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<String>,
    /// Scattering constant Λ, m⁻²s⁻¹
    #[arg(long, allow_negative_numbers = true, conflicts_with = "temperature")]
    pub lambda: Option<String>,
    /// Gas temperature, K (sets Λ)
    #[arg(long, allow_negative_numbers = true)]
    pub temperature: Option<String>,
    /// Mass of a gas particle, kg
    #[arg(long, allow_negative_numbers = true)]
    pub m_air: Option<String>,
    /// Gas number density, m⁻³
    #[arg(long, allow_negative_numbers = true)]
    pub number_density: Option<String>,
    /// Probe molecule size (m, suffixes accepted)
    #[arg(long, allow_negative_numbers = true)]
    pub molecule_size: Option<String>,
    /// Interaction time (s; ms/us/ns suffixes accepted)
    #[arg(long = "t", allow_negative_numbers = true)]
    pub time: Option<String>,
}

/// One source of parameters, already in SI.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer {
    pub mass: Option<f64>,
    pub sigma0: Option<f64>,
    pub ell0: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub temperature: Option<f64>,
    pub m_air: Option<f64>,
    pub number_density: Option<f64>,
    pub molecule_size: Option<f64>,
    pub time: Option<f64>,
}

impl Layer {
    fn slot(&mut self, key: &str) -> Option<(&mut Option<f64>, Unit)> {
        Some(match key {
            "mass_kg" => (&mut self.mass, Unit::Plain),
            "sigma0_m" => (&mut self.sigma0, Unit::Length),
            "ell0_m" => (&mut self.ell0, Unit::Length),
            "gamma" => (&mut self.gamma, Unit::Plain),
            "lambda_m2s" => (&mut self.lambda, Unit::Plain),
            "temperature_k" => (&mut self.temperature, Unit::Plain),
            "m_air_kg" => (&mut self.m_air, Unit::Plain),
            "number_density_m3" => (&mut self.number_density, Unit::Plain),
            "molecule_size_m" => (&mut self.molecule_size, Unit::Length),
            "t_s" => (&mut self.time, Unit::Time),
            _ => return None,
        })
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Layer, CliError> {
        let mut layer = Layer::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
            let key = key.trim();
            let (slot, unit) = layer
                .slot(key)
                .ok_or_else(|| CliError::Usage(format!("config line {}: unknown key `{key}`", n + 1)))?;
            *slot = Some(parse_value(key, value, unit)?);
        }
        if layer.lambda.is_some() && layer.temperature.is_some() {
            return Err(CliError::Usage("config sets both lambda_m2s and temperature_k".into()));
        }
        Ok(layer)
    }

    pub fn from_config_file(path: &Path) -> Result<Layer, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Layer::from_config_text(&text)
    }

    pub fn from_args(args: &ParamArgs) -> Result<Layer, CliError> {
        let get = |name: &str, raw: &Option<String>, unit: Unit| -> Result<Option<f64>, CliError> {
            raw.as_deref().map(|r| parse_value(name, r, unit)).transpose()
        };
        Ok(Layer {
            mass: get("--mass", &args.mass, Unit::Plain)?,
            sigma0: get("--sigma0", &args.sigma0, Unit::Length)?,
            ell0: get("--ell0", &args.ell0, Unit::Length)?,
            gamma: get("--gamma", &args.gamma, Unit::Plain)?,
            lambda: get("--lambda", &args.lambda, Unit::Plain)?,
            temperature: get("--temperature", &args.temperature, Unit::Plain)?,
            m_air: get("--m-air", &args.m_air, Unit::Plain)?,
            number_density: get("--number-density", &args.number_density, Unit::Plain)?,
            molecule_size: get("--molecule-size", &args.molecule_size, Unit::Length)?,
            time: get("--t", &args.time, Unit::Time)?,
        })
    }

    /// `self` wins wherever it has a value. Λ and T travel together: a layer
    /// naming either one replaces both from the layer below.
    pub fn over(self, below: Layer) -> Layer {
        let scattering_here = self.lambda.is_some() || self.temperature.is_some();
        Layer {
            mass: self.mass.or(below.mass),
            sigma0: self.sigma0.or(below.sigma0),
            ell0: self.ell0.or(below.ell0),
            gamma: self.gamma.or(below.gamma),
            lambda: if scattering_here { self.lambda } else { below.lambda },
            temperature: if scattering_here { self.temperature } else { below.temperature },
            m_air: self.m_air.or(below.m_air),
            number_density: self.number_density.or(below.number_density),
            molecule_size: self.molecule_size.or(below.molecule_size),
            time: self.time.or(below.time),
        }
    }
}

fn parse_value(name: &str, raw: &str, unit: Unit) -> Result<f64, CliError> {
    let trimmed = raw.trim();
    if matches!(trimmed.to_ascii_lowercase().as_str(), "inf" | "infinity") {
        return Ok(f64::INFINITY);
    }
    parse_quantity(name, trimmed, unit)
}

/// Fully resolved inputs for one invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub probe: ProbeSpec,
    pub env: EnvironmentSpec,
    pub gas: ScatteringGas,
    pub t: f64,
}

/// Flat record of [`Resolved`] for manifests.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedRecord {
    pub mass_kg: f64,
    pub sigma0_m: f64,
    /// `null` for a fully coherent source.
    pub ell0_m: Option<f64>,
    pub gamma: f64,
    pub lambda_m2s: f64,
    pub temperature_k: Option<f64>,
    pub m_air_kg: f64,
    pub number_density_m3: f64,
    pub molecule_size_m: f64,
    pub t_s: f64,
}

impl Resolved {
    pub fn from_layers(cli: Layer, config: Option<Layer>) -> Result<Resolved, CliError> {
        let merged = match config {
            Some(c) => cli.over(c),
            None => cli,
        };
        let gas = ScatteringGas::new(
            merged.m_air.unwrap_or(FULLERENE.m_air),
            merged.number_density.unwrap_or(FULLERENE.number_density),
            merged.molecule_size.unwrap_or(FULLERENE.molecule_size),
        )?;
        let coherence = Coherence::from_length(merged.ell0.unwrap_or(FULLERENE.ell0))?;
        let probe = ProbeSpec::new(
            merged.mass.unwrap_or(FULLERENE.mass),
            merged.sigma0.unwrap_or(FULLERENE.sigma0),
            coherence,
            merged.gamma.unwrap_or(0.0),
        )?;
        let env = match (merged.lambda, merged.temperature) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either a scattering constant or a temperature".into())),
            (_, Some(temp)) => EnvironmentSpec::from_temperature(temp, gas)?,
            (Some(l), None) => EnvironmentSpec::from_lambda(l)?,
            (None, None) => EnvironmentSpec::from_lambda(DEFAULT_LAMBDA)?,
        };
        let t = merged.time.unwrap_or(DEFAULT_TIME);
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CliError::Usage(format!("--t must be finite and >= 0, got {t}")));
        }
        Ok(Resolved { probe, env, gas, t })
    }

    pub fn load(args: &ParamArgs, config: Option<&Path>) -> Result<Resolved, CliError> {
        let config = config.map(Layer::from_config_file).transpose()?;
        Resolved::from_layers(Layer::from_args(args)?, config)
    }

    pub fn record(&self) -> ResolvedRecord {
        let ell0 = self.probe.ell0();
        ResolvedRecord {
            mass_kg: self.probe.mass(),
            sigma0_m: self.probe.sigma0(),
            ell0_m: ell0.is_finite().then_some(ell0),
            gamma: self.probe.gamma(),
            lambda_m2s: self.env.lambda(),
            temperature_k: self
                .env
                .thermal()
                .map(|s| s.temperature)
                .or_else(|| temperature_from_lambda(self.env.lambda(), &self.gas).ok()),
            m_air_kg: self.gas.m_air,
            number_density_m3: self.gas.number_density,
            molecule_size_m: self.gas.molecule_size,
            t_s: self.t,
        }
    }
}
