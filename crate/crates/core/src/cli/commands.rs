use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::cli::config::{parse_quantity, ParamArgs, Resolved, Unit};
use crate::cli::output::{emit, AxisScale, Cell, RunManifest, Table};
use crate::cli::{
    AxisArg, CliError, ConvertArgs, FisherArgs, Format, GlobalArgs, LensArgs, PointArgs, ScaleArg, SweepArgs,
    SweepTargetArg, Table1Args, TargetArg,
};
use crate::error::Error;
use crate::fisher::{
    cfi_closed, cfi_quadrature, cramer_rao_bound, phi, qfi_numeric, qfi_terms, EstimationTarget, StepPolicy,
};
use crate::lens::{de_broglie, focal_length, gamma_from_curvature, optical_potential, rabi_profile, LensSpec};
use crate::model::{
    covariance, kernel_params, position_density_variance, purity_approx, purity_bracket, purity_exact,
    purity_from_covariance, EnvironmentSpec, ProbeSpec,
};
use crate::numeric::{linspace, logspace};
use crate::thermometry::{
    build_table1, lambda_from_temperature, reference_row, relative_purity_rate, tau_max_approx, tau_max_exact,
    temperature_from_lambda, tgi as temporal_gain, tgi_approx, TABLE1_GAMMAS, TABLE1_LAMBDA,
};

impl From<TargetArg> for EstimationTarget {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Gamma => EstimationTarget::Gamma,
            TargetArg::Lambda => EstimationTarget::Lambda,
        }
    }
}

fn resolve(g: &GlobalArgs, params: &ParamArgs) -> Result<Resolved, CliError> {
    Resolved::load(params, g.config.as_deref())
}

fn require_csv(g: &GlobalArgs, command: &str) -> Result<(), CliError> {
    if g.format == Format::Svg {
        return Err(CliError::Usage(format!("`{command}` emits a single point; use --format csv")));
    }
    Ok(())
}

fn render(g: &GlobalArgs, table: &Table) -> Result<String, CliError> {
    match g.format {
        Format::Csv => table.to_csv(),
        Format::Svg => Ok(table.to_svg()),
    }
}

fn finish(
    g: &GlobalArgs,
    contents: &str,
    resolved: Option<&Resolved>,
    settings: serde_json::Value,
    started: Instant,
) -> Result<(), CliError> {
    let manifest = RunManifest::new(resolved.map(Resolved::record), settings, started.elapsed());
    emit(g.out.as_deref(), contents, &manifest, g.quiet)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepTarget {
    Fisher(EstimationTarget),
    Purity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Gamma,
    Lambda,
    Time,
}

impl Axis {
    pub fn header(self) -> &'static str {
        match self {
            Axis::Gamma => "gamma",
            Axis::Lambda => "lambda_m-2s-1",
            Axis::Time => "t_s",
        }
    }

    fn name(self) -> &'static str {
        match self {
            Axis::Gamma => "gamma",
            Axis::Lambda => "lambda",
            Axis::Time => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRequest {
    pub target: SweepTarget,
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: AxisScale,
    pub base: Resolved,
}

impl SweepRequest {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.points < 2 {
            return Err(CliError::Usage(format!("--points must be at least 2, got {}", self.points)));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(CliError::Usage(format!("need finite --min < --max, got {} and {}", self.min, self.max)));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(CliError::Usage("a log axis needs --min > 0".into()));
        }
        if self.axis != Axis::Gamma && self.min < 0.0 {
            return Err(CliError::Usage(format!("{} cannot be negative", self.axis.name())));
        }
        if self.axis != Axis::Time && self.base.t <= 0.0 {
            return Err(CliError::Usage("rates and Fisher information need --t > 0".into()));
        }
        if self.axis == Axis::Time && self.min <= 0.0 {
            return Err(CliError::Usage("the time axis needs --min > 0".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match self.scale {
            AxisScale::Linear => linspace(self.min, self.max, self.points),
            AxisScale::Log => logspace(self.min, self.max, self.points),
        }
    }

    fn headers(&self) -> Vec<String> {
        let mut h = vec![self.axis.header().to_string(), "purity".to_string()];
        match self.target {
            SweepTarget::Purity => h.extend(["purity_approx", "relative_purity_rate_s-1"].map(String::from)),
            SweepTarget::Fisher(target) => {
                let (deriv, fisher) = match target {
                    EstimationTarget::Gamma => ("", ""),
                    EstimationTarget::Lambda => ("_m2s", "_m4s2"),
                };
                h.push(format!("purity_rel_derivative_{}{deriv}", target.name()));
                h.push("relative_purity_rate_s-1".into());
                for q in ["qfi_analytic", "qfi_covariance_term", "qfi_purity_term", "qfi_numeric", "cfi_closed"] {
                    h.push(format!("{q}_{}{fisher}", target.name()));
                }
                if target == EstimationTarget::Lambda {
                    h.extend(["lambda_sq_qfi", "lambda_sq_cfi"].map(String::from));
                }
            }
        }
        h.push("temperature_k".into());
        h
    }

    fn point(&self, v: f64) -> Result<(ProbeSpec, EnvironmentSpec, f64), Error> {
        let Resolved { probe, env, t, .. } = self.base;
        Ok(match self.axis {
            Axis::Gamma => (probe.with_gamma(v)?, env, t),
            Axis::Lambda => (probe, env.with_lambda(v)?, t),
            Axis::Time => (probe, env, v),
        })
    }

    fn row(&self, v: f64) -> Result<Vec<Cell>, Error> {
        let (probe, env, t) = self.point(v)?;
        let bracket = purity_bracket(&probe, &env, t)?;
        let mu = bracket.purity();
        let rate = relative_purity_rate(&probe, &env, t)?;
        let mut row = vec![Cell::Num(v), Cell::Num(mu)];
        match self.target {
            SweepTarget::Purity => {
                row.push(Cell::Num(purity_approx(&probe, &env, t)?));
                row.push(Cell::Num(rate));
            }
            SweepTarget::Fisher(target) => {
                let d = match target {
                    EstimationTarget::Gamma => bracket.d_gamma,
                    EstimationTarget::Lambda => bracket.d_lambda,
                };
                let terms = qfi_terms(target, &probe, &env, t)?;
                let qfi = terms.total();
                let cfi = cfi_closed(target, &probe, &env, t)?;
                row.push(Cell::Num(bracket.purity_derivative(d).abs() / mu));
                row.push(Cell::Num(rate));
                row.push(Cell::Num(qfi));
                row.push(Cell::Num(terms.covariance_term));
                row.push(Cell::Num(terms.purity_term));
                row.push(Cell::Num(qfi_numeric(target, &probe, &env, t, &StepPolicy::default())?));
                row.push(Cell::Num(cfi));
                if target == EstimationTarget::Lambda {
                    let l2 = env.lambda() * env.lambda();
                    row.push(Cell::Num(l2 * qfi));
                    row.push(Cell::Num(l2 * cfi));
                }
            }
        }
        row.push(Cell::Num(temperature_from_lambda(env.lambda(), &self.base.gas)?));
        Ok(row)
    }

    /// Rows in axis order; the first failing row (lowest index) is reported.
    pub fn table(&self, name: &str) -> Result<Table, CliError> {
        self.validate()?;
        let values = self.values();
        let results: Vec<Result<Vec<Cell>, Error>> = values.par_iter().map(|&v| self.row(v)).collect();
        let headers = self.headers();
        let mut table = Table {
            name: name.to_string(),
            headers,
            rows: Vec::with_capacity(values.len()),
            x_scale: self.scale,
        };
        for (index, (r, &value)) in results.into_iter().zip(&values).enumerate() {
            table.push(r.map_err(|source| CliError::Row {
                index,
                axis: self.axis.name(),
                value,
                source,
            })?);
        }
        Ok(table)
    }

    pub fn settings(&self) -> serde_json::Value {
        json!({
            "target": match self.target {
                SweepTarget::Purity => "purity",
                SweepTarget::Fisher(t) => t.name(),
            },
            "axis": self.axis.name(),
            "min": self.min,
            "max": self.max,
            "points": self.points,
            "scale": match self.scale { AxisScale::Linear => "linear", AxisScale::Log => "log" },
        })
    }
}

pub fn sweep(g: &GlobalArgs, a: &SweepArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let axis = match a.axis {
        AxisArg::Gamma => Axis::Gamma,
        AxisArg::Lambda => Axis::Lambda,
        AxisArg::Time => Axis::Time,
    };
    let (unit, lo, hi, points, scale) = match axis {
        Axis::Gamma => (Unit::Plain, -150.0, 150.0, 301, AxisScale::Linear),
        Axis::Lambda => (Unit::Plain, 1e12, 1e24, 121, AxisScale::Log),
        Axis::Time => (Unit::Time, 1e-7, 1e-2, 101, AxisScale::Log),
    };
    let bound = |flag: &str, raw: &Option<String>, default: f64| {
        raw.as_deref().map_or(Ok(default), |r| parse_quantity(flag, r, unit))
    };
    let scale = match (a.log, a.scale) {
        (true, _) | (_, Some(ScaleArg::Log)) => AxisScale::Log,
        (_, Some(ScaleArg::Linear)) => AxisScale::Linear,
        _ => scale,
    };
    let request = SweepRequest {
        target: match a.target {
            SweepTargetArg::Gamma => SweepTarget::Fisher(EstimationTarget::Gamma),
            SweepTargetArg::Lambda => SweepTarget::Fisher(EstimationTarget::Lambda),
            SweepTargetArg::Purity => SweepTarget::Purity,
        },
        axis,
        min: bound("--min", &a.min, lo)?,
        max: bound("--max", &a.max, hi)?,
        points: a.points.unwrap_or(points),
        scale,
        base,
    };
    let table = request.table("sweep")?;
    finish(g, &render(g, &table)?, Some(&base), request.settings(), started)
}

pub fn table1(g: &GlobalArgs, a: &Table1Args) -> Result<(), CliError> {
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let gammas = a.gammas.clone().unwrap_or_else(|| TABLE1_GAMMAS.to_vec());
    if gammas.is_empty() {
        return Err(CliError::Usage("--gammas is empty".into()));
    }
    let lambda = base.env.lambda();
    let rows = build_table1(&base.probe, lambda, &gammas)?;
    // Reference values only describe the default fullerene probe at Λ = 1e15.
    let comparable = lambda == TABLE1_LAMBDA && base.probe.with_gamma(0.0)? == ProbeSpec::fullerene();

    let mut table = Table::new(
        "table1",
        &[
            "gamma",
            "tau_max_us",
            "purity_at_tau_max",
            "relative_purity_rate_s-1",
            "lambda_sq_qfi",
            "tgi_db",
            "tgi_approx_db",
            "ref_tau_max_us",
            "ref_purity",
            "ref_relative_purity_rate_s-1",
            "ref_lambda_sq_qfi",
            "ref_tgi_db",
            "resid_tau_max_rel",
            "resid_purity_abs",
            "resid_rate_rel",
            "resid_lambda_sq_qfi_rel",
            "resid_tgi_db_abs",
        ],
    );
    for r in &rows {
        let tau_us = r.tau_max * 1e6;
        let mut row = vec![
            Cell::Num(r.gamma),
            Cell::Num(tau_us),
            Cell::Num(r.purity_at_tau_max),
            Cell::Num(r.relative_purity_rate),
            Cell::Num(r.lambda_sq_qfi),
            Cell::Num(r.tgi_db),
            Cell::Num(tgi_approx(r.gamma)),
        ];
        match reference_row(r.gamma).filter(|_| comparable) {
            Some(f) => row.extend(
                [
                    f.tau_max_us,
                    f.purity_at_tau_max,
                    f.relative_purity_rate,
                    f.lambda_sq_qfi,
                    f.tgi_db,
                    tau_us / f.tau_max_us - 1.0,
                    r.purity_at_tau_max - f.purity_at_tau_max,
                    r.relative_purity_rate / f.relative_purity_rate - 1.0,
                    r.lambda_sq_qfi / f.lambda_sq_qfi - 1.0,
                    r.tgi_db - f.tgi_db,
                ]
                .map(Cell::Num),
            ),
            None => row.extend(std::iter::repeat_n(Cell::Empty, 10)),
        }
        table.push(row);
    }
    let contents = if a.pretty { table.to_pretty() } else { render(g, &table)? };
    finish(g, &contents, Some(&base), json!({ "gammas": gammas, "lambda": lambda }), started)
}

pub fn convert(g: &GlobalArgs, a: &ConvertArgs) -> Result<(), CliError> {
    require_csv(g, "convert")?;
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let gas = base.gas;
    let (line, settings) = match (a.to_lambda, a.to_temp) {
        (Some(temp), None) => {
            let l = lambda_from_temperature(temp, &gas)?;
            (format!("lambda_m-2s-1 = {}\n", crate::cli::output::format_float(l)), json!({ "temperature_k": temp }))
        }
        (None, Some(l)) => {
            let temp = temperature_from_lambda(l, &gas)?;
            (format!("temperature_k = {}\n", crate::cli::output::format_float(temp)), json!({ "lambda_m2s": l }))
        }
        _ => return Err(CliError::Usage("give exactly one of --to-lambda or --to-temp".into())),
    };
    let provenance = format!(
        "# m_air_kg = {:e}, number_density_m3 = {:e}, molecule_size_m = {:e}\n",
        gas.m_air, gas.number_density, gas.molecule_size
    );
    finish(g, &(line + &provenance), Some(&base), settings, started)
}

fn quantity_table(name: &str) -> Table {
    Table::new(name, &["quantity", "value", "unit"])
}

fn add(table: &mut Table, quantity: &str, value: impl Into<Cell>, unit: &str) {
    table.push(vec![Cell::Text(quantity.into()), value.into(), Cell::Text(unit.into())]);
}

pub fn lens(g: &GlobalArgs, a: &LensArgs) -> Result<(), CliError> {
    require_csv(g, "lens")?;
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let lens = LensSpec::new(
        a.omega0,
        parse_quantity("--wavelength", &a.wavelength, Unit::Length)?,
        a.detuning,
        a.v_cm,
        parse_quantity("--t-int", &a.t_int, Unit::Time)?,
    )?;
    let x = parse_quantity("--x", &a.x, Unit::Length)?;
    let z = parse_quantity("--z", &a.z, Unit::Length)?;
    let mass = base.probe.mass();
    let potential = optical_potential(&lens, x, z);

    let mut t = quantity_table("lens");
    add(&mut t, "rabi_frequency", rabi_profile(&lens, x, z), "rad/s");
    add(&mut t, "optical_potential", potential.full, "rad/s");
    add(&mut t, "optical_potential_harmonic", potential.harmonic, "rad/s");
    add(&mut t, "de_broglie_wavelength", de_broglie(mass, lens.v_cm())?, "m");
    add(&mut t, "focal_length", focal_length(&lens, mass)?, "m");
    let mut settings = json!({
        "omega0": lens.omega0(), "wavelength": lens.wavelength(), "detuning": lens.detuning(),
        "v_cm": lens.v_cm(), "t_int": lens.t_int(), "x": x, "z": z,
    });
    if let Some(raw) = &a.curvature {
        let r = parse_quantity("--curvature", raw, Unit::Length)?;
        add(&mut t, "gamma_from_curvature", gamma_from_curvature(mass, lens.v_cm(), r, base.probe.sigma0())?, "1");
        settings["curvature"] = json!(r);
    }
    finish(g, &t.to_csv()?, Some(&base), settings, started)
}

pub fn purity(g: &GlobalArgs, a: &PointArgs) -> Result<(), CliError> {
    require_csv(g, "purity")?;
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let Resolved { probe, env, t, .. } = base;
    let cov = covariance(&probe, &env, t)?;
    let mut table = quantity_table("purity");
    add(&mut table, "purity_exact", purity_exact(&probe, &env, t)?, "1");
    add(&mut table, "purity_approx", purity_approx(&probe, &env, t)?, "1");
    add(&mut table, "purity_from_covariance", purity_from_covariance(&cov)?, "1");
    add(&mut table, "covariance_xx", cov.sxx(), "1");
    add(&mut table, "covariance_xp", cov.sxp(), "1");
    add(&mut table, "covariance_pp", cov.spp(), "1");
    add(&mut table, "covariance_det", cov.det(), "1");
    add(&mut table, "position_variance", position_density_variance(&probe, &env, t)?, "m^2");
    if t > 0.0 {
        let k = kernel_params(&probe, &env, t)?;
        add(&mut table, "relative_purity_rate", relative_purity_rate(&probe, &env, t)?, "s^-1");
        add(&mut table, "kernel_a1", k.a1, "m^-2");
        add(&mut table, "kernel_a2", k.a2, "m^-2");
        add(&mut table, "kernel_a3", k.a3, "m^-2");
        add(&mut table, "kernel_b_sq", k.b_sq, "m^-4");
        add(&mut table, "kernel_n_t", k.n_t, "m^-1");
        add(&mut table, "kernel_purity", k.purity(), "1");
    }
    finish(g, &table.to_csv()?, Some(&base), json!({}), started)
}

fn fisher_units(target: EstimationTarget) -> &'static str {
    match target {
        EstimationTarget::Gamma => "1",
        EstimationTarget::Lambda => "m^4 s^2",
    }
}

pub fn qfi(g: &GlobalArgs, a: &FisherArgs) -> Result<(), CliError> {
    require_csv(g, "qfi")?;
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let Resolved { probe, env, t, .. } = base;
    let target = EstimationTarget::from(a.target);
    let units = fisher_units(target);
    let terms = qfi_terms(target, &probe, &env, t)?;
    let total = terms.total();
    let mut table = quantity_table("qfi");
    add(&mut table, "qfi_analytic", total, units);
    add(&mut table, "qfi_covariance_term", terms.covariance_term, units);
    add(&mut table, "qfi_purity_term", terms.purity_term, units);
    add(&mut table, "qfi_numeric", qfi_numeric(target, &probe, &env, t, &StepPolicy::default())?, units);
    add(&mut table, "phi", phi(target, &probe, &env, t)?.value, units);
    let bound = match cramer_rao_bound(total, a.repeats) {
        Ok(b) => Some(b),
        Err(Error::NonInformative) => None,
        Err(e) => return Err(e.into()),
    };
    let bound_units = match target {
        EstimationTarget::Gamma => "1",
        EstimationTarget::Lambda => "m^-2 s^-1",
    };
    add(&mut table, "cramer_rao_bound", bound, bound_units);
    if target == EstimationTarget::Lambda {
        add(&mut table, "lambda_sq_qfi", env.lambda() * env.lambda() * total, "1");
    }
    finish(g, &table.to_csv()?, Some(&base), json!({ "target": target.name(), "repeats": a.repeats }), started)
}

pub fn cfi(g: &GlobalArgs, a: &FisherArgs) -> Result<(), CliError> {
    require_csv(g, "cfi")?;
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let Resolved { probe, env, t, .. } = base;
    let target = EstimationTarget::from(a.target);
    let units = fisher_units(target);
    let closed = cfi_closed(target, &probe, &env, t)?;
    let oracles = cfi_quadrature(target, &probe, &env, t)?;
    let mut table = quantity_table("cfi");
    add(&mut table, "cfi_closed", closed, units);
    add(&mut table, "cfi_quadrature", oracles.quadrature, units);
    add(&mut table, "cfi_gaussian_identity", oracles.gaussian_identity, units);
    let bound = match cramer_rao_bound(closed, a.repeats) {
        Ok(b) => Some(b),
        Err(Error::NonInformative) => None,
        Err(e) => return Err(e.into()),
    };
    add(&mut table, "cramer_rao_bound", bound, if target == EstimationTarget::Gamma { "1" } else { "m^-2 s^-1" });
    finish(g, &table.to_csv()?, Some(&base), json!({ "target": target.name(), "repeats": a.repeats }), started)
}

pub fn tgi(g: &GlobalArgs, a: &PointArgs) -> Result<(), CliError> {
    require_csv(g, "tgi")?;
    let started = Instant::now();
    let base = resolve(g, &a.params)?;
    let Resolved { probe, env, .. } = base;
    let tau = tau_max_exact(&probe, &env)?;
    let tau_approx = tau_max_approx(&probe, &env)?;
    let mut table = quantity_table("tgi");
    add(&mut table, "tau_max", tau, "s");
    add(&mut table, "tau_max_approx", tau_approx, "s");
    add(&mut table, "purity_at_tau_max", purity_exact(&probe, &env, tau)?, "1");
    add(&mut table, "purity_approx_at_tau_max_approx", purity_approx(&probe, &env, tau_approx)?, "1");
    add(&mut table, "relative_purity_rate_at_tau_max", relative_purity_rate(&probe, &env, tau)?, "s^-1");
    let l = env.lambda();
    let qfi = qfi_terms(EstimationTarget::Lambda, &probe, &env, tau)?.total();
    add(&mut table, "lambda_sq_qfi_at_tau_max", l * l * qfi, "1");
    add(&mut table, "tgi", temporal_gain(&probe, &env)?, "dB");
    add(&mut table, "tgi_approx", tgi_approx(probe.gamma()), "dB");
    finish(g, &table.to_csv()?, Some(&base), json!({}), started)
}

/// Writes one table plus its manifest into `dir`, and an SVG when asked.
pub(crate) fn write_panel(
    dir: &Path,
    g: &GlobalArgs,
    table: &Table,
    base: Option<&Resolved>,
    settings: serde_json::Value,
    started: Instant,
) -> Result<(), CliError> {
    let csv_path = dir.join(format!("{}.csv", table.name));
    let manifest = RunManifest::new(base.map(Resolved::record), settings, started.elapsed());
    emit(Some(&csv_path), &table.to_csv()?, &manifest, true)?;
    if g.format == Format::Svg {
        crate::cli::output::write_file(&dir.join(format!("{}.svg", table.name)), &table.to_svg())?;
    }
    if !g.quiet {
        eprintln!("wrote {}", csv_path.display());
    }
    Ok(())
}
