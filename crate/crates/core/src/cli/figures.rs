//! Figure presets: each panel is a CSV with its parameters fixed here.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::cli::commands::{write_panel, Axis, SweepRequest, SweepTarget};
use crate::cli::config::{Resolved, DEFAULT_TIME};
use crate::cli::output::{AxisScale, Cell, Table};
use crate::cli::{CliError, FiguresArgs, GlobalArgs, Preset};
use crate::error::Error;
use crate::fisher::{qfi_analytic, EstimationTarget};
use crate::model::{purity_bracket, EnvironmentSpec, ProbeSpec};
use crate::numeric::{linspace, logspace};
use crate::thermometry::{build_table1, tgi_approx, ScatteringGas, TABLE1_GAMMAS, TABLE1_LAMBDA};

pub const FIG2_LAMBDAS: [(&str, f64); 4] = [("a", 0.0), ("b", 1e20), ("c", 1e22), ("d", 1e23)];
pub const FIG2_TIME: f64 = 1e-6;
pub const FIG3_LAMBDAS: [(&str, f64); 2] = [("a", 1e15), ("b", 1e21)];
pub const FIG4_GAMMAS: [f64; 4] = [-10.0, 0.0, 10.0, 50.0];
pub const FIGD_LAMBDA: f64 = 1e22;
pub const FIGE_GAMMAS: [f64; 3] = [-10.0, 0.0, 5.0];

fn base(lambda: f64, t: f64, gamma: f64) -> Result<Resolved, CliError> {
    Ok(Resolved {
        probe: ProbeSpec::fullerene().with_gamma(gamma)?,
        env: EnvironmentSpec::from_lambda(lambda)?,
        gas: ScatteringGas::fullerene_background(),
        t,
    })
}

fn gamma_label(g: f64) -> String {
    if g < 0.0 {
        format!("m{}", -g)
    } else {
        format!("{g}")
    }
}

/// One request per panel of `preset`, named after the CSV it produces.
pub fn sweep_panels(preset: Preset) -> Result<Vec<(String, SweepRequest)>, CliError> {
    let mut out = Vec::new();
    match preset {
        Preset::Fig2 => {
            for (tag, l) in FIG2_LAMBDAS {
                out.push((
                    format!("fig2{tag}"),
                    SweepRequest {
                        target: SweepTarget::Fisher(EstimationTarget::Gamma),
                        axis: Axis::Gamma,
                        min: -20.0,
                        max: 20.0,
                        points: 401,
                        scale: AxisScale::Linear,
                        base: base(l, FIG2_TIME, 0.0)?,
                    },
                ));
            }
        }
        Preset::Fig3 => {
            for (tag, l) in FIG3_LAMBDAS {
                out.push((
                    format!("fig3{tag}"),
                    SweepRequest {
                        target: SweepTarget::Fisher(EstimationTarget::Lambda),
                        axis: Axis::Gamma,
                        min: -150.0,
                        max: 150.0,
                        points: 301,
                        scale: AxisScale::Linear,
                        base: base(l, DEFAULT_TIME, 0.0)?,
                    },
                ));
            }
        }
        Preset::Fig4 => {
            for g in FIG4_GAMMAS {
                out.push((
                    format!("fig4_gamma{}", gamma_label(g)),
                    SweepRequest {
                        target: SweepTarget::Fisher(EstimationTarget::Lambda),
                        axis: Axis::Time,
                        min: 1e-7,
                        max: 1e-2,
                        points: 201,
                        scale: AxisScale::Log,
                        base: base(TABLE1_LAMBDA, DEFAULT_TIME, g)?,
                    },
                ));
            }
        }
        Preset::FigE => {
            for g in FIGE_GAMMAS {
                out.push((
                    format!("figE_gamma{}", gamma_label(g)),
                    SweepRequest {
                        target: SweepTarget::Fisher(EstimationTarget::Lambda),
                        axis: Axis::Lambda,
                        min: 1e12,
                        max: 1e24,
                        points: 121,
                        scale: AxisScale::Log,
                        base: base(1.0, DEFAULT_TIME, g)?,
                    },
                ));
            }
        }
        Preset::Fig5 | Preset::FigD | Preset::All => {}
    }
    Ok(out)
}

/// Approximate TGI curve and the exact table points.
pub fn fig5_tables() -> Result<(Table, Table), CliError> {
    let mut curve = Table::new("fig5_curve", &["gamma", "tgi_approx_db"]);
    for g in linspace(-150.0, 150.0, 301) {
        curve.push(vec![Cell::Num(g), Cell::Num(tgi_approx(g))]);
    }
    let rows = build_table1(&ProbeSpec::fullerene(), TABLE1_LAMBDA, &TABLE1_GAMMAS)?;
    let mut exact = Table::new("fig5_exact", &["gamma", "tgi_db", "tgi_approx_db", "difference_db"]);
    for r in rows {
        let approx = tgi_approx(r.gamma);
        exact.push(vec![
            Cell::Num(r.gamma),
            Cell::Num(r.tgi_db),
            Cell::Num(approx),
            Cell::Num(r.tgi_db - approx),
        ]);
    }
    Ok((curve, exact))
}

/// QFI for γ, purity and relative purity slope on a (γ, t) grid.
pub fn fig_d_table() -> Result<Table, CliError> {
    let env = EnvironmentSpec::from_lambda(FIGD_LAMBDA)?;
    let gammas = linspace(-10.0, 10.0, 41);
    let times = logspace(1e-8, 1e-4, 41);
    let grid: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| times.iter().map(move |&t| (g, t))).collect();
    let rows: Vec<Result<Vec<Cell>, Error>> = grid
        .par_iter()
        .map(|&(g, t)| {
            let probe = ProbeSpec::fullerene().with_gamma(g)?;
            let b = purity_bracket(&probe, &env, t)?;
            let mu = b.purity();
            Ok(vec![
                Cell::Num(g),
                Cell::Num(t),
                Cell::Num(qfi_analytic(EstimationTarget::Gamma, &probe, &env, t)?),
                Cell::Num(mu),
                Cell::Num(b.purity_derivative(b.d_gamma).abs() / mu),
            ])
        })
        .collect();
    let mut table = Table::new(
        "figD_grid",
        &["gamma", "t_s", "qfi_analytic_gamma", "purity", "purity_rel_derivative_gamma"],
    );
    for (index, (r, &(g, _))) in rows.into_iter().zip(&grid).enumerate() {
        table.push(r.map_err(|source| CliError::Row {
            index,
            axis: "gamma",
            value: g,
            source,
        })?);
    }
    Ok(table)
}

fn presets(p: Preset) -> Vec<Preset> {
    match p {
        Preset::All => vec![Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5, Preset::FigD, Preset::FigE],
        other => vec![other],
    }
}

fn run_preset(dir: &Path, g: &GlobalArgs, preset: Preset) -> Result<(), CliError> {
    let started = Instant::now();
    match preset {
        Preset::Fig5 => {
            let (curve, exact) = fig5_tables()?;
            let settings = json!({ "preset": "fig5", "lambda": TABLE1_LAMBDA });
            write_panel(dir, g, &curve, None, settings.clone(), started)?;
            write_panel(dir, g, &exact, None, settings, started)
        }
        Preset::FigD => {
            let table = fig_d_table()?;
            let settings = json!({ "preset": "figD", "lambda": FIGD_LAMBDA });
            write_panel(dir, g, &table, None, settings, started)
        }
        _ => {
            for (name, request) in sweep_panels(preset)? {
                let table = request.table(&name)?;
                let mut settings = request.settings();
                settings["preset"] = json!(name);
                write_panel(dir, g, &table, Some(&request.base), settings, started)?;
            }
            Ok(())
        }
    }
}

pub fn run(g: &GlobalArgs, a: &FiguresArgs) -> Result<(), CliError> {
    let dir: PathBuf = a
        .outdir
        .clone()
        .or_else(|| g.out.clone())
        .unwrap_or_else(|| PathBuf::from("figures"));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    for p in presets(a.preset) {
        run_preset(&dir, g, p)?;
    }
    Ok(())
}
