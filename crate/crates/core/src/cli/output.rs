//! Tabular output: CSV, a plain aligned table, decorative SVG, and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::cli::config::ResolvedRecord;
use crate::cli::CliError;
use crate::constants::{Constants, CODATA};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// 17 significant digits, fixed layout.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn number(&self) -> Option<f64> {
        match self {
            Cell::Num(v) if v.is_finite() => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub x_scale: AxisScale,
}

impl Table {
    pub fn new(name: impl Into<String>, headers: &[&str]) -> Self {
        Table {
            name: name.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            x_scale: AxisScale::Linear,
        }
    }


    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.headers).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: PathBuf::from("<csv buffer>"),
            source: io::Error::other(e.to_string()),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// Right-aligned columns with compact numbers, for terminals.
    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Num(v) => format!("{v:.6}"),
                        other => other.render(),
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.headers[j].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&mut out, &self.headers);
        for r in &cells {
            line(&mut out, r);
        }
        out
    }

    /// Line chart of every numeric column against the first, each series
    /// normalized to its own maximum magnitude.
    pub fn to_svg(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 440.0;
        const PAD: f64 = 50.0;
        const COLORS: [&str; 8] = [
            "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
        ];
        let log_x = self.x_scale == AxisScale::Log;
        let xs: Vec<Option<f64>> = self
            .rows
            .iter()
            .map(|r| r[0].number().filter(|&x| !log_x || x > 0.0).map(|x| if log_x { x.log10() } else { x }))
            .collect();
        let (x_lo, x_hi) = bounds(xs.iter().flatten().copied());

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}{}</text>"#,
            W / 2.0,
            H - 15.0,
            escape(&self.headers[0]),
            if log_x { " (log)" } else { "" }
        );
        let _ = writeln!(svg, r#"<text x="{PAD}" y="30" font-size="14">{}</text>"#, escape(&self.name));

        for (k, j) in (1..self.headers.len()).enumerate() {
            let ys: Vec<Option<f64>> = self.rows.iter().map(|r| r[j].number()).collect();
            let scale = ys.iter().flatten().fold(0.0f64, |m, y| m.max(y.abs()));
            if scale == 0.0 || ys.iter().flatten().count() < 2 {
                continue;
            }
            let color = COLORS[k % COLORS.len()];
            let mut path = String::new();
            let mut pen_down = false;
            for (x, y) in xs.iter().zip(&ys) {
                match (x, y) {
                    (Some(x), Some(y)) => {
                        let px = PAD + (x - x_lo) / (x_hi - x_lo) * (W - 2.0 * PAD);
                        let py = H - PAD - (0.5 + 0.5 * y / scale) * (H - 2.0 * PAD);
                        let _ = write!(path, "{}{px:.2},{py:.2} ", if pen_down { "L" } else { "M" });
                        pen_down = true;
                    }
                    _ => pen_down = false,
                }
            }
            let _ = writeln!(svg, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.trim_end());
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" font-size="11" fill="{color}">{}</text>"#,
                PAD + 8.0,
                PAD + 14.0 * (k as f64 + 1.0),
                escape(&self.headers[j])
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<csv buffer>"),
        source: io::Error::other(e.to_string()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub constants: Constants,
    pub parameters: Option<ResolvedRecord>,
    /// Command-specific settings (axis, range, preset, ...).
    pub settings: serde_json::Value,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(parameters: Option<ResolvedRecord>, settings: serde_json::Value, elapsed: Duration) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().collect(),
            constants: CODATA,
            parameters,
            settings,
            wall_clock_seconds: elapsed.as_secs_f64(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

/// `<path>.manifest.json`
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes `contents` to `out` (or stdout) and the manifest beside it (or to
/// stderr unless quiet).
pub fn emit(out: Option<&Path>, contents: &str, manifest: &RunManifest, quiet: bool) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_file(path, contents)?;
            write_file(&manifest_path(path), &manifest.to_json())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(contents.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            if !quiet {
                eprint!("{}", manifest.to_json());
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["x", "y", "note"]);
        t.push(vec![Cell::Num(0.1), Cell::Num(-2.5e-30), Cell::Text("a,b".into())]);
        t.push(vec![Cell::Num(1.0), Cell::Empty, Cell::Text("c".into())]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(
            csv,
            "x,y,note\n1.0000000000000001e-1,-2.4999999999999999e-30,\"a,b\"\n1.0000000000000000e0,,c\n"
        );
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02214076e23, -1.2345678901234567e-300] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let svg = sample().to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn pretty_aligns() {
        let p = sample().to_pretty();
        let lines: Vec<&str> = p.lines().collect();
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn manifest_name() {
        assert_eq!(manifest_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.manifest.json"));
    }
}
