//! CSV telemetry, run summaries and plot-ready series.
//!
//! Angles are written in degrees and every number with nine significant
//! digits, so identical runs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::{MetricsRecord, SummaryStats};
use crate::sim::SimResult;

pub const CSV_COLUMNS: [&str; 21] = [
    "t_s",
    "target_x_m",
    "target_y_m",
    "target_z_m",
    "tracker_x_m",
    "tracker_y_m",
    "theta_true_deg",
    "phi_true_deg",
    "theta_meas_deg",
    "phi_meas_deg",
    "belt_a_m",
    "belt_b_m",
    "tension_n",
    "fx_n",
    "fy_n",
    "fz_n",
    "alpha_deg",
    "cmd_vx_mps",
    "cmd_vy_mps",
    "saturated",
    "horizontal_force_n",
];

/// Shortest of fixed or scientific notation holding `digits` significant
/// digits, like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn row(r: &MetricsRecord) -> Vec<String> {
    let f = |v: f64| format_sig(v, 9);
    let d = |v: f64| format_sig(v.to_degrees(), 9);
    vec![
        f(r.t),
        f(r.target[0]),
        f(r.target[1]),
        f(r.target[2]),
        f(r.tracker[0]),
        f(r.tracker[1]),
        d(r.theta_true),
        d(r.phi_true),
        d(r.theta_meas),
        d(r.phi_meas),
        f(r.belt_a),
        f(r.belt_b),
        f(r.tension),
        f(r.fx),
        f(r.fy),
        f(r.fz),
        d(r.alpha),
        f(r.cmd_velocity[0]),
        f(r.cmd_velocity[1]),
        u8::from(r.saturated).to_string(),
        f(r.horizontal_force()),
    ]
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

pub fn write_csv(records: &[MetricsRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    w.write_record(CSV_COLUMNS).map_err(|e| csv_err(path, e))?;
    for r in records {
        w.write_record(row(r)).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Parses a file written by [`write_csv`] back into records (radians).
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<MetricsRecord>> {
    let path = path.as_ref();
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: "unexpected CSV header".into(),
        });
    }
    let mut out = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                message: format!("row {}: {e}", line + 2),
            })?;
        let r = |i: usize| v[i].to_radians();
        out.push(MetricsRecord {
            t: v[0],
            target: [v[1], v[2], v[3]],
            tracker: [v[4], v[5]],
            theta_true: r(6),
            phi_true: r(7),
            theta_meas: r(8),
            phi_meas: r(9),
            belt_a: v[10],
            belt_b: v[11],
            tension: v[12],
            fx: v[13],
            fy: v[14],
            fz: v[15],
            alpha: r(16),
            cmd_velocity: [v[17], v[18]],
            saturated: v[19] != 0.0,
        });
    }
    Ok(out)
}

/// Writes the summary as TOML.
pub fn write_summary(stats: &SummaryStats, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = toml::to_string(stats).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Paths written by [`emit_plot_data`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFiles {
    /// `t_s, alpha_deg`
    pub angle: PathBuf,
    /// `t_s, fx_n, fy_n`
    pub horizontal_force: PathBuf,
}

/// Writes the angle-from-vertical and horizontal-force time series into
/// `dir`.
pub fn emit_plot_data(records: &[MetricsRecord], dir: impl AsRef<Path>) -> Result<PlotFiles> {
    if records.is_empty() {
        return Err(Error::EmptyRun);
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = PlotFiles {
        angle: dir.join("angle_from_vertical.csv"),
        horizontal_force: dir.join("horizontal_force.csv"),
    };

    let mut w = csv_writer(&files.angle)?;
    let p = &files.angle;
    w.write_record(["t_s", "alpha_deg"])
        .map_err(|e| csv_err(p, e))?;
    for r in records {
        w.write_record([format_sig(r.t, 9), format_sig(r.alpha.to_degrees(), 9)])
            .map_err(|e| csv_err(p, e))?;
    }
    w.flush().map_err(|e| Error::io(p, e))?;

    let mut w = csv_writer(&files.horizontal_force)?;
    let p = &files.horizontal_force;
    w.write_record(["t_s", "fx_n", "fy_n"])
        .map_err(|e| csv_err(p, e))?;
    for r in records {
        w.write_record([format_sig(r.t, 9), format_sig(r.fx, 9), format_sig(r.fy, 9)])
            .map_err(|e| csv_err(p, e))?;
    }
    w.flush().map_err(|e| Error::io(p, e))?;
    Ok(files)
}

/// Writes `records.csv`, `summary.toml` and the two plot series of one run
/// into `dir`.
pub fn write_run(result: &SimResult, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_csv(&result.records, dir.join("records.csv"))?;
    write_summary(&result.summary, dir.join("summary.toml"))?;
    emit_plot_data(&result.records, dir)?;
    Ok(())
}
