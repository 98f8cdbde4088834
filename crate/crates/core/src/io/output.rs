use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::summary::RunSummary;
use super::IoError;
use crate::robot::Leg;
use crate::sim::{SimLog, TickRecord};

/// Version tag written in the first line of every CSV. Bump it whenever a
/// column is added, removed or reordered.
pub const CSV_SCHEMA: &str = "crawl-log/1";

/// Columns of the observer CSV.
pub const OBSERVER_COLUMNS: [&str; 10] =
    ["t", "fhat_x", "fhat_y", "fhat_z", "tauhat_x", "tauhat_y", "tauhat_z", "dxcom_x", "dxcom_y", "divergence_flag"];

const AXES: [&str; 3] = ["x", "y", "z"];

/// Formats `v` with 9 significant digits, fixed-point for moderate
/// exponents and scientific otherwise, with trailing zeros removed.
pub fn format_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

/// Column names of the main log CSV, in order.
pub fn log_columns() -> Vec<String> {
    let mut c: Vec<String> = vec!["t".into(), "phase".into(), "leg".into()];
    let v3 = |c: &mut Vec<String>, prefix: &str| c.extend(AXES.iter().map(|a| format!("{prefix}_{a}")));
    v3(&mut c, "com");
    v3(&mut c, "com_ref");
    c.extend(["roll", "pitch", "yaw"].map(String::from));
    for leg in Leg::ALL {
        v3(&mut c, &format!("foot_{}", leg.name().to_lowercase()));
    }
    for leg in Leg::ALL {
        c.push(format!("contact_{}", leg.name().to_lowercase()));
    }
    for leg in Leg::ALL {
        v3(&mut c, &format!("grf_{}", leg.name().to_lowercase()));
    }
    for leg in Leg::ALL {
        v3(&mut c, &format!("grf_des_{}", leg.name().to_lowercase()));
    }
    v3(&mut c, "n");
    v3(&mut c, "fhat");
    v3(&mut c, "tauhat");
    v3(&mut c, "fext");
    v3(&mut c, "tauext");
    c.extend(["zmp_x", "zmp_y", "dxcom_x", "dxcom_y", "margin", "divergence_flag", "h_target", "height"].map(String::from));
    c.push("grf_err_norm".into());
    v3(&mut c, "p");
    v3(&mut c, "k");
    c
}

fn leg_code(leg: Option<Leg>) -> f64 {
    leg.map_or(-1.0, |l| l.index() as f64)
}

/// Values of one record in [`log_columns`] order.
fn row(r: &TickRecord) -> Vec<f64> {
    let mut v = vec![r.t, r.phase.code() as f64, leg_code(r.phase.leg())];
    v.extend(r.com.iter());
    v.extend(r.com_ref.iter());
    v.extend(r.euler.iter());
    for f in &r.feet {
        v.extend(f.iter());
    }
    v.extend(r.contact.iter().map(|&c| if c { 1.0 } else { 0.0 }));
    for f in &r.grf {
        v.extend(f.iter());
    }
    for f in &r.grf_des {
        v.extend(f.iter());
    }
    v.extend(r.normal.iter());
    v.extend(r.w_hat.iter());
    v.extend(r.w_ext.iter());
    v.extend(r.zmp.iter());
    v.extend(r.zmp_shift.iter());
    v.push(r.margin.unwrap_or(f64::NAN));
    v.push(if r.diverged { 1.0 } else { 0.0 });
    v.push(r.h_target);
    v.push(r.height);
    v.push(r.grf_err_norm());
    v.extend(r.momentum.iter());
    v
}

fn observer_row(r: &TickRecord) -> Vec<f64> {
    let mut v = vec![r.t];
    v.extend(r.w_hat.iter());
    v.extend(r.zmp_shift.iter());
    v.push(if r.diverged { 1.0 } else { 0.0 });
    v
}

fn csv(columns: &[String], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = format!("# schema: {CSV_SCHEMA}\n{}\n", columns.join(","));
    for r in rows {
        let cells: Vec<String> = r.into_iter().map(format_sig).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Main per-tick CSV. Phases are coded 0..=4 (move_body, unload, swing,
/// search, load) and legs 0..=3 (LF, RF, LH, RH) or −1.
pub fn log_csv(log: &SimLog) -> String {
    csv(&log_columns(), log.records.iter().map(row))
}

pub fn observer_csv(log: &SimLog) -> String {
    let cols: Vec<String> = OBSERVER_COLUMNS.iter().map(|s| s.to_string()).collect();
    csv(&cols, log.records.iter().map(observer_row))
}

/// Event list: t, leg, event, detail.
pub fn events_csv(log: &SimLog) -> String {
    let mut out = format!("# schema: {CSV_SCHEMA}\nt,leg,event,detail\n");
    for e in &log.events {
        let leg = e.leg.map_or("", |l| l.name());
        let _ = writeln!(out, "{},{leg},{},{}", format_sig(e.t), e.kind.name(), e.kind);
    }
    out
}

/// Paths written by [`emit_log`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmittedFiles {
    pub log: PathBuf,
    pub observer: PathBuf,
    pub events: PathBuf,
    pub summary: PathBuf,
}

/// Writes `log.csv`, `observer.csv`, `events.csv` and `summary.json` into
/// `dir`, creating it if needed.
pub fn emit_log(log: &SimLog, dir: &Path) -> Result<EmittedFiles, IoError> {
    std::fs::create_dir_all(dir)?;
    let files = EmittedFiles {
        log: dir.join("log.csv"),
        observer: dir.join("observer.csv"),
        events: dir.join("events.csv"),
        summary: dir.join("summary.json"),
    };
    std::fs::write(&files.log, log_csv(log))?;
    std::fs::write(&files.observer, observer_csv(log))?;
    std::fs::write(&files.events, events_csv(log))?;
    std::fs::write(&files.summary, RunSummary::from_log(log).to_json() + "\n")?;
    Ok(files)
}

fn select(columns: &[String], table: &[Vec<String>], channels: &[&str]) -> Result<String, IoError> {
    let idx: Vec<usize> = channels
        .iter()
        .map(|ch| {
            columns.iter().position(|c| c == ch).ok_or_else(|| IoError::UnknownChannel {
                name: ch.to_string(),
                available: columns.to_vec(),
            })
        })
        .collect::<Result<_, _>>()?;
    let mut out = channels.join(" ");
    out.push('\n');
    for r in table {
        let cells: Vec<&str> = idx.iter().map(|&i| r[i].as_str()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Space-separated columns for the requested channels, with a header
/// line. Channel names are those of [`log_columns`].
pub fn plot_data(log: &SimLog, channels: &[&str]) -> Result<String, IoError> {
    let table: Vec<Vec<String>> = log.records.iter().map(|r| row(r).into_iter().map(format_sig).collect()).collect();
    select(&log_columns(), &table, channels)
}

/// [`plot_data`] over a CSV previously written by [`log_csv`] or
/// [`observer_csv`].
pub fn plot_csv(text: &str, channels: &[&str]) -> Result<String, IoError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| IoError::MalformedLog("missing header".into()))?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut table = Vec::new();
    for (i, line) in lines.enumerate() {
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        if cells.len() != columns.len() {
            return Err(IoError::MalformedLog(format!("row {} has {} cells, expected {}", i + 1, cells.len(), columns.len())));
        }
        table.push(cells);
    }
    select(&columns, &table, channels)
}
