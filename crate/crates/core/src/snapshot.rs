//! Snapshot series and their CSV form.
//!
//! One file per snapshot: a `# key=value ...` header line, a column line,
//! then one row per grid point. Floats are written with 17 significant
//! digits so that reading a file back reproduces the values exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Fvm,
    Homog,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Fvm => "fvm",
            SolverKind::Homog => "homog",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    /// Momentum `ρu`; only the finite-volume solver carries it.
    pub m: Option<Vec<f64>>,
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub scenario: String,
    pub solver: SolverKind,
    /// Extra header fields, written after `t`, `scenario` and `solver`.
    pub meta: Vec<(String, String)>,
    pub snapshots: Vec<Snapshot>,
}

impl Series {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(t: f64, scenario: &str, solver: &str, meta: &[(String, String)]) -> String {
    let mut h = format!("# t={t} scenario={scenario} solver={solver}");
    for (k, v) in meta {
        let _ = write!(h, " {k}={v}");
    }
    h
}

pub fn snapshot_csv(series: &Series, snap: &Snapshot) -> String {
    let mut out = header(snap.t, &series.scenario, series.solver.as_str(), &series.meta);
    out.push('\n');
    out.push_str(if snap.m.is_some() { "x,rho,m,q\n" } else { "x,rho,q\n" });
    for i in 0..snap.x.len() {
        out.push_str(&fmt_float(snap.x[i]));
        out.push(',');
        out.push_str(&fmt_float(snap.rho[i]));
        if let Some(m) = &snap.m {
            out.push(',');
            out.push_str(&fmt_float(m[i]));
        }
        out.push(',');
        out.push_str(&fmt_float(snap.q[i]));
        out.push('\n');
    }
    out
}

pub fn snapshot_file_name(series: &Series, index: usize) -> String {
    format!("{}_{}_{index:02}.csv", series.scenario, series.solver.as_str())
}

/// Writes every snapshot of the series into `dir`, returning the paths.
pub fn write_series(series: &Series, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    series
        .snapshots
        .iter()
        .enumerate()
        .map(|(i, snap)| {
            let path = dir.join(snapshot_file_name(series, i));
            fs::write(&path, snapshot_csv(series, snap))?;
            Ok(path)
        })
        .collect()
}

/// Header fields and snapshot of a file written by [`write_series`].
pub fn read_snapshot(path: &Path) -> Result<(Vec<(String, String)>, Snapshot)> {
    parse_snapshot(&fs::read_to_string(path)?)
}

pub fn parse_snapshot(text: &str) -> Result<(Vec<(String, String)>, Snapshot)> {
    let mut lines = text.lines().enumerate();
    let bad = |line: usize, reason: String| Error::Config {
        line: line + 1,
        reason,
    };
    let (n, head) = lines.next().ok_or_else(|| bad(0, "empty file".into()))?;
    let fields = parse_header(head).map_err(|r| bad(n, r))?;
    let t = fields
        .iter()
        .find(|(k, _)| k == "t")
        .ok_or_else(|| bad(n, "header lacks t".into()))?
        .1
        .parse::<f64>()
        .map_err(|e| bad(n, format!("bad t: {e}")))?;
    let (n, cols) = lines.next().ok_or_else(|| bad(1, "missing column line".into()))?;
    let with_m = match cols {
        "x,rho,m,q" => true,
        "x,rho,q" => false,
        other => return Err(bad(n, format!("unexpected columns `{other}`"))),
    };
    let width = if with_m { 4 } else { 3 };
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); width];
    for (n, line) in lines {
        let values = line
            .split(',')
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(n, format!("bad number: {e}")))?;
        if values.len() != width {
            return Err(bad(n, format!("expected {width} fields, got {}", values.len())));
        }
        for (c, v) in cols.iter_mut().zip(values) {
            c.push(v);
        }
    }
    let q = cols.pop().expect("width >= 3");
    let m = with_m.then(|| cols.pop().expect("width == 4"));
    let rho = cols.pop().expect("width >= 3");
    let x = cols.pop().expect("width >= 3");
    Ok((fields, Snapshot { t, x, rho, m, q }))
}

fn parse_header(line: &str) -> std::result::Result<Vec<(String, String)>, String> {
    let rest = line
        .strip_prefix('#')
        .ok_or_else(|| "header must start with `#`".to_string())?;
    rest.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("malformed header field `{kv}`"))
        })
        .collect()
}
