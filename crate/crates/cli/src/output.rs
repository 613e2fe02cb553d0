//! CSV output: comma separated, one header row, LF line endings and
//! 17 significant digits.

use crate::error::CliError;
use lgt_core::integrate::TrajectoryRecord;
use lgt_core::lgt::{AbsCoords, AbsKind};
use std::io::Write;
use std::path::Path;

/// Round-trip exact, locale independent.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}").to_lowercase()
    }
}

pub fn trajectory_header(kinds: &[AbsKind]) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for (i, k) in kinds.iter().enumerate() {
        let rot: &[&str] = match k {
            AbsKind::QuatPos => &["p0", "p1", "p2", "p3"],
            AbsKind::AxisAnglePos => &["rho1", "rho2", "rho3"],
        };
        h.extend(rot.iter().map(|c| format!("q{i}_{c}")));
        h.extend(["r1", "r2", "r3"].iter().map(|c| format!("q{i}_{c}")));
    }
    for i in 0..kinds.len() {
        h.extend(["w1", "w2", "w3", "v1", "v2", "v3"].iter().map(|c| format!("V{i}_{c}")));
    }
    h.extend(["energy", "gnorm", "gvnorm", "qnorm_err"].map(String::from));
    h
}

/// Trajectory table. `qnorm_err` is the largest per-body value, or nan for
/// rotation-vector coordinates.
pub fn trajectory_csv(rec: &TrajectoryRecord) -> String {
    let kinds: Vec<AbsKind> = rec.rows[0].q.iter().map(AbsCoords::kind).collect();
    let mut out = trajectory_header(&kinds).join(",");
    out.push('\n');
    for row in &rec.rows {
        let mut cells = vec![fmt_f64(row.t)];
        for q in &row.q {
            cells.extend(q.to_vec().into_iter().map(fmt_f64));
        }
        cells.extend(row.v.iter().map(|&x| fmt_f64(x)));
        let qerr = row.qnorm_err.iter().copied().reduce(f64::max).unwrap_or(f64::NAN);
        cells.extend([row.energy, row.gnorm, row.gvnorm, qerr].map(fmt_f64));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn table_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Write to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
