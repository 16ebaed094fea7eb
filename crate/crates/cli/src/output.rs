//! CSV serialization. Numbers carry 17 significant digits; header comments
//! start with `#` and include the effective configuration as one JSON line.

use std::fmt::Write as _;
use std::path::Path;

use orthospeed_core::{CellResult, SpeedReport, SweepConfig, SweepEntry};

use crate::error::{CliError, CliResult};

pub const TRACE_COLUMNS: &str = "t,rho11,rho22,re_rho12,im_rho12,lambda1,lambda2,sp11,sp12,sp21,sp22,degenerate";
pub const EVENT_COLUMNS: &str = "pair_i,pair_j,t_event,residual";
pub const SUMMARY_COLUMNS: &str = "value,count11,count12,count21,count22,total_events,first_orthogonality_time,speed";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(kind: &str, config_json: &str) -> String {
    format!("# orthospeed {kind}\n# config: {config_json}\n")
}

fn report_comments(out: &mut String, report: &SpeedReport) {
    let c = report.counts;
    let first = report.first_orthogonality_time.map(num).unwrap_or_else(|| "none".into());
    writeln!(out, "# window: {} {}", num(report.window.t0), num(report.window.t1)).unwrap();
    writeln!(out, "# counts: {} {} {} {}", c[0][0], c[0][1], c[1][0], c[1][1]).unwrap();
    writeln!(out, "# total_events: {}", report.total_events).unwrap();
    writeln!(out, "# first_orthogonality_time: {first}").unwrap();
    writeln!(out, "# speed: {}", num(report.speed)).unwrap();
}

/// One row per grid point; an `oracle_dev` column is appended when the cell
/// was run against the oracle as well.
pub fn trace_csv(config_json: &str, cell: &CellResult) -> String {
    let with_dev = cell.rows.iter().any(|r| r.oracle_dev.is_some());
    let mut out = header("trace", config_json);
    out.push_str(TRACE_COLUMNS);
    if with_dev {
        out.push_str(",oracle_dev");
    }
    out.push('\n');
    for row in &cell.rows {
        let s = &row.sample;
        let fields = [
            s.t,
            row.rho.rho11,
            row.rho.rho22,
            row.rho.rho12.re,
            row.rho.rho12.im,
            row.lambda1,
            row.lambda2,
            s.sp[0][0],
            s.sp[0][1],
            s.sp[1][0],
            s.sp[1][1],
        ];
        for x in fields {
            out.push_str(&num(x));
            out.push(',');
        }
        out.push(if s.degenerate { '1' } else { '0' });
        if with_dev {
            out.push(',');
            out.push_str(&num(row.oracle_dev.unwrap_or(f64::NAN)));
        }
        out.push('\n');
    }
    out
}

pub fn events_csv(config_json: &str, cell: &CellResult) -> String {
    let mut out = header("events", config_json);
    report_comments(&mut out, &cell.report);
    out.push_str(EVENT_COLUMNS);
    out.push('\n');
    for e in &cell.events {
        writeln!(out, "{},{},{},{}", e.pair.0, e.pair.1, num(e.t_event), num(e.residual)).unwrap();
    }
    out
}

/// One row per axis value.
pub fn summary_csv(config_json: &str, sweep: &SweepConfig, entries: &[SweepEntry]) -> String {
    let mut out = header("sweep", config_json);
    writeln!(out, "# axis: {}", sweep.axis.name()).unwrap();
    out.push_str(SUMMARY_COLUMNS);
    out.push('\n');
    for entry in entries {
        let r = &entry.report;
        let c = r.counts;
        let first = r.first_orthogonality_time.map(num).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(entry.value),
            c[0][0],
            c[0][1],
            c[1][0],
            c[1][1],
            r.total_events,
            first,
            num(r.speed)
        )
        .unwrap();
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// Strips the `# config: ` echo out of a file written by this module.
pub fn echoed_config(contents: &str) -> Option<&str> {
    contents
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# config: "))
}
