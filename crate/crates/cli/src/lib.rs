//! Command implementations behind the `orthospeed` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod svg;
pub mod verify;

use std::path::{Path, PathBuf};

use orthospeed_core::device::{device_report, DeviceParams, DeviceReport};
use orthospeed_core::{run_cell, run_sweep, CellResult, SweepEntry};

pub use config::RunConfig;
pub use error::{CliError, CliResult};

/// Files written by `simulate`.
#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub cell: CellResult,
    pub trace_path: PathBuf,
    pub events_path: PathBuf,
    pub plot_path: Option<PathBuf>,
}

pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path) -> CliResult<SimulateOutput> {
    let params = cfg.params()?;
    let field = cfg.field_spec().build()?;
    let grid = cfg.grid()?;
    let detector = cfg.detector()?;
    let cell = run_cell(&params, &field, &cfg.qubit()?, &grid, &detector, cfg.engine.into())?;

    let echo = cfg.to_json_line();
    let trace_path = out_dir.join(&cfg.output.trace_path);
    let events_path = out_dir.join(&cfg.output.events_path);
    output::write_file(&trace_path, &output::trace_csv(&echo, &cell))?;
    output::write_file(&events_path, &output::events_csv(&echo, &cell))?;
    let plot_path = match &cfg.output.plot_path {
        Some(p) => {
            let path = out_dir.join(p);
            svg::emit_svg(&cell.samples(), &cell.events, &path)?;
            Some(path)
        }
        None => None,
    };
    if let Some(dev) = cell.max_oracle_dev() {
        log::info!("max |rho_closed - rho_oracle| = {dev:e}");
    }
    Ok(SimulateOutput {
        cell,
        trace_path,
        events_path,
        plot_path,
    })
}

pub fn cmd_sweep(cfg: &RunConfig, out_dir: &Path) -> CliResult<(Vec<SweepEntry>, PathBuf)> {
    let sweep = cfg.sweep_config()?;
    let entries = run_sweep(&sweep)?;
    let path = out_dir.join(&cfg.output.summary_path);
    output::write_file(&path, &output::summary_csv(&cfg.to_json_line(), &sweep, &entries))?;
    Ok((entries, path))
}

pub fn cmd_device(dev: &DeviceParams) -> CliResult<DeviceReport> {
    Ok(device_report(dev)?)
}

/// Human-readable device summary.
pub fn format_device(dev: &DeviceParams, report: &DeviceReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("charging energy E_c      {:.6e} J\n", report.charging_energy));
    s.push_str(&format!("g (capacitance form)     {:.6e} rad/s\n", report.g));
    s.push_str(&format!("g (charging-energy form) {:.6e} rad/s\n", report.g_charging_form));
    s.push_str(&format!("ratio of the two forms   {:.6e}\n", report.g_form_ratio));
    s.push_str(&format!("detuning delta           {:.6e} rad/s\n", report.delta));
    s.push_str(&format!("g / omega                {:.6e}\n", report.scaled.g));
    s.push_str(&format!("delta / omega            {:.6e}\n", report.scaled.delta));
    let max_scale = (dev.e_j).max(dev.hbar * dev.omega);
    if report.regime_ok {
        s.push_str("regime                   ok: E_c >= 10 max(E_J, hbar omega)\n");
    } else {
        s.push_str(&format!(
            "regime                   WARNING: E_c / max(E_J, hbar omega) = {:.3} < 10\n",
            report.charging_energy / max_scale
        ));
    }
    s
}

pub fn device_json(report: &DeviceReport) -> serde_json::Value {
    serde_json::json!({
        "charging_energy": report.charging_energy,
        "g": report.g,
        "g_charging_form": report.g_charging_form,
        "g_form_ratio": report.g_form_ratio,
        "delta": report.delta,
        "regime_ok": report.regime_ok,
        "scaled": { "g": report.scaled.g, "delta": report.scaled.delta },
    })
}
