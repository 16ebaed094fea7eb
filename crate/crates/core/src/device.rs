//! Mapping from Cooper-pair-box circuit parameters to model parameters.

use crate::error::{Error, Result};
use crate::propagator::ModelParams;

/// Elementary charge in coulombs.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Regime check: charging energy must exceed this multiple of `max(E_J, ħω)`.
pub const CHARGING_DOMINANCE: f64 = 10.0;

/// SI circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// Gate capacitance (F).
    pub c_g: f64,
    /// Junction capacitance (F).
    pub c_j: f64,
    /// Cavity capacitance parameter (F).
    pub c_f: f64,
    /// Josephson energy (J).
    pub e_j: f64,
    /// Cavity angular frequency (rad/s).
    pub omega: f64,
    pub e: f64,
    pub hbar: f64,
}

impl DeviceParams {
    pub fn new(c_g: f64, c_j: f64, c_f: f64, e_j: f64, omega: f64) -> Result<Self> {
        let dev = Self {
            c_g,
            c_j,
            c_f,
            e_j,
            omega,
            e: ELEMENTARY_CHARGE,
            hbar: HBAR,
        };
        dev.validate()?;
        Ok(dev)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c_g", self.c_g),
            ("c_j", self.c_j),
            ("c_f", self.c_f),
            ("e_j", self.e_j),
            ("omega", self.omega),
            ("e", self.e),
            ("hbar", self.hbar),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("device parameter {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// `E_c = e² / (2 (C_g + C_J))` in joules.
pub fn charging_energy(dev: &DeviceParams) -> f64 {
    dev.e * dev.e / (2.0 * (dev.c_g + dev.c_j))
}

/// `g = sqrt(ω / (2 C_F ħ)) · e C_J / (C_g + C_J)`, the canonical capacitance form.
pub fn coupling_g(dev: &DeviceParams) -> f64 {
    (dev.omega / (2.0 * dev.c_f * dev.hbar)).sqrt() * dev.e * dev.c_j / (dev.c_g + dev.c_j)
}

/// `g = sqrt(ω / (C_F ħ)) · E_c / 2`, the charging-energy form. It does not
/// agree with [`coupling_g`]; it is computed only so the discrepancy can be reported.
pub fn coupling_g_charging_form(dev: &DeviceParams) -> f64 {
    (dev.omega / (dev.c_f * dev.hbar)).sqrt() * charging_energy(dev) / 2.0
}

/// `Δ = E_J/ħ − ω` in rad/s.
pub fn detuning_delta(dev: &DeviceParams) -> f64 {
    let delta = dev.e_j / dev.hbar - dev.omega;
    if !regime_ok(dev) {
        log::warn!(
            "charging energy {:.3e} J does not dominate max(E_J, hbar*omega) = {:.3e} J",
            charging_energy(dev),
            dev.e_j.max(dev.hbar * dev.omega)
        );
    }
    delta
}

/// `E_c ≥ 10 · max(E_J, ħω)`.
pub fn regime_ok(dev: &DeviceParams) -> bool {
    charging_energy(dev) >= CHARGING_DOMINANCE * dev.e_j.max(dev.hbar * dev.omega)
}

/// Everything the `device` command prints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceReport {
    pub charging_energy: f64,
    pub g: f64,
    pub g_charging_form: f64,
    /// `g / g_charging_form`.
    pub g_form_ratio: f64,
    pub delta: f64,
    pub regime_ok: bool,
    /// `(g/ω, Δ/ω)` in the scaled units used by the simulator.
    pub scaled: ModelParams,
}

pub fn device_report(dev: &DeviceParams) -> Result<DeviceReport> {
    dev.validate()?;
    let g = coupling_g(dev);
    let g_charging_form = coupling_g_charging_form(dev);
    let delta = detuning_delta(dev);
    Ok(DeviceReport {
        charging_energy: charging_energy(dev),
        g,
        g_charging_form,
        g_form_ratio: g / g_charging_form,
        delta,
        regime_ok: regime_ok(dev),
        scaled: ModelParams::new(g / dev.omega, delta / dev.omega)?,
    })
}
