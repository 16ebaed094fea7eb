//! JSON run configuration with dotted-path overrides.
//!
//! Every section has defaults, so an empty object `{}` is a complete
//! configuration (Δ = 1, g = 0.1, one photon, window (0, 40), dt = 0.005).
//! Unknown keys are rejected at every level.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use orthospeed_core::sweep::DEFAULT_BINOMIAL_MU;
use orthospeed_core::{
    Axis, DetectorSettings, Engine, FieldSpec, ModelParams, QubitInit, SweepConfig, TimeGrid,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub g: f64,
    pub delta: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { g: 0.1, delta: 1.0 }
    }
}

fn default_mu() -> usize {
    DEFAULT_BINOMIAL_MU
}

fn default_tail_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSection {
    Fock {
        n: usize,
    },
    Binomial {
        #[serde(default = "default_mu")]
        mu: usize,
        eta: f64,
    },
    Coherent {
        nbar: f64,
        #[serde(default = "default_tail_tol")]
        tail_tol: f64,
    },
}

impl Default for FieldSection {
    fn default() -> Self {
        FieldSection::Fock { n: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QubitSection {
    pub theta: f64,
    pub phi: f64,
}

impl Default for QubitSection {
    fn default() -> Self {
        Self {
            theta: FRAC_PI_4,
            phi: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            t0: 0.0,
            t1: 40.0,
            dt: 0.005,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSection {
    pub epsilon_orth: f64,
    pub refine_tol: f64,
}

impl Default for DetectorSection {
    fn default() -> Self {
        let d = DetectorSettings::default();
        Self {
            epsilon_orth: d.epsilon_orth,
            refine_tol: d.refine_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub trace_path: String,
    pub events_path: String,
    pub summary_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_path: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            trace_path: "trace.csv".into(),
            events_path: "events.csv".into(),
            summary_path: "sweep.csv".into(),
            plot_path: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineName {
    #[default]
    ClosedForm,
    Oracle,
    Both,
}

impl From<EngineName> for Engine {
    fn from(e: EngineName) -> Self {
        match e {
            EngineName::ClosedForm => Engine::ClosedForm,
            EngineName::Oracle => Engine::Oracle,
            EngineName::Both => Engine::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    #[default]
    G,
    Delta,
    N,
    Mu,
    Eta,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Self {
        match a {
            AxisName::G => Axis::G,
            AxisName::Delta => Axis::Delta,
            AxisName::N => Axis::N,
            AxisName::Mu => Axis::Mu,
            AxisName::Eta => Axis::Eta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub axis: AxisName,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub field: FieldSection,
    pub qubit: QubitSection,
    pub time: TimeSection,
    pub detector: DetectorSection,
    pub output: OutputSection,
    pub engine: EngineName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Single-line JSON echo, as written into output headers.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Applies `key=value` assignments with dotted keys, in order. Values are
    /// parsed as JSON and fall back to a bare string, so `field.kind=binomial`
    /// needs no quotes. Changing `field.kind` discards the other field keys.
    /// The result is validated once, after the last assignment.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, assignments: &[S]) -> CliResult<()> {
        let mut tree = serde_json::to_value(&*self).expect("config serializes");
        for assignment in assignments {
            let assignment = assignment.as_ref();
            let (key, raw) = assignment
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("override `{assignment}` is not key=value")))?;
            let path: Vec<&str> = key.trim().split('.').collect();
            if path.iter().any(|p| p.is_empty()) {
                return Err(CliError::Validation(format!("bad override key `{key}`")));
            }
            let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
            if path == ["field", "kind"] {
                tree["field"] = Value::Object(Default::default());
            }
            set_path(&mut tree, &path, value);
        }
        *self = serde_json::from_value(tree).map_err(|e| CliError::Validation(format!("override: {e}")))?;
        Ok(())
    }

    pub fn apply_override(&mut self, assignment: &str) -> CliResult<()> {
        self.apply_overrides(&[assignment])
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        Ok(ModelParams::new(self.model.g, self.model.delta)?)
    }

    pub fn field_spec(&self) -> FieldSpec {
        match self.field {
            FieldSection::Fock { n } => FieldSpec::Fock { n },
            FieldSection::Binomial { mu, eta } => FieldSpec::Binomial { mu, eta },
            FieldSection::Coherent { nbar, tail_tol } => FieldSpec::Coherent { nbar, tail_tol },
        }
    }

    pub fn qubit(&self) -> CliResult<QubitInit> {
        let q = QubitInit {
            theta: self.qubit.theta,
            phi: self.qubit.phi,
        };
        if !(q.theta.is_finite() && q.phi.is_finite()) {
            return Err(CliError::Validation("qubit angles must be finite".into()));
        }
        Ok(q)
    }

    pub fn grid(&self) -> CliResult<TimeGrid> {
        Ok(TimeGrid::new(self.time.t0, self.time.t1, self.time.dt)?)
    }

    pub fn detector(&self) -> CliResult<DetectorSettings> {
        let d = DetectorSettings {
            epsilon_orth: self.detector.epsilon_orth,
            refine_tol: self.detector.refine_tol,
        };
        d.validate()?;
        Ok(d)
    }

    /// Sweep settings with axis values sorted and deduplicated.
    pub fn sweep_config(&self) -> CliResult<SweepConfig> {
        let section = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::Validation("sweep needs a `sweep` section with axis and values".into()))?;
        if section.values.is_empty() {
            return Err(CliError::Validation("sweep axis list is empty".into()));
        }
        if let Some(bad) = section.values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Validation(format!("sweep value {bad} is not finite")));
        }
        let unique: BTreeSet<u64> = section.values.iter().map(|v| canonical_bits(*v)).collect();
        if unique.len() < section.values.len() {
            log::warn!("dropping {} duplicate sweep value(s)", section.values.len() - unique.len());
        }
        let mut values: Vec<f64> = unique.into_iter().map(f64::from_bits).collect();
        values.sort_by(f64::total_cmp);

        let cfg = SweepConfig {
            base: self.params()?,
            field: self.field_spec(),
            qubit: self.qubit()?,
            axis: section.axis.into(),
            values,
            grid: self.grid()?,
            detector: self.detector()?,
            engine: self.engine.into(),
        };
        cfg.validate()?;
        for &v in &cfg.values {
            let (_, spec) = cfg.cell(v)?;
            spec.build()?;
        }
        Ok(cfg)
    }
}

/// Bit pattern with −0 folded onto +0.
fn canonical_bits(v: f64) -> u64 {
    if v == 0.0 {
        0.0f64.to_bits()
    } else {
        v.to_bits()
    }
}

fn set_path(tree: &mut Value, path: &[&str], value: Value) {
    let (head, rest) = path.split_first().expect("nonempty path");
    if !tree.is_object() {
        *tree = Value::Object(Default::default());
    }
    let map = tree.as_object_mut().expect("object");
    if rest.is_empty() {
        map.insert((*head).to_string(), value);
    } else {
        set_path(map.entry(*head).or_insert(Value::Null), rest, value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.field, FieldSection::Fock { n: 1 });
        assert_eq!(cfg.grid().unwrap().len(), 8001);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"modle": {}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"model": {"g": 0.1, "gamma": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"field": {"kind": "fock", "n": 1, "eta": 0.1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"field": {"kind": "squeezed"}}"#).is_err());
    }

    #[test]
    fn binomial_mu_defaults() {
        let cfg = RunConfig::from_json(r#"{"field": {"kind": "binomial", "eta": 0.1}}"#).unwrap();
        assert_eq!(cfg.field_spec(), FieldSpec::Binomial { mu: 10, eta: 0.1 });
    }

    #[test]
    fn overrides() {
        let mut cfg = RunConfig::default();
        cfg.apply_override("model.g=0.35").unwrap();
        cfg.apply_override("engine=both").unwrap();
        cfg.apply_overrides(&["field.kind=binomial", "field.eta=0.8"]).unwrap();
        cfg.apply_override("sweep.values=[0.3, 0.5]").unwrap();
        assert_eq!(cfg.model.g, 0.35);
        assert_eq!(cfg.engine, EngineName::Both);
        assert_eq!(cfg.field, FieldSection::Binomial { mu: 10, eta: 0.8 });
        assert_eq!(cfg.sweep.as_ref().unwrap().values, vec![0.3, 0.5]);

        assert!(cfg.apply_override("model.gg=1").is_err());
        assert!(cfg.apply_override("model.g").is_err());
        assert!(cfg.apply_override("model.g=fast").is_err());
    }

    #[test]
    fn json_echo_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.apply_override("model.g=0.1234567890123456").unwrap();
        cfg.apply_override("output.plot_path=plot.svg").unwrap();
        let back = RunConfig::from_json(&cfg.to_json_line()).unwrap();
        assert_eq!(back, cfg);
        assert!(!cfg.to_json_line().contains('\n'));
    }

    #[test]
    fn sweep_values_sorted_and_deduplicated() {
        let mut cfg = RunConfig::default();
        cfg.apply_override("sweep.values=[0.5, 0.1, 0.25, 0.1, -0.0, 0.0]").unwrap();
        let sc = cfg.sweep_config().unwrap();
        assert_eq!(sc.values, vec![0.0, 0.1, 0.25, 0.5]);
    }

    #[test]
    fn sweep_validation() {
        let mut cfg = RunConfig::default();
        assert!(matches!(cfg.sweep_config(), Err(CliError::Validation(_))));
        cfg.apply_override("sweep.axis=g").unwrap();
        assert!(matches!(cfg.sweep_config(), Err(CliError::Validation(_))));
        cfg.apply_override("sweep.axis=eta").unwrap();
        cfg.apply_override("sweep.values=[0.1]").unwrap();
        // eta does not apply to a Fock field
        assert!(cfg.sweep_config().is_err());
        cfg.apply_override("sweep.axis=n").unwrap();
        cfg.apply_override("sweep.values=[1.5]").unwrap();
        assert!(cfg.sweep_config().is_err());
    }

    #[test]
    fn invalid_window() {
        let mut cfg = RunConfig::default();
        cfg.apply_override("time.t1=0").unwrap();
        assert_eq!(cfg.grid().unwrap_err().exit_code(), 2);
    }
}
