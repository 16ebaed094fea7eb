//! Full traces, speed reports and parameter sweeps.
//!
//! A cell propagates one configuration over a time grid, reduces to the qubit,
//! decomposes, computes overlaps and runs the detector. Time points and sweep
//! cells are independent, so both are evaluated with rayon; results are
//! collected in index order and do not depend on the worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fieldstates::{make_binomial, make_coherent_approx, make_fock, FieldState};
use crate::oracle::Oracle;
use crate::orthodetect::{scan_events, speed_report, DetectorSettings, OrthogonalityEvent, SpeedReport, Window};
use crate::propagator::{closed_form_rho, ModelParams};
use crate::qubit::{QubitDensity, QubitInit};
use crate::spectral::{overlap_sample, InitialBasis, OverlapSample};

/// Binomial `μ` used when a configuration does not give one.
pub const DEFAULT_BINOMIAL_MU: usize = 10;

/// Which evaluator produces the reduced state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    ClosedForm,
    Oracle,
    /// Closed form, with the oracle deviation recorded for every sample.
    Both,
}

/// Uniform grid `t_k = t0 + k·dt`, `k = 0..=floor((t1 − t0)/dt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self> {
        let grid = Self { t0, t1, dt };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        Window::new(self.t0, self.t1)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > self.t1 - self.t0 {
            return Err(Error::InvalidGrid(format!("dt {} exceeds the window length", self.dt)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.t1 - self.t0) / self.dt + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn window(&self) -> Window {
        Window {
            t0: self.t0,
            t1: self.t1,
        }
    }
}

/// Declarative description of an initial field state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    Fock { n: usize },
    Binomial { mu: usize, eta: f64 },
    Coherent { nbar: f64, tail_tol: f64 },
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldState> {
        match *self {
            FieldSpec::Fock { n } => Ok(make_fock(n)),
            FieldSpec::Binomial { mu, eta } => make_binomial(mu, eta),
            FieldSpec::Coherent { nbar, tail_tol } => make_coherent_approx(nbar, tail_tol),
        }
    }
}

/// One sample of an overlap trace with everything the CSV output needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub rho: QubitDensity,
    pub lambda1: f64,
    pub lambda2: f64,
    pub sample: OverlapSample,
    /// `max |ρ_closed − ρ_oracle|`, only with [`Engine::Both`].
    pub oracle_dev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub rows: Vec<TraceRow>,
    pub events: Vec<OrthogonalityEvent>,
    pub report: SpeedReport,
}

impl CellResult {
    pub fn samples(&self) -> Vec<OverlapSample> {
        self.rows.iter().map(|r| r.sample).collect()
    }

    pub fn max_oracle_dev(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.oracle_dev).reduce(f64::max)
    }
}

/// Reduced-state evaluator for one configuration.
pub struct Evaluator {
    params: ModelParams,
    field: FieldState,
    qubit: QubitInit,
    basis: InitialBasis,
    engine: Engine,
    oracle: Option<Oracle>,
}

impl Evaluator {
    pub fn new(params: ModelParams, field: FieldState, qubit: QubitInit, engine: Engine) -> Result<Self> {
        params.validate()?;
        let oracle = match engine {
            Engine::ClosedForm => None,
            Engine::Oracle | Engine::Both => Some(Oracle::new(&params, &field, &qubit)?),
        };
        Ok(Self {
            params,
            field,
            qubit,
            basis: InitialBasis::from_qubit(&qubit),
            engine,
            oracle,
        })
    }

    pub fn rho(&self, t: f64) -> QubitDensity {
        match (self.engine, &self.oracle) {
            (Engine::Oracle, Some(oracle)) => oracle.rho(t),
            _ => closed_form_rho(&self.params, &self.field, &self.qubit, t),
        }
    }

    pub fn row(&self, t: f64) -> TraceRow {
        let rho = self.rho(t);
        let (pair, sample) = overlap_sample(t, &rho, &self.basis);
        let oracle_dev = match (self.engine, &self.oracle) {
            (Engine::Both, Some(oracle)) => Some(rho.max_abs_diff(&oracle.rho(t))),
            _ => None,
        };
        TraceRow {
            rho,
            lambda1: pair.lambda1,
            lambda2: pair.lambda2,
            sample,
            oracle_dev,
        }
    }

    pub fn sample(&self, t: f64) -> OverlapSample {
        overlap_sample(t, &self.rho(t), &self.basis).1
    }
}

/// Propagate → reduce → decompose → overlaps → detect, for one configuration.
pub fn run_cell(
    params: &ModelParams,
    field: &FieldState,
    qubit: &QubitInit,
    grid: &TimeGrid,
    detector: &DetectorSettings,
    engine: Engine,
) -> Result<CellResult> {
    grid.validate()?;
    detector.validate()?;
    let evaluator = Evaluator::new(*params, field.clone(), *qubit, engine)?;
    let rows: Vec<TraceRow> = (0..grid.len()).into_par_iter().map(|k| evaluator.row(grid.time(k))).collect();
    if let Some(bad) = rows.iter().find(|r| !r.rho.is_finite()) {
        return Err(Error::Numeric(format!("non-finite reduced state at t = {}", bad.sample.t)));
    }
    let samples: Vec<OverlapSample> = rows.iter().map(|r| r.sample).collect();
    let events = scan_events(&samples, detector, |t| evaluator.sample(t))?;
    let report = speed_report(&events, grid.window(), detector.merge_distance());
    Ok(CellResult { rows, events, report })
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    G,
    Delta,
    N,
    Mu,
    Eta,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::Delta => "delta",
            Axis::N => "n",
            Axis::Mu => "mu",
            Axis::Eta => "eta",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(Axis::G),
            "delta" => Ok(Axis::Delta),
            "n" => Ok(Axis::N),
            "mu" => Ok(Axis::Mu),
            "eta" => Ok(Axis::Eta),
            other => Err(Error::Domain(format!("unknown sweep axis '{other}'"))),
        }
    }
}

fn as_count(axis: Axis, value: f64) -> Result<usize> {
    if value >= 0.0 && value.fract() == 0.0 && value.is_finite() {
        Ok(value as usize)
    } else {
        Err(Error::Domain(format!("axis {} needs non-negative integers, got {value}", axis.name())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: ModelParams,
    pub field: FieldSpec,
    pub qubit: QubitInit,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub grid: TimeGrid,
    pub detector: DetectorSettings,
    pub engine: Engine,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Domain("sweep needs at least one axis value".into()));
        }
        self.base.validate()?;
        self.grid.validate()?;
        self.detector.validate()?;
        Ok(())
    }

    /// Model parameters and field for one axis value.
    pub fn cell(&self, value: f64) -> Result<(ModelParams, FieldSpec)> {
        let mut params = self.base;
        let mut field = self.field;
        match (self.axis, &mut field) {
            (Axis::G, _) => params.g = value,
            (Axis::Delta, _) => params.delta = value,
            (Axis::N, FieldSpec::Fock { n }) => *n = as_count(self.axis, value)?,
            (Axis::Mu, FieldSpec::Binomial { mu, .. }) => *mu = as_count(self.axis, value)?,
            (Axis::Eta, FieldSpec::Binomial { eta, .. }) => *eta = value,
            (axis, _) => {
                return Err(Error::Domain(format!(
                    "axis {} does not apply to field {:?}",
                    axis.name(),
                    self.field
                )))
            }
        }
        params.validate()?;
        Ok((params, field))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub value: f64,
    pub report: SpeedReport,
}

/// One report per axis value, in input order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepEntry>> {
    cfg.validate()?;
    cfg.values
        .par_iter()
        .map(|&value| {
            let run = || -> Result<SweepEntry> {
                let (params, spec) = cfg.cell(value)?;
                let field = spec.build()?;
                let cell = run_cell(&params, &field, &cfg.qubit, &cfg.grid, &cfg.detector, cfg.engine)?;
                Ok(SweepEntry {
                    value,
                    report: cell.report,
                })
            };
            run().map_err(|e| Error::Sweep {
                value,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Numeric(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_length() {
        assert_eq!(TimeGrid::new(0.0, 40.0, 0.005).unwrap().len(), 8001);
        assert_eq!(TimeGrid::new(0.0, 1.0, 0.3).unwrap().len(), 4);
        assert!(TimeGrid::new(1.0, 1.0, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn resonant_vacuum_cell() {
        let params = ModelParams::new(0.1, 0.0).unwrap();
        let grid = TimeGrid::new(0.0, 40.0, 0.005).unwrap();
        let cell = run_cell(&params, &make_fock(0), &QubitInit::default(), &grid, &DetectorSettings::default(), Engine::ClosedForm).unwrap();
        assert_eq!(cell.rows.len(), 8001);
        let pair11: Vec<f64> = cell.events.iter().filter(|e| e.pair == (1, 1)).map(|e| e.t_event).collect();
        assert_eq!(pair11.len(), 1);
        assert!((pair11[0] - PI / 0.1).abs() < 1e-5);
    }

    #[test]
    fn engine_both_records_deviation() {
        let params = ModelParams::new(0.3, 0.5).unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 0.05).unwrap();
        let cell = run_cell(&params, &make_fock(2), &QubitInit::default(), &grid, &DetectorSettings::default(), Engine::Both).unwrap();
        let dev = cell.max_oracle_dev().unwrap();
        assert!(dev < 1e-9, "{dev:e}");
    }

    #[test]
    fn sweep_axis_application() {
        let cfg = SweepConfig {
            base: ModelParams::new(0.1, 0.3).unwrap(),
            field: FieldSpec::Fock { n: 1 },
            qubit: QubitInit::default(),
            axis: Axis::N,
            values: vec![1.0, 3.0],
            grid: TimeGrid::new(0.0, 5.0, 0.01).unwrap(),
            detector: DetectorSettings::default(),
            engine: Engine::ClosedForm,
        };
        assert_eq!(cfg.cell(3.0).unwrap().1, FieldSpec::Fock { n: 3 });
        assert!(cfg.cell(2.5).is_err());
        let bad = SweepConfig { axis: Axis::Eta, ..cfg.clone() };
        assert!(bad.cell(0.1).is_err());
        let entries = run_sweep(&cfg).unwrap();
        assert_eq!(entries.iter().map(|e| e.value).collect::<Vec<_>>(), vec![1.0, 3.0]);

        let empty = SweepConfig { values: vec![], ..cfg.clone() };
        assert!(run_sweep(&empty).is_err());
        let failing = SweepConfig { axis: Axis::G, values: vec![0.1, -1.0], ..cfg };
        assert!(matches!(run_sweep(&failing), Err(Error::Sweep { value, .. }) if value == -1.0));
    }
}
