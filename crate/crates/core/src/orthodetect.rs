//! Orthogonality events and speed-of-computation metrics.
//!
//! An event is a local minimum of `|Sp_ij(t)|` that, after refinement on the
//! continuous evaluator, lies below `epsilon_orth`. Minima are located on the
//! sampled grid, then refined by golden-section search on `|Sp_ij|²` inside
//! the bracket formed by the two neighbouring grid points.

use crate::error::{Error, Result};
use crate::spectral::OverlapSample;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_ITERS: usize = 200;

/// Threshold and refinement settings for [`scan_events`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSettings {
    pub epsilon_orth: f64,
    pub refine_tol: f64,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self {
            epsilon_orth: 0.02,
            refine_tol: 1e-7,
        }
    }
}

impl DetectorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_orth > 0.0 && self.epsilon_orth <= 0.1) {
            return Err(Error::Domain(format!("epsilon_orth must lie in (0, 0.1], got {}", self.epsilon_orth)));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(Error::Domain(format!("refine_tol must be positive, got {}", self.refine_tol)));
        }
        Ok(())
    }

    /// Events of one pair closer than this are merged.
    pub fn merge_distance(&self) -> f64 {
        10.0 * self.refine_tol
    }
}

/// Half-open description of a scan window `(t0, t1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub t0: f64,
    pub t1: f64,
}

impl Window {
    pub fn new(t0: f64, t1: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::InvalidGrid(format!("window ({t0}, {t1}) must satisfy t0 < t1")));
        }
        Ok(Self { t0, t1 })
    }

    pub fn length(&self) -> f64 {
        self.t1 - self.t0
    }
}

/// Refined vanishing of `|⟨ν_i|u_j⟩|`; `pair` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityEvent {
    pub pair: (usize, usize),
    pub t_event: f64,
    pub residual: f64,
}

/// Event statistics over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedReport {
    pub window: Window,
    /// `counts[i][j]` is the number of events of pair `(i+1, j+1)`.
    pub counts: [[usize; 2]; 2],
    /// Distinct orthogonality instants. The four overlaps vanish in
    /// coincident pairs (`|Sp11| = |Sp22|`, `|Sp12| = |Sp21|`), so events
    /// closer than the coincidence tolerance are counted once.
    pub total_events: usize,
    pub first_orthogonality_time: Option<f64>,
    /// `total_events / (t1 − t0)`.
    pub speed: f64,
}

impl SpeedReport {
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i - 1][j - 1]
    }
}

/// Grid indices that are local minima of `values`, restricted to interior
/// points whose neighbours are all usable.
fn grid_minima(values: &[f64], usable: &[bool]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| {
            usable[k - 1]
                && usable[k]
                && usable[k + 1]
                && values[k] <= values[k - 1]
                && values[k] < values[k + 1]
        })
        .collect()
}

/// Golden-section minimization of `f` on `[a, b]` down to width `tol`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_GOLDEN_ITERS {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Scans a sampled overlap trace for orthogonality events of all four pairs.
///
/// `evaluator` must reproduce the trace's overlaps at arbitrary times; it is
/// used for refinement. Degenerate samples never take part in a minimum.
/// Results are ordered by pair, then time.
pub fn scan_events<F>(trace: &[OverlapSample], settings: &DetectorSettings, evaluator: F) -> Result<Vec<OrthogonalityEvent>>
where
    F: Fn(f64) -> OverlapSample,
{
    settings.validate()?;
    if let Some(w) = trace.windows(2).find(|w| w[1].t.partial_cmp(&w[0].t) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidGrid(format!(
            "trace times must be strictly increasing ({} then {})",
            w[0].t, w[1].t
        )));
    }
    let usable: Vec<bool> = trace.iter().map(|s| !s.degenerate).collect();

    let mut events = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let values: Vec<f64> = trace.iter().map(|s| s.sp[i][j]).collect();
            let objective = |t: f64| {
                let s = evaluator(t);
                if s.degenerate {
                    f64::INFINITY
                } else {
                    s.sp[i][j] * s.sp[i][j]
                }
            };
            let mut pair_events: Vec<OrthogonalityEvent> = Vec::new();
            for k in grid_minima(&values, &usable) {
                let (lo, hi) = (trace[k - 1].t, trace[k + 1].t);
                let t_ref = golden_section_min(objective, lo, hi, settings.refine_tol);
                let refined = objective(t_ref);
                // Keep the grid point if refinement wandered to a worse value.
                let (t_event, value) = if refined <= values[k] * values[k] {
                    (t_ref, refined)
                } else {
                    (trace[k].t, values[k] * values[k])
                };
                let residual = value.sqrt();
                if residual >= settings.epsilon_orth {
                    continue;
                }
                let event = OrthogonalityEvent {
                    pair: (i + 1, j + 1),
                    t_event,
                    residual,
                };
                match pair_events.last_mut() {
                    Some(prev) if (t_event - prev.t_event).abs() < settings.merge_distance() => {
                        if residual < prev.residual {
                            *prev = event;
                        }
                    }
                    _ => pair_events.push(event),
                }
            }
            events.extend(pair_events);
        }
    }
    Ok(events)
}

/// Aggregates events inside `window`; events closer than `coincidence_tol`
/// (across pairs) count as one orthogonality instant.
pub fn speed_report(events: &[OrthogonalityEvent], window: Window, coincidence_tol: f64) -> SpeedReport {
    let inside: Vec<&OrthogonalityEvent> = events
        .iter()
        .filter(|e| e.t_event > window.t0 && e.t_event < window.t1)
        .collect();
    let mut counts = [[0usize; 2]; 2];
    for e in &inside {
        counts[e.pair.0 - 1][e.pair.1 - 1] += 1;
    }
    let mut times: Vec<f64> = inside.iter().map(|e| e.t_event).collect();
    times.sort_by(f64::total_cmp);
    let mut total_events = 0;
    let mut last: Option<f64> = None;
    for &t in &times {
        if last.is_none_or(|prev| t - prev > coincidence_tol) {
            total_events += 1;
            last = Some(t);
        }
    }
    SpeedReport {
        window,
        counts,
        total_events,
        first_orthogonality_time: times.first().copied(),
        speed: total_events as f64 / window.length(),
    }
}
