use serde::Serialize;

use crate::sim::{EventKind, SimLog};

/// Scalar digest of a run, computed from the log alone.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RunSummary {
    pub ticks: usize,
    pub duration: f64,
    /// Horizontal CoM displacement from the first to the last record.
    pub distance: f64,
    /// Smallest support margin seen while a leg was airborne.
    pub min_margin: Option<f64>,
    pub margin_violations: usize,
    /// RMS of realized − desired GRF per axis, over all feet and ticks.
    pub grf_rms: [f64; 3],
    /// RMS of the per-tick GRF error norm.
    pub grf_err_rms: f64,
    pub step_reflexes: usize,
    pub missed_reflexes: usize,
    pub impacts: usize,
    pub touchdowns: usize,
    pub searched_touchdowns: usize,
    pub height_reflexes: usize,
    pub kinematic_limits: usize,
    pub resequences: usize,
    pub diverged: bool,
    pub halt: Option<String>,
}

impl RunSummary {
    pub fn from_log(log: &SimLog) -> Self {
        let n = log.records.len();
        let mut s = RunSummary {
            ticks: n,
            margin_violations: log.count("margin_violation"),
            step_reflexes: log.count("step_reflex"),
            missed_reflexes: log.count("missed_reflex"),
            impacts: log.count("impact"),
            touchdowns: log.count("touchdown"),
            searched_touchdowns: log
                .events
                .iter()
                .filter(|e| matches!(e.kind, EventKind::Touchdown { searched: true, .. }))
                .count(),
            height_reflexes: log.count("height_reflex"),
            kinematic_limits: log.count("kinematic_limit"),
            resequences: log.count("resequence"),
            diverged: log.count("divergence") > 0,
            halt: log.halt.clone(),
            ..Default::default()
        };
        let (Some(first), Some(last)) = (log.records.first(), log.records.last()) else {
            return s;
        };
        s.duration = last.t;
        s.distance = (last.com.xy() - first.com.xy()).norm();
        s.min_margin = log.records.iter().filter_map(|r| r.margin).reduce(f64::min);

        let mut axis = [0.0; 3];
        let mut err = 0.0;
        for r in &log.records {
            for (a, d) in r.grf.iter().zip(&r.grf_des) {
                let e = a - d;
                for k in 0..3 {
                    axis[k] += e[k] * e[k];
                }
            }
            err += r.grf_err_norm().powi(2);
        }
        s.grf_rms = axis.map(|v| (v / (4 * n) as f64).sqrt());
        s.grf_err_rms = (err / n as f64).sqrt();
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}
