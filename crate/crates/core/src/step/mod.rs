//! Foothold selection and swing trajectories: heuristic default step,
//! vision-based corrections, clearance optimization, searching motion,
//! step reflex and the stair-mode helpers.

mod reflex;
mod stairs;
mod swing;

use nalgebra::{Vector2, Vector3};

pub use reflex::{consume_missed_reflex, is_frontal, trigger_step_reflex, ReflexDecision, ReflexState};
pub use stairs::{conservative_step_correction, stair_resequence, ConservativeParams, ConservativeStep, GaitSequence};
pub use swing::{
    compute_swing_frame, optimize_clearance, plan_swing, searching_motion, vision_correct_target,
    Clearance, ClearanceParams, SearchMotion, SwingPlan, SwingRequest, VisionTarget,
};

use crate::geom::GeomError;
use crate::terrain::TerrainError;

/// Errors raised by the step planner.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StepError {
    #[error("invalid gait parameter `{0}`")]
    InvalidParam(&'static str),
    #[error("command component {axis} = {value} exceeds cap {cap}")]
    CommandExceedsCap { axis: usize, value: f64, cap: f64 },
    #[error("non-finite command")]
    NonFiniteCommand,
    #[error("cycle time {t_cycle} is not longer than load/unload time {t_lu}")]
    CycleTooShort { t_cycle: f64, t_lu: f64 },
    #[error("swing duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("step height must be non-negative, got {0}")]
    NegativeStepHeight(f64),
    #[error("degenerate swing frame")]
    DegenerateFrame,
    #[error("clearance needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Terrain(#[from] TerrainError),
}

/// Gait timing and step-size parameters. Vector quantities are ordered
/// (x [m], y [m], heading [rad]).
#[derive(Debug, Clone, PartialEq)]
pub struct GaitParams {
    /// Asymptotic maximum step per axis.
    pub step_max: Vector3<f64>,
    /// Step reached at the transition velocity.
    pub step_tr: Vector3<f64>,
    /// Transition velocity per axis (m/s, m/s, rad/s).
    pub v_tr: Vector3<f64>,
    /// Largest accepted command per axis.
    pub cmd_max: Vector3<f64>,
    pub duty_factor: f64,
    /// Combined load and unload duration.
    pub t_lu: f64,
    /// Cycle time used when the command is zero.
    pub t_cycle_hold: f64,
    pub step_height: f64,
    pub apex_ratio: f64,
    pub stance_offset: Vector2<f64>,
    /// CoM margin from the support-triangle diagonal.
    pub com_margin: f64,
    pub touchdown_threshold: f64,
    pub touchdown_debounce: u32,
}

impl Default for GaitParams {
    fn default() -> Self {
        Self {
            step_max: Vector3::new(0.2, 0.1, 0.2),
            step_tr: Vector3::new(0.1, 0.05, 0.1),
            v_tr: Vector3::new(0.1, 0.1, 0.1),
            cmd_max: Vector3::new(0.5, 0.3, 0.5),
            duty_factor: 0.75,
            t_lu: 0.1,
            t_cycle_hold: 2.0,
            step_height: 0.1,
            apex_ratio: 0.5,
            stance_offset: Vector2::zeros(),
            com_margin: 0.05,
            touchdown_threshold: 20.0,
            touchdown_debounce: 3,
        }
    }
}

impl GaitParams {
    pub fn validate(&self) -> Result<(), StepError> {
        let pos = |v: &Vector3<f64>| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if !pos(&self.step_max) {
            return Err(StepError::InvalidParam("step_max"));
        }
        if !pos(&self.step_tr) || (0..3).any(|i| self.step_tr[i] >= self.step_max[i]) {
            return Err(StepError::InvalidParam("step_tr"));
        }
        if !pos(&self.v_tr) {
            return Err(StepError::InvalidParam("v_tr"));
        }
        if !pos(&self.cmd_max) {
            return Err(StepError::InvalidParam("cmd_max"));
        }
        if !(self.duty_factor > 0.0 && self.duty_factor < 1.0) {
            return Err(StepError::InvalidParam("duty_factor"));
        }
        if !(self.apex_ratio > 0.0 && self.apex_ratio < 1.0) {
            return Err(StepError::InvalidParam("apex_ratio"));
        }
        if !(self.t_lu >= 0.0 && self.t_lu.is_finite()) {
            return Err(StepError::InvalidParam("t_lu"));
        }
        if !(self.t_cycle_hold > self.t_lu && self.t_cycle_hold.is_finite()) {
            return Err(StepError::InvalidParam("t_cycle_hold"));
        }
        if !(self.step_height >= 0.0 && self.step_height.is_finite()) {
            return Err(StepError::InvalidParam("step_height"));
        }
        if !(self.com_margin >= 0.0 && self.com_margin.is_finite()) {
            return Err(StepError::InvalidParam("com_margin"));
        }
        if !self.stance_offset.iter().all(|x| x.is_finite()) {
            return Err(StepError::InvalidParam("stance_offset"));
        }
        if !(self.touchdown_threshold > 0.0) || self.touchdown_debounce == 0 {
            return Err(StepError::InvalidParam("touchdown"));
        }
        Ok(())
    }
}

/// Desired planar velocity (horizontal frame) and heading rate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepCommand {
    pub v_xy: Vector2<f64>,
    pub yaw_rate: f64,
}

impl StepCommand {
    pub fn new(vx: f64, vy: f64, yaw_rate: f64) -> Self {
        Self { v_xy: Vector2::new(vx, vy), yaw_rate }
    }

    fn as_vec(&self) -> Vector3<f64> {
        Vector3::new(self.v_xy.x, self.v_xy.y, self.yaw_rate)
    }
}

/// Output of the velocity-to-step mapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefaultStep {
    /// (ΔL_x0, ΔL_y0, ΔH_0).
    pub delta: Vector3<f64>,
    pub t_cycle: f64,
    pub t_sw: f64,
    pub t_mb: f64,
    /// True for a zero command (step in place).
    pub hold: bool,
}

/// Maps the command to the default step and phase durations.
///
/// Per axis ΔL = A·atan(G·v) with A = 2ΔL_max/π and G = ΔL_tr/(ΔL_max·v_tr);
/// the cycle time is the smallest ΔL/v over the nonzero axes and is split
/// into body and swing time by the duty factor.
pub fn default_step(cmd: &StepCommand, gp: &GaitParams) -> Result<DefaultStep, StepError> {
    let v = cmd.as_vec();
    if !v.iter().all(|x| x.is_finite()) {
        return Err(StepError::NonFiniteCommand);
    }
    for axis in 0..3 {
        if v[axis].abs() > gp.cmd_max[axis] {
            return Err(StepError::CommandExceedsCap { axis, value: v[axis], cap: gp.cmd_max[axis] });
        }
    }
    let mut delta = Vector3::zeros();
    let mut t_cycle = f64::INFINITY;
    for axis in 0..3 {
        let a = 2.0 * gp.step_max[axis] / std::f64::consts::PI;
        let g = gp.step_tr[axis] / (gp.step_max[axis] * gp.v_tr[axis]);
        delta[axis] = a * (g * v[axis]).atan();
        if v[axis] != 0.0 {
            t_cycle = t_cycle.min(delta[axis] / v[axis]);
        }
    }
    let hold = !t_cycle.is_finite();
    if hold {
        t_cycle = gp.t_cycle_hold;
    }
    if t_cycle <= gp.t_lu {
        return Err(StepError::CycleTooShort { t_cycle, t_lu: gp.t_lu });
    }
    let t_mb = (t_cycle - gp.t_lu) * gp.duty_factor;
    let t_sw = (t_cycle - gp.t_lu) * (1.0 - gp.duty_factor);
    Ok(DefaultStep { delta, t_cycle, t_sw, t_mb, hold })
}

/// Planar foot displacement produced by a heading change about the base
/// origin: E_xy([0, 0, ΔH]ᵀ × x_hip).
pub fn heading_to_planar(delta_heading: f64, x_hip: &Vector3<f64>) -> Vector2<f64> {
    let v = Vector3::new(0.0, 0.0, delta_heading).cross(x_hip);
    Vector2::new(v.x, v.y)
}

/// Re-expresses the hip-referenced default step about the current foot:
/// ΔL_xy = ΔL̄_xy0 + E_xy(off_xy + x_hip − x_f).
pub fn step_about_foot(
    mean_step: &Vector2<f64>,
    x_hip: &Vector3<f64>,
    x_foot: &Vector3<f64>,
    offset: &Vector2<f64>,
) -> Vector2<f64> {
    mean_step + offset + Vector2::new(x_hip.x - x_foot.x, x_hip.y - x_foot.y)
}
