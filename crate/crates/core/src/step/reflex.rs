use nalgebra::Vector3;

use super::swing::plan_via_waypoint;
use super::{StepError, SwingPlan};

/// Configuration and memory of the reactive behaviours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflexState {
    pub step_enabled: bool,
    pub height_enabled: bool,
    /// Half-angle of the cone around the backward motion direction inside
    /// which a contact force counts as a frontal impact.
    pub cone_half_angle: f64,
    /// Vertical retraction r_z above the impact point.
    pub max_retraction: f64,
    /// Fraction of the reflex duration spent on the retraction.
    pub retract_ratio: f64,
    /// A frontal impact was seen during swing-down; the next swing starts
    /// with a reflex.
    pub missed: bool,
}

impl Default for ReflexState {
    fn default() -> Self {
        Self {
            step_enabled: true,
            height_enabled: true,
            cone_half_angle: 30f64.to_radians(),
            max_retraction: 0.15,
            retract_ratio: 0.4,
            missed: false,
        }
    }
}

/// Outcome of a contact during swing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReflexDecision {
    /// Not a frontal impact (or reflex disabled): treat as touchdown.
    None,
    /// Frontal impact during swing-up: follow the retraction plan.
    Retract {
        plan: SwingPlan,
        /// T_rfx = T_sw − t̄.
        duration: f64,
        /// α_rfx = atan2(r_z, r_x).
        angle: f64,
    },
    /// Frontal impact during swing-down: flagged for the next swing.
    Missed,
}

/// True when `grf` lies inside the frontal cone of `plan`.
pub fn is_frontal(grf: &Vector3<f64>, plan: &SwingPlan, half_angle: f64) -> bool {
    let Some(dir) = plan.motion_direction() else {
        return false;
    };
    let n = grf.norm();
    n > 0.0 && (-dir).dot(grf) / n >= half_angle.cos()
}

/// Decides whether a contact force at swing time `t_bar` triggers the step
/// reflex.
///
/// The retraction pulls the foot back along α_rfx in the swing plane to a
/// point r_z above the impact height at the liftoff abscissa, then finishes
/// at the original target so that the reflex ends with the nominal swing.
pub fn trigger_step_reflex(
    grf: &Vector3<f64>,
    t_bar: f64,
    plan: &SwingPlan,
    rs: &mut ReflexState,
) -> Result<ReflexDecision, StepError> {
    if !rs.step_enabled || !is_frontal(grf, plan, rs.cone_half_angle) {
        return Ok(ReflexDecision::None);
    }
    if t_bar >= plan.apex_time() {
        rs.missed = true;
        return Ok(ReflexDecision::Missed);
    }
    let duration = plan.duration - t_bar;
    let here = plan.local(t_bar).p;
    let r_x = here.x;
    let r_z = rs.max_retraction;
    let angle = r_z.atan2(r_x);
    let waypoint = here + Vector3::new(-r_x, 0.0, r_z);
    let reflex = plan_via_waypoint(plan, here, waypoint, rs.retract_ratio, duration)?;
    Ok(ReflexDecision::Retract { plan: reflex, duration, angle })
}

/// Reflex plan at the start of a swing that follows a missed reflex: the
/// nominal plan with its apex raised by r_z. Clears the flag.
pub fn consume_missed_reflex(plan: &SwingPlan, rs: &mut ReflexState) -> Result<Option<SwingPlan>, StepError> {
    if !rs.missed {
        return Ok(None);
    }
    rs.missed = false;
    let apex = plan.local(plan.apex_time()).p + Vector3::new(0.0, 0.0, rs.max_retraction);
    plan_via_waypoint(plan, Vector3::zeros(), apex, plan.apex_ratio, plan.duration).map(Some)
}
