use nalgebra::{Matrix3, Vector2, Vector3};

use super::StepError;
use crate::geom::{solve_quintic, BoundaryConditions, Quintic3, QuinticSample};
use crate::terrain::HeightMap;

/// Inputs of [`plan_swing`]. Displacements are expressed in the swing frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwingRequest {
    pub liftoff: Vector3<f64>,
    pub delta_xy: Vector2<f64>,
    /// Final height along the swing Z axis (0 when the target lies on the
    /// swing plane).
    pub z_end: f64,
    pub step_height: f64,
    pub apex_ratio: f64,
    pub duration: f64,
    /// Swing frame, columns are the axes in world coordinates.
    pub frame: Matrix3<f64>,
}

/// A swing trajectory made of two chained 3-D quintics in the swing frame,
/// joined at the apex. The XY components of both pieces are the two halves
/// of a single rest-to-rest quintic; Z rises to the step height with zero
/// velocity at the apex and then descends to `z_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwingPlan {
    pub frame: Matrix3<f64>,
    pub liftoff: Vector3<f64>,
    pub delta_xy: Vector2<f64>,
    pub z_end: f64,
    pub step_height: f64,
    pub apex_ratio: f64,
    pub duration: f64,
    /// Pieces on [0, t_apex] and [t_apex, duration]; the second carries its
    /// start epoch.
    pub segments: [Quintic3; 2],
    /// True for a plan produced by the step reflex.
    pub reflex: bool,
}

impl SwingPlan {
    pub fn apex_time(&self) -> f64 {
        self.segments[1].start
    }

    /// Position, velocity and acceleration in the swing frame relative to
    /// the liftoff point.
    pub fn local(&self, t: f64) -> QuinticSample<3> {
        if t < self.apex_time() {
            self.segments[0].eval(t)
        } else {
            let mut s = self.segments[1].eval_at(t);
            s.clamped = t > self.duration;
            s
        }
    }

    /// World position at swing time `t` (clamped to the plan).
    pub fn position(&self, t: f64) -> Vector3<f64> {
        self.liftoff + self.frame * self.local(t).p
    }

    pub fn velocity(&self, t: f64) -> Vector3<f64> {
        self.frame * self.local(t).v
    }

    /// World position at the end of the plan.
    pub fn target(&self) -> Vector3<f64> {
        self.position(self.duration)
    }

    /// Unit direction of the planar displacement in world coordinates, if
    /// the step is not in place.
    pub fn motion_direction(&self) -> Option<Vector3<f64>> {
        let d = self.frame * Vector3::new(self.delta_xy.x, self.delta_xy.y, 0.0);
        let n = d.norm();
        (n > 1e-9).then(|| d / n)
    }
}

fn check_request(req: &SwingRequest) -> Result<(), StepError> {
    if !(req.duration > 0.0 && req.duration.is_finite()) {
        return Err(StepError::NonPositiveDuration(req.duration));
    }
    if !(req.step_height >= 0.0) {
        return Err(StepError::NegativeStepHeight(req.step_height));
    }
    if !(req.apex_ratio > 0.0 && req.apex_ratio < 1.0) {
        return Err(StepError::InvalidParam("apex_ratio"));
    }
    Ok(())
}

/// Builds the nominal swing from the liftoff point.
pub fn plan_swing(req: &SwingRequest) -> Result<SwingPlan, StepError> {
    check_request(req)?;
    let t = req.duration;
    let tc = req.apex_ratio * t;
    let xy = solve_quintic(&BoundaryConditions::rest_to_rest(Vector2::zeros(), req.delta_xy), t)?;
    let c = xy.eval(tc);
    let at_apex = |v: Vector2<f64>, z: f64| Vector3::new(v.x, v.y, z);
    let up = solve_quintic(
        &BoundaryConditions {
            p0: Vector3::zeros(),
            v0: Vector3::zeros(),
            a0: Vector3::zeros(),
            pf: at_apex(c.p, req.step_height),
            vf: at_apex(c.v, 0.0),
            af: at_apex(c.a, 0.0),
        },
        tc,
    )?;
    let down = solve_quintic(
        &BoundaryConditions {
            p0: at_apex(c.p, req.step_height),
            v0: at_apex(c.v, 0.0),
            a0: at_apex(c.a, 0.0),
            pf: at_apex(req.delta_xy, req.z_end),
            vf: Vector3::zeros(),
            af: Vector3::zeros(),
        },
        t - tc,
    )?
    .starting_at(tc);
    Ok(SwingPlan {
        frame: req.frame,
        liftoff: req.liftoff,
        delta_xy: req.delta_xy,
        z_end: req.z_end,
        step_height: req.step_height,
        apex_ratio: req.apex_ratio,
        duration: t,
        segments: [up, down],
        reflex: false,
    })
}

/// Replaces the remainder of `plan` from local point `from` (swing frame,
/// relative to liftoff): rest-to-rest to `waypoint`, then rest-to-rest to
/// the original target, over `duration` with the waypoint at
/// `ratio · duration`.
pub(crate) fn plan_via_waypoint(
    plan: &SwingPlan,
    from: Vector3<f64>,
    waypoint: Vector3<f64>,
    ratio: f64,
    duration: f64,
) -> Result<SwingPlan, StepError> {
    if !(duration > 0.0) {
        return Err(StepError::NonPositiveDuration(duration));
    }
    let end = Vector3::new(plan.delta_xy.x, plan.delta_xy.y, plan.z_end);
    let tc = ratio * duration;
    let first = solve_quintic(&BoundaryConditions::rest_to_rest(from, waypoint), tc)?;
    let second =
        solve_quintic(&BoundaryConditions::rest_to_rest(waypoint, end), duration - tc)?.starting_at(tc);
    Ok(SwingPlan {
        step_height: waypoint.z,
        apex_ratio: ratio,
        duration,
        segments: [first, second],
        reflex: true,
        ..*plan
    })
}

/// Linear leg extension along −n_t after the nominal swing ended without
/// contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchMotion {
    pub start: Vector3<f64>,
    pub direction: Vector3<f64>,
    /// Extension speed (m/s).
    pub rate: f64,
    /// Maximum extension before the workspace-limit event (m).
    pub limit: f64,
}

impl SearchMotion {
    /// Distance travelled after `elapsed` seconds, capped at the limit.
    pub fn travel(&self, elapsed: f64) -> f64 {
        (self.rate * elapsed.max(0.0)).min(self.limit)
    }

    /// Position after `elapsed` seconds and whether the limit was reached.
    pub fn position(&self, elapsed: f64) -> (Vector3<f64>, bool) {
        let s = self.travel(elapsed);
        (self.start + self.direction * s, self.rate * elapsed >= self.limit)
    }
}

/// Searching motion starting at the end of `plan`.
pub fn searching_motion(plan: &SwingPlan, n_t: &Vector3<f64>, rate: f64, limit: f64) -> SearchMotion {
    SearchMotion { start: plan.target(), direction: -n_t.normalize(), rate, limit }
}

/// A foothold after the height-map correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisionTarget {
    pub target: Vector3<f64>,
    /// Set when the target was outside the map and left uncorrected.
    pub fallback: bool,
}

/// Moves the target's Z onto the mapped terrain, keeping X and Y.
pub fn vision_correct_target(map: &HeightMap, target: &Vector3<f64>) -> VisionTarget {
    match map.height(target.x, target.y) {
        Ok(h) => VisionTarget { target: Vector3::new(target.x, target.y, h), fallback: false },
        Err(_) => VisionTarget { target: *target, fallback: true },
    }
}

/// Swing frame whose X axis points from the foot to the target and whose Y
/// axis stays orthogonal to the base X axis. With a terrain normal `n_r` at
/// the target, Z becomes `n_r` with its component along X removed.
pub fn compute_swing_frame(
    foot: &Vector3<f64>,
    target: &Vector3<f64>,
    base_rotation: &Matrix3<f64>,
    n_r: Option<&Vector3<f64>>,
) -> Result<Matrix3<f64>, StepError> {
    let ex = base_rotation.column(0).into_owned();
    let ey = base_rotation.column(1).into_owned();
    let unit = |v: Vector3<f64>| {
        let n = v.norm();
        if n < 1e-9 {
            Err(StepError::DegenerateFrame)
        } else {
            Ok(v / n)
        }
    };
    let triad = |z: Vector3<f64>| -> Result<Matrix3<f64>, StepError> {
        let y = unit(z.cross(&ex))?;
        let x = y.cross(&z);
        Ok(Matrix3::from_columns(&[x, y, z]))
    };
    let z = unit((target - foot).cross(&ey))?;
    let frame = triad(z)?;
    match n_r {
        None => Ok(frame),
        Some(n) => {
            let ax = frame.column(0).into_owned();
            let n_rp = unit(n - ax * ax.dot(n))?;
            triad(n_rp)
        }
    }
}

/// Tuning of the clearance optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClearanceParams {
    /// Step height used when the terrain never rises above the segment; also
    /// the lower bound of the optimized height.
    pub default_height: f64,
    pub default_apex: f64,
    pub margin: f64,
    /// Bounds applied to the optimized apex ratio.
    pub apex_range: (f64, f64),
}

impl Default for ClearanceParams {
    fn default() -> Self {
        Self { default_height: 0.1, default_apex: 0.5, margin: 0.03, apex_range: (0.1, 0.9) }
    }
}

/// Result of the clearance optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clearance {
    pub step_height: f64,
    pub apex_ratio: f64,
    /// Largest terrain protrusion above the segment, measured orthogonally.
    pub max_clearance: f64,
    /// Sample index of the protrusion (1-based, 0 when none).
    pub k_max: usize,
}

/// Samples the terrain along the foot-target segment and places the apex
/// over the highest protrusion.
pub fn optimize_clearance(
    map: &HeightMap,
    foot: &Vector3<f64>,
    target: &Vector3<f64>,
    n: usize,
    params: &ClearanceParams,
) -> Result<Clearance, StepError> {
    if n < 2 {
        return Err(StepError::TooFewSamples(n));
    }
    let seg = target - foot;
    let len = seg.norm();
    let bz = if len > 0.0 { seg.z / len } else { 0.0 };
    let ortho = (1.0 - bz * bz).max(0.0).sqrt();
    let mut best = (0.0, 0usize);
    for k in 1..=n {
        let s = foot + seg * (k as f64 / n as f64);
        let h = map.height(s.x, s.y)?;
        let delta = (h - s.z).max(0.0);
        let perp = delta * ortho;
        if perp > best.0 {
            best = (perp, k);
        }
    }
    let (max_clearance, k_max) = best;
    if k_max == 0 {
        return Ok(Clearance {
            step_height: params.default_height,
            apex_ratio: params.default_apex,
            max_clearance,
            k_max,
        });
    }
    let apex = (k_max as f64 / n as f64).clamp(params.apex_range.0, params.apex_range.1);
    Ok(Clearance {
        step_height: (max_clearance + params.margin).max(params.default_height),
        apex_ratio: apex,
        max_clearance,
        k_max,
    })
}
