//! Body-motion targets: robot height, CoM and orientation targets for the
//! move-body phase, the base-to-feet velocity mapping and leg kinematics.

mod leg;

pub use leg::{joint_velocity_refs, leg_ik, KneeConfig, LegModel, SINGULAR_DET};

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::geom::{solve_quintic, BoundaryConditions, GeomError, Quintic3};
use crate::robot::Leg;
use crate::terrain::TerrainPlane;

/// Errors raised by the body planner.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BodyError {
    #[error("no stance feet")]
    NoStanceFeet,
    #[error("support triangle is degenerate")]
    DegenerateTriangle,
    #[error("terrain too steep: cos(alpha) = {0}")]
    NearVertical(f64),
    #[error("ipsilateral feet coincide or side lines cancel")]
    CoincidentFeet,
    #[error("foot at distance {distance} outside reachable range [{min}, {max}]")]
    Unreachable { distance: f64, min: f64, max: f64 },
    #[error("joint {joint} at {value} rad violates its limit")]
    JointLimit { joint: usize, value: f64 },
    #[error("near-singular leg Jacobian (det = {0})")]
    Singular(f64),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Minimum cos α accepted by [`com_target`].
pub const MIN_COS_ALPHA: f64 = 0.1;

/// Height of the CoM above the terrain plane from the stance feet.
///
/// `feet_in_base` are base-frame foot positions and `r_tb` maps base to
/// terrain coordinates. The sign of the average is dropped.
pub fn robot_height(
    feet_in_base: &[Vector3<f64>],
    com_offset: &Vector3<f64>,
    r_tb: &Matrix3<f64>,
) -> Result<f64, BodyError> {
    if feet_in_base.is_empty() {
        return Err(BodyError::NoStanceFeet);
    }
    let sum: Vector3<f64> = feet_in_base.iter().map(|f| r_tb * (f + com_offset)).sum();
    Ok((sum.z / feet_in_base.len() as f64).abs())
}

/// Signed distance from `p` to the nearest edge of the triangle's XY
/// projection; positive inside.
pub fn support_margin(tri: &[Vector3<f64>; 3], p: &Vector2<f64>) -> f64 {
    let v: [Vector2<f64>; 3] = std::array::from_fn(|i| tri[i].xy());
    let area = (v[1] - v[0]).perp(&(v[2] - v[0]));
    let sign = area.signum();
    (0..3)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % 3]);
            let e = b - a;
            sign * e.perp(&(p - a)) / e.norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// CoM target for the next swing.
///
/// `triangle[0..2]` is the diagonal pair and `triangle[2]` the remaining
/// stance foot. The planar target sits `d` from the diagonal midpoint along
/// the inward normal of the diagonal, on the terrain plane through that
/// midpoint, and is lifted by h_r / cos α along e_z.
pub fn com_target(
    triangle: &[Vector3<f64>; 3],
    d: f64,
    h_r: f64,
    n_t: &Vector3<f64>,
) -> Result<Vector3<f64>, BodyError> {
    let n = n_t.normalize();
    let cos_a = n.z;
    if !cos_a.is_finite() || cos_a <= MIN_COS_ALPHA {
        return Err(BodyError::NearVertical(cos_a));
    }
    let (a, b, c) = (triangle[0], triangle[1], triangle[2]);
    let diag = (b - a).xy();
    let len = diag.norm();
    if len < 1e-9 {
        return Err(BodyError::DegenerateTriangle);
    }
    let mut w = Vector2::new(-diag.y, diag.x) / len;
    let side = w.dot(&(c - a).xy());
    if side.abs() < 1e-9 {
        return Err(BodyError::DegenerateTriangle);
    }
    if side < 0.0 {
        w = -w;
    }
    let mid = (a + b) * 0.5;
    // Stay on the plane through the midpoint while moving d in XY.
    let dz = -(n.x * w.x + n.y * w.y) / n.z;
    let on_plane = mid + Vector3::new(w.x, w.y, dz) * d;
    Ok(on_plane + Vector3::z() * (h_r / cos_a))
}

/// Roll and pitch from the terrain plane; yaw from the circular mean of the
/// left and right hind-to-front lines. `feet` is indexed by [`Leg::index`].
pub fn orientation_target(terrain: &TerrainPlane, feet: &[Vector3<f64>; 4]) -> Result<Vector3<f64>, BodyError> {
    let line = |front: Leg, hind: Leg| -> Result<Vector2<f64>, BodyError> {
        let v = (feet[front.index()] - feet[hind.index()]).xy();
        let n = v.norm();
        if n < 1e-9 {
            return Err(BodyError::CoincidentFeet);
        }
        Ok(v / n)
    };
    let sum = line(Leg::LF, Leg::LH)? + line(Leg::RF, Leg::RH)?;
    if sum.norm() < 1e-9 {
        return Err(BodyError::CoincidentFeet);
    }
    Ok(Vector3::new(terrain.roll, terrain.pitch, sum.y.atan2(sum.x)))
}

/// Stance-foot velocity induced by base motion, in base coordinates:
/// ẋ_f = −ẋ_com − ω × (x_f − x_com).
pub fn foot_velocity(
    com_vel: &Vector3<f64>,
    omega: &Vector3<f64>,
    foot: &Vector3<f64>,
    com: &Vector3<f64>,
) -> Vector3<f64> {
    -com_vel - omega.cross(&(foot - com))
}

/// Desired stance-foot reference integrated with the trapezoidal rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StanceFoot {
    pub pos: Vector3<f64>,
    pub vel: Vector3<f64>,
}

impl StanceFoot {
    pub fn new(pos: Vector3<f64>, com_vel: &Vector3<f64>, omega: &Vector3<f64>, com: &Vector3<f64>) -> Self {
        Self { pos, vel: foot_velocity(com_vel, omega, &pos, com) }
    }

    /// Advances by `dt` given the base motion at the end of the interval.
    ///
    /// The end velocity depends on the end position, so the trapezoid is
    /// solved implicitly (it is linear in the unknown).
    pub fn step(&mut self, com_vel: &Vector3<f64>, omega: &Vector3<f64>, com: &Vector3<f64>, dt: f64) {
        let h = 0.5 * dt;
        let a = Matrix3::identity() + omega.cross_matrix() * h;
        let rhs = self.pos + self.vel * h + (-com_vel + omega.cross(com)) * h;
        self.pos = a.lu().solve(&rhs).unwrap_or(rhs);
        self.vel = foot_velocity(com_vel, omega, &self.pos, com);
    }
}

/// One explicit-step form of the mapping: returns the foot velocity at
/// `foot_prev` and the trapezoidal update assuming constant base motion.
pub fn base_to_feet(
    com_vel: &Vector3<f64>,
    omega: &Vector3<f64>,
    foot_prev: &Vector3<f64>,
    com: &Vector3<f64>,
    dt: f64,
) -> (Vector3<f64>, Vector3<f64>) {
    let mut f = StanceFoot::new(*foot_prev, com_vel, omega, com);
    f.step(com_vel, omega, com, dt);
    (f.vel, f.pos)
}

/// CoM and Euler-angle targets with their rest-to-rest quintics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyTarget {
    pub com: Vector3<f64>,
    /// Target (roll, pitch, yaw).
    pub orientation: Vector3<f64>,
    pub duration: f64,
    pub com_traj: Quintic3,
    pub euler_traj: Quintic3,
}

impl BodyTarget {
    /// Plans from the actual state at `start`. The target yaw is unwrapped
    /// to the branch nearest the current yaw.
    pub fn plan(
        com_now: &Vector3<f64>,
        euler_now: &Vector3<f64>,
        com: Vector3<f64>,
        mut orientation: Vector3<f64>,
        duration: f64,
        start: f64,
    ) -> Result<Self, BodyError> {
        let tau = std::f64::consts::TAU;
        orientation.z = euler_now.z + (orientation.z - euler_now.z + std::f64::consts::PI).rem_euclid(tau)
            - std::f64::consts::PI;
        let com_traj = solve_quintic(&BoundaryConditions::rest_to_rest(*com_now, com), duration)?.starting_at(start);
        let euler_traj =
            solve_quintic(&BoundaryConditions::rest_to_rest(*euler_now, orientation), duration)?.starting_at(start);
        Ok(Self { com, orientation, duration, com_traj, euler_traj })
    }
}
