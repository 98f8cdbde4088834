use nalgebra::{Matrix3, Vector3};

use super::BodyError;
use crate::robot::{Leg, RobotGeometry};

/// Which way the knee points when bent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KneeConfig {
    /// Knee behind the hip-foot line; negative knee angles.
    Backward,
    /// Knee ahead of the hip-foot line; positive knee angles.
    Forward,
}

/// Three-joint leg: HAA about base X, then HFE and KFE about the rotated Y.
///
/// At zero angles the leg hangs straight down from the hip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegModel {
    pub hip: Vector3<f64>,
    pub upper: f64,
    pub lower: f64,
    pub knee: KneeConfig,
    /// (min, max) for HAA, HFE and KFE.
    pub limits: [(f64, f64); 3],
}

impl Default for LegModel {
    fn default() -> Self {
        LegModel::for_leg(&RobotGeometry::default(), Leg::LF)
    }
}

impl LegModel {
    /// Front legs bend the knee forward, hind legs backward.
    pub fn for_leg(geom: &RobotGeometry, leg: Leg) -> Self {
        let knee = if leg.is_front() { KneeConfig::Forward } else { KneeConfig::Backward };
        let kfe = match knee {
            KneeConfig::Backward => (-2.8, 0.0),
            KneeConfig::Forward => (0.0, 2.8),
        };
        Self {
            hip: geom.hip(leg),
            upper: geom.upper_length,
            lower: geom.lower_length,
            knee,
            limits: [(-1.2, 1.2), (-2.0, 2.0), kfe],
        }
    }

    /// Reachable hip-to-foot distance range.
    pub fn annulus(&self) -> (f64, f64) {
        ((self.upper - self.lower).abs(), self.upper + self.lower)
    }

    fn sagittal(&self, q1: f64, q2: f64) -> (f64, f64) {
        let (s1, c1) = q1.sin_cos();
        let (s12, c12) = (q1 + q2).sin_cos();
        (-self.upper * s1 - self.lower * s12, -self.upper * c1 - self.lower * c12)
    }

    /// Foot position in the base frame.
    pub fn fk(&self, q: &Vector3<f64>) -> Vector3<f64> {
        let (x, z) = self.sagittal(q[1], q[2]);
        let (s0, c0) = q[0].sin_cos();
        self.hip + Vector3::new(x, -s0 * z, c0 * z)
    }

    /// Analytical foot Jacobian ∂x_f/∂q in the base frame.
    pub fn jacobian(&self, q: &Vector3<f64>) -> Matrix3<f64> {
        let (x, z) = self.sagittal(q[1], q[2]);
        let (s0, c0) = q[0].sin_cos();
        let (s12, c12) = (q[1] + q[2]).sin_cos();
        let (dx1, dz1) = (z, -x);
        let (dx2, dz2) = (-self.lower * c12, self.lower * s12);
        Matrix3::new(
            0.0, dx1, dx2, //
            -c0 * z, -s0 * dz1, -s0 * dz2, //
            -s0 * z, c0 * dz1, c0 * dz2,
        )
    }

    /// Joint angles placing the foot at `foot` (base frame).
    pub fn ik(&self, foot: &Vector3<f64>) -> Result<Vector3<f64>, BodyError> {
        let p = foot - self.hip;
        let dist = p.norm();
        let (lo, hi) = self.annulus();
        let tol = 1e-12 * hi;
        if dist < lo - tol || dist > hi + tol || p.y.hypot(p.z) < 1e-12 {
            return Err(BodyError::Unreachable { distance: dist, min: lo, max: hi });
        }
        let q0 = p.y.atan2(-p.z);
        let (x, z) = (p.x, -p.y.hypot(p.z));
        let (lu, ll) = (self.upper, self.lower);
        let ck = ((dist * dist - lu * lu - ll * ll) / (2.0 * lu * ll)).clamp(-1.0, 1.0);
        let q2 = match self.knee {
            KneeConfig::Backward => -ck.acos(),
            KneeConfig::Forward => ck.acos(),
        };
        let beta = (-x).atan2(-z);
        let gamma = (ll * q2.sin()).atan2(lu + ll * q2.cos());
        let q = Vector3::new(q0, beta - gamma, q2);
        for (joint, (&v, &(min, max))) in q.iter().zip(&self.limits).enumerate() {
            if v < min - 1e-12 || v > max + 1e-12 {
                return Err(BodyError::JointLimit { joint, value: v });
            }
        }
        Ok(q)
    }
}

/// Tolerance on |det J| below which joint velocity references are refused.
pub const SINGULAR_DET: f64 = 1e-6;

/// q̇ = J(q)⁻¹ ẋ_f.
pub fn joint_velocity_refs(foot_vel: &Vector3<f64>, q: &Vector3<f64>, leg: &LegModel) -> Result<Vector3<f64>, BodyError> {
    let j = leg.jacobian(q);
    let det = j.determinant();
    if det.abs() < SINGULAR_DET {
        return Err(BodyError::Singular(det));
    }
    j.lu().solve(foot_vel).ok_or(BodyError::Singular(det))
}

/// Convenience wrapper around [`LegModel::ik`].
pub fn leg_ik(foot: &Vector3<f64>, leg: &LegModel) -> Result<Vector3<f64>, BodyError> {
    leg.ik(foot)
}
