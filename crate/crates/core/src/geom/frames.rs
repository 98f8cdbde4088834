use nalgebra::{Matrix3, Rotation3, Vector3};

use super::GeomError;

/// Orthonormality tolerance used for every rotation held by a [`FrameSet`].
pub const ORTHO_TOL: f64 = 1e-9;

/// True when `r` is a proper rotation to within `tol` (RᵀR = I, det = +1).
pub fn is_orthonormal(r: &Matrix3<f64>, tol: f64) -> bool {
    let err = (r.transpose() * r - Matrix3::identity()).abs().max();
    err <= tol && (r.determinant() - 1.0).abs() <= tol
}

/// World-from-base rotation for ZYX Euler angles (yaw about Z, then pitch
/// about Y, then roll about X).
pub fn rotation_from_zyx(roll: f64, pitch: f64, yaw: f64) -> Matrix3<f64> {
    Rotation3::from_euler_angles(roll, pitch, yaw).into_inner()
}

/// Inverse of [`rotation_from_zyx`], returning `(roll, pitch, yaw)`.
pub fn zyx_from_rotation(r: &Matrix3<f64>) -> (f64, f64, f64) {
    Rotation3::from_matrix_unchecked(*r).euler_angles()
}

/// Yaw of the base X axis projected on the world XY plane.
pub fn yaw_of(r: &Matrix3<f64>) -> f64 {
    r[(1, 0)].atan2(r[(0, 0)])
}

/// Rotation sharing the yaw of `r` with zero roll and pitch.
pub fn horizontal_rotation(r: &Matrix3<f64>) -> Matrix3<f64> {
    rotation_from_zyx(0.0, 0.0, yaw_of(r))
}

/// The set of frames used by the planner, all expressed in world coordinates.
///
/// Columns of every rotation are the frame axes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSet {
    base_rotation: Matrix3<f64>,
    pub base_origin: Vector3<f64>,
    terrain: Matrix3<f64>,
    swing: [Matrix3<f64>; 4],
}

impl FrameSet {
    /// Builds a frame set from the base pose. The terrain frame starts as the
    /// horizontal frame and the swing frames as the base frame.
    pub fn new(base_rotation: Matrix3<f64>, base_origin: Vector3<f64>) -> Result<Self, GeomError> {
        if !is_orthonormal(&base_rotation, ORTHO_TOL) {
            return Err(GeomError::NotOrthonormal);
        }
        let h = horizontal_rotation(&base_rotation);
        Ok(Self {
            base_rotation,
            base_origin,
            terrain: h,
            swing: [base_rotation; 4],
        })
    }

    pub fn base_rotation(&self) -> &Matrix3<f64> {
        &self.base_rotation
    }

    pub fn horizontal(&self) -> Matrix3<f64> {
        horizontal_rotation(&self.base_rotation)
    }

    pub fn terrain(&self) -> &Matrix3<f64> {
        &self.terrain
    }

    pub fn swing(&self, leg: usize) -> &Matrix3<f64> {
        &self.swing[leg]
    }

    pub fn set_base_rotation(&mut self, r: Matrix3<f64>) -> Result<(), GeomError> {
        if !is_orthonormal(&r, ORTHO_TOL) {
            return Err(GeomError::NotOrthonormal);
        }
        self.base_rotation = r;
        Ok(())
    }

    pub fn set_terrain(&mut self, r: Matrix3<f64>) -> Result<(), GeomError> {
        if !is_orthonormal(&r, ORTHO_TOL) {
            return Err(GeomError::NotOrthonormal);
        }
        self.terrain = r;
        Ok(())
    }

    pub fn set_swing(&mut self, leg: usize, r: Matrix3<f64>) -> Result<(), GeomError> {
        if !is_orthonormal(&r, ORTHO_TOL) {
            return Err(GeomError::NotOrthonormal);
        }
        self.swing[leg] = r;
        Ok(())
    }
}
