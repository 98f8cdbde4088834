use nalgebra::{DMatrix, DVector, Vector3, Vector6};

use super::SimError;

/// Residual above which a wrench counts as not supportable.
const RESIDUAL_TOL: f64 = 1e-6;

/// Grasp map [I …; [r_i]× …] from stacked contact forces to the wrench at
/// `com`, ordered (force, torque).
pub fn grasp_map(points: &[Vector3<f64>], com: &Vector3<f64>) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(6, 3 * points.len());
    for (i, p) in points.iter().enumerate() {
        let r = (p - com).cross_matrix();
        for k in 0..3 {
            a[(k, 3 * i + k)] = 1.0;
        }
        a.view_mut((3, 3 * i), (3, 3)).copy_from(&r);
    }
    a
}

/// Minimum-norm contact forces producing `wrench` at `com`.
pub fn distribute_grf(
    points: &[Vector3<f64>],
    com: &Vector3<f64>,
    wrench: &Vector6<f64>,
) -> Result<Vec<Vector3<f64>>, SimError> {
    if points.len() < 3 {
        return Err(SimError::TooFewContacts(points.len()));
    }
    let a = grasp_map(points, com);
    let w = DVector::from_column_slice(wrench.as_slice());
    let aat = &a * a.transpose();
    let y = aat.clone().cholesky().ok_or(SimError::InfeasibleWrench)?.solve(&w);
    let f = a.transpose() * y;
    let residual = (&a * &f - &w).norm();
    if !residual.is_finite() || residual > RESIDUAL_TOL * w.norm().max(1.0) {
        return Err(SimError::InfeasibleWrench);
    }
    Ok((0..points.len()).map(|i| Vector3::new(f[3 * i], f[3 * i + 1], f[3 * i + 2])).collect())
}

/// Wrench at `com` produced by the given contact forces.
pub fn contact_wrench(points: &[Vector3<f64>], forces: &[Vector3<f64>], com: &Vector3<f64>) -> Vector6<f64> {
    let mut w = Vector6::zeros();
    for (p, f) in points.iter().zip(forces) {
        let tau = (p - com).cross(f);
        w += Vector6::new(f.x, f.y, f.z, tau.x, tau.y, tau.z);
    }
    w
}
