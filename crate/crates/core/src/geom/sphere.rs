use nalgebra::{Rotation3, Unit, Vector3};

use super::GeomError;

const AXIS_EPS: f64 = 1e-9;

/// Rotates unit vector `from` toward unit vector `to` by `angle` about the
/// axis `from × to`. Near-parallel inputs return `to`.
pub fn rotate_toward(from: &Vector3<f64>, to: &Vector3<f64>, angle: f64) -> Vector3<f64> {
    let axis = from.cross(to);
    let n = axis.norm();
    if n < AXIS_EPS {
        return *to;
    }
    let r = Rotation3::from_axis_angle(&Unit::new_unchecked(axis / n), angle);
    r * from
}

/// Iterative weighted mean of directions on the unit sphere.
///
/// Starting from the first direction, each following direction `n_k` is
/// rotated toward the running mean by the fraction of the total weight
/// accumulated before it. Inputs are normalized; zero-length inputs and
/// directions antipodal to the running mean are rejected.
pub fn geodesic_average(
    directions: &[Vector3<f64>],
    weights: &[f64],
) -> Result<Vector3<f64>, GeomError> {
    if directions.is_empty() {
        return Err(GeomError::EmptyDirections);
    }
    if directions.len() != weights.len() {
        return Err(GeomError::WeightCount { directions: directions.len(), weights: weights.len() });
    }
    for (index, &w) in weights.iter().enumerate() {
        if !(w > 0.0 && w.is_finite()) {
            return Err(GeomError::NonPositiveWeight { index, value: w });
        }
    }
    let unit = |k: usize| -> Result<Vector3<f64>, GeomError> {
        let d = directions[k];
        let n = d.norm();
        if !n.is_finite() {
            return Err(GeomError::NonFinite("direction"));
        }
        if n < AXIS_EPS {
            return Err(GeomError::ZeroVector(k));
        }
        Ok(d / n)
    };

    let mut mean = unit(0)?;
    let mut acc = weights[0];
    for k in 1..directions.len() {
        let nk = unit(k)?;
        let cos = mean.dot(&nk).clamp(-1.0, 1.0);
        if nk.cross(&mean).norm() < AXIS_EPS {
            if cos < 0.0 {
                return Err(GeomError::Antipodal(k));
            }
            acc += weights[k];
            continue;
        }
        let theta = cos.acos();
        let frac = acc / (acc + weights[k]);
        mean = rotate_toward(&nk, &mean, theta * frac).normalize();
        acc += weights[k];
    }
    Ok(mean)
}
