use nalgebra::{Matrix3, Matrix4x3, SymmetricEigen, Vector3, Vector4};

use super::{terrain_angles, FootSet, TerrainError, TerrainPlane};
use crate::geom::geodesic_average;

const RANK_EPS: f64 = 1e-9;

/// Parameters of the outlier-robust plane correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmartParams {
    /// Vertical-fit residual above which the correction is applied.
    pub threshold: f64,
    /// Exponent of the weight function.
    pub p: i32,
    /// Sensitivity per unit residual: s = sensitivity · e_LS.
    pub sensitivity: f64,
}

impl Default for SmartParams {
    fn default() -> Self {
        Self { threshold: 0.002, p: 2, sensitivity: 500.0 }
    }
}

/// W(x) = 1 / (1 + s (x − 1)^p).
pub fn weight_fn(x: f64, s: f64, p: i32) -> f64 {
    1.0 / (1.0 + s * (x - 1.0).powi(p))
}

fn plane(normal: Vector3<f64>, e_ls: f64) -> Result<TerrainPlane, TerrainError> {
    let (roll, pitch) = terrain_angles(&normal)?;
    Ok(TerrainPlane { normal, roll, pitch, e_ls, timestamp: 0.0 })
}

/// Least-squares plane z = −(a x + b y + d) minimizing vertical distances.
///
/// Solves A [a b d]ᵀ = −z with rows [x y 1] through the pseudoinverse; the
/// residual ‖Ax − b‖₂ is stored as `e_ls`.
pub fn vertical_fit(feet: &FootSet) -> Result<TerrainPlane, TerrainError> {
    let p = &feet.points;
    let a = Matrix4x3::from_fn(|r, c| match c {
        0 => p[r].x,
        1 => p[r].y,
        _ => 1.0,
    });
    let b = Vector4::from_fn(|r, _| -p[r].z);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= RANK_EPS * smax.max(1.0) {
        return Err(TerrainError::Collinear);
    }
    let x = svd.solve(&b, 0.0).map_err(|_| TerrainError::Collinear)?;
    let e_ls = (a * x - b).norm();
    plane(Vector3::new(x[0], x[1], 1.0).normalize(), e_ls)
}

/// Total least-squares plane through the centroid: the normal is the
/// eigenvector of RᵀR with the smallest eigenvalue, R the centered samples.
/// `e_ls` holds the orthogonal residual √λ_min.
pub fn affine_fit(feet: &FootSet) -> Result<TerrainPlane, TerrainError> {
    let p = &feet.points;
    let centroid = p.iter().sum::<Vector3<f64>>() / 4.0;
    let scatter: Matrix3<f64> = p.iter().map(|q| (q - centroid) * (q - centroid).transpose()).sum();
    let eig = SymmetricEigen::new(scatter);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let (lmin, lmid, lmax) = (
        eig.eigenvalues[order[0]],
        eig.eigenvalues[order[1]],
        eig.eigenvalues[order[2]],
    );
    if lmax <= 0.0 || lmid <= RANK_EPS * lmax {
        return Err(TerrainError::RankDeficient);
    }
    let mut n: Vector3<f64> = eig.eigenvectors.column(order[0]).into_owned().normalize();
    if n.z < 0.0 {
        n = -n;
    }
    if n.z < RANK_EPS {
        return Err(TerrainError::NotUpward(n.z));
    }
    plane(n, lmin.max(0.0).sqrt())
}

/// Vertical fit, corrected when the stance feet are not coplanar.
///
/// Above the residual threshold the normal becomes the geodesic average of
/// the previous normal (weight 1) and the four support-triangle normals
/// n_ij = l_i × l_j of adjacent CCW edges, each weighted by
/// W(n_oldᵀ n_ij) with s = sensitivity · e_LS. The cross products enter the
/// weight unnormalized, as in the weight definition; they are normalized
/// before averaging. Triangle normals more than 90° from the previous
/// normal are discarded.
pub fn smart_correct(
    feet: &FootSet,
    previous: &TerrainPlane,
    params: &SmartParams,
) -> Result<TerrainPlane, TerrainError> {
    let fit = vertical_fit(feet)?;
    if fit.e_ls <= params.threshold {
        return Ok(fit);
    }
    if !feet.is_ccw() {
        return Err(TerrainError::NotCcw);
    }
    let p = &feet.points;
    let edges: [Vector3<f64>; 4] = std::array::from_fn(|i| p[(i + 1) % 4] - p[i]);
    let s = params.sensitivity * fit.e_ls;
    let n_old = previous.normal;

    let mut dirs = vec![n_old];
    let mut weights = vec![1.0];
    for i in 0..4 {
        let j = (i + 1) % 4;
        let n_ij = edges[i].cross(&edges[j]);
        let scale = edges[i].norm() * edges[j].norm();
        if n_ij.norm() <= RANK_EPS * scale.max(f64::MIN_POSITIVE) {
            return Err(TerrainError::DegenerateEdges(i, j));
        }
        let cos = n_old.dot(&n_ij);
        if cos <= 0.0 {
            continue;
        }
        dirs.push(n_ij.normalize());
        weights.push(weight_fn(cos, s, params.p));
    }
    let n = geodesic_average(&dirs, &weights).map_err(|_| TerrainError::DegenerateEdges(0, 1))?;
    plane(n, fit.e_ls)
}

/// Terrain triad with Z along `normal` and X the base X axis projected onto
/// the terrain plane. Columns are the axes.
pub fn build_terrain_frame(
    normal: &Vector3<f64>,
    base_rotation: &Matrix3<f64>,
) -> Result<Matrix3<f64>, TerrainError> {
    let z = normal.normalize();
    let xb = base_rotation.column(0).into_owned();
    let proj = xb - z * xb.dot(&z);
    let len = proj.norm();
    if len < 1e-9 {
        return Err(TerrainError::DegenerateProjection);
    }
    let x = proj / len;
    let y = z.cross(&x);
    Ok(Matrix3::from_columns(&[x, y, z]))
}
