//! Height maps and terrain-plane estimation from stance-foot positions.

mod fit;
mod map;

use nalgebra::Vector3;

pub use fit::{
    affine_fit, build_terrain_frame, smart_correct, vertical_fit, weight_fn, SmartParams,
};
pub use map::HeightMap;

/// Errors raised by terrain estimation and height-map handling.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TerrainError {
    #[error("foot XY projections are collinear")]
    Collinear,
    #[error("scatter matrix is rank deficient")]
    RankDeficient,
    #[error("feet are not in counter-clockwise order")]
    NotCcw,
    #[error("edges {0} and {1} are parallel")]
    DegenerateEdges(usize, usize),
    #[error("normal is not upward (n_z = {0})")]
    NotUpward(f64),
    #[error("base X axis is parallel to the terrain normal")]
    DegenerateProjection,
    #[error("query ({x}, {y}) is outside the height map")]
    OutOfBounds { x: f64, y: f64 },
    #[error("height map: {0}")]
    InvalidMap(String),
    #[error("height map line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Estimated terrain plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrainPlane {
    /// Unit normal pointing upward.
    pub normal: Vector3<f64>,
    pub roll: f64,
    pub pitch: f64,
    /// Least-squares residual of the fit that produced the plane.
    pub e_ls: f64,
    /// Time of the touchdown that triggered the update.
    pub timestamp: f64,
}

impl TerrainPlane {
    /// Plane with the given upward normal and zero residual.
    pub fn from_normal(normal: Vector3<f64>) -> Result<Self, TerrainError> {
        let n = normal.normalize();
        let (roll, pitch) = terrain_angles(&n)?;
        Ok(Self { normal: n, roll, pitch, e_ls: 0.0, timestamp: 0.0 })
    }

    pub fn flat() -> Self {
        Self { normal: Vector3::z(), roll: 0.0, pitch: 0.0, e_ls: 0.0, timestamp: 0.0 }
    }

    pub fn with_timestamp(mut self, t: f64) -> Self {
        self.timestamp = t;
        self
    }
}

impl Default for TerrainPlane {
    fn default() -> Self {
        Self::flat()
    }
}

/// Four stance-foot positions in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootSet {
    pub points: [Vector3<f64>; 4],
}

impl FootSet {
    pub fn new(points: [Vector3<f64>; 4]) -> Self {
        Self { points }
    }

    /// Signed area of the XY projection (shoelace); positive for CCW order.
    pub fn signed_area(&self) -> f64 {
        let p = &self.points;
        (0..4)
            .map(|i| {
                let (a, b) = (p[i], p[(i + 1) % 4]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
            * 0.5
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }
}

/// Roll and pitch of the terrain plane with upward unit normal `n`.
///
/// The plane frame is R_y(θ)R_x(φ), so n = (sinθ cosφ, −sinφ, cosθ cosφ)
/// and θ = atan(n_x/n_z). φ is taken as atan2(−n_y cosθ, n_z), which equals
/// atan(−n_y sinθ / n_x) wherever n_x ≠ 0 and stays defined at n_x = 0.
pub fn terrain_angles(n: &Vector3<f64>) -> Result<(f64, f64), TerrainError> {
    if !(n.z > 0.0) {
        return Err(TerrainError::NotUpward(n.z));
    }
    let pitch = (n.x / n.z).atan();
    let roll = (-n.y * pitch.cos()).atan2(n.z);
    Ok((roll, pitch))
}

/// Unit normal for the given terrain roll and pitch.
pub fn normal_from_angles(roll: f64, pitch: f64) -> Vector3<f64> {
    Vector3::new(pitch.sin() * roll.cos(), -roll.sin(), pitch.cos() * roll.cos())
}
