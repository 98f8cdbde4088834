use nalgebra::{Vector2, Vector3};

use super::StepError;
use crate::robot::Leg;
use crate::terrain::HeightMap;

/// Cyclic swing order and the position of the next leg to swing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaitSequence {
    pub order: [Leg; 4],
    pub next: usize,
}

impl Default for GaitSequence {
    fn default() -> Self {
        Self { order: Leg::DEFAULT_SEQUENCE, next: 0 }
    }
}

impl GaitSequence {
    pub fn next_leg(&self) -> Leg {
        self.order[self.next]
    }

    /// Returns the next leg and moves past it.
    pub fn advance(&mut self) -> Leg {
        let leg = self.next_leg();
        self.next = (self.next + 1) % 4;
        leg
    }

    /// Same cyclic order, restarted at `leg`.
    pub fn starting_at(&self, leg: Leg) -> Self {
        let i = self.order.iter().position(|&l| l == leg).expect("sequence is a permutation");
        Self { order: std::array::from_fn(|k| self.order[(i + k) % 4]), next: 0 }
    }
}

/// After `last` touched down, swing its contralateral leg next when the two
/// feet of the pair are more than `tol` apart in height (strict).
///
/// `feet` is indexed by [`Leg::index`].
pub fn stair_resequence(seq: &GaitSequence, last: Leg, feet: &[Vector3<f64>; 4], tol: f64) -> GaitSequence {
    let other = last.contralateral();
    let dz = (feet[other.index()].z - feet[last.index()].z).abs();
    if dz > tol && seq.next_leg() != other {
        seq.starting_at(other)
    } else {
        *seq
    }
}

/// Tuning of the conservative foothold correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeParams {
    /// Height change that counts as an edge.
    pub edge_threshold: f64,
    pub min_edge_distance: f64,
    /// Half-length of the scanned window along the motion direction.
    pub window: f64,
    /// Sample spacing of the scan.
    pub spacing: f64,
}

impl Default for ConservativeParams {
    fn default() -> Self {
        Self { edge_threshold: 0.05, min_edge_distance: 0.08, window: 0.25, spacing: 0.005 }
    }
}

/// Result of [`conservative_step_correction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeStep {
    pub target: Vector3<f64>,
    pub moved: bool,
    /// An edge was too close but no safe point exists in the window.
    pub fallback: bool,
}

/// Slides a foothold along the motion direction away from a step edge
/// lying ahead of it.
///
/// Edges are detected by differencing heights across one map cell. When
/// an edge sits within `min_edge_distance` ahead of the target, the target
/// moves to the flattest window point at least that far from every edge,
/// preferring points ahead of the target, then the smallest displacement.
pub fn conservative_step_correction(
    map: &HeightMap,
    target: &Vector3<f64>,
    motion_dir: &Vector2<f64>,
    params: &ConservativeParams,
) -> Result<ConservativeStep, StepError> {
    let dir = motion_dir.normalize();
    if !dir.iter().all(|v| v.is_finite()) {
        return Err(StepError::InvalidParam("motion_dir"));
    }
    let origin = Vector2::new(target.x, target.y);
    map.height(origin.x, origin.y)?;
    let half = (params.window / params.spacing).round() as i64;
    let baseline = (2.0 * params.spacing).max(map.resolution());
    let at = |s: f64| {
        let p = origin + dir * s;
        map.height(p.x, p.y).ok()
    };

    let mut samples = Vec::new();
    let mut edges = Vec::new();
    for i in -half..=half {
        let s = i as f64 * params.spacing;
        let Some(h) = at(s) else { continue };
        samples.push((s, h));
        if let (Some(a), Some(b)) = (at(s - 0.5 * baseline), at(s + 0.5 * baseline)) {
            if (b - a).abs() > params.edge_threshold {
                edges.push(s);
            }
        }
    }
    let unchanged = ConservativeStep { target: *target, moved: false, fallback: false };
    let close_ahead = edges.iter().any(|&e| e >= 0.0 && e < params.min_edge_distance);
    if !close_ahead {
        return Ok(unchanged);
    }

    let roughness = |s: f64| -> f64 {
        let r = 0.5 * params.min_edge_distance;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(q, h) in &samples {
            if (q - s).abs() <= r {
                lo = lo.min(h);
                hi = hi.max(h);
            }
        }
        hi - lo
    };
    let best = samples
        .iter()
        .filter(|(s, _)| edges.iter().all(|e| (s - e).abs() >= params.min_edge_distance))
        .map(|&(s, h)| (roughness(s), s < 0.0, s.abs(), s, h))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    match best {
        Some((_, _, _, s, h)) => {
            let p = origin + dir * s;
            Ok(ConservativeStep { target: Vector3::new(p.x, p.y, h), moved: s != 0.0, fallback: false })
        }
        None => Ok(ConservativeStep { fallback: true, ..unchanged }),
    }
}
