//! Leg identifiers and rigid-body parameters of the quadruped.

use nalgebra::{Matrix3, Vector3};

/// One of the four legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leg {
    LF,
    RF,
    LH,
    RH,
}

impl Leg {
    /// All legs in index order.
    pub const ALL: [Leg; 4] = [Leg::LF, Leg::RF, Leg::LH, Leg::RH];

    /// Legs in counter-clockwise order seen from above (x forward, y left).
    pub const CCW: [Leg; 4] = [Leg::LF, Leg::LH, Leg::RH, Leg::RF];

    /// Default crawl sequence.
    pub const DEFAULT_SEQUENCE: [Leg; 4] = [Leg::RH, Leg::RF, Leg::LH, Leg::LF];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_front(self) -> bool {
        matches!(self, Leg::LF | Leg::RF)
    }

    pub fn is_left(self) -> bool {
        matches!(self, Leg::LF | Leg::LH)
    }

    /// The leg on the other side of the same pair (front or hind).
    pub fn contralateral(self) -> Leg {
        match self {
            Leg::LF => Leg::RF,
            Leg::RF => Leg::LF,
            Leg::LH => Leg::RH,
            Leg::RH => Leg::LH,
        }
    }

    /// The leg on the same side.
    pub fn ipsilateral(self) -> Leg {
        match self {
            Leg::LF => Leg::LH,
            Leg::LH => Leg::LF,
            Leg::RF => Leg::RH,
            Leg::RH => Leg::RF,
        }
    }

    /// The leg on the opposite corner.
    pub fn diagonal(self) -> Leg {
        self.contralateral().ipsilateral()
    }

    pub fn name(self) -> &'static str {
        match self {
            Leg::LF => "LF",
            Leg::RF => "RF",
            Leg::LH => "LH",
            Leg::RH => "RH",
        }
    }

    pub fn from_name(s: &str) -> Option<Leg> {
        Leg::ALL.into_iter().find(|l| l.name().eq_ignore_ascii_case(s))
    }
}

impl std::fmt::Display for Leg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Mass properties and hip layout.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotGeometry {
    pub mass: f64,
    /// Composite rotational inertia at the CoM, base-aligned.
    pub inertia: Matrix3<f64>,
    /// Hip positions in the base frame, indexed by [`Leg::index`].
    pub hips: [Vector3<f64>; 4],
    /// CoM position in the base frame.
    pub com_offset: Vector3<f64>,
    pub upper_length: f64,
    pub lower_length: f64,
}

impl Default for RobotGeometry {
    fn default() -> Self {
        let (hx, hy) = (0.375, 0.207);
        Self {
            mass: 85.0,
            inertia: Matrix3::from_diagonal(&Vector3::new(4.0, 11.0, 12.0)),
            hips: [
                Vector3::new(hx, hy, 0.0),
                Vector3::new(hx, -hy, 0.0),
                Vector3::new(-hx, hy, 0.0),
                Vector3::new(-hx, -hy, 0.0),
            ],
            com_offset: Vector3::zeros(),
            upper_length: 0.35,
            lower_length: 0.346,
        }
    }
}

impl RobotGeometry {
    pub fn hip(&self, leg: Leg) -> Vector3<f64> {
        self.hips[leg.index()]
    }
}
