use std::fmt;

use nalgebra::{Vector2, Vector3, Vector6};

use crate::robot::Leg;

/// Crawl state-machine phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaitPhase {
    MoveBody,
    Unload(Leg),
    Swing(Leg),
    Search(Leg),
    Load(Leg),
}

impl GaitPhase {
    pub fn name(self) -> &'static str {
        match self {
            GaitPhase::MoveBody => "move_body",
            GaitPhase::Unload(_) => "unload",
            GaitPhase::Swing(_) => "swing",
            GaitPhase::Search(_) => "search",
            GaitPhase::Load(_) => "load",
        }
    }

    /// Numeric code used in CSV output (0..=4, in phase order).
    pub fn code(self) -> u8 {
        match self {
            GaitPhase::MoveBody => 0,
            GaitPhase::Unload(_) => 1,
            GaitPhase::Swing(_) => 2,
            GaitPhase::Search(_) => 3,
            GaitPhase::Load(_) => 4,
        }
    }

    pub fn leg(self) -> Option<Leg> {
        match self {
            GaitPhase::MoveBody => None,
            GaitPhase::Unload(l) | GaitPhase::Swing(l) | GaitPhase::Search(l) | GaitPhase::Load(l) => Some(l),
        }
    }

    /// True while the active leg is in the air.
    pub fn airborne(self) -> bool {
        matches!(self, GaitPhase::Swing(_) | GaitPhase::Search(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    /// A move-body phase started; `next` swings after it.
    MoveBodyStart { next: Leg },
    Liftoff,
    /// Debounced contact. `searched` is set when it happened during the
    /// searching motion, with `travel` the extension at contact.
    Touchdown { searched: bool, travel: f64 },
    /// Swing foot ran into terrain above its current height.
    Impact { swing_up: bool },
    StepReflex,
    MissedReflex,
    /// Swing planned with the raised apex that follows a missed reflex.
    ApexRaise,
    SearchStart,
    WorkspaceLimit { travel: f64 },
    HeightReflex { target: f64 },
    Resequence { next: Leg },
    ConservativeShift { fallback: bool },
    /// Leg inverse kinematics failed (first tick of an episode).
    KinematicLimit(String),
    /// Support margin fell below the CoM margin (first tick of an episode).
    MarginViolation { margin: f64 },
    Divergence,
    Halt(String),
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::MoveBodyStart { .. } => "move_body_start",
            EventKind::Liftoff => "liftoff",
            EventKind::Touchdown { .. } => "touchdown",
            EventKind::Impact { .. } => "impact",
            EventKind::StepReflex => "step_reflex",
            EventKind::MissedReflex => "missed_reflex",
            EventKind::ApexRaise => "apex_raise",
            EventKind::SearchStart => "search_start",
            EventKind::WorkspaceLimit { .. } => "workspace_limit",
            EventKind::HeightReflex { .. } => "height_reflex",
            EventKind::Resequence { .. } => "resequence",
            EventKind::ConservativeShift { .. } => "conservative_shift",
            EventKind::KinematicLimit(_) => "kinematic_limit",
            EventKind::MarginViolation { .. } => "margin_violation",
            EventKind::Divergence => "divergence",
            EventKind::Halt(_) => "halt",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::MoveBodyStart { next } => write!(f, "next={}", next.name()),
            EventKind::Touchdown { searched, travel } => write!(f, "searched={searched} travel={travel:.9}"),
            EventKind::Impact { swing_up } => write!(f, "swing_up={swing_up}"),
            EventKind::WorkspaceLimit { travel } => write!(f, "travel={travel:.9}"),
            EventKind::HeightReflex { target } => write!(f, "target={target:.9}"),
            EventKind::Resequence { next } => write!(f, "next={}", next.name()),
            EventKind::ConservativeShift { fallback } => write!(f, "fallback={fallback}"),
            EventKind::KinematicLimit(msg) | EventKind::Halt(msg) => f.write_str(msg),
            EventKind::MarginViolation { margin } => write!(f, "margin={margin:.9}"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t: f64,
    pub leg: Option<Leg>,
    pub kind: EventKind,
}

/// State at the end of one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickRecord {
    pub t: f64,
    pub phase: GaitPhase,
    /// Final CoM target of the current body motion.
    pub com_ref: Vector3<f64>,
    pub com: Vector3<f64>,
    /// (roll, pitch, yaw).
    pub euler: Vector3<f64>,
    pub feet: [Vector3<f64>; 4],
    pub contact: [bool; 4],
    pub grf_des: [Vector3<f64>; 4],
    pub grf: [Vector3<f64>; 4],
    pub normal: Vector3<f64>,
    /// Observer estimate (f, τ).
    pub w_hat: Vector6<f64>,
    /// Injected wrench at the CoM (f, τ).
    pub w_ext: Vector6<f64>,
    pub zmp: Vector2<f64>,
    /// CoM shift computed from the estimate.
    pub zmp_shift: Vector2<f64>,
    /// Support margin of the ZMP, defined while a leg is airborne.
    pub margin: Option<f64>,
    pub diverged: bool,
    pub h_target: f64,
    pub height: f64,
    /// Simulated (linear, angular) momentum.
    pub momentum: Vector6<f64>,
}

impl TickRecord {
    /// ‖realized − desired‖ over all feet.
    pub fn grf_err_norm(&self) -> f64 {
        self.grf.iter().zip(&self.grf_des).map(|(a, b)| (a - b).norm_squared()).sum::<f64>().sqrt()
    }
}

/// Output of a run: one record per tick plus discrete events.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimLog {
    pub dt: f64,
    pub mass: f64,
    pub com_margin: f64,
    pub records: Vec<TickRecord>,
    pub events: Vec<Event>,
    /// Reason the run stopped early, if it did.
    pub halt: Option<String>,
}

impl SimLog {
    pub fn count(&self, name: &str) -> usize {
        self.events.iter().filter(|e| e.kind.name() == name).count()
    }
}
