//! Deterministic quasi-static crawl simulator.
//!
//! The base tracks the planned body trajectories exactly. Contacts are
//! emulated against the height map, ground reaction forces come from a
//! minimum-norm distribution of the required wrench, and the centroidal
//! momentum is integrated from those forces plus the injected wrench to
//! give the observer its ground truth.

mod contact;
mod grf;
mod log;
mod world;
mod wrench;

pub use contact::{detect_touchdown, height_reflex, HeightReflexParams, TouchdownDetector};
pub use grf::{contact_wrench, distribute_grf, grasp_map};
pub use log::{Event, EventKind, GaitPhase, SimLog, TickRecord};
pub use world::{run_scenario, Simulator};
pub use wrench::WrenchSchedule;

use crate::body::BodyError;
use crate::observer::ObserverError;
use crate::step::StepError;
use crate::terrain::TerrainError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("need at least 3 contacts, got {0}")]
    TooFewContacts(usize),
    #[error("wrench cannot be produced by the contact set")]
    InfeasibleWrench,
    #[error("height target {target} below minimum {min}")]
    HeightBelowMinimum { target: f64, min: f64 },
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error(transparent)]
    Terrain(#[from] TerrainError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
}
