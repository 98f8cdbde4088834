//! Rough-terrain crawl planning for quadrupeds.
//!
//! The crate is organised bottom-up:
//!
//! * [`geom`] rotations, frames, quintic segments and spherical averaging
//! * [`terrain`] height maps and terrain-plane estimation
//! * [`step`] foothold selection, swing trajectories and the step reflex
//! * [`body`] body targets, base-to-feet mapping and leg kinematics
//! * [`observer`] external wrench observer and ZMP compensation
//! * [`sim`] quasi-static crawl simulator driving the planners above
//! * [`io`] scenario configuration, terrain generators and log output

pub mod body;
pub mod geom;
pub mod io;
pub mod observer;
pub mod robot;
pub mod sim;
pub mod step;
pub mod terrain;
