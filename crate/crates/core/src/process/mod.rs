//! Particle-system state and the exact step dynamics.

mod config;
mod params;
mod run;

pub use config::{Configuration, StepEvent};
pub use params::{Color, InitSpec, Placement, SimParams, Topology};
pub use run::{run_configuration, run_to_extinction, StepObserver};
