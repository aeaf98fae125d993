//! Closed-loop simulator of a counterweight gravity-offloading testbed.
//!
//! A body hangs from a cable that runs up to a pulley on a CoreXY tracker in
//! the ceiling and over to a counterweight. The counterweight cancels a chosen
//! fraction of the body's weight; the tracker follows the body so the cable,
//! and with it the offload force, stays vertical. Two gimbal encoders measure
//! the cable tilt, a PID loop turns the tilt into CoreXY belt feeds, and two
//! steppers execute them in whole steps.
//!
//! Module map:
//! - [`kinematics`]: tilt to displacement, CoreXY belt maps, step quantization
//! - [`plant`]: cable geometry, counterweight, tension, offload force, encoders
//! - [`controller`]: the discrete PID loop
//! - [`scenarios`]: target trajectories and counterweight sizing
//! - [`sim`]: the fixed-step engine
//! - [`metrics`], [`telemetry`]: summaries, CSV and plot-data files
//! - [`config`]: run configuration files and parameter sweeps
//! - [`tune`]: grid search over PID gains

pub mod config;
pub mod controller;
pub mod error;
pub mod kinematics;
pub mod metrics;
pub mod plant;
pub mod scenarios;
pub mod sim;
pub mod telemetry;
pub mod tune;

/// Standard gravity (m/s^2).
pub const G_EARTH: f64 = 9.80665;

pub use controller::{control_step, ControllerState, PidGains, StepCommand};
pub use error::{Error, Result};
pub use kinematics::{
    displacement_to_feeds, feeds_to_displacement, quantize_feed, tilt_to_displacement, BeltFeeds,
    CableTilt, PlanarDisplacement, StepperGeometry,
};
pub use metrics::{summarize, MetricsRecord, SummaryStats, ANGLE_LIMIT_DEG, FORCE_LIMIT_N};
pub use plant::{
    compute_tension, geometric_tilt, offload_force, read_encoders, EncoderReading, OffloadForce,
    Plant, PlantConfig, PlantState, TensionModel, Trajectory,
};
pub use scenarios::{counterweight_for_gravity, Gravity, ScenarioConfig, TrajectorySampler};
pub use sim::{run, run_batch, SimConfig, SimResult, Termination};
pub use tune::{tune_gains, GainGrid, TuneOutcome};
