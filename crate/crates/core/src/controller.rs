//! Discrete PID tracking loop for the CoreXY tracker.
//!
//! Measured gimbal angles are turned into a horizontal position error with the
//! configured cable length, the PID output is a tracker velocity, and the
//! velocity over one control period becomes a pair of belt feeds that are
//! rate-limited and quantized into whole steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{
    displacement_to_feeds, quantize_feed, BeltFeeds, PlanarDisplacement, StepperGeometry,
};
use crate::plant::EncoderReading;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidGains {
    /// Proportional gain (1/s).
    pub kp: f64,
    /// Integral gain (1/s^2).
    pub ki: f64,
    /// Derivative gain (dimensionless).
    pub kd: f64,
    /// Anti-windup clamp on each integrator.
    pub integral_limit: f64,
    /// Angles smaller than this are treated as zero (rad).
    pub deadband: f64,
}

impl Default for PidGains {
    fn default() -> Self {
        PidGains {
            kp: 8.0,
            ki: 2.0,
            kd: 0.1,
            integral_limit: 0.05,
            deadband: 0.0,
        }
    }
}

impl PidGains {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        if !(self.integral_limit.is_finite() && self.integral_limit > 0.0) {
            return Err(Error::Config(format!(
                "integral_limit must be positive, got {}",
                self.integral_limit
            )));
        }
        if !(self.deadband.is_finite() && self.deadband >= 0.0) {
            return Err(Error::Config(format!(
                "deadband must be non-negative, got {}",
                self.deadband
            )));
        }
        Ok(())
    }
}

/// Memory carried between control ticks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerState {
    pub integral: [f64; 2],
    pub prev_err: [f64; 2],
    /// False until the first error sample exists; the derivative is zero on
    /// the first tick.
    pub primed: bool,
    /// Sub-step feed remainders of belts a and b (m).
    pub residual_a: f64,
    pub residual_b: f64,
    /// Control period (s).
    pub dt_ctrl: f64,
    /// Last commanded tracker velocity after rate limiting (m/s).
    pub cmd_velocity: [f64; 2],
    /// Whether the last command hit the belt step-rate ceiling.
    pub saturated: bool,
}

impl ControllerState {
    pub fn new(dt_ctrl: f64) -> Self {
        ControllerState {
            integral: [0.0; 2],
            prev_err: [0.0; 2],
            primed: false,
            residual_a: 0.0,
            residual_b: 0.0,
            dt_ctrl,
            cmd_velocity: [0.0; 2],
            saturated: false,
        }
    }
}

/// Output of one control tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCommand {
    pub steps_a: i64,
    pub steps_b: i64,
    /// Belt feeds requested this tick after rate limiting, before
    /// quantization.
    pub feeds: BeltFeeds,
}

pub fn control_step(
    meas: &EncoderReading,
    cable_length: f64,
    gains: &PidGains,
    cs: &ControllerState,
    geometry: &StepperGeometry,
) -> Result<(StepCommand, ControllerState)> {
    let dt = cs.dt_ctrl;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!(
            "control period must be positive, got {dt}"
        )));
    }
    if !(cable_length.is_finite() && cable_length > 0.0) {
        return Err(Error::Domain(format!(
            "controller cable length must be positive, got {cable_length}"
        )));
    }

    let in_band = |a: f64| a.abs() < gains.deadband;
    let theta = if in_band(meas.theta) { 0.0 } else { meas.theta };
    let phi = if in_band(meas.phi) { 0.0 } else { meas.phi };

    let mut next = *cs;
    let err = [-cable_length * theta.sin(), cable_length * phi.sin()];

    if in_band(meas.theta) && in_band(meas.phi) {
        // hold: no motion, integrators untouched
        next.prev_err = [0.0; 2];
        next.primed = true;
        next.cmd_velocity = [0.0; 2];
        next.saturated = false;
        return Ok((
            StepCommand {
                steps_a: 0,
                steps_b: 0,
                feeds: BeltFeeds::default(),
            },
            next,
        ));
    }

    let limit = gains.integral_limit;
    let mut integral = cs.integral;
    let mut velocity = [0.0; 2];
    for i in 0..2 {
        integral[i] = (cs.integral[i] + err[i] * dt).clamp(-limit, limit);
        let deriv = if cs.primed {
            (err[i] - cs.prev_err[i]) / dt
        } else {
            0.0
        };
        velocity[i] = gains.kp * err[i] + gains.ki * integral[i] + gains.kd * deriv;
    }

    let mut feeds =
        displacement_to_feeds(PlanarDisplacement::new(velocity[0] * dt, velocity[1] * dt));
    let max_steps = geometry.max_steps(dt);
    let max_feed = max_steps as f64 * geometry.feed_per_step;
    let peak = feeds.max_abs();
    let saturated = peak > max_feed;
    if saturated {
        let k = max_feed / peak;
        feeds = BeltFeeds::new(feeds.da * k, feeds.db * k);
        velocity = [velocity[0] * k, velocity[1] * k];
    } else {
        next.integral = integral;
    }

    let (steps_a, residual_a) = quantize_clamped(feeds.da + cs.residual_a, geometry, max_steps);
    let (steps_b, residual_b) = quantize_clamped(feeds.db + cs.residual_b, geometry, max_steps);

    next.prev_err = err;
    next.primed = true;
    next.residual_a = residual_a;
    next.residual_b = residual_b;
    next.cmd_velocity = velocity;
    next.saturated = saturated;
    Ok((
        StepCommand {
            steps_a,
            steps_b,
            feeds,
        },
        next,
    ))
}

fn quantize_clamped(feed: f64, geometry: &StepperGeometry, max_steps: i64) -> (i64, f64) {
    let (steps, residual) = quantize_feed(feed, geometry);
    if steps.abs() <= max_steps {
        return (steps, residual);
    }
    // only reachable through rounding when a saturated feed meets a residual
    let steps = steps.clamp(-max_steps, max_steps);
    (steps, feed - steps as f64 * geometry.feed_per_step)
}
