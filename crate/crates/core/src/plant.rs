//! Physical side of the testbed: prescribed target motion, the CoreXY tracker
//! carriage moved by stepper steps, the cable over the tracker pulley, the
//! passive counterweight and the gimbal encoders.
//!
//! The plant is purely kinematic. Once the target trajectory is prescribed and
//! the tracker is positioned by whole steps, the only remaining coupling is the
//! counterweight, which is tied to the tracker-to-target cable length by the
//! fixed total cable length.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{feeds_to_displacement, BeltFeeds, CableTilt, StepperGeometry};
use crate::G_EARTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensionModel {
    /// Tension equals the counterweight's weight.
    #[default]
    QuasiStatic,
    /// Adds the counterweight's inertial load, estimated from the second
    /// difference of the cable length history.
    Dynamic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantConfig {
    /// Height of the tracker pulley plane (m).
    pub z_rail: f64,
    /// Counterweight mass (kg).
    pub m_cw: f64,
    pub g_earth: f64,
    /// Total cable length from attachment point over the pulley to the
    /// counterweight (m).
    pub cable_total: f64,
    pub tension_model: TensionModel,
    /// Encoder quantum (rad/count).
    pub encoder_resolution: f64,
    /// Standard deviation of additive encoder noise (rad).
    pub encoder_noise_sigma: f64,
    pub noise_seed: u64,
}

impl Default for PlantConfig {
    fn default() -> Self {
        PlantConfig {
            z_rail: 2.0,
            m_cw: 20.0 / G_EARTH,
            g_earth: G_EARTH,
            cable_total: 4.0,
            tension_model: TensionModel::QuasiStatic,
            encoder_resolution: 2.0 * std::f64::consts::PI / 4096.0,
            encoder_noise_sigma: 0.0,
            noise_seed: 0,
        }
    }
}

impl PlantConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("m_cw", self.m_cw)?;
        positive("g_earth", self.g_earth)?;
        positive("cable_total", self.cable_total)?;
        positive("encoder_resolution", self.encoder_resolution)?;
        if !self.z_rail.is_finite() {
            return Err(Error::Config("z_rail must be finite".into()));
        }
        if !(self.encoder_noise_sigma.is_finite() && self.encoder_noise_sigma >= 0.0) {
            return Err(Error::Config(format!(
                "encoder_noise_sigma must be non-negative, got {}",
                self.encoder_noise_sigma
            )));
        }
        Ok(())
    }
}

/// Full kinematic state of the rig.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantState {
    pub t: f64,
    /// Cable attachment point on the target (m).
    pub target: [f64; 3],
    /// Pulley position in the rail plane (m); its z is `z_rail`.
    pub tracker: [f64; 2],
    /// Pulley position when both belt counters read zero.
    pub home: [f64; 2],
    /// Accumulated belt steps since initialization.
    pub steps_a: i64,
    pub steps_b: i64,
    pub belt_a: f64,
    pub belt_b: f64,
    /// Tracker-to-target cable length (m).
    pub l1: f64,
    /// Counterweight height (m).
    pub z_cw: f64,
    pub tension: f64,
    /// Last three `l1` samples, oldest first.
    pub l1_hist: [f64; 3],
    /// How many entries of `l1_hist` hold real samples (1..=3).
    pub hist_len: u8,
    /// Sample spacing of `l1_hist` (s).
    pub hist_dt: f64,
}

/// Force the cable applies to the target (N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffloadForce {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    /// Angle of the force from vertical (rad).
    pub alpha: f64,
}

impl OffloadForce {
    pub fn horizontal(&self) -> f64 {
        self.fx.hypot(self.fy)
    }
}

/// Quantized gimbal angles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EncoderReading {
    pub theta: f64,
    pub phi: f64,
}

/// Anything that yields the attachment-point position at time `t`.
pub trait Trajectory {
    fn position(&self, t: f64) -> Result<[f64; 3]>;
}

/// Plant model bound to one configuration.
#[derive(Debug, Clone)]
pub struct Plant {
    config: PlantConfig,
}

impl Plant {
    pub fn new(config: PlantConfig) -> Result<Self> {
        config.validate()?;
        Ok(Plant { config })
    }

    pub fn config(&self) -> &PlantConfig {
        &self.config
    }

    /// State at `t = 0` with the tracker pulley at `tracker` and belt counters
    /// zeroed there.
    pub fn initial_state(&self, target: [f64; 3], tracker: [f64; 2]) -> Result<PlantState> {
        let mut s = PlantState {
            t: 0.0,
            target,
            tracker,
            home: tracker,
            steps_a: 0,
            steps_b: 0,
            belt_a: 0.0,
            belt_b: 0.0,
            l1: 0.0,
            z_cw: 0.0,
            tension: 0.0,
            l1_hist: [0.0; 3],
            hist_len: 1,
            hist_dt: 0.0,
        };
        self.update_geometry(&mut s)?;
        s.l1_hist = [s.l1; 3];
        s.tension = compute_tension(&s, &self.config);
        Ok(s)
    }

    fn update_geometry(&self, s: &mut PlantState) -> Result<()> {
        if s.target[2] >= self.config.z_rail {
            return Err(Error::Domain(format!(
                "target z {} at or above the rail plane {}",
                s.target[2], self.config.z_rail
            )));
        }
        s.l1 = cable_length(s, self.config.z_rail);
        if s.l1 >= self.config.cable_total {
            return Err(Error::CablePaidOut {
                l1: s.l1,
                total: self.config.cable_total,
            });
        }
        s.z_cw = self.config.z_rail - (self.config.cable_total - s.l1);
        Ok(())
    }

    /// Moves the target to `traj(s.t + dt)` and shifts the cable-length
    /// history.
    pub fn advance_target(
        &self,
        s: &PlantState,
        traj: &impl Trajectory,
        dt: f64,
    ) -> Result<PlantState> {
        self.advance_target_to(s, traj, s.t + dt)
    }

    /// Same as [`Plant::advance_target`] with an absolute time, so callers
    /// that count integer steps do not accumulate rounding in `t`.
    pub fn advance_target_to(
        &self,
        s: &PlantState,
        traj: &impl Trajectory,
        t: f64,
    ) -> Result<PlantState> {
        let mut next = s.clone();
        next.hist_dt = t - s.t;
        next.t = t;
        next.target = traj.position(t)?;
        self.update_geometry(&mut next)?;
        next.l1_hist = [s.l1_hist[1], s.l1_hist[2], next.l1];
        next.hist_len = (s.hist_len + 1).min(3);
        next.tension = compute_tension(&next, &self.config);
        Ok(next)
    }

    /// Executes whole belt steps. The newest `l1_hist` entry is overwritten
    /// because the steps belong to the current physics sample.
    pub fn apply_steps(
        &self,
        s: &PlantState,
        steps_a: i64,
        steps_b: i64,
        geometry: &StepperGeometry,
        dt: f64,
    ) -> Result<PlantState> {
        let limit = geometry.max_steps(dt);
        for (belt, steps) in [('a', steps_a), ('b', steps_b)] {
            if steps.abs() > limit {
                return Err(Error::StepRateExceeded {
                    belt,
                    steps,
                    dt,
                    limit,
                });
            }
        }
        if steps_a == 0 && steps_b == 0 {
            return Ok(s.clone());
        }
        let mut next = s.clone();
        next.steps_a += steps_a;
        next.steps_b += steps_b;
        next.belt_a = next.steps_a as f64 * geometry.feed_per_step;
        next.belt_b = next.steps_b as f64 * geometry.feed_per_step;
        let d = feeds_to_displacement(BeltFeeds::new(next.belt_a, next.belt_b));
        next.tracker = [next.home[0] + d.dx, next.home[1] + d.dy];
        self.update_geometry(&mut next)?;
        next.l1_hist[2] = next.l1;
        next.tension = compute_tension(&next, &self.config);
        Ok(next)
    }
}

fn cable_length(s: &PlantState, z_rail: f64) -> f64 {
    let dx = s.target[0] - s.tracker[0];
    let dy = s.target[1] - s.tracker[1];
    let dz = s.target[2] - z_rail;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Tilt of the cable as the gimbal sees it, in the kinematics sign convention.
pub fn geometric_tilt(s: &PlantState) -> Result<CableTilt> {
    if s.l1 <= 0.0 {
        return Err(Error::DegenerateCable);
    }
    let dx = s.target[0] - s.tracker[0];
    let dy = s.target[1] - s.tracker[1];
    Ok(CableTilt {
        theta: (-dx / s.l1).clamp(-1.0, 1.0).asin(),
        phi: (dy / s.l1).clamp(-1.0, 1.0).asin(),
        length: s.l1,
    })
}

pub fn compute_tension(s: &PlantState, c: &PlantConfig) -> f64 {
    let static_tension = c.m_cw * c.g_earth;
    match c.tension_model {
        TensionModel::QuasiStatic => static_tension,
        TensionModel::Dynamic if s.hist_len < 3 || s.hist_dt <= 0.0 => static_tension,
        TensionModel::Dynamic => {
            let [l0, l1, l2] = s.l1_hist;
            let accel = (l2 - 2.0 * l1 + l0) / (s.hist_dt * s.hist_dt);
            c.m_cw * (c.g_earth + accel)
        }
    }
}

/// Force on the target: tension along the unit vector from the attachment
/// point to the pulley.
pub fn offload_force(s: &PlantState, z_rail: f64, tension: f64) -> Result<OffloadForce> {
    if s.l1 <= 0.0 {
        return Err(Error::DegenerateCable);
    }
    let ux = (s.tracker[0] - s.target[0]) / s.l1;
    let uy = (s.tracker[1] - s.target[1]) / s.l1;
    let uz = (z_rail - s.target[2]) / s.l1;
    let (fx, fy, fz) = (tension * ux, tension * uy, tension * uz);
    Ok(OffloadForce {
        fx,
        fy,
        fz,
        alpha: fx.hypot(fy).atan2(fz.abs()),
    })
}

/// Gimbal encoder model: true tilt plus seeded Gaussian noise, quantized to
/// whole counts with ties to even.
pub fn read_encoders<R: Rng + ?Sized>(
    s: &PlantState,
    c: &PlantConfig,
    rng: &mut R,
) -> Result<EncoderReading> {
    let tilt = geometric_tilt(s)?;
    let (mut theta, mut phi) = (tilt.theta, tilt.phi);
    if c.encoder_noise_sigma > 0.0 {
        let n1: f64 = StandardNormal.sample(rng);
        let n2: f64 = StandardNormal.sample(rng);
        theta += c.encoder_noise_sigma * n1;
        phi += c.encoder_noise_sigma * n2;
    }
    let quantize = |a: f64| (a / c.encoder_resolution).round_ties_even() * c.encoder_resolution;
    Ok(EncoderReading {
        theta: quantize(theta),
        phi: quantize(phi),
    })
}
