//! Target trajectories and experiment configuration.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::controller::PidGains;
use crate::error::{Error, Result};
use crate::kinematics::StepperGeometry;
use crate::plant::{PlantConfig, Trajectory};

/// Counterweight mass that leaves `m_target` feeling `g_sim`:
/// `m_cw = m_target * (1 - g_sim / g_earth)`.
pub fn counterweight_for_gravity(m_target: f64, g_sim: f64, g_earth: f64) -> Result<f64> {
    if !(m_target.is_finite() && m_target > 0.0) {
        return Err(Error::Domain(format!(
            "target mass must be positive, got {m_target}"
        )));
    }
    if !(g_earth.is_finite() && g_earth > 0.0) {
        return Err(Error::Domain(format!(
            "g_earth must be positive, got {g_earth}"
        )));
    }
    if !(0.0..=g_earth).contains(&g_sim) {
        return Err(Error::Domain(format!(
            "simulated gravity {g_sim} outside [0, {g_earth}]"
        )));
    }
    Ok(m_target * (g_earth - g_sim) / g_earth)
}

/// Named simulated-gravity levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gravity {
    Moon,
    Mars,
    Micro,
    Earth,
    Value(f64),
}

impl Gravity {
    /// Acceleration in m/s^2 relative to `g_earth`.
    pub fn resolve(self, g_earth: f64) -> f64 {
        match self {
            Gravity::Moon => g_earth / 6.0,
            Gravity::Mars => 3.0 * g_earth / 8.0,
            Gravity::Micro => 0.0,
            Gravity::Earth => g_earth,
            Gravity::Value(g) => g,
        }
    }
}

impl FromStr for Gravity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "moon" | "lunar" => Ok(Gravity::Moon),
            "mars" => Ok(Gravity::Mars),
            "micro" | "zero" => Ok(Gravity::Micro),
            "earth" => Ok(Gravity::Earth),
            other => other
                .parse::<f64>()
                .map(Gravity::Value)
                .map_err(|_| Error::Config(format!("unknown gravity '{s}'"))),
        }
    }
}

impl fmt::Display for Gravity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gravity::Moon => f.write_str("moon"),
            Gravity::Mars => f.write_str("mars"),
            Gravity::Micro => f.write_str("micro"),
            Gravity::Earth => f.write_str("earth"),
            Gravity::Value(g) => write!(f, "{g}"),
        }
    }
}

/// Smooth 0 -> 1 blend with zero end velocities.
fn ease(u: f64) -> f64 {
    0.5 * (1.0 - (PI * u).cos())
}

fn add_scaled(p: [f64; 3], dir: [f64; 3], s: f64) -> [f64; 3] {
    [p[0] + dir[0] * s, p[1] + dir[1] * s, p[2] + dir[2] * s]
}

/// Straight push with a trapezoidal speed profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CartPush {
    pub start: [f64; 3],
    /// Unit vector in the horizontal plane.
    pub direction: [f64; 3],
    pub speed: f64,
    pub distance: f64,
    pub ramp_time: f64,
}

impl CartPush {
    /// (ramp duration, cruise duration, peak speed). Short pushes keep the
    /// ramp acceleration and become triangles.
    fn profile(&self) -> (f64, f64, f64) {
        if self.distance <= 0.0 || self.speed <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        if self.ramp_time <= 0.0 {
            return (0.0, self.distance / self.speed, self.speed);
        }
        let accel = self.speed / self.ramp_time;
        if self.distance >= self.speed * self.ramp_time {
            let cruise = (self.distance - self.speed * self.ramp_time) / self.speed;
            (self.ramp_time, cruise, self.speed)
        } else {
            let peak = (self.distance * accel).sqrt();
            (peak / accel, 0.0, peak)
        }
    }

    pub fn total_time(&self) -> f64 {
        let (ramp, cruise, _) = self.profile();
        2.0 * ramp + cruise
    }

    fn path(&self, t: f64) -> f64 {
        let (ramp, cruise, peak) = self.profile();
        if peak == 0.0 {
            return 0.0;
        }
        let ramp_dist = 0.5 * peak * ramp;
        if t <= ramp {
            // ramp == 0 cannot reach here with t > 0
            0.5 * peak / ramp * t * t
        } else if t <= ramp + cruise {
            ramp_dist + peak * (t - ramp)
        } else if t < 2.0 * ramp + cruise {
            let r = 2.0 * ramp + cruise - t;
            self.distance - 0.5 * peak / ramp * r * r
        } else {
            self.distance
        }
    }
}

/// Stop-and-go climb along a straight slope line.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeClimb {
    pub start: [f64; 3],
    /// Unit vector of the climb heading in the horizontal plane.
    pub heading: [f64; 2],
    pub slope_angle: f64,
    /// Distance along the slope per step (m).
    pub step_length: f64,
    /// Duration of each eased step (s).
    pub step_time: f64,
    /// Pause after each step (s).
    pub dwell: f64,
    pub n_steps: u32,
}

impl SlopeClimb {
    fn direction(&self) -> [f64; 3] {
        let c = self.slope_angle.cos();
        [
            self.heading[0] * c,
            self.heading[1] * c,
            self.slope_angle.sin(),
        ]
    }

    pub fn total_time(&self) -> f64 {
        self.n_steps as f64 * (self.step_time + self.dwell)
    }

    fn path(&self, t: f64) -> f64 {
        let period = self.step_time + self.dwell;
        let n = self.n_steps as f64;
        if self.n_steps == 0 || period <= 0.0 {
            return 0.0;
        }
        let k = (t / period).floor();
        if k >= n {
            return n * self.step_length;
        }
        let u = (t - k * period) / self.step_time;
        if u >= 1.0 {
            (k + 1.0) * self.step_length
        } else {
            (k + ease(u)) * self.step_length
        }
    }
}

/// Eased point-to-point motion through a list of waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Waypoints {
    pub points: Vec<[f64; 3]>,
    pub segment_time: f64,
    pub dwell: f64,
}

impl Waypoints {
    pub fn total_time(&self) -> f64 {
        self.points.len().saturating_sub(1) as f64 * (self.segment_time + self.dwell)
    }

    fn position(&self, t: f64) -> [f64; 3] {
        let last = *self.points.last().expect("validated non-empty");
        let period = self.segment_time + self.dwell;
        if self.points.len() < 2 || period <= 0.0 {
            return last;
        }
        let k = (t / period).floor();
        if k >= (self.points.len() - 1) as f64 {
            return last;
        }
        let k = k as usize;
        let u = ((t - k as f64 * period) / self.segment_time).min(1.0);
        let (a, b) = (self.points[k], self.points[k + 1]);
        let s = ease(u);
        [
            a[0] + (b[0] - a[0]) * s,
            a[1] + (b[1] - a[1]) * s,
            a[2] + (b[2] - a[2]) * s,
        ]
    }
}

/// Prescribed motion of the cable attachment point.
#[derive(Debug, Clone, PartialEq)]
pub enum TrajectorySampler {
    Stationary { position: [f64; 3] },
    CartPush(CartPush),
    SlopeClimb(SlopeClimb),
    Waypoints(Waypoints),
}

impl TrajectorySampler {
    pub fn stationary(position: [f64; 3]) -> Self {
        TrajectorySampler::Stationary { position }
    }

    /// Trapezoidal push from the origin along horizontal `direction`. A zero
    /// distance gives a stationary sampler.
    pub fn cart_push(
        direction: [f64; 2],
        speed: f64,
        distance: f64,
        ramp_time: f64,
    ) -> Result<Self> {
        Self::cart_push_from([0.0; 3], direction, speed, distance, ramp_time)
    }

    pub fn cart_push_from(
        start: [f64; 3],
        direction: [f64; 2],
        speed: f64,
        distance: f64,
        ramp_time: f64,
    ) -> Result<Self> {
        if !(distance.is_finite() && distance >= 0.0) {
            return Err(Error::Config(format!(
                "distance must be >= 0, got {distance}"
            )));
        }
        if distance == 0.0 {
            return Ok(TrajectorySampler::Stationary { position: start });
        }
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::Config(format!("speed must be > 0, got {speed}")));
        }
        if !(ramp_time.is_finite() && ramp_time >= 0.0) {
            return Err(Error::Config(format!(
                "ramp_time must be >= 0, got {ramp_time}"
            )));
        }
        let norm = direction[0].hypot(direction[1]);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Config(
                "push direction must be a non-zero vector".into(),
            ));
        }
        Ok(TrajectorySampler::CartPush(CartPush {
            start,
            direction: [direction[0] / norm, direction[1] / norm, 0.0],
            speed,
            distance,
            ramp_time,
        }))
    }

    /// Stop-and-go climb from the origin heading +x.
    pub fn slope_climb(
        slope_angle: f64,
        step_length: f64,
        dwell: f64,
        n_steps: u32,
    ) -> Result<Self> {
        Self::slope_climb_from(
            [0.0; 3],
            [1.0, 0.0],
            slope_angle,
            step_length,
            1.0,
            dwell,
            n_steps,
        )
    }

    pub fn slope_climb_from(
        start: [f64; 3],
        heading: [f64; 2],
        slope_angle: f64,
        step_length: f64,
        step_time: f64,
        dwell: f64,
        n_steps: u32,
    ) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&slope_angle) {
            return Err(Error::Config(format!(
                "slope angle must lie in [0, 90) deg, got {} deg",
                slope_angle.to_degrees()
            )));
        }
        if n_steps == 0 {
            return Ok(TrajectorySampler::Stationary { position: start });
        }
        if !(step_length.is_finite() && step_length > 0.0) {
            return Err(Error::Config(format!(
                "step_length must be > 0, got {step_length}"
            )));
        }
        if !(step_time.is_finite() && step_time > 0.0) {
            return Err(Error::Config(format!(
                "step_time must be > 0, got {step_time}"
            )));
        }
        if !(dwell.is_finite() && dwell >= 0.0) {
            return Err(Error::Config(format!("dwell must be >= 0, got {dwell}")));
        }
        let norm = heading[0].hypot(heading[1]);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Config(
                "climb heading must be a non-zero vector".into(),
            ));
        }
        Ok(TrajectorySampler::SlopeClimb(SlopeClimb {
            start,
            heading: [heading[0] / norm, heading[1] / norm],
            slope_angle,
            step_length,
            step_time,
            dwell,
            n_steps,
        }))
    }

    pub fn waypoints(points: Vec<[f64; 3]>, segment_time: f64, dwell: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("waypoint list is empty".into()));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("waypoints must be finite".into()));
        }
        if !(segment_time.is_finite() && segment_time > 0.0) {
            return Err(Error::Config(format!(
                "segment_time must be > 0, got {segment_time}"
            )));
        }
        if !(dwell.is_finite() && dwell >= 0.0) {
            return Err(Error::Config(format!("dwell must be >= 0, got {dwell}")));
        }
        Ok(TrajectorySampler::Waypoints(Waypoints {
            points,
            segment_time,
            dwell,
        }))
    }

    /// Time after which the target no longer moves.
    pub fn motion_end(&self) -> f64 {
        match self {
            TrajectorySampler::Stationary { .. } => 0.0,
            TrajectorySampler::CartPush(c) => c.total_time(),
            TrajectorySampler::SlopeClimb(s) => s.total_time(),
            TrajectorySampler::Waypoints(w) => w.total_time(),
        }
    }

    /// Lowest and highest z the attachment point visits. Every sampler moves
    /// monotonically in z between its listed points.
    pub fn z_range(&self) -> (f64, f64) {
        let ends = |a: f64, b: f64| (a.min(b), a.max(b));
        match self {
            TrajectorySampler::Stationary { position } => (position[2], position[2]),
            TrajectorySampler::CartPush(c) => (c.start[2], c.start[2]),
            TrajectorySampler::SlopeClimb(s) => {
                let top = s.start[2] + s.n_steps as f64 * s.step_length * s.slope_angle.sin();
                ends(s.start[2], top)
            }
            TrajectorySampler::Waypoints(w) => w
                .points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[2]), hi.max(p[2]))
                }),
        }
    }
}

impl Trajectory for TrajectorySampler {
    fn position(&self, t: f64) -> Result<[f64; 3]> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::TrajectoryOutOfRange { t });
        }
        Ok(match self {
            TrajectorySampler::Stationary { position } => *position,
            TrajectorySampler::CartPush(c) => add_scaled(c.start, c.direction, c.path(t)),
            TrajectorySampler::SlopeClimb(s) => add_scaled(s.start, s.direction(), s.path(t)),
            TrajectorySampler::Waypoints(w) => w.position(t),
        })
    }
}

/// One experiment: what the target does, how the rig is built and tuned.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub trajectory: TrajectorySampler,
    pub plant: PlantConfig,
    pub gains: PidGains,
    pub geometry: StepperGeometry,
    pub duration: f64,
    pub m_target: f64,
    /// Simulated gravity (m/s^2).
    pub g_sim: f64,
    /// Initial cable tilt (theta, phi) in rad, produced by offsetting the
    /// tracker from above the target's start.
    pub initial_tilt: [f64; 2],
    /// Cable length assumed by the controller; `None` uses the initial
    /// tracker-to-target length.
    pub controller_cable_length: Option<f64>,
}

impl ScenarioConfig {
    /// Scenario with a counterweight sized for `g_sim` on a `m_target` body.
    pub fn new(
        trajectory: TrajectorySampler,
        m_target: f64,
        g_sim: f64,
        duration: f64,
    ) -> Result<Self> {
        let mut plant = PlantConfig::default();
        plant.m_cw = counterweight_for_gravity(m_target, g_sim, plant.g_earth)?;
        Ok(ScenarioConfig {
            trajectory,
            plant,
            gains: PidGains::default(),
            geometry: StepperGeometry::default(),
            duration,
            m_target,
            g_sim,
            initial_tilt: [0.0; 2],
            controller_cable_length: None,
        })
    }

    /// The floor cart push: 20 N of offload (a fully offloaded 2.039 kg
    /// body), 1 m diagonal travel at `speed`, plus 1.5 s to settle.
    pub fn cart_push(speed: f64) -> Result<Self> {
        let traj = TrajectorySampler::cart_push([1.0, 1.0], speed, 1.0, 0.5)?;
        let duration = traj.motion_end() + 1.5;
        Self::new(traj, 2.039, 0.0, duration)
    }

    /// Lunar-gravity climb up a 45 deg slope: ten 5 cm steps, 1 s each with
    /// 1 s pauses.
    pub fn moon_slope_climb() -> Result<Self> {
        let traj = TrajectorySampler::slope_climb_from(
            [0.0; 3],
            [1.0, 0.0],
            45f64.to_radians(),
            0.05,
            1.0,
            1.0,
            10,
        )?;
        let duration = traj.motion_end() + 2.0;
        let mut s = Self::new(traj, 3.0, crate::G_EARTH / 6.0, duration)?;
        s.plant.z_rail = 2.5;
        s.plant.cable_total = 5.0;
        Ok(s)
    }

    /// Stationary target with the tracker displaced to produce a tilt of
    /// `tilt_deg` about the pitch axis.
    pub fn regulation(tilt_deg: f64, duration: f64) -> Result<Self> {
        let mut s = Self::new(
            TrajectorySampler::stationary([0.0; 3]),
            2.039,
            0.0,
            duration,
        )?;
        s.initial_tilt = [tilt_deg.to_radians(), 0.0];
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.plant.validate()?;
        self.gains.validate()?;
        self.geometry.validate()?;
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::Config(format!(
                "duration must be > 0, got {}",
                self.duration
            )));
        }
        if !(self.m_target.is_finite() && self.m_target > 0.0) {
            return Err(Error::Config(format!(
                "m_target must be > 0, got {}",
                self.m_target
            )));
        }
        if !(0.0..=self.plant.g_earth).contains(&self.g_sim) {
            return Err(Error::Config(format!(
                "g_sim {} outside [0, {}]",
                self.g_sim, self.plant.g_earth
            )));
        }
        let (z_min, z_max) = self.trajectory.z_range();
        if z_max >= self.plant.z_rail {
            return Err(Error::Config(format!(
                "target reaches z = {z_max} m, at or above the rail plane {} m",
                self.plant.z_rail
            )));
        }
        if self.plant.cable_total <= self.plant.z_rail - z_min {
            return Err(Error::Config(format!(
                "cable_total {} m too short for a {} m drop",
                self.plant.cable_total,
                self.plant.z_rail - z_min
            )));
        }
        let [theta, phi] = self.initial_tilt;
        if theta.sin().powi(2) + phi.sin().powi(2) >= 1.0
            || theta.abs() >= FRAC_PI_2
            || phi.abs() >= FRAC_PI_2
        {
            return Err(Error::Config(
                "initial tilt is not a valid cable direction".into(),
            ));
        }
        if let Some(l) = self.controller_cable_length {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Config(format!(
                    "controller cable length must be > 0, got {l}"
                )));
            }
        }
        Ok(())
    }

    /// Tracker position that yields `initial_tilt` above the target's start.
    pub fn initial_tracker(&self, target: [f64; 3]) -> [f64; 2] {
        let (st, sp) = (self.initial_tilt[0].sin(), self.initial_tilt[1].sin());
        let drop = self.plant.z_rail - target[2];
        let l = drop / (1.0 - st * st - sp * sp).sqrt();
        // sin(theta) = -(x_t - x_tr)/l, sin(phi) = (y_t - y_tr)/l
        [target[0] + l * st, target[1] - l * sp]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::G_EARTH;
    use proptest::prelude::*;

    fn pos(t: &TrajectorySampler, time: f64) -> [f64; 3] {
        t.position(time).unwrap()
    }

    /// Trapezoid-rule integral of the finite-difference speed.
    fn integrated_path(t: &TrajectorySampler, end: f64, dt: f64) -> f64 {
        let n = (end / dt).ceil() as usize + 10;
        let mut total = 0.0;
        let mut prev = pos(t, 0.0);
        for i in 1..=n {
            let p = pos(t, i as f64 * dt);
            total +=
                ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2) + (p[2] - prev[2]).powi(2))
                    .sqrt();
            prev = p;
        }
        total
    }

    #[test]
    fn moon_counterweight() {
        let m = counterweight_for_gravity(6.0, G_EARTH / 6.0, G_EARTH).unwrap();
        assert!((m - 5.0).abs() < 1e-12);
        assert_eq!(
            counterweight_for_gravity(6.0, G_EARTH, G_EARTH).unwrap(),
            0.0
        );
        let m = counterweight_for_gravity(2.039, 0.0, G_EARTH).unwrap();
        assert_eq!(m, 2.039);
        assert!((m * G_EARTH - 20.0).abs() < 0.01);
    }

    #[test]
    fn counterweight_domain() {
        assert!(counterweight_for_gravity(0.0, 1.0, G_EARTH).is_err());
        assert!(counterweight_for_gravity(1.0, -0.1, G_EARTH).is_err());
        assert!(counterweight_for_gravity(1.0, 10.0, G_EARTH).is_err());
    }

    #[test]
    fn gravity_presets() {
        assert_eq!("moon".parse::<Gravity>().unwrap().resolve(6.0), 1.0);
        assert_eq!("Mars".parse::<Gravity>().unwrap().resolve(8.0), 3.0);
        assert_eq!("micro".parse::<Gravity>().unwrap().resolve(9.8), 0.0);
        assert_eq!("1.62".parse::<Gravity>().unwrap().resolve(9.8), 1.62);
        assert!("jupiter".parse::<Gravity>().is_err());
    }

    #[test]
    fn cart_push_trapezoid() {
        let t = TrajectorySampler::cart_push([1.0, 0.0], 0.04, 1.0, 0.5).unwrap();
        assert!((t.motion_end() - 25.5).abs() < 1e-12);
        let end = pos(&t, 25.5);
        assert!((end[0] - 1.0).abs() < 1e-12 && end[1] == 0.0 && end[2] == 0.0);
        assert_eq!(pos(&t, 40.0), end);
        // cruise speed
        let a = pos(&t, 10.0);
        let b = pos(&t, 11.0);
        assert!((b[0] - a[0] - 0.04).abs() < 1e-12);
    }

    #[test]
    fn cart_push_diagonal_and_degenerate() {
        let t = TrajectorySampler::cart_push([1.0, 1.0], 0.04, 1.0, 0.5).unwrap();
        let end = pos(&t, 30.0);
        assert!((end[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((end[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let s = TrajectorySampler::cart_push([1.0, 0.0], 0.04, 0.0, 0.5).unwrap();
        assert!(matches!(s, TrajectorySampler::Stationary { .. }));

        // shorter than the ramps: triangle with the same acceleration
        let tri = TrajectorySampler::cart_push([1.0, 0.0], 0.04, 0.01, 0.5).unwrap();
        let accel: f64 = 0.08;
        let peak = (0.01 * accel).sqrt();
        assert!((tri.motion_end() - 2.0 * peak / accel).abs() < 1e-12);
        assert!((pos(&tri, 10.0)[0] - 0.01).abs() < 1e-15);

        assert!(TrajectorySampler::cart_push([0.0, 0.0], 0.04, 1.0, 0.5).is_err());
        assert!(TrajectorySampler::cart_push([1.0, 0.0], 0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn slope_examples() {
        let t = TrajectorySampler::slope_climb(45f64.to_radians(), 0.02, 0.5, 1).unwrap();
        let end = pos(&t, 5.0);
        assert!((end[0] - 0.014_142_135_623_730_952).abs() < 1e-15);
        assert!((end[2] - 0.014_142_135_623_730_952).abs() < 1e-15);

        let s = TrajectorySampler::slope_climb(0.3, 0.02, 0.5, 0).unwrap();
        assert!(matches!(s, TrajectorySampler::Stationary { .. }));

        let flat = TrajectorySampler::slope_climb(0.0, 0.05, 0.5, 4).unwrap();
        let end = pos(&flat, 100.0);
        assert!((end[0] - 0.2).abs() < 1e-15);
        assert_eq!(end[2], 0.0);

        assert!(TrajectorySampler::slope_climb(FRAC_PI_2, 0.05, 0.5, 4).is_err());
    }

    #[test]
    fn slope_dwells_between_steps() {
        let t = TrajectorySampler::slope_climb(0.5, 0.05, 1.0, 3).unwrap();
        // step_time 1 s, dwell 1 s: target is still during [1, 2]
        assert_eq!(pos(&t, 1.2), pos(&t, 1.9));
        assert_ne!(pos(&t, 2.5), pos(&t, 1.9));
    }

    #[test]
    fn negative_time_is_out_of_range() {
        let t = TrajectorySampler::stationary([0.0; 3]);
        assert!(matches!(
            t.position(-1.0),
            Err(Error::TrajectoryOutOfRange { .. })
        ));
    }

    #[test]
    fn path_length_consistency() {
        let cases = [
            (
                TrajectorySampler::cart_push([1.0, 1.0], 0.04, 1.0, 0.5).unwrap(),
                1.0,
            ),
            (
                TrajectorySampler::cart_push([0.3, -1.0], 0.029, 0.6, 0.5).unwrap(),
                0.6,
            ),
            (
                TrajectorySampler::slope_climb(45f64.to_radians(), 0.05, 1.0, 10).unwrap(),
                0.5,
            ),
            (
                TrajectorySampler::waypoints(
                    vec![[0.0; 3], [0.3, 0.4, 0.0], [0.3, 0.4, 0.2]],
                    2.0,
                    0.5,
                )
                .unwrap(),
                0.7,
            ),
        ];
        for (t, expected) in cases {
            let len = integrated_path(&t, t.motion_end(), 0.001);
            assert!(((len - expected) / expected).abs() < 1e-3, "{t:?}: {len}");
        }
    }

    #[test]
    fn initial_tracker_reproduces_tilt() {
        let mut s = ScenarioConfig::regulation(5.0, 1.0).unwrap();
        s.initial_tilt = [0.08, -0.03];
        let target = [0.1, 0.2, 0.0];
        let tr = s.initial_tracker(target);
        let plant = crate::plant::Plant::new(s.plant.clone()).unwrap();
        let st = plant.initial_state(target, tr).unwrap();
        let tilt = crate::plant::geometric_tilt(&st).unwrap();
        assert!((tilt.theta - 0.08).abs() < 1e-14);
        assert!((tilt.phi - -0.03).abs() < 1e-14);
    }

    #[test]
    fn scenario_validation() {
        assert!(ScenarioConfig::cart_push(0.04).unwrap().validate().is_ok());
        assert!(ScenarioConfig::moon_slope_climb()
            .unwrap()
            .validate()
            .is_ok());
        let mut s = ScenarioConfig::cart_push(0.04).unwrap();
        s.g_sim = 20.0;
        assert!(s.validate().is_err());
        let mut s = ScenarioConfig::cart_push(0.04).unwrap();
        s.duration = 0.0;
        assert!(s.validate().is_err());
        let mut s = ScenarioConfig::cart_push(0.04).unwrap();
        s.plant.cable_total = 1.5;
        assert!(s.validate().is_err());
    }

    proptest! {
        #[test]
        fn samplers_are_pure(t in 0.0f64..60.0, speed in 0.01f64..0.1) {
            let s = TrajectorySampler::cart_push([1.0, 2.0], speed, 1.0, 0.5).unwrap();
            prop_assert_eq!(pos(&s, t), pos(&s, t));
        }

        #[test]
        fn counterweight_affine_and_monotone(m in 0.1f64..50.0, g1 in 0.0f64..9.8, g2 in 0.0f64..9.8) {
            let f = |m, g| counterweight_for_gravity(m, g, G_EARTH).unwrap();
            // affine in mass (zero intercept)
            prop_assert!((f(2.0 * m, g1) - 2.0 * f(m, g1)).abs() < 1e-12 * m.max(1.0));
            if g1 < g2 {
                prop_assert!(f(m, g1) >= f(m, g2));
            }
        }
    }
}
