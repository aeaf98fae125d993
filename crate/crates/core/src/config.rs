//! Run configuration files.
//!
//! One TOML file describes one run. Units are SI; angles are degrees in the
//! file and radians everywhere else. Unknown keys are rejected. Omitted
//! sections and keys take the library defaults.
//!
//! ```toml
//! duration_s = 27.0
//!
//! [sim]
//! dt_phys_s = 0.001
//! ctrl_divisor = 10
//! record_divisor = 10
//!
//! [trajectory]
//! kind = "cart_push"          # cart_push | slope_climb | waypoints | stationary
//! direction = [1.0, 1.0]
//! speed_mps = 0.04
//! distance_m = 1.0
//! ramp_time_s = 0.5
//!
//! [offload]
//! m_target_kg = 2.039
//! gravity = "micro"           # moon | mars | micro | earth | <m/s^2>
//!
//! [plant]
//! z_rail_m = 2.0
//! cable_total_m = 4.0
//! tension_model = "quasi_static"
//! encoder_resolution_deg = 0.087890625
//!
//! [controller]
//! kp = 8.0
//! ki = 2.0
//! kd = 0.1
//!
//! [stepper]
//! feed_per_step_m = 1.25e-5
//! max_step_rate = 20000.0
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::controller::PidGains;
use crate::error::{Error, Result};
use crate::kinematics::StepperGeometry;
use crate::plant::{PlantConfig, TensionModel};
use crate::scenarios::{counterweight_for_gravity, Gravity, ScenarioConfig, TrajectorySampler};
use crate::sim::SimConfig;
use crate::G_EARTH;

/// Settle time appended to the motion when `duration_s` is omitted.
pub const DEFAULT_SETTLE_S: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
    #[serde(default)]
    pub sim: SimSection,
    pub trajectory: TrajectorySection,
    #[serde(default)]
    pub offload: OffloadSection,
    #[serde(default)]
    pub plant: PlantSection,
    #[serde(default)]
    pub controller: ControllerSection,
    #[serde(default)]
    pub stepper: StepperSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub dt_phys_s: f64,
    pub ctrl_divisor: u32,
    pub record_divisor: u32,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            dt_phys_s: 0.001,
            ctrl_divisor: 10,
            record_divisor: 10,
        }
    }
}

fn default_ramp() -> f64 {
    0.5
}

fn default_step_time() -> f64 {
    1.0
}

fn default_heading() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrajectorySection {
    Stationary {
        #[serde(default)]
        start_m: [f64; 3],
    },
    CartPush {
        #[serde(default)]
        start_m: [f64; 3],
        direction: [f64; 2],
        speed_mps: f64,
        distance_m: f64,
        #[serde(default = "default_ramp")]
        ramp_time_s: f64,
    },
    SlopeClimb {
        #[serde(default)]
        start_m: [f64; 3],
        #[serde(default = "default_heading")]
        heading: [f64; 2],
        slope_deg: f64,
        step_length_m: f64,
        #[serde(default = "default_step_time")]
        step_time_s: f64,
        dwell_s: f64,
        n_steps: u32,
    },
    Waypoints {
        points_m: Vec<[f64; 3]>,
        segment_time_s: f64,
        #[serde(default)]
        dwell_s: f64,
    },
}

impl TrajectorySection {
    pub fn build(&self) -> Result<TrajectorySampler> {
        match *self {
            TrajectorySection::Stationary { start_m } => Ok(TrajectorySampler::stationary(start_m)),
            TrajectorySection::CartPush {
                start_m,
                direction,
                speed_mps,
                distance_m,
                ramp_time_s,
            } => TrajectorySampler::cart_push_from(
                start_m,
                direction,
                speed_mps,
                distance_m,
                ramp_time_s,
            ),
            TrajectorySection::SlopeClimb {
                start_m,
                heading,
                slope_deg,
                step_length_m,
                step_time_s,
                dwell_s,
                n_steps,
            } => TrajectorySampler::slope_climb_from(
                start_m,
                heading,
                slope_deg.to_radians(),
                step_length_m,
                step_time_s,
                dwell_s,
                n_steps,
            ),
            TrajectorySection::Waypoints {
                ref points_m,
                segment_time_s,
                dwell_s,
            } => TrajectorySampler::waypoints(points_m.clone(), segment_time_s, dwell_s),
        }
    }
}

/// Simulated gravity as written in a file: a preset name or a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GravitySetting {
    Value(f64),
    Name(String),
}

impl GravitySetting {
    pub fn resolve(&self, g_earth: f64) -> Result<f64> {
        match self {
            GravitySetting::Value(g) => Ok(*g),
            GravitySetting::Name(n) => Ok(n.parse::<Gravity>()?.resolve(g_earth)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OffloadSection {
    pub m_target_kg: f64,
    pub gravity: GravitySetting,
}

impl Default for OffloadSection {
    fn default() -> Self {
        OffloadSection {
            m_target_kg: 2.039,
            gravity: GravitySetting::Name("micro".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlantSection {
    pub z_rail_m: f64,
    pub cable_total_m: f64,
    pub g_earth: f64,
    pub tension_model: TensionModel,
    pub encoder_resolution_deg: f64,
    pub encoder_noise_sigma_deg: f64,
    pub noise_seed: u64,
    pub initial_tilt_deg: [f64; 2],
}

impl Default for PlantSection {
    fn default() -> Self {
        let p = PlantConfig::default();
        PlantSection {
            z_rail_m: p.z_rail,
            cable_total_m: p.cable_total,
            g_earth: G_EARTH,
            tension_model: p.tension_model,
            encoder_resolution_deg: p.encoder_resolution.to_degrees(),
            encoder_noise_sigma_deg: 0.0,
            noise_seed: 0,
            initial_tilt_deg: [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerSection {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub integral_limit_m: f64,
    pub deadband_deg: f64,
    /// Cable length the controller assumes; the initial geometric length when
    /// omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cable_length_m: Option<f64>,
}

impl Default for ControllerSection {
    fn default() -> Self {
        let g = PidGains::default();
        ControllerSection {
            kp: g.kp,
            ki: g.ki,
            kd: g.kd,
            integral_limit_m: g.integral_limit,
            deadband_deg: g.deadband.to_degrees(),
            cable_length_m: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepperSection {
    pub feed_per_step_m: f64,
    pub max_step_rate: f64,
}

impl Default for StepperSection {
    fn default() -> Self {
        let g = StepperGeometry::default();
        StepperSection {
            feed_per_step_m: g.feed_per_step,
            max_step_rate: g.max_step_rate,
        }
    }
}

impl RunFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_sim_config(&self) -> Result<SimConfig> {
        let trajectory = self.trajectory.build()?;
        let p = &self.plant;
        let g_sim = self.offload.gravity.resolve(p.g_earth)?;
        let m_cw = counterweight_for_gravity(self.offload.m_target_kg, g_sim, p.g_earth)?;
        let duration = self
            .duration_s
            .unwrap_or(trajectory.motion_end() + DEFAULT_SETTLE_S);
        let c = &self.controller;
        let scenario = ScenarioConfig {
            trajectory,
            plant: PlantConfig {
                z_rail: p.z_rail_m,
                m_cw,
                g_earth: p.g_earth,
                cable_total: p.cable_total_m,
                tension_model: p.tension_model,
                encoder_resolution: p.encoder_resolution_deg.to_radians(),
                encoder_noise_sigma: p.encoder_noise_sigma_deg.to_radians(),
                noise_seed: p.noise_seed,
            },
            gains: PidGains {
                kp: c.kp,
                ki: c.ki,
                kd: c.kd,
                integral_limit: c.integral_limit_m,
                deadband: c.deadband_deg.to_radians(),
            },
            geometry: StepperGeometry {
                feed_per_step: self.stepper.feed_per_step_m,
                max_step_rate: self.stepper.max_step_rate,
            },
            duration,
            m_target: self.offload.m_target_kg,
            g_sim,
            initial_tilt: [
                p.initial_tilt_deg[0].to_radians(),
                p.initial_tilt_deg[1].to_radians(),
            ],
            controller_cable_length: c.cable_length_m,
        };
        let cfg = SimConfig {
            dt_phys: self.sim.dt_phys_s,
            ctrl_divisor: self.sim.ctrl_divisor,
            record_divisor: self.sim.record_divisor,
            scenario,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn parse_config(text: &str) -> Result<SimConfig> {
    RunFile::parse(text)?.to_sim_config()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SimConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Parses a command-line value as a TOML value, falling back to a string.
fn parse_value(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t
            .remove("v")
            .unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Sets a dotted key such as `trajectory.speed_mps` in a parsed file.
pub fn set_key(table: &mut toml::Table, key: &str, raw: &str) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let leaf = parts
        .pop()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::Config(format!("empty parameter key '{key}'")))?;
    let mut cur = table;
    for p in parts {
        cur = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("'{p}' in '{key}' is not a table")))?;
    }
    cur.insert(leaf.to_string(), parse_value(raw));
    Ok(())
}

/// One configuration per value of `key`, validated.
pub fn sweep_configs(text: &str, key: &str, values: &[String]) -> Result<Vec<SimConfig>> {
    let base: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    values
        .iter()
        .map(|v| {
            let mut t = base.clone();
            set_key(&mut t, key, v)?;
            let rf: RunFile = toml::Value::Table(t)
                .try_into()
                .map_err(|e: toml::de::Error| Error::Config(format!("{key} = {v}: {e}")))?;
            rf.to_sim_config()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CART: &str = r#"
[trajectory]
kind = "cart_push"
direction = [1.0, 1.0]
speed_mps = 0.04
distance_m = 1.0
"#;

    #[test]
    fn minimal_cart_file_matches_preset() {
        let cfg = parse_config(CART).unwrap();
        let preset = SimConfig::new(ScenarioConfig::cart_push(0.04).unwrap());
        assert_eq!(cfg.scenario.trajectory, preset.scenario.trajectory);
        assert!((cfg.scenario.duration - preset.scenario.duration).abs() < 1e-12);
        assert_eq!(cfg.scenario.plant.m_cw, 2.039);
        assert_eq!(cfg.scenario.gains, PidGains::default());
        assert!(
            (cfg.scenario.plant.encoder_resolution - preset.scenario.plant.encoder_resolution)
                .abs()
                < 1e-18
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{CART}\n[controller]\nkpp = 3.0\n");
        assert!(parse_config(&text).is_err());
        let text = CART.replace("speed_mps", "sped_mps");
        assert!(parse_config(&text).is_err());
        let text = format!("bogus = 1\n{CART}");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn gravity_presets_and_values() {
        let moon = format!("{CART}\n[offload]\nm_target_kg = 6.0\ngravity = \"moon\"\n");
        let cfg = parse_config(&moon).unwrap();
        assert!((cfg.scenario.plant.m_cw - 5.0).abs() < 1e-12);
        let num = format!("{CART}\n[offload]\nm_target_kg = 6.0\ngravity = 0\n");
        assert_eq!(parse_config(&num).unwrap().scenario.plant.m_cw, 6.0);
        let bad = format!("{CART}\n[offload]\ngravity = \"pluto\"\n");
        assert!(parse_config(&bad).is_err());
    }

    #[test]
    fn degrees_at_the_boundary() {
        let text = format!(
            "{CART}\n[plant]\ninitial_tilt_deg = [5.0, 0.0]\n[controller]\ndeadband_deg = 0.1\n"
        );
        let cfg = parse_config(&text).unwrap();
        assert!((cfg.scenario.initial_tilt[0] - 5f64.to_radians()).abs() < 1e-15);
        assert!((cfg.scenario.gains.deadband - 0.1f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn slope_and_waypoints() {
        let slope = r#"
[trajectory]
kind = "slope_climb"
slope_deg = 45.0
step_length_m = 0.05
dwell_s = 1.0
n_steps = 10
[plant]
z_rail_m = 2.5
cable_total_m = 5.0
"#;
        let cfg = parse_config(slope).unwrap();
        assert!((cfg.scenario.trajectory.motion_end() - 20.0).abs() < 1e-12);
        let wp = r#"
duration_s = 5.0
[trajectory]
kind = "waypoints"
points_m = [[0, 0, 0], [0.1, 0.0, 0.0]]
segment_time_s = 2.0
"#;
        assert_eq!(parse_config(wp).unwrap().scenario.duration, 5.0);
    }

    #[test]
    fn invalid_values_fail_validation() {
        let text = CART.replace("0.04", "-0.04");
        assert!(parse_config(&text).is_err());
        let text = format!("{CART}\n[sim]\nctrl_divisor = 0\n");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn sweep_overrides_one_key() {
        let vals = ["0.029".to_string(), "0.043".to_string()];
        let cfgs = sweep_configs(CART, "trajectory.speed_mps", &vals).unwrap();
        assert_eq!(cfgs.len(), 2);
        match &cfgs[1].scenario.trajectory {
            TrajectorySampler::CartPush(c) => assert_eq!(c.speed, 0.043),
            other => panic!("{other:?}"),
        }
        let cfgs = sweep_configs(CART, "offload.gravity", &["mars".to_string()]).unwrap();
        assert!((cfgs[0].scenario.g_sim - 3.0 * G_EARTH / 8.0).abs() < 1e-12);
        assert!(sweep_configs(CART, "controller.nope", &["1".to_string()]).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let rf = RunFile::parse(CART).unwrap();
        let text = rf.to_toml().unwrap();
        assert_eq!(RunFile::parse(&text).unwrap(), rf);
    }
}
