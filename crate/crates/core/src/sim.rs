//! Fixed-step closed-loop orchestration.
//!
//! Time is an integer physics-step counter; `t = n * dt_phys`. Each physics
//! step moves the target, executes this substep's share of the steps
//! commanded at the previous control tick, and on control ticks reads the
//! encoders and computes the next command. Commanded steps are spread evenly
//! over the following control interval.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::controller::{control_step, ControllerState};
use crate::error::{Error, Result};
use crate::metrics::{summarize, MetricsRecord, SummaryStats};
use crate::plant::{
    geometric_tilt, offload_force, read_encoders, EncoderReading, Plant, PlantState, Trajectory,
};
use crate::scenarios::ScenarioConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Physics step (s).
    pub dt_phys: f64,
    /// Physics steps per control tick.
    pub ctrl_divisor: u32,
    /// Physics steps per telemetry record.
    pub record_divisor: u32,
    pub scenario: ScenarioConfig,
}

impl SimConfig {
    /// 1 kHz physics, 100 Hz control and telemetry.
    pub fn new(scenario: ScenarioConfig) -> Self {
        SimConfig {
            dt_phys: 0.001,
            ctrl_divisor: 10,
            record_divisor: 10,
            scenario,
        }
    }

    pub fn dt_ctrl(&self) -> f64 {
        self.dt_phys * self.ctrl_divisor as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_phys.is_finite() && self.dt_phys > 0.0) {
            return Err(Error::Config(format!(
                "dt_phys must be > 0, got {}",
                self.dt_phys
            )));
        }
        if self.ctrl_divisor == 0 {
            return Err(Error::Config("ctrl_divisor must be >= 1".into()));
        }
        if self.record_divisor == 0 {
            return Err(Error::Config("record_divisor must be >= 1".into()));
        }
        self.scenario.validate()
    }
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// The controller asked for more steps than the drivers allow.
    StepRateExceeded(String),
    /// The configuration became infeasible mid-run (for example the cable
    /// paid out completely).
    ConfigError(String),
}

/// Internal bookkeeping exposed for invariant checks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub control_ticks: u64,
    /// Sum of |steps| executed on both belts.
    pub steps_issued: u64,
    pub max_abs_integral: f64,
    /// Largest |commanded - stepped| belt feed seen at a control tick (m).
    pub max_feed_discrepancy: [f64; 2],
    /// Total rate-limited feed requested per belt by commands whose
    /// execution interval has finished (m).
    pub commanded_feed: [f64; 2],
    /// Total feed executed per belt (m).
    pub stepped_feed: [f64; 2],
    /// Cable length the controller assumed (m).
    pub controller_cable_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub records: Vec<MetricsRecord>,
    pub summary: SummaryStats,
    pub saturation_events: u64,
    pub termination: Termination,
    pub diagnostics: Diagnostics,
}

impl SimResult {
    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Completed and within both force-direction thresholds.
    pub fn passed(&self) -> bool {
        self.completed() && self.summary.passed()
    }
}

/// Signed share of `total` steps for substep `k` of `parts`.
fn substep_share(total: i64, k: i64, parts: i64) -> i64 {
    ((k + 1) * total).div_euclid(parts) - (k * total).div_euclid(parts)
}

struct Loop<'a> {
    cfg: &'a SimConfig,
    plant: Plant,
    state: PlantState,
    cs: ControllerState,
    rng: ChaCha8Rng,
    meas: EncoderReading,
    pending: [i64; 2],
    in_flight: [f64; 2],
    cable_length: f64,
    diag: Diagnostics,
    saturation_events: u64,
    records: Vec<MetricsRecord>,
}

impl Loop<'_> {
    fn control_tick(&mut self) -> Result<()> {
        let sc = &self.cfg.scenario;
        let g = &sc.geometry;
        for (i, stepped) in [self.state.belt_a, self.state.belt_b]
            .into_iter()
            .enumerate()
        {
            self.diag.commanded_feed[i] += self.in_flight[i];
            self.diag.stepped_feed[i] = stepped;
            let gap = (self.diag.commanded_feed[i] - stepped).abs();
            self.diag.max_feed_discrepancy[i] = self.diag.max_feed_discrepancy[i].max(gap);
        }
        self.meas = read_encoders(&self.state, &sc.plant, &mut self.rng)?;
        let (cmd, next) = control_step(&self.meas, self.cable_length, &sc.gains, &self.cs, g)?;
        self.cs = next;
        self.pending = [cmd.steps_a, cmd.steps_b];
        self.in_flight = [cmd.feeds.da, cmd.feeds.db];
        self.diag.control_ticks += 1;
        let integral = next.integral[0].abs().max(next.integral[1].abs());
        self.diag.max_abs_integral = self.diag.max_abs_integral.max(integral);
        if next.saturated {
            self.saturation_events += 1;
        }
        Ok(())
    }

    fn record(&mut self) -> Result<()> {
        let s = &self.state;
        let tilt = geometric_tilt(s)?;
        let f = offload_force(s, self.cfg.scenario.plant.z_rail, s.tension)?;
        self.records.push(MetricsRecord {
            t: s.t,
            target: s.target,
            tracker: s.tracker,
            theta_true: tilt.theta,
            phi_true: tilt.phi,
            theta_meas: self.meas.theta,
            phi_meas: self.meas.phi,
            belt_a: s.belt_a,
            belt_b: s.belt_b,
            tension: s.tension,
            fx: f.fx,
            fy: f.fy,
            fz: f.fz,
            alpha: f.alpha,
            cmd_velocity: self.cs.cmd_velocity,
            saturated: self.cs.saturated,
        });
        Ok(())
    }

    fn physics_step(&mut self, n: u64) -> Result<()> {
        let cfg = self.cfg;
        let t = n as f64 * cfg.dt_phys;
        let div = cfg.ctrl_divisor as i64;
        self.state = self
            .plant
            .advance_target_to(&self.state, &cfg.scenario.trajectory, t)?;
        let k = ((n - 1) % cfg.ctrl_divisor as u64) as i64;
        let sa = substep_share(self.pending[0], k, div);
        let sb = substep_share(self.pending[1], k, div);
        self.state =
            self.plant
                .apply_steps(&self.state, sa, sb, &cfg.scenario.geometry, cfg.dt_phys)?;
        self.diag.steps_issued += sa.unsigned_abs() + sb.unsigned_abs();
        if n.is_multiple_of(cfg.ctrl_divisor as u64) {
            self.control_tick()?;
        }
        if n.is_multiple_of(cfg.record_divisor as u64) {
            self.record()?;
        }
        Ok(())
    }
}

/// Runs one closed-loop simulation. Invalid configurations are returned as
/// `Err`; faults during the run end it early with the records gathered so
/// far.
pub fn run(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let sc = &cfg.scenario;
    let plant = Plant::new(sc.plant.clone())?;
    let target0 = sc.trajectory.position(0.0)?;
    let state = plant.initial_state(target0, sc.initial_tracker(target0))?;
    let cable_length = sc.controller_cable_length.unwrap_or(state.l1);

    let mut lp = Loop {
        cfg,
        plant,
        state,
        cs: ControllerState::new(cfg.dt_ctrl()),
        rng: ChaCha8Rng::seed_from_u64(sc.plant.noise_seed),
        meas: EncoderReading::default(),
        pending: [0, 0],
        in_flight: [0.0; 2],
        cable_length,
        diag: Diagnostics {
            controller_cable_length: cable_length,
            ..Diagnostics::default()
        },
        saturation_events: 0,
        records: Vec::new(),
    };

    lp.control_tick()?;
    lp.record()?;

    let n_steps = (sc.duration / cfg.dt_phys).round() as u64;
    let mut termination = Termination::Completed;
    for n in 1..=n_steps {
        match lp.physics_step(n) {
            Ok(()) => {}
            Err(e @ Error::StepRateExceeded { .. }) => {
                termination = Termination::StepRateExceeded(e.to_string());
                break;
            }
            Err(e) => {
                termination = Termination::ConfigError(e.to_string());
                break;
            }
        }
    }
    let summary = summarize(&lp.records)?;
    Ok(SimResult {
        records: lp.records,
        summary,
        saturation_events: lp.saturation_events,
        termination,
        diagnostics: lp.diag,
    })
}

/// Runs every configuration, in parallel, returning results in input order.
pub fn run_batch(cfgs: &[SimConfig]) -> Vec<Result<SimResult>> {
    cfgs.par_iter().map(run).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::TrajectorySampler;

    #[test]
    fn shares_sum_and_spread() {
        for total in [-203i64, -200, -7, 0, 1, 9, 10, 11, 199, 200] {
            let shares: Vec<_> = (0..10).map(|k| substep_share(total, k, 10)).collect();
            assert_eq!(shares.iter().sum::<i64>(), total);
            let cap = (total.abs() + 9) / 10;
            assert!(shares.iter().all(|s| s.abs() <= cap), "{total}: {shares:?}");
            assert!(shares.iter().all(|s| s.signum() * total.signum() >= 0));
        }
    }

    #[test]
    fn stationary_run_is_quiet() {
        let sc =
            ScenarioConfig::new(TrajectorySampler::stationary([0.0; 3]), 2.0, 0.0, 2.0).unwrap();
        let res = run(&SimConfig::new(sc)).unwrap();
        assert!(res.completed());
        assert_eq!(res.records.len(), 201);
        assert!(res.records.iter().all(|r| r.alpha == 0.0));
        assert_eq!(res.diagnostics.steps_issued, 0);
    }

    #[test]
    fn record_times_are_exact_multiples() {
        let sc = ScenarioConfig::cart_push(0.04).unwrap();
        let mut cfg = SimConfig::new(sc);
        cfg.scenario.duration = 3.0;
        cfg.record_divisor = 7;
        let res = run(&cfg).unwrap();
        for (k, r) in res.records.iter().enumerate() {
            assert_eq!(r.t, (k as u64 * 7) as f64 * 0.001);
        }
        assert!(res.records.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn invalid_config_is_an_error() {
        let mut cfg = SimConfig::new(ScenarioConfig::cart_push(0.04).unwrap());
        cfg.ctrl_divisor = 0;
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn batch_matches_individual_runs() {
        let mut cfgs: Vec<_> = [0.029, 0.043]
            .iter()
            .map(|&v| {
                let mut c = SimConfig::new(ScenarioConfig::cart_push(v).unwrap());
                c.scenario.duration = 4.0;
                c
            })
            .collect();
        let mut bad = cfgs[0].clone();
        bad.dt_phys = -1.0;
        cfgs.insert(1, bad);
        let out = run_batch(&cfgs);
        assert_eq!(out.len(), 3);
        assert!(out[1].is_err());
        assert_eq!(out[0].as_ref().unwrap(), &run(&cfgs[0]).unwrap());
        assert_eq!(out[2].as_ref().unwrap(), &run(&cfgs[2]).unwrap());
        assert!(run_batch(&[]).is_empty());
    }
}
