//! Exhaustive grid search over PID gains, with an optional coordinate-descent
//! refinement pass.
//!
//! The objective is the largest angle of the offload force from vertical over
//! a whole run. Candidates whose run does not complete (step-rate violation or
//! any other fault) are infeasible. Ties go to the lexicographically smallest
//! `(kp, ki, kd)`.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::controller::PidGains;
use crate::error::{Error, Result};
use crate::sim::{run, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainGrid {
    pub kp: Vec<f64>,
    pub ki: Vec<f64>,
    pub kd: Vec<f64>,
    /// Try midpoints toward neighbouring grid values around the grid optimum.
    #[serde(default)]
    pub refine: bool,
}

impl GainGrid {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    fn candidates(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.kp.len() * self.ki.len() * self.kd.len());
        for &kp in &self.kp {
            for &ki in &self.ki {
                for &kd in &self.kd {
                    out.push([kp, ki, kd]);
                }
            }
        }
        out
    }
}

/// Outcome of one candidate run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateResult {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub feasible: bool,
    pub max_alpha_deg: f64,
    pub max_horizontal_force_n: f64,
    pub saturation_events: u64,
    /// Produced by the refinement pass rather than the grid.
    pub refined: bool,
}

impl CandidateResult {
    fn key(&self) -> [f64; 3] {
        [self.kp, self.ki, self.kd]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub best: PidGains,
    pub best_result: CandidateResult,
    /// Every evaluated candidate, grid order first, then refinement order.
    pub report: Vec<CandidateResult>,
}

fn better(a: &CandidateResult, b: &CandidateResult) -> Ordering {
    a.max_alpha_deg.total_cmp(&b.max_alpha_deg).then_with(|| {
        a.key()
            .iter()
            .zip(b.key().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn evaluate(base: &SimConfig, [kp, ki, kd]: [f64; 3], refined: bool) -> CandidateResult {
    let mut cfg = base.clone();
    cfg.scenario.gains.kp = kp;
    cfg.scenario.gains.ki = ki;
    cfg.scenario.gains.kd = kd;
    match run(&cfg) {
        Ok(res) => CandidateResult {
            kp,
            ki,
            kd,
            feasible: res.completed(),
            max_alpha_deg: res.summary.max_alpha_deg,
            max_horizontal_force_n: res.summary.max_horizontal_force_n,
            saturation_events: res.saturation_events,
            refined,
        },
        Err(_) => CandidateResult {
            kp,
            ki,
            kd,
            feasible: false,
            max_alpha_deg: f64::INFINITY,
            max_horizontal_force_n: f64::INFINITY,
            saturation_events: 0,
            refined,
        },
    }
}

fn best_of<'a>(rs: impl IntoIterator<Item = &'a CandidateResult>) -> Option<&'a CandidateResult> {
    rs.into_iter()
        .filter(|r| r.feasible)
        .min_by(|a, b| better(a, b))
}

/// Midpoints between `value` and its neighbours in the sorted axis.
fn neighbour_midpoints(axis: &[f64], value: f64) -> Vec<f64> {
    let mut sorted: Vec<f64> = axis.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let below = sorted.iter().rev().find(|&&v| v < value);
    let above = sorted.iter().find(|&&v| v > value);
    below
        .into_iter()
        .chain(above)
        .map(|&n| 0.5 * (n + value))
        .collect()
}

pub fn tune_gains(base: &SimConfig, grid: &GainGrid) -> Result<TuneOutcome> {
    let candidates = grid.candidates();
    if candidates.is_empty() {
        return Err(Error::NoFeasibleGains("gain grid is empty".into()));
    }
    if candidates
        .iter()
        .flatten()
        .any(|g| !(g.is_finite() && *g >= 0.0))
    {
        return Err(Error::Config(
            "gain grid values must be finite and non-negative".into(),
        ));
    }

    let mut report: Vec<CandidateResult> = candidates
        .par_iter()
        .map(|&c| evaluate(base, c, false))
        .collect();

    let mut best = best_of(&report)
        .cloned()
        .ok_or_else(|| Error::NoFeasibleGains(format!("all {} candidates failed", report.len())))?;

    if grid.refine {
        let axes = [&grid.kp, &grid.ki, &grid.kd];
        for (i, axis) in axes.iter().enumerate() {
            let trials: Vec<[f64; 3]> = neighbour_midpoints(axis, best.key()[i])
                .into_iter()
                .map(|v| {
                    let mut k = best.key();
                    k[i] = v;
                    k
                })
                .collect();
            let results: Vec<CandidateResult> = trials
                .par_iter()
                .map(|&c| evaluate(base, c, true))
                .collect();
            if let Some(r) = best_of(&results) {
                if better(r, &best) == Ordering::Less {
                    best = r.clone();
                }
            }
            report.extend(results);
        }
    }

    let gains = PidGains {
        kp: best.kp,
        ki: best.ki,
        kd: best.kd,
        ..base.scenario.gains
    };
    Ok(TuneOutcome {
        best: gains,
        best_result: best,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::ScenarioConfig;

    fn short_cart() -> SimConfig {
        let mut cfg = SimConfig::new(ScenarioConfig::cart_push(0.043).unwrap());
        cfg.scenario.duration = 6.0;
        cfg
    }

    #[test]
    fn empty_grid_is_rejected() {
        let grid = GainGrid {
            kp: vec![],
            ki: vec![1.0],
            kd: vec![0.0],
            refine: false,
        };
        assert!(matches!(
            tune_gains(&short_cart(), &grid),
            Err(Error::NoFeasibleGains(_))
        ));
    }

    #[test]
    fn single_candidate_is_returned() {
        let grid = GainGrid {
            kp: vec![8.0],
            ki: vec![2.0],
            kd: vec![0.1],
            refine: false,
        };
        let out = tune_gains(&short_cart(), &grid).unwrap();
        assert_eq!(out.report.len(), 1);
        assert_eq!((out.best.kp, out.best.ki, out.best.kd), (8.0, 2.0, 0.1));
        assert!(out.best_result.feasible);
        assert_eq!(out.best_result, out.report[0]);
    }

    #[test]
    fn ties_prefer_smallest_gains() {
        let a = CandidateResult {
            kp: 4.0,
            ki: 1.0,
            kd: 0.0,
            feasible: true,
            max_alpha_deg: 0.1,
            max_horizontal_force_n: 0.0,
            saturation_events: 0,
            refined: false,
        };
        let b = CandidateResult {
            kp: 2.0,
            ki: 5.0,
            ..a.clone()
        };
        let c = CandidateResult {
            kp: 2.0,
            ki: 5.0,
            max_alpha_deg: 0.2,
            ..a.clone()
        };
        assert_eq!(best_of([&a, &b, &c]).unwrap().kp, 2.0);
        let infeasible = CandidateResult {
            feasible: false,
            max_alpha_deg: 0.0,
            ..a.clone()
        };
        assert_eq!(best_of([&infeasible, &a]).unwrap(), &a);
        assert!(best_of([&infeasible]).is_none());
    }

    #[test]
    fn midpoints() {
        assert_eq!(neighbour_midpoints(&[8.0, 2.0, 4.0], 4.0), vec![3.0, 6.0]);
        assert_eq!(neighbour_midpoints(&[2.0, 4.0], 2.0), vec![3.0]);
        assert!(neighbour_midpoints(&[2.0], 2.0).is_empty());
    }

    #[test]
    fn grid_search_prefers_stronger_tracking_and_refines() {
        let grid = GainGrid {
            kp: vec![1.0, 8.0],
            ki: vec![0.0, 2.0],
            kd: vec![0.1],
            refine: true,
        };
        let out = tune_gains(&short_cart(), &grid).unwrap();
        assert!(out.best.kp >= 8.0 - 1e-12 || out.best_result.refined);
        assert!(out.report.iter().filter(|r| !r.refined).count() == 4);
        assert!(out.report.iter().any(|r| r.refined));
        let min = out
            .report
            .iter()
            .filter(|r| r.feasible)
            .map(|r| r.max_alpha_deg)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(out.best_result.max_alpha_deg, min);
        // deterministic
        assert_eq!(tune_gains(&short_cart(), &grid).unwrap(), out);
    }

    #[test]
    fn grid_file() {
        let g =
            GainGrid::parse("kp = [4, 8]\nki = [2.0]\nkd = [0.0, 0.1]\nrefine = true\n").unwrap();
        assert_eq!(g.candidates().len(), 4);
        assert!(GainGrid::parse("kp = [4]\nki = [2]\nkd = [0]\nextra = 1\n").is_err());
    }
}
