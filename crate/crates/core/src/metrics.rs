//! Per-sample telemetry records and run summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest acceptable angle of the offload force from vertical (deg).
pub const ANGLE_LIMIT_DEG: f64 = 1.0;
/// Largest acceptable horizontal component of the offload force (N).
pub const FORCE_LIMIT_N: f64 = 0.5;

/// One telemetry sample. Angles are radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricsRecord {
    pub t: f64,
    pub target: [f64; 3],
    pub tracker: [f64; 2],
    pub theta_true: f64,
    pub phi_true: f64,
    pub theta_meas: f64,
    pub phi_meas: f64,
    pub belt_a: f64,
    pub belt_b: f64,
    pub tension: f64,
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub alpha: f64,
    pub cmd_velocity: [f64; 2],
    pub saturated: bool,
}

impl MetricsRecord {
    pub fn horizontal_force(&self) -> f64 {
        self.fx.hypot(self.fy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub samples: usize,
    pub duration_s: f64,
    pub max_alpha_deg: f64,
    pub mean_alpha_deg: f64,
    pub rms_alpha_deg: f64,
    pub max_horizontal_force_n: f64,
    /// Mean target speed over the intervals in which the target moved (m/s).
    pub mean_target_speed: f64,
    pub pass_angle: bool,
    pub pass_force: bool,
}

impl SummaryStats {
    pub fn passed(&self) -> bool {
        self.pass_angle && self.pass_force
    }
}

pub fn summarize(records: &[MetricsRecord]) -> Result<SummaryStats> {
    let (first, last) = match (records.first(), records.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptyRun),
    };
    let n = records.len() as f64;
    let alphas = records.iter().map(|r| r.alpha.abs().to_degrees());
    let max_alpha = alphas.clone().fold(0.0, f64::max);
    let mean_alpha = alphas.clone().sum::<f64>() / n;
    let rms_alpha = (alphas.map(|a| a * a).sum::<f64>() / n).sqrt();
    let max_force = records
        .iter()
        .map(MetricsRecord::horizontal_force)
        .fold(0.0, f64::max);

    let (mut path, mut moving_time) = (0.0, 0.0);
    for w in records.windows(2) {
        let d = (0..3)
            .map(|i| (w[1].target[i] - w[0].target[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        if d > 0.0 {
            path += d;
            moving_time += w[1].t - w[0].t;
        }
    }
    let mean_speed = if moving_time > 0.0 {
        path / moving_time
    } else {
        0.0
    };

    Ok(SummaryStats {
        samples: records.len(),
        duration_s: last.t - first.t,
        max_alpha_deg: max_alpha,
        mean_alpha_deg: mean_alpha,
        rms_alpha_deg: rms_alpha,
        max_horizontal_force_n: max_force,
        mean_target_speed: mean_speed,
        pass_angle: max_alpha <= ANGLE_LIMIT_DEG,
        pass_force: max_force <= FORCE_LIMIT_N,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64, alpha_deg: f64) -> MetricsRecord {
        let alpha = alpha_deg.to_radians();
        MetricsRecord {
            t,
            fx: 20.0 * alpha.sin(),
            fz: 20.0 * alpha.cos(),
            alpha,
            ..MetricsRecord::default()
        }
    }

    #[test]
    fn empty_run() {
        assert!(matches!(summarize(&[]), Err(Error::EmptyRun)));
    }

    #[test]
    fn all_zero_passes() {
        let r: Vec<_> = (0..10).map(|i| rec(i as f64 * 0.01, 0.0)).collect();
        let s = summarize(&r).unwrap();
        assert_eq!(s.max_alpha_deg, 0.0);
        assert_eq!(s.mean_target_speed, 0.0);
        assert!(s.pass_angle && s.pass_force);
        assert!((s.duration_s - 0.09).abs() < 1e-15);
    }

    #[test]
    fn one_bad_sample_fails_angle() {
        let mut r: Vec<_> = (0..10).map(|i| rec(i as f64 * 0.01, 0.1)).collect();
        r[4] = rec(0.04, 1.2);
        let s = summarize(&r).unwrap();
        assert!(!s.pass_angle);
        assert!((s.max_alpha_deg - 1.2).abs() < 1e-12);
        // 20 N * sin(1.2 deg) = 0.419 N still passes the force bound
        assert!(s.pass_force);
    }

    #[test]
    fn statistics() {
        let r = [rec(0.0, 0.3), rec(0.1, -0.4)];
        let s = summarize(&r).unwrap();
        assert!((s.mean_alpha_deg - 0.35).abs() < 1e-12);
        assert!((s.rms_alpha_deg - 0.125f64.sqrt()).abs() < 1e-12);
        assert!((s.max_horizontal_force_n - 20.0 * 0.4f64.to_radians().sin()).abs() < 1e-12);
    }

    #[test]
    fn thresholds_are_inclusive() {
        let s = summarize(&[rec(0.0, 1.0)]).unwrap();
        assert!(s.pass_angle);
        let mut r = rec(0.0, 0.0);
        r.fx = 0.5;
        assert!(summarize(&[r]).unwrap().pass_force);
        r.fx = 0.500001;
        assert!(!summarize(&[r]).unwrap().pass_force);
    }
}
