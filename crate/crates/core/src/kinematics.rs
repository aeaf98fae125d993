//! Geometric maps between cable tilt, tracker displacement, CoreXY belt feeds
//! and stepper steps.
//!
//! Frame: right-handed, x forward, y left, z up. With the horizontal offset
//! `d = target - tracker`, the tilt angles satisfy `sin(theta) = -d.x / l` and
//! `sin(phi) = d.y / l`, so [`tilt_to_displacement`] returns exactly the
//! tracker move that brings the pulley back above the attachment point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cable tilt from vertical as seen by the upper gimbal encoders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableTilt {
    /// Pitch tilt in the x-z plane (rad).
    pub theta: f64,
    /// Roll tilt in the y-z plane (rad).
    pub phi: f64,
    /// Cable length from tracker pulley to attachment point (m).
    pub length: f64,
}

impl CableTilt {
    pub fn new(theta: f64, phi: f64, length: f64) -> Result<Self> {
        let tilt = CableTilt { theta, phi, length };
        tilt.validate()?;
        Ok(tilt)
    }

    pub fn vertical(length: f64) -> Self {
        CableTilt {
            theta: 0.0,
            phi: 0.0,
            length,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::Domain(format!(
                "cable length must be positive, got {}",
                self.length
            )));
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(self.theta.abs() < half_pi && self.phi.abs() < half_pi) {
            return Err(Error::Domain(format!(
                "tilt angles must lie in (-pi/2, pi/2), got theta={} phi={}",
                self.theta, self.phi
            )));
        }
        let (st, sp) = (self.theta.sin(), self.phi.sin());
        // a few ulps of slack for tilts built from a unit vector
        if st * st + sp * sp > 1.0 + 4.0 * f64::EPSILON {
            return Err(Error::Domain(format!(
                "sin^2(theta) + sin^2(phi) exceeds 1 (theta={}, phi={})",
                self.theta, self.phi
            )));
        }
        Ok(())
    }
}

/// Horizontal tracker displacement (m).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarDisplacement {
    pub dx: f64,
    pub dy: f64,
}

impl PlanarDisplacement {
    pub fn new(dx: f64, dy: f64) -> Self {
        PlanarDisplacement { dx, dy }
    }

    pub fn scaled(self, k: f64) -> Self {
        PlanarDisplacement {
            dx: self.dx * k,
            dy: self.dy * k,
        }
    }
}

/// Feeds of the left (`da`) and right (`db`) CoreXY belts (m).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BeltFeeds {
    pub da: f64,
    pub db: f64,
}

impl BeltFeeds {
    pub fn new(da: f64, db: f64) -> Self {
        BeltFeeds { da, db }
    }

    pub fn max_abs(&self) -> f64 {
        self.da.abs().max(self.db.abs())
    }
}

/// Belt travel per motor step and the step-rate ceiling of the drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepperGeometry {
    /// Belt feed per (micro)step (m/step).
    pub feed_per_step: f64,
    /// Maximum step rate per motor (steps/s).
    pub max_step_rate: f64,
}

impl Default for StepperGeometry {
    /// 40 mm of belt per revolution, 200 full steps at 16 microsteps,
    /// 20 kHz step ceiling (0.25 m/s of belt).
    fn default() -> Self {
        StepperGeometry {
            feed_per_step: 0.040 / (200.0 * 16.0),
            max_step_rate: 20_000.0,
        }
    }
}

impl StepperGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.feed_per_step.is_finite() && self.feed_per_step > 0.0) {
            return Err(Error::Config(format!(
                "feed_per_step must be positive, got {}",
                self.feed_per_step
            )));
        }
        if !(self.max_step_rate.is_finite() && self.max_step_rate > 0.0) {
            return Err(Error::Config(format!(
                "max_step_rate must be positive, got {}",
                self.max_step_rate
            )));
        }
        Ok(())
    }

    /// Largest whole number of steps one motor may take in `dt` seconds.
    pub fn max_steps(&self, dt: f64) -> i64 {
        // tolerate products like 20000 * 0.001 landing a hair under 20
        (self.max_step_rate * dt * (1.0 + 1e-12)).floor() as i64
    }

    /// Belt speed corresponding to the step ceiling (m/s).
    pub fn max_belt_speed(&self) -> f64 {
        self.feed_per_step * self.max_step_rate
    }
}

/// Tracker move that re-verticalizes the cable: `dx = -l sin(theta)`,
/// `dy = l sin(phi)`.
pub fn tilt_to_displacement(tilt: &CableTilt) -> Result<PlanarDisplacement> {
    tilt.validate()?;
    Ok(PlanarDisplacement {
        dx: -tilt.length * tilt.theta.sin(),
        dy: tilt.length * tilt.phi.sin(),
    })
}

/// CoreXY forward map: `da = dx - dy`, `db = -dx - dy`.
pub fn displacement_to_feeds(d: PlanarDisplacement) -> BeltFeeds {
    BeltFeeds {
        da: d.dx - d.dy,
        db: -d.dx - d.dy,
    }
}

/// Inverse CoreXY map: `dx = (da - db) / 2`, `dy = -(da + db) / 2`.
pub fn feeds_to_displacement(f: BeltFeeds) -> PlanarDisplacement {
    PlanarDisplacement {
        dx: 0.5 * (f.da - f.db),
        dy: -0.5 * (f.da + f.db),
    }
}

/// Splits a belt feed into whole steps (rounded toward zero) and the
/// sub-step remainder the caller must carry into the next command.
pub fn quantize_feed(feed: f64, geometry: &StepperGeometry) -> (i64, f64) {
    let steps = (feed / geometry.feed_per_step).trunc();
    let residual = feed - steps * geometry.feed_per_step;
    (steps as i64, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FPS: f64 = 0.0000125;

    fn geom() -> StepperGeometry {
        StepperGeometry {
            feed_per_step: FPS,
            max_step_rate: 20_000.0,
        }
    }

    #[test]
    fn default_geometry_is_12_5_micron() {
        let g = StepperGeometry::default();
        assert!((g.feed_per_step - 12.5e-6).abs() < 1e-18);
        assert!((g.max_belt_speed() - 0.25).abs() < 1e-12);
        assert_eq!(g.max_steps(0.01), 200);
        assert_eq!(g.max_steps(0.001), 20);
    }

    #[test]
    fn vertical_cable_needs_no_correction() {
        let d = tilt_to_displacement(&CableTilt::new(0.0, 0.0, 2.0).unwrap()).unwrap();
        assert_eq!(d, PlanarDisplacement::new(0.0, 0.0));
    }

    #[test]
    fn tilt_examples() {
        let d = tilt_to_displacement(&CableTilt::new(0.1, 0.0, 2.0).unwrap()).unwrap();
        assert!((d.dx - -0.199_666_833_293_656_3).abs() < 1e-15);
        assert_eq!(d.dy, 0.0);
        let d = tilt_to_displacement(&CableTilt::new(0.0, -0.05, 1.5).unwrap()).unwrap();
        assert_eq!(d.dx, 0.0);
        assert!((d.dy - -0.074_968_753_906_017_5).abs() < 1e-15);
    }

    #[test]
    fn tilt_domain_errors() {
        assert!(CableTilt::new(0.0, 0.0, 0.0).is_err());
        assert!(CableTilt::new(0.0, 0.0, -1.0).is_err());
        assert!(CableTilt::new(1.6, 0.0, 1.0).is_err());
        // both at 60 deg: 0.75 + 0.75 > 1
        let a = 60f64.to_radians();
        assert!(CableTilt::new(a, a, 1.0).is_err());
        let bad = CableTilt {
            theta: 0.0,
            phi: 0.0,
            length: f64::NAN,
        };
        assert!(tilt_to_displacement(&bad).is_err());
    }

    #[test]
    fn feed_examples() {
        assert_eq!(
            displacement_to_feeds(PlanarDisplacement::new(1.0, 0.0)),
            BeltFeeds::new(1.0, -1.0)
        );
        assert_eq!(
            displacement_to_feeds(PlanarDisplacement::new(0.0, 0.0)),
            BeltFeeds::new(0.0, 0.0)
        );
        let f = displacement_to_feeds(PlanarDisplacement::new(0.3, -0.2));
        assert!((f.da - 0.5).abs() < 1e-15 && (f.db - -0.1).abs() < 1e-15);
    }

    #[test]
    fn inverse_feed_examples() {
        assert_eq!(
            feeds_to_displacement(BeltFeeds::new(1.0, -1.0)),
            PlanarDisplacement::new(1.0, 0.0)
        );
        assert_eq!(
            feeds_to_displacement(BeltFeeds::new(0.0, 0.0)),
            PlanarDisplacement::new(0.0, 0.0)
        );
        let d = feeds_to_displacement(BeltFeeds::new(0.5, -0.1));
        assert!((d.dx - 0.3).abs() < 1e-15 && (d.dy - -0.2).abs() < 1e-15);
    }

    #[test]
    fn quantize_examples() {
        let (s, r) = quantize_feed(0.00126, &geom());
        assert_eq!(s, 100);
        assert!((r - 0.00001).abs() < 1e-15);
        assert_eq!(quantize_feed(0.0, &geom()), (0, 0.0));
        let (s, r) = quantize_feed(-0.0000130, &geom());
        assert_eq!(s, -1);
        assert!((r - -0.0000005).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn corexy_roundtrip(dx in -10.0f64..10.0, dy in -10.0f64..10.0) {
            let d = PlanarDisplacement::new(dx, dy);
            let back = feeds_to_displacement(displacement_to_feeds(d));
            let scale = dx.abs().max(dy.abs()).max(f64::MIN_POSITIVE);
            prop_assert!((back.dx - dx).abs() <= 4.0 * f64::EPSILON * scale);
            prop_assert!((back.dy - dy).abs() <= 4.0 * f64::EPSILON * scale);
        }

        #[test]
        fn feeds_are_linear(
            a in -5.0f64..5.0,
            x1 in -1.0f64..1.0, y1 in -1.0f64..1.0,
            x2 in -1.0f64..1.0, y2 in -1.0f64..1.0,
        ) {
            let lhs = displacement_to_feeds(PlanarDisplacement::new(a * x1 + x2, a * y1 + y2));
            let f1 = displacement_to_feeds(PlanarDisplacement::new(x1, y1));
            let f2 = displacement_to_feeds(PlanarDisplacement::new(x2, y2));
            prop_assert!((lhs.da - (a * f1.da + f2.da)).abs() < 1e-12);
            prop_assert!((lhs.db - (a * f1.db + f2.db)).abs() < 1e-12);
        }

        #[test]
        fn quantization_never_loses_feed(feeds in prop::collection::vec(-0.003f64..0.003, 1..400)) {
            let g = geom();
            let mut residual = 0.0;
            let mut stepped = 0i64;
            let mut commanded = 0.0;
            for f in feeds {
                commanded += f;
                let (s, r) = quantize_feed(f + residual, &g);
                prop_assert!(r.abs() < g.feed_per_step);
                stepped += s;
                residual = r;
            }
            let total = stepped as f64 * g.feed_per_step + residual;
            prop_assert!((total - commanded).abs() < 1e-12);
        }
    }
}
