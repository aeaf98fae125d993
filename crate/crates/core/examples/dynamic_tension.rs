//! Quasi-static against dynamic cable tension while the body is lowered with
//! constant acceleration straight under the pulley.
//!
//!     cargo run --example dynamic_tension

use offload_sim::{Plant, PlantConfig, TensionModel, Trajectory};

struct Lowering {
    z_rail: f64,
    l0: f64,
    accel: f64,
}

impl Trajectory for Lowering {
    fn position(&self, t: f64) -> offload_sim::Result<[f64; 3]> {
        Ok([0.0, 0.0, self.z_rail - (self.l0 + 0.5 * self.accel * t * t)])
    }
}

fn main() -> offload_sim::Result<()> {
    let dt = 0.001;
    for model in [TensionModel::QuasiStatic, TensionModel::Dynamic] {
        let cfg = PlantConfig {
            m_cw: 2.0,
            tension_model: model,
            ..PlantConfig::default()
        };
        let traj = Lowering {
            z_rail: cfg.z_rail,
            l0: 1.5,
            accel: 0.02,
        };
        let plant = Plant::new(cfg)?;
        let mut s = plant.initial_state(traj.position(0.0)?, [0.0, 0.0])?;
        print!("{model:?}:");
        for n in 1..=1000u32 {
            s = plant.advance_target_to(&s, &traj, n as f64 * dt)?;
            if n == 1 || n == 2 || n % 250 == 0 {
                print!("  t={:.3} T={:.5}", s.t, s.tension);
            }
        }
        println!();
    }
    Ok(())
}
