//! Lunar-gravity stop-and-go climb up a 45 deg slope, with the controller's
//! assumed cable length off by -20 %, 0 and +20 %.
//!
//!     cargo run --release --example moon_slope_climb

use offload_sim::{run, ScenarioConfig, SimConfig, TensionModel};

fn main() -> offload_sim::Result<()> {
    let base = ScenarioConfig::moon_slope_climb()?;
    println!(
        "m_target {} kg, g_sim {:.3} m/s^2, counterweight {:.3} kg",
        base.m_target, base.g_sim, base.plant.m_cw
    );
    for model in [TensionModel::QuasiStatic, TensionModel::Dynamic] {
        for scale in [0.8, 1.0, 1.2] {
            let mut sc = base.clone();
            sc.plant.tension_model = model;
            // cable starts vertical from the rail down to the slope foot
            sc.controller_cable_length = Some(scale * sc.plant.z_rail);
            let res = run(&SimConfig::new(sc))?;
            let (t_min, t_max) = res
                .records
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r.tension), hi.max(r.tension))
                });
            println!(
                "{model:?} l x{scale:.1}: max alpha {:.3} deg, max F_h {:.4} N, tension {:.3}..{:.3} N",
                res.summary.max_alpha_deg, res.summary.max_horizontal_force_n, t_min, t_max
            );
        }
    }
    Ok(())
}
