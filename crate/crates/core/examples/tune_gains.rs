//! Grid search over PID gains on a shortened fastest-push scenario.
//!
//!     cargo run --release --example tune_gains

use offload_sim::{tune_gains, GainGrid, ScenarioConfig, SimConfig};

fn main() -> offload_sim::Result<()> {
    let mut cfg = SimConfig::new(ScenarioConfig::cart_push(0.043)?);
    cfg.scenario.duration = 10.0;
    let grid = GainGrid {
        kp: vec![2.0, 4.0, 8.0, 12.0],
        ki: vec![0.0, 1.0, 2.0],
        kd: vec![0.0, 0.1],
        refine: true,
    };
    let out = tune_gains(&cfg, &grid)?;
    println!("   kp    ki    kd  max_alpha_deg  sat  refined");
    for r in &out.report {
        println!(
            "{:5.2} {:5.2} {:5.2} {:14.4} {:4} {:>8}",
            r.kp, r.ki, r.kd, r.max_alpha_deg, r.saturation_events, r.refined
        );
    }
    println!(
        "best kp={} ki={} kd={} -> {:.4} deg",
        out.best.kp, out.best.ki, out.best.kd, out.best_result.max_alpha_deg
    );
    Ok(())
}
