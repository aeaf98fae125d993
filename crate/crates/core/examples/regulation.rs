//! Recovery from a 5 deg initial tilt over a stationary body.
//!
//!     cargo run --example regulation

use offload_sim::{run, ScenarioConfig, SimConfig};

fn main() -> offload_sim::Result<()> {
    let sc = ScenarioConfig::regulation(5.0, 6.0)?;
    let resolution = sc.plant.encoder_resolution;
    let res = run(&SimConfig::new(sc))?;
    println!("   t_s   alpha_deg  tracker_x_mm  saturated");
    for r in res.records.iter().step_by(25) {
        println!(
            "{:6.2} {:10.4} {:13.3} {:>10}",
            r.t,
            r.alpha.to_degrees(),
            r.tracker[0] * 1e3,
            r.saturated
        );
    }
    let settled = res
        .records
        .iter()
        .rposition(|r| r.alpha >= resolution)
        .map(|i| res.records[i + 1].t)
        .unwrap_or(0.0);
    println!(
        "settled below one encoder count ({:.4} deg) at t = {settled:.2} s, {} saturated ticks",
        resolution.to_degrees(),
        res.saturation_events
    );
    Ok(())
}
