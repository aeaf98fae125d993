//! Floor cart pushed 1 m diagonally under 20 N of offload at the slowest,
//! nominal and fastest measured push speeds. Writes telemetry for each run.
//!
//!     cargo run --release --example cart_push -- [out_dir]

use std::path::PathBuf;

use offload_sim::telemetry::write_run;
use offload_sim::{run_batch, ScenarioConfig, SimConfig};

fn main() -> offload_sim::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("offload-sim-cart-push"));
    let speeds = [0.029, 0.040, 0.043];
    let cfgs = speeds
        .iter()
        .map(|&v| ScenarioConfig::cart_push(v).map(SimConfig::new))
        .collect::<offload_sim::Result<Vec<_>>>()?;

    for (v, res) in speeds.iter().zip(run_batch(&cfgs)) {
        let res = res?;
        let s = &res.summary;
        let dir = out.join(format!("speed_{:.0}mm_s", v * 1000.0));
        write_run(&res, &dir)?;
        println!(
            "v = {:.1} cm/s  mean {:.2} cm/s  max alpha {:.3} deg  max F_h {:.3} N  [{}]  -> {}",
            v * 100.0,
            s.mean_target_speed * 100.0,
            s.max_alpha_deg,
            s.max_horizontal_force_n,
            if s.passed() { "pass" } else { "FAIL" },
            dir.display()
        );
    }
    Ok(())
}
