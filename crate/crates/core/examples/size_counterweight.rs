//! Counterweight masses for the gravity presets.
//!
//!     cargo run --example size_counterweight -- 6.0

use offload_sim::{counterweight_for_gravity, Gravity, G_EARTH};

fn main() -> offload_sim::Result<()> {
    let m_target: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("target mass in kg"))
        .unwrap_or(6.0);
    println!("target mass {m_target} kg");
    for g in [Gravity::Micro, Gravity::Moon, Gravity::Mars, Gravity::Earth] {
        let g_sim = g.resolve(G_EARTH);
        let m_cw = counterweight_for_gravity(m_target, g_sim, G_EARTH)?;
        println!(
            "{:>6}: g_sim = {g_sim:6.3} m/s^2  m_cw = {m_cw:6.3} kg  offload = {:7.3} N",
            g.to_string(),
            m_cw * G_EARTH
        );
    }
    Ok(())
}
