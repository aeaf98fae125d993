//! Cable tilt -> tracker correction -> CoreXY belt feeds -> motor steps.
//!
//!     cargo run --example corexy_kinematics

use offload_sim::{
    displacement_to_feeds, feeds_to_displacement, quantize_feed, tilt_to_displacement, CableTilt,
    StepperGeometry,
};

fn main() -> offload_sim::Result<()> {
    let geometry = StepperGeometry::default();
    println!(
        "stepper: {:.1} um/step, {:.0} steps/s ({:.2} m/s belt)",
        geometry.feed_per_step * 1e6,
        geometry.max_step_rate,
        geometry.max_belt_speed()
    );

    let cases = [
        (0.0, 0.0),
        (0.5, 0.0),
        (0.0, -0.5),
        (0.7, 0.7),
        (-1.0, 0.25),
    ];
    println!("\ntheta_deg  phi_deg   dx_mm     dy_mm     da_mm     db_mm   steps_a steps_b");
    for (theta_deg, phi_deg) in cases {
        let tilt = CableTilt::new(f64::to_radians(theta_deg), f64::to_radians(phi_deg), 2.0)?;
        let d = tilt_to_displacement(&tilt)?;
        let feeds = displacement_to_feeds(d);
        let (sa, ra) = quantize_feed(feeds.da, &geometry);
        let (sb, rb) = quantize_feed(feeds.db, &geometry);
        let back = feeds_to_displacement(feeds);
        assert!((back.dx - d.dx).abs() < 1e-15 && (back.dy - d.dy).abs() < 1e-15);
        println!(
            "{theta_deg:8.2} {phi_deg:8.2} {:9.3} {:9.3} {:9.3} {:9.3} {sa:8} {sb:7}   (residual {:.2e}, {:.2e} m)",
            d.dx * 1e3,
            d.dy * 1e3,
            feeds.da * 1e3,
            feeds.db * 1e3,
            ra,
            rb
        );
    }
    Ok(())
}
