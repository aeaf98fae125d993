//! Load a run configuration file, simulate it and write telemetry.
//!
//!     cargo run --release --example from_config -- crates/core/configs/cart_push.toml /tmp/run

use std::path::PathBuf;

use offload_sim::config::load_config;
use offload_sim::run;
use offload_sim::telemetry::write_run;

fn main() -> offload_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/configs/cart_push.toml"
        ))
    });
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("offload-sim-run"));
    let cfg = load_config(&config)?;
    let res = run(&cfg)?;
    write_run(&res, &out)?;
    println!("{}: {:?}", config.display(), res.termination);
    println!("{:#?}", res.summary);
    println!("telemetry in {}", out.display());
    Ok(())
}
