use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use offload_sim::config::{load_config, sweep_configs};
use offload_sim::telemetry::write_run;
use offload_sim::tune::{tune_gains, GainGrid};
use offload_sim::{counterweight_for_gravity, run, run_batch, Error, Gravity, SimResult, G_EARTH};

/// Gravity-offloading testbed simulator.
///
/// Exit status: 0 when every run completes within both force-direction
/// thresholds, 1 when a run misses a threshold, 2 on errors.
#[derive(Parser)]
#[command(name = "offload-sim", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one configuration file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every *.toml file in a directory.
    Batch {
        #[arg(long)]
        configs: PathBuf,
        /// Output root; one subdirectory per config (default: <configs>/out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one configuration once per value of a dotted key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// e.g. trajectory.speed_mps
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-search PID gains on a scenario.
    Tune {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        grid: PathBuf,
    },
    /// Counterweight mass for a target mass and simulated gravity.
    SizeCounterweight {
        #[arg(long)]
        mass: f64,
        /// moon, mars, micro, earth or an acceleration in m/s^2
        #[arg(long)]
        gravity: String,
    },
}

fn report(label: &str, res: &SimResult) -> bool {
    let s = &res.summary;
    println!(
        "{label}: {:?} max_alpha={:.4} deg max_fh={:.4} N mean_speed={:.4} m/s angle={} force={}",
        res.termination,
        s.max_alpha_deg,
        s.max_horizontal_force_n,
        s.mean_target_speed,
        if s.pass_angle { "PASS" } else { "FAIL" },
        if s.pass_force { "PASS" } else { "FAIL" },
    );
    res.passed()
}

fn write_and_report(label: &str, res: &SimResult, dir: &Path) -> Result<bool, Error> {
    write_run(res, dir)?;
    Ok(report(label, res))
}

fn execute(cmd: Cmd) -> Result<bool, Error> {
    match cmd {
        Cmd::Simulate { config, out } => {
            let cfg = load_config(&config)?;
            let res = run(&cfg)?;
            write_and_report(&config.display().to_string(), &res, &out)
        }
        Cmd::Batch { configs, out } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&configs)
                .map_err(|e| Error::Io {
                    path: configs.clone(),
                    source: e,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                .collect();
            files.sort();
            let out = out.unwrap_or_else(|| configs.join("out"));
            let cfgs: Vec<_> = files.iter().map(load_config).collect();
            let valid: Vec<_> = cfgs
                .iter()
                .filter_map(|c| c.as_ref().ok().cloned())
                .collect();
            let mut results = run_batch(&valid).into_iter();
            let mut all_ok = true;
            let mut had_error = false;
            for (path, cfg) in files.iter().zip(cfgs) {
                let label = path.display().to_string();
                let res = cfg.and_then(|_| results.next().expect("one result per valid config"));
                let stem = path.file_stem().unwrap_or_default();
                match res.and_then(|r| write_and_report(&label, &r, &out.join(stem))) {
                    Ok(pass) => all_ok &= pass,
                    Err(e) => {
                        eprintln!("{label}: error: {e}");
                        had_error = true;
                    }
                }
            }
            if had_error {
                return Err(Error::Config("one or more batch members failed".into()));
            }
            Ok(all_ok)
        }
        Cmd::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::Io {
                path: config.clone(),
                source: e,
            })?;
            let cfgs = sweep_configs(&text, &param, &values)?;
            let mut all_ok = true;
            for (v, res) in values.iter().zip(run_batch(&cfgs)) {
                let res = res?;
                let label = format!("{param}={v}");
                all_ok &= match &out {
                    Some(dir) => write_and_report(&label, &res, &dir.join(format!("{param}={v}")))?,
                    None => report(&label, &res),
                };
            }
            Ok(all_ok)
        }
        Cmd::Tune { config, grid } => {
            let cfg = load_config(&config)?;
            let grid = GainGrid::load(&grid)?;
            let out = tune_gains(&cfg, &grid)?;
            println!(
                "kp,ki,kd,feasible,max_alpha_deg,max_horizontal_force_n,saturation_events,refined"
            );
            for r in &out.report {
                println!(
                    "{},{},{},{},{:.6},{:.6},{},{}",
                    r.kp,
                    r.ki,
                    r.kd,
                    r.feasible,
                    r.max_alpha_deg,
                    r.max_horizontal_force_n,
                    r.saturation_events,
                    r.refined
                );
            }
            println!(
                "best: kp={} ki={} kd={} max_alpha={:.4} deg",
                out.best.kp, out.best.ki, out.best.kd, out.best_result.max_alpha_deg
            );
            Ok(out.best_result.max_alpha_deg <= offload_sim::ANGLE_LIMIT_DEG)
        }
        Cmd::SizeCounterweight { mass, gravity } => {
            let g_sim = gravity.parse::<Gravity>()?.resolve(G_EARTH);
            let m_cw = counterweight_for_gravity(mass, g_sim, G_EARTH)?;
            println!("g_sim = {g_sim:.6} m/s^2");
            println!("m_cw = {m_cw:.3} kg");
            println!("offload_force = {:.3} N", m_cw * G_EARTH);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
