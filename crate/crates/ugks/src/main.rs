//! Command line front end: run the relaxation, Sod tube, or shock
//! structure experiments from a TOML config and write CSV results.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use ugks::error::{Error, Result};
use ugks::io::{
    parse_config, write_config, write_distribution_csv, write_profile_csv, write_slice_csv,
    CollisionMode, Experiment, ProfileRecord, RunConfig,
};
use ugks::kinetic::VelocityGrid;
use ugks::solver::{
    run_relaxation, run_shock_structure, run_sod, RelaxationSetup, ShockSetup, SodSetup,
};

#[derive(Parser)]
#[command(name = "ugks", about = "Unified gas-kinetic scheme with hybrid Boltzmann/Shakhov collisions", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's output.directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Collision treatment override for A/B comparisons.
    #[arg(long, value_parser = parse_mode)]
    collision: Option<CollisionMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Homogeneous relaxation of a non-equilibrium initial distribution.
    Relax(RunArgs),
    /// Sod shock tube.
    Sod(RunArgs),
    /// Steady normal shock structure.
    Shock(RunArgs),
}

fn parse_mode(s: &str) -> std::result::Result<CollisionMode, String> {
    match s {
        "hybrid" => Ok(CollisionMode::Hybrid),
        "shakhov" => Ok(CollisionMode::Shakhov),
        "boltzmann" => Ok(CollisionMode::Boltzmann),
        other => Err(format!(
            "'{other}' is not one of hybrid, shakhov, boltzmann"
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, expected) = match &cli.command {
        Command::Relax(a) => (a, Experiment::Relax),
        Command::Sod(a) => (a, Experiment::Sod),
        Command::Shock(a) => (a, Experiment::Shock),
    };
    match run(args, expected) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ugks: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: &RunArgs, expected: Experiment) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::io(args.config.display().to_string(), e))?;
    let mut cfg = parse_config(&text)?;
    if cfg.experiment != expected {
        return Err(Error::Config(format!(
            "config declares experiment {:?}, but the {:?} subcommand was invoked",
            cfg.experiment, expected
        )));
    }
    if let Some(mode) = args.collision {
        cfg.collision.mode = mode;
    }
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    std::fs::write(out_dir.join("resolved.toml"), write_config(&cfg)?)
        .map_err(|e| Error::io(out_dir.display().to_string(), e))?;

    let grid = Arc::new(VelocityGrid::new(
        cfg.velocity_grid.half_width,
        cfg.velocity_grid.points,
        [0.0; 3],
    )?);

    match cfg.experiment {
        Experiment::Relax => run_relax(&cfg, &grid, &out_dir),
        Experiment::Sod => run_sod_cmd(&cfg, &grid, &out_dir),
        Experiment::Shock => run_shock_cmd(&cfg, &grid, &out_dir),
    }
}

fn run_relax(cfg: &RunConfig, grid: &Arc<VelocityGrid>, out: &Path) -> Result<()> {
    let setup = RelaxationSetup {
        family: cfg.relaxation_family()?,
        temps: cfg.relaxation.temps,
        treatment: cfg.treatment(),
        model: cfg.collision_model()?,
        gas: cfg.gas_properties(),
        spectral: cfg.spectral_settings(),
        output_times: cfg.relaxation.output_times.clone(),
        dt_fraction: cfg.relaxation.dt_fraction,
        deficit_tolerance: cfg.relaxation.deficit_tolerance,
    };
    let result = run_relaxation(grid, &setup)?;
    for (i, (slice, mult)) in result
        .slices
        .iter()
        .zip(&cfg.relaxation.output_times)
        .enumerate()
    {
        let path = out.join(format!("slice_{i:02}_t{mult}.csv"));
        write_slice_csv(slice, &path)?;
    }
    let records: Vec<ProfileRecord> = result
        .times
        .iter()
        .zip(&result.moments)
        .map(|(t, m)| ProfileRecord::from_state(*t, m, 0.0))
        .collect();
    write_profile_csv(&records, &out.join("moments.csv"))?;
    if cfg.output.write_distribution {
        write_distribution_csv(&result.final_distribution, &out.join("distribution.csv"))?;
    }
    println!(
        "relax: tau_r = {:.6e}, conservation drift {:.3e}, {} outputs in {}",
        result.tau_r,
        result.conservation_drift,
        result.times.len(),
        out.display()
    );
    Ok(())
}

fn run_sod_cmd(cfg: &RunConfig, grid: &Arc<VelocityGrid>, out: &Path) -> Result<()> {
    let setup = SodSetup {
        left: cfg.sod.left.to_state()?,
        right: cfg.sod.right.to_state()?,
        domain: (cfg.mesh.domain[0], cfg.mesh.domain[1]),
        diaphragm: cfg.sod.diaphragm,
        cells: cfg.mesh.cells,
        t_final: cfg.time.final_time,
        cfl: cfg.time.cfl,
        cfl_speed: cfg.cfl_speed(),
        treatment: cfg.treatment(),
        t_c_mode: cfg.t_c_mode(),
        model: cfg.collision_model()?,
        gas: cfg.gas_properties(),
        spectral: cfg.spectral_settings(),
    };
    let result = run_sod(grid, &setup)?;
    let records: Vec<ProfileRecord> = result
        .x
        .iter()
        .zip(&result.states)
        .zip(&result.dt_over_tau)
        .map(|((x, s), r)| ProfileRecord::from_state(*x, s, *r))
        .collect();
    write_profile_csv(&records, &out.join("profile.csv"))?;
    // step history: (time, dt, min dt/tau) per row, reusing the first
    // three profile columns
    let history: Vec<ProfileRecord> = result
        .ratio_history
        .iter()
        .map(|(t, dt, ratio)| ProfileRecord {
            x: *t,
            rho: *dt,
            velocity: *ratio,
            temp: 0.0,
            pressure: 0.0,
            heat_flux: 0.0,
            shear_stress: 0.0,
            dt_over_tau: *ratio,
        })
        .collect();
    write_profile_csv(&history, &out.join("step_history.csv"))?;
    println!(
        "sod: {} steps to t = {:.4}, min dt/tau = {:.3}, profile in {}",
        result.steps,
        cfg.time.final_time,
        result
            .ratio_history
            .iter()
            .map(|r| r.2)
            .fold(f64::INFINITY, f64::min),
        out.display()
    );
    Ok(())
}

fn run_shock_cmd(cfg: &RunConfig, grid: &Arc<VelocityGrid>, out: &Path) -> Result<()> {
    let setup = ShockSetup {
        mach: cfg.shock.mach,
        domain: (cfg.mesh.domain[0], cfg.mesh.domain[1]),
        fine_zone: (cfg.mesh.fine_zone[0], cfg.mesh.fine_zone[1]),
        fine_dx: cfg.mesh.fine_dx,
        stretch_ratio: cfg.mesh.stretch_ratio,
        cfl: cfg.time.cfl,
        local_time_step: cfg.time.mode == "local",
        treatment: cfg.treatment(),
        t_c_mode: cfg.t_c_mode(),
        model: cfg.collision_model()?,
        gas: cfg.gas_properties(),
        spectral: cfg.spectral_settings(),
        residual_target: cfg.time.residual_target,
        max_steps: cfg.time.max_steps,
        init_thickness: cfg.shock.init_thickness,
    };
    let result = run_shock_structure(grid, &setup)?;
    let records: Vec<ProfileRecord> = result
        .x
        .iter()
        .zip(&result.states)
        .map(|(x, s)| ProfileRecord::from_state(*x, s, 0.0))
        .collect();
    write_profile_csv(&records, &out.join("profile.csv"))?;
    let mut summary = String::new();
    summary.push_str(&format!("mach = {}\n", cfg.shock.mach));
    summary.push_str(&format!("steps = {}\n", result.steps));
    summary.push_str(&format!(
        "final_residual = {:.6e}\n",
        result.residual_history.last().copied().unwrap_or(f64::NAN)
    ));
    match result.switch_location {
        Some(x) => summary.push_str(&format!("switch_location = {x:.6}\n")),
        None => summary.push_str("switch_location = none\n"),
    }
    let (fl, fr) = result.boundary_fluxes;
    summary.push_str(&format!(
        "upstream_flux = {:.10e} {:.10e} {:.10e}\n",
        fl[0], fl[1], fl[2]
    ));
    summary.push_str(&format!(
        "downstream_flux = {:.10e} {:.10e} {:.10e}\n",
        fr[0], fr[1], fr[2]
    ));
    std::fs::write(out.join("summary.txt"), summary)
        .map_err(|e| Error::io(out.display().to_string(), e))?;
    println!(
        "shock: converged in {} steps, switch at {:?}, profile in {}",
        result.steps,
        result.switch_location,
        out.display()
    );
    Ok(())
}
