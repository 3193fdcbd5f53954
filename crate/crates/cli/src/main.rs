use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use slvp_core::diagnostics::{first_mode_amplitude, total_energy, total_momentum, total_particles};
use slvp_core::field::{charge_density, solve_field_with};
use slvp_core::{Neutrality, SchemeKind};
use slvp_cli::config::KEYS;
use slvp_cli::converge::{format_table, parse_ladder, run_convergence_study, write_table};
use slvp_cli::{parse_config, run_simulation, AppError, AppResult, Snapshot};

#[derive(Parser)]
#[command(name = "slvp", version, about = "Semi-Lagrangian spectral Vlasov-Poisson solver")]
#[command(after_help = "Exit status: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.\n\
                        SLVP_OUTPUT_DIR replaces output.dir from the file (explicit --output.dir still wins).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation; extra arguments are --key=value overrides.
    Run {
        config: PathBuf,
        #[arg(allow_hyphen_values = true, trailing_var_arg = true, value_name = "--key=value")]
        overrides: Vec<String>,
    },
    /// Δt convergence study on the manufactured problem:
    /// --dts=<list> [--schemes=<list>] [--key=value ...]
    Converge {
        config: PathBuf,
        #[arg(allow_hyphen_values = true, trailing_var_arg = true, value_name = "--dts=<list>")]
        args: Vec<String>,
    },
    /// Summarize a snapshot file.
    Inspect { snapshot: PathBuf },
    /// List the configuration keys.
    Keys,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run { config, overrides } => run(&config, &overrides),
        Command::Converge { config, args } => converge(&config, &args),
        Command::Inspect { snapshot } => inspect(&snapshot),
        Command::Keys => {
            for (k, d) in KEYS {
                println!("{k:24} {d}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slvp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(path: &Path, overrides: &[String]) -> AppResult<()> {
    let cfg = parse_config(path, overrides)?;
    let summary = run_simulation(&cfg)?;
    let (q0, q) = (summary.initial.particles, summary.last.particles);
    println!(
        "{} steps of {} to t = {}; output in {}",
        summary.steps,
        cfg.scheme,
        summary.last.t,
        summary.output_dir.display()
    );
    println!("  relative mass change {:.3e}", (q - q0).abs() / q0.abs());
    Ok(())
}

fn converge(path: &Path, args: &[String]) -> AppResult<()> {
    let mut dts = None;
    let mut schemes = SchemeKind::ALL.to_vec();
    let mut overrides = Vec::new();
    for arg in args {
        if let Some(list) = arg.strip_prefix("--dts=") {
            dts = Some(parse_ladder(list)?);
        } else if let Some(list) = arg.strip_prefix("--schemes=") {
            schemes = list
                .split(',')
                .map(|s| s.trim().parse::<SchemeKind>().map_err(|e| AppError::Config(format!("--schemes: {e}"))))
                .collect::<AppResult<_>>()?;
        } else {
            overrides.push(arg.clone());
        }
    }
    let dts = dts.ok_or_else(|| AppError::Config("converge needs --dts=<comma list>".into()))?;
    let cfg = parse_config(path, &overrides)?;
    let rows = run_convergence_study(&cfg, &dts, &schemes)?;
    print!("{}", format_table(&rows));
    let out = write_table(&rows, &cfg.output_dir)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn inspect(path: &Path) -> AppResult<()> {
    let snap = Snapshot::read(path)?;
    let d = snap.domain;
    println!("{}", path.display());
    println!("  grid      {} × {}", snap.nx, snap.nv);
    println!("  domain    [{}, {}) × [{}, {})", d.x_min, d.x_max, d.v_min, d.v_max);
    println!("  t         {}", snap.t);
    let bad = snap.values.iter().filter(|v| !v.is_finite()).count();
    if bad > 0 {
        return Err(AppError::Numerical(format!("{bad} non-finite values")));
    }
    let (lo, hi) = snap
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    println!("  range     [{lo:e}, {hi:e}]");
    let field = snap.to_field(Arc::new(snap.grid()?))?;
    let rho = charge_density(&field);
    let efield = solve_field_with(&rho, field.grid().xgrid(), Neutrality::Project)?;
    let mode = first_mode_amplitude(&efield, field.grid().xgrid());
    println!("  Q         {:.16e}", total_particles(&field));
    println!("  P         {:.16e}", total_momentum(&field));
    println!("  energy    {:.16e}", total_energy(&field, &efield));
    println!("  mean ρ-1  {:e}", rho.mean() - 1.0);
    println!("  |Ê₁|      {:e} (a1 {:e})", mode.abs, mode.a1);
    Ok(())
}
