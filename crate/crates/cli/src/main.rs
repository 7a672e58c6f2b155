use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curl_mfg::envs::{build_mdp, GridSpec};
use curl_mfg::experiment::{
    bound_check, gradcheck, read_policy, run_experiment, ExperimentConfig, GradcheckConfig, RunOverrides,
};
use curl_mfg::{Error, ExecMode};

#[derive(Parser)]
#[command(name = "curl-mfg", version, about = "Concave utility RL solved as a potential mean-field game")]
struct Cli {
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Policy-evaluation budget applied to every solver.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Disable the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every solver in an experiment config and write outputs.
    Run { config: PathBuf },
    /// Exploitability of a policy CSV under an experiment's game.
    Exploitability { config: PathBuf, policy: PathBuf },
    /// Check a grid spec and print its size.
    Validate { grid: PathBuf },
    /// Compare analytic gradients with finite differences.
    Gradcheck { config: PathBuf },
    /// Check the Frank-Wolfe exploitability certificates along a run.
    BoundCheck {
        config: PathBuf,
        #[arg(long, default_value_t = 300)]
        iterations: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

/// `Ok(false)` means a check ran but failed.
fn run(cli: &Cli) -> Result<bool, Error> {
    let exec = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    let say = |line: String| {
        if !cli.quiet {
            println!("{line}");
        }
    };
    match &cli.command {
        Command::Run { config } => {
            let config = ExperimentConfig::load(config)?;
            let overrides = RunOverrides {
                output_dir: cli.out.clone(),
                budget: cli.budget,
                exec,
            };
            let report = run_experiment(&config, &overrides)?;
            for s in &report.solvers {
                let last = s.trace.last();
                say(format!(
                    "{:<12} iterations={} policy_evals={} objective={:.10} exploitability={}",
                    s.name,
                    s.trace.iterations(),
                    last.policy_evals,
                    last.objective,
                    last.exploitability.map_or("-".into(), |e| format!("{e:.3e}")),
                ));
            }
            if let Some(r) = &report.reference {
                say(format!("reference    F*={:.12} gap={:.3e} converged={}", r.value, r.gap, r.converged));
            }
            say(format!("wrote {}", report.output_dir.display()));
            Ok(true)
        }
        Command::Exploitability { config, policy } => {
            let config = ExperimentConfig::load(config)?;
            let (_, mfg) = config.build_mfg()?;
            let policy = read_policy(policy)?;
            let e = mfg.exploitability(&policy)?;
            println!("{:.16e}", e.value);
            Ok(true)
        }
        Command::Validate { grid } => {
            let spec = GridSpec::load(grid)?;
            spec.validate()?;
            let mdp = build_mdp(&spec)?;
            say(format!(
                "ok: {}x{} grid, {} states, {} actions, gamma={}, fields=[{}]",
                spec.width,
                spec.height,
                mdp.n_states(),
                mdp.n_actions(),
                spec.gamma,
                spec.fields.keys().cloned().collect::<Vec<_>>().join(","),
            ));
            Ok(true)
        }
        Command::Gradcheck { config } => {
            let (config, base) = GradcheckConfig::load(config)?;
            let spec = GridSpec::load(base.join(&config.grid))?;
            let n_states = spec.n_states();
            let mut ok = true;
            for objective in &config.objectives {
                let obj = objective.build(&spec)?;
                let report = gradcheck(
                    &obj,
                    n_states,
                    curl_mfg::envs::N_GRID_ACTIONS,
                    config.points,
                    config.step,
                    cli.seed,
                    exec,
                );
                let pass = report.max_error <= config.tolerance && report.points == config.points;
                ok &= pass;
                say(format!(
                    "{} {:<18} points={} max_rel_error={:.3e}",
                    if pass { "PASS" } else { "FAIL" },
                    report.kind.name(),
                    report.points,
                    report.max_error
                ));
            }
            Ok(ok)
        }
        Command::BoundCheck { config, iterations } => {
            let config = ExperimentConfig::load(config)?;
            let (_, mfg) = config.build_mfg()?;
            let reference = config.reference.unwrap_or_default();
            let report = bound_check(&mfg, *iterations, &reference, exec)?;
            let min = report.min_margin();
            say(format!(
                "beta={:.6} R={:.6} F*={:.12} min_margin={:.3e}",
                report.beta, report.radius, report.reference.value, min
            ));
            // φ ≥ Δ holds exactly; allow round-off
            let pass = min >= -1e-10;
            say(if pass { "PASS".into() } else { "FAIL".into() });
            Ok(pass)
        }
    }
}
