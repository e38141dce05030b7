use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use circle_geodesics::harness::config::parse_override;
use circle_geodesics::harness::convergence::parse_dt_list;
use circle_geodesics::harness::scenario::{EXIT_CONFIG, EXIT_IDENTITY_FAILURE, EXIT_OK};
use circle_geodesics::harness::{
    run_convergence_study, run_identity_suite, run_scenario, IdentitySuiteOptions, OperatorSpec, ScenarioConfig,
};
use circle_geodesics::Result;

#[derive(Parser)]
#[command(version, about = "Geodesics of right-invariant metrics on Diff(S¹)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write CSVs plus summary.json into output.dir.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override a config entry, e.g. `--set time.dt=5e-4`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Check the algebraic and group identities on random fields.
    Verify {
        #[arg(long)]
        n: usize,
        /// helmholtz | identity | sobolev:S | custom:PATH
        #[arg(long)]
        operator: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Negative control: negate a(K) in the operators under test.
        #[arg(long, value_name = "K")]
        corrupt_mode: Option<usize>,
        /// Use zero fields and identity maps.
        #[arg(long)]
        zero_fields: bool,
        /// Also write the report as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Temporal self-convergence study against the finest step.
    Converge {
        #[arg(long)]
        config: PathBuf,
        /// Strictly decreasing step sizes, e.g. `4e-3,2e-3,1e-3,5e-4,2.5e-4`.
        #[arg(long)]
        dts: String,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn load(config: &PathBuf, set: &[String]) -> Result<ScenarioConfig> {
    let overrides = set.iter().map(|s| parse_override(s)).collect::<Result<Vec<_>>>()?;
    ScenarioConfig::load(config, &overrides)
}

fn simulate(config: &PathBuf, set: &[String]) -> Result<i32> {
    let run = run_scenario(&load(config, set)?)?;
    let s = &run.summary;
    for (name, d) in [("eulerian", &s.drifts.eulerian), ("lagrangian", &s.drifts.lagrangian)] {
        if let Some(d) = d {
            println!(
                "{name}: t={} energy_drift={:.3e} momentum_drift={:.3e}{}",
                d.final_time,
                d.summary.energy_drift,
                d.summary.momentum_drift,
                d.breakdown_reason.as_ref().map(|r| format!(" breakdown: {r}")).unwrap_or_default()
            );
        }
    }
    if let Some(gap) = s.equivalence_gap {
        println!("equivalence_gap={gap:.3e}");
    }
    for f in &run.files {
        println!("wrote {}", f.display());
    }
    Ok(run.exit_code())
}

fn verify(opts: IdentitySuiteOptions, output: Option<PathBuf>) -> Result<i32> {
    let report = run_identity_suite(&opts);
    for line in report.lines() {
        println!("{line}");
    }
    if let Some(path) = output {
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_IDENTITY_FAILURE })
}

fn converge(config: &PathBuf, dts: &str, set: &[String]) -> Result<i32> {
    let cfg = load(config, set)?;
    let study = run_convergence_study(&cfg, &parse_dt_list(dts)?)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    for table in [&study.eulerian, &study.lagrangian].into_iter().flatten() {
        let path = cfg.output_dir.join(format!("converge_{}.csv", table.picture));
        let csv = table.to_csv();
        println!("{} (reference dt {})", table.picture, table.reference_dt);
        print!("{csv}");
        std::fs::write(&path, csv)?;
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate { config, set } => simulate(&config, &set),
        Command::Verify {
            n,
            operator,
            trials,
            seed,
            corrupt_mode,
            zero_fields,
            output,
        } => OperatorSpec::parse_cli(&operator)
            .and_then(|spec| spec.build(n))
            .and_then(|a| {
                let opts = IdentitySuiteOptions {
                    zero_fields,
                    corrupt_mode,
                    ..IdentitySuiteOptions::new(a, trials, seed)
                };
                verify(opts, output)
            }),
        Command::Converge { config, dts, set } => converge(&config, &dts, &set),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
