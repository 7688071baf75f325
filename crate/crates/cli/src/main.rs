use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lpst_cli::config::{parse_alpha, parse_list, Experiment, RunConfig};
use lpst_cli::error::CliError;
use lpst_core::io;

#[derive(Parser, Debug)]
#[command(name = "lpst", version, about = "Spectral triples on L^p spaces: experiments and checks")]
struct Cli {
    /// Run configuration file (TOML); flags given on the command line win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated exponents, e.g. `1,1.5,2`
    #[arg(long, global = true)]
    p: Option<String>,
    /// Acknowledge non-default resource caps
    #[arg(long, global = true)]
    cap_override: bool,
    #[arg(long, global = true)]
    ball_cap: Option<usize>,
    #[arg(long, global = true)]
    tower_cap: Option<usize>,
    /// Random starts for norm and metric searches
    #[arg(long, global = true)]
    starts: Option<usize>,
    #[arg(long, global = true)]
    iterations: Option<usize>,
    /// Worker threads (results do not depend on this)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified operator norm of a matrix file
    Norm {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Commutator estimates over growing balls of a group
    Group {
        /// z, zd:<d>, free:<k> or cyclic:<n>
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        coeffs: PathBuf,
    },
    /// UHF tower diagnostics
    Uhf {
        /// Comma-separated dimension profile starting with 1
        #[arg(long, required_unless_present = "spec")]
        dims: Option<String>,
        /// `auto` or a comma-separated list
        #[arg(long, default_value = "auto")]
        alpha: String,
        /// Spec file with dims, alpha and p
        #[arg(long, conflicts_with = "dims")]
        spec: Option<PathBuf>,
    },
    /// Spectral distance bounds between states
    Metric {
        #[arg(long)]
        dims: String,
        #[arg(long, default_value = "auto")]
        alpha: String,
        #[arg(long, num_args = 2.., required = true)]
        states: Vec<PathBuf>,
    },
    /// Invariant check suite
    Check {
        #[arg(long)]
        quick: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn experiment(cmd: Command, cfg_p: &mut Option<Vec<f64>>) -> Result<Experiment, CliError> {
    Ok(match cmd {
        Command::Norm { matrix } => Experiment::Norm { matrix },
        Command::Group {
            group,
            radius,
            coeffs,
        } => Experiment::Group {
            group,
            radius,
            coeffs,
        },
        Command::Uhf {
            spec: Some(path),
            ..
        } => {
            let file = io::parse_uhf_spec(&read(&path)?).map_err(|source| CliError::InFile {
                file: path.clone(),
                source,
            })?;
            if cfg_p.is_none() {
                *cfg_p = Some(file.p.iter().map(|p| p.value()).collect());
            }
            Experiment::Uhf {
                dims: file.spec.dims().to_vec(),
                alpha: file.alpha,
            }
        }
        Command::Uhf { dims, alpha, .. } => Experiment::Uhf {
            dims: parse_list(&dims.unwrap_or_default())?,
            alpha: parse_alpha(&alpha)?,
        },
        Command::Metric {
            dims,
            alpha,
            states,
        } => Experiment::Metric {
            dims: parse_list(&dims)?,
            alpha: parse_alpha(&alpha)?,
            states,
        },
        Command::Check { quick } => Experiment::Check { quick },
    })
}

fn build_config(cli: Cli) -> Result<RunConfig, CliError> {
    let mut p = cli.p.as_deref().map(parse_list).transpose()?;
    let mut cfg = match (&cli.config, cli.command) {
        (Some(path), cmd) => {
            let base = path.parent().filter(|b| !b.as_os_str().is_empty());
            let mut cfg = RunConfig::from_toml(&read(path)?, base)?;
            if let Some(cmd) = cmd {
                cfg.experiment = experiment(cmd, &mut p)?;
            }
            cfg
        }
        (None, Some(cmd)) => RunConfig::new(experiment(cmd, &mut p)?),
        (None, None) => {
            return Err(CliError::Config(
                "a subcommand or --config is required".into(),
            ))
        }
    };
    if let Some(p) = p {
        cfg.p = p;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.out {
        cfg.out = v;
    }
    cfg.cap_override |= cli.cap_override;
    if let Some(v) = cli.ball_cap {
        cfg.ball_cap = v;
    }
    if let Some(v) = cli.tower_cap {
        cfg.tower_cap = v;
    }
    if let Some(v) = cli.starts {
        cfg.starts = v;
    }
    if let Some(v) = cli.iterations {
        cfg.iterations = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool: {e}");
        }
    }
    let result = build_config(cli).and_then(|cfg| lpst_cli::run(&cfg));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let diag = serde_json::to_string_pretty(&e.diagnostic()).expect("json serializes");
            eprintln!("{diag}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
