use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tra_spectrum_cli::{load_config, run_command, Command};

/// Bound states and resonances of the hyperbolic inverse-square potential family.
#[derive(Parser)]
#[command(name = "tra-spectrum", version, about)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON config: a file path or an inline document starting with `{`
    #[arg(short, long)]
    config: Option<String>,
    /// Output directory, overriding `out` in the config
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let cfg = match cli.config.as_deref().map(load_config).transpose() {
        Ok(cfg) => cfg.map(|mut c| {
            if let Some(out) = &cli.out {
                c.out = out.clone();
            }
            c
        }),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run_command(cli.command, cfg.as_ref(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
