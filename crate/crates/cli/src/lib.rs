//! Command-line front end: configuration loading, subcommands and file output.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod reference;

use std::io::Write;

use clap::ValueEnum;

pub use commands::CliError;
pub use config::{load_config, parse_config, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Shape class of the potential and a sampled potential.csv
    Classify,
    /// Bound states from the parameter spectrum
    Pps,
    /// Bound states by Hamiltonian diagonalization
    Hd,
    /// Bound states and resonances by complex scaling
    Cs,
    /// Bound-state wavefunctions with a truncation-stability scan
    Wavefunction,
    /// Complex-scaling spectra along a V1 grid
    Sweep,
    /// Parameter curves u1(eps)
    Curves,
    #[value(name = "reproduce-table1")]
    ReproduceTable1,
    #[value(name = "reproduce-table2")]
    ReproduceTable2,
    #[value(name = "reproduce-table3")]
    ReproduceTable3,
}

impl Command {
    pub fn needs_config(&self) -> bool {
        !matches!(
            self,
            Command::ReproduceTable1 | Command::ReproduceTable2 | Command::ReproduceTable3
        )
    }
}

/// Run `cmd`, writing the report to `w`.
pub fn run_command(
    cmd: Command,
    cfg: Option<&RunConfig>,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    let need = || cfg.ok_or_else(|| CliError::Usage("this command needs --config".into()));
    match cmd {
        Command::Classify => commands::classify(need()?, w),
        Command::Pps => commands::pps(need()?, w),
        Command::Hd => commands::hd(need()?, w),
        Command::Cs => commands::cs(need()?, w),
        Command::Wavefunction => commands::wavefunction(need()?, w),
        Command::Sweep => commands::sweep(need()?, w),
        Command::Curves => commands::curves(need()?, w),
        Command::ReproduceTable1 => commands::reproduce_table1(w),
        Command::ReproduceTable2 => commands::reproduce_table2(w),
        Command::ReproduceTable3 => commands::reproduce_table3(w),
    }
}
