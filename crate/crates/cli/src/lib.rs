//! Library half of the `ambx` binary: argument types, container format,
//! command implementations, and the self-check suite, kept in a lib so
//! integration tests can drive them without spawning processes.

pub mod cli;
pub mod commands;
pub mod container;
pub mod error;
pub mod rational;
pub mod simulate;
pub mod tables;
pub mod verify;

pub use cli::{Cli, Command};
pub use error::CliError;

/// Dispatches one parsed invocation.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::GenParams(args) => commands::cmd_gen_params(args),
        Command::Encode(args) => commands::cmd_encode(args),
        Command::Decode(args) => commands::cmd_decode(args),
        Command::Simulate(args) => simulate::cmd_simulate(args),
        Command::Bounds(args) => tables::cmd_bounds(args),
        Command::Verify(args) => verify::cmd_verify(args),
    }
}
