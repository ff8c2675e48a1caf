use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zmcrot::{cmd_export, cmd_gallery, cmd_integrate, cmd_verify, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "zmcrot", version, about = "Zero-mean-curvature rotational surfaces in E^4_2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check ZMC, Codazzi, first integral, frames and the FD oracle; exit 0 iff all pass
    Verify(Invocation),
    /// Verify every catalog surface and write reports, meshes and a summary table
    Gallery(Invocation),
    /// Integrate the ZMC profile equation and report closed-form membership
    Integrate(Invocation),
    /// Write the surface on a regular (u, v) grid as CSV, OBJ or JSON
    Export(Invocation),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct Invocation {
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(flatten)]
    run: RunConfig,
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let (inv, which) = match command {
        Command::Verify(i) => (i, 0),
        Command::Gallery(i) => (i, 1),
        Command::Integrate(i) => (i, 2),
        Command::Export(i) => (i, 3),
    };
    let cfg = RunConfig::load(inv.run, inv.config.as_deref())?;
    match which {
        0 => cmd_verify(&cfg, out).map(drop),
        1 => cmd_gallery(&cfg, out).map(drop),
        2 => cmd_integrate(&cfg, out).map(drop),
        _ => cmd_export(&cfg, out).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zmcrot: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
