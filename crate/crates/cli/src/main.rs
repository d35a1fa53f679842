mod args;
mod commands;
mod output;

use clap::Parser;

use crate::args::Cli;

fn main() {
    // clap exits with status 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    if let Err(e) = commands::run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
