use clap::Parser;

use aspwb::cli::{execute, Cli};

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    std::process::exit(execute(cli));
}
