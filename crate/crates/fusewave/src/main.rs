use clap::Parser;
use fusewave::cli::{self, Cli};

fn main() {
    let parsed = Cli::parse();
    if let Err(e) = cli::run(parsed) {
        eprintln!("error: {e}");
        std::process::exit(cli::exit_code(&e));
    }
}
