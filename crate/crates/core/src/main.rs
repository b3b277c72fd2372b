use clap::Parser;

use descent_kit::cli::{main_with, Cli};

fn main() {
    std::process::exit(main_with(Cli::parse()));
}
